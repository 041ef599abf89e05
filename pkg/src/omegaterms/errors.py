"""Exception types shared across the package."""


class OmegaTermsError(Exception):
    pass


class ParseError(OmegaTermsError, ValueError):
    """Malformed textual input. ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class ResourceLimitError(OmegaTermsError):
    """A configured size or node budget was exceeded."""


class ValidationError(OmegaTermsError, ValueError):
    """A structure violates its invariants (e.g. a non-associative table)."""


class UnassignedLetterError(OmegaTermsError, KeyError):
    pass


class UnboundVariableError(OmegaTermsError, KeyError):
    """A formula mentions a free variable the valuation does not map."""

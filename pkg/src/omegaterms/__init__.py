"""Pi-term identities over finite aperiodic monoids, regular linear orders and word games."""
from .errors import (OmegaTermsError, ParseError, ResourceLimitError, UnassignedLetterError,
                     UnboundVariableError, ValidationError)
from .terms import Concat, Leaf, PiPower, concat, parse_term, pi, render_term
from .monoids import (FiniteMonoid, enumerate_monoids, eval_term, find_counterexample,
                      identity_holds, in_DA, is_aperiodic)
from .automata import Dfa, minimize, regex_to_dfa, syntactic_monoid, transition_monoid
from .orders import (canonical_form, decide_aperiodic_identity, invariants_of, iso,
                     parse_order, render_order, rho_expand)
from .logic import FragmentSpec, Valuation, models, parse_formula, parse_fragment, render_formula
from .games import (Configuration, distinguishing_formula, duplicator_preorder, equivalent,
                    spoiler_wins)

__version__ = "0.1.0"

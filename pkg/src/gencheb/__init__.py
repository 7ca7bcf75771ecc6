"""Orthogonal polynomials on several intervals.

The functional modules (``intervals``, ``quadrature``, ``recurrence``,
``elliptic``, ``auxpoly``, ``chebyshev``, ``mapping``, ``zeros``) hold the
numerics; :class:`GeneralizedChebyshev` wraps them as a scikit-learn
transformer and :mod:`gencheb.cli` exposes them on the command line.
"""

from .auxpoly import AuxCache, AuxPair, closed_form_aux, solve_aux
from .chebyshev import discriminant, envelope, evaluate_pair, evaluate_product
from .errors import GenChebError
from .estimator import GeneralizedChebyshev
from .intervals import BranchConfig, reflect_config, validate_config
from .mapping import build_mapping, detect_period, equilibrium_charges, periodic_family
from .recurrence import RecurrenceTable, stieltjes_table
from .verify import Verifier
from .zeros import roots_of_Pn, roots_of_Qn

__version__ = "0.1.0"

__all__ = [
    "AuxCache",
    "AuxPair",
    "BranchConfig",
    "GenChebError",
    "GeneralizedChebyshev",
    "RecurrenceTable",
    "Verifier",
    "build_mapping",
    "closed_form_aux",
    "detect_period",
    "discriminant",
    "envelope",
    "equilibrium_charges",
    "evaluate_pair",
    "evaluate_product",
    "periodic_family",
    "reflect_config",
    "roots_of_Pn",
    "roots_of_Qn",
    "solve_aux",
    "stieltjes_table",
    "validate_config",
]

"""Generalized nested-radical Pi-function.

``Pi_i(x) = (2x)**((i+1)/2) * sqrt(x - h_i)`` with ``h_i = sqrt(x(x-1) + h_{i-1})``
and ``h_0 = 0``; at x = 2 the limit is pi.
"""

from .analysis import (
    IdentityReport,
    LimitPolicy,
    MinimumResult,
    asympt_linear,
    asympt_sqrt,
    check_doubling,
    check_h_reflection,
    check_pi_reflection,
    find_minimum,
    machin_pi_digits,
    pi_limit,
    ratio_convergence,
    viete_pi_digits,
)
from .backends import DOUBLE, BigFixedBackend, DoubleBackend
from .bigfixed import BigFixed, PrecisionPlan, plan_precision
from .errors import DomainError, NonConvergence, ParseError
from .radical_core import (
    PiEstimate,
    RadicalState,
    advance,
    h_step,
    initial_state,
    pi_diff_estimate,
    pi_value,
    residual_step,
)

__version__ = "0.1.0"

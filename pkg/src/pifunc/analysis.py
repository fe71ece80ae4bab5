"""Limits, identity checks, asymptotics and the minimum of pi_x.

Also hosts an independent pi oracle (Machin's arctangent formula) used to
validate digits produced by the nested radical at x = 2.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from .backends import DOUBLE, BigFixedBackend, as_fraction
from .bigfixed import BigFixed, GUARD_BITS, LOG2_10, bf_to_decimal, plan_precision
from .errors import DomainError, NonConvergence
from .radical_core import PiEstimate, advance, h_step, initial_state

__all__ = [
    "LimitPolicy",
    "IdentityReport",
    "MinimumResult",
    "pi_limit",
    "ratio_convergence",
    "check_doubling",
    "check_h_reflection",
    "check_pi_reflection",
    "ulp_distance",
    "asympt_sqrt",
    "asympt_linear",
    "golden_section",
    "find_minimum",
    "machin_pi",
    "machin_pi_digits",
    "viete_pi_digits",
    "matching_digits",
    "TABLE_ONE",
    "IDENTITY_THRESHOLDS",
    "verify_identities",
]

# (x, Pi_50(x)) as published, 8 significant digits
TABLE_ONE = (
    (1.001, 3.7033451),
    (1.5, 2.5351046),
    (2.0, 3.1415927),
    (2.5, 3.8084662),
    (3.0, 4.4937674),
    (4.0, 5.8848462),
    (5.0, 7.2869301),
    (7.0, 10.102809),
    (8.0, 11.513355),
    (20.0, 28.469656),
)

MIN_BRACKET = (1.001, 2.0)
MIN_XTOL = 1e-7


@dataclass(frozen=True)
class LimitPolicy:
    rel_tol: Any = 1e-15
    max_iterations: int = 10_000
    backend: Any = field(default=DOUBLE)

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def pi_limit(x, policy: LimitPolicy | None = None) -> PiEstimate:
    """Iterate until the geometric tail of the remaining growth is below rel_tol.

    Past the first few nestings each step's relative gain shrinks by about
    r = 1/(2x), so the gains still to come sum to roughly gain * r/(1 - r)
    = gain/(2x - 1).  The reported bound doubles that and adds the
    backend's accumulated rounding.
    """
    policy = policy or LimitPolicy()
    b = policy.backend
    state = initial_state(x, b)
    xv = state.x
    tol = b.num(policy.rel_tol)
    tail_factor = 1 / (2 * xv - 1)
    while state.depth < policy.max_iterations:
        state = advance(state)
        tail = state.gain * tail_factor
        if tail <= tol:
            bound = 2 * state.scale * tail + b.rounding_error(state.scale, state.residual, state.depth)
            return PiEstimate(xv, state.depth, state.scale, bound, True)
    est = PiEstimate(xv, state.depth, state.scale, math.inf, False)
    raise NonConvergence(
        f"pi_x at x = {float(xv)} not within {float(tol):.3g} after {state.depth} iterations", est
    )


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    x: float
    depth: int
    lhs: float
    rhs: float
    rel_residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def _report(tag, x, depth, lhs, rhs) -> IdentityReport:
    a, c = as_fraction(lhs), as_fraction(rhs)
    scale = max(abs(a), abs(c), Fraction(1, 10**300))
    return IdentityReport(tag, float(x), depth, float(lhs), float(rhs), float(abs(a - c) / scale))


def ulp_distance(report: IdentityReport) -> float:
    """|lhs - rhs| in units of the last place of the larger side."""
    m = max(abs(report.lhs), abs(report.rhs))
    return abs(report.lhs - report.rhs) / math.ulp(m) if m else 0.0


def _pair(x, i, backend):
    if i < 0:
        raise ValueError("depth must be non-negative")
    s = initial_state(x, backend)
    for _ in range(i):
        s = advance(s)
    return s, advance(s)


def ratio_convergence(x, i: int, backend=DOUBLE) -> IdentityReport:
    """sqrt((x - h_i)/(x - h_{i+1})) against its large-depth limit sqrt(2x)."""
    s, t = _pair(x, i, backend)
    lhs = backend.sqrt(s.residual / t.residual)
    return _report("ratio", x, i, lhs, backend.sqrt(2 * s.x))


def check_doubling(x, i: int, backend=DOUBLE) -> IdentityReport:
    """Pi_{i+1}^2 against 2x Pi_i^2 + (2x)^(i+2) (h_i - h_{i+1})."""
    s, t = _pair(x, i, backend)
    two_x = 2 * s.x
    lhs = t.scale * t.scale
    rhs = two_x * s.scale * s.scale + backend.power(two_x, i + 2) * (t.residual - s.residual)
    return _report("doubling", x, i, lhs, rhs)


def check_h_reflection(x, i: int, backend=DOUBLE) -> IdentityReport:
    """h_i(x) against h_i(1 - x); both come from the literal recurrence."""
    if i < 0:
        raise ValueError("depth must be non-negative")
    xv = backend.num(x)
    y = 1 - xv
    h_x = h_y = backend.num(0)
    for _ in range(i):
        h_x = h_step(xv, h_x, backend)
        h_y = h_step(y, h_y, backend)
    if i == 0 and xv * (xv - 1) < 0:
        raise DomainError(f"negative radicand at x = {float(xv)}")
    return _report("h-reflection", x, i, h_x, h_y)


def check_pi_reflection(x, i: int, backend=DOUBLE) -> IdentityReport:
    """Squared Pi-function at 1 - x against its expression through Pi_i(x).

    Only squares are formed: (2(1-x))^(i+1) ((1-x) - h_i) is real even though
    its square root is not.
    """
    s, _ = _pair(x, i, backend)
    xv = s.x
    y = 1 - xv
    n = i + 1
    h = xv - s.residual
    lhs = backend.power(2 * y, n) * (y - h)
    rhs = (
        backend.power(1 / xv - 1, n) * s.scale * s.scale
        - backend.power(backend.num(2), n) * backend.power(y, n) * (2 * xv - 1)
    )
    return _report("pi-reflection", x, i, lhs, rhs)


def asympt_sqrt(x: float) -> float:
    """Large-x form x*sqrt((4x - 1)/(2x - 1)) of the difference estimate."""
    if not x > 0.5:
        raise DomainError("asympt_sqrt needs x > 1/2")
    return x * math.sqrt((4 * x - 1) / (2 * x - 1))


def asympt_linear(x: float) -> float:
    if not x > 0:
        raise DomainError("asympt_linear needs x > 0")
    return math.sqrt(2) * x * (1 + 1 / (8 * x))


@dataclass(frozen=True)
class MinimumResult:
    x_star: float
    value: float
    bracket: tuple
    evaluations: int


INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f, lo: float, hi: float, xtol: float = 1e-8, max_iter: int = 500):
    """Minimize a unimodal f on [lo, hi].

    Returns (x, f(x), (a, b), evaluations) where (a, b) is the final bracket.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    if fc <= fd:
        return c, fc, (a, b), evals
    return d, fd, (a, b), evals


def find_minimum(policy: LimitPolicy | None = None) -> MinimumResult:
    """Minimum of x -> pi_x over [1.001, 2] by golden-section search."""
    policy = policy or LimitPolicy()
    conv = policy.backend.to_float

    def f(x):
        return conv(pi_limit(x, policy).value)

    x_star, value, bracket, evals = golden_section(f, *MIN_BRACKET, xtol=MIN_XTOL)
    return MinimumResult(x_star, value, bracket, evals)


def _arctan_inv(k: int, frac_bits: int, terms: int) -> BigFixed:
    # arctan(1/k) = sum_j (-1)^j / ((2j + 1) k^(2j+1))
    power = BigFixed(1 << frac_bits, frac_bits) / k
    k2 = k * k
    total = power
    for j in range(1, terms):
        power = power / k2
        term = power / (2 * j + 1)
        total = total - term if j % 2 else total + term
    return total


def _machin_terms(k: int, digits: int) -> int:
    # tail < k^-(2m+1); 16x amplification on the 1/5 series
    return math.ceil(((digits + 5) / math.log10(k) + math.log(16, k) - 1) / 2) + 1


def machin_pi(digits: int) -> BigFixed:
    """pi = 16 arctan(1/5) - 4 arctan(1/239), good to well past ``digits`` places."""
    frac_bits = math.ceil((digits + 5) * LOG2_10) + GUARD_BITS
    a = _arctan_inv(5, frac_bits, _machin_terms(5, digits))
    b = _arctan_inv(239, frac_bits, _machin_terms(239, digits))
    return 16 * a - 4 * b


def machin_pi_digits(n: int) -> str:
    """First n digits of pi, truncated.

    >>> machin_pi_digits(10)
    '3.141592653'
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return bf_to_decimal(machin_pi(n), n)


def viete_pi(digits: int) -> PiEstimate:
    """pi_2 in fixed point, sized so ``digits`` digits are meaningful."""
    plan = plan_precision(2, digits)
    policy = LimitPolicy(
        rel_tol=Fraction(1, 10 ** (digits + 2)),
        max_iterations=2 * plan.iterations + 64,
        backend=BigFixedBackend(plan.frac_bits),
    )
    return pi_limit(2, policy)


def viete_pi_digits(n: int) -> str:
    if n < 1:
        raise ValueError("n must be >= 1")
    return bf_to_decimal(viete_pi(n).value, n)


def matching_digits(a: str, b: str) -> int:
    """Number of leading decimal digits two renderings share."""
    da = a.lstrip("-").replace(".", "")
    db = b.lstrip("-").replace(".", "")
    n = 0
    for p, q in zip(da, db):
        if p != q:
            break
        n += 1
    return n


# identity -> (metric, threshold); "ulp" compares in units of the last place
IDENTITY_THRESHOLDS = {
    "doubling": ("rel", 1e-12),
    "ratio": ("abs", 1e-6),
    "h-reflection": ("ulp", 4.0),
    "pi-reflection": ("rel", 1e-10),
}

_SUITE_GRID = {
    "ratio": ((1.5, 2.0, 3.0, 20.0), (40,)),
    "h-reflection": ((1.5, 2.0, 3.0, 10.0), tuple(range(21))),
    "pi-reflection": ((1.5, 2.0, 3.0), tuple(range(31))),
}

_CHECKS = {
    "doubling": check_doubling,
    "ratio": ratio_convergence,
    "h-reflection": check_h_reflection,
    "pi-reflection": check_pi_reflection,
}


def _judge(report: IdentityReport) -> dict:
    metric, threshold = IDENTITY_THRESHOLDS[report.identity]
    if metric == "rel":
        err = report.rel_residual
    elif metric == "abs":
        err = abs(report.lhs - report.rhs)
    else:
        err = ulp_distance(report)
    out = report.as_dict()
    out.update(metric=metric, error=err, threshold=threshold, passed=err <= threshold)
    return out


def verify_identities(only=None, x=None, i=None, seed=0, samples=100, max_depth=40) -> list:
    """Run the identity checks and judge each against its threshold.

    Doubling is checked at ``samples`` seeded random points with x in (1, 10]
    and depth up to ``max_depth``; the others on fixed grids.  ``x`` and ``i``
    pin the argument and depth.
    """
    tags = [only] if only else list(_CHECKS)
    results = []
    for tag in tags:
        if tag not in _CHECKS:
            raise ValueError(f"unknown identity {tag!r}")
        if tag == "doubling" and x is None and i is None:
            rng = random.Random(seed)
            points = [(10.0 - 9.0 * rng.random(), rng.randint(0, max_depth)) for _ in range(samples)]
        else:
            xs, depths = _SUITE_GRID.get(tag, ((1.5, 2.0, 5.0), (0, 10, 30)))
            xs = (x,) if x is not None else xs
            depths = (i,) if i is not None else depths
            points = [(a, d) for a in xs for d in depths]
        results.extend(_judge(_CHECKS[tag](a, d)) for a, d in points)
    return results

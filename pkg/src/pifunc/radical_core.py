"""Nested-radical recurrence for the generalized Pi-function.

For an argument x the radicals are

    h_0 = 0,    h_i = sqrt(x*(x - 1) + h_{i-1})

and the Pi-function at depth i is ``(2x)**((i+1)/2) * sqrt(x - h_i)``.  At
x = 2 this is Viete's nested radical for pi.

``x - h_i`` shrinks like ``(2x)**-i``, so computing it literally loses every
significant digit after a couple of dozen nestings in double precision.  The
public estimators carry the residual ``eps_i = x - h_i`` instead, using

    eps_i = eps_{i-1} / (x + h_i),    h_i = sqrt(x*(x - 1) + (x - eps_{i-1})),    eps_0 = x

which involves no subtraction of nearly equal numbers.  The power of 2x is
never formed either: the running value is multiplied by
``sqrt(2x * eps_i / eps_{i-1})`` at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator

from .backends import DOUBLE
from .errors import DomainError

__all__ = [
    "RadicalState",
    "PiEstimate",
    "h_step",
    "residual_step",
    "initial_state",
    "advance",
    "orbit",
    "pi_value",
    "pi_diff_estimate",
    "literal_radicals",
]


@dataclass(frozen=True)
class RadicalState:
    """One point of the iteration.

    ``residual`` is x - h_depth and ``scale`` is the Pi-function value at this
    depth.  ``gain`` is the relative increase of ``scale`` produced by the
    advance that led here (zero at depth 0).
    """

    x: Any
    depth: int
    residual: Any
    scale: Any
    gain: Any = 0
    backend: Any = field(default=DOUBLE, compare=False, repr=False)

    @property
    def h(self):
        return self.x - self.residual


@dataclass(frozen=True)
class PiEstimate:
    x: Any
    iterations: int
    value: Any
    error_bound: Any
    converged: bool


def _require_convergent(x, backend):
    xv = backend.num(x)
    if not xv > 1:
        raise DomainError(
            f"x = {x} is outside the real convergence domain x > 1"
            + (" (at x = 1 the radicals vanish and the value doubles without bound)" if xv == 1 else "")
        )
    return xv


def h_step(x, h_prev, backend=DOUBLE):
    """One literal nesting: sqrt(x*(x - 1) + h_prev)."""
    x = backend.num(x)
    radicand = x * (x - 1) + backend.num(h_prev)
    if radicand < 0:
        raise DomainError(f"negative radicand {float(radicand):.6g} at x = {float(x)}")
    return backend.sqrt(radicand)


def literal_radicals(x, depth: int, backend=DOUBLE) -> list:
    """[h_0, ..., h_depth] by the literal recurrence.  Test oracle only."""
    hs = [backend.num(0)]
    for _ in range(depth):
        hs.append(h_step(x, hs[-1], backend))
    return hs


def _nest(x, eps, backend):
    # returns (eps_next, x + h_next); x*x - eps is regrouped as x*(x - 1) + h_prev
    # so both terms are non-negative, even for x close to 1
    denom = x + backend.sqrt(x * (x - 1) + (x - eps))
    return eps / denom, denom


def residual_step(x, eps_prev, backend=DOUBLE):
    """x - h_next from x - h_prev without cancellation."""
    x = _require_convergent(x, backend)
    eps_prev = backend.num(eps_prev)
    if eps_prev < 0 or eps_prev > x:
        raise DomainError(f"residual {float(eps_prev)} outside [0, x]")
    return _nest(x, eps_prev, backend)[0]


def initial_state(x, backend=DOUBLE) -> RadicalState:
    """Depth-0 state: h_0 = 0, so the residual is x and the value sqrt(2x*x)."""
    xv = _require_convergent(x, backend)
    two_x_sq = backend.num(2 * xv * xv)
    return RadicalState(xv, 0, xv, backend.sqrt(two_x_sq), backend.num(0), backend)


def advance(state: RadicalState) -> RadicalState:
    """One more nesting."""
    b = state.backend
    x = state.x
    eps, denom = _nest(x, state.residual, b)
    # 2x * eps/eps_prev - 1 == (x - h)/(x + h) == eps/denom; the square
    # root's excess over one is then formed without cancellation
    d = eps / denom
    gain = d / (1 + b.sqrt(1 + d))
    return RadicalState(x, state.depth + 1, eps, state.scale + state.scale * gain, gain, b)


def orbit(x, backend=DOUBLE) -> Iterator[RadicalState]:
    """States at depth 0, 1, 2, ... (unbounded)."""
    state = initial_state(x, backend)
    while True:
        yield state
        state = advance(state)


def _state_at(x, i: int, backend) -> RadicalState:
    if i < 0:
        raise ValueError("depth must be non-negative")
    state = initial_state(x, backend)
    for _ in range(i):
        state = advance(state)
    return state


def pi_value(x, i: int, backend=DOUBLE):
    """Pi-function of ``x`` at nesting depth ``i``.

    >>> round(pi_value(2, 50), 7)
    3.1415927
    """
    return _state_at(x, i, backend).scale


def diff_estimate_from(state: RadicalState):
    """Difference-form limit estimate built from the state at depth i.

    (2x)**((i+2)/2) * sqrt((h_{i+1} - h_i) / (2x - 1)) equals
    Pi_i * sqrt(2x * (x + h_{i+1} - 1) / ((x + h_{i+1}) * (2x - 1))).
    """
    b, x = state.backend, state.x
    _, denom = _nest(x, state.residual, b)
    two_x = 2 * x
    return state.scale * b.sqrt(two_x * (denom - 1) / (denom * (two_x - 1)))


def pi_diff_estimate(x, i: int, backend=DOUBLE):
    """Limit estimate from consecutive radicals h_i and h_{i+1}."""
    return diff_estimate_from(_state_at(x, i, backend))

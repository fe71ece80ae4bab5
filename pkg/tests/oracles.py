"""Independent reference computations.

Everything here uses mpmath at high working precision and the *literal*
recurrence ``h_i = sqrt(x(x-1) + h_{i-1})``, so it shares no code path with
the residual form used by the package.
"""

from mpmath import mp, mpf, sqrt

WORKING_DPS = 250


def literal_pi(x, i, dps=WORKING_DPS):
    """(2x)^((i+1)/2) * sqrt(x - h_i) with enough digits to survive the cancellation."""
    with mp.workdps(dps):
        x = mpf(x)
        h = mpf(0)
        c = x * (x - 1)
        for _ in range(i):
            h = sqrt(c + h)
        return (2 * x) ** (mpf(i + 1) / 2) * sqrt(x - h)


def literal_h(x, i, dps=WORKING_DPS):
    with mp.workdps(dps):
        x = mpf(x)
        h = mpf(0)
        for _ in range(i):
            h = sqrt(x * (x - 1) + h)
        return h


def pi_x(x, dps=60):
    """The limit, by running the literal recurrence far past convergence."""
    with mp.workdps(dps):
        depth = int(2 * dps * 3.33 / float(mp.log(2 * mpf(x), 2))) + 10
    return literal_pi(x, depth, dps=dps + int(depth * float(mp.log10(2 * mpf(x)))) + 10)


def pi_digits(n):
    """First n digits of pi from mpmath's own constant, truncated."""
    with mp.workdps(n + 20):
        s = mp.nstr(+mp.pi, n + 10, strip_zeros=False)
    return s[: n + 1] if n > 1 else s[0]

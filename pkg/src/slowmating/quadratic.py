"""Helpers for quadratic polynomials z^2 + c: critical orbits, fixed
points, and Newton refinement of postcritically finite parameters."""

from __future__ import annotations

import cmath


def orbit_preperiod(k):
    """Preperiod of the critical point's orbit from the angle preperiod k.

    The angle theta_{k+1} is the first periodic one, so f^{k+1}(0) is the
    first on-cycle orbit point; for a periodic angle the critical point
    itself is on the cycle.
    """
    return 0 if k == 0 else k + 1


def critical_orbit(c, length):
    """[f(0), f^2(0), ..., f^length(0)] for f = z^2 + c."""
    out = []
    z = 0j
    for _ in range(length):
        z = z * z + c
        out.append(z)
    return out


def _orbit_with_derivative(c, length):
    """Forward orbit of 0 and its derivative with respect to c."""
    z = 0j
    dz = 0j
    values = []
    derivs = []
    for _ in range(length):
        z, dz = z * z + c, 2 * z * dz + 1
        values.append(z)
        derivs.append(dz)
    return values, derivs


def orbit_residual(c, k, p):
    """|f^{kk+p}(0) - f^{kk}(0)| with kk the critical point's orbit
    preperiod derived from the angle preperiod k."""
    kk = orbit_preperiod(k)
    seq = critical_orbit(c, kk + p)
    tail = seq[kk + p - 1]
    head = seq[kk - 1] if kk > 0 else 0j
    return abs(tail - head)


def newton_polish(c, k, p, steps=60, tol=1e-14):
    """Refine c toward f^{kk+p}(0) = f^{kk}(0) (the center equation
    f^p(0) = 0 when k = 0) by Newton's method with the orbit derivative
    accumulated forward.  Returns the refined parameter, or the input
    unchanged if the iteration leaves its basin."""
    kk = orbit_preperiod(k)
    c = complex(c)
    best = c
    best_res = orbit_residual(c, k, p)
    current = c
    for _ in range(steps):
        values, derivs = _orbit_with_derivative(current, kk + p)
        tail, dtail = values[-1], derivs[-1]
        if kk > 0:
            head, dhead = values[kk - 1], derivs[kk - 1]
        else:
            head, dhead = 0j, 0j
        g = tail - head
        dg = dtail - dhead
        if dg == 0:
            break
        step = g / dg
        current = current - step
        res = orbit_residual(current, k, p)
        if res < best_res:
            best, best_res = current, res
        if abs(step) < tol:
            break
    return best


def _point_orbit_with_derivative(c, z, length):
    """Forward orbit of z and the derivative of f^k with respect to z."""
    w = complex(z)
    dw = 1 + 0j
    values = []
    derivs = []
    for _ in range(length):
        dw = 2 * w * dw
        w = w * w + c
        values.append(w)
        derivs.append(dw)
    return values, derivs


def preperiodic_residual(c, z, preperiod, period):
    """|f^{preperiod+period}(z) - f^{preperiod}(z)| for f = z^2 + c."""
    values, _ = _point_orbit_with_derivative(c, z, preperiod + period)
    head = values[preperiod - 1] if preperiod > 0 else complex(z)
    return abs(values[-1] - head)


def polish_preperiodic(c, z, preperiod, period, steps=40, tol=1e-13):
    """Refine z toward f^{preperiod+period}(z) = f^{preperiod}(z) by
    Newton's method in the dynamical plane.  Returns the refined point,
    or the input unchanged if no iterate improves the residual."""
    c = complex(c)
    best = complex(z)
    best_res = preperiodic_residual(c, best, preperiod, period)
    current = best
    for _ in range(steps):
        values, derivs = _point_orbit_with_derivative(c, current, preperiod + period)
        if preperiod > 0:
            g = values[-1] - values[preperiod - 1]
            dg = derivs[-1] - derivs[preperiod - 1]
        else:
            g = values[-1] - current
            dg = derivs[-1] - 1
        if dg == 0:
            break
        step = g / dg
        current = current - step
        res = preperiodic_residual(c, current, preperiod, period)
        if res < best_res:
            best, best_res = current, res
        if abs(step) < tol:
            break
    return best


def beta_fixed(c):
    """The fixed point where the angle-0 ray lands: (1 + sqrt(1-4c)) / 2."""
    return (1 + cmath.sqrt(1 - 4 * c)) / 2


def alpha_fixed(c):
    """The other fixed point, (1 - sqrt(1-4c)) / 2."""
    return (1 - cmath.sqrt(1 - 4 * c)) / 2

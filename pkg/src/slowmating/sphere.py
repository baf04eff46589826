"""Riemann sphere primitives: chordal metric, Moebius maps, bicritical maps,
and the branch-continuous root extraction used by path pullbacks.

Points are plain Python ``complex`` values plus the explicit singleton
``INF`` for the point at infinity.  Keeping infinity symbolic (instead of a
large float) lets pinned coordinates and exact-zero radicands stay exact
across thousands of pullback steps.
"""

from __future__ import annotations

import cmath
import math

DEGENERATE_TOL = 1e-12   # pin triple counts as collapsed below this
BRANCH_RHO = 0.75        # ambiguity ratio above which a branch choice fails


class _Infinity:
    """The point at infinity.  Use the module singleton ``INF``."""

    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _Infinity()

# A point on the sphere is ``complex`` or ``INF``.
Point = "complex | _Infinity"


def as_point(z):
    """Coerce a number to a sphere point, mapping float infinities to INF."""
    if z is INF:
        return INF
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return INF
    if math.isnan(z.real) or math.isnan(z.imag):
        raise ValueError("nan is not a point on the sphere")
    return z


def is_same_point(z, w):
    """Exact identity of two sphere points (no tolerance)."""
    if z is INF or w is INF:
        return z is INF and w is INF
    return z == w


def sph_dist(z, w):
    """Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), at most 2.

    Extended to INF by the limit 2 / sqrt(1+|w|^2).  For two large points
    the identity d(z,w) = d(1/z,1/w) is used so no intermediate overflows.
    """
    if z is INF:
        if w is INF:
            return 0.0
        return 2.0 / math.hypot(1.0, abs(w))
    if w is INF:
        return 2.0 / math.hypot(1.0, abs(z))
    az = abs(z)
    aw = abs(w)
    if az > 2.0 and aw > 2.0:
        z, w = 1.0 / z, 1.0 / w
        az, aw = 1.0 / az, 1.0 / aw
    return 2.0 * abs(z - w) / (math.hypot(1.0, az) * math.hypot(1.0, aw))


def _embed(z):
    """Unit-sphere embedding of a chart point with |z| <= 1e100."""
    n = abs(z) ** 2
    d = n + 1.0
    return (2.0 * z.real / d, 2.0 * z.imag / d, (n - 1.0) / d)


def _project(mx, my, mz):
    d = 1.0 - mz
    if d < 1e-300:
        return INF
    return complex(mx / d, my / d)


def _mid3d(z, w):
    px, py, pz = (0.0, 0.0, 1.0) if z is INF else _embed(z)
    qx, qy, qz = (0.0, 0.0, 1.0) if w is INF else _embed(w)
    sx, sy, sz = px + qx, py + qy, pz + qz
    norm = math.sqrt(sx * sx + sy * sy + sz * sz)
    if norm < 1e-10:
        raise ValueError("midpoint of antipodal points is ill-defined")
    return _project(sx / norm, sy / norm, sz / norm)


def sph_midpoint(z, w):
    """Geodesic midpoint on the sphere, exact at coincident points.

    The 3-space computation runs in whichever chart keeps both points in
    the closed unit disk, so there is no loss of direction near INF; the
    two charts agree because z -> 1/z is a spherical isometry.
    """
    if z is w or z == w:
        return z
    az = math.inf if z is INF else abs(z)
    aw = math.inf if w is INF else abs(w)
    if az >= 1.0 and aw >= 1.0:
        rz = 0j if z is INF else 1 / z
        rw = 0j if w is INF else 1 / w
        mid = _mid3d(rz, rw)
        if mid == 0:
            return INF
        return INF if mid is INF else 1 / mid
    if az > 1e100:
        z = INF
    if aw > 1e100:
        w = INF
    return _mid3d(z, w)


class DegenerateTriple(ValueError):
    """Raised when three pin values are not pairwise distinct on the sphere."""


class BranchAmbiguity(ArithmeticError):
    """Raised when no root branch is clearly nearest the previous sample."""

    def __init__(self, ambiguity, prev, roots):
        super().__init__(
            "branch choice ambiguous (ratio %.3f > %.3f)" % (ambiguity, BRANCH_RHO)
        )
        self.ambiguity = ambiguity
        self.prev = prev
        self.roots = roots


def _div(num, den):
    if den == 0:
        return INF
    return num / den


class MobiusMap:
    """z -> (a z + b) / (c z + d) with a d - b c != 0."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = complex(a)
        self.b = complex(b)
        self.c = complex(c)
        self.d = complex(d)

    def __repr__(self):
        return "MobiusMap(%r, %r, %r, %r)" % (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        if z is INF:
            if self.c == 0:
                return INF
            return self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den == 0:
            return INF
        return num / den

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def normalized(self):
        """Scale coefficients so the largest modulus is 1 and its phase is 0."""
        coeffs = (self.a, self.b, self.c, self.d)
        pivot = max(coeffs, key=abs)
        if pivot == 0:
            raise ValueError("zero Moebius map")
        return MobiusMap(*(x / pivot for x in coeffs))

    def coefficients(self):
        return (self.a, self.b, self.c, self.d)


def mobius_from_three(x_alpha, x_beta, x_gamma):
    """Moebius map m with m(INF) = x_alpha, m(0) = x_beta, m(1) = x_gamma.

    The three values must be pairwise distinct on the sphere (chordal
    distance above ``DEGENERATE_TOL``); otherwise DegenerateTriple.
    """
    pairs = (
        (x_alpha, x_beta),
        (x_alpha, x_gamma),
        (x_beta, x_gamma),
    )
    for z, w in pairs:
        if sph_dist(z, w) <= DEGENERATE_TOL:
            raise DegenerateTriple(
                "pin values too close: %r, %r, %r" % (x_alpha, x_beta, x_gamma)
            )
    a, b, c = x_alpha, x_beta, x_gamma
    if a is INF:
        # m(w) = (c - b) w + b
        return MobiusMap(c - b, b, 0.0, 1.0)
    if b is INF:
        # m(w) = (a w + (c - a)) / w
        return MobiusMap(a, c - a, 1.0, 0.0)
    if c is INF:
        # m(w) = (a w - b) / (w - 1)
        return MobiusMap(a, -b, 1.0, -1.0)
    return MobiusMap(a * (c - b), b * (a - c), c - b, a - c)


class BicriticalMap:
    """f(z) = m(z^d): a degree-d rational map critically pinned at 0 and INF."""

    __slots__ = ("m", "d")

    def __init__(self, m, d=2):
        if d < 2:
            raise ValueError("degree must be at least 2")
        self.m = m
        self.d = int(d)

    def __repr__(self):
        return "BicriticalMap(%r, d=%d)" % (self.m, self.d)

    def __call__(self, z):
        if z is INF:
            return self.m(INF)
        return self.m(z**self.d)

    def critical_values(self):
        """(f(0), f(INF))."""
        return (self.m(0j), self.m(INF))


def pullback_radicand(x_alpha, x_beta, x_gamma, target):
    """m^{-1}(target) for the Moebius part pinned by
    m(INF) = x_alpha, m(0) = x_beta, m(1) = x_gamma.

    Cross-ratio form ((x_gamma - x_alpha)/(target - x_alpha)) *
    ((target - x_beta)/(x_gamma - x_beta)), with factors containing an
    infinite entry cancelled.  A target identical to x_beta or x_alpha
    gives exactly 0 or INF, which the root extraction keeps exact.
    """
    if is_same_point(target, x_beta):
        return 0j
    if is_same_point(target, x_alpha):
        return INF
    if target is INF:
        if x_gamma is INF:
            return 1 + 0j
        return _div(x_gamma - x_alpha, x_gamma - x_beta)
    if x_alpha is INF:
        return _div(target - x_beta, x_gamma - x_beta)
    if x_beta is INF:
        return _div(x_gamma - x_alpha, target - x_alpha)
    if x_gamma is INF:
        return _div(target - x_beta, target - x_alpha)
    left = _div(x_gamma - x_alpha, target - x_alpha)
    right = _div(target - x_beta, x_gamma - x_beta)
    if left is INF or right is INF:
        return INF
    return left * right


def _principal_root(radicand, d):
    if d == 2:
        return cmath.sqrt(radicand)
    return cmath.exp(cmath.log(radicand) / d)


def continuous_root(prev, radicand, d=2, rho=BRANCH_RHO):
    """d-th root of ``radicand`` on the branch nearest ``prev``.

    Returns ``(root, ambiguity)`` where ambiguity is the ratio of the
    chordal distance to the chosen branch over the distance to the nearest
    rejected branch (0 = unambiguous).  Raises BranchAmbiguity when the
    ratio exceeds ``rho``.  Exact 0 / INF radicands return 0 / INF with
    ambiguity 0, keeping pinned and centered coordinates exact.
    """
    if radicand is INF:
        return INF, 0.0
    if radicand == 0:
        return 0j, 0.0
    base = _principal_root(radicand, d)
    if d == 2:
        roots = (base, -base)
    else:
        roots = tuple(
            base * cmath.exp(2j * cmath.pi * k / d) for k in range(d)
        )
    best = None
    best_dist = second = math.inf
    for r in roots:
        dist = sph_dist(prev, r)
        if dist < best_dist:
            best, best_dist, second = r, dist, best_dist
        elif dist < second:
            second = dist
    if second == 0.0:
        ambiguity = 1.0
    elif math.isinf(second):
        ambiguity = 0.0
    else:
        ambiguity = best_dist / second
    if ambiguity > rho:
        raise BranchAmbiguity(ambiguity, prev, roots)
    return best, ambiguity

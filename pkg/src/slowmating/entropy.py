"""Transition matrices for tree dynamics and their growth rates.

Two kinds of matrix live here: explicit nonnegative integer matrices
supplied by the caller, and matrices generated from a rational angle by
the pair-transition construction (unordered pairs of doubling-orbit
angles, split along the critical leaf).  The growth rate of either is
its Perron root, found by power iteration with an exact
characteristic-polynomial fallback for small matrices.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .angles import angle_orbit, double, norm_angle

MAX_POWER_ITER = 100_000
EIG_TOL = 1e-8
CHARPOLY_LIMIT = 12


class NonConvergent(ArithmeticError):
    """Power iteration missed the residual target and no exact fallback
    applies."""


@dataclass(frozen=True)
class NonnegIntMatrix:
    """Square matrix of nonnegative integers, stored as nested tuples."""

    rows: tuple

    def __post_init__(self):
        rows = []
        for row in self.rows:
            out = []
            for v in row:
                iv = int(v)
                if iv != v:
                    raise ValueError("entries must be integers")
                if iv < 0:
                    raise ValueError("entries must be nonnegative")
                out.append(iv)
            rows.append(tuple(out))
        object.__setattr__(self, "rows", tuple(rows))
        n = len(self.rows)
        if n < 1 or any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square with n >= 1")

    @property
    def n(self):
        return len(self.rows)

    def array(self):
        return np.array(self.rows, dtype=np.int64)

    def transpose(self):
        return NonnegIntMatrix(tuple(zip(*self.rows)))

    def fully_supported(self):
        """True when every row and every column has a nonzero entry."""
        a = self.array()
        return bool(a.any(axis=1).all() and a.any(axis=0).all())


def as_matrix(m):
    """Coerce a matrix-like object to a validated integer array."""
    if isinstance(m, NonnegIntMatrix):
        return m.array()
    return NonnegIntMatrix(tuple(tuple(row) for row in m)).array()


def leading_eigenvalue(m, tol=EIG_TOL, max_iter=MAX_POWER_ITER):
    """Perron root of a nonnegative integer matrix.

    Power iteration from the all-ones vector, renormalized in max norm.
    The update uses M + I so that periodic digraphs (where several
    eigenvalues tie in modulus) still single out the Perron direction.
    Accepts once ``||Mv - lam v||_inf <= tol ||v||_inf``; when the budget
    runs out, falls back to the exact characteristic polynomial for
    n <= 12 and raises :class:`NonConvergent` above that.
    """
    a_int = as_matrix(m)
    blocks = scc_blocks(a_int)
    if len(blocks) > 1:
        # defective couplings between blocks can pass the residual test
        # while the eigenvalue is still O(sqrt(tol)) off; the Perron root
        # of each strongly connected block is simple, so recurse there
        return max(
            leading_eigenvalue(a_int[np.ix_(b, b)], tol, max_iter)
            for b in blocks
        )
    a = a_int.astype(float)
    n = a.shape[0]
    v = np.ones(n)
    for _ in range(max_iter):
        w = a @ v
        lam = float(v @ w) / float(v @ v)
        if np.abs(w - lam * v).max() <= tol * np.abs(v).max():
            return lam
        u = w + v
        v = u / np.abs(u).max()
    if n <= CHARPOLY_LIMIT:
        return _charpoly_root(a_int)
    raise NonConvergent(
        "no eigenpair at tol=%g within %d iterations" % (tol, max_iter)
    )


def transpose_relation(a, m):
    """True when the second matrix is the entrywise transpose of the
    first."""
    a = as_matrix(a)
    m = as_matrix(m)
    if a.shape != m.shape:
        raise ValueError(
            "dimension mismatch: %d vs %d" % (a.shape[0], m.shape[0])
        )
    return bool((a.T == m).all())


def scc_blocks(m):
    """Strongly connected components of the transition digraph, as
    tuples of state indices."""
    a = as_matrix(m)
    ncomp, labels = connected_components(
        csr_matrix(a != 0), directed=True, connection="strong"
    )
    blocks = [[] for _ in range(ncomp)]
    for i, lab in enumerate(labels):
        blocks[lab].append(i)
    return tuple(tuple(b) for b in blocks)


def is_reducible(m):
    return len(scc_blocks(m)) > 1


def block_leading_eigenvalues(m):
    """Perron root of each strongly connected diagonal block."""
    a = as_matrix(m)
    return tuple(
        leading_eigenvalue(a[np.ix_(b, b)]) for b in scc_blocks(m)
    )


# -- exact fallback ----------------------------------------------------------

def _charpoly(a_int):
    """Characteristic polynomial coefficients, highest degree first,
    by the Faddeev-LeVerrier recurrence in exact integer arithmetic."""
    n = a_int.shape[0]
    rows = [[int(v) for v in row] for row in a_int]
    work = [[0] * n for _ in range(n)]
    coeffs = [1]
    c = 1
    for k in range(1, n + 1):
        for i in range(n):
            work[i][i] += c
        work = [
            [sum(rows[i][t] * work[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        tr = sum(work[i][i] for i in range(n))
        c = -tr // k
        coeffs.append(c)
    return coeffs


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs):
    top = len(coeffs) - 1
    return [c * (top - i) for i, c in enumerate(coeffs[:-1])]


def _poly_mod(num, den):
    num = list(num)
    while num and num[0] == 0:
        num.pop(0)
    while len(num) >= len(den):
        q = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= q * den[i]
        num.pop(0)
        while num and num[0] == 0:
            num.pop(0)
    return num


def _poly_gcd(p, q):
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in q]
    while q:
        p, q = q, _poly_mod(p, q)
    return [c / p[0] for c in p]


def _poly_div(num, den):
    num = [Fraction(c) for c in num]
    out = []
    while len(num) >= len(den):
        q = num[0] / den[0]
        out.append(q)
        for i in range(len(den)):
            num[i] -= q * den[i]
        num.pop(0)
    return out


def _charpoly_root(a_int, tol=1e-14):
    """Largest real root of the characteristic polynomial.

    The square-free part always changes sign at the top root, so a
    float seed from the companion roots can be polished by bisection
    with exact rational sign evaluations.
    """
    coeffs = [Fraction(c) for c in _charpoly(a_int)]
    gcd = _poly_gcd(coeffs, _poly_deriv(coeffs))
    if len(gcd) > 1:
        coeffs = _poly_div(coeffs, gcd)
    if len(coeffs) < 2:
        return 0.0
    roots = np.roots([float(c) for c in coeffs])
    real = [r.real for r in roots if abs(r.imag) < 1e-6]
    if not real:
        return 0.0
    seed = max(real)
    span = max(1e-9, 1e-9 * abs(seed))
    lo, hi = seed - span, seed + span
    while _poly_eval(coeffs, Fraction(hi)) <= 0:
        hi += span
        span *= 2
    span = max(1e-9, 1e-9 * abs(seed))
    while _poly_eval(coeffs, Fraction(lo)) >= 0:
        lo -= span
        span *= 2
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if _poly_eval(coeffs, Fraction(mid)) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# -- angle-based construction ------------------------------------------------

@dataclass(frozen=True)
class PairTransitionSystem:
    """Doubling dynamics on unordered pairs of orbit angles."""

    theta: Fraction
    states: tuple
    matrix: NonnegIntMatrix


def _strictly_inside(x, a, b):
    span = (b - a) % 1
    pos = (x - a) % 1
    return 0 < pos < span


def pair_transitions(theta):
    """Build the pair-transition system of a rational angle.

    States are the unordered pairs of distinct angles on the doubling
    orbit of ``theta``.  A pair whose chord strictly crosses the
    critical leaf {theta/2, theta/2 + 1/2} splits into the two pairs
    through ``theta`` (its image angle); every other pair doubles both
    endpoints.  Pairs sharing an endpoint with the critical leaf never
    split, and image pairs that collapse to a single angle are dropped.
    """
    theta = norm_angle(theta)
    if theta == 0:
        raise ValueError("angle 0 has no pair dynamics")
    angles = sorted(angle_orbit(theta).orbit)
    states = [
        (a, b) for i, a in enumerate(angles) for b in angles[i + 1:]
    ]
    index = {s: k for k, s in enumerate(states)}
    half = theta / 2
    conj = (half + Fraction(1, 2)) % 1
    rows = [[0] * len(states) for _ in states]
    for k, (a, b) in enumerate(states):
        on_leaf = half in (a, b) or conj in (a, b)
        crosses = _strictly_inside(half, a, b) != _strictly_inside(conj, a, b)
        if not on_leaf and crosses:
            targets = [(double(a), theta), (theta, double(b))]
        else:
            targets = [(double(a), double(b))]
        for u, v in targets:
            if u == v:
                continue
            rows[k][index[min(u, v), max(u, v)]] += 1
    return PairTransitionSystem(
        theta=theta,
        states=tuple(states),
        matrix=NonnegIntMatrix(tuple(tuple(r) for r in rows)),
    )


def core_entropy(theta):
    """Growth rate of the tree dynamics of a rational angle.

    Returns ``(lam, h, matrix)`` with ``h = log(lam)`` and ``matrix``
    the pair-transition matrix whose Perron root is ``lam``.
    """
    system = pair_transitions(theta)
    lam = leading_eigenvalue(system.matrix)
    return lam, math.log(lam), system.matrix

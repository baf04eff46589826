import math
from fractions import Fraction as F

import numpy as np
import pytest

from slowmating.entropy import (
    NonConvergent,
    NonnegIntMatrix,
    PairTransitionSystem,
    as_matrix,
    block_leading_eigenvalues,
    core_entropy,
    is_reducible,
    leading_eigenvalue,
    pair_transitions,
    scc_blocks,
    transpose_relation,
)
from slowmating.entropy import _charpoly, _charpoly_root

FIG_A = ((0, 0, 1, 1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0))
FIG_M = tuple(zip(*FIG_A))
PHI = (1 + math.sqrt(5)) / 2


def test_matrix_validation():
    m = NonnegIntMatrix(FIG_A)
    assert m.n == 4
    assert m.transpose().rows == FIG_M
    assert m.fully_supported()
    assert not NonnegIntMatrix(((0, 1), (0, 1))).fully_supported()
    with pytest.raises(ValueError):
        NonnegIntMatrix(((1, 2), (3,)))
    with pytest.raises(ValueError):
        NonnegIntMatrix(((1, -1), (0, 1)))
    with pytest.raises(ValueError):
        NonnegIntMatrix(((0.5, 0), (0, 0)))
    with pytest.raises(ValueError):
        NonnegIntMatrix(())


def test_leading_eigenvalue_simple():
    assert leading_eigenvalue([[1]]) == 1.0
    assert leading_eigenvalue([[0]]) == 0.0
    assert leading_eigenvalue([[3]]) == 3.0
    assert abs(leading_eigenvalue([[0, 1], [1, 0]]) - 1.0) < 1e-12
    assert leading_eigenvalue([[0, 1], [0, 0]]) == 0.0
    assert abs(leading_eigenvalue([[1, 1], [0, 1]]) - 1.0) < 1e-12


def test_leading_eigenvalue_fig_matrix():
    lam = leading_eigenvalue(FIG_A)
    assert abs(lam - 1.395337) < 1e-5
    assert abs(lam**4 - 2 * lam - 1) < 1e-6


def test_charpoly_is_exact():
    assert _charpoly(as_matrix(FIG_A)) == [1, 0, 0, -2, -1]
    assert _charpoly(as_matrix([[2]])) == [1, -2]


def test_charpoly_fallback_matches_power_iteration():
    direct = leading_eigenvalue(FIG_A)
    forced = leading_eigenvalue(FIG_A, max_iter=2)
    assert abs(direct - forced) < 1e-7
    assert abs(forced**4 - 2 * forced - 1) < 1e-12


def test_charpoly_handles_repeated_top_root():
    two_blocks = [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 0]]
    assert abs(_charpoly_root(as_matrix(two_blocks)) - PHI) < 1e-12


def test_nonconvergent_above_exact_fallback_size():
    a = np.eye(13, k=1, dtype=int)
    a[12, 0] = 1
    a[0, 0] = 1
    with pytest.raises(NonConvergent):
        leading_eigenvalue(a, max_iter=2)
    lam = leading_eigenvalue(a)
    assert 1 < lam < 2


def test_transpose_relation():
    assert transpose_relation(FIG_A, FIG_M)
    assert transpose_relation(np.eye(3, dtype=int), np.eye(3, dtype=int))
    assert not transpose_relation(FIG_A, FIG_A)
    with pytest.raises(ValueError):
        transpose_relation(FIG_A, [[1]])


def test_transpose_has_same_eigenvalue():
    for rows in (FIG_A, ((1, 1), (1, 0)), ((0, 2), (1, 0))):
        m = NonnegIntMatrix(rows)
        gap = abs(
            leading_eigenvalue(m, tol=1e-13)
            - leading_eigenvalue(m.transpose(), tol=1e-13)
        )
        assert gap < 1e-10


def test_reducibility_flags():
    assert not is_reducible(FIG_A)
    assert is_reducible([[1, 1], [0, 1]])
    assert scc_blocks([[1, 1], [0, 1]]) == ((1,), (0,)) or scc_blocks(
        [[1, 1], [0, 1]]
    ) == ((0,), (1,))
    roots = block_leading_eigenvalues([[2, 1], [0, 3]])
    assert sorted(roots) == [2.0, 3.0]


def test_pair_transitions_basilica():
    sys_ = pair_transitions(F(1, 3))
    assert isinstance(sys_, PairTransitionSystem)
    assert sys_.states == ((F(1, 3), F(2, 3)),)
    assert sys_.matrix.rows == ((1,),)
    lam, h, m = core_entropy(F(1, 3))
    assert lam == 1.0 and h == 0.0 and m.rows == ((1,),)


def test_pair_transitions_half():
    # the single pair is a diameter crossing the critical leaf, so it
    # splits onto itself twice
    sys_ = pair_transitions(F(1, 2))
    assert sys_.matrix.rows == ((2,),)
    lam, h, _ = core_entropy(F(1, 2))
    assert abs(lam - 2.0) < 1e-12
    assert abs(h - math.log(2)) < 1e-12


def test_core_entropy_fig_angle():
    lam, h, m = core_entropy(F(3, 15))
    assert abs(lam - 1.395337) < 1e-4
    assert abs(lam - leading_eigenvalue(FIG_A)) < 1e-6
    assert abs(h - math.log(lam)) < 1e-15
    assert m.n == 6
    assert is_reducible(m)
    assert abs(max(block_leading_eigenvalues(m)) - lam) < 1e-6


def test_core_entropy_airplane_vs_lap_counting():
    # independent oracle: lap numbers of the real quadratic whose
    # critical point has period three
    c = -1.7548776662466943
    lo, hi = c, c * c + c
    level = [0.0]
    lap_counts = []
    total = 0
    for _ in range(22):
        total += sum(1 for x in level if lo < x < hi)
        lap_counts.append(1 + total)
        nxt = []
        for x in level:
            if x >= c:
                r = math.sqrt(x - c)
                nxt.extend([r, -r])
        level = [x for x in nxt if lo <= x <= hi]
    growth = lap_counts[-1] / lap_counts[-2]
    lam = core_entropy(F(3, 7))[0]
    assert abs(lam - growth) < 1e-3
    assert abs(lam - PHI) < 1e-6


def test_core_entropy_dendrite():
    lam = core_entropy(F(1, 6))[0]
    assert abs(lam**3 - lam - 2) < 1e-8


def test_core_entropy_range_property():
    thetas = [F(1, 3), F(2, 5), F(3, 15), F(1, 6), F(5, 12), F(9, 56),
              F(3, 7), F(1, 2), F(5, 28), F(13, 28)]
    for th in thetas:
        lam, h, m = core_entropy(th)
        assert 1.0 - 1e-9 <= lam <= 2.0 + 1e-9
        gap = abs(
            leading_eigenvalue(m, tol=1e-13)
            - leading_eigenvalue(m.transpose(), tol=1e-13)
        )
        assert gap < 1e-10


def test_core_entropy_rejects_zero():
    with pytest.raises(ValueError):
        core_entropy(F(0))

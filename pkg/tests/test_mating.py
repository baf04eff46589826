import math
import time
from fractions import Fraction as F

import pytest

from slowmating.engine import RunOptions, Status
from slowmating.mating import (
    ConjugateLimbError,
    MatingSpec,
    mating_init,
    mating_run,
    scale_radius,
)
from slowmating.sphere import INF, sph_dist

# frozen from a converged run at max_iter=400 (settles at window 252);
# these coefficients are the comparison target for the capture pipeline
N956_B = complex(0.13529743076333053, 1.0368806929198475)
N956_C = complex(0.02052692677834709, 0.8844507918580616)
N956_D = complex(1.1147705039849833, 0.15242990106178592)


def test_spec_validation():
    spec = MatingSpec(F(7, 6), F(1, 3))
    assert spec.theta_p == F(1, 6)
    assert spec.r1 == pytest.approx(math.e**2)
    with pytest.raises(ValueError):
        MatingSpec(F(1, 6), F(1, 3), r1=1.0)


def test_conjugate_limb_gate():
    with pytest.raises(ConjugateLimbError):
        MatingSpec(F(1, 7), F(6, 7))
    with pytest.raises(ConjugateLimbError):
        MatingSpec(F(1, 3), F(1, 3))
    # force bypasses the gate, nothing else
    spec = MatingSpec(F(1, 7), F(6, 7), force=True)
    assert spec.theta_q == F(6, 7)


def test_scale_radius():
    r1 = math.e**2
    assert scale_radius(1.0, r1) == pytest.approx(r1)
    assert scale_radius(0.0, r1) == pytest.approx(r1 * r1)
    assert scale_radius(2.0, r1) == pytest.approx(math.sqrt(r1))
    # doubling identity: R_{t+1}^2 = R_t
    for t in (0.0, 0.4, 1.7):
        assert scale_radius(t + 1, r1) ** 2 == pytest.approx(scale_radius(t, r1))


def test_mating_init_basilica_pair():
    spec = MatingSpec(F(1, 3), F(1, 3), force=True)
    state = mating_init(spec, -1 + 0j, -1 + 0j)
    pids = [pt.pid for pt in state.points]
    assert pids == ["x1", "y1", "pin0", "pininf", "pin1"]
    assert state.anchor.kind == "rational"
    assert (state.anchor.alpha, state.anchor.beta) == (1, 0)
    n = state.nsamples
    r1 = spec.r1
    # heads follow the model path; pins are bit-exact constants
    assert abs(state.samples[0][n] - (-1.0 / r1)) < 1e-15
    assert abs(state.samples[0][0] - (-1.0 / r1**2)) < 1e-15
    assert abs(state.samples[1][n] - (-r1)) < 1e-12
    assert all(v == 0j for v in state.samples[2])
    assert all(v is INF for v in state.samples[3])
    assert all(v == 1 + 0j for v in state.samples[4])
    # the two heads start inverse to each other and stay that way
    for j in range(n + 1):
        assert abs(state.samples[0][j] * state.samples[1][j] - 1) < 1e-13


def test_mating_one_sixth_one_third():
    start = time.time()
    mr = mating_run(MatingSpec(F(1, 6), F(1, 3)))
    elapsed = time.time() - start
    assert mr.status is Status.CONVERGED
    assert mr.result.iterations < 200
    assert elapsed < 5.0
    assert abs(mr.c_p - 1j) < 1e-10
    assert abs(mr.c_q - (-1)) < 1e-10
    lim2 = mr.limits_n2()
    assert abs(lim2["x1"] - (-2)) < 1e-6
    assert abs(lim2["x2"] - 2) < 1e-6
    assert abs(lim2["x3"] - 2) < 1e-6
    m = mr.map_n2().m
    assert abs(m.b / m.a - 2) < 1e-6
    assert abs(m.c / m.a - 1) < 1e-6
    assert abs(m.d / m.a - (-1)) < 1e-6
    big = [set(cls) for cls in mr.collisions if len(cls) > 1]
    assert big == [{"x2", "x3"}]
    observed, expected = mr.ray_comparison()
    assert observed == expected
    assert len(observed) == 4


def test_mating_explicit_parameters_match_spider_route():
    spec = MatingSpec(F(1, 6), F(1, 3))
    via_spider = mating_run(spec)
    direct = mating_run(spec, c_p=1j, c_q=-1 + 0j)
    assert direct.status is Status.CONVERGED
    for pid, v in via_spider.limits.items():
        w = direct.limits[pid]
        if v is INF:
            assert w is INF
        else:
            assert sph_dist(v, w) < 1e-8


def test_basilica_self_mating_degenerates_on_schedule():
    trace = {}

    def watch(state):
        trace[state.n] = state.end_config()[state.index_of("x1")]

    mr = mating_run(MatingSpec(F(1, 3), F(1, 3), force=True), observer=watch)
    assert mr.status is Status.DEGENERATE
    assert mr.result.iterations <= 40
    r1 = mr.spec.r1
    # the x-head rides the model curve -1/R_t exactly, window after window
    for m in range(1, 21):
        assert abs(trace[m - 1] + 1.0 / scale_radius(float(m), r1)) < 1e-10


def test_mating_cycle_detection():
    mr = mating_run(MatingSpec(F(5, 28), F(13, 28)))
    assert mr.status is Status.CYCLE_DETECTED
    assert mr.result.period == 4
    assert mr.result.iterations < 200


def test_forced_conjugate_mating_degenerates():
    mr = mating_run(MatingSpec(F(1, 7), F(6, 7), force=True))
    assert mr.status is Status.DEGENERATE
    assert mr.result.iterations <= 60


def test_self_mating_drifts_without_converging():
    # both critical orbits land in one glued 2-cycle, so the would-be limit
    # carries four branch points of weight two; the pullback then translates
    # the configuration at constant speed instead of contracting
    configs = {}

    def watch(state):
        if state.n in (40, 41, 100, 101):
            configs[state.n] = state.end_config()

    mr = mating_run(
        MatingSpec(F(1, 6), F(1, 6)),
        options=RunOptions(max_iter=120),
        observer=watch,
    )
    assert mr.status is Status.MAX_ITER

    def step(a, b):
        return max(
            sph_dist(u, v) for u, v in zip(configs[a], configs[b])
        )

    early, late = step(40, 41), step(100, 101)
    assert 0.005 < early < 0.02
    assert abs(early - late) < 2e-4
    lim = mr.limits
    assert sph_dist(lim["x2"], lim["y3"]) < 1e-9
    assert sph_dist(lim["x3"], lim["y2"]) < 1e-9
    for i in (1, 2, 3):
        assert abs(lim["x%d" % i] * lim["y%d" % i] - 1) < 1e-12
    observed, expected = mr.ray_comparison()
    assert observed == expected


def test_mating_head_escapes_to_infinity():
    # 1/4 x 1/2: x1 runs off to infinity while x2 and y1 pinch together;
    # the pinch squeezes below double precision once |x1| ~ 1e8, so the
    # run uses a tolerance it can reach before that wall
    mr = mating_run(MatingSpec(F(1, 4), F(1, 2)), options=RunOptions(tol=1e-7))
    assert mr.status is Status.CONVERGED
    assert mr.result.iterations <= 40
    clusters = [set(cls) for cls in mr.collisions]
    assert {"x1", "pininf"} in clusters
    assert {"x2", "y1"} in clusters
    assert {"x3", "y2", "pin1"} in clusters
    fmap = mr.map_n1()
    assert sph_dist(fmap.critical_values()[0], INF) < 1e-6
    observed, expected = mr.ray_comparison()
    assert observed == expected


def test_mating_nine_56_one_quarter():
    mr = mating_run(MatingSpec(F(9, 56), F(1, 4)), options=RunOptions(max_iter=400))
    assert mr.status is Status.CONVERGED
    assert mr.result.iterations <= 300
    m = mr.map_n1().m
    assert abs(m.b / m.a - N956_B) < 1e-6
    assert abs(m.c / m.a - N956_C) < 1e-6
    assert abs(m.d / m.a - N956_D) < 1e-6
    clusters = [set(cls) for cls in mr.collisions]
    assert {"x4", "x5", "x6"} in clusters
    assert {"pin1", "y3"} in clusters
    observed, expected = mr.ray_comparison()
    assert observed == expected
    assert len(observed) == 9

import pytest

from slowmating.quadratic import (
    alpha_fixed,
    beta_fixed,
    critical_orbit,
    newton_polish,
    orbit_preperiod,
    orbit_residual,
)

AIRPLANE = -1.7548776662466943
RABBIT = -0.12256116687665351 + 0.7448617666197441j


def test_orbit_preperiod_convention():
    # superattracting orbits close up at the critical point itself;
    # strictly preperiodic ones need one extra step past the collision
    assert orbit_preperiod(0) == 0
    assert orbit_preperiod(1) == 2
    assert orbit_preperiod(3) == 4


def test_critical_orbit_of_i():
    orbit = critical_orbit(1j, 4)
    assert orbit == [1j, -1 + 1j, -1j, -1 + 1j]


def test_orbit_residual_exact_parameters():
    assert orbit_residual(-1 + 0j, 0, 2) < 1e-15
    assert orbit_residual(1j, 1, 2) < 1e-14
    assert orbit_residual(complex(AIRPLANE), 0, 3) < 1e-13
    assert orbit_residual(RABBIT, 0, 3) < 1e-14
    assert orbit_residual(-2 + 0j, 1, 1) < 1e-15  # 0 -> -2 -> 2 -> 2


def test_newton_polish_recovers_centers():
    c = newton_polish(-1.7 + 0.02j, 0, 3)
    assert abs(c - AIRPLANE) < 1e-12
    c = newton_polish(-0.1 + 0.8j, 0, 3)
    assert abs(c - RABBIT) < 1e-12
    c = newton_polish(-0.95 + 0.04j, 0, 2)
    assert abs(c - (-1)) < 1e-12


def test_newton_polish_recovers_misiurewicz():
    c = newton_polish(0.001 + 1.002j, 1, 2)
    assert abs(c - 1j) < 1e-12
    c = newton_polish(-1.98 + 0.01j, 1, 1)
    assert abs(c - (-2)) < 1e-12


def test_fixed_points():
    assert beta_fixed(0j) == pytest.approx(1)
    assert alpha_fixed(0j) == pytest.approx(0)
    assert beta_fixed(-2 + 0j) == pytest.approx(2)
    assert alpha_fixed(-2 + 0j) == pytest.approx(-1)
    c = 0.1 + 0.2j
    b = beta_fixed(c)
    assert b * b + c == pytest.approx(b)

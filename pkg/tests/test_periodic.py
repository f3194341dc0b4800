import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from dynslip import periodic
from dynslip.errors import DomainError, ValidationError
from dynslip.fd import FdGrid, fd_solve_periodic
from dynslip.spectral import SlipParams

T = 2 * math.pi


def settled_coefficient(lam, load, period, periods=40):
    """March c' + lam^2 c = K cos(2 pi t/T) from rest and return c at a multiple of T."""
    w = 2 * math.pi / period
    sol = solve_ivp(
        lambda t, c: [-(lam**2) * c[0] + load * math.cos(w * t)],
        (0, periods * period),
        [0.0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    return sol.y[0, -1]


@pytest.mark.parametrize("alpha,beta", [(1, 0.1), (1, 4.2), (4.2, 1)])
def test_coeff0_matches_settled_ode(alpha, beta):
    scen = periodic.PeriodicScenario(SlipParams(alpha, beta), T, 4)
    b = scen.basis
    loads = b.amplitudes * (np.cos(b.lambdas * b.h) - 1) / b.lambdas
    for j in range(1, 5):
        ref = settled_coefficient(b.lambdas[j - 1], loads[j - 1], T)
        assert periodic.coeff0(scen, j) == pytest.approx(ref, rel=1e-8, abs=1e-12)


def test_coeff0_matches_finite_difference_projection():
    # (alpha, beta) = (1, 0.1), first mode: project the periodic FD state at t = 0
    p = SlipParams(1, 0.1)
    scen = periodic.PeriodicScenario(p, T, 1)
    field = fd_solve_periodic(p, T, FdGrid(512, T / 4000), n_periods=30, samples=8)
    u0 = field.u[0]
    mode = scen.basis.values(field.x)[0]
    dx = field.x[1] - field.x[0]
    bulk = dx * (np.sum(u0 * mode) - 0.5 * u0[-1] * mode[-1])
    c1 = bulk + p.beta * u0[-1] * mode[-1]
    assert periodic.coeff0(scen, 1) == pytest.approx(c1, abs=1e-4)


def test_two_closed_forms_agree():
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2), T, 10)
    t = np.linspace(0, T, 37)
    for j in range(1, 11):
        assert periodic.coeff(scen, j, 0.0) == pytest.approx(periodic.coeff0(scen, j), abs=1e-15)
        assert np.allclose(periodic.coeff(scen, j, t), periodic.coefficients(scen, t)[j - 1], rtol=1e-13, atol=1e-16)


def test_periodicity_and_zero_mean():
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2), T, 10)
    for j in range(1, 11):
        assert abs(periodic.coeff(scen, j, 0.0) - periodic.coeff(scen, j, T)) < 1e-12
        assert abs(periodic.period_mean(lambda s: periodic.coeff(scen, j, s), T)) < 1e-12
    assert abs(periodic.wall_shear(scen, 0.0) - periodic.wall_shear(scen, T)) < 1e-12
    x = np.linspace(0, math.pi, 5)
    assert np.max(np.abs(periodic.solution(scen, 0.0, x) - periodic.solution(scen, T, x))) < 1e-12
    for resum in (True, False):
        assert abs(periodic.period_mean(lambda s: periodic.wall_shear(scen, s, resum), T)) < 1e-10


def test_ode_residuals():
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2), T, 10)
    t = np.concatenate([np.linspace(0, T, 100), [T / 4]])
    for j in range(1, 11):
        assert np.max(np.abs(periodic.ode_residual(scen, j, t))) <= 1e-10
        assert np.max(np.abs(periodic.dirichlet_ode_residual(math.pi, T, j, t))) <= 1e-10


def test_analytic_derivative_matches_difference_quotient():
    scen = periodic.PeriodicScenario(SlipParams(1, 0.1), T, 3)
    k = 1e-6
    for j in (1, 2, 3):
        fd = (periodic.coeff(scen, j, 1.0 + k) - periodic.coeff(scen, j, 1.0 - k)) / (2 * k)
        assert periodic.coeff_derivative(scen, j, 1.0) == pytest.approx(fd, rel=1e-6, abs=1e-10)


def test_dirichlet_even_modes_vanish():
    t = np.linspace(0, T, 50)
    for j in (2, 4, 6, 8, 10):
        assert np.all(periodic.dirichlet_coeff(math.pi, T, j, t) == 0)
    assert periodic.dirichlet_coeff(math.pi, T, 1, 0.0) != 0


def test_vanishing_load_gives_zero_coefficient():
    # cos(lam h) = 1 happens for the sine basis at even indices
    scen = periodic.PeriodicScenario(SlipParams(1, 1), T, 1)
    assert periodic.dirichlet_coeff(math.pi, T, 2, 0.3) == 0.0
    assert periodic.coeff0(scen, 1) != 0.0


def test_quasi_static_profile_solves_boundary_problem():
    p = SlipParams(3.0, 1.0, 2.0)
    x, k = np.array([0.4, 1.1]), 1e-4
    s = lambda z: periodic.quasi_static_profile(p, p.h, z)
    assert np.allclose((s(x + k) - 2 * s(x) + s(x - k)) / k**2, 1.0, atol=1e-6)
    assert s(0.0) == 0.0
    slope = periodic.quasi_static_slope(p, p.h)
    assert slope == pytest.approx((s(p.h) - s(p.h - k)) / k, abs=1e-3)
    assert p.alpha * s(p.h) + slope == pytest.approx(0, abs=1e-12)
    assert periodic.quasi_static_profile(None, p.h, p.h) == 0.0


def test_resummed_wall_shear_matches_long_plain_sum():
    p = SlipParams(1, 4.2)
    t = np.linspace(0, T, 9)
    short = periodic.wall_shear(periodic.PeriodicScenario(p, T, 10), t, resum=True)
    long = periodic.wall_shear(periodic.PeriodicScenario(p, T, 4000), t, resum=False)
    assert np.max(np.abs(short - long)) < 2e-3


def test_wall_shear_matches_finite_differences():
    p = SlipParams(1, 4.2)
    field = fd_solve_periodic(p, T, FdGrid(512, T / 4000), n_periods=20, samples=8)
    scen = periodic.PeriodicScenario(p, T, 10)
    k = 4  # t = T/2 = pi
    assert field.t[k] == pytest.approx(math.pi)
    assert periodic.wall_shear(scen, math.pi) == pytest.approx(field.wall_shear[k], abs=1e-3)
    dirichlet = fd_solve_periodic(p, T, FdGrid(512, T / 4000), n_periods=20, samples=8, dirichlet=True)
    assert periodic.dirichlet_wall_shear(math.pi, T, 10, 0.0) == pytest.approx(dirichlet.wall_shear[0], abs=1e-3)


def test_no_slip_limit_trend():
    t = np.linspace(0, T, 25)
    ref = periodic.dirichlet_wall_shear(math.pi, T, 10, t)
    gaps = []
    for alpha in (10, 100, 1000):
        scen = periodic.PeriodicScenario(SlipParams(alpha, 1.0), T, 10)
        gaps.append(np.max(np.abs(periodic.wall_shear(scen, t) - ref)))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.05 * gaps[0]


def test_solution_shape_and_errors():
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2), T, 10)
    assert periodic.solution(scen, np.zeros(3), np.linspace(0, 1, 4)).shape == (3, 4)
    assert isinstance(periodic.wall_shear(scen, 0.5), float)
    with pytest.raises(DomainError):
        periodic.solution(scen, 0.0, 5.0)
    with pytest.raises(ValidationError):
        periodic.coeff(scen, 11, 0.0)
    with pytest.raises(ValidationError):
        periodic.PeriodicScenario(SlipParams(1, 1), 0.0)
    with pytest.raises(ValidationError):
        periodic.dirichlet_coeff(math.pi, T, 0, 0.0)

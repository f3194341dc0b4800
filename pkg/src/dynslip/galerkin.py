"""Galerkin scheme for the 1D channel with a general stress graph.

The velocity is ``v(t, x) = sum_i c_i(t) w_i(x)`` in the H-orthonormal
eigenbasis, so the mass matrix is the identity and

    c_i' = F_i(t) - int_0^h tau(v_x) w_i' dx - alpha sigma(v(h)) w_i(h).

In the channel the only velocity gradient entry is the shear rate
``gamma = v_x``; the symmetric gradient then has the two off-diagonal entries
``gamma/2``, so ``|D| = |gamma|/sqrt(2)`` and the shear flux is
``tau = S_13 = phi(|D|)/|D| * gamma/2``.  For ``S = 2 nu D`` this is
``tau = nu gamma`` and the scheme reduces to the linear modal ODEs.

Energy bookkeeping:

    1/2 |c(t)|^2 + int dissipation + int boundary dissipation
        = 1/2 |c(0)|^2 + int work.

With ``ledger_rule="stage"`` (default for RK4) the three integrals are
advanced with the RK4 stages themselves, i.e. RK4 on the system augmented by
the energy rates; ``"trapezoid"`` uses the trapezoidal rule on the stored
states, whose O(dt^2) error has no definite sign.

On a step ``[t_n, t_n + dt]`` the ramp rate ``V'`` is taken as the difference
quotient of ``V`` over the step, which is exact whenever ``delta`` lies on
the step grid and avoids deciding on which side of the kink a rounded time
falls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constitutive import NavierLinear, PowerLaw, Linear, select_boundary
from .errors import QuadratureFailure, SolveFailure, StepDiverged, ValidationError
from .shear import ramp_rate, ramp_velocity
from .spectral import Basis, SlipParams, build_basis, gauss_nodes

BLOWUP = 1e12
FIXED_POINT_TOL = 1e-12
FIXED_POINT_CAP = 100
INTEGRATORS = ("RK4", "BackwardEuler")
LEDGER_RULES = ("stage", "trapezoid")


@dataclass(frozen=True)
class ShearRamp:
    delta: float = 0.01

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValidationError("delta must lie in (0, 1]")


@dataclass(frozen=True)
class PeriodicPressure:
    period: float = 2 * math.pi

    def __post_init__(self):
        if not self.period > 0:
            raise ValidationError("period must be positive")


@dataclass(frozen=True, eq=False)
class GalerkinConfig:
    params: SlipParams
    n_modes: int = 10
    graph: object = field(default_factory=lambda: Linear(1.0))
    boundary_graph: object = field(default_factory=NavierLinear)
    forcing: ShearRamp | PeriodicPressure | None = None
    dt: float = 1e-4
    t_end: float = 1.0
    integrator: str = "RK4"
    ledger_rule: str = "stage"
    basis: Basis = field(default=None)

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValidationError("n_modes must be >= 1")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if not self.t_end >= self.dt:
            raise ValidationError("t_end must be at least dt")
        if self.integrator not in INTEGRATORS:
            raise ValidationError(f"integrator must be one of {INTEGRATORS}")
        if self.ledger_rule not in LEDGER_RULES:
            raise ValidationError(f"ledger_rule must be one of {LEDGER_RULES}")
        if self.integrator == "BackwardEuler" and self.ledger_rule == "stage":
            object.__setattr__(self, "ledger_rule", "trapezoid")
        if self.basis is None:
            object.__setattr__(self, "basis", build_basis(self.params, self.n_modes))
        elif len(self.basis) != self.n_modes:
            raise ValidationError("basis size does not match n_modes")

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class GalerkinState:
    t: float
    c: np.ndarray


@dataclass
class Trajectory:
    t: np.ndarray
    c: np.ndarray


@dataclass
class EnergyLedger:
    """Cumulative energy terms, one entry per stored time.

    ``*_rate`` hold the instantaneous integrands; ``min_density`` is the
    smallest pointwise ``tau(v_x) v_x`` over the quadrature nodes.
    """

    h_norm_sq: np.ndarray
    dissipation: np.ndarray
    boundary_dissipation: np.ndarray
    work: np.ndarray
    dissipation_rate: np.ndarray
    boundary_rate: np.ndarray
    min_density: np.ndarray


class _Quadrature:
    def __init__(self, basis: Basis, points=None):
        x, w = gauss_nodes(basis.h, points)
        self.weights = w
        self.slopes = basis.derivatives(x)  # (n, q)
        self.weighted_slopes = self.slopes * w
        self.values = basis.values(x)
        self.wall = basis.wall_values
        self.integrals = basis.integrals


_QUAD_CACHE: dict = {}


def _quadrature(config: GalerkinConfig, points=None) -> _Quadrature:
    key = (id(config.basis), points)
    quad = _QUAD_CACHE.get(key)
    if quad is None or quad[0] is not config.basis:
        quad = (config.basis, _Quadrature(config.basis, points))
        _QUAD_CACHE[key] = quad
    return quad[1]


def shear_flux(graph, gamma):
    """``S_13`` of the graph selection for the shear rate ``gamma``."""
    gamma = np.asarray(gamma, dtype=float)
    if isinstance(graph, PowerLaw) and graph.r == 2:
        return graph.nu * gamma
    m = np.abs(gamma) / math.sqrt(2.0)
    phi = np.asarray(graph.phi(m))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(m > 0, phi / np.where(m > 0, m, 1.0) * 0.5 * gamma, 0.0)
    return out


def forcing_vector(config: GalerkinConfig, t: float, rate: float | None = None) -> np.ndarray:
    """``<f(t), w_i>``.  ``rate`` overrides the ramp rate ``V'(t)`` (the
    right limit is used at the kink otherwise)."""
    f = config.forcing
    b = config.basis
    if f is None:
        return np.zeros(len(b))
    if isinstance(f, ShearRamp):
        p = config.params
        if rate is None:
            rate = ramp_rate(f.delta, t)
        drive = p.alpha * ramp_velocity(f.delta, t) + p.beta * rate
        return drive * b.wall_values
    return -math.cos(2 * math.pi * t / f.period) * b.integrals


def step_rate(config: GalerkinConfig, t: float) -> float | None:
    """Ramp rate used on the step starting at ``t``."""
    f = config.forcing
    if not isinstance(f, ShearRamp):
        return None
    return (ramp_velocity(f.delta, t + config.dt) - ramp_velocity(f.delta, t)) / config.dt


def _internal(config, c, quad):
    """Stress and boundary terms plus the energy rates for coefficients ``c``."""
    gamma = c @ quad.slopes
    tau = shear_flux(config.graph, gamma)
    if not np.all(np.isfinite(tau)):
        raise QuadratureFailure("non-finite shear flux at the quadrature nodes")
    wall = float(c @ quad.wall)
    sigma = float(select_boundary(config.boundary_graph, wall))
    alpha = config.params.alpha
    force = quad.weighted_slopes @ tau + alpha * sigma * quad.wall
    density = tau * gamma
    return force, float(quad.weights @ density), alpha * sigma * wall, float(np.min(density))


def rhs(config: GalerkinConfig, state: GalerkinState, rate: float | None = None, points=None) -> np.ndarray:
    c = np.asarray(state.c, dtype=float)
    if c.shape != (config.n_modes,):
        raise ValidationError("state size does not match n_modes")
    force, *_ = _internal(config, c, _quadrature(config, points))
    return forcing_vector(config, state.t, rate) - force


def project_initial(config: GalerkinConfig, v0) -> np.ndarray:
    """``c_i = (v0, w_i)_H``; ``v0`` must accept arrays."""
    b = config.basis
    x, w = gauss_nodes(b.h)
    bulk = b.values(x) @ (w * np.asarray(v0(x), dtype=float))
    wall = float(np.asarray(v0(np.array([b.h])), dtype=float)[0])
    return bulk + b.beta * wall * b.wall_values


def _rk4(config, t, c, quad):
    """One RK4 step; also returns the stage-weighted increments of
    (work, dissipation, boundary dissipation)."""
    dt = config.dt
    rate = step_rate(config, t)

    def f(s, y):
        load = forcing_vector(config, s, rate)
        force, diss, bnd, _ = _internal(config, y, quad)
        return load - force, np.array([load @ y, diss, bnd])

    k1, e1 = f(t, c)
    k2, e2 = f(t + dt / 2, c + dt / 2 * k1)
    k3, e3 = f(t + dt / 2, c + dt / 2 * k2)
    k4, e4 = f(t + dt, c + dt * k3)
    return c + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4), dt / 6 * (e1 + 2 * e2 + 2 * e3 + e4)


def _backward_euler(config, t, c, quad):
    dt = config.dt
    load = forcing_vector(config, t + dt, step_rate(config, t))
    new = c.copy()
    for _ in range(FIXED_POINT_CAP):
        trial = c + dt * (load - _internal(config, new, quad)[0])
        gap = float(np.max(np.abs(trial - new)))
        new = trial
        if gap <= FIXED_POINT_TOL * max(1.0, float(np.max(np.abs(new)))):
            return new, None
        if not np.all(np.isfinite(new)):
            break
    raise SolveFailure(f"fixed-point iteration did not converge in {FIXED_POINT_CAP} steps")


def _advance(config, state, quad):
    advance = _rk4 if config.integrator == "RK4" else _backward_euler
    c, increments = advance(config, state.t, np.asarray(state.c, dtype=float), quad)
    if not np.all(np.isfinite(c)) or np.max(np.abs(c)) > BLOWUP:
        raise StepDiverged(f"coefficients blew up at t={state.t + config.dt:.6g}")
    return GalerkinState(state.t + config.dt, c), increments


def step(config: GalerkinConfig, state: GalerkinState) -> GalerkinState:
    return _advance(config, state, _quadrature(config))[0]


def run(config: GalerkinConfig, v0=None, c0=None):
    """Integrate to ``t_end``; returns ``(Trajectory, EnergyLedger)``."""
    quad = _quadrature(config)
    n, steps, dt = config.n_modes, config.steps, config.dt
    if c0 is None:
        c0 = np.zeros(n) if v0 is None else project_initial(config, v0)
    times = dt * np.arange(steps + 1)
    coeffs = np.empty((steps + 1, n))
    diss_rate = np.empty(steps + 1)
    bnd_rate = np.empty(steps + 1)
    min_density = np.empty(steps + 1)
    totals = np.zeros((steps + 1, 3))
    trapezoid = config.ledger_rule == "trapezoid"
    state = GalerkinState(0.0, np.asarray(c0, dtype=float).copy())
    coeffs[0] = state.c
    _, diss_rate[0], bnd_rate[0], min_density[0] = _internal(config, state.c, quad)
    for k in range(1, steps + 1):
        rate = step_rate(config, times[k - 1])
        before = state.c
        state, increments = _advance(config, GalerkinState(times[k - 1], state.c), quad)
        coeffs[k] = state.c
        _, diss_rate[k], bnd_rate[k], min_density[k] = _internal(config, state.c, quad)
        if trapezoid:
            power = forcing_vector(config, times[k - 1], rate) @ before
            power += forcing_vector(config, times[k], rate) @ state.c
            increments = 0.5 * dt * np.array(
                [power, diss_rate[k - 1] + diss_rate[k], bnd_rate[k - 1] + bnd_rate[k]]
            )
        totals[k] = totals[k - 1] + increments
    ledger = EnergyLedger(
        h_norm_sq=0.5 * np.sum(coeffs**2, axis=1),
        dissipation=totals[:, 1],
        boundary_dissipation=totals[:, 2],
        work=totals[:, 0],
        dissipation_rate=diss_rate,
        boundary_rate=bnd_rate,
        min_density=min_density,
    )
    return Trajectory(times, coeffs), ledger


def energy_report(trajectory: Trajectory, ledger: EnergyLedger) -> np.ndarray:
    """``1/2 |c0|^2 + work - (1/2 |c|^2 + dissipation + boundary dissipation)``."""
    if len(trajectory.t) == 0:
        raise ValidationError("empty trajectory")
    lhs = ledger.h_norm_sq + ledger.dissipation + ledger.boundary_dissipation
    return ledger.h_norm_sq[0] + ledger.work - lhs

"""Finite-difference reference solver for the two channel scenarios.

Unknowns are ``u_1 .. u_m`` on ``x_j = j h/m`` (``u_0 = 0``).  Interior rows
use the three-point Laplacian; the last row is the wall law

    beta d/dt (u_m - V) = -alpha (u_m - V) - (3 u_m - 4 u_{m-1} + u_{m-2}) / (2 dx),

so the system reads ``M u' = K u + b(t)`` with ``M = diag(1, .., 1, beta)``.
Time stepping is the theta-scheme; the ``beta V'`` term is integrated exactly
over each step as ``beta (V^{n+1} - V^n)/dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import NotPeriodic, SolveFailure, ValidationError
from .shear import ramp_velocity
from .spectral import SlipParams

PERIOD_TOL = 1e-8


@dataclass(frozen=True)
class FdGrid:
    m: int = 512
    dt: float = 1e-4
    theta: float = 0.5

    def __post_init__(self):
        if self.m < 16:
            raise ValidationError("m must be at least 16")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if not 0 <= self.theta <= 1:
            raise ValidationError("theta must lie in [0, 1]")


@dataclass
class FdField:
    """Samples ``u[k, j]`` at times ``t[k]`` on nodes ``x[j]`` (including 0)."""

    t: np.ndarray
    x: np.ndarray
    u: np.ndarray

    def at(self, x) -> np.ndarray:
        """Linear interpolation in space, shape ``(len(t),) + shape(x)``."""
        x = np.asarray(x, dtype=float)
        return np.stack([np.interp(x, self.x, row) for row in self.u])

    @property
    def wall_shear(self) -> np.ndarray:
        dx = self.x[1] - self.x[0]
        return (3 * self.u[:, -1] - 4 * self.u[:, -2] + self.u[:, -3]) / (2 * dx)


def _operators(params: SlipParams, m: int, dirichlet: bool):
    dx = params.h / m
    main = np.full(m, -2.0 / dx**2)
    K = sp.diags([np.full(m - 1, 1.0 / dx**2), main, np.full(m - 1, 1.0 / dx**2)], [-1, 0, 1], format="lil")
    mass = np.ones(m)
    if dirichlet:
        K[m - 1, :] = 0.0
        K[m - 1, m - 1] = -1.0
        mass[-1] = 0.0
    else:
        K[m - 1, :] = 0.0
        K[m - 1, m - 1] = -params.alpha - 3.0 / (2 * dx)
        K[m - 1, m - 2] = 4.0 / (2 * dx)
        K[m - 1, m - 3] = -1.0 / (2 * dx)
        mass[-1] = params.beta
    return sp.csc_matrix(K), mass


class _Stepper:
    def __init__(self, params, grid: FdGrid, dirichlet=False):
        self.K, self.mass = _operators(params, grid.m, dirichlet)
        dt, th = grid.dt, grid.theta
        M = sp.diags(self.mass)
        try:
            self.lu = splu(sp.csc_matrix(M / dt - th * self.K))
        except RuntimeError as exc:
            raise SolveFailure(f"singular step matrix: {exc}") from exc
        self.explicit = sp.csr_matrix(M / dt + (1 - th) * self.K)
        self.theta = th

    def step(self, u, b_old, b_new, extra=None):
        rhs = self.explicit @ u + self.theta * b_new + (1 - self.theta) * b_old
        if extra is not None:
            rhs += extra
        out = self.lu.solve(rhs)
        if not np.all(np.isfinite(out)):
            raise SolveFailure("non-finite FD solution")
        return out


def _nodes(h, m):
    return np.linspace(0.0, h, m + 1)


def _steps_for(times, dt):
    k = np.rint(np.asarray(times, dtype=float) / dt).astype(int)
    if np.any(np.abs(k * dt - times) > 1e-9 * max(1.0, float(np.max(times, initial=0.0)))):
        raise ValidationError("sample times must be multiples of dt")
    return k


def fd_solve_shear(
    params: SlipParams,
    delta: float,
    grid: FdGrid,
    t_end: float,
    sample_times=None,
) -> FdField:
    """March the ramped-wall problem from rest; sample at ``sample_times``
    (default: every step)."""
    if not delta > 0:
        raise ValidationError("finite delta > 0 required")
    n_steps = int(round(t_end / grid.dt))
    if n_steps < 1:
        raise ValidationError("t_end must be at least dt")
    times = grid.dt * np.arange(n_steps + 1) if sample_times is None else np.asarray(sample_times, float)
    wanted = _steps_for(times, grid.dt)
    stepper = _Stepper(params, grid)
    m = grid.m

    def load(t):
        b = np.zeros(m)
        b[-1] = params.alpha * ramp_velocity(delta, t)
        return b

    u = np.zeros(m)
    out = np.empty((len(times), m + 1))
    lookup = {}
    for i, k in enumerate(wanted):
        lookup.setdefault(int(k), []).append(i)
    for i in lookup.get(0, []):
        out[i] = 0.0
    b_old = load(0.0)
    extra = np.zeros(m)
    for n in range(1, int(wanted.max(initial=0)) + 1):
        t = n * grid.dt
        b_new = load(t)
        extra[-1] = params.beta * (ramp_velocity(delta, t) - ramp_velocity(delta, t - grid.dt)) / grid.dt
        u = stepper.step(u, b_old, b_new, extra)
        b_old = b_new
        for i in lookup.get(n, []):
            out[i, 0] = 0.0
            out[i, 1:] = u
    return FdField(times, _nodes(params.h, m), out)


def fd_solve_periodic(
    params: SlipParams,
    T: float,
    grid: FdGrid,
    n_periods: int = 20,
    samples: int = 64,
    dirichlet: bool = False,
    forced: bool = True,
) -> FdField:
    """March from rest under the pressure gradient ``cos(2 pi t/T)`` and
    return ``samples`` equispaced snapshots of the last period.

    ``dt`` is adjusted to the nearest divisor of ``T``.  Raises
    ``NotPeriodic`` unless the last period map moved the state by at most
    ``1e-8`` in the max norm.
    """
    if n_periods < 20:
        raise ValidationError("n_periods must be at least 20")
    per = max(samples, int(round(T / grid.dt)))
    per = samples * math.ceil(per / samples)
    dt = T / per
    stepper = _Stepper(params, FdGrid(grid.m, dt, grid.theta), dirichlet)
    m = grid.m
    w = 2 * math.pi / T
    shape = np.ones(m)
    shape[-1] = 0.0

    def load(t):
        return -math.cos(w * t) * shape if forced else np.zeros(m)

    u = np.zeros(m)
    previous = u.copy()
    snaps = np.zeros((samples, m + 1))
    stride = per // samples
    b_old = load(0.0)
    for p in range(n_periods):
        last = p == n_periods - 1
        for n in range(per):
            if last and n % stride == 0:
                snaps[n // stride, 1:] = u
            t = (p * per + n + 1) * dt
            b_new = load(t)
            u = stepper.step(u, b_old, b_new)
            b_old = b_new
        if p < n_periods - 1:
            previous = u.copy()
    drift = float(np.max(np.abs(u - previous)))
    if drift > PERIOD_TOL:
        raise NotPeriodic(f"period map moved the state by {drift:.3e} after {n_periods} periods")
    times = T * np.arange(samples) / samples
    return FdField(times, _nodes(params.h, m), snaps)

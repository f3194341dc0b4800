"""Channel flow started by a wall that ramps up to unit speed.

The upper wall moves with ``V(t) = min(t/delta, 1)``; the fluid obeys the
heat equation with ``u(t, 0) = 0`` and the dynamic slip law at ``x = h``.
Modal coefficients follow from ``c' + lam^2 c = (alpha V + beta V') u(h)``.

Series reconstructions default to ``resum=True``: the time-independent part
``sum_i alpha u_i(h) u_i(x) / lam_i^2`` equals ``alpha x / (alpha h + 1)``
exactly, so it is added in closed form and only the decaying transient is
truncated.  ``resum=False`` gives the plain truncated sum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AnalyticLimitMisuse, DomainError, Inconclusive, ValidationError
from .spectral import Basis, SlipParams, build_basis

DEFAULT_MODES = 10
MONOTONE_SLACK = 1e-9


class AnalyticLimit(enum.Enum):
    """Marker for the instantaneous-start limit ``delta -> 0+``."""

    DELTA_TO_ZERO = "delta->0"


ANALYTIC_LIMIT = AnalyticLimit.DELTA_TO_ZERO


class Response(enum.Enum):
    MONOTONE = "Monotone"
    OVERSHOOT = "Overshoot"
    NAVIER_JUMP = "NavierJump"


@dataclass(frozen=True, eq=False)
class ShearScenario:
    params: SlipParams
    n_modes: int = DEFAULT_MODES
    delta: float | AnalyticLimit = 0.01
    basis: Basis = field(default=None)

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValidationError("n_modes must be >= 1")
        if self.delta is not ANALYTIC_LIMIT and not 0 < self.delta <= 1:
            raise ValidationError("delta must lie in (0, 1]")
        if self.basis is None:
            object.__setattr__(self, "basis", build_basis(self.params, self.n_modes))
        elif len(self.basis) != self.n_modes:
            raise ValidationError("basis size does not match n_modes")


def ramp_velocity(delta, t):
    t = np.asarray(t, dtype=float)
    out = np.minimum(t / delta, 1.0)
    return out if out.ndim else float(out)


def ramp_rate(delta, t, side=1):
    """``V'(t)``; at the kink ``t = delta`` ``side`` picks the one-sided limit."""
    t = np.asarray(t, dtype=float)
    ramping = (t < delta) if side > 0 else (t <= delta)
    out = np.where(ramping & (t >= 0), 1.0 / delta, 0.0)
    return out if out.ndim else float(out)


def _require_finite(scenario):
    if scenario.delta is ANALYTIC_LIMIT:
        raise AnalyticLimitMisuse("finite ramp required; use boundary_slip_limit")
    return float(scenario.delta)


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("t must be nonnegative")
    return t


def _transient(lam, uh, gap, delta, t):
    """Coefficient minus its quasi-static part ``alpha t_eff u(h)/lam^2``.

    Shapes: ``lam, uh, gap`` are per mode ``(n, 1)``, ``t`` is ``(1, m)``.
    """
    lam2 = lam**2
    early = gap * uh * -np.expm1(-lam2 * np.minimum(t, delta)) / (delta * lam2**2)
    late = np.exp(-lam2 * np.maximum(t - delta, 0.0))
    return np.where(t < delta, early, early * late)


def coefficients(scenario: ShearScenario, t) -> np.ndarray:
    """All modal coefficients, shape ``(n_modes,) + shape(t)``."""
    delta = _require_finite(scenario)
    t = _check_time(t)
    b = scenario.basis
    p = scenario.params
    lam = b.lambdas[:, None]
    uh = b.wall_values[:, None]
    gap = p.beta * lam**2 - p.alpha
    tt = t.reshape(1, -1)
    quasi = p.alpha * uh / lam**2 * np.minimum(tt / delta, 1.0)
    out = quasi + _transient(lam, uh, gap, delta, tt)
    return out.reshape((len(b),) + t.shape)


def coeff(scenario: ShearScenario, j: int, t):
    """Coefficient ``c_j(t)`` of mode ``j`` (1-based), both ramp branches."""
    if not 1 <= j <= scenario.n_modes:
        raise ValidationError(f"mode index {j} outside 1..{scenario.n_modes}")
    delta = _require_finite(scenario)
    t = _check_time(t)
    p = scenario.params
    lam = scenario.basis.lambdas[j - 1]
    uh = scenario.basis.wall_values[j - 1]
    lam2 = lam**2
    gap = p.beta * lam2 - p.alpha
    # closed forms of the two branches; expm1 keeps small lam^2 delta accurate
    early = uh / (delta * lam2) * (p.alpha * t - gap * np.expm1(-lam2 * t) / lam2)
    decay = np.exp(-lam2 * np.maximum(t - delta, 0.0))
    late = uh / lam2 * (p.alpha - gap * decay * np.expm1(-lam2 * delta) / (lam2 * delta))
    out = np.where(t < delta, early, late)
    return out if out.ndim else float(out)


def stationary(params: SlipParams, x):
    """Long-time profile ``alpha x / (alpha h + 1)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > params.h):
        raise DomainError(f"x must lie in [0, {params.h}]")
    out = params.alpha * x / (params.alpha * params.h + 1.0)
    return out if out.ndim else float(out)


def solution(scenario: ShearScenario, t, x, resum: bool = True):
    """Velocity ``w(t, x)`` on the outer product grid ``t x x``.

    Scalars in, scalar out; otherwise shape ``shape(t) + shape(x)``.
    """
    delta = _require_finite(scenario)
    t = _check_time(t)
    x = np.asarray(x, dtype=float)
    p = scenario.params
    if np.any(x < 0) or np.any(x > p.h):
        raise DomainError(f"x must lie in [0, {p.h}]")
    b = scenario.basis
    modes = b.values(x.ravel())
    if resum:
        lam = b.lambdas[:, None]
        uh = b.wall_values[:, None]
        gap = p.beta * lam**2 - p.alpha
        trans = _transient(lam, uh, gap, delta, t.reshape(1, -1))
        ramp = np.minimum(t.ravel() / delta, 1.0)
        out = ramp[:, None] * stationary(p, x.ravel())[None, :] + trans.T @ modes
    else:
        out = coefficients(scenario, t.ravel()).reshape(len(b), -1).T @ modes
    out = out.reshape(t.shape + x.shape)
    return out if out.ndim else float(out)


def _defect_terms(basis: Basis, params: SlipParams, t):
    lam = basis.lambdas[:, None]
    uh = basis.wall_values[:, None]
    gap = params.beta * lam**2 - params.alpha
    return uh**2 / lam**2 * gap * np.exp(-(lam**2) * np.asarray(t, dtype=float).reshape(1, -1))


def slip_defect_terms(params: SlipParams, n: int, t, basis: Basis | None = None) -> np.ndarray:
    """Individual terms of ``w(t, h) - w_stat(h)``, shape ``(n,) + shape(t)``."""
    t = np.asarray(t, dtype=float)
    basis = basis or build_basis(params, n)
    return _defect_terms(basis, params, t).reshape((n,) + t.shape)


def slip_defect(params: SlipParams, n: int, t, basis: Basis | None = None):
    """``w(t, h) - w_stat(h)`` in the instantaneous-start limit, ``n`` terms."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValidationError("t must be positive")
    out = slip_defect_terms(params, n, t, basis).sum(axis=0)
    return out if out.ndim else float(out)


def boundary_slip_limit(
    params: SlipParams,
    n: int,
    t,
    resum: bool = True,
    basis: Basis | None = None,
):
    """Wall velocity ``w(t, h)`` as ``delta -> 0+`` (defined for ``t > 0``)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValidationError("t must be positive")
    basis = basis or build_basis(params, n)
    if resum:
        out = stationary(params, params.h) + _defect_terms(basis, params, t).sum(axis=0)
    else:
        lam2 = basis.lambdas[:, None] ** 2
        gap = params.beta * lam2 - params.alpha
        weight = 2.0 / (params.h * (lam2 + gap**2) + params.alpha + params.beta * lam2)
        out = (weight * (params.alpha + gap * np.exp(-lam2 * t.reshape(1, -1)))).sum(axis=0)
    out = out.reshape(t.shape)
    return out if out.ndim else float(out)


def relative_slip(params: SlipParams, n: int, t, resum: bool = True, basis: Basis | None = None):
    """``1 - w(t, h)``: wall speed minus fluid speed at the wall."""
    return 1.0 - np.asarray(boundary_slip_limit(params, n, t, resum, basis))


def classify_response(params: SlipParams, n: int, t_grid) -> Response:
    """Shape of ``1 - w(t, h)`` over an increasing grid of positive times."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 50:
        raise ValidationError("t_grid needs at least 50 points")
    if np.any(np.diff(t_grid) <= 0) or t_grid[0] <= 0:
        raise ValidationError("t_grid must be positive and strictly increasing")
    slip = relative_slip(params, n, t_grid)
    steps = np.diff(slip)
    if np.all(steps >= -MONOTONE_SLACK):
        return Response.MONOTONE
    if params.beta == 0 and np.all(steps[1:] <= MONOTONE_SLACK):
        return Response.NAVIER_JUMP
    k = int(np.argmax(slip))
    if 0 < k < len(slip) - 1 and slip[k] > slip[0] + MONOTONE_SLACK and slip[k] > slip[-1] + MONOTONE_SLACK:
        return Response.OVERSHOOT
    raise Inconclusive(f"no known response pattern for alpha={params.alpha}, beta={params.beta}")


def response_grid(t_end: float, samples: int) -> np.ndarray:
    """Sample times ``t_end/samples, 2 t_end/samples, ..., t_end``."""
    if t_end <= 0 or samples < 1:
        raise ValidationError("need t_end > 0 and samples >= 1")
    return t_end * np.arange(1, samples + 1) / samples


def stationary_wall_value(params: SlipParams) -> float:
    return params.alpha * params.h / (params.alpha * params.h + 1.0)


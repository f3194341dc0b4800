"""Time-periodic channel flow driven by the pressure gradient ``cos(2 pi t/T)``.

Each mode obeys ``c' + lam^2 c = K cos(w t)`` with ``w = 2 pi/T`` and load
``K = -int_0^h u dx = A (cos(lam h) - 1)/lam``; the periodic coefficient is

    c(t) = K (w sin(w t) + lam^2 cos(w t)) / (w^2 + lam^4).

The no-slip reference uses the sine basis with ``lam = i pi/h``.  Its load
vanishes for even ``i`` and equals ``-2 A/lam`` for odd ``i``.

``resum=True`` in the reconstructions adds the closed-form quasi-static
profile ``cos(w t) s(x)`` (``-s'' = -1`` with the wall condition) and
truncates only the remainder, which decays like ``lam^-4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .spectral import Basis, SlipParams, build_basis, dirichlet_basis

DEFAULT_PERIOD = 2 * math.pi
DEFAULT_MODES = 10


@dataclass(frozen=True, eq=False)
class PeriodicScenario:
    params: SlipParams
    period: float = DEFAULT_PERIOD
    n_modes: int = DEFAULT_MODES
    basis: Basis = field(default=None)

    def __post_init__(self):
        if not self.period > 0:
            raise ValidationError("period must be positive")
        if self.n_modes < 1:
            raise ValidationError("n_modes must be >= 1")
        if self.basis is None:
            object.__setattr__(self, "basis", build_basis(self.params, self.n_modes))
        elif len(self.basis) != self.n_modes:
            raise ValidationError("basis size does not match n_modes")


def _omega(period):
    return 2 * math.pi / period


def _slip_loads(basis: Basis) -> np.ndarray:
    lam = basis.lambdas
    return basis.amplitudes * (np.cos(lam * basis.h) - 1.0) / lam


def _dirichlet_loads(basis: Basis) -> np.ndarray:
    odd = (np.arange(1, len(basis) + 1) % 2) == 1
    return np.where(odd, -2.0 * basis.amplitudes / basis.lambdas, 0.0)


def _loads(basis: Basis) -> np.ndarray:
    return _dirichlet_loads(basis) if basis.kind == "dirichlet" else _slip_loads(basis)


def _periodic_coefficients(loads, lambdas, period, t):
    w = _omega(period)
    lam2 = lambdas[:, None] ** 2
    tt = np.asarray(t, dtype=float).reshape(1, -1)
    return loads[:, None] * (w * np.sin(w * tt) + lam2 * np.cos(w * tt)) / (w**2 + lam2**2)


def _periodic_derivatives(loads, lambdas, period, t):
    w = _omega(period)
    lam2 = lambdas[:, None] ** 2
    tt = np.asarray(t, dtype=float).reshape(1, -1)
    return loads[:, None] * w * (w * np.cos(w * tt) - lam2 * np.sin(w * tt)) / (w**2 + lam2**2)


def _check_mode(scenario, j):
    if not 1 <= j <= scenario.n_modes:
        raise ValidationError(f"mode index {j} outside 1..{scenario.n_modes}")


def _squeeze(a, t):
    a = a.reshape(np.shape(t))
    return a if a.ndim else float(a)


def coefficients(scenario: PeriodicScenario, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    b = scenario.basis
    out = _periodic_coefficients(_loads(b), b.lambdas, scenario.period, t)
    return out.reshape((len(b),) + t.shape)


def coeff0(scenario: PeriodicScenario, j: int) -> float:
    """Initial (= final) value ``lam T^2 A (cos(lam h) - 1) / (4 pi^2 + lam^4 T^2)``."""
    _check_mode(scenario, j)
    lam = scenario.basis.lambdas[j - 1]
    amp = scenario.basis.amplitudes[j - 1]
    T = scenario.period
    return float(lam * T**2 / (4 * math.pi**2 + lam**4 * T**2) * amp * (math.cos(lam * scenario.params.h) - 1.0))


def coeff(scenario: PeriodicScenario, j: int, t):
    """``c_j(t)`` written as in the derivation:
    ``2 pi T/(4 pi^2 + lam^4 T^2) * A/lam (cos(lam h) - 1) [sin + lam^2 T/(2 pi) cos]``."""
    _check_mode(scenario, j)
    t = np.asarray(t, dtype=float)
    lam = scenario.basis.lambdas[j - 1]
    amp = scenario.basis.amplitudes[j - 1]
    T = scenario.period
    phase = 2 * math.pi * t / T
    pref = 2 * math.pi * T / (4 * math.pi**2 + lam**4 * T**2) * amp / lam * (math.cos(lam * scenario.params.h) - 1.0)
    out = pref * (np.sin(phase) + lam**2 * T / (2 * math.pi) * np.cos(phase))
    return out if out.ndim else float(out)


def coeff_derivative(scenario: PeriodicScenario, j: int, t):
    _check_mode(scenario, j)
    b = scenario.basis
    out = _periodic_derivatives(_loads(b)[j - 1 : j], b.lambdas[j - 1 : j], scenario.period, t)
    return _squeeze(out, t)


def ode_residual(scenario: PeriodicScenario, j: int, t):
    """``c_j' + lam_j^2 c_j - K_j cos(2 pi t/T)`` with the analytic ``c_j'``."""
    _check_mode(scenario, j)
    t = np.asarray(t, dtype=float)
    lam = scenario.basis.lambdas[j - 1]
    load = _slip_loads(scenario.basis)[j - 1]
    forcing = load * np.cos(2 * math.pi * t / scenario.period)
    out = np.asarray(coeff_derivative(scenario, j, t)) + lam**2 * np.asarray(coeff(scenario, j, t)) - forcing
    return out if out.ndim else float(out)


def quasi_static_slope(params: SlipParams | None, h: float) -> float:
    """``s'(h)`` for ``-s'' = -1``, ``s(0) = 0`` and ``alpha s(h) + s'(h) = 0``
    (``params=None`` means no slip, ``s(h) = 0``)."""
    if params is None:
        return h / 2
    a = params.alpha
    return a * h**2 / (2 * (a * h + 1))


def quasi_static_profile(params: SlipParams | None, h: float, x):
    x = np.asarray(x, dtype=float)
    if params is None:
        return 0.5 * x**2 - 0.5 * h * x
    a = params.alpha
    return 0.5 * x**2 - (a * h**2 / 2 + h) / (a * h + 1) * x


def _wall_shear(basis, params, period, t, resum):
    t = np.asarray(t, dtype=float)
    loads = _loads(basis)
    slopes = basis.wall_slopes
    out = slopes @ _periodic_coefficients(loads, basis.lambdas, period, t)
    if resum:
        tail = quasi_static_slope(params, basis.h) - np.sum(loads * slopes / basis.lambdas**2)
        out = out + tail * np.cos(_omega(period) * t.reshape(-1))
    return _squeeze(out, t)


def wall_shear(scenario: PeriodicScenario, t, resum: bool = True):
    """``d_x w(t, h) = sum_i c_i(t) lam_i A_i cos(lam_i h)``."""
    return _wall_shear(scenario.basis, scenario.params, scenario.period, t, resum)


def _solution(basis, params, period, t, x, resum):
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > basis.h):
        raise DomainError(f"x must lie in [0, {basis.h}]")
    loads = _loads(basis)
    modes = basis.values(x.ravel())
    out = _periodic_coefficients(loads, basis.lambdas, period, t.ravel()).T @ modes
    if resum:
        tail = quasi_static_profile(params, basis.h, x.ravel()) - (loads / basis.lambdas**2) @ modes
        out = out + np.cos(_omega(period) * t.ravel())[:, None] * tail[None, :]
    out = out.reshape(t.shape + x.shape)
    return out if out.ndim else float(out)


def solution(scenario: PeriodicScenario, t, x, resum: bool = True):
    """``w(t, x) = sum_i c_i(t) A_i sin(lam_i x)`` on the grid ``t x x``."""
    return _solution(scenario.basis, scenario.params, scenario.period, t, x, resum)


def dirichlet_coeff(h: float, T: float, j: int, t):
    """No-slip coefficient; identically zero for even ``j``."""
    if j < 1:
        raise ValidationError("mode index starts at 1")
    t = np.asarray(t, dtype=float)
    if j % 2 == 0:
        out = np.zeros_like(t)
        return out if out.ndim else 0.0
    lam = j * math.pi / h
    amp = math.sqrt(2.0 / h)
    phase = 2 * math.pi * t / T
    pref = 2 * math.pi * T / (4 * math.pi**2 + lam**4 * T**2) * (-2.0 * amp / lam)
    out = pref * (np.sin(phase) + lam**2 * T / (2 * math.pi) * np.cos(phase))
    return out if out.ndim else float(out)


def dirichlet_ode_residual(h: float, T: float, j: int, t):
    t = np.asarray(t, dtype=float)
    b = dirichlet_basis(h, j)
    load = _dirichlet_loads(b)[-1:]
    lam = b.lambdas[-1:]
    deriv = _periodic_derivatives(load, lam, T, t).reshape(t.shape)
    forcing = load[0] * np.cos(2 * math.pi * t / T)
    out = deriv + lam[0] ** 2 * np.asarray(dirichlet_coeff(h, T, j, t)) - forcing
    return out if out.ndim else float(out)


def dirichlet_wall_shear(h: float, T: float, n: int, t, resum: bool = True):
    return _wall_shear(dirichlet_basis(h, n), None, T, t, resum)


def dirichlet_solution(h: float, T: float, n: int, t, x, resum: bool = True):
    return _solution(dirichlet_basis(h, n), None, T, t, x, resum)


def period_mean(fn, period: float, samples: int = 256) -> float:
    """Mean over one period by the rectangle rule (exact for trigonometric
    polynomials of degree below ``samples``)."""
    t = period * np.arange(samples) / samples
    return float(np.mean(fn(t)))

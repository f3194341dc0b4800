"""Eigenbasis of the 1D channel with a dynamic slip wall.

The modes solve ``-u'' = lam**2 u`` on ``(0, h)`` with ``u(0) = 0`` and the
wall condition ``alpha u(h) + u'(h) = beta lam**2 u(h)``.  They are
``u_i(x) = A_i sin(lam_i x)`` and are orthonormal for the weighted product

    (f, g)_H = int_0^h f g dx + beta f(h) g(h).

Eigenvalues are reported as ``lam`` (so that the operator eigenvalue of
``-u''`` is ``lam**2``).
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BracketFailure, DomainError, ValidationError

DEFAULT_QUAD_POINTS = 64

# Bracket shrink and bisection width, both relative to the bracket length pi/h.
_SHRINK = 1e-9
_BISECT_WIDTH = 1e-13
_NEWTON_STEPS = 5
_ENDPOINT_ZERO = 1e-14


class Unbounded(enum.Enum):
    """Tag for counts that are infinite (Navier slip has infinitely many
    negative slip-defect terms)."""

    INFINITE = "infinite"

    def __str__(self):
        return "inf"


INFINITE = Unbounded.INFINITE


@dataclass(frozen=True)
class SlipParams:
    """Wall law coefficients and channel height.

    ``alpha`` weights the (Navier) slip stress, ``beta`` the time derivative
    of the wall velocity; ``tol`` scales the accepted eigenvalue residual.
    """

    alpha: float = 0.0
    beta: float = 0.0
    h: float = math.pi
    tol: float = 1e-12

    def __post_init__(self):
        for name in ("alpha", "beta", "h", "tol"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise ValidationError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        if self.alpha < 0 or self.beta < 0:
            raise ValidationError("alpha and beta must be nonnegative")
        if self.h <= 0 or self.tol <= 0:
            raise ValidationError("h and tol must be positive")

    @property
    def regime(self) -> str:
        if self.alpha == 0 and self.beta == 0:
            return "perfect slip"
        if self.beta == 0:
            return "Navier slip"
        return "dynamic slip"


@dataclass(frozen=True)
class EigenPair:
    index: int
    lam: float
    amplitude: float
    h: float = math.pi

    def __call__(self, x):
        return eval_mode(self, x)


@dataclass(frozen=True, eq=False)
class Basis:
    """First ``n`` modes of a channel, stored as arrays.

    ``beta`` is the boundary weight of the inner product the basis is
    orthonormal in (zero for the Dirichlet reference basis).
    """

    h: float
    beta: float
    lambdas: np.ndarray
    amplitudes: np.ndarray
    params: SlipParams | None = None
    kind: str = "slip"

    def __post_init__(self):
        self.lambdas.setflags(write=False)
        self.amplitudes.setflags(write=False)

    def __len__(self):
        return len(self.lambdas)

    @property
    def pairs(self) -> list[EigenPair]:
        return [
            EigenPair(i + 1, float(lam), float(amp), self.h)
            for i, (lam, amp) in enumerate(zip(self.lambdas, self.amplitudes))
        ]

    def values(self, x) -> np.ndarray:
        """Mode values, shape ``(n_modes,) + shape(x)``."""
        x = np.asarray(x, dtype=float)
        lam = self.lambdas.reshape((-1,) + (1,) * x.ndim)
        amp = self.amplitudes.reshape(lam.shape)
        return amp * np.sin(lam * x)

    def derivatives(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lam = self.lambdas.reshape((-1,) + (1,) * x.ndim)
        amp = self.amplitudes.reshape(lam.shape)
        return amp * lam * np.cos(lam * x)

    @property
    def wall_values(self) -> np.ndarray:
        """``u_i(h)``."""
        return self.amplitudes * np.sin(self.lambdas * self.h)

    @property
    def wall_slopes(self) -> np.ndarray:
        """``u_i'(h)``."""
        return self.amplitudes * self.lambdas * np.cos(self.lambdas * self.h)

    @property
    def integrals(self) -> np.ndarray:
        """``int_0^h u_i dx``."""
        lam = self.lambdas
        return self.amplitudes * (1.0 - np.cos(lam * self.h)) / lam


def eigen_condition(params: SlipParams, lam):
    """Residual ``(alpha - beta lam^2) sin(lam h) + lam cos(lam h)``."""
    lam = np.asarray(lam, dtype=float)
    a, b, h = params.alpha, params.beta, params.h
    out = (a - b * lam**2) * np.sin(lam * h) + lam * np.cos(lam * h)
    return out if out.ndim else float(out)


def eigen_condition_slope(params: SlipParams, lam):
    lam = np.asarray(lam, dtype=float)
    a, b, h = params.alpha, params.beta, params.h
    s, c = np.sin(lam * h), np.cos(lam * h)
    out = -2 * b * lam * s + (a - b * lam**2) * h * c + c - lam * h * s
    return out if out.ndim else float(out)


def solve_eigenvalues(params: SlipParams, n: int, first: int = 1) -> np.ndarray:
    """Eigenvalues ``lam_first .. lam_{first+n-1}``, one per bracket
    ``((i-1) pi/h, i pi/h)``.

    Vectorized bisection on the shrunken brackets followed by a few
    guarded Newton steps.
    """
    if n < 1 or first < 1:
        raise ValidationError("mode indices start at 1")
    idx = np.arange(first, first + n, dtype=float)
    width = math.pi / params.h
    if params.alpha == 0 and params.beta == 0:
        return (idx - 0.5) * width

    lo = (idx - 1) * width + _SHRINK * width
    hi = idx * width - _SHRINK * width
    f_lo = eigen_condition(params, lo)
    f_hi = eigen_condition(params, hi)
    bad = (np.abs(f_lo) < _ENDPOINT_ZERO) | (np.abs(f_hi) < _ENDPOINT_ZERO)
    bad |= np.sign(f_lo) == np.sign(f_hi)
    if np.any(bad):
        i = int(idx[np.argmax(bad)])
        raise BracketFailure(
            f"no sign change for mode {i} with alpha={params.alpha}, "
            f"beta={params.beta}, h={params.h}"
        )

    sign_lo = np.sign(f_lo)
    for _ in range(200):
        if np.max(hi - lo) <= _BISECT_WIDTH * width:
            break
        mid = 0.5 * (lo + hi)
        f_mid = eigen_condition(params, mid)
        left = np.sign(f_mid) == sign_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)

    lam = 0.5 * (lo + hi)
    f_lam = np.abs(eigen_condition(params, lam))
    lo0 = (idx - 1) * width
    hi0 = idx * width
    for _ in range(_NEWTON_STEPS):
        slope = eigen_condition_slope(params, lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = lam - eigen_condition(params, lam) / slope
        f_trial = np.abs(eigen_condition(params, trial))
        # a Newton step that leaves the bracket or worsens the residual is dropped
        ok = np.isfinite(trial) & (trial > lo0) & (trial < hi0) & (f_trial <= f_lam)
        if not np.any(ok):
            break
        lam = np.where(ok, trial, lam)
        f_lam = np.where(ok, f_trial, f_lam)
    return lam


def solve_eigenvalue(params: SlipParams, i: int) -> float:
    """The unique root of the eigenvalue condition in ``((i-1) pi/h, i pi/h)``."""
    return float(solve_eigenvalues(params, 1, first=i)[0])


def amplitude(params: SlipParams, lam):
    """Normalization making ``A sin(lam x)`` a unit vector in the H product."""
    lam = np.asarray(lam, dtype=float)
    s2 = np.sin(lam * params.h) ** 2
    out = (params.h / 2 + (params.alpha + params.beta * lam**2) / (2 * lam**2) * s2) ** -0.5
    return out if out.ndim else float(out)


def eigenpair(params: SlipParams, i: int) -> EigenPair:
    lam = solve_eigenvalue(params, i)
    return EigenPair(i, lam, amplitude(params, lam), params.h)


def build_basis(params: SlipParams, n: int) -> Basis:
    lam = solve_eigenvalues(params, n)
    return Basis(params.h, params.beta, lam, np.asarray(amplitude(params, lam)), params)


def dirichlet_basis(h: float, n: int) -> Basis:
    """Sine basis of the no-slip channel: ``lam_i = i pi/h``, ``A_i = sqrt(2/h)``."""
    if h <= 0 or n < 1:
        raise ValidationError("need h > 0 and n >= 1")
    lam = np.arange(1, n + 1) * math.pi / h
    return Basis(h, 0.0, lam, np.full(n, math.sqrt(2.0 / h)), None, kind="dirichlet")


def eval_mode(pair: EigenPair, x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or np.any(x_arr > pair.h):
        raise DomainError(f"x must lie in [0, {pair.h}]")
    out = pair.amplitude * np.sin(pair.lam * x_arr)
    return out if out.ndim else float(out)


def quad_points() -> int:
    """Gauss-Legendre order, overridable through ``DYNSLIP_QUAD_POINTS``."""
    raw = os.environ.get("DYNSLIP_QUAD_POINTS")
    if raw is None:
        return DEFAULT_QUAD_POINTS
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"DYNSLIP_QUAD_POINTS must be an integer, got {raw!r}")
    if value < 2:
        raise ValidationError("DYNSLIP_QUAD_POINTS must be at least 2")
    return value


@lru_cache(maxsize=32)
def _legendre(points: int):
    x, w = np.polynomial.legendre.leggauss(points)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_nodes(h: float, points: int | None = None):
    """Nodes and weights of the Gauss-Legendre rule mapped to ``[0, h]``."""
    x, w = _legendre(points or quad_points())
    return 0.5 * h * (x + 1.0), 0.5 * h * w


def h_inner(
    params: SlipParams,
    f: Callable,
    g: Callable,
    points: int | None = None,
) -> float:
    """``int_0^h f g dx + beta f(h) g(h)`` with a fixed Gauss-Legendre rule.

    ``f`` and ``g`` must accept numpy arrays.
    """
    x, w = gauss_nodes(params.h, points)
    bulk = float(np.sum(w * np.asarray(f(x)) * np.asarray(g(x))))
    if params.beta == 0:
        return bulk
    h = np.array([params.h])
    return bulk + params.beta * float(np.asarray(f(h))[0] * np.asarray(g(h))[0])


def gram_matrix(basis: Basis, points: int | None = None) -> np.ndarray:
    """Matrix of H products between the basis functions."""
    x, w = gauss_nodes(basis.h, points)
    u = basis.values(x)
    gram = (u * w) @ u.T
    uh = basis.wall_values
    return gram + basis.beta * np.outer(uh, uh)


def count_negative_modes(params: SlipParams) -> int | Unbounded:
    """Number of modes with ``beta lam_i^2 - alpha < 0``.

    Exact: the sign flips where the root passes the bracket midpoint
    ``(i - 1/2) pi / h``, i.e. for ``i < (h/pi) sqrt(alpha/beta) + 1/2``.
    """
    if params.beta == 0:
        return INFINITE if params.alpha > 0 else 0
    bound = params.h / math.pi * math.sqrt(params.alpha / params.beta) + 0.5
    return max(0, math.ceil(bound) - 1)


def negative_mode_mask(params: SlipParams, lambdas: Sequence[float]) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float)
    return params.beta * lam**2 - params.alpha < 0

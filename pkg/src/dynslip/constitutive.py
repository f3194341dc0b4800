"""Monotone stress-strain graphs, their epsilon-regularization and checks.

All shipped graphs are isotropic: the selection is ``g(D) = phi(|D|) D/|D|``
with a scalar magnitude map ``phi``.  The same code therefore handles scalar
shear rates (``|D|`` is the absolute value) and tensors (``tensor=True``,
Frobenius norm over the last two axes).

Regularization follows the two-step shift

    D~ = D_bar + eps S_bar,    S = S_bar + eps D~,

so for a given ``D`` one solves ``D = D_bar + eps g(D_bar)`` (the resolvent)
and returns ``S = g(D_bar) + eps D``.  For isotropic ``g`` this reduces to
the scalar equation ``m + eps phi(m) = |D|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AxiomViolation, ResolventDivergence, SingularAtOrigin, ValidationError

NEWTON_TOL = 1e-14
NEWTON_CAP = 200
# magnitudes below this are treated as the origin
_TINY = 1e-300


@dataclass(frozen=True)
class PowerLaw:
    """``S = 2 nu (alpha_star + |D|^2)^((r-2)/2) D``."""

    nu: float
    alpha_star: float = 0.0
    r: float = 2.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValidationError("nu must be positive")
        if self.alpha_star < 0:
            raise ValidationError("alpha_star must be nonnegative")
        if not self.r > 1:
            raise ValidationError("r must exceed 1")

    def phi(self, m):
        m = np.asarray(m, dtype=float)
        if self.r == 2:
            return 2 * self.nu * m
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2 * self.nu * (self.alpha_star + m**2) ** ((self.r - 2) / 2) * m
        return np.where(m > 0, out, 0.0)

    def dphi(self, m):
        m = np.asarray(m, dtype=float)
        a, r = self.alpha_star, self.r
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2 * self.nu * (a + m**2) ** ((r - 4) / 2) * (a + (r - 1) * m**2)
        return out

    @property
    def constants(self):
        """``(C1, C2)`` of the r-coercivity bound when known in closed form."""
        if self.alpha_star != 0 and self.r != 2:
            return None
        rp = self.r / (self.r - 1)
        return min(self.nu, self.nu * (2 * self.nu) ** (-rp)), 0.0


def Linear(nu: float) -> PowerLaw:
    """Newtonian fluid ``S = 2 nu D``."""
    return PowerLaw(nu, 0.0, 2.0)


@dataclass(frozen=True)
class Isotropic:
    """Graph given by an arbitrary magnitude map (used for test maps)."""

    phi_fn: Callable
    r: float = 2.0
    dphi_fn: Callable | None = None
    name: str = "custom"

    def phi(self, m):
        return np.asarray(self.phi_fn(np.asarray(m, dtype=float)), dtype=float)

    def dphi(self, m):
        if self.dphi_fn is None:
            return None
        return np.asarray(self.dphi_fn(np.asarray(m, dtype=float)), dtype=float)

    constants = None


@dataclass(frozen=True)
class Regularized:
    base: PowerLaw | Isotropic
    eps: float

    def __post_init__(self):
        if isinstance(self.base, Regularized):
            raise ValidationError("base must have an explicit selection")
        if not 0 < self.eps < 1:
            raise ValidationError("eps must lie in (0, 1)")

    r = 2.0
    constants = None

    def phi(self, m):
        m = np.asarray(m, dtype=float)
        return self.base.phi(resolve_magnitude(self.base, self.eps, m)) + self.eps * m


@dataclass(frozen=True)
class NavierLinear:
    gamma: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValidationError("gamma must be positive")


@dataclass(frozen=True)
class PowerLawSlip:
    gamma: float
    q: float

    def __post_init__(self):
        if not self.gamma > 0 or not self.q > 1:
            raise ValidationError("need gamma > 0 and q > 1")


def _norm(D, tensor):
    D = np.asarray(D, dtype=float)
    if tensor:
        if D.ndim < 2 or D.shape[-1] != D.shape[-2]:
            raise ValidationError("tensor input needs square trailing axes")
        return np.sqrt(np.sum(D**2, axis=(-1, -2)))
    return np.abs(D)


def _apply(phi_vals, m, D, tensor):
    D = np.asarray(D, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(m > _TINY, phi_vals / np.where(m > _TINY, m, 1.0), 0.0)
    if tensor:
        scale = scale[..., None, None]
    out = scale * D
    return out if out.ndim else float(out)


def select_stress(model, D, tensor: bool = False):
    """Explicit selection ``phi(|D|) D/|D|`` (zero at the origin)."""
    if isinstance(model, Regularized):
        raise ValidationError("use regularize_select for regularized graphs")
    m = _norm(D, tensor)
    return _apply(model.phi(m), m, D, tensor)


def stress_slope(model, d):
    """Derivative of the scalar selection ``d -> phi(|d|) sign(d)``."""
    d = np.asarray(d, dtype=float)
    m = np.abs(d)
    if isinstance(model, PowerLaw) and model.alpha_star == 0 and model.r < 2 and np.any(m == 0):
        raise SingularAtOrigin("selection is not differentiable at D = 0 for r < 2 and alpha_star = 0")
    out = model.dphi(m)
    if out is None:
        raise ValidationError("model has no derivative")
    return out if out.ndim else float(out)


def resolve_magnitude(base, eps: float, mag):
    """Solve ``m + eps phi(m) = mag`` for ``m`` in ``[0, mag]``.

    Vectorized Newton with a bisection fallback whenever the Newton step
    leaves the current bracket.
    """
    mag = np.asarray(mag, dtype=float)
    target = mag.ravel()
    lo = np.zeros_like(target)
    hi = target.copy()
    if np.any(target + eps * base.phi(hi) - target < 0):
        raise ResolventDivergence("no bracket: the base magnitude map is negative")
    slope0 = base.dphi(target)
    if slope0 is None:
        m = 0.5 * hi
    else:
        with np.errstate(invalid="ignore"):
            m = target / (1 + eps * np.where(np.isfinite(slope0), slope0, 0.0))
        m = np.clip(np.nan_to_num(m), 0.0, target)
    scale = np.maximum(target, _TINY)
    done = target <= _TINY
    m = np.where(done, 0.0, m)
    for _ in range(NEWTON_CAP):
        if np.all(done):
            break
        resid = m + eps * base.phi(m) - target
        lo = np.where(resid < 0, m, lo)
        hi = np.where(resid > 0, m, hi)
        slope = base.dphi(m)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = m - resid / (1 + eps * slope) if slope is not None else np.full_like(m, np.nan)
        inside = np.isfinite(trial) & (trial > lo) & (trial < hi)
        new = np.where(inside, trial, 0.5 * (lo + hi))
        # the residual test is relative to |D|; the bracket test catches roots
        # resolved to machine precision (m itself may be tiny)
        converged = (np.abs(resid) <= NEWTON_TOL * scale) | (hi - lo <= 4 * np.finfo(float).eps * hi)
        m = np.where(done | converged, m, new)
        done |= converged
    if not np.all(done):
        raise ResolventDivergence(f"resolvent did not converge in {NEWTON_CAP} iterations")
    out = m.reshape(mag.shape)
    return out if out.ndim else float(out)


def resolve(base, eps: float, D, tensor: bool = False):
    """``D_bar`` with ``D = D_bar + eps g(D_bar)``."""
    m_D = _norm(D, tensor)
    m = resolve_magnitude(base, eps, m_D)
    return _apply(np.asarray(m), m_D, D, tensor)


def regularize_select(base, eps: float, D, tensor: bool = False):
    """Selection of the regularized graph: ``g(D_bar) + eps D``."""
    return select(Regularized(base, eps), D, tensor)


def select(model, D, tensor: bool = False):
    """Selection for any shipped graph, regularized or explicit."""
    m = _norm(D, tensor)
    return _apply(model.phi(m), m, D, tensor)


def select_boundary(model, v):
    v = np.asarray(v, dtype=float)
    if isinstance(model, NavierLinear):
        out = model.gamma * v
    elif isinstance(model, PowerLawSlip):
        a = np.abs(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(a > 0, model.gamma * a ** (model.q - 2) * v, 0.0)
    else:
        raise ValidationError(f"unknown boundary graph {model!r}")
    return out if out.ndim else float(out)


def cutoff(delta: float, s):
    """``Phi(delta |s|)`` with ``Phi = 1`` on ``[0, 1)``, ``2 - z`` on ``[1, 2)``, 0 beyond."""
    if not 0 < delta < 1:
        raise ValidationError("delta must lie in (0, 1)")
    z = delta * np.abs(np.asarray(s, dtype=float))
    out = np.clip(2.0 - z, 0.0, 1.0)
    return out if out.ndim else float(out)


def sample_tensors(rng: np.random.Generator, count: int, dim: int = 3, low: float = 1e-3, high: float = 1e3):
    """Random symmetric matrices with log-uniform Frobenius norms in ``[low, high]``."""
    a = rng.standard_normal((count, dim, dim))
    a = 0.5 * (a + np.swapaxes(a, -1, -2))
    a /= np.sqrt(np.sum(a**2, axis=(-1, -2)))[:, None, None]
    mags = np.exp(rng.uniform(math.log(low), math.log(high), count))
    return a * mags[:, None, None]


def _pair(S, D):
    return np.sum(S * D, axis=(-1, -2))


def _frob(A):
    return np.sqrt(np.sum(A**2, axis=(-1, -2)))


@dataclass
class AxiomReport:
    r: float
    a1: bool
    a2_min_pairing: float
    a3: bool
    c1: float
    c2: float
    constants_source: str
    samples: int
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.a1 and self.a2_min_pairing >= 0 and self.a3 and self.c1 > 0


def _coercivity_fit(pairing, s_norm, d_norm, r):
    """Sampled constants: ``C1`` half the smallest ratio for ``|D| >= 1``,
    ``C2`` the largest remaining deficit."""
    rp = r / (r - 1)
    growth = s_norm**rp + d_norm**r
    big = d_norm >= 1
    if not np.any(big):
        return 0.0, math.inf
    c1 = 0.5 * float(np.min(pairing[big] / growth[big]))
    if not c1 > 0:
        return 0.0, math.inf
    c2 = max(0.0, float(np.max(c1 * growth - pairing)))
    return c1, c2


def check_axioms(model, sample_count: int = 1000, seed: int = 0) -> AxiomReport:
    """Sampled check of origin membership, monotonicity and r-coercivity.

    Maximality holds for an everywhere defined, continuous monotone map, so
    A3 is reported as the finiteness of the sampled selection.
    """
    if sample_count < 100:
        raise ValidationError("sample_count must be at least 100")
    rng = np.random.default_rng(seed)
    D1 = sample_tensors(rng, sample_count)
    D2 = sample_tensors(rng, sample_count)
    S1 = select(model, D1, tensor=True)
    S2 = select(model, D2, tensor=True)

    origin = select(model, np.zeros((1, 3, 3)), tensor=True)
    a1 = bool(np.all(origin == 0))
    if not a1:
        raise AxiomViolation("A1", np.zeros((3, 3)), "selection at the origin is nonzero")

    a3 = bool(np.all(np.isfinite(S1)) and np.all(np.isfinite(S2)))
    if not a3:
        k = int(np.argmax(~np.isfinite(_frob(S1))))
        raise AxiomViolation("A3", D1[k], "selection is not finite")

    dS, dD = S1 - S2, D1 - D2
    pairing = _pair(dS, dD)
    slack = 1e-12 * _frob(dS) * _frob(dD)
    worst = int(np.argmin(pairing + slack))
    if pairing[worst] + slack[worst] < 0:
        raise AxiomViolation("A2", (D1[worst], D2[worst]), f"negative pairing {pairing[worst]:.3e}")

    D = np.concatenate([D1, D2])
    S = np.concatenate([S1, S2])
    sd, s_norm, d_norm = _pair(S, D), _frob(S), _frob(D)
    r = model.r
    rp = r / (r - 1)
    known = model.constants
    if known is not None:
        c1, c2 = known
        source = "closed form"
        deficit = c1 * (s_norm**rp + d_norm**r) - c2 - sd
        k = int(np.argmax(deficit))
        if deficit[k] > 1e-10 * max(1.0, abs(sd[k])):
            raise AxiomViolation("A4", D[k], f"coercivity fails with C1={c1}, C2={c2}")
    else:
        c1, c2 = _coercivity_fit(sd, s_norm, d_norm, r)
        source = "sampled"
        if not c1 > 0:
            k = int(np.argmin(sd / (s_norm**rp + d_norm**r)))
            raise AxiomViolation("A4", D[k], "S:D does not dominate |S|^r' + |D|^r")
    return AxiomReport(r, a1, float(np.min(pairing)), a3, c1, c2, source, sample_count)


@dataclass
class CoercivityReport:
    passed: bool
    c1: float
    c2: float
    exponents: tuple
    reason: str = ""

    def __bool__(self):
        return self.passed


def min_coercivity_check(base, eps: float, samples: int = 1000, seed: int = 0) -> CoercivityReport:
    """Sampled check of
    ``S:D >= C1 (|S|^min(r',2) + |D|^min(r,2)) - C2`` on the regularized graph.

    The base must itself be r-coercive.  ``C1`` is picked from a log grid as
    the largest value whose ``C2`` (the worst sampled deficit) stays below
    one; this keeps the constants independent of the sample scale.
    """
    if samples < 100:
        raise ValidationError("samples must be at least 100")
    r = base.r
    rp = r / (r - 1)
    exps = (min(rp, 2.0), min(r, 2.0))
    try:
        check_axioms(base, samples, seed)
    except AxiomViolation as exc:
        return CoercivityReport(False, 0.0, math.inf, exps, f"base graph: {exc}")
    rng = np.random.default_rng(seed + 1)
    D = sample_tensors(rng, samples)
    S = regularize_select(base, eps, D, tensor=True)
    sd = _pair(S, D)
    growth = _frob(S) ** exps[0] + _frob(D) ** exps[1]
    for c1 in np.logspace(0, -12, 121):
        c2 = max(0.0, float(np.max(c1 * growth - sd)))
        if c2 <= 1.0:
            return CoercivityReport(True, float(c1), c2, exps)
    return CoercivityReport(False, 0.0, math.inf, exps, "no constant pair found on the grid")

"""Self-checks runnable from the command line (``dynslip verify``)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constitutive as cg
from . import periodic, shear
from .errors import DynSlipError, ValidationError
from .spectral import (
    INFINITE,
    SlipParams,
    build_basis,
    count_negative_modes,
    eigen_condition,
    gram_matrix,
    negative_mode_mask,
    solve_eigenvalues,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _spectral():
    rng = np.random.default_rng(7)
    worst = 0.0
    inside = True
    for _ in range(50):
        p = SlipParams(rng.uniform(0, 50), rng.uniform(0.01, 50), rng.uniform(0.5, 5))
        lam = solve_eigenvalues(p, 30)
        idx = np.arange(1, 31)
        inside &= bool(np.all((lam > (idx - 1) * math.pi / p.h) & (lam < idx * math.pi / p.h)))
        scale = np.maximum(1.0, np.abs(p.alpha - p.beta * lam**2))
        worst = max(worst, float(np.max(np.abs(eigen_condition(p, lam)) / scale)))
    yield Check("eigenvalues inside brackets", inside, "30 modes, 50 parameter sets")
    yield Check("eigen residual", worst <= 1e-10, f"max scaled residual {worst:.2e}")
    gram = gram_matrix(build_basis(SlipParams(10, 0.5), 20))
    err = float(np.max(np.abs(gram - np.eye(20))))
    yield Check("H-orthonormality", err <= 1e-10, f"max Gram deviation {err:.2e}")
    expected = {(1, 4): 0, (10, 0.5): 4, (30, 5): 2, (30, 30): 1, (30, 150): 0}
    ok = all(count_negative_modes(SlipParams(a, b)) == n for (a, b), n in expected.items())
    ok &= count_negative_modes(SlipParams(10, 0)) is INFINITE
    yield Check("negative-mode counts", ok, "five reference values and the Navier case")
    p = SlipParams(10, 0.5)
    direct = int(np.sum(negative_mode_mask(p, solve_eigenvalues(p, 50))))
    yield Check("count equals direct count", direct == count_negative_modes(p), f"direct {direct}")


def _shear():
    t = shear.response_grid(1.0, 200)
    expected = [((1, 4), shear.Response.MONOTONE), ((10, 0.5), shear.Response.OVERSHOOT), ((10, 0), shear.Response.NAVIER_JUMP)]
    for (a, b), want in expected:
        got = shear.classify_response(SlipParams(a, b), 10, t)
        yield Check(f"response ({a}, {b})", got is want, got.value)
    for beta in (5, 30, 150):
        p = SlipParams(30, beta)
        gap = abs(shear.boundary_slip_limit(p, 10, 5.0) - shear.stationary_wall_value(p))
        defect = abs(shear.slip_defect(p, 10, 5.0))
        yield Check(f"convergence beta={beta}", gap <= defect + 1e-12, f"gap {gap:.3e}, defect {defect:.3e}")


def _periodic():
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2))
    T = scen.period
    t = np.linspace(0, T, 100)
    gap = max(abs(periodic.coeff(scen, j, 0.0) - periodic.coeff(scen, j, T)) for j in range(1, 11))
    yield Check("coefficient periodicity", gap <= 1e-12, f"max gap {gap:.2e}")
    res = max(float(np.max(np.abs(periodic.ode_residual(scen, j, t)))) for j in range(1, 11))
    res_d = max(float(np.max(np.abs(periodic.dirichlet_ode_residual(math.pi, T, j, t)))) for j in range(1, 11))
    yield Check("modal ODE residual", max(res, res_d) <= 1e-10, f"slip {res:.2e}, no-slip {res_d:.2e}")
    even = all(np.all(periodic.dirichlet_coeff(math.pi, T, j, t) == 0) for j in range(2, 11, 2))
    yield Check("even no-slip modes vanish", even, "j = 2..10")
    mean = abs(periodic.period_mean(lambda s: periodic.wall_shear(scen, s), T))
    yield Check("zero-mean wall shear", mean <= 1e-10, f"mean {mean:.2e}")


def _graphs():
    models = [("linear", cg.Linear(1.0))]
    models += [(f"power law r={r:g}", cg.PowerLaw(1.0, 0.0, r)) for r in (1.2, 1.5, 2.0, 3.0)]
    models += [("power law r=3, alpha*=1", cg.PowerLaw(1.0, 1.0, 3.0))]
    for label, model in models:
        try:
            rep = cg.check_axioms(model, 1000, seed=3)
            yield Check(f"axioms {label}", rep.passed, f"C1={rep.c1:.4g}, C2={rep.c2:.4g} ({rep.constants_source})")
        except DynSlipError as exc:
            yield Check(f"axioms {label}", False, str(exc))
    rng = np.random.default_rng(11)
    for r in (1.2, 1.5, 2.0, 3.0):
        base = cg.PowerLaw(1.0, 0.0, r)
        for eps in (0.5, 0.1, 0.01):
            D1, D2 = cg.sample_tensors(rng, 2000), cg.sample_tensors(rng, 2000)
            S1 = cg.regularize_select(base, eps, D1, tensor=True)
            S2 = cg.regularize_select(base, eps, D2, tensor=True)
            dD, dS = D1 - D2, S1 - S2
            n2 = np.sum(dD**2, axis=(1, 2))
            mono = float(np.min(np.sum(dS * dD, axis=(1, 2)) / n2)) - eps
            lip = float(np.max(np.sqrt(np.sum(dS**2, axis=(1, 2)) / n2))) - (eps + 1 / eps)
            ok = mono >= -1e-10 and lip <= 1e-10 and bool(cg.min_coercivity_check(base, eps, 500))
            yield Check(f"regularized r={r:g} eps={eps:g}", ok, f"monotone margin {mono:.2e}, Lipschitz margin {lip:.2e}")


def _galerkin():
    from .galerkin import GalerkinConfig, ShearRamp, energy_report, run

    p = SlipParams(10, 0.5)
    cfg = GalerkinConfig(p, 10, forcing=ShearRamp(0.01), dt=1e-3, t_end=0.2)
    traj, ledger = run(cfg)
    ref = shear.coefficients(shear.ShearScenario(p, 10, 0.01, basis=cfg.basis), traj.t).T
    err = float(np.max(np.abs(traj.c - ref)))
    yield Check("linear Galerkin vs closed form", err <= 1e-6, f"sup error {err:.2e} at dt=1e-3")
    res = float(np.max(np.abs(energy_report(traj, ledger))))
    yield Check("energy identity", res <= 1e-6, f"max residual {res:.2e}")


def _fd():
    from .fd import FdGrid, fd_solve_shear

    p = SlipParams(10, 0.5)
    t = np.linspace(0.05, 0.5, 10)
    x = np.linspace(0, math.pi, 20)
    field = fd_solve_shear(p, 0.01, FdGrid(256, 1e-4), 0.5, t)
    series = shear.solution(shear.ShearScenario(p, 60, 0.01), t, x)
    err = float(np.max(np.abs(field.at(x) - series)))
    yield Check("shear vs finite differences", err <= 1e-3, f"sup difference {err:.2e}")


SUITES: dict[str, Callable] = {
    "spectral": _spectral,
    "shear": _shear,
    "periodic": _periodic,
    "graphs": _graphs,
    "galerkin": _galerkin,
    "fd": _fd,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return list(SUITES[name]())


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  result  detail"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  {c.detail}")
    return "\n".join(lines)

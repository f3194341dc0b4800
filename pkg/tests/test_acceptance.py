"""Acceptance criteria, one test each; every test records a pass/fail line
that the terminal summary prints."""

import filecmp
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from dynslip import constitutive as cg
from dynslip import periodic, shear
from dynslip.fd import FdGrid, fd_solve_periodic, fd_solve_shear
from dynslip.galerkin import GalerkinConfig, ShearRamp, energy_report, run
from dynslip.spectral import (
    INFINITE,
    SlipParams,
    count_negative_modes,
    eigen_condition,
    negative_mode_mask,
    solve_eigenvalues,
)


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
    assert ok, detail


def test_01_eigenvalue_localization():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    inside, worst = True, 0.0
    for _ in range(200):
        p = SlipParams(rng.uniform(0, 100), rng.uniform(1e-3, 100), rng.uniform(0.1, 10))
        lam = solve_eigenvalues(p, 30)
        i = np.arange(1, 31)
        inside &= bool(np.all(lam > (i - 1) * math.pi / p.h) and np.all(lam < i * math.pi / p.h))
        scale = np.maximum(1.0, np.abs(p.alpha - p.beta * lam**2))
        worst = max(worst, float(np.max(np.abs(eigen_condition(p, lam)) / scale)))
    elapsed = time.perf_counter() - start
    ok = inside and worst <= 1e-10 and elapsed < 1.0
    record(1, "eigenvalue localization", ok, f"inside={inside}, max scaled residual {worst:.2e}, {elapsed:.2f}s")


def test_02_negative_mode_counts():
    start = time.perf_counter()
    reference = {(1, 4): 0, (10, 0.5): 4, (30, 5): 2, (30, 30): 1, (30, 150): 0}
    ok = all(count_negative_modes(SlipParams(a, b)) == n for (a, b), n in reference.items())
    ok &= count_negative_modes(SlipParams(10, 0)) is INFINITE
    rng = np.random.default_rng(5)
    mismatches = 0
    for _ in range(100):
        # the ranges keep the count well below the 50 modes used directly
        p = SlipParams(rng.uniform(0, 30), rng.uniform(0.1, 30), rng.uniform(0.5, 4))
        direct = int(np.sum(negative_mode_mask(p, solve_eigenvalues(p, 50))))
        mismatches += direct != count_negative_modes(p)
    elapsed = time.perf_counter() - start
    ok = ok and mismatches == 0 and elapsed < 1.0
    record(2, "negative-mode counts", ok, f"reference counts and Navier case ok, {mismatches}/100 mismatches, {elapsed:.2f}s")


def test_03_figure_two_shapes():
    start = time.perf_counter()
    t = shear.response_grid(1.0, 200)
    want = {(1, 4): shear.Response.MONOTONE, (10, 0.5): shear.Response.OVERSHOOT, (10, 0): shear.Response.NAVIER_JUMP}
    got = {k: shear.classify_response(SlipParams(*k), 10, t) for k in want}
    elapsed = time.perf_counter() - start
    ok = got == want and elapsed < 1.0
    detail = ", ".join(f"{k}->{v.value}" for k, v in got.items())
    record(3, "figure 2 response shapes", ok, f"{detail}, {elapsed:.2f}s")


def test_04_figure_three_convergence():
    start = time.perf_counter()
    ok, parts = True, []
    for beta in (5, 30, 150):
        p = SlipParams(30, beta)
        gap = abs(shear.boundary_slip_limit(p, 10, 5.0) - shear.stationary_wall_value(p))
        defect = abs(shear.slip_defect(p, 10, 5.0))
        first = abs(shear.slip_defect_terms(p, 10, 5.0)[0])
        ok &= gap <= defect + 1e-12 and defect < 10 * first
        parts.append(f"beta={beta}: gap {gap:.2e} defect {defect:.2e} term1 {first:.2e}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    record(4, "figure 3 convergence", ok, "; ".join(parts) + f", {elapsed:.2f}s")


def test_05_spectral_against_finite_differences():
    start = time.perf_counter()
    p = SlipParams(10, 0.5)
    t = np.linspace(0.05, 1.0, 20)
    x = np.linspace(0, math.pi, 20)
    field = fd_solve_shear(p, 0.01, FdGrid(512, 1e-4), 1.0, t).at(x)
    err_shear = float(np.max(np.abs(field - shear.solution(shear.ShearScenario(p, 60, 0.01), t, x))))
    err_shear10 = float(np.max(np.abs(field - shear.solution(shear.ShearScenario(p, 10, 0.01), t, x))))
    q, T = SlipParams(1, 4.2), 2 * math.pi
    pf = fd_solve_periodic(q, T, FdGrid(512, 1e-4), n_periods=20, samples=20)
    err_per = float(np.max(np.abs(periodic.wall_shear(periodic.PeriodicScenario(q, T, 10), pf.t) - pf.wall_shear)))
    elapsed = time.perf_counter() - start
    ok = err_shear <= 1e-3 and err_per <= 1e-3 and elapsed < 60
    detail = (
        f"shear sup {err_shear:.2e} (60 modes; 10 modes {err_shear10:.2e}), "
        f"periodic wall shear sup {err_per:.2e}, {elapsed:.1f}s"
    )
    record(5, "spectral vs finite differences", ok, detail)


def test_06_periodic_exactness():
    start = time.perf_counter()
    T = 2 * math.pi
    scen = periodic.PeriodicScenario(SlipParams(1, 4.2), T, 10)
    t = np.linspace(0, T, 100)
    gap = max(abs(periodic.coeff(scen, j, 0.0) - periodic.coeff(scen, j, T)) for j in range(1, 11))
    res = max(float(np.max(np.abs(periodic.ode_residual(scen, j, t)))) for j in range(1, 11))
    res_d = max(float(np.max(np.abs(periodic.dirichlet_ode_residual(math.pi, T, j, t)))) for j in range(1, 11))
    even = all(np.all(periodic.dirichlet_coeff(math.pi, T, j, t) == 0) for j in range(2, 11, 2))
    mean = abs(periodic.period_mean(lambda s: periodic.wall_shear(scen, s), T))
    elapsed = time.perf_counter() - start
    ok = gap <= 1e-12 and res <= 1e-10 and res_d <= 1e-10 and even and mean <= 1e-10 and elapsed < 1.0
    detail = f"period gap {gap:.1e}, residuals {res:.1e}/{res_d:.1e}, even zero={even}, mean {mean:.1e}, {elapsed:.2f}s"
    record(6, "periodic exactness", ok, detail)


def test_07_regularized_graphs():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst_mono = worst_lip = worst_id = -np.inf
    coercive = True
    for r in (1.2, 1.5, 2.0, 3.0):
        base = cg.PowerLaw(1.0, 0.0, r)
        for eps in (0.5, 0.1, 0.01):
            D1, D2 = cg.sample_tensors(rng, 10_000), cg.sample_tensors(rng, 10_000)
            dS = cg.regularize_select(base, eps, D1, True) - cg.regularize_select(base, eps, D2, True)
            dD = D1 - D2
            n2 = np.sum(dD**2, axis=(1, 2))
            # relative shortfalls; the bounds hold when these are <= 0 up to rounding
            worst_mono = max(worst_mono, float(np.max(eps - np.sum(dS * dD, axis=(1, 2)) / n2)) / eps)
            lip = np.sqrt(np.sum(dS**2, axis=(1, 2)) / n2)
            worst_lip = max(worst_lip, float(np.max(lip - (eps + 1 / eps))) / (eps + 1 / eps))
            Db = cg.resolve(base, eps, D1, True)
            worst_id = max(worst_id, float(np.max(np.abs(Db + eps * cg.select_stress(base, Db, True) - D1))))
            coercive &= bool(cg.min_coercivity_check(base, eps, 1000))
    elapsed = time.perf_counter() - start
    ok = worst_mono <= 1e-10 and worst_lip <= 1e-10 and worst_id <= 1e-10 and coercive and elapsed < 10
    detail = (
        f"monotone shortfall {worst_mono:.1e}, Lipschitz excess {worst_lip:.1e}, "
        f"resolvent identity {worst_id:.1e}, min coercivity={coercive}, {elapsed:.1f}s"
    )
    record(7, "regularized graph properties", ok, detail)


def test_08_galerkin_fidelity():
    start = time.perf_counter()
    p = SlipParams(10, 0.5)
    cfg = GalerkinConfig(p, 10, forcing=ShearRamp(0.01), dt=1e-4, t_end=1.0)
    traj, ledger = run(cfg)
    ref = shear.coefficients(shear.ShearScenario(p, 10, 0.01, basis=cfg.basis), traj.t).T
    err = float(np.max(np.abs(traj.c - ref)))
    residual = float(np.max(np.abs(energy_report(traj, ledger))))
    orders = {}
    for rule in ("trapezoid", "stage"):
        res = []
        for dt in (1e-3, 5e-4, 2.5e-4):
            c = GalerkinConfig(p, 10, forcing=ShearRamp(0.01), dt=dt, t_end=1.0, ledger_rule=rule, basis=cfg.basis)
            res.append(float(np.max(np.abs(energy_report(*run(c))))))
        orders[rule] = np.log2(np.array(res[:-1]) / np.array(res[1:]))
    elapsed = time.perf_counter() - start
    ok = err <= 1e-4 and residual <= 1e-6 and all(np.all(o >= 1.9) for o in orders.values()) and elapsed < 30
    detail = (
        f"sup error {err:.1e}, energy residual {residual:.1e}, observed orders trapezoid "
        f"{np.round(orders['trapezoid'], 2).tolist()} stage {np.round(orders['stage'], 2).tolist()}, {elapsed:.1f}s"
    )
    record(8, "Galerkin fidelity", ok, detail)


def test_09_nonlinear_galerkin():
    start = time.perf_counter()
    cfg = GalerkinConfig(SlipParams(10, 0.5), 10, graph=cg.PowerLaw(1, 0, 3), forcing=ShearRamp(0.01), dt=1e-4, t_end=1.0)
    traj, ledger = run(cfg)
    residual = energy_report(traj, ledger)
    elapsed = time.perf_counter() - start
    nonneg = bool(
        np.all(ledger.dissipation_rate >= 0) and np.all(ledger.boundary_rate >= 0) and np.all(ledger.min_density >= 0)
    )
    ok = traj.t[-1] == pytest.approx(1.0) and nonneg and float(np.min(residual)) >= -1e-8 and elapsed < 60
    detail = f"reached t={traj.t[-1]:g}, dissipation nonnegative={nonneg}, min residual {np.min(residual):.1e}, {elapsed:.1f}s"
    record(9, "nonlinear Galerkin sanity", ok, detail)


def test_10_determinism(tmp_path):
    start = time.perf_counter()
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        subprocess.run([sys.executable, "-m", "dynslip", "figure", "--id", "2", "--out-dir", str(d)], check=True, capture_output=True)
    names = sorted(p.name for p in dirs[0].iterdir())
    _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
    elapsed = time.perf_counter() - start
    ok = len(names) == 3 and not mismatch and not errors and elapsed < 5
    record(10, "deterministic figure output", ok, f"{len(names)} files, {len(mismatch)} differ, {elapsed:.2f}s")

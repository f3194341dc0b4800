"""CSV recipes for the four channel-flow figures (ids 2 to 5)."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import periodic, shear
from .errors import ValidationError
from .io import RunRecord, write_csv
from .spectral import SlipParams, count_negative_modes

MODES = 10
SAMPLES = 200
H = math.pi

# (alpha, beta) per curve
FIGURE_CURVES = {
    2: [(1.0, 4.0), (10.0, 0.5), (10.0, 0.0)],
    3: [(30.0, 5.0), (30.0, 30.0), (30.0, 150.0)],
    4: [(1.0, 0.1), (1.0, 4.2), (1.0, 100.0)],
    5: [(0.1, 1.0), (4.2, 1.0), (100.0, 1.0)],
}
FIGURE_TIME = {2: 1.0, 3: 5.0, 4: 2 * math.pi, 5: 2 * math.pi}


def _tag(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _params_map(alpha, beta, t_end, modes):
    return {"alpha": alpha, "beta": beta, "h": H, "modes": modes, "t_end": t_end}


def _slip_figure(fig, out_dir, samples, modes):
    t_end = FIGURE_TIME[fig]
    t = shear.response_grid(t_end, samples)
    records = []
    for alpha, beta in FIGURE_CURVES[fig]:
        params = SlipParams(alpha, beta, H)
        slip = shear.relative_slip(params, modes, t)
        extra = {
            "negative_modes": count_negative_modes(params),
            "stationary_wall_value": shear.stationary_wall_value(params),
            "delta": "limit",
            "resummed": True,
        }
        if fig == 2:
            extra["response"] = shear.classify_response(params, modes, t).value
        path = Path(out_dir) / f"fig{fig}_alpha{_tag(alpha)}_beta{_tag(beta)}.csv"
        records.append(
            write_csv(path, ["t", "relative_slip"], [t, slip], f"figure{fig}", _params_map(alpha, beta, t_end, modes), extra)
        )
    if fig == 3:
        params = SlipParams(30.0, 0.0, H)
        level = shear.stationary_wall_value(params)
        path = Path(out_dir) / "fig3_stationary.csv"
        extra = {"stationary_wall_value": level}
        records.append(
            write_csv(
                path,
                ["t", "relative_slip"],
                [t, np.full_like(t, 1.0 - level)],
                "figure3",
                {"alpha": 30.0, "h": H, "t_end": t_end},
                extra,
            )
        )
    return records


def _shear_figure(fig, out_dir, samples, modes):
    T = FIGURE_TIME[fig]
    t = T * np.arange(samples + 1) / samples
    records = []
    for alpha, beta in FIGURE_CURVES[fig]:
        scen = periodic.PeriodicScenario(SlipParams(alpha, beta, H), T, modes)
        path = Path(out_dir) / f"fig{fig}_alpha{_tag(alpha)}_beta{_tag(beta)}.csv"
        records.append(
            write_csv(
                path,
                ["t", "wall_shear"],
                [t, periodic.wall_shear(scen, t)],
                f"figure{fig}",
                _params_map(alpha, beta, T, modes) | {"period": T},
                {"resummed": True},
            )
        )
    path = Path(out_dir) / f"fig{fig}_dirichlet.csv"
    records.append(
        write_csv(
            path,
            ["t", "wall_shear"],
            [t, periodic.dirichlet_wall_shear(H, T, modes, t)],
            f"figure{fig}",
            {"h": H, "modes": modes, "period": T, "t_end": T},
            {"boundary": "no-slip", "resummed": True},
        )
    )
    return records


def reproduce_figure(fig: int, out_dir, samples: int = SAMPLES, modes: int = MODES) -> list[RunRecord]:
    """Write one CSV per curve of figure ``fig`` into ``out_dir``."""
    if fig not in FIGURE_CURVES:
        raise ValidationError(f"figure id must be one of {sorted(FIGURE_CURVES)}")
    if samples < 50:
        raise ValidationError("samples must be at least 50")
    if fig in (2, 3):
        return _slip_figure(fig, out_dir, samples, modes)
    return _shear_figure(fig, out_dir, samples, modes)

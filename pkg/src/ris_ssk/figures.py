"""Preset scenarios for the four performance figures.

Each preset is a list of :class:`Series`; a series pairs a
:class:`SystemConfig` (with its SNR grid) with the curve kinds to produce.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import SystemConfig

KAPPA_DB = 3.0
SIGMA_E_SQ = 0.1


@dataclass(frozen=True)
class Series:
    label: str
    config: SystemConfig
    curve_kinds: tuple


def _grid(start: float, stop: float, step: float) -> tuple:
    n = int(round((stop - start) / step)) + 1
    return tuple(float(round(start + i * step, 10)) for i in range(n))


def preset(figure_id: int, trials: int = 100_000, seed: int = 1) -> list:
    if figure_id == 2:
        return [
            Series(f"L={L}", SystemConfig.from_db(KAPPA_DB, L=L, sigma_e_sq=SIGMA_E_SQ, snr_db_list=grid,
                                                  trials=trials, seed=seed + k),
                   ("simulated", "closed_form_eq26", "closed_form_eq27", "quadrature_oracle"))
            for k, (L, grid) in enumerate(((144, _grid(-44, -26, 2)), (256, _grid(-48, -30, 2))))
        ]
    if figure_id == 3:
        # the two top points sit far above the waterfall to expose any floor
        grids = {144: _grid(-44, -26, 2) + (0.0, 30.0), 256: _grid(-48, -30, 2) + (0.0, 30.0)}
        return [
            Series(f"L={L}", SystemConfig.from_db(KAPPA_DB, L=L, sigma_e_sq=SIGMA_E_SQ, snr_db_list=grids[L],
                                                  trials=trials, seed=seed + k),
                   ("simulated", "closed_form_eq26", "closed_form_eq27", "asymptotic"))
            for k, L in enumerate((144, 256))
        ]
    if figure_id == 4:
        grid = _grid(-50, -20, 2)
        out = []
        for k, s2 in enumerate((3.0, 2.0, 1.0, 0.1, 0.0)):
            label = "perfect CSI" if s2 == 0 else f"sigma_e^2={s2:g}"
            out.append(Series(label, SystemConfig.from_db(KAPPA_DB, L=144, sigma_e_sq=s2, snr_db_list=grid,
                                                          trials=trials, seed=seed + k),
                              ("simulated", "closed_form_eq26")))
        return out
    if figure_id == 5:
        grid = _grid(-44, -24, 2)
        return [
            Series(f"kappa={kdb:g} dB", SystemConfig.from_db(kdb, L=144, sigma_e_sq=SIGMA_E_SQ, snr_db_list=grid,
                                                             trials=trials, seed=seed + k),
                   ("simulated", "closed_form_eq26"))
            for k, kdb in enumerate((0.0, 3.0, 6.0, 10.0))
        ]
    raise ValueError(f"unknown figure id {figure_id}; expected one of 2, 3, 4, 5")


FIGURE_IDS = (2, 3, 4, 5)

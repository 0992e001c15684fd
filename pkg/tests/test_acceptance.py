"""Acceptance criteria 1-8.

Each test records one ``CRITERION n: PASS|FAIL`` line (printed live with
``-s`` and repeated in the terminal summary), then asserts the gate.

    pytest tests/test_acceptance.py -s
"""

import mpmath as mp
import numpy as np
import pytest

from ris_ssk import validation
from ris_ssk.analysis import EffectiveChannelParams, composite_stats, upep_asymptotic, upep_closed_form, upep_quadrature
from ris_ssk.channel import SystemConfig, db_to_linear
from ris_ssk.cli import main as cli_main
from ris_ssk.figures import FIGURE_IDS, preset
from ris_ssk.montecarlo import estimate_ber, sweep
from ris_ssk.special_math import bessel_i0, bessel_i1, q_exact

from conftest import series_i0, series_i1

pytestmark = pytest.mark.acceptance

KAPPA_3DB = 10**0.3
TRIALS = 100_000
RESULTS = {}


def report(n, passed, detail):
    line = f"CRITERION {n}: {'PASS' if passed else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print("\n" + line)
    return passed


def test_criterion_1_mgf_identity():
    res = validation.check_mgf_identity()
    ok = report(1, res.passed, f"max rel err {res.details['max_rel_err']:.2e} over 150 points (gate 1e-8)")
    assert ok


@pytest.mark.slow
def test_criterion_2_simulation_vs_closed_form():
    lines, worst, passed = [], (0.0, None), True
    for series in preset(2, trials=TRIALS, seed=1):
        cfg = series.config
        st = composite_stats(cfg.L, cfg.kappa)
        for p in sweep(cfg).points:
            params = EffectiveChannelParams.from_sigma(float(db_to_linear(p.snr_db)), cfg.sigma_e_sq, cfg.L)
            closed = upep_closed_form(params, st)
            exact = upep_quadrature(params, st, "exact")
            gated = p.bit_errors >= 50
            tol = max(3 * p.ci95_half_width, 0.05 * closed)
            ok = not gated or abs(p.ber - closed) <= tol
            passed &= ok
            rel = p.ber / closed - 1
            if gated and abs(rel) > abs(worst[0]):
                worst = (rel, f"L={cfg.L} {p.snr_db:g} dB")
            lines.append(f"  L={cfg.L:3d} {p.snr_db:6.1f} dB ber={p.ber:.4e} errors={p.bit_errors:6d} "
                         f"closed={closed:.4e} rel={rel:+.3f} exact_tail={exact:.4e} "
                         f"{'ok' if ok else 'MISS'}{'' if gated else ' (<50 errors, ungated)'}")
    print("\n" + "\n".join(lines))
    detail = f"worst rel gap to closed form {worst[0]:+.3f} at {worst[1]} (gate max(3 ci95, 5%))"
    assert report(2, passed, detail)


@pytest.mark.slow
def test_criterion_3_error_floor():
    analytic_ok, notes = True, []
    for L in (144, 256):
        st = composite_stats(L, KAPPA_3DB)
        closed = upep_closed_form(EffectiveChannelParams.from_sigma(1e12, 0.1, L), st)
        limit = upep_asymptotic(L, KAPPA_3DB, 0.1, "limit")
        printed = upep_asymptotic(L, KAPPA_3DB, 0.1, "printed")
        err = abs(closed / limit - 1)
        analytic_ok &= err <= 1e-4
        notes.append(f"L={L}: closed(1e12)/limit-1={err:.1e}, printed floor {printed:.3e} "
                     f"vs limit {limit:.3e} (ratio {printed / limit:.3f})")

    flat_ok = True
    for series in preset(3, trials=TRIALS, seed=1):
        cfg = series.config
        top = sorted(cfg.snr_db_list)[-2:]
        idx = len(cfg.snr_db_list) - 2
        pts = [estimate_ber(cfg, s, snr_index=idx + i) for i, s in enumerate(top)]
        if min(p.bit_errors for p in pts) < 50:
            # a flat floor cannot be claimed from too few observed errors
            flat_ok = False
            notes.append(f"L={cfg.L}: {pts[0].bit_errors} and {pts[1].bit_errors} errors at {top} dB; "
                         "floor not observable at this trial count")
        else:
            rel = abs(pts[1].ber / pts[0].ber - 1)
            flat_ok &= rel < 0.10
            notes.append(f"L={cfg.L}: floor change {rel:.3f} between {top} dB")
    print("\n  " + "\n  ".join(notes))
    detail = f"asymptote {'ok' if analytic_ok else 'MISS'}, simulated floor flatness {'ok' if flat_ok else 'MISS'}"
    assert report(3, analytic_ok and flat_ok, detail)


@pytest.mark.slow
def test_criterion_4_estimation_error_ordering():
    mid = -32.0
    bers = []
    for k, s2 in enumerate((0.1, 1.0, 2.0, 3.0)):
        cfg = SystemConfig.from_db(3.0, L=144, sigma_e_sq=s2, trials=TRIALS, seed=40 + k)
        bers.append(estimate_ber(cfg, mid).ber)
    ordered = all(a < b for a, b in zip(bers, bers[1:]))

    low = -50.0
    a = estimate_ber(SystemConfig.from_db(3.0, L=144, sigma_e_sq=0.1, trials=TRIALS, seed=50), low)
    b = estimate_ber(SystemConfig.from_db(3.0, L=144, sigma_e_sq=0.0, trials=TRIALS, seed=51), low)
    close = abs(a.ber - b.ber) <= 3 * (a.ci95_half_width + b.ci95_half_width)
    detail = (f"ber at {mid:g} dB for sigma_e^2 0.1,1,2,3: " + ", ".join(f"{x:.4e}" for x in bers)
              + f"; at {low:g} dB {a.ber:.4f} vs perfect {b.ber:.4f}")
    assert report(4, ordered and close, detail)


@pytest.mark.slow
def test_criterion_5_rician_factor_ordering():
    bers = []
    for k, kdb in enumerate((0.0, 3.0, 6.0)):
        cfg = SystemConfig.from_db(kdb, L=144, sigma_e_sq=0.1, trials=2 * TRIALS, seed=60 + k)
        bers.append(estimate_ber(cfg, -32.0).ber)
    ok = all(a > b for a, b in zip(bers, bers[1:]))
    assert report(5, ok, "ber at -32 dB for kappa 0,3,6 dB: " + ", ".join(f"{x:.4e}" for x in bers))


def test_criterion_6_moments():
    res = validation.check_moments(draws=1_000_000)
    failed = [k for k, v in res.details.items() if not v["ok"]]
    detail = "all moment checks within gates" if not failed else "failed: " + ", ".join(failed)
    gof = res.details["omega_gof"]["p_value"]
    assert report(6, res.passed, f"{detail} (phase-difference GOF p={gof:.3f})")


def test_criterion_7_special_functions():
    res = validation.check_special_functions()
    xs = np.random.default_rng(17).uniform(0, 50, 200)
    series_err = max(max(abs(bessel_i0(x) / series_i0(x) - 1), abs(bessel_i1(x) / series_i1(x) - 1) if x else 0.0)
                     for x in xs)
    q_err = max(abs(q_exact(x) - float(mp.ncdf(-mp.mpf(x)))) for x in np.linspace(-8, 8, 321))
    ok = res.passed and series_err <= 1e-12 and q_err <= 1e-14
    d = res.details
    detail = (f"bessel vs series {series_err:.1e}, vs scipy {d['bessel_max_rel_err']:.1e}; "
              f"Q vs quantile oracle {q_err:.1e}; mgf vs quadrature {d['mgf_vs_quadrature_max_rel_err']:.1e}")
    assert report(7, ok, detail)


@pytest.mark.slow
def test_criterion_8_determinism(tmp_path):
    same = True
    for fid in FIGURE_IDS:
        outputs = []
        for run, workers in enumerate((1, 1, 2)):
            out = tmp_path / f"f{fid}_{run}"
            assert cli_main(["figure", "--id", str(fid), "--trials", "5000", "--seed", "9",
                             "--workers", str(workers), "--out", str(out)]) == 0
            outputs.append((out / f"figure{fid}.csv").read_bytes())
        same &= outputs[0] == outputs[1] == outputs[2]
    assert report(8, same, f"figure CSVs {FIGURE_IDS} byte-identical across reruns and 1 vs 2 workers")

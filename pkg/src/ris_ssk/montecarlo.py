"""Monte Carlo bit-error simulation of the RIS-SSK link.

Every trial redraws all channels, picks the active antenna uniformly, sets
the RIS phases for that antenna and runs ML detection on

    y = sqrt(rho) * sum_l h_l exp(j phi_l) g[l, sent] + n0,   n0 ~ CN(0, 1)

(the convention is N0 = 1, Ps = rho).

How the receiver forms its candidate signals is selected by
``SystemConfig.hypothesis``:

``"configured"`` (default)
    Candidate ``n`` is the noiseless gain the receiver would observe with the
    RIS in its current configuration, ``sum_l h_hat_l exp(j phi_l) g[l, n]``.
    For the transmitted antenna this is the aligned real gain
    ``sum_l |h_hat_l| |g[l, sent]|``; for the others it carries the residual
    phases ``theta[l, sent] - theta[l, n]``.  This is the event the pairwise
    error analysis is built on.
``"aligned"``
    Every candidate uses its own aligned real gain
    ``sum_l |h_hat_l| |g[l, n]|``.  Candidates then differ only through
    their magnitude sums, and over the usual waterfall SNRs the error rate
    stays close to 1/2.  It falls only once the noise is far below that
    spread.

Reproducibility: trials are cut into fixed chunks of ``CHUNK_TRIALS``; chunk
``k`` of SNR point ``i`` draws from
``SeedSequence(seed, spawn_key=(i, k))``.  Error counts are integers, so the
totals do not depend on how chunks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import SystemConfig, complex_normal, db_to_linear, sample_realization
from .detector import DetectionInput, ml_detect, ml_detect_batch

__all__ = [
    "CHUNK_TRIALS",
    "BerPoint",
    "SweepResult",
    "chunk_rng",
    "run_trials",
    "run_trial",
    "bit_errors",
    "ci95_half_width",
    "estimate_ber",
    "sweep",
]

CHUNK_TRIALS = 4096
Z95 = 1.959963984540054


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    trials: int
    bit_errors: int
    ber: float
    ci95_half_width: float
    bits_per_symbol: int = 1


@dataclass
class SweepResult:
    config: SystemConfig
    points: list = field(default_factory=list)
    curve_kind: str = "simulated"

    @property
    def snr_db(self) -> list:
        return [p.snr_db for p in self.points]

    @property
    def ber(self) -> list:
        return [p.ber for p in self.points]


def chunk_rng(seed: int, snr_index: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(snr_index), int(chunk_index)))
    return np.random.Generator(np.random.PCG64(ss))


def _candidate_gains(config: SystemConfig, real, sent, phasor) -> np.ndarray:
    if config.hypothesis == "aligned":
        return np.einsum("il,iln->in", np.abs(real.h_hat), np.abs(real.g))
    return np.einsum("il,iln->in", real.h_hat * phasor, real.g)


def run_trials(
    rng: np.random.Generator,
    config: SystemConfig,
    rho_linear: float,
    n: int,
    noise_var: float = 1.0,
):
    """Simulate ``n`` independent symbols.

    Returns
    -------
    sent, detected : ndarray of int
        Transmitted and detected antenna indices (0-based).
    """
    real = sample_realization(rng, config, batch=n)
    sent = rng.integers(0, config.n_t, size=n)
    noise = complex_normal(rng, n, noise_var) if noise_var > 0 else np.zeros(n, complex)

    rows = np.arange(n)
    g_sent = real.g[rows, :, sent]
    h_ref = real.h_hat if config.phase_reference == "estimated" else real.h_true
    # exp(j phi_l) with phi_l = -arg(g_l) - arg(h_ref_l); zero magnitude -> phase 0
    prod = g_sent * h_ref
    mag = np.abs(prod)
    phasor = np.ones_like(prod)
    np.divide(np.conj(prod), mag, out=phasor, where=mag > 0)

    sqrt_ps = math.sqrt(rho_linear)
    y = sqrt_ps * np.sum(real.h_true * phasor * g_sent, axis=1) + noise
    gains = _candidate_gains(config, real, sent, phasor)
    detected = ml_detect_batch(y, sqrt_ps * real.zeta, gains)
    return sent, detected


def run_trial(rng: np.random.Generator, config: SystemConfig, rho_linear: float, noise_var: float = 1.0):
    """One symbol; returns ``(sent, detected)``.

    Decides through the scalar :func:`ris_ssk.detector.ml_detect`, so it also
    serves as a cross-check of the vectorised path.
    """
    real = sample_realization(rng, config, batch=1)
    sent = int(rng.integers(0, config.n_t, size=1)[0])
    noise = complex_normal(rng, 1, noise_var)[0] if noise_var > 0 else 0j

    g_sent = real.g[0, :, sent]
    h_ref = real.h_hat[0] if config.phase_reference == "estimated" else real.h_true[0]
    prod = g_sent * h_ref
    mag = np.abs(prod)
    phasor = np.ones_like(prod)
    np.divide(np.conj(prod), mag, out=phasor, where=mag > 0)

    sqrt_ps = math.sqrt(rho_linear)
    y = sqrt_ps * np.sum(real.h_true[0] * phasor * g_sent) + noise
    gains = _candidate_gains(config, real, np.array([sent]), phasor[None, :])[0]
    if config.hypothesis == "aligned":
        gains = gains.real
    return sent, ml_detect(DetectionInput(complex(y), real.zeta, sqrt_ps, gains))


def bit_errors(sent, detected) -> int:
    """Total natural-binary Hamming distance between label arrays."""
    diff = np.bitwise_xor(np.asarray(sent, dtype=np.int64), np.asarray(detected, dtype=np.int64))
    return int(sum(bin(int(v)).count("1") for v in diff[diff != 0]))


def ci95_half_width(ber: float, n_bits: int) -> float:
    """Normal-approximation binomial 95% half width."""
    return Z95 * math.sqrt(max(ber * (1.0 - ber), 0.0) / n_bits)


def _count_chunk(args) -> int:
    config, rho, seed, snr_index, chunk_index, n, noise_var = args
    rng = chunk_rng(seed, snr_index, chunk_index)
    sent, detected = run_trials(rng, config, rho, n, noise_var)
    return bit_errors(sent, detected)


def _chunk_jobs(config, rho, trials, seed, snr_index, noise_var):
    jobs = []
    for k, start in enumerate(range(0, trials, CHUNK_TRIALS)):
        n = min(CHUNK_TRIALS, trials - start)
        jobs.append((config, rho, seed, snr_index, k, n, noise_var))
    return jobs


def estimate_ber(
    config: SystemConfig,
    snr_db: float,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    *,
    snr_index: int = 0,
    workers: int = 1,
    noise_var: float = 1.0,
    executor=None,
) -> BerPoint:
    """BER at one SNR (dB), deterministic in ``(config, seed, snr_index)``."""
    trials = config.trials if trials is None else int(trials)
    seed = config.seed if seed is None else int(seed)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rho = float(db_to_linear(snr_db))
    jobs = _chunk_jobs(config, rho, trials, seed, snr_index, noise_var)
    if executor is not None:
        errors = sum(executor.map(_count_chunk, jobs))
    elif workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(_count_chunk, jobs))
    else:
        errors = sum(map(_count_chunk, jobs))
    bits = config.bits_per_symbol
    n_bits = trials * bits
    ber = errors / n_bits
    return BerPoint(float(snr_db), trials, errors, ber, ci95_half_width(ber, n_bits), bits)


def sweep(config: SystemConfig, workers: int = 1, noise_var: float = 1.0) -> SweepResult:
    """One :class:`BerPoint` per configured SNR, in ascending SNR order.

    The sub-stream of each point is keyed by its position in the sorted grid,
    so the input order of ``snr_db_list`` does not affect any value.
    """
    if not config.snr_db_list:
        raise ValueError("snr_db_list is empty")
    grid = sorted(config.snr_db_list)
    result = SweepResult(config)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, s in enumerate(grid):
                result.points.append(estimate_ber(config, s, snr_index=i, noise_var=noise_var, executor=pool))
    else:
        for i, s in enumerate(grid):
            result.points.append(estimate_ber(config, s, snr_index=i, noise_var=noise_var))
    return result

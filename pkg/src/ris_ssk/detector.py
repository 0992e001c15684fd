"""Maximum-likelihood antenna-index detection and its operation count."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DetectionInput", "ComplexityReport", "ml_detect", "ml_detect_batch", "complexity"]


@dataclass(frozen=True)
class DetectionInput:
    """One received sample and the receiver's noiseless candidate gains.

    ``candidate_gains[n]`` is the channel gain the receiver expects if
    antenna ``n`` were active.  With fully aligned hypotheses these are the
    real sums ``sum_l alpha[l, n] * beta_hat[l]``; complex gains are accepted
    too (see :mod:`ris_ssk.montecarlo`).
    """

    y: complex
    zeta: float
    sqrt_ps: float
    candidate_gains: np.ndarray

    def __post_init__(self):
        gains = np.asarray(self.candidate_gains)
        if gains.ndim != 1 or gains.size == 0:
            raise ValueError("candidate_gains must be a non-empty 1-D array")
        if not np.iscomplexobj(gains) and np.any(gains < 0):
            raise ValueError("real candidate gains must be non-negative")
        if self.sqrt_ps <= 0:
            raise ValueError(f"sqrt_ps must be positive, got {self.sqrt_ps}")
        object.__setattr__(self, "candidate_gains", gains)


@dataclass(frozen=True)
class ComplexityReport:
    real_multiplications: int
    real_additions: int


def ml_detect(inp: DetectionInput) -> int:
    """Return ``argmin_n |y - sqrt_ps * zeta * gains[n]|^2``.

    Ties go to the smallest index.
    """
    metric = np.abs(inp.y - inp.sqrt_ps * inp.zeta * inp.candidate_gains) ** 2
    return int(np.argmin(metric))


def ml_detect_batch(y, scale, candidate_gains) -> np.ndarray:
    """Vectorised :func:`ml_detect` over a leading trial axis.

    ``y`` has shape ``(batch,)``, ``candidate_gains`` ``(batch, n_t)`` and
    ``scale`` is ``sqrt_ps * zeta``.
    """
    y = np.asarray(y)
    gains = np.asarray(candidate_gains)
    if gains.ndim != 2 or gains.shape[1] == 0:
        raise ValueError("candidate_gains must have shape (batch, n_t) with n_t >= 1")
    diff = y[:, None] - scale * gains
    metric = diff.real**2 + diff.imag**2
    return np.argmin(metric, axis=1)


def complexity(L: int, n_t: int) -> ComplexityReport:
    """Real operations of one ML decision: ``(L+4) n_t`` mults, ``(L+1) n_t`` adds."""
    if L < 1 or n_t < 2:
        raise ValueError(f"need L >= 1 and n_t >= 2, got L={L}, n_t={n_t}")
    return ComplexityReport((L + 4) * n_t, (L + 1) * n_t)

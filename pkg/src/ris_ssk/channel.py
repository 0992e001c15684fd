"""Channel model for the RIS-aided SSK link.

The BS-RIS hop is i.i.d. Rayleigh, ``g[l, n] ~ CN(0, 1)``.  The RIS-UE hop
is known only through a Rician estimate ``h_hat``; the true channel is
``h = zeta * h_hat + sqrt(1 - zeta**2) * delta_h`` with
``delta_h ~ CN(0, sigma_e_sq)`` i.i.d. per element and
``zeta = 1 / sqrt(1 + sigma_e_sq)``.

Sampling functions take an explicit :class:`numpy.random.Generator` and an
optional ``batch`` size; with ``batch`` set, a leading trial axis is added.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .special_math import bessel_i0, bessel_i1

__all__ = [
    "PHASE_REFERENCES",
    "HYPOTHESIS_MODES",
    "SystemConfig",
    "ChannelRealization",
    "MagnitudeMoments",
    "db_to_linear",
    "linear_to_db",
    "correlation_coefficient",
    "steering_vector",
    "complex_normal",
    "sample_bs_ris",
    "sample_ris_ue_estimate",
    "sample_estimation_error",
    "compose_true_channel",
    "sample_realization",
    "rician_moments",
    "rayleigh_moments",
    "optimal_phases",
]

PHASE_REFERENCES = ("estimated", "true")
HYPOTHESIS_MODES = ("configured", "aligned")


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(np.asarray(value, dtype=float))


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters.

    ``kappa`` is linear; use :meth:`from_db` to build a config from a Rician
    factor in dB.  ``phase_reference`` selects which RIS-UE channel the RIS
    phases are matched to, and ``hypothesis`` how the receiver forms the
    noiseless candidate signals (see :mod:`ris_ssk.montecarlo`).
    """

    n_t: int = 2
    L: int = 144
    kappa: float = 10.0**0.3
    sigma_e_sq: float = 0.1
    d_over_lambda: float = 0.5
    phi_los: float = math.pi / 4
    snr_db_list: tuple = field(default_factory=tuple)
    trials: int = 100_000
    seed: int = 0
    phase_reference: str = "estimated"
    hypothesis: str = "configured"

    def __post_init__(self):
        object.__setattr__(self, "snr_db_list", tuple(float(s) for s in self.snr_db_list))
        if int(self.n_t) != self.n_t or self.n_t < 2 or self.n_t & (self.n_t - 1):
            raise ValueError(f"n_t must be a power of two >= 2, got {self.n_t}")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")
        if not (math.isfinite(self.sigma_e_sq) and self.sigma_e_sq >= 0):
            raise ValueError(f"sigma_e_sq must be finite and >= 0, got {self.sigma_e_sq}")
        if not self.d_over_lambda > 0:
            raise ValueError(f"d_over_lambda must be positive, got {self.d_over_lambda}")
        if not -math.pi / 2 <= self.phi_los <= math.pi / 2:
            raise ValueError(f"phi_los must lie in [-pi/2, pi/2], got {self.phi_los}")
        if any(not math.isfinite(s) for s in self.snr_db_list):
            raise ValueError("snr_db_list entries must be finite")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.phase_reference not in PHASE_REFERENCES:
            raise ValueError(f"phase_reference must be one of {PHASE_REFERENCES}")
        if self.hypothesis not in HYPOTHESIS_MODES:
            raise ValueError(f"hypothesis must be one of {HYPOTHESIS_MODES}")

    @classmethod
    def from_db(cls, kappa_db: float = 3.0, **kwargs) -> "SystemConfig":
        return cls(kappa=float(db_to_linear(kappa_db)), **kwargs)

    @property
    def kappa_db(self) -> float:
        return float(linear_to_db(self.kappa)) if self.kappa > 0 else -math.inf

    @property
    def zeta(self) -> float:
        return correlation_coefficient(self.sigma_e_sq)

    @property
    def bits_per_symbol(self) -> int:
        return self.n_t.bit_length() - 1

    def replace(self, **changes) -> "SystemConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "n_t": self.n_t,
            "L": self.L,
            "kappa": self.kappa,
            "kappa_db": self.kappa_db,
            "sigma_e_sq": self.sigma_e_sq,
            "zeta": self.zeta,
            "d_over_lambda": self.d_over_lambda,
            "phi_los": self.phi_los,
            "snr_db_list": list(self.snr_db_list),
            "trials": self.trials,
            "seed": self.seed,
            "phase_reference": self.phase_reference,
            "hypothesis": self.hypothesis,
        }


@dataclass(frozen=True)
class ChannelRealization:
    g: np.ndarray
    h_hat: np.ndarray
    delta_h: np.ndarray
    h_true: np.ndarray
    zeta: float

    @property
    def alpha(self) -> np.ndarray:
        return np.abs(self.g)

    @property
    def theta(self) -> np.ndarray:
        return -np.angle(self.g)

    @property
    def beta_hat(self) -> np.ndarray:
        return np.abs(self.h_hat)

    @property
    def psi_hat(self) -> np.ndarray:
        return -np.angle(self.h_hat)


@dataclass(frozen=True)
class MagnitudeMoments:
    mean: float
    variance: float


def correlation_coefficient(sigma_e_sq: float) -> float:
    """``zeta = 1 / sqrt(1 + sigma_e_sq)``."""
    sigma_e_sq = float(sigma_e_sq)
    if not math.isfinite(sigma_e_sq) or sigma_e_sq < 0:
        raise ValueError(f"sigma_e_sq must be finite and >= 0, got {sigma_e_sq}")
    return 1.0 / math.sqrt(1.0 + sigma_e_sq)


def steering_vector(L: int, d_over_lambda: float, phi: float) -> np.ndarray:
    """ULA response ``exp(j 2 pi d/lambda l sin(phi))`` for ``l = 0..L-1``."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not (math.isfinite(d_over_lambda) and math.isfinite(phi)):
        raise ValueError("steering parameters must be finite")
    phase = 2.0 * math.pi * d_over_lambda * math.sin(phi) * np.arange(L)
    return np.exp(1j * phase)


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with the given variance."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    parts = rng.standard_normal(shape + (2,))
    return parts.view(np.complex128)[..., 0] * math.sqrt(variance / 2.0)


def _shape(batch: Optional[int], *dims: int) -> tuple:
    return dims if batch is None else (batch,) + dims


def sample_bs_ris(rng: np.random.Generator, L: int, n_t: int, batch: Optional[int] = None) -> np.ndarray:
    """BS-RIS gains, shape ``(L, n_t)`` (or ``(batch, L, n_t)``)."""
    return complex_normal(rng, _shape(batch, L, n_t))


def sample_ris_ue_estimate(
    rng: np.random.Generator,
    L: int,
    kappa: float,
    d_over_lambda: float = 0.5,
    phi_los: float = math.pi / 4,
    batch: Optional[int] = None,
) -> np.ndarray:
    """Rician estimate ``sqrt(k/(k+1)) a(phi) + sqrt(1/(k+1)) w``."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    los = steering_vector(L, d_over_lambda, phi_los)
    nlos = complex_normal(rng, _shape(batch, L))
    return math.sqrt(kappa / (kappa + 1.0)) * los + math.sqrt(1.0 / (kappa + 1.0)) * nlos


def sample_estimation_error(
    rng: np.random.Generator, L: int, sigma_e_sq: float, batch: Optional[int] = None
) -> np.ndarray:
    return complex_normal(rng, _shape(batch, L), sigma_e_sq)


def compose_true_channel(h_hat, delta_h, zeta: float) -> np.ndarray:
    """``h = zeta h_hat + sqrt(1 - zeta^2) delta_h``, element-wise."""
    h_hat = np.asarray(h_hat)
    delta_h = np.asarray(delta_h)
    if h_hat.shape != delta_h.shape:
        raise ValueError(f"shape mismatch: h_hat {h_hat.shape} vs delta_h {delta_h.shape}")
    if not 0.0 < zeta <= 1.0:
        raise ValueError(f"zeta must lie in (0, 1], got {zeta}")
    return zeta * h_hat + math.sqrt(max(0.0, 1.0 - zeta * zeta)) * delta_h


def sample_realization(rng: np.random.Generator, config: SystemConfig, batch: Optional[int] = None) -> ChannelRealization:
    """Draw ``g``, ``h_hat`` and ``delta_h`` (in that order) and compose ``h``."""
    g = sample_bs_ris(rng, config.L, config.n_t, batch)
    h_hat = sample_ris_ue_estimate(rng, config.L, config.kappa, config.d_over_lambda, config.phi_los, batch)
    delta_h = sample_estimation_error(rng, config.L, config.sigma_e_sq, batch)
    zeta = config.zeta
    return ChannelRealization(g, h_hat, delta_h, compose_true_channel(h_hat, delta_h, zeta), zeta)


def rician_moments(kappa: float) -> MagnitudeMoments:
    """Mean and variance of ``|h_hat_l|`` for Rician factor ``kappa`` (linear)."""
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0:
        raise ValueError(f"kappa must be finite and >= 0, got {kappa}")
    half = 0.5 * kappa
    # exp(-k/2) I_nu(k/2) is evaluated in one piece to stay finite for large k.
    if half <= 700.0:
        scaled_i0 = math.exp(-half) * bessel_i0(half)
        scaled_i1 = math.exp(-half) * bessel_i1(half)
    else:
        scaled_i0 = _scaled_bessel_large(0, half)
        scaled_i1 = _scaled_bessel_large(1, half)
    mean = math.sqrt(math.pi / (4.0 * kappa + 4.0)) * ((1.0 + kappa) * scaled_i0 + kappa * scaled_i1)
    return MagnitudeMoments(mean, 1.0 - mean * mean)


def _scaled_bessel_large(order: int, x: float) -> float:
    mu = 4.0 * order * order
    total, term = 1.0, 1.0
    for k in range(1, 30):
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
    return total / math.sqrt(2.0 * math.pi * x)


def rayleigh_moments() -> MagnitudeMoments:
    """Mean ``sqrt(pi)/2`` and variance ``(4 - pi)/4`` of ``|CN(0, 1)|``."""
    return MagnitudeMoments(math.sqrt(math.pi) / 2.0, (4.0 - math.pi) / 4.0)


def optimal_phases(g_col, h_ref) -> np.ndarray:
    """RIS phases ``theta_l + psi_l`` that co-phase every reflected path.

    ``theta_l = -arg(g_l)`` and ``psi_l = -arg(h_l)``; a zero-magnitude
    element contributes phase 0.  Works on any leading batch shape.
    """
    g_col = np.asarray(g_col)
    h_ref = np.asarray(h_ref)
    if g_col.shape != h_ref.shape:
        raise ValueError(f"shape mismatch: g {g_col.shape} vs h {h_ref.shape}")
    return -np.angle(g_col) - np.angle(h_ref)

"""Analytical error-probability expressions for RIS-aided SSK.

The pairwise error event between the transmitted antenna and a competitor
is conditioned on the composite gain ``x = |eta - eta_hat|^2`` (CPEP).
Averaging over a CLT Gaussian model of ``eta - eta_hat`` gives the UPEP,
available here in four flavours:

* ``upep_closed_form(..., form="exact_zeta")`` - MGF evaluation with the
  two-exponential Q approximation, correlation coefficient kept explicit.
* ``upep_closed_form(..., form="paper_27")`` - the same expression after
  substituting ``zeta`` as it is usually printed (drops a ``1 + sigma_e^2``
  factor, so it drifts from ``exact_zeta`` as ``sigma_e^2`` grows).
* ``upep_asymptotic`` - the high-SNR error floor.
* ``upep_quadrature`` - direct numerical integration, used as an oracle.

SNR arguments are linear everywhere in this module.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from scipy import integrate

from .channel import correlation_coefficient, db_to_linear, rician_moments
from .special_math import NoncentralChiSq1, pdf, q_approx, q_exact

__all__ = [
    "CURVE_KINDS",
    "CompositeStats",
    "EffectiveChannelParams",
    "PerformanceCurve",
    "QuadratureError",
    "omega_pdf",
    "composite_stats",
    "cpep",
    "upep_closed_form",
    "upep_quadrature",
    "upep_asymptotic",
    "abep_union_bound",
    "hamming_weight_total",
    "analytic_curve",
]

CURVE_KINDS = (
    "simulated",
    "closed_form_eq26",
    "closed_form_eq27",
    "asymptotic",
    "quadrature_oracle",
)

TWO_PI = 2.0 * math.pi
_QUAD_FAIL_RTOL = 1e-10


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class CompositeStats:
    """CLT mean and variance of ``eta - eta_hat``."""

    mu: float
    sigma_sq: float

    def __post_init__(self):
        if self.sigma_sq <= 0:
            raise ValueError(f"sigma_sq must be positive, got {self.sigma_sq}")

    @property
    def distribution(self) -> NoncentralChiSq1:
        return NoncentralChiSq1(self.mu, self.sigma_sq)


@dataclass(frozen=True)
class EffectiveChannelParams:
    rho: float
    zeta: float
    sigma_e_sq: float
    L: int

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not 0.0 < self.zeta <= 1.0:
            raise ValueError(f"zeta must lie in (0, 1], got {self.zeta}")
        if self.sigma_e_sq < 0:
            raise ValueError(f"sigma_e_sq must be >= 0, got {self.sigma_e_sq}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")

    @classmethod
    def from_sigma(cls, rho: float, sigma_e_sq: float, L: int) -> "EffectiveChannelParams":
        return cls(rho, correlation_coefficient(sigma_e_sq), sigma_e_sq, L)

    @property
    def noise_factor(self) -> float:
        """``1 + rho (1 - zeta^2) sigma_e^2 L``: AWGN plus estimation-error power over N0."""
        return 1.0 + self.rho * (1.0 - self.zeta**2) * self.sigma_e_sq * self.L

    @property
    def gain(self) -> float:
        """Coefficient ``c`` with ``CPEP = Q(sqrt(c x))``."""
        return self.rho * self.zeta**2 / (2.0 * self.noise_factor)


@dataclass
class PerformanceCurve:
    """SNR -> value pairs tagged with how they were produced."""

    kind: str
    snr_db: list
    values: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if len(self.snr_db) != len(self.values):
            raise ValueError("snr_db and values differ in length")


def omega_pdf(x: float) -> float:
    """Triangular density of the difference of two U(0, 2 pi) phases."""
    if -TWO_PI <= x < 0.0:
        return (1.0 + x / TWO_PI) / TWO_PI
    if 0.0 <= x < TWO_PI:
        return (1.0 - x / TWO_PI) / TWO_PI
    return 0.0


def composite_stats(L: int, kappa: float) -> CompositeStats:
    """``mu = sqrt(pi) L E / 2`` and ``sigma^2 = L (8 - pi E^2) / 4`` with ``E = E|h_hat_l|``."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    e_beta = rician_moments(kappa).mean
    return CompositeStats(
        mu=math.sqrt(math.pi) * L * e_beta / 2.0,
        sigma_sq=L * (8.0 - math.pi * e_beta**2) / 4.0,
    )


def cpep(x: float, params: EffectiveChannelParams) -> float:
    """Conditional PEP ``Q(sqrt(rho zeta^2 x / (2 (1 + rho (1-zeta^2) sigma_e^2 L))))``."""
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x}")
    return q_exact(math.sqrt(params.gain * x))


def _two_term(rho_eff: float, denom_base: float, mu: float, sigma_sq: float) -> float:
    # (1/12) sqrt(2B/(2B + r s2)) exp(-mu^2 r/(4B + 2 r s2))
    #   + (1/4) sqrt(3B/(3B + 2 s2 r)) exp(-mu^2 r/(3B + 2 s2 r))
    b = denom_base
    mu_sq = mu * mu
    first = math.sqrt(2.0 * b / (2.0 * b + rho_eff * sigma_sq)) * math.exp(
        -mu_sq * rho_eff / (4.0 * b + 2.0 * rho_eff * sigma_sq)
    )
    second = math.sqrt(3.0 * b / (3.0 * b + 2.0 * sigma_sq * rho_eff)) * math.exp(
        -mu_sq * rho_eff / (3.0 * b + 2.0 * sigma_sq * rho_eff)
    )
    return first / 12.0 + second / 4.0


def upep_closed_form(
    params: EffectiveChannelParams, stats: CompositeStats, form: str = "exact_zeta"
) -> float:
    """Closed-form UPEP.

    Parameters
    ----------
    form : {"exact_zeta", "paper_27"}
        ``exact_zeta`` keeps ``zeta`` and the full noise factor
        ``A = 1 + rho (1 - zeta^2) sigma_e^2 L``.  ``paper_27`` drops ``zeta``
        and uses ``1 + rho sigma_e^4 L`` in its place.
    """
    if form == "exact_zeta":
        return _two_term(params.rho * params.zeta**2, params.noise_factor, stats.mu, stats.sigma_sq)
    if form == "paper_27":
        base = 1.0 + params.rho * params.sigma_e_sq**2 * params.L
        return _two_term(params.rho, base, stats.mu, stats.sigma_sq)
    raise ValueError(f"unknown form {form!r}")


def _breakpoints(stats: CompositeStats, weights: Sequence[float]) -> list:
    # Peaks of exp(-w t^2 / 2) * N(t; mu, sigma^2) in t = sqrt(x).
    sigma = math.sqrt(stats.sigma_sq)
    points = set()
    for w in weights:
        shrink = 1.0 + w * stats.sigma_sq
        centre = stats.mu / shrink
        width = sigma / math.sqrt(shrink)
        for k in (-40, -12, -6, -3, -1, 0, 1, 3, 6, 12, 40):
            t = centre + k * width
            if t > 0:
                points.add(t)
    return sorted(points)


def upep_quadrature(
    params: EffectiveChannelParams,
    stats: CompositeStats,
    q_kind: str = "exact",
    epsrel: float = 1e-12,
) -> float:
    """Numerically integrate ``int_0^inf Q(sqrt(c x)) f(x) dx``.

    ``f`` is the density of ``Z^2`` with ``Z ~ N(mu, sigma^2)``.  The
    integral is taken in ``t = sqrt(x)`` (so the ``x^{-1/2}`` singularity at
    the origin disappears) and split at the peaks of the weighted integrand.

    Parameters
    ----------
    q_kind : {"exact", "approx"}
        Gaussian tail or its two-exponential approximation.

    Raises
    ------
    QuadratureError
        When any sub-interval fails to converge.
    """
    if q_kind == "exact":
        q = q_exact
    elif q_kind == "approx":
        q = q_approx
    else:
        raise ValueError(f"unknown q_kind {q_kind!r}")

    c = params.gain
    root_c = math.sqrt(c)
    dist = stats.distribution

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0
        return q(root_c * t) * pdf(dist, t * t) * 2.0 * t

    edges = [0.0] + _breakpoints(stats, (0.0, c, 4.0 * c / 3.0))
    pieces = []
    for a, b in zip(edges, edges[1:] + [math.inf]):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            value, err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=epsrel, limit=200)
        pieces.append((a, b, value, err, [str(w.message) for w in caught]))
    total = math.fsum(p[2] for p in pieces)
    # A sub-interval that could not meet its own relative target is harmless
    # if its error estimate is negligible against the whole integral.
    for a, b, value, err, msgs in pieces:
        if msgs and err > _QUAD_FAIL_RTOL * abs(total):
            raise QuadratureError(
                f"quadrature failed on [{a:.6g}, {b:.6g}] (piece={value:.3e}, "
                f"err={err:.3e}, total={total:.3e}) for rho={params.rho}, "
                f"mu={stats.mu}, sigma_sq={stats.sigma_sq}, q_kind={q_kind}: {msgs[0]}"
            )
    return total


def upep_asymptotic(L: int, kappa: float, sigma_e_sq: float, form: str = "limit") -> float:
    """High-SNR floor of the closed-form UPEP.

    Parameters
    ----------
    form : {"limit", "printed"}
        ``limit`` is the exact ``rho -> inf`` limit of the ``exact_zeta``
        closed form.  ``printed`` is the commonly printed version whose
        second exponent uses ``6 s^2 + 8 - pi E^2`` instead of
        ``12 s^2 + 16 - 2 pi E^2``; kept for comparison only.
    """
    if not sigma_e_sq > 0:
        raise ValueError("no error floor under perfect CSI (sigma_e_sq must be > 0)")
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    e_sq = rician_moments(kappa).mean ** 2
    s4 = sigma_e_sq**2
    pe = math.pi * e_sq
    first = math.sqrt(2.0 * s4 / (8.0 * s4 + 8.0 - pe)) * math.exp(
        -math.pi * L * e_sq / (16.0 * s4 + 16.0 - 2.0 * pe)
    ) / 6.0
    radical = math.sqrt(6.0 * s4 / (6.0 * s4 + 8.0 - pe))
    if form == "limit":
        second = radical * math.exp(-math.pi * L * e_sq / (12.0 * s4 + 16.0 - 2.0 * pe))
    elif form == "printed":
        second = radical * math.exp(-math.pi * L * e_sq / (6.0 * s4 + 8.0 - pe))
    else:
        raise ValueError(f"unknown form {form!r}")
    return first + second / 4.0


def hamming_weight_total(n_t: int) -> int:
    """Sum of Hamming distances over all ordered pairs of natural-binary labels."""
    _check_power_of_two(n_t)
    return sum(bin(a ^ b).count("1") for a in range(n_t) for b in range(n_t) if a != b)


def abep_union_bound(upep: float, n_t: int) -> float:
    """Union bound on ABEP when every antenna pair shares the same UPEP.

    ``(1 / (n_t log2 n_t)) sum_{n_hat} sum_{n != n_hat} upep * d(n_hat, n)``
    with ``d`` the natural-binary Hamming distance and the transmitted
    antenna averaged uniformly.  Equals ``upep`` for two antennas.
    """
    if not 0.0 <= upep <= 1.0:
        raise ValueError(f"upep must be a probability, got {upep}")
    bits = _check_power_of_two(n_t)
    return upep * hamming_weight_total(n_t) / (n_t * bits)


def _check_power_of_two(n_t: int) -> int:
    if int(n_t) != n_t or n_t < 2 or n_t & (n_t - 1):
        raise ValueError(f"n_t must be a power of two >= 2, got {n_t}")
    return int(n_t).bit_length() - 1


def analytic_curve(
    kind: str,
    snr_db: Iterable[float],
    L: int,
    kappa: float,
    sigma_e_sq: float,
    n_t: int = 2,
    q_kind: str = "exact",
) -> PerformanceCurve:
    """ABEP union-bound curve over an SNR grid (dB) for one analytical kind."""
    snr_db = [float(s) for s in snr_db]
    stats = composite_stats(L, kappa)
    values = []
    for s in snr_db:
        params = EffectiveChannelParams.from_sigma(float(db_to_linear(s)), sigma_e_sq, L)
        if kind == "closed_form_eq26":
            upep = upep_closed_form(params, stats, "exact_zeta")
        elif kind == "closed_form_eq27":
            upep = upep_closed_form(params, stats, "paper_27")
        elif kind == "asymptotic":
            upep = upep_asymptotic(L, kappa, sigma_e_sq)
        elif kind == "quadrature_oracle":
            upep = upep_quadrature(params, stats, q_kind)
        else:
            raise ValueError(f"not an analytical curve kind: {kind!r}")
        values.append(abep_union_bound(min(upep, 1.0), n_t))
    meta = {"L": L, "kappa": kappa, "sigma_e_sq": sigma_e_sq, "n_t": n_t}
    if kind == "quadrature_oracle":
        meta["q_kind"] = q_kind
    return PerformanceCurve(kind, snr_db, values, meta)

"""Low-SNR and high-SNR ASER approximations, and AWGN baselines.

Low SNR
    The MGF is replaced by ``exp(-(D2/D1) s g)`` and each Craig integral is
    bounded by its value at the upper angle, giving sums of exponentials in
    ``N^2 g``.
High SNR
    The MGF is replaced by ``(D1/(s g))^0.5 exp(-D2)``, which integrates to
    ``sqrt(2 D1) exp(-D2) (1 - cos theta) / (pi c sqrt(g))``.
AWGN
    The conditional SER at deterministic SNR, and its exponential upper
    bound.

The rectangular-QAM entry points follow the published expressions; the
``*_from_terms`` variants apply the same per-term rules to any term set,
which is how cross-QAM asymptotes are produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import IrsLink
from .errors import DomainError
from .modem import ModulationScheme, QzTermSet, arccot, decompose, rqam_params
from .specfun import adaptive_quad, qz

__all__ = [
    "AsymptoteParams",
    "low_snr_term_bound",
    "integral_I_low_quadrature",
    "aser_low_snr_from_terms",
    "aser_rqam_low_snr",
    "integral_I_high",
    "integral_I_high_quadrature",
    "aser_high_snr_from_terms",
    "aser_rqam_high_snr",
    "aser_rqam_awgn_bound",
    "awgn_bound_from_terms",
    "aser_awgn_exact",
    "awgn_linearization",
    "asymptote_params",
]

HALF_PI = 0.5 * math.pi
_LOW_RATE = math.pi ** 2 / 32.0


# -- low SNR -------------------------------------------------------------------

def low_snr_term_bound(c: float, theta: float, link: IrsLink) -> float:
    """``(theta/pi) exp(-N^2 pi^2 c^2 g / (32 sin^2 theta))``.

    Upper bound on the low-SNR Craig integral of one term.
    """
    x = _LOW_RATE * link.N ** 2 * c * c * link.gamma_bar / math.sin(theta) ** 2
    return theta / math.pi * math.exp(-x)


def integral_I_low_quadrature(c: float, theta: float, link: IrsLink) -> float:
    """Direct quadrature of the low-SNR MGF ``exp(-(D2/D1) s g)`` over the angle."""
    rate = link.delta2 / link.delta1 * link.gamma_bar * 0.5 * c * c

    def integrand(phi):
        s = math.sin(phi)
        return math.exp(-rate / (s * s)) if s > 0.0 else 0.0

    return adaptive_quad(integrand, 0.0, theta, what="low-SNR I") / math.pi


def aser_low_snr_from_terms(terms: QzTermSet, link: IrsLink) -> float:
    return math.fsum(t.w * low_snr_term_bound(t.c, t.theta, link) for t in terms)


def aser_rqam_low_snr(m_i: int, m_q: int, beta: float, link: IrsLink) -> float:
    """Low-SNR rectangular-QAM ASER, a sum of exponentials in ``N^2 g``."""
    rp = rqam_params(ModulationScheme.rqam(m_i, m_q, beta))
    p, q, a, b = rp.p, rp.q, rp.a, rp.b
    k = _LOW_RATE * link.N ** 2 * link.gamma_bar
    value = p * math.exp(-k * a * a)
    if q == 0.0:
        return value
    value += q * math.exp(-k * b * b)
    value -= (2 * p * q / math.pi) * (math.atan(b / a) + arccot(b / a)) * math.exp(
        -k * (a * a + b * b)
    )
    return value


# -- high SNR ------------------------------------------------------------------

def _high_scale(c: float, link: IrsLink) -> float:
    if not link.gamma_bar > 0.0:
        raise DomainError("high-SNR approximation needs gamma_bar > 0")
    return (math.sqrt(2.0 * link.delta1) * math.exp(-link.delta2)
            / (math.pi * c * math.sqrt(link.gamma_bar)))


def integral_I_high(c: float, theta: float, link: IrsLink) -> float:
    """High-SNR Craig integral, ``scale * (1 - cos theta)``."""
    return _high_scale(c, link) * (1.0 - math.cos(theta))


def integral_I_high_quadrature(c: float, theta: float, link: IrsLink) -> float:
    """Direct quadrature of the high-SNR MGF ``(D1/(s g))^0.5 exp(-D2)``."""
    if not link.gamma_bar > 0.0:
        raise DomainError("high-SNR approximation needs gamma_bar > 0")
    k = math.sqrt(link.delta1 / link.gamma_bar) * math.exp(-link.delta2)
    root2_over_c = math.sqrt(2.0) / c
    return adaptive_quad(
        lambda phi: k * root2_over_c * math.sin(phi), 0.0, theta, what="high-SNR I"
    ) / math.pi


def aser_high_snr_from_terms(terms: QzTermSet, link: IrsLink) -> float:
    return math.fsum(t.w * integral_I_high(t.c, t.theta, link) for t in terms)


def aser_rqam_high_snr(
    m_i: int, m_q: int, beta: float, link: IrsLink, printed: bool = False
) -> float:
    """High-SNR rectangular-QAM ASER, proportional to ``g^(-1/2)``.

    Parameters
    ----------
    printed : bool, optional
        Use the cross-term factors ``1 - a/(sqrt(2) b)`` and
        ``1 - a/sqrt(a^2 + b^2)`` as printed alongside the published
        expression instead of ``1 - cos(theta)``. The two agree only when
        ``beta = 1``; the default matches direct quadrature.
    """
    rp = rqam_params(ModulationScheme.rqam(m_i, m_q, beta))
    p, q, a, b = rp.p, rp.q, rp.a, rp.b
    value = 2 * p * _high_scale(a, link)
    if q == 0.0:
        return value
    value += 2 * q * _high_scale(b, link)
    r = math.hypot(a, b)
    if printed:
        f_b = 1.0 - a / (math.sqrt(2.0) * b)
        f_a = 1.0 - a / r
    else:
        f_b = 1.0 - math.cos(math.atan(b / a))
        f_a = 1.0 - math.cos(arccot(b / a))
    value -= 2 * p * q * (_high_scale(b, link) * f_b + _high_scale(a, link) * f_a)
    return value


# -- AWGN ----------------------------------------------------------------------

def aser_rqam_awgn_bound(m_i: int, m_q: int, beta: float, gamma_bar: float) -> float:
    """Exponential upper bound on the rectangular-QAM SER in AWGN."""
    rp = rqam_params(ModulationScheme.rqam(m_i, m_q, beta))
    p, q, a, b = rp.p, rp.q, rp.a, rp.b
    value = p * math.exp(-a * a * gamma_bar / 2)
    if q == 0.0:
        return value
    value += q * math.exp(-b * b * gamma_bar / 2)
    value -= (2 * p * q / math.pi) * (math.atan(b / a) + arccot(b / a)) * math.exp(
        -(a * a + b * b) * gamma_bar / 2
    )
    return value


def awgn_bound_from_terms(terms: QzTermSet, gamma_bar: float) -> float:
    """Per-term bound ``(theta/pi) exp(-c^2 g / (2 sin^2 theta))``, summed."""
    return math.fsum(
        t.w * t.theta / math.pi * math.exp(-t.c ** 2 * gamma_bar / (2 * math.sin(t.theta) ** 2))
        for t in terms
    )


def aser_awgn_exact(scheme: ModulationScheme, gamma_bar: float) -> float:
    """SER at deterministic SNR ``gamma_bar``: the conditional SER itself."""
    if not gamma_bar >= 0.0:
        raise DomainError(f"gamma_bar must be >= 0, got {gamma_bar}")
    root = math.sqrt(gamma_bar)
    return math.fsum(t.w * qz(t.c * root, t.theta) for t in decompose(scheme))


def awgn_linearization(scheme: ModulationScheme) -> tuple[float, float]:
    """``(k1, k2)`` with bound ``~ k1 (1 - k2 g)`` to first order in ``g``.

    Diagnostic only; valid for small ``g``.
    """
    terms = decompose(scheme)
    k1 = awgn_bound_from_terms(terms, 0.0)
    slope = math.fsum(
        t.w * t.theta / math.pi * t.c ** 2 / (2 * math.sin(t.theta) ** 2) for t in terms
    )
    return k1, slope / k1


# -- proportionality constants ------------------------------------------------

@dataclass(frozen=True)
class AsymptoteParams:
    """Scheme constants of the asymptotic laws.

    ``low ~ eta1 exp(-eta2 N^2 g)``, ``high = mu sqrt(D1/g) exp(-D2)`` and
    ``awgn_bound ~ kappa1 exp(-kappa2 g)``. ``eta`` and ``kappa`` come from
    least-squares fits on the log scale; ``mu`` is exact.
    """

    eta1: float
    eta2: float
    mu: float
    kappa1: float
    kappa2: float


def _log_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, np.log(y), 1)
    return float(math.exp(intercept)), float(-slope)


def asymptote_params(scheme: ModulationScheme, n: int = 32) -> AsymptoteParams:
    """Fit the asymptotic constants of ``scheme``.

    The low-SNR fit uses ``N^2 g`` spanning the first two decades of decay of
    the low-SNR expression at element count ``n``; the AWGN fit spans
    ``g`` in ``[0, 10]``.
    """
    terms = decompose(scheme)
    # mu: high-SNR value with sqrt(D1/g) exp(-D2) factored out
    mu = math.fsum(
        t.w * math.sqrt(2.0) * (1.0 - math.cos(t.theta)) / (math.pi * t.c) for t in terms
    )
    c_min = min(t.c for t in terms)
    x_max = 2.0 * math.log(10.0) / (_LOW_RATE * c_min * c_min)
    x = np.linspace(0.0, x_max, 41)
    low = np.array([aser_low_snr_from_terms(terms, IrsLink(n, xi / n ** 2)) for xi in x])
    eta1, eta2 = _log_fit(x, low)
    g = np.linspace(0.0, 10.0, 41)
    awgn = np.array([awgn_bound_from_terms(terms, gi) for gi in g])
    kappa1, kappa2 = _log_fit(g, awgn)
    return AsymptoteParams(eta1=eta1, eta2=eta2, mu=mu, kappa1=kappa1, kappa2=kappa2)

"""Average SER over the IRS channel through the Craig-form integral.

The building block is

    I(c, theta) = (1/pi) int_0^theta G(c^2 / (2 sin^2 phi)) dphi

with ``G`` the CLT MGF of the instantaneous SNR. A scheme's ASER is
``sum w_i I(c_i, theta_i)`` over its :class:`~irs_aser.modem.QzTermSet`.
``I`` is available in closed form (confluent Lauricella functions) and by
direct quadrature; the latter is the oracle for the former.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .channel import IrsLink, mgf_approx
from .errors import DomainError, NumericError
from .modem import ModulationScheme, QzTermSet, decompose
from .specfun import Phi1Args, adaptive_quad, lauricella_phi1, log_ladder

__all__ = [
    "AserCurve",
    "METHODS",
    "integral_I_closed",
    "integral_I_quadrature",
    "aser_from_terms",
    "aser_rqam",
    "aser_sqam",
    "aser_bpsk",
    "aser_xqam",
    "aser",
]

HALF_PI = 0.5 * math.pi
METHODS = (
    "closed-form",
    "quadrature",
    "monte-carlo",
    "low-snr",
    "high-snr",
    "awgn-bound",
    "awgn-exact",
)


def _check_args(c: float, theta: float) -> float:
    if not c > 0.0:
        raise DomainError(f"scale c must be positive, got {c}")
    if not 0.0 < theta <= HALF_PI * (1 + 1e-15):
        raise DomainError(f"theta must lie in (0, pi/2], got {theta}")
    return min(theta, HALF_PI)


def integral_I_closed(c: float, theta: float, link: IrsLink) -> float:
    """Closed-form ``I(c, theta)``.

    ``theta = pi/2`` uses a two-variable Lauricella function with a
    ``(1-v)^(-1/2)`` weight; any smaller angle uses the three-variable form,
    written in terms of ``sin(theta)`` so that the ``arctan`` and ``arccot``
    cases share one code path.
    """
    theta = _check_args(c, theta)
    g = link.gamma_bar
    if g == 0.0:
        return theta / math.pi
    d1, d2 = link.delta1, link.delta2
    c2g = c * c * g
    scale = c * math.sqrt(2.0 * d1 * g) / math.pi
    try:
        if theta == HALF_PI:
            den = c2g + 2.0 * d1
            args = Phi1Args(
                1.0, (1.0,), 1.5, (2.0 * d1 / den, 2.0 * d1 * d2 / den),
                gaps=(c2g / den,),
            )
            return scale / den * lauricella_phi1(args, shift=d2)
        c2g_csc2 = c2g / math.sin(theta) ** 2
        den = c2g_csc2 + 2.0 * d1
        args = Phi1Args(
            1.0,
            (0.5, 1.0),
            2.0,
            ((c2g + 2.0 * d1) / den, 2.0 * d1 / den, 2.0 * d1 * d2 / den),
            gaps=(c2g / math.tan(theta) ** 2 / den, c2g_csc2 / den),
        )
        return 0.5 * scale / den * lauricella_phi1(args, shift=d2)
    except NumericError as exc:
        raise NumericError(
            f"I(c={c:g}, theta={theta:g}, N={link.N}, gamma_bar={g:g}): {exc}",
            estimate=exc.estimate,
        ) from exc


def integral_I_quadrature(
    c: float, theta: float, link: IrsLink, mgf: Callable[[float, IrsLink], float] = mgf_approx
) -> float:
    """``I(c, theta)`` by adaptive quadrature of the MGF over the angle.

    ``mgf`` defaults to :func:`~irs_aser.channel.mgf_approx`; validation
    passes an independently written MGF.
    """
    theta = _check_args(c, theta)
    if link.gamma_bar == 0.0:
        return theta / math.pi
    if theta < 1e-12:
        return 0.0
    half_c2 = 0.5 * c * c

    def integrand(phi):
        s = math.sin(phi)
        if s == 0.0:
            return 0.0
        return mgf(half_c2 / (s * s), link)

    # The integrand rises from 0 to ~1 around the angle where
    # s * gamma_bar * E[A^2] ~ 1; at very low SNR that angle is tiny.
    # Past it, 1 - G decays only like 1/phi^2, so the approach to 1 spans
    # several decades; a log-spaced ladder keeps each panel well scaled.
    knee = c * math.sqrt(0.5 * link.gamma_bar * link.mean_power_gain)
    points = [math.asin(k) for k in log_ladder(0.1 * knee, 0.5 * math.sin(theta))] or None
    return adaptive_quad(integrand, 0.0, theta, points=points, what="I quadrature") / math.pi


_ENGINES = {
    "closed-form": integral_I_closed,
    "quadrature": integral_I_quadrature,
}


def aser_from_terms(terms: QzTermSet, link: IrsLink, method: str = "closed-form") -> float:
    """Raw (unclamped) ``sum w I(c, theta)`` over a term set."""
    try:
        engine = _ENGINES[method]
    except KeyError:
        raise DomainError(
            f"unknown method {method!r}; expected one of {sorted(_ENGINES)}"
        ) from None
    return math.fsum(t.w * engine(t.c, t.theta, link) for t in terms)


def aser(scheme: ModulationScheme, link: IrsLink, method: str = "closed-form") -> float:
    """ASER of any supported scheme (raw value)."""
    return aser_from_terms(decompose(scheme), link, method)


def aser_rqam(m_i: int, m_q: int, beta: float, link: IrsLink) -> float:
    return aser(ModulationScheme.rqam(m_i, m_q, beta), link)


def aser_sqam(m: int, link: IrsLink) -> float:
    return aser(ModulationScheme.sqam(m), link)


def aser_bpsk(link: IrsLink) -> float:
    return aser(ModulationScheme.bpsk(), link)


def aser_xqam(m: int, link: IrsLink) -> float:
    return aser(ModulationScheme.xqam(m), link)


@dataclass(frozen=True)
class AserCurve:
    """ASER values over an SNR grid.

    ``values`` are clamped to ``[0, 1]`` for reporting; ``raw`` keeps the
    engine output so that numerical pathologies stay visible.
    """

    snr_db: np.ndarray
    values: np.ndarray
    method: str
    scheme: ModulationScheme
    N: Optional[int] = None
    raw: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        snr = np.asarray(self.snr_db, dtype=float)
        raw = np.asarray(self.values if self.raw is None else self.raw, dtype=float)
        if snr.shape != raw.shape:
            raise DomainError("snr_db and values must have the same length")
        if self.method not in METHODS:
            raise DomainError(f"unknown method tag {self.method!r}")
        object.__setattr__(self, "snr_db", snr)
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "values", np.clip(raw, 0.0, 1.0))

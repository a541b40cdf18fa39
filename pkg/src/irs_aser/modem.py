"""Modulation schemes, their Craig-form SER decompositions and constellations.

Every supported scheme has a conditional SER (given instantaneous SNR ``x``)
of the form ``sum_i w_i * Q_z(c_i * sqrt(x), theta_i)``. :func:`decompose`
returns that weighted term list; the ASER engines only ever see the terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError

__all__ = [
    "Kind",
    "ModulationScheme",
    "RqamParams",
    "XqamParams",
    "QzTerm",
    "QzTermSet",
    "XQAM_SIZES",
    "arccot",
    "rqam_params",
    "xqam_params",
    "decompose",
    "constellation",
]

HALF_PI = 0.5 * math.pi
XQAM_SIZES = (32, 128, 512, 2048)


def arccot(r: float) -> float:
    """Inverse cotangent on ``(0, pi/2]`` for ``r >= 0``."""
    if r == 0.0:
        return HALF_PI
    return math.atan(1.0 / r)


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Kind(str, Enum):
    RQAM = "rqam"
    SQAM = "sqam"
    XQAM = "xqam"
    BPSK = "bpsk"


@dataclass(frozen=True)
class ModulationScheme:
    """A QAM-family signaling scheme.

    Use the ``rqam``, ``sqam``, ``xqam`` and ``bpsk`` constructors rather than
    the raw initializer. SQAM and BPSK are stored with their equivalent
    rectangular parameters filled in.
    """

    kind: Kind
    m_i: int = 0
    m_q: int = 0
    beta: float = 0.0
    m: int = 0

    def __post_init__(self) -> None:
        kind = self.kind
        if kind is Kind.XQAM:
            if self.m not in XQAM_SIZES:
                raise DomainError(
                    f"XQAM order must be one of {', '.join(map(str, XQAM_SIZES))}; "
                    f"got {self.m}"
                )
            return
        m_i, m_q, beta = self.m_i, self.m_q, float(self.beta)
        if not (isinstance(m_i, int) and isinstance(m_q, int)):
            raise DomainError("RQAM sizes must be integers")
        if m_i < 2 or not _is_pow2(m_i):
            raise DomainError(f"M_I must be a power of 2 and >= 2, got {m_i}")
        if m_q < 1 or not _is_pow2(m_q):
            raise DomainError(f"M_Q must be a power of 2 and >= 1, got {m_q}")
        if not (beta >= 0.0 and math.isfinite(beta)):
            raise DomainError(f"beta must be finite and >= 0, got {beta}")
        if beta == 0.0 and m_q != 1:
            raise DomainError("beta = 0 is only allowed with M_Q = 1")
        if kind is Kind.SQAM and (m_i != m_q or beta != 1.0):
            raise DomainError("SQAM requires M_I == M_Q and beta == 1")
        if kind is Kind.BPSK and (m_i, m_q, beta) != (2, 1, 0.0):
            raise DomainError("BPSK is RQAM(2, 1, beta=0)")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "m", m_i * m_q)

    @classmethod
    def rqam(cls, m_i: int, m_q: int, beta: float = 1.0) -> "ModulationScheme":
        return cls(Kind.RQAM, m_i=m_i, m_q=m_q, beta=beta)

    @classmethod
    def sqam(cls, m: int) -> "ModulationScheme":
        root = math.isqrt(m) if m > 0 else 0
        if root * root != m or root < 2 or not _is_pow2(m) or (m.bit_length() - 1) % 2:
            raise DomainError(f"SQAM order must be a power of 4 (>= 4), got {m}")
        return cls(Kind.SQAM, m_i=root, m_q=root, beta=1.0)

    @classmethod
    def xqam(cls, m: int) -> "ModulationScheme":
        return cls(Kind.XQAM, m=m)

    @classmethod
    def bpsk(cls) -> "ModulationScheme":
        return cls(Kind.BPSK, m_i=2, m_q=1, beta=0.0)

    @property
    def order(self) -> int:
        """Constellation size M."""
        return self.m

    @property
    def is_rectangular(self) -> bool:
        return self.kind is not Kind.XQAM

    @property
    def label(self) -> str:
        if self.kind is Kind.XQAM:
            return f"xqam:{self.m}"
        if self.kind is Kind.SQAM:
            return f"sqam:{self.m}"
        if self.kind is Kind.BPSK:
            return "bpsk"
        return f"rqam:{self.m_i}x{self.m_q}:b={self.beta:g}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class RqamParams:
    p: float
    q: float
    a: float
    b: float


def rqam_params(scheme: ModulationScheme) -> RqamParams:
    """Probabilities and argument scales of the rectangular-QAM SER."""
    if not scheme.is_rectangular:
        raise DomainError(f"{scheme} is not a rectangular constellation")
    m_i, m_q, beta = scheme.m_i, scheme.m_q, scheme.beta
    p = 1.0 - 1.0 / m_i
    q = 1.0 - 1.0 / m_q
    a = math.sqrt(6.0 / ((m_i * m_i - 1) + (m_q * m_q - 1) * beta * beta))
    return RqamParams(p=p, q=q, a=a, b=beta * a)


@dataclass(frozen=True)
class XqamParams:
    w1: float
    w2: float
    w3: float
    L: int
    a0: float
    a_l: tuple[float, ...]
    alpha_l: tuple[float, ...]
    beta_plus_l: tuple[float, ...]
    beta_minus_l: tuple[float, ...]


def xqam_params(m: int) -> XqamParams:
    """Weights, scales and angles of the cross-QAM SER.

    ``a_l`` covers ``l = 1..L``; ``alpha_l`` and ``beta_plus_l`` cover
    ``l = 1..L-1``; ``beta_minus_l`` covers ``l = 2..L``.
    """
    if m not in XQAM_SIZES:
        raise DomainError(
            f"XQAM order must be one of {', '.join(map(str, XQAM_SIZES))}; got {m}"
        )
    r = math.sqrt(2.0 * m)
    big_l = int(round(r / 8.0))
    a0 = math.sqrt(96.0 / (31.0 * m - 32.0))
    return XqamParams(
        w1=4.0 - 6.0 / r,
        w2=4.0 / m,
        w3=4.0 - 12.0 / r + 12.0 / m,
        L=big_l,
        a0=a0,
        a_l=tuple(math.sqrt(2.0) * l * a0 for l in range(1, big_l + 1)),
        alpha_l=tuple(math.atan(1.0 / (2 * l + 1)) for l in range(1, big_l)),
        beta_plus_l=tuple(math.atan(l / (l + 1)) for l in range(1, big_l)),
        beta_minus_l=tuple(math.atan(l / (l - 1)) for l in range(2, big_l + 1)),
    )


@dataclass(frozen=True)
class QzTerm:
    w: float
    c: float
    theta: float


@dataclass(frozen=True)
class QzTermSet:
    """Weighted Craig-form terms of a conditional SER.

    Represents ``x -> sum w * Q_z(c * sqrt(x), theta)``.
    """

    terms: tuple[QzTerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if not (t.c > 0.0 and 0.0 < t.theta <= HALF_PI):
                raise DomainError(f"invalid Craig term {t}")

    def __iter__(self) -> Iterator[QzTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "QzTermSet") -> "QzTermSet":
        return QzTermSet(self.terms + other.terms)

    def scaled(self, k: float) -> "QzTermSet":
        return QzTermSet(tuple(QzTerm(k * t.w, t.c, t.theta) for t in self.terms))

    def zero_snr_limit(self) -> float:
        """Value of the conditional SER at zero SNR, ``sum w * theta / pi``."""
        return math.fsum(t.w * t.theta for t in self.terms) / math.pi


def _terms(raw: Iterable[tuple[float, float, float]]) -> QzTermSet:
    return QzTermSet(tuple(QzTerm(w, c, th) for w, c, th in raw if w != 0.0))


def decompose(scheme: ModulationScheme) -> QzTermSet:
    """Craig-form term decomposition of the scheme's conditional SER."""
    if scheme.is_rectangular:
        rp = rqam_params(scheme)
        p, q, a, b = rp.p, rp.q, rp.a, rp.b
        if q == 0.0:
            return _terms([(2.0 * p, a, HALF_PI)])
        return _terms([
            (2.0 * p, a, HALF_PI),
            (2.0 * q, b, HALF_PI),
            (-2.0 * p * q, b, math.atan(b / a)),
            (-2.0 * p * q, a, arccot(b / a)),
        ])
    xp = xqam_params(scheme.m)
    raw = [
        (xp.w1, xp.a0, HALF_PI),
        (xp.w2, xp.a_l[0], HALF_PI),
        (-xp.w3, xp.a0, math.pi / 4.0),
    ]
    raw += [(-2.0 * xp.w2, xp.a0, al) for al in xp.alpha_l]
    raw += [(-xp.w2, xp.a_l[l - 1], bp) for l, bp in enumerate(xp.beta_plus_l, start=1)]
    raw += [(xp.w2, xp.a_l[l - 1], bm) for l, bm in enumerate(xp.beta_minus_l, start=2)]
    return _terms(raw)


def _cross_lattice(m: int) -> np.ndarray:
    # Square of side 3*sqrt(M/2)/2 minus four corner squares of side sqrt(M/2)/4.
    half = math.isqrt(m // 2)
    side = 3 * half // 2
    corner = half // 4
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    re, im = np.meshgrid(levels, levels, indexing="ij")
    edge = side - 1 - 2 * corner
    keep = ~((np.abs(re) > edge) & (np.abs(im) > edge))
    pts = (re + 1j * im)[keep].ravel()
    assert pts.size == m
    return pts


def constellation(scheme: ModulationScheme, es: float = 1.0) -> np.ndarray:
    """Constellation points scaled to average symbol energy ``es``.

    Rectangular schemes use in-phase levels ``(2i - 1 - M_I) d_I`` and
    quadrature levels ``(2j - 1 - M_Q) d_Q`` with ``d_Q = beta d_I``; the point
    order is in-phase major. Cross constellations are the usual square
    lattice with the corners removed.
    """
    if not es > 0.0:
        raise DomainError(f"symbol energy must be positive, got {es}")
    if scheme.is_rectangular:
        m_i, m_q, beta = scheme.m_i, scheme.m_q, scheme.beta
        d_i = math.sqrt(3.0 * es / ((m_i * m_i - 1) + (m_q * m_q - 1) * beta * beta))
        li = (2.0 * np.arange(1, m_i + 1) - 1 - m_i) * d_i
        lq = (2.0 * np.arange(1, m_q + 1) - 1 - m_q) * beta * d_i
        pts = (li[:, None] + 1j * lq[None, :]).ravel()
    else:
        pts = _cross_lattice(scheme.m)
    # Exact-energy normalization; a no-op up to rounding for rectangular grids.
    return pts * math.sqrt(es / np.mean(np.abs(pts) ** 2))

"""Closed-form ASER expressions written out term by term.

These mirror the expanded expressions (one Lauricella function per term,
with the arguments spelled out for each angle type) and exist to
cross-check the term-composition engine in :mod:`irs_aser.aser`. The main
engine never calls them.

The expanded cross-QAM expression is reproduced as written, including the
``(l-1)^2`` / ``(l+1)^2`` pairing of its two indexed sums, which does not
match the angle definitions of the underlying conditional SER (see
``xqam_expanded``).
"""

from __future__ import annotations

import math

from .channel import IrsLink
from .modem import ModulationScheme, rqam_params, xqam_params
from .specfun import Phi1Args, lauricella_phi1


def _phi2(z1: float, z2: float, shift: float) -> float:
    return lauricella_phi1(Phi1Args(1.0, (1.0,), 1.5, (z1, z2)), shift=shift)


def _phi3(z1: float, z2: float, z3: float, shift: float) -> float:
    return lauricella_phi1(Phi1Args(1.0, (0.5, 1.0), 2.0, (z1, z2, z3)), shift=shift)


def i_right_angle(x: float, link: IrsLink) -> float:
    """``I(x, pi/2)``."""
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    den = x * x * g + 2 * d1
    return (x * math.sqrt(2 * d1 * g) / (math.pi * den)
            * _phi2(2 * d1 / den, 2 * d1 * d2 / den, d2))


def i_arctan(x: float, y: float, z: float, link: IrsLink) -> float:
    """``I(x, arctan(y/z))``."""
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    y2 = y * y
    den = x * x * (y2 + z * z) * g + 2 * d1 * y2
    pre = x * y2 * math.sqrt(2 * d1 * g) / (2 * math.pi * den)
    return pre * _phi3((x * x * g + 2 * d1) * y2 / den, 2 * d1 * y2 / den,
                       2 * d1 * d2 * y2 / den, d2)


def i_arccot(x: float, y: float, link: IrsLink) -> float:
    """``I(x, arccot(y/x))``."""
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    den = (x * x + y * y) * g + 2 * d1
    pre = x * math.sqrt(2 * d1 * g) / (2 * math.pi * den)
    return pre * _phi3((x * x * g + 2 * d1) / den, 2 * d1 / den, 2 * d1 * d2 / den, d2)


def rqam_expanded(m_i: int, m_q: int, beta: float, link: IrsLink) -> float:
    """Rectangular-QAM ASER with all four terms expanded."""
    rp = rqam_params(ModulationScheme.rqam(m_i, m_q, beta))
    p, q, a, b = rp.p, rp.q, rp.a, rp.b
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    root = math.sqrt(2 * d1 * g)

    def right(c):
        den = c * c * g + 2 * d1
        return c * root / (math.pi * den) * _phi2(2 * d1 / den, 2 * d1 * d2 / den, d2)

    total = 2 * p * right(a)
    if q == 0.0:
        return total
    total += 2 * q * right(b)
    den = (a * a + b * b) * g + 2 * d1
    tail = (2 * d1 / den, 2 * d1 * d2 / den)
    total -= (2 * p * q * b * root / (2 * math.pi * den)
              * _phi3((b * b * g + 2 * d1) / den, *tail, d2))
    total -= (2 * p * q * a * root / (2 * math.pi * den)
              * _phi3((a * a * g + 2 * d1) / den, *tail, d2))
    return total


def sqam_expanded(m: int, link: IrsLink) -> float:
    """Square-QAM ASER (two terms)."""
    p = 1 - 1 / math.sqrt(m)
    a = math.sqrt(3 / (m - 1))
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    root = math.sqrt(2 * d1 * g)
    den = a * a * g + 2 * d1
    first = 4 * p * a * root / (math.pi * den) * _phi2(2 * d1 / den, 2 * d1 * d2 / den, d2)
    den2 = a * a * g + d1
    second = (p * p * a * root / (math.pi * den2)
              * _phi3((a * a * g + 2 * d1) / (2 * a * a * g + 2 * d1),
                      d1 / den2, d1 * d2 / den2, d2))
    return first - second


def bpsk_expanded(link: IrsLink) -> float:
    """BPSK ASER (single term)."""
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    den = g + d1
    return (math.sqrt(d1 * g) / (math.pi * den)
            * _phi2(d1 / den, d1 * d2 / den, d2))


def xqam_expanded(m: int, link: IrsLink) -> float:
    """Cross-QAM ASER as written in expanded form.

    The ``-w2`` sum over ``l = 1..L-1`` carries ``l^2 + (l-1)^2`` and the
    ``+w2`` sum over ``l = 2..L`` carries ``l^2 + (l+1)^2``: the angles are
    ``arctan(l/(l-1))`` and ``arctan(l/(l+1))`` respectively, the reverse of
    the conditional SER. For ``M = 32`` (``L = 1``) both sums are empty and
    the expression is exact. For larger ``M`` the ``l = 1`` term has angle
    ``pi/2`` and its first Lauricella argument equals 1, so this function
    raises :class:`~irs_aser.errors.DomainError`.
    """
    xp = xqam_params(m)
    a0 = xp.a0
    g, d1, d2 = link.gamma_bar, link.delta1, link.delta2
    root = math.sqrt(2 * d1 * g)

    def right(c):
        den = c * c * g + 2 * d1
        return c * root / (math.pi * den) * _phi2(2 * d1 / den, 2 * d1 * d2 / den, d2)

    total = xp.w1 * right(a0) + xp.w2 * right(xp.a_l[0])
    den = a0 * a0 * g + d1
    total -= (xp.w3 * a0 * root / (4 * math.pi * den)
              * _phi3((a0 * a0 * g + 2 * d1) / (2 * a0 * a0 * g + 2 * d1),
                      d1 / den, d1 * d2 / den, d2))
    for l in range(1, xp.L):
        den = a0 * a0 * (1 + (2 * l + 1) ** 2) * g + 2 * d1
        total -= (2 * xp.w2 * a0 * root / (2 * math.pi * den)
                  * _phi3((a0 * a0 * g + 2 * d1) / den, 2 * d1 / den,
                          2 * d1 * d2 / den, d2))

    def indexed(l, other):
        al = xp.a_l[l - 1]
        l2 = l * l
        den = al * al * (l2 + other * other) * g + 2 * d1 * l2
        return (al * l2 * root / (2 * math.pi * den)
                * _phi3((al * al * g + 2 * d1) * l2 / den, 2 * d1 * l2 / den,
                        2 * d1 * d2 * l2 / den, d2))

    for l in range(1, xp.L):
        total -= xp.w2 * indexed(l, l - 1)
    for l in range(2, xp.L + 1):
        total += xp.w2 * indexed(l, l + 1)
    return total

"""Gaussian Q-function, Craig-form Q_z and the confluent Lauricella function.

All routines are pure and thread-safe. Adaptive integration is delegated to
QUADPACK (``scipy.integrate.quad``), a 21-point Gauss-Kronrod scheme.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy import integrate, special

from .errors import DomainError, NumericError

__all__ = [
    "Phi1Args",
    "gaussian_q",
    "qz",
    "lauricella_phi1",
    "gamma_exact",
    "REL_TOL",
    "adaptive_quad",
    "log_ladder",
]

HALF_PI = 0.5 * math.pi

# Relative target for every adaptive integral in the package. There is no
# absolute floor: ASER values reach 1e-90 for large surfaces.
REL_TOL = 1e-10
_QUAD_LIMIT = 500

# Gamma is only ever needed at these points.
_GAMMA_TABLE = {
    0.5: math.sqrt(math.pi),
    1.0: 1.0,
    1.5: 0.5 * math.sqrt(math.pi),
    2.0: 1.0,
}


def gamma_exact(x: float) -> float:
    """Gamma function, exact for the half-integers the ASER formulas use."""
    try:
        return _GAMMA_TABLE[float(x)]
    except KeyError:
        return math.gamma(x)


def adaptive_quad(func, lo, hi, points=None, what="integral"):
    """Adaptive integral with a purely relative tolerance.

    QUADPACK roundoff warnings are tolerated when the returned error estimate
    is still within a small multiple of the target; anything coarser raises
    NumericError.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            func, lo, hi, epsabs=0.0, epsrel=REL_TOL, limit=_QUAD_LIMIT,
            points=points,
        )
    if not math.isfinite(value) or err > 1e3 * REL_TOL * abs(value) + 1e-300:
        raise NumericError(
            f"{what}: quadrature did not converge "
            f"(value={value:.6e}, error estimate={err:.3e})",
            estimate=err,
        )
    return value


def gaussian_q(t: float) -> float:
    """Gaussian tail probability ``Q(t) = P(Z > t)`` for standard normal Z.

    Parameters
    ----------
    t : float
        Threshold. Infinite values are accepted (``Q(inf) = 0``,
        ``Q(-inf) = 1``); NaN is rejected.

    Returns
    -------
    float
        Probability in ``[0, 1]``.
    """
    t = float(t)
    if math.isnan(t):
        raise DomainError("gaussian_q: argument is NaN")
    return float(0.5 * special.erfc(t / math.sqrt(2.0)))


def qz(t: float, theta: float) -> float:
    """Craig-form integral ``(1/pi) int_0^theta exp(-t^2 / (2 sin^2 phi)) dphi``.

    ``qz(t, pi/2)`` is the Gaussian Q-function and ``qz(0, theta)`` is
    ``theta/pi``.

    Parameters
    ----------
    t : float
        Nonnegative argument.
    theta : float
        Upper angle in ``(0, pi/2]``.
    """
    t = float(t)
    theta = float(theta)
    if not t >= 0.0 or math.isinf(t):
        raise DomainError(f"qz: t must be finite and >= 0, got {t}")
    if not 0.0 < theta <= HALF_PI * (1 + 1e-15):
        raise DomainError(f"qz: theta must lie in (0, pi/2], got {theta}")
    theta = min(theta, HALF_PI)
    if theta < 1e-12:
        return 0.0
    if t == 0.0:
        return theta / math.pi

    def integrand(phi):
        s = math.sin(phi)
        if s <= 0.0:
            return 0.0
        r = t / s
        return math.exp(-0.5 * r * r)

    # Below this the integral underflows to 0 anyway.
    if 0.5 * (t / math.sin(theta)) ** 2 > 745.0:
        return 0.0
    # For small t the integrand climbs from 0 to 1 around phi ~ t and then
    # approaches 1 algebraically; a log-spaced ladder resolves both.
    points = log_ladder(0.1 * t, 0.5 * theta) or None
    return adaptive_quad(integrand, 0.0, theta, points=points, what="qz") / math.pi


@dataclass(frozen=True)
class Phi1Args:
    """Arguments of ``Phi_1^(n)(m; p_1..p_{n-1}; q; z_1..z_n)``.

    ``z_vec[-1]`` is the argument of the exponential factor; the others are
    the arguments of the ``(1 - v z_i)^(-p_i)`` factors. ``gaps`` may carry
    ``1 - z_i`` for those factors when the caller knows it more accurately
    than the subtraction would give (``z_i`` within rounding of 1).
    """

    m: float
    p_vec: tuple[float, ...]
    q: float
    z_vec: tuple[float, ...]
    gaps: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_vec", tuple(float(p) for p in self.p_vec))
        object.__setattr__(self, "z_vec", tuple(float(z) for z in self.z_vec))
        if len(self.z_vec) != len(self.p_vec) + 1:
            raise DomainError(
                f"Phi1Args: need len(z_vec) == len(p_vec) + 1, got "
                f"{len(self.z_vec)} and {len(self.p_vec)}"
            )
        if not (self.q > self.m > 0):
            raise DomainError(f"Phi1Args: need q > m > 0, got m={self.m}, q={self.q}")
        for z in self.z_vec:
            if not math.isfinite(z):
                raise DomainError(f"Phi1Args: non-finite argument {z}")
        if self.gaps is None:
            object.__setattr__(self, "gaps", tuple(1.0 - z for z in self.z_vec[:-1]))
        else:
            object.__setattr__(self, "gaps", tuple(float(g) for g in self.gaps))
            if len(self.gaps) != len(self.p_vec):
                raise DomainError("Phi1Args: gaps must match p_vec in length")
        for z, gap in zip(self.z_vec[:-1], self.gaps):
            if not (z < 1.0 and gap > 0.0):
                raise DomainError(f"Phi1Args: z_i must be < 1, got {z}")

    @property
    def n(self) -> int:
        return len(self.z_vec)


def log_ladder(start: float, stop: float, factor: float = 10.0) -> list[float]:
    """Points ``start * factor**k`` below ``stop`` (quadrature breakpoints)."""
    out = []
    x = start
    while 0.0 < x < stop:
        out.append(x)
        x *= factor
    return out


def lauricella_phi1(args: Phi1Args, shift: float = 0.0) -> float:
    """Confluent Lauricella function from its finite integral representation.

    Evaluates::

        G(q) / (G(m) G(q-m)) * int_0^1 v^(m-1) (1-v)^(q-m-1)
            * prod_i (1 - v z_i)^(-p_i) * exp(v z_n) dv

    after the change of variable ``1 - v = w^2``, which removes the
    ``(1-v)^(-1/2)`` endpoint singularity and stretches the near-singular
    region that appears when some ``z_i`` approaches 1.

    Parameters
    ----------
    args : Phi1Args
        Validated parameter set.
    shift : float, optional
        The result is multiplied by ``exp(-shift)``. The factor is applied
        inside the integrand so that ``exp(z_n)`` never overflows.

    Returns
    -------
    float
        ``Phi_1 * exp(-shift)``.
    """
    m, q = args.m, args.q
    zs = args.z_vec[:-1]
    gaps = args.gaps
    ps = args.p_vec
    zn = args.z_vec[-1]
    # (1-v)^(q-m-1) dv  ->  2 w^(2(q-m)-1) dw
    w_power = 2.0 * (q - m) - 1.0
    norm = gamma_exact(q) / (gamma_exact(m) * gamma_exact(q - m))

    def integrand(w):
        w2 = w * w
        v = 1.0 - w2
        val = 2.0 * math.exp(v * zn - shift)
        if w_power != 0.0:
            val *= w ** w_power
        if m != 1.0:
            val *= v ** (m - 1.0)
        for p, z, gap in zip(ps, zs, gaps):
            if p != 0.0:
                # 1 - v z = (1 - z) + z w^2
                val *= (gap + z * w2) ** (-p)
        return val

    # Peaks of width sqrt((1 - z)/z) sit at w = 0 when z is close to 1, with
    # algebraic tails reaching out to w ~ 1.
    points = sorted(
        {p for z, gap in zip(zs, gaps) if z > 0.0 for p in log_ladder(math.sqrt(gap / z), 0.5)}
    )
    return norm * adaptive_quad(integrand, 0.0, 1.0, points=points or None, what="lauricella_phi1")

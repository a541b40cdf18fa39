"""IRS cascade channel: composite-gain sampling and the CLT-based MGF.

With ideal phase alignment the end-to-end amplitude is
``A = sum_l |h_l| |g_l|`` over ``N`` elements, and the instantaneous SNR is
``gamma = A^2 * gamma_bar``. For large ``N``, ``A`` is approximately normal
with mean ``pi N / 4`` and variance ``(1 - pi^2/16) N``, which gives the
closed-form MGF evaluated by :func:`mgf_approx`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "IrsLink",
    "link_params",
    "db_to_linear",
    "mgf_approx",
    "mgf_from_moments",
    "sample_composite_gain",
    "composite_gain_samples",
    "empirical_mgf",
    "gain_mean",
    "gain_variance",
]

_K = 16.0 - math.pi ** 2


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def gain_mean(n: int) -> float:
    """Mean of the composite gain, ``pi N / 4``."""
    return 0.25 * math.pi * n


def gain_variance(n: int) -> float:
    """Variance of the composite gain, ``(1 - pi^2/16) N``."""
    return (1.0 - math.pi ** 2 / 16.0) * n


@dataclass(frozen=True)
class IrsLink:
    """An ``N``-element surface at average SNR ``gamma_bar`` (linear)."""

    N: int
    gamma_bar: float
    delta1: float = field(init=False)
    delta2: float = field(init=False)

    def __post_init__(self) -> None:
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise DomainError(f"element count must be an integer >= 1, got {self.N!r}")
        if not (self.gamma_bar >= 0.0 and math.isfinite(self.gamma_bar)):
            raise DomainError(f"average SNR must be finite and >= 0, got {self.gamma_bar}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "gamma_bar", float(self.gamma_bar))
        object.__setattr__(self, "delta1", 8.0 / (self.N * _K))
        object.__setattr__(self, "delta2", self.N * math.pi ** 2 / (2.0 * _K))

    @property
    def gamma_bar_db(self) -> float:
        return 10.0 * math.log10(self.gamma_bar) if self.gamma_bar > 0 else -math.inf

    @property
    def mean_power_gain(self) -> float:
        """``E[A^2]`` under the normal approximation."""
        return self.delta2 / self.delta1 + 0.5 / self.delta1

    def with_snr(self, gamma_bar: float) -> "IrsLink":
        return IrsLink(self.N, gamma_bar)


def link_params(n: int, gamma_bar_db: float) -> IrsLink:
    """Build an :class:`IrsLink` from an element count and an SNR in dB."""
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"element count must be an integer >= 1, got {n!r}")
    return IrsLink(int(n), db_to_linear(gamma_bar_db))


def mgf_approx(s: float, link: IrsLink) -> float:
    """CLT approximation of ``E[exp(-s * gamma)]``.

    ``(D1 / (D1 + s g))^0.5 * exp(-s g D2 / (D1 + s g))`` with ``g`` the
    average SNR. ``s = inf`` is accepted and gives 0 (or 1 when ``g = 0``).
    """
    if not s >= 0.0:
        raise DomainError(f"MGF argument must be >= 0, got {s}")
    sg = s * link.gamma_bar if link.gamma_bar > 0.0 else 0.0
    if math.isinf(sg):
        return 0.0
    d1, d2 = link.delta1, link.delta2
    den = d1 + sg
    return math.sqrt(d1 / den) * math.exp(-sg * d2 / den)


def mgf_from_moments(s: float, link: IrsLink) -> float:
    """``E[exp(-s g A^2)]`` for ``A`` normal with the gain's exact mean and variance.

    Algebraically equal to :func:`mgf_approx` but built from
    :func:`gain_mean` and :func:`gain_variance` instead of ``D1`` and ``D2``.
    """
    if not s >= 0.0:
        raise DomainError(f"MGF argument must be >= 0, got {s}")
    sg = s * link.gamma_bar if link.gamma_bar > 0.0 else 0.0
    if math.isinf(sg):
        return 0.0
    mu, var = gain_mean(link.N), gain_variance(link.N)
    den = 1.0 + 2.0 * sg * var
    return math.exp(-sg * mu * mu / den) / math.sqrt(den)


def composite_gain_samples(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent draws of ``A = sum_l |h_l| |g_l|``.

    Each coefficient is a unit-power circular complex Gaussian, so its squared
    magnitude is standard exponential; ``|h| |g|`` is drawn as the square
    root of a product of two exponentials. Draws are made in a fixed order so
    a given generator state always produces the same array.
    """
    if n < 1:
        raise DomainError(f"element count must be >= 1, got {n}")
    out = np.empty(size)
    # Bound the temporary (rows x N x 2) block to ~16 MB.
    rows = max(1, (1 << 20) // n)
    for start in range(0, size, rows):
        k = min(rows, size - start)
        e = rng.standard_exponential((k, n, 2))
        prod = e[..., 0] * e[..., 1]
        np.sqrt(prod, out=prod)
        out[start:start + k] = prod.sum(axis=1)
    return out


def sample_composite_gain(n: int, rng: np.random.Generator) -> float:
    """One draw of the composite gain ``A``."""
    return float(composite_gain_samples(n, 1, rng)[0])


def empirical_mgf(
    n: int,
    gamma_bar: float,
    s: float,
    num_samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo estimate of ``E[exp(-s A^2 gamma_bar)]``.

    Returns
    -------
    (value, standard_error)
    """
    if num_samples < 10_000:
        raise DomainError(f"num_samples must be >= 1e4, got {num_samples}")
    if s == 0.0 or gamma_bar == 0.0:
        return 1.0, 0.0
    a = composite_gain_samples(n, num_samples, rng)
    vals = np.exp(-s * gamma_bar * a * a)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(num_samples))

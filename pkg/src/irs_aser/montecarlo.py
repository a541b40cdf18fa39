"""Seeded link-level simulation of the IRS cascade (or plain AWGN).

Per symbol: draw the composite gain ``A`` (``A = 1`` in AWGN mode), send a
uniformly chosen unit-energy constellation point ``x``, receive
``r = A x + n`` with complex noise of total variance ``1/gamma_bar``, and
detect by minimum Euclidean distance against ``A`` times the constellation
(per-axis slicing for rectangular grids, which is equivalent).

The symbol budget is cut into fixed-size chunks. Chunk ``k`` draws from its
own generator, seeded by ``SeedSequence(seed, spawn_key=(k,))``, so the
result depends only on ``(config, chunk_size)``, never on how many workers
process the chunks.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .channel import composite_gain_samples, db_to_linear, gain_mean, gain_variance
from .errors import DomainError
from .modem import ModulationScheme, constellation

__all__ = [
    "SimulationConfig",
    "SimulationReport",
    "CltStats",
    "simulate_ser",
    "simulate_ser_sweep",
    "validate_clt",
    "worker_count",
    "substream",
]

log = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 16
MIN_EXPECTED_ERRORS = 100


def worker_count() -> int:
    """Worker pool size: ``ASER_THREADS`` if set, else the CPU count."""
    env = os.environ.get("ASER_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"ASER_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator number ``index`` derived from ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


@dataclass(frozen=True)
class CltStats:
    mean_A: float
    var_A: float
    ks_statistic: float


@dataclass(frozen=True)
class SimulationConfig:
    """One simulation point.

    ``N = None`` selects AWGN mode (unit channel gain).
    """

    scheme: ModulationScheme
    N: Optional[int]
    gamma_bar_db: float
    num_symbols: int = 1_000_000
    seed: int = 0
    block_size: int = 1
    chunk_size: int = DEFAULT_CHUNK
    collect_clt: bool = False

    def __post_init__(self) -> None:
        if self.num_symbols < 1000:
            raise DomainError(f"num_symbols must be >= 1000, got {self.num_symbols}")
        if self.block_size < 1:
            raise DomainError(f"block_size must be >= 1, got {self.block_size}")
        if self.chunk_size < 1:
            raise DomainError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.N is not None and not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise DomainError(f"element count must be an integer >= 1, got {self.N!r}")
        if not math.isfinite(self.gamma_bar_db):
            raise DomainError(f"SNR must be finite, got {self.gamma_bar_db}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimulationReport:
    errors_counted: int
    symbols_sent: int
    seed: int
    clt_stats: Optional[CltStats] = None
    ser_estimate: float = field(init=False)
    standard_error: float = field(init=False)

    def __post_init__(self) -> None:
        p = self.errors_counted / self.symbols_sent
        object.__setattr__(self, "ser_estimate", p)
        object.__setattr__(self, "standard_error", math.sqrt(p * (1.0 - p) / self.symbols_sent))

    def z_score(self, predicted: float) -> float:
        """Deviation from a predicted SER in units of its binomial standard error."""
        se = math.sqrt(max(predicted * (1.0 - predicted), 0.0) / self.symbols_sent)
        diff = self.ser_estimate - predicted
        if se == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / se


class _Detector:
    """Hard decisions on equalized samples ``y = r / A``."""

    def __init__(self, scheme: ModulationScheme) -> None:
        self.scheme = scheme
        self.points = constellation(scheme, 1.0)
        if scheme.is_rectangular:
            m_i, m_q = scheme.m_i, scheme.m_q
            # in-phase major ordering: index = i * m_q + j
            self.d_i = float(self.points[m_q].real - self.points[0].real) / 2.0 if m_i > 1 else 1.0
            self.d_q = (float(self.points[1].imag - self.points[0].imag) / 2.0
                        if m_q > 1 else 1.0)

    def errors(self, sent: np.ndarray, y: np.ndarray) -> int:
        s = self.scheme
        if s.is_rectangular:
            m_i, m_q = s.m_i, s.m_q
            i_hat = np.clip(np.rint((y.real / self.d_i + (m_i - 1)) / 2.0), 0, m_i - 1)
            wrong = i_hat != sent // m_q
            if m_q > 1:
                j_hat = np.clip(np.rint((y.imag / self.d_q + (m_q - 1)) / 2.0), 0, m_q - 1)
                wrong |= j_hat != sent % m_q
            return int(np.count_nonzero(wrong))
        count = 0
        step = max(1, (1 << 22) // self.points.size)
        for lo in range(0, y.size, step):
            d = np.abs(y[lo:lo + step, None] - self.points[None, :])
            count += int(np.count_nonzero(np.argmin(d, axis=1) != sent[lo:lo + step]))
        return count


def _run_chunk(k, size, scheme, n, block_size, seed, snrs, detector, keep_gain):
    rng = substream(seed, k)
    if n is None:
        gain = np.ones(size)
    else:
        blocks = -(-size // block_size)
        gain = np.repeat(composite_gain_samples(n, blocks, rng), block_size)[:size]
    sent = rng.integers(0, detector.points.size, size=size)
    noise = rng.standard_normal((size, 2)).view(np.complex128).ravel()
    tx = gain * detector.points[sent]
    errs = []
    for g in snrs:
        # N0 = 1/g split evenly over the two real dimensions
        r = tx + noise * math.sqrt(0.5 / g)
        errs.append(detector.errors(sent, r / gain))
    return errs, (gain if keep_gain else None)


def _clt_stats(gain: np.ndarray, n: int) -> CltStats:
    ref = stats.norm(loc=gain_mean(n), scale=math.sqrt(gain_variance(n)))
    return CltStats(
        mean_A=float(gain.mean()),
        var_A=float(gain.var(ddof=1)),
        ks_statistic=float(stats.kstest(gain, ref.cdf).statistic),
    )


def simulate_ser_sweep(
    config: SimulationConfig,
    snr_db: Sequence[float],
    workers: Optional[int] = None,
) -> list[SimulationReport]:
    """Simulate several SNR points with common channel, symbol and noise draws.

    Each point's report has the same distribution as a standalone
    :func:`simulate_ser` run; ``config.gamma_bar_db`` is ignored.
    """
    snrs = [db_to_linear(float(x)) for x in snr_db]
    for x in snr_db:
        if not math.isfinite(float(x)):
            raise DomainError(f"SNR must be finite, got {x}")
    detector = _Detector(config.scheme)
    total, chunk = config.num_symbols, config.chunk_size
    sizes = [min(chunk, total - lo) for lo in range(0, total, chunk)]
    keep = config.collect_clt and config.N is not None

    def job(k):
        return _run_chunk(k, sizes[k], config.scheme, config.N, config.block_size,
                          config.seed, snrs, detector, keep)

    n_workers = min(workers or worker_count(), len(sizes))
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(job, range(len(sizes))))
    else:
        results = [job(k) for k in range(len(sizes))]

    clt = None
    if keep:
        clt = _clt_stats(np.concatenate([g for _, g in results]), config.N)
    reports = []
    for i, x in enumerate(snr_db):
        errors = sum(errs[i] for errs, _ in results)
        if errors < MIN_EXPECTED_ERRORS:
            log.warning(
                "%s at %.2f dB: only %d symbol errors in %d symbols; "
                "the estimate is unreliable", config.scheme, x, errors, total,
            )
        reports.append(SimulationReport(errors, total, config.seed, clt))
    return reports


def simulate_ser(config: SimulationConfig, workers: Optional[int] = None) -> SimulationReport:
    """Estimate the SER at ``config.gamma_bar_db``."""
    return simulate_ser_sweep(config, [config.gamma_bar_db], workers)[0]


def validate_clt(n: int, num_samples: int, seed: int) -> CltStats:
    """Sample moments of ``A`` and its KS distance to the normal approximation."""
    if num_samples < 100_000:
        raise DomainError(f"num_samples must be >= 1e5, got {num_samples}")
    chunk = DEFAULT_CHUNK
    parts = [
        composite_gain_samples(n, min(chunk, num_samples - lo), substream(seed, k))
        for k, lo in enumerate(range(0, num_samples, chunk))
    ]
    return _clt_stats(np.concatenate(parts), n)

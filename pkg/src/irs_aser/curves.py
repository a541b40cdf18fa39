"""ASER curves over SNR grids, for every method tag."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import asymptotics as asy
from .aser import METHODS, AserCurve, aser_from_terms
from .channel import IrsLink, db_to_linear
from .errors import DomainError
from .modem import ModulationScheme, decompose
from .montecarlo import SimulationConfig, simulate_ser_sweep, worker_count

__all__ = ["parse_snr_range", "compute_curve", "DEFAULT_SNR"]

DEFAULT_SNR = "-20:0.5:30"
_AWGN_METHODS = ("awgn-bound", "awgn-exact")


def parse_snr_range(text: str) -> np.ndarray:
    """Parse ``"start:step:stop"`` (dB, stop inclusive) into a grid.

    A single number gives a one-point grid.
    """
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        bad = next(p for p in parts if not _is_float(p))
        raise DomainError(f"bad SNR range {text!r}: cannot parse {bad!r}") from None
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise DomainError(f"bad SNR range {text!r}: expected start:step:stop")
    start, step, stop = nums
    if not step > 0 or stop < start:
        raise DomainError(f"bad SNR range {text!r}: need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 10)


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _point_fn(scheme: ModulationScheme, n: Optional[int], method: str):
    terms = decompose(scheme)
    if method in ("closed-form", "quadrature"):
        return lambda g: aser_from_terms(terms, IrsLink(n, g), method)
    if method == "low-snr":
        if scheme.is_rectangular:
            return lambda g: asy.aser_rqam_low_snr(scheme.m_i, scheme.m_q, scheme.beta, IrsLink(n, g))
        return lambda g: asy.aser_low_snr_from_terms(terms, IrsLink(n, g))
    if method == "high-snr":
        if scheme.is_rectangular:
            return lambda g: asy.aser_rqam_high_snr(scheme.m_i, scheme.m_q, scheme.beta, IrsLink(n, g))
        return lambda g: asy.aser_high_snr_from_terms(terms, IrsLink(n, g))
    if method == "awgn-bound":
        if scheme.is_rectangular:
            return lambda g: asy.aser_rqam_awgn_bound(scheme.m_i, scheme.m_q, scheme.beta, g)
        return lambda g: asy.awgn_bound_from_terms(terms, g)
    if method == "awgn-exact":
        return lambda g: asy.aser_awgn_exact(scheme, g)
    raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def compute_curve(
    scheme: ModulationScheme,
    n: Optional[int],
    snr_db: Sequence[float],
    method: str = "closed-form",
    num_symbols: int = 1_000_000,
    seed: int = 0,
    workers: Optional[int] = None,
) -> AserCurve:
    """ASER of ``scheme`` over ``snr_db`` by the named method.

    ``n`` is the element count; it must be ``None`` for the AWGN methods and
    may be ``None`` for ``"monte-carlo"`` (AWGN simulation).
    """
    snr = np.asarray(snr_db, dtype=float)
    if method in _AWGN_METHODS:
        n = None
    elif n is None and method != "monte-carlo":
        raise DomainError(f"method {method!r} needs an element count N")
    if method == "monte-carlo":
        cfg = SimulationConfig(scheme, n, float(snr[0]), num_symbols=num_symbols, seed=seed)
        reports = simulate_ser_sweep(cfg, snr, workers=workers)
        raw = np.array([r.ser_estimate for r in reports])
    else:
        fn = _point_fn(scheme, n, method)
        gammas = [db_to_linear(x) for x in snr]
        n_workers = min(workers or worker_count(), len(gammas))
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                raw = np.array(list(pool.map(fn, gammas)))
        else:
            raw = np.array([fn(g) for g in gammas])
    return AserCurve(snr_db=snr, values=raw, method=method, scheme=scheme, N=n, raw=raw)

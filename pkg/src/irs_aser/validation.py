"""Self-check suites run by ``irs-aser validate``.

Every check compares a package routine with something computed another way:
arbitrary-precision quadrature for the special functions, an MGF rebuilt
from the gain moments for the closed forms, and seeded simulation for the
analysis. Reports are deterministic for a given ``(level, seed)``.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Iterator

import mpmath
import numpy as np

from .aser import aser_from_terms, integral_I_quadrature
from .asymptotics import aser_awgn_exact, aser_rqam_high_snr
from .channel import IrsLink, gain_mean, gain_variance, link_params, mgf_from_moments
from .modem import ModulationScheme, decompose
from .montecarlo import SimulationConfig, simulate_ser, validate_clt
from .specfun import Phi1Args, gaussian_q, lauricella_phi1, log_ladder, qz

__all__ = ["CheckResult", "run_suite", "format_report", "mutated_delta1", "LEVELS"]

LEVELS = ("fast", "full")
S = ModulationScheme
ALL_SCHEMES = (
    S.bpsk(), S.rqam(4, 2, 1.0), S.rqam(8, 4, 1.0), S.rqam(16, 2, 1.0),
    S.rqam(16, 2, 8.0), S.rqam(8, 4, 0.25), S.sqam(16), S.sqam(64),
    S.xqam(32), S.xqam(128), S.xqam(512), S.xqam(2048),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


# -- arbitrary-precision references ---------------------------------------------

def mp_gaussian_q(t: float) -> float:
    with mpmath.workdps(30):
        return float(mpmath.erfc(mpmath.mpf(t) / mpmath.sqrt(2)) / 2)


def mp_qz(t: float, theta: float) -> float:
    """Tanh-sinh over many panels.

    Panels are refined near ``phi ~ t``, where the integrand turns on, and
    geometrically toward ``theta``, where it peaks when ``t`` is large.
    """
    with mpmath.workdps(30):
        pts = sorted({0.0, theta, *log_ladder(0.1 * t, theta),
                      *(theta * k / 32 for k in range(1, 32)),
                      *(theta * (1 - 2.0 ** -k) for k in range(6, 40))})
        tt = mpmath.mpf(t)
        f = lambda p: mpmath.exp(-tt * tt / (2 * mpmath.sin(p) ** 2))
        return float(mpmath.quad(f, pts) / mpmath.pi)


def mp_phi1(args: Phi1Args) -> float:
    """Tanh-sinh quadrature in the original variable (no substitution)."""
    with mpmath.workdps(30):
        m, q = mpmath.mpf(args.m), mpmath.mpf(args.q)

        def f(v):
            val = v ** (m - 1) * (1 - v) ** (q - m - 1) * mpmath.exp(v * args.z_vec[-1])
            for p, z in zip(args.p_vec, args.z_vec[:-1]):
                val *= (1 - v * z) ** (-p)
            return val

        norm = mpmath.gamma(q) / (mpmath.gamma(m) * mpmath.gamma(q - m))
        return float(norm * mpmath.quad(f, [0, 0.5, 0.9, 0.99, 1]))


def random_phi1_args(rng: np.random.Generator) -> Phi1Args:
    if rng.random() < 0.5:
        return Phi1Args(1.0, (1.0,), 1.5, (rng.uniform(0, 0.98), rng.uniform(0, 30)))
    return Phi1Args(
        1.0, (0.5, 1.0), 2.0,
        (rng.uniform(0, 0.98), rng.uniform(0, 0.98), rng.uniform(0, 30)),
    )


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


# -- checks --------------------------------------------------------------------

def _check_specfun(rng, k):
    worst_q = max(_rel(gaussian_q(t), mp_gaussian_q(t)) for t in rng.uniform(-8, 8, k))
    worst_qz = max(
        _rel(qz(t, th), mp_qz(t, th))
        for t, th in zip(rng.uniform(0, 5, k), rng.uniform(0.01, math.pi / 2, k))
    )
    worst_phi = 0.0
    for _ in range(k):
        args = random_phi1_args(rng)
        worst_phi = max(worst_phi, _rel(lauricella_phi1(args), mp_phi1(args)))
    return [
        CheckResult("specfun.gaussian_q", worst_q <= 1e-8, f"max rel err {worst_q:.1e} over {k}"),
        CheckResult("specfun.qz", worst_qz <= 1e-8, f"max rel err {worst_qz:.1e} over {k}"),
        CheckResult("specfun.lauricella_phi1", worst_phi <= 1e-8,
                    f"max rel err {worst_phi:.1e} over {k}"),
    ]


def _check_zero_limits():
    worst = max(abs(decompose(s).zero_snr_limit() - (1 - 1 / s.order)) for s in ALL_SCHEMES)
    return [CheckResult("modem.zero_snr_limit", worst <= 1e-12,
                        f"max |sum w theta/pi - (1 - 1/M)| = {worst:.1e}")]


def _check_closed_vs_quadrature(rng, k):
    worst = 0.0
    for _ in range(k):
        scheme = ALL_SCHEMES[rng.integers(len(ALL_SCHEMES))]
        n = int(rng.choice([16, 32, 64, 128, 256]))
        link = link_params(n, float(rng.uniform(-20, 30)))
        terms = decompose(scheme)
        closed = aser_from_terms(terms, link, "closed-form")
        oracle = math.fsum(
            t.w * integral_I_quadrature(t.c, t.theta, link, mgf=mgf_from_moments) for t in terms
        )
        worst = max(worst, _rel(closed, oracle))
    return [CheckResult("aser.closed_vs_quadrature", worst <= 1e-6,
                        f"max rel diff {worst:.1e} over {k} tuples")]


def _check_monte_carlo(seed, symbols):
    out = []
    cases = [
        ("montecarlo.awgn_4x2", S.rqam(4, 2, 1.0), None, 10.0),
        ("montecarlo.awgn_xqam32", S.xqam(32), None, 14.0),
        ("montecarlo.irs_4x2_N64", S.rqam(4, 2, 1.0), 64, -25.0),
        ("montecarlo.irs_xqam32_N64", S.xqam(32), 64, -15.0),
    ]
    for k, (name, scheme, n, snr) in enumerate(cases):
        rep = simulate_ser(SimulationConfig(scheme, n, snr, num_symbols=symbols, seed=seed + k))
        if n is None:
            pred = aser_awgn_exact(scheme, 10 ** (snr / 10))
        else:
            pred = aser_from_terms(decompose(scheme), link_params(n, snr))
        z = rep.z_score(pred)
        out.append(CheckResult(name, abs(z) <= 3.0,
                               f"sim {rep.ser_estimate:.4e} vs {pred:.4e} (z={z:+.2f})"))
    return out


def _check_clt(seed, samples):
    st = validate_clt(64, samples, seed)
    dm = abs(st.mean_A / gain_mean(64) - 1)
    dv = abs(st.var_A / gain_variance(64) - 1)
    return [CheckResult("channel.clt_moments_N64", dm <= 0.01 and dv <= 0.03,
                        f"mean off {dm:.2%}, variance off {dv:.2%}")]


def _check_high_snr():
    errs = []
    for snr in (30, 40, 50, 60):
        link = link_params(64, snr)
        exact = aser_from_terms(decompose(S.bpsk()), link)
        errs.append(_rel(aser_rqam_high_snr(2, 1, 0.0, link), exact))
    ok = all(b < a for a, b in zip(errs, errs[1:])) and errs[2] <= 0.05
    return [CheckResult("asymptotics.high_snr_convergence", ok,
                        "rel err " + ", ".join(f"{e:.1e}" for e in errs))]


_SIZES = {
    "fast": dict(specfun=20, closed=10, symbols=200_000, clt=200_000),
    "full": dict(specfun=100, closed=50, symbols=2_000_000, clt=1_000_000),
}


def run_suite(level: str = "fast", seed: int = 42) -> list[CheckResult]:
    """Run all checks at the given level."""
    sz = _SIZES[level]
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1 << 20,)))
    results = []
    results += _check_specfun(rng, sz["specfun"])
    results += _check_zero_limits()
    results += _check_closed_vs_quadrature(rng, sz["closed"])
    results += _check_monte_carlo(seed, sz["symbols"])
    results += _check_clt(seed, sz["clt"])
    results += _check_high_snr()
    return results


def format_report(results: list[CheckResult], level: str, seed: int) -> str:
    lines = [f"validation level={level} seed={seed}"]
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


@contextlib.contextmanager
def mutated_delta1(factor: float = 1.05) -> Iterator[None]:
    """Temporarily scale the first MGF parameter of every new link.

    A mutation probe: with it active the closed-form check must fail.
    """
    original = IrsLink.__post_init__

    def patched(self):
        original(self)
        object.__setattr__(self, "delta1", self.delta1 * factor)

    IrsLink.__post_init__ = patched
    try:
        yield
    finally:
        IrsLink.__post_init__ = original

"""Entropy, Fourier and dimension-bound figures for one slope."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, perron
from .arith import Slope
from .automaton import build_overlap_automaton, count_via_paths, overlap_growth
from .errors import InvariantViolation
from .oracle import BRUTE_CAP, histogram_entropy, _check_cap
from .perron import Enclosure
from .subshift import spectral_pressure

LYAPUNOV = math.log(2)
LOG9 = math.log(9)
FOURIER_TERMS_CAP = 64
FOURIER_TAIL_TERMS = 40
NONDECAY_TOL = 1e-9
SINGULAR_FLOOR = 1e-3
BIAS_SLACK = 0.02


@dataclass(frozen=True)
class EntropyReport:
    """Random-walk entropies ``H_1 .. H_{n_max}`` (nats) and the two rate estimators."""

    slope: Slope
    H: tuple[float, ...]
    lyapunov: float = LYAPUNOV

    @property
    def n_max(self) -> int:
        return len(self.H)

    @property
    def per_symbol(self) -> tuple[float, ...]:
        return tuple(h / (i + 1) for i, h in enumerate(self.H))

    @property
    def increments(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip((0.0,) + self.H[:-1], self.H))

    @property
    def h_rw(self) -> float:
        """Smaller of the two estimators at the largest computed length."""
        return min(self.per_symbol[-1], self.increments[-1])


def hrw_estimates(slope: Slope, n_max: int = BRUTE_CAP) -> EntropyReport:
    _check_cap(n_max, BRUTE_CAP)
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    return EntropyReport(slope, tuple(histogram_entropy(slope, n) for n in range(1, n_max + 1)))


@dataclass(frozen=True)
class JensenCheck:
    lhs: float
    rhs: float
    ok: bool


def jensen_bound(slope: Slope, n: int) -> JensenCheck:
    """Compare ``H_n`` with ``n log 9 - log N_n``."""
    _check_cap(n, BRUTE_CAP)
    lhs = histogram_entropy(slope, n)
    rhs = n * LOG9 - math.log(count_via_paths(build_overlap_automaton(slope), n))
    return JensenCheck(lhs, rhs, lhs >= rhs - 1e-9)


@dataclass(frozen=True)
class FourierSample:
    eta: Fraction
    terms: int
    value: complex


def _unit(t: Fraction) -> complex:
    """``exp(-2 pi i t)`` with the argument reduced mod 1 exactly first."""
    frac = t - math.floor(t)
    if frac == 0:
        return complex(1.0, 0.0)
    return cmath.exp(-2j * math.pi * float(frac))


def fourier_partial(slope: Slope, eta, terms: int = FOURIER_TERMS_CAP) -> FourierSample:
    """Partial product of the Fourier transform of the projected measure at ``eta``.

    Each factor is ``(1 + e(2^-k eta) + e((p/q) 2^-k eta)) / 3`` with
    ``e(t) = exp(-2 pi i t)``.  Arguments are rational and reduced exactly, so
    factors at integer arguments are exactly 1.
    """
    if not 0 <= terms <= FOURIER_TERMS_CAP:
        raise ValueError(f"terms must lie in [0, {FOURIER_TERMS_CAP}], got {terms}")
    eta = Fraction(eta)
    value = complex(1.0, 0.0)
    for k in range(1, terms + 1):
        t = eta / (1 << k)
        value *= (1 + _unit(t) + _unit(slope.ratio * t)) / 3
    return FourierSample(eta, terms, value)


@dataclass(frozen=True)
class FourierWitness:
    nondecay: bool
    magnitude: float
    max_deviation: float
    n_max: int


def fourier_nondecay(slope: Slope, n_max: int = 20, tail: int = FOURIER_TAIL_TERMS) -> FourierWitness:
    """Compare the transform at ``q 2^N`` with its value at ``q`` for ``N <= n_max``.

    Both sides are truncated at matching precision: ``N + tail`` factors at
    ``q 2^N`` against ``tail`` factors at ``q``.
    """
    if not 0 <= n_max <= 20:
        raise ValueError("n_max must lie in [0, 20]")
    base = fourier_partial(slope, slope.q, tail).value
    dev = max(
        abs(fourier_partial(slope, slope.q << big_n, big_n + tail).value - base)
        for big_n in range(n_max + 1)
    )
    return FourierWitness(dev < NONDECAY_TOL, abs(base), dev, n_max)


@dataclass(frozen=True)
class DimensionReport:
    slope: Slope
    N: Enclosure
    P: Enclosure
    h_rw: float
    dim_estimate: float
    dim_lower: float
    fourier_nondecay: bool
    singular: bool
    fourier_magnitude: float
    entropy: EntropyReport = field(repr=False)

    @property
    def dim_lower_from_N(self) -> float:
        return max(0.0, (LOG9 - self.N.upper) / LYAPUNOV)

    def to_json(self) -> dict:
        return {
            "slope": {"p": self.slope.p, "q": self.slope.q},
            "N": self.N.as_dict(),
            "P": self.P.as_dict(),
            "h_rw": self.h_rw,
            "dim_estimate": self.dim_estimate,
            "dim_lower": self.dim_lower,
            "fourier_nondecay": self.fourier_nondecay,
            "singular": self.singular,
            "details": {
                "pressure_gap": self.P.mid - self.N.mid,
                "dim_lower_from_N": self.dim_lower_from_N,
                "fourier_magnitude_at_q": self.fourier_magnitude,
                "lyapunov": LYAPUNOV,
                "entropy_n_max": self.entropy.n_max,
                "H": list(self.entropy.H),
            },
            "metadata": {
                "dim_lower_formula": "(log(9) - P_upper) / log(2)",
                "rejected_readings": ["log(9) - P / log(2)", "P / log(2)"],
                "dim_estimate_formula": "min(1, min(H_n / n, H_n - H_(n-1)) / log(2)) at n = entropy_n_max",
                "singular_rule": "fourier_nondecay and |transform(q)| > 1e-3",
                "version": __version__,
            },
        }


def dimension_report(
    slope: Slope, n_max: int = BRUTE_CAP, tol: float = perron.DEFAULT_TOL, fourier_n_max: int = 20
) -> DimensionReport:
    """Assemble overlap growth, pressure, entropy and Fourier figures.

    Raises ``InvariantViolation`` if the lower bound reaches 1 or exceeds the
    entropy estimate by more than the finite-length slack.
    """
    n_enc = overlap_growth(build_overlap_automaton(slope), tol)
    p_enc = spectral_pressure(slope, tol)
    ent = hrw_estimates(slope, n_max)
    dim_est = min(1.0, ent.h_rw / LYAPUNOV)
    dim_low = max(0.0, (LOG9 - p_enc.upper) / LYAPUNOV)
    fw = fourier_nondecay(slope, fourier_n_max)
    if not dim_low < 1:
        raise InvariantViolation(f"dimension lower bound {dim_low} is not below 1 for {slope}")
    if dim_low > dim_est + BIAS_SLACK:
        raise InvariantViolation(
            f"lower bound {dim_low:.6f} exceeds entropy estimate {dim_est:.6f} + {BIAS_SLACK} for {slope}"
        )
    return DimensionReport(
        slope=slope,
        N=n_enc,
        P=p_enc,
        h_rw=ent.h_rw,
        dim_estimate=dim_est,
        dim_lower=dim_low,
        fourier_nondecay=fw.nondecay,
        singular=fw.nondecay and fw.magnitude > SINGULAR_FLOOR,
        fourier_magnitude=fw.magnitude,
        entropy=ent,
    )

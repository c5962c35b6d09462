"""Upper bounds on XOR-game quantum values and hyperplane rounding.

The concave envelope ``g`` of ``sin^2(pi x / 2)`` bounds the quantum value
by a function of the classical value.  Its linear piece ends at the tangency
point ``gamma2`` with slope ``gamma1``.  Hyperplane rounding turns unit
vectors into signs with a shared random direction; pairs at angle ``theta``
disagree with probability ``theta / pi``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from fractions import Fraction

import numpy as np

from .classical import DEFAULT_CAP, classical_value_xor, xor_strategy_value
from .config import rng_stream
from .errors import DomainError, NotXorGame
from .game import DeterministicStrategy, XorGame, trivial_value
from .xor_solver import VectorStrategy, quantum_value_xor

GROTHENDIECK_LOWER = 1.6769
GROTHENDIECK_UPPER = math.pi / (2 * math.log(1 + math.sqrt(2)))
BOUND_SLACK = 1e-8


@dataclasses.dataclass(frozen=True)
class GammaConstants:
    gamma1: float
    gamma2: float
    residual: float


def _tangency(x):
    return (math.pi / 2) * math.sin(math.pi * x) * x - math.sin(math.pi * x / 2) ** 2


def gamma_constants(iterations: int = 200) -> GammaConstants:
    lo, hi = 0.5, 0.99
    f_lo = _tangency(lo)
    for _ in range(iterations):
        mid = (lo + hi) / 2
        f_mid = _tangency(mid)
        if f_mid == 0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    g2 = (lo + hi) / 2
    g1 = math.sin(math.pi * g2 / 2) ** 2 / g2
    return GammaConstants(g1, g2, abs(_tangency(g2)))


_GAMMA = gamma_constants()


def g_function(x: float) -> float:
    """Least concave majorant of ``sin^2(pi x / 2)`` on [0, 1]."""
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise DomainError(f"g is defined on [0, 1], got {x!r}")
    if x <= _GAMMA.gamma2:
        return _GAMMA.gamma1 * x
    return math.sin(math.pi * x / 2) ** 2


def _as_xor(g) -> XorGame:
    if isinstance(g, XorGame):
        return g
    if getattr(g, "xor_form", None) is None:
        raise NotXorGame("bounds apply to XOR games only")
    return g.xor_form


def rounding_angles(vs: VectorStrategy) -> np.ndarray:
    return np.arccos(np.clip(vs.gram(), -1.0, 1.0))


def rounding_expectation(x, vs: VectorStrategy) -> float:
    """Expected value of the classical strategy produced by random-hyperplane rounding."""
    x = _as_xor(x)
    frac = rounding_angles(vs) / math.pi
    return float(np.sum(x.pi * (x.v1 * frac + x.v0 * (1.0 - frac))))


@dataclasses.dataclass(frozen=True)
class RoundingSample:
    strategy: DeterministicStrategy
    value: Fraction | float      # exact value of the best sampled strategy
    mean: float                  # empirical mean over all samples
    std_error: float
    samples: int


SAMPLE_BLOCK = 4096


def sample_rounding(x, vs: VectorStrategy, seed: int = 0, samples: int = 1000) -> RoundingSample:
    """Round ``vs`` with ``samples`` random directions; best strategy and empirical mean.

    The answer is 1 when ``<lambda, u> >= 0`` and 0 otherwise (likewise for
    Bob).  Directions come from one named substream per block of samples.
    """
    x = _as_xor(x)
    if samples < 1:
        raise ValueError("need at least one sample")
    best_val, best_bits = -1.0, None
    values = []
    for block, start in enumerate(range(0, samples, SAMPLE_BLOCK)):
        n = min(SAMPLE_BLOCK, samples - start)
        rng = rng_stream(seed, "rounding", block)
        lam = rng.standard_normal((n, vs.m))
        lam /= np.linalg.norm(lam, axis=1)[:, None]
        a = (lam @ vs.u.T >= 0).astype(np.int8)
        b = (lam @ vs.v.T >= 0).astype(np.int8)
        differ = a[:, :, None] ^ b[:, None, :]
        val = np.sum(np.where(differ, x.v1, x.v0) * x.pi, axis=(1, 2))
        values.append(val)
        i = int(np.argmax(val))
        if val[i] > best_val:
            best_val, best_bits = val[i], (tuple(a[i]), tuple(b[i]))
    values = np.concatenate(values)
    strategy = DeterministicStrategy(*best_bits)
    exact = xor_strategy_value(x, strategy.a, strategy.b)
    std = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return RoundingSample(strategy, exact, float(values.mean()), std, samples)


@dataclasses.dataclass(frozen=True)
class BoundsReport:
    tau: float
    omega_c: float
    omega_c_exact: Fraction | None
    omega_q: float
    omega_q_dual: float
    g_bound: float
    grothendieck_lower_rhs: float
    grothendieck_upper_rhs: float
    rounded_value: float

    @property
    def g_bound_holds(self) -> bool:
        return self.omega_q_dual <= self.g_bound + BOUND_SLACK

    @property
    def grothendieck_holds(self) -> bool:
        return self.omega_q_dual <= self.grothendieck_upper_rhs + BOUND_SLACK

    @property
    def passed(self) -> bool:
        return self.g_bound_holds and self.grothendieck_holds

    @property
    def ratio(self) -> float | None:
        """``(omega_q - tau) / (omega_c - tau)``, undefined when the classical gain is zero."""
        gain = self.omega_c - self.tau
        return (self.omega_q - self.tau) / gain if gain > 1e-15 else None

    def to_dict(self):
        return {
            "tau": self.tau, "omegaC": self.omega_c,
            "omegaCExact": None if self.omega_c_exact is None else str(self.omega_c_exact),
            "omegaQ": self.omega_q, "omegaQDual": self.omega_q_dual,
            "gBound": self.g_bound,
            "grothendieckRhs": {"lower": self.grothendieck_lower_rhs, "upper": self.grothendieck_upper_rhs},
            "roundedValue": self.rounded_value, "ratio": self.ratio,
            "verdicts": {"gBound": "PASS" if self.g_bound_holds else "FAIL",
                         "grothendieck": "PASS" if self.grothendieck_holds else "FAIL"},
        }


CSV_FIELDS = ("name", "tau", "omegaC", "omegaQ", "omegaQDual", "gBound",
              "grothendieckUpperRhs", "roundedValue", "gBoundVerdict", "grothendieckVerdict")


def report_csv(rows) -> str:
    """CSV text with a fixed header, one ``(name, BoundsReport)`` per row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for name, r in rows:
        w.writerow([name, repr(r.tau), repr(r.omega_c), repr(r.omega_q), repr(r.omega_q_dual),
                    repr(r.g_bound), repr(r.grothendieck_upper_rhs), repr(r.rounded_value),
                    "PASS" if r.g_bound_holds else "FAIL", "PASS" if r.grothendieck_holds else "FAIL"])
    return buf.getvalue()


def check_bounds(g, restarts: int = 32, seed: int = 0, cap: int = DEFAULT_CAP) -> BoundsReport:
    x = _as_xor(g)
    tau = float(trivial_value(x))
    cl = classical_value_xor(x, cap=cap)
    q = quantum_value_xor(x, restarts=restarts, seed=seed)
    wc = cl.value_float
    return BoundsReport(
        tau=tau, omega_c=wc, omega_c_exact=cl.value if x.exact else None,
        omega_q=q.value, omega_q_dual=q.dual_bound,
        g_bound=g_function(min(1.0, max(0.0, wc))),
        grothendieck_lower_rhs=tau + GROTHENDIECK_LOWER * (wc - tau),
        grothendieck_upper_rhs=tau + GROTHENDIECK_UPPER * (wc - tau),
        rounded_value=rounding_expectation(x, q.vectors),
    )

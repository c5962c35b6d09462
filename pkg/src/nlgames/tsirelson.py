"""Moving between correlation vectors and quantum strategies.

``vectors_to_strategy`` realizes inner products of unit vectors as
correlations of +-1 observables built from anticommuting generators on a
maximally entangled state; ``strategy_to_vectors`` goes back by embedding
``(A (x) 1)|psi>`` into a real space.  ``jl_reduce`` shrinks the vector
dimension with a verified random projection.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math

import numpy as np

from .config import rng_stream, tolerances
from .errors import EpsilonOutOfRange, NonHermitian, ResampleLimitExceeded, TooLarge
from .game import XorGame, trivial_value
from .linalg import hermitian_residual
from .quantum import SIGMA_X, SIGMA_Y, SIGMA_Z, ObservableStrategy, maximally_entangled
from .xor_solver import VectorStrategy

MAX_GENERATORS = 20


@dataclasses.dataclass(frozen=True, eq=False)
class CliffordFamily:
    m: int
    qubits: int
    generators: tuple   # read-only complex matrices of dimension 2**qubits

    @property
    def dim(self):
        return 2 ** self.qubits


def _kron_all(mats):
    return functools.reduce(np.kron, mats, np.eye(1, dtype=complex))


@functools.lru_cache(maxsize=None)
def _generators(m):
    k = math.ceil(m / 2)
    one = np.eye(2, dtype=complex)
    gens = []
    for j in range(k):
        for pauli in (SIGMA_X, SIGMA_Y):
            g = _kron_all([SIGMA_Z] * j + [pauli] + [one] * (k - j - 1))
            g.setflags(write=False)
            gens.append(g)
    return CliffordFamily(m, k, tuple(gens[:m]))


def clifford_generators(m: int) -> CliffordFamily:
    """``m`` pairwise anticommuting Hermitian unitaries on ``ceil(m/2)`` qubits."""
    if m < 1:
        raise ValueError("need at least one generator")
    if m > MAX_GENERATORS:
        raise TooLarge(f"at most {MAX_GENERATORS} generators (dimension 2^10), got {m}")
    return _generators(int(m))


def vectors_to_strategy(vs: VectorStrategy) -> ObservableStrategy:
    """Observables ``A_s = sum u_s[i] G_i`` and ``B_t = sum v_t[i] G_i^T`` on a maximally entangled state."""
    fam = clifford_generators(vs.m)
    gens = np.array(fam.generators)
    alice = np.einsum("si,ijk->sjk", vs.u.astype(complex), gens)
    bob = np.einsum("ti,ikj->tjk", vs.v.astype(complex), gens)   # transposed generators
    return ObservableStrategy(fam.dim, fam.dim, maximally_entangled(fam.dim), tuple(alice), tuple(bob))


def strategy_to_vectors(o: ObservableStrategy) -> VectorStrategy:
    """Real embeddings of ``(A_s (x) 1)|psi>`` and ``(1 (x) B_t)|psi>``."""
    tol = tolerances().measurement
    for who, obs in (("Alice", o.alice), ("Bob", o.bob)):
        for k, a in enumerate(obs):
            r = hermitian_residual(a)
            if r > tol:
                raise NonHermitian(f"{who} observable {k} is not Hermitian (residual {r:.3e})")
    m = o.psi.reshape(o.dim_a, o.dim_b)
    left = np.array([(a @ m).reshape(-1) for a in o.alice])
    right = np.array([(m @ b.T).reshape(-1) for b in o.bob])
    pairing = left.conj() @ right.T
    if pairing.size and np.max(np.abs(pairing.imag)) > tol:
        raise NonHermitian(f"correlations have imaginary part {np.max(np.abs(pairing.imag)):.3e}")
    u = np.concatenate([left.real, left.imag], axis=1)
    v = np.concatenate([right.real, right.imag], axis=1)
    return VectorStrategy(u, v)


def correlation_table(o: ObservableStrategy) -> np.ndarray:
    m = o.psi.reshape(o.dim_a, o.dim_b)
    left = np.array([(a @ m).reshape(-1) for a in o.alice])
    right = np.array([(m @ b.T).reshape(-1) for b in o.bob])
    return np.real(left.conj() @ right.T)


# -- dimension reduction ----------------------------------------------------

def jl_dimension(epsilon: float, n_points: int) -> int:
    """Smallest even K with ``K >= 4 ln(n) / (eps^2/2 - eps^3/3)``."""
    bound = 4 * math.log(n_points) / (epsilon ** 2 / 2 - epsilon ** 3 / 3)
    k = math.ceil(bound - 1e-9)
    return k + (k % 2)


@dataclasses.dataclass(frozen=True)
class ReductionResult:
    vectors: VectorStrategy
    dimension: int
    draws: int                 # 0 when the identity map was used
    worst_distortion: float    # max |ratio - 1| over pairs of the point set
    max_inner_change: float    # max |<u', v'> - <u, v>|
    epsilon: float

    def report(self):
        return {"dimension": self.dimension, "draws": self.draws, "epsilon": self.epsilon,
                "worstDistortion": self.worst_distortion, "maxInnerProductChange": self.max_inner_change}


def pairwise_distortion(points, images):
    """Worst ``| |f(p) - f(q)|^2 / |p - q|^2 - 1 |`` over distinct pairs."""
    worst = 0.0
    for i, j in itertools.combinations(range(len(points)), 2):
        before = float(np.sum((points[i] - points[j]) ** 2))
        after = float(np.sum((images[i] - images[j]) ** 2))
        if before == 0.0:
            if after != 0.0:
                return math.inf
            continue
        worst = max(worst, abs(after / before - 1.0))
    return worst


def jl_reduce(vs: VectorStrategy, epsilon: float, seed: int = 0, max_draws: int = 64,
              allow_identity: bool = True) -> ReductionResult:
    """Project ``vs`` into an even dimension K with every pairwise distortion within ``epsilon``.

    The point set is all ``u_s``, ``v_t`` and the origin.  Gaussian maps
    scaled by ``1/sqrt(K)`` are drawn from the seeded stream until one passes
    the exhaustive check; the images are then renormalized.
    """
    if not 0 < epsilon < 0.1:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1/10), got {epsilon!r}")
    n_s, n_t = len(vs.u), len(vs.v)
    k = jl_dimension(epsilon, n_s + n_t + 1)
    gram = vs.gram()
    if allow_identity and vs.m <= k:
        return ReductionResult(vs, vs.m, 0, 0.0, 0.0, epsilon)
    points = np.vstack([vs.u, vs.v, np.zeros((1, vs.m))])
    worst_seen = math.inf
    for draw in range(max_draws):
        rng = rng_stream(seed, "jl", draw)
        f = rng.standard_normal((k, vs.m)) / math.sqrt(k)
        images = points @ f.T
        worst = pairwise_distortion(points, images)
        worst_seen = min(worst_seen, worst)
        if worst > epsilon:
            continue
        fu, fv = images[:n_s], images[n_s:n_s + n_t]
        u = fu / np.linalg.norm(fu, axis=1)[:, None]
        v = fv / np.linalg.norm(fv, axis=1)[:, None]
        reduced = VectorStrategy(u, v)
        change = float(np.max(np.abs(reduced.gram() - gram)))
        return ReductionResult(reduced, k, draw + 1, worst, change, epsilon)
    raise ResampleLimitExceeded(max_draws, worst_seen)


def entanglement_report(x: XorGame, epsilons=(0.09, 0.05, 0.02, 0.01)) -> dict:
    """Qubits needed for an optimal strategy and for epsilon-good ones after projection."""
    m = min(x.n_s, x.n_t)
    n_points = x.n_s + x.n_t + 1
    rows = []
    for eps in epsilons:
        k = jl_dimension(eps, n_points)
        rows.append({"epsilon": eps, "dimension": k, "qubits": k // 2})
    return {"rank": m, "optimalQubits": math.ceil(m / 2), "reduced": rows}


def reduced_value(x: XorGame, result: ReductionResult) -> float:
    return float(trivial_value(x)) + 0.5 * float(np.sum(x.cost * result.vectors.gram()))

"""Finite-dimensional quantum strategies: simulation, built-ins, rounding, extraction.

States are Alice-major: ``psi[i * dim_b + j]`` is the amplitude of
``|i>_A |j>_B``.  Reshaping ``psi`` to the ``dim_a x dim_b`` matrix ``M`` gives
``<psi| X (x) Y |psi> = Tr(M^dagger X M Y^T)``, which is how every expectation
here is evaluated.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Sequence

import numpy as np

from .config import tolerances
from .errors import (
    DimensionMismatch,
    InvalidMeasurement,
    NonHermitian,
    NotBinaryGame,
    NotPerfect,
    NumericallyAmbiguous,
)
from .game import DeterministicStrategy, ValidatedGame, check_schema, evaluate_deterministic
from .linalg import hermitian_residual, is_projector, jacobi_eigh, min_eigenvalue

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclasses.dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Shared state plus one measurement family per question.

    ``alice[s][a]`` is the ``dim_a x dim_a`` operator for answer ``a`` to
    question ``s``; likewise ``bob[t][b]``.  Invariants are checked by
    :func:`check_strategy`, not on construction.
    """

    dim_a: int
    dim_b: int
    psi: np.ndarray
    alice: tuple
    bob: tuple

    def __post_init__(self):
        object.__setattr__(self, "psi", _frozen(np.ravel(self.psi)))
        object.__setattr__(self, "alice", tuple(tuple(_frozen(x) for x in fam) for fam in self.alice))
        object.__setattr__(self, "bob", tuple(tuple(_frozen(y) for y in fam) for fam in self.bob))

    @property
    def state_matrix(self):
        return self.psi.reshape(self.dim_a, self.dim_b)

    def to_observables(self) -> "ObservableStrategy":
        if any(len(f) != 2 for f in self.alice + self.bob):
            raise NotBinaryGame("observables need two-outcome measurements")
        return ObservableStrategy(self.dim_a, self.dim_b, self.psi,
                                  tuple(f[0] - f[1] for f in self.alice),
                                  tuple(f[0] - f[1] for f in self.bob))


@dataclasses.dataclass(frozen=True, eq=False)
class ObservableStrategy:
    """Binary strategy given by +-1 observables; outcome +1 is answer 0."""

    dim_a: int
    dim_b: int
    psi: np.ndarray
    alice: tuple   # A_s
    bob: tuple     # B_t

    def __post_init__(self):
        object.__setattr__(self, "psi", _frozen(np.ravel(self.psi)))
        object.__setattr__(self, "alice", tuple(_frozen(a) for a in self.alice))
        object.__setattr__(self, "bob", tuple(_frozen(b) for b in self.bob))

    def to_measurements(self) -> QuantumStrategy:
        ia, ib = np.eye(self.dim_a), np.eye(self.dim_b)
        return QuantumStrategy(self.dim_a, self.dim_b, self.psi,
                               tuple(((ia + a) / 2, (ia - a) / 2) for a in self.alice),
                               tuple(((ib + b) / 2, (ib - b) / 2) for b in self.bob))


# -- validation -------------------------------------------------------------

def _check_family(ops, dim, who, tol):
    for k, op in enumerate(ops):
        if op.shape != (dim, dim):
            raise DimensionMismatch(f"{who} operator {k} has shape {op.shape}, expected {(dim, dim)}")
        r = hermitian_residual(op)
        if r > tol:
            raise InvalidMeasurement(f"{who} operator {k} is not Hermitian", r)
        if not is_projector(op, tol):
            e = min_eigenvalue(op)
            if e < -tol:
                raise InvalidMeasurement(f"{who} operator {k} is not positive semidefinite", -e)
    total = sum(ops) if ops else np.zeros((dim, dim))
    r = float(np.max(np.abs(total - np.eye(dim))))
    if r > tol:
        raise InvalidMeasurement(f"{who} operators do not sum to the identity", r)


def check_state(psi, dim_a, dim_b):
    if psi.shape != (dim_a * dim_b,):
        raise DimensionMismatch(f"state has length {psi.size}, expected {dim_a} * {dim_b}")
    r = abs(float(np.linalg.norm(psi)) - 1.0)
    if r > tolerances().state_norm:
        raise InvalidMeasurement("state is not normalized", r)


def check_strategy(g: ValidatedGame | None, q: QuantumStrategy) -> None:
    """Raise DimensionMismatch / InvalidMeasurement unless ``q`` is a valid strategy (for ``g``)."""
    tol = tolerances().measurement
    check_state(q.psi, q.dim_a, q.dim_b)
    if g is not None:
        if len(q.alice) != g.n_s or len(q.bob) != g.n_t:
            raise DimensionMismatch(
                f"strategy has {len(q.alice)}/{len(q.bob)} question families, game has {g.n_s}/{g.n_t}")
        for who, fams, n in (("Alice", q.alice, g.n_a), ("Bob", q.bob, g.n_b)):
            for i, fam in enumerate(fams):
                if len(fam) != n:
                    raise DimensionMismatch(f"{who}'s family {i} has {len(fam)} outcomes, game has {n}")
    for s, fam in enumerate(q.alice):
        _check_family(fam, q.dim_a, f"Alice question {s}", tol)
    for t, fam in enumerate(q.bob):
        _check_family(fam, q.dim_b, f"Bob question {t}", tol)


def check_observables(o: ObservableStrategy) -> None:
    check_state(o.psi, o.dim_a, o.dim_b)
    tol = tolerances().observable
    for who, obs, dim in (("Alice", o.alice, o.dim_a), ("Bob", o.bob, o.dim_b)):
        for k, a in enumerate(obs):
            if a.shape != (dim, dim):
                raise DimensionMismatch(f"{who} observable {k} has shape {a.shape}, expected {(dim, dim)}")
            r = hermitian_residual(a)
            if r > tol:
                raise InvalidMeasurement(f"{who} observable {k} is not Hermitian", r)
            r = float(np.max(np.abs(a @ a - np.eye(dim))))
            if r > tol:
                raise InvalidMeasurement(f"{who} observable {k} does not square to the identity", r)


# -- simulation -------------------------------------------------------------

def joint_distribution(q: QuantumStrategy, s: int, t: int) -> np.ndarray:
    """Matrix of ``<psi| X_s^a (x) Y_t^b |psi>`` over answers (a, b)."""
    m = q.state_matrix
    left = np.array([x @ m for x in q.alice[s]])            # X M
    right = np.array([m @ y.T for y in q.bob[t]])           # M Y^T
    return np.real(np.einsum("aij,bij->ab", left.conj(), right))


def _clamp(p):
    tol = tolerances().clamp
    if -tol <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + tol:
        return 1.0
    return p


@dataclasses.dataclass(frozen=True)
class SimulationResult:
    win_probability: float
    per_pair: tuple  # ((s, t, pi, conditional win probability), ...)

    def to_dict(self):
        return {"winProbability": self.win_probability,
                "perPair": [{"s": s, "t": t, "pi": p, "win": w} for s, t, p, w in self.per_pair]}


def simulate(g: ValidatedGame, q) -> SimulationResult:
    if isinstance(q, ObservableStrategy):
        check_observables(q)
        q = q.to_measurements()
    check_strategy(g, q)
    rows, terms = [], []
    for (s, t), p in g.pi.items():
        j = joint_distribution(q, s, t)
        w = float(np.sum(j[g.predicate[s, t]]))
        rows.append((s, t, float(p), _clamp(w)))
        terms.append(float(p) * w)
    return SimulationResult(_clamp(math.fsum(terms)), tuple(rows))


def win_probability(g: ValidatedGame, q) -> float:
    """Winning probability of quantum strategy ``q`` (measurements or observables) on ``g``."""
    return simulate(g, q).win_probability


def correlation(psi, a, b) -> float:
    """``<psi| A (x) B |psi>`` for Hermitian ``a``, ``b``; must be real."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    psi = np.ravel(np.asarray(psi, dtype=complex))
    tol = tolerances().measurement
    for name, op in (("A", a), ("B", b)):
        if hermitian_residual(op) > tol:
            raise NonHermitian(f"{name} is not Hermitian (residual {hermitian_residual(op):.3e})")
    if psi.size != a.shape[0] * b.shape[0]:
        raise DimensionMismatch(f"state of length {psi.size} does not match {a.shape[0]} x {b.shape[0]}")
    m = psi.reshape(a.shape[0], b.shape[0])
    z = np.vdot(a @ m, m @ b.T)
    if abs(z.imag) > tol:
        raise NonHermitian(f"correlation has imaginary part {z.imag:.3e}")
    return float(z.real)


def outcome_expansion(o: ObservableStrategy, s: int, t: int) -> np.ndarray:
    """Answer distribution from the four-term expansion in the local and joint
    correlations: ``q(alpha, beta) = (1 + alpha E_A + beta E_B + alpha beta E_AB) / 4``.
    Indexed by answers, with answer 0 meaning outcome +1.
    """
    ia, ib = np.eye(o.dim_a), np.eye(o.dim_b)
    e_a = correlation(o.psi, o.alice[s], ib)
    e_b = correlation(o.psi, ia, o.bob[t])
    e_ab = correlation(o.psi, o.alice[s], o.bob[t])
    out = np.zeros((2, 2))
    for a, alpha in enumerate((1, -1)):
        for b, beta in enumerate((1, -1)):
            out[a, b] = (1 + alpha * e_a + beta * e_b + alpha * beta * e_ab) / 4
    return out


# -- built-in strategies ----------------------------------------------------

def maximally_entangled(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return psi


def _rotated_projectors(theta):
    """Projectors onto cos(t)|0> + sin(t)|1> and -sin(t)|0> + cos(t)|1>."""
    v0 = np.array([math.cos(theta), math.sin(theta)])
    v1 = np.array([-math.sin(theta), math.cos(theta)])
    return (np.outer(v0, v0), np.outer(v1, v1))


def builtin_chsh() -> QuantumStrategy:
    alice = [_rotated_projectors(0.0), _rotated_projectors(math.pi / 4)]
    bob = [_rotated_projectors(math.pi / 8), _rotated_projectors(-math.pi / 8)]
    return QuantumStrategy(2, 2, maximally_entangled(2), alice, bob)


def odd_cycle_angles(n):
    """Measurement angles (Alice, Bob) for the odd cycle of length ``n``.

    Equal vertices differ by pi/4n and adjacent ones by pi/2 - pi/4n, which
    needs Alice's offset to be subtracted (see the ledger).
    """
    step = math.pi / 2 - math.pi / (2 * n)
    alice = [step * s - math.pi / (4 * n) for s in range(n)]
    bob = [step * t for t in range(n)]
    return alice, bob


def builtin_odd_cycle(n: int) -> QuantumStrategy:
    alpha, beta = odd_cycle_angles(n)
    return QuantumStrategy(2, 2, maximally_entangled(2),
                           [_rotated_projectors(a) for a in alpha],
                           [_rotated_projectors(b) for b in beta])


PAULI_SQUARE = (
    (("x", "y"), ("y", "x"), ("z", "z")),
    (("y", "z"), ("z", "y"), ("x", "x")),
    (("z", "x"), ("x", "z"), ("y", "y")),
)
_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def magic_square_observables():
    """Nine two-qubit observables, indexed by cell 3i + j."""
    return [np.kron(_PAULI[p], _PAULI[q]) for row in PAULI_SQUARE for p, q in row]


def _line_measurement(observables):
    """Eight-outcome family on the joint eigenspaces of three commuting observables.

    Outcome ``a`` has bit ``k`` set when observable ``k`` reads -1.
    """
    dim = observables[0].shape[0]
    ident = np.eye(dim)
    fam = []
    for a in range(8):
        op = ident.astype(complex)
        for k, obs in enumerate(observables):
            sign = -1 if (a >> k) & 1 else 1
            op = op @ (ident + sign * obs) / 2
        fam.append(op)
    return fam


def _two_singlets():
    singlet = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)   # qubits (A, B)
    joint = np.kron(singlet, singlet).reshape(2, 2, 2, 2)              # A1 B1 A2 B2
    return joint.transpose(0, 2, 1, 3).reshape(16)                     # A1 A2 B1 B2


def builtin_magic_square() -> QuantumStrategy:
    from .generators import MAGIC_TRIPLES

    obs = magic_square_observables()
    ident = np.eye(4)
    alice = [_line_measurement([obs[c] for c in cells]) for cells in MAGIC_TRIPLES]
    bob = [((ident + o) / 2, (ident - o) / 2) for o in obs]
    return QuantumStrategy(4, 4, _two_singlets(), alice, bob)


def builtin_threesat_magic() -> QuantumStrategy:
    """Perfect strategy for ``three_sat(magic_square_formula())``.

    Alice measures the line her clause came from; every clause of a line
    lists that line's cells in order, so her outcome bits are positional.
    """
    from .generators import MAGIC_TRIPLES, magic_square_formula

    obs = magic_square_observables()
    ident = np.eye(4)
    alice = []
    for clause in magic_square_formula().clauses:
        cells = tuple(v for v, _ in clause)
        line = MAGIC_TRIPLES.index(cells)
        alice.append(_line_measurement([obs[c] for c in MAGIC_TRIPLES[line]]))
    bob = [((ident + o) / 2, (ident - o) / 2) for o in obs]
    return QuantumStrategy(4, 4, _two_singlets(), alice, bob)


def builtin_ks(ks) -> QuantumStrategy:
    vec = ks.vectors
    proj = [np.outer(v, v) for v in vec]
    alice = [tuple(proj[i] for i in triple) for triple in ks.triples]
    bob = [(np.eye(3) - p, p) for p in proj]
    return QuantumStrategy(3, 3, maximally_entangled(3), alice, bob)


# -- projective rounding ----------------------------------------------------

def _round_side(g, q, alice_side: bool):
    tol = tolerances().eigenvalue
    m = q.state_matrix
    fams = q.alice if alice_side else q.bob
    dim = q.dim_a if alice_side else q.dim_b
    new = []
    for i, fam in enumerate(fams):
        w, vecs = jacobi_eigh(fam[0])
        lam = []
        for j in range(dim):
            p = np.outer(vecs[:, j], vecs[:, j].conj())
            coef = 0.0
            others = range(g.n_t) if alice_side else range(g.n_s)
            for k in others:
                s, t = (i, k) if alice_side else (k, i)
                pr = g.pi.get((s, t))
                if pr is None:
                    continue
                for c, y in enumerate(q.bob[t] if alice_side else q.alice[s]):
                    if alice_side:
                        e = np.real(np.vdot(p @ m, m @ y.T))
                        diff = int(g.predicate[s, t, 0, c]) - int(g.predicate[s, t, 1, c])
                    else:
                        e = np.real(np.vdot(y @ m, m @ p.T))
                        diff = int(g.predicate[s, t, c, 0]) - int(g.predicate[s, t, c, 1])
                    coef += float(pr) * diff * e
            x = w[j]
            if abs(x) <= tol:
                lam.append(0.0)
            elif abs(x - 1) <= tol:
                lam.append(1.0)
            elif coef > tol:
                lam.append(1.0)
            elif coef < -tol:
                lam.append(0.0)
            else:
                lam.append(1.0 if x >= 0.5 else 0.0)
        p0 = (vecs * np.array(lam)) @ vecs.conj().T
        new.append((p0, np.eye(dim) - p0))
    if alice_side:
        return QuantumStrategy(q.dim_a, q.dim_b, q.psi, new, q.bob)
    return QuantumStrategy(q.dim_a, q.dim_b, q.psi, q.alice, new)


def make_projective(g: ValidatedGame, q: QuantumStrategy) -> QuantumStrategy:
    """Round every measurement of a binary strategy to a projective one without losing value.

    For fixed eigenvectors of ``X_s^0`` the winning probability is affine in
    its eigenvalues, so each eigenvalue is pushed to 0 or 1 according to the
    sign of its coefficient.  Alice's side is rounded first, then Bob's
    against Alice's new measurements.
    """
    if not g.is_binary:
        raise NotBinaryGame("projective rounding needs a binary game")
    check_strategy(g, q)
    return _round_side(g, _round_side(g, q, True), False)


# -- extraction of a perfect classical strategy ------------------------------

def _completed_basis(psi):
    """Orthonormal basis (as columns) whose first vector is ``psi``."""
    n = psi.size
    basis = [psi / np.linalg.norm(psi)]
    for k in range(n):
        if len(basis) == n:
            break
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        for b in basis:
            e = e - np.vdot(b, e) * b
        r = np.linalg.norm(e)
        if r < 1e-10:
            continue
        basis.append(e / r)
    return np.array(basis).T


def _sign_of_first_amplitude(amps, who):
    """kappa of the first clearly nonzero amplitude; +1 when arg lies in [0, pi)."""
    tol = tolerances()
    for z in amps:
        mag = abs(z)
        if mag > tol.nonzero_amplitude:
            if abs(z.imag) < tol.zero_amplitude:
                return 1 if z.real > 0 else -1
            return 1 if z.imag > 0 else -1
        if mag >= tol.zero_amplitude:
            raise NumericallyAmbiguous(f"{who}: amplitude of magnitude {mag:.3e} is neither zero nor nonzero")
    raise NumericallyAmbiguous(f"{who}: all amplitudes vanish")


def extract_classical_from_perfect(g: ValidatedGame, o) -> DeterministicStrategy:
    """Deterministic strategy winning with certainty, read off a perfect binary quantum strategy."""
    if not g.is_binary:
        raise NotBinaryGame("extraction needs a binary game")
    if isinstance(o, QuantumStrategy):
        o = o.to_observables()
    p = win_probability(g, o)
    if p < 1 - 1e-9:
        raise NotPerfect(f"strategy wins with probability {p!r} < 1 - 1e-9")
    basis = _completed_basis(o.psi)
    m = o.psi.reshape(o.dim_a, o.dim_b)
    a = []
    for s, obs in enumerate(o.alice):
        amps = basis.conj().T @ (obs @ m).reshape(-1)
        a.append(0 if _sign_of_first_amplitude(amps, f"Alice question {s}") == 1 else 1)
    b = []
    for t, obs in enumerate(o.bob):
        amps = basis.conj().T @ (m @ obs.T).reshape(-1)
        b.append(0 if _sign_of_first_amplitude(amps, f"Bob question {t}") == 1 else 1)
    d = DeterministicStrategy(a, b)
    if evaluate_deterministic(g, d) != 1:
        raise NumericallyAmbiguous("extracted strategy does not win every question pair")
    return d


# -- strategy file ----------------------------------------------------------

def _complex_to_json(z):
    return [float(z.real), float(z.imag)]


def _matrix_to_json(m):
    return [[_complex_to_json(z) for z in row] for row in m]


def strategy_to_dict(q: QuantumStrategy) -> dict:
    if isinstance(q, ObservableStrategy):
        q = q.to_measurements()
    return {
        "dimA": q.dim_a, "dimB": q.dim_b,
        "psi": [_complex_to_json(z) for z in q.psi],
        "alice": [[_matrix_to_json(x) for x in fam] for fam in q.alice],
        "bob": [[_matrix_to_json(y) for y in fam] for fam in q.bob],
    }


def _matrix_from_json(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def strategy_from_dict(doc) -> QuantumStrategy:
    check_schema(doc, "strategy.schema.json")
    psi = np.array([complex(re, im) for re, im in doc["psi"]], dtype=complex)
    alice = [[_matrix_from_json(x) for x in fam] for fam in doc["alice"]]
    bob = [[_matrix_from_json(y) for y in fam] for fam in doc["bob"]]
    for who, fams, dim in (("alice", alice, doc["dimA"]), ("bob", bob, doc["dimB"])):
        for i, fam in enumerate(fams):
            for k, op in enumerate(fam):
                if op.shape != (dim, dim):
                    raise DimensionMismatch(f"{who}[{i}][{k}] has shape {op.shape}, expected {(dim, dim)}")
    return QuantumStrategy(doc["dimA"], doc["dimB"], psi, alice, bob)


def save_strategy(q, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(strategy_to_dict(q), fh, sort_keys=True)
        fh.write("\n")


def load_strategy(path) -> QuantumStrategy:
    from .game import ParseError

    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return strategy_from_dict(doc)

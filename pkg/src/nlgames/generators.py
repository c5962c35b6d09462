"""Constructors for the standard nonlocal games.

Every constructor returns a :class:`~nlgames.game.ValidatedGame` with exact
rational question distributions.  Answer encodings:

* Magic square / 3-SAT: Alice's answer ``a`` in ``range(8)`` is the bit
  vector ``(a >> 0 & 1, a >> 1 & 1, a >> 2 & 1)``; bit ``k`` is her value for
  position ``k`` of the row, column or clause she was asked about.
* Kochen-Specker: Alice's trit is the position (0, 1, 2) within her triple
  of the vector she colors 1.  Bob's bit is the color of his vector.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
import re
from fractions import Fraction
from importlib import resources
from typing import Sequence

import numpy as np

from .config import tolerances
from .errors import EmptyGraph, EvenOrSmallN, InvalidTriples, TooLarge
from .game import GameSpec, ValidatedGame, XorGame, check_schema, validate


# -- data types -------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset

    def __post_init__(self):
        edges = set()
        for e in self.edges:
            u, v = sorted(e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u and v < self.n_vertices):
                raise ValueError(f"edge {e} has an endpoint outside range({self.n_vertices})")
            edges.add((u, v))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def cycle(cls, n):
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n_vertices, self.n_vertices), dtype=bool)
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = True
        return adj


@dataclasses.dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula; each literal is ``(variable, negated)``."""

    n_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = []
        for i, clause in enumerate(self.clauses):
            lits = tuple((int(v), bool(neg)) for v, neg in clause)
            if len(lits) != 3:
                raise ValueError(f"clause {i} has {len(lits)} literals, expected 3")
            for v, _ in lits:
                if not 0 <= v < self.n_vars:
                    raise ValueError(f"clause {i} uses variable {v} outside range({self.n_vars})")
            clauses.append(lits)
        object.__setattr__(self, "clauses", tuple(clauses))

    def satisfied_by(self, assignment: Sequence[int]) -> bool:
        return all(any(bool(assignment[v]) != neg for v, neg in clause) for clause in self.clauses)


@dataclasses.dataclass(frozen=True, eq=False)
class KsVectorSet:
    vectors: np.ndarray   # (n, 3) unit vectors, read-only
    triples: tuple        # index triples declared mutually orthogonal

    def __post_init__(self):
        vec = np.array(self.vectors, dtype=float).reshape(-1, 3)
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "triples", tuple(tuple(int(i) for i in t) for t in self.triples))

    def __len__(self):
        return len(self.vectors)

    def orthogonal_pairs(self, tol=1e-9):
        g = np.abs(self.vectors @ self.vectors.T)
        n = len(self.vectors)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if g[i, j] < tol]


def check_ks_set(ks: KsVectorSet) -> None:
    """Raise :class:`InvalidTriples` unless ``ks`` satisfies the KS-set invariants."""
    tol = tolerances().orthogonality
    v = ks.vectors
    n = len(v)
    norms = np.abs(np.linalg.norm(v, axis=1) - 1.0) if n else np.zeros(0)
    bad = np.flatnonzero(norms > tol)
    if bad.size:
        raise InvalidTriples(f"vector {int(bad[0])} is not normalized (error {norms[bad[0]]:.2e})")
    covered = set()
    for k, t in enumerate(ks.triples):
        if len(t) != 3 or len(set(t)) != 3:
            raise InvalidTriples(f"triple {k} = {t} does not name three distinct vectors")
        if not all(0 <= i < n for i in t):
            raise InvalidTriples(f"triple {k} = {t} indexes outside range({n})")
        for i, j in itertools.combinations(t, 2):
            if abs(float(v[i] @ v[j])) > tol:
                raise InvalidTriples(f"triple {k}: vectors {i} and {j} are not orthogonal")
            covered.add((min(i, j), max(i, j)))
    for pair in ks.orthogonal_pairs():
        if pair not in covered:
            raise InvalidTriples(f"orthogonal pair {pair} is not part of any declared triple")


# -- exact component expressions -------------------------------------------

_ATOM = r"(\d+(?:\.\d+)?|sqrt\(\s*\d+\s*\))"
_EXPR = re.compile(rf"^\s*([+-])?\s*{_ATOM}\s*(?:/\s*{_ATOM})?\s*$")


def _atom(text):
    text = text.replace(" ", "")
    if text.startswith("sqrt("):
        return math.sqrt(int(text[5:-1]))
    return float(text)


def parse_component(x) -> float:
    """Evaluate ``"a/sqrt(b)"``-style expressions (or pass numbers through)."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    m = _EXPR.match(str(x))
    if not m:
        raise ValueError(f"cannot parse vector component {x!r}")
    sign, num, den = m.groups()
    value = _atom(num) / (_atom(den) if den else 1.0)
    return -value if sign == "-" else value


def _format_component(x, norm_sq):
    """Exact text for ``x / sqrt(norm_sq)`` with ``x`` in {0, +-1, +-sqrt2, +-3}."""
    if abs(x) < 1e-9:
        return "0"
    sign = "-" if x < 0 else ""
    sq = round(x * x)
    num = "sqrt(2)" if sq == 2 else str(math.isqrt(sq))
    return f"{sign}{num}" if norm_sq == 1 else f"{sign}{num}/sqrt({norm_sq})"


# -- KS asset ---------------------------------------------------------------

def _peres_rays():
    r2 = math.sqrt(2.0)
    patterns = [(0, 0, 1), (0, 1, 1), (0, 1, -1), (0, 1, r2), (0, 1, -r2),
                (1, 1, r2), (1, 1, -r2), (1, -1, r2), (1, -1, -r2)]
    rays = []
    for perm in itertools.permutations(range(3)):
        for pat in patterns:
            v = np.zeros(3)
            for i, k in enumerate(perm):
                v[k] = pat[i]
            rays.append(v)
    return rays


def _canonical_ray(v):
    """Scale so the smallest nonzero |component| is 1 and the first nonzero is positive."""
    nz = np.abs(v) > 1e-9
    v = v / np.min(np.abs(v[nz]))
    return -v if v[np.argmax(nz)] < 0 else v


def build_ks_vectors():
    """Peres's 33 rays closed under orthogonal completion.

    Rays with components in {0, +-1, +-sqrt2} are taken over every coordinate
    permutation; whenever two rays are orthogonal but their common orthogonal
    complement is missing, the cross product is added, until no orthogonal
    pair lacks its third vector.  All orthogonal triples are then enumerated.

    Returns ``(raw, triples)`` where ``raw`` are the canonical unnormalized
    rays in insertion order.
    """
    raw = []

    def add(v):
        c = _canonical_ray(v)
        if any(np.allclose(c, w, atol=1e-9) for w in raw):
            return False
        raw.append(c)
        return True

    for v in _peres_rays():
        add(v)
    grew = True
    while grew:
        grew = False
        units = np.array([w / np.linalg.norm(w) for w in raw])
        g = np.abs(units @ units.T) < 1e-9
        for i, j in zip(*np.nonzero(np.triu(g, 1))):
            grew |= add(np.cross(raw[i], raw[j]))
    units = np.array([w / np.linalg.norm(w) for w in raw])
    g = np.abs(units @ units.T) < 1e-9
    n = len(raw)
    triples = [t for t in itertools.combinations(range(n), 3)
               if g[t[0], t[1]] and g[t[0], t[2]] and g[t[1], t[2]]]
    return raw, triples


def ks_asset_document():
    raw, triples = build_ks_vectors()
    vectors = []
    for w in raw:
        norm_sq = round(float(w @ w))
        assert abs(norm_sq - w @ w) < 1e-9
        vectors.append([_format_component(x, norm_sq) for x in w])
    return {
        "version": 1,
        "description": "Peres 33-ray set closed under orthogonal completion",
        "vectors": vectors,
        "triples": [list(t) for t in triples],
    }


def ks_set_from_dict(doc) -> KsVectorSet:
    check_schema(doc, "ks.schema.json")
    vectors = np.array([[parse_component(x) for x in v] for v in doc["vectors"]], dtype=float)
    ks = KsVectorSet(vectors.reshape(-1, 3), tuple(tuple(t) for t in doc["triples"]))
    check_ks_set(ks)
    return ks


def load_ks_set(path) -> KsVectorSet:
    with open(path, encoding="utf-8") as fh:
        return ks_set_from_dict(json.load(fh))


def shipped_ks_set() -> KsVectorSet:
    text = resources.files("nlgames").joinpath("data").joinpath("ks_peres57.json").read_text("utf-8")
    return ks_set_from_dict(json.loads(text))


def standard_basis_ks() -> KsVectorSet:
    return KsVectorSet(np.eye(3), ((0, 1, 2),))


# -- games ------------------------------------------------------------------

def _bit(a, k):
    return (a >> k) & 1


def chsh() -> ValidatedGame:
    a, b = np.meshgrid(range(2), range(2), indexing="ij")
    pred = np.zeros((2, 2, 2, 2), dtype=bool)
    for s, t in itertools.product(range(2), repeat=2):
        pred[s, t] = (a ^ b) == (s & t)
    pi = [(s, t, Fraction(1, 4)) for s in range(2) for t in range(2)]
    return validate(GameSpec(2, 2, 2, 2, pi, pred))


def odd_cycle(n: int) -> ValidatedGame:
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        raise EvenOrSmallN(f"odd cycle needs an odd n >= 3, got {n!r}")
    p = Fraction(1, 2 * n)
    pi = [(s, s, p) for s in range(n)] + [(s, (s + 1) % n, p) for s in range(n)]
    a, b = np.meshgrid(range(2), range(2), indexing="ij")
    pred = np.zeros((n, n, 2, 2), dtype=bool)
    for s in range(n):
        for t in range(n):
            pred[s, t] = (a ^ b) == int((s + 1) % n == t)
    return validate(GameSpec(n, n, 2, 2, pi, pred))


MAGIC_TRIPLES = tuple([tuple(3 * r + j for j in range(3)) for r in range(3)]
                      + [tuple(3 * i + c for i in range(3)) for c in range(3)])
"""Cells of rows 0-2 then columns 0-2; cell (i, j) has index 3i + j."""


def magic_square() -> ValidatedGame:
    pred = np.zeros((6, 9, 8, 2), dtype=bool)
    pi = []
    for s, cells in enumerate(MAGIC_TRIPLES):
        parity = 0 if s < 3 else 1
        for k, t in enumerate(cells):
            pi.append((s, t, Fraction(1, 18)))
            for a in range(8):
                if (_bit(a, 0) ^ _bit(a, 1) ^ _bit(a, 2)) == parity:
                    pred[s, t, a, _bit(a, k)] = True
    labels = {"S": [f"row {r}" for r in range(3)] + [f"column {c}" for c in range(3)],
              "T": [f"cell {i}{j}" for i in range(3) for j in range(3)]}
    return validate(GameSpec(6, 9, 8, 2, pi, pred, labels=labels))


def kochen_specker(ks: KsVectorSet) -> ValidatedGame:
    check_ks_set(ks)
    n_s, n_t = len(ks.triples), len(ks.vectors)
    if n_s == 0:
        raise InvalidTriples("a Kochen-Specker game needs at least one triple")
    p = Fraction(1, 3 * n_s)
    pred = np.zeros((n_s, n_t, 3, 2), dtype=bool)
    pi = []
    for s, triple in enumerate(ks.triples):
        for k, t in enumerate(triple):
            pi.append((s, t, p))
            for a in range(3):
                pred[s, t, a, int(a == k)] = True
    return validate(GameSpec(n_s, n_t, 3, 2, pi, pred))


def graph_coloring(g: Graph, k: int) -> ValidatedGame:
    if g.n_vertices == 0:
        raise EmptyGraph("graph has no vertices")
    if k < 1:
        raise ValueError("need at least one color")
    n = g.n_vertices
    p = Fraction(1, n + len(g.edges))
    pi = [(v, v, p) for v in range(n)] + [(u, v, p) for u, v in sorted(g.edges)]
    same = np.eye(k, dtype=bool)
    adj = g.adjacency()
    pred = (np.eye(n, dtype=bool)[:, :, None, None] & same[None, None]) | \
           (adj[:, :, None, None] & ~same[None, None])
    return validate(GameSpec(n, n, k, k, pi, pred))


def hamming_graph(n: int) -> Graph:
    """Vertices {0,1}^n, adjacent iff the Hamming distance is exactly n/2."""
    if n > 8:
        raise TooLarge(f"hamming_graph is limited to n <= 8 (2^8 vertices), got {n}")
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    words = np.arange(2 ** n)
    dist = np.array([[bin(int(u ^ v)).count("1") for v in words] for u in words])
    us, vs = np.nonzero(np.triu(dist == n // 2, 1))
    return Graph(2 ** n, frozenset(zip(us.tolist(), vs.tolist())))


def three_sat(f: CnfFormula) -> ValidatedGame:
    """Clause-versus-variable game for a 3-CNF formula.

    Alice's bit ``k`` is assigned to the variable of literal ``k``; if a
    variable appears twice in a clause the corresponding bits must agree.
    """
    if not f.clauses:
        raise ValueError("formula has no clauses")
    m = len(f.clauses)
    pred = np.zeros((m, f.n_vars, 8, 2), dtype=bool)
    pairs = [(s, t) for s, clause in enumerate(f.clauses) for t in sorted({v for v, _ in clause})]
    for s, clause in enumerate(f.clauses):
        for a in range(8):
            assign = {}
            consistent = True
            for k, (v, _) in enumerate(clause):
                bit = _bit(a, k)
                if assign.setdefault(v, bit) != bit:
                    consistent = False
            if not consistent:
                continue
            if not any(assign[v] != neg for v, neg in clause):
                continue
            for v, bit in assign.items():
                pred[s, v, a, bit] = True
    p = Fraction(1, len(pairs))
    return validate(GameSpec(m, f.n_vars, 8, 2, [(s, t, p) for s, t in pairs], pred))


def magic_square_formula() -> CnfFormula:
    """24 clauses over x_ij (index 3i + j): rows even, columns odd.

    Each line contributes four clauses, one excluding each assignment of the
    wrong parity; literals follow the order of the line's cells.
    """
    clauses = []
    for s, cells in enumerate(MAGIC_TRIPLES):
        parity = 0 if s < 3 else 1
        wrong = [y for y in [(1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                             (0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
                 if sum(y) % 2 != parity]
        for y in wrong:
            clauses.append(tuple((v, bool(bit)) for v, bit in zip(cells, y)))
    return CnfFormula(9, tuple(clauses))


def xor_game(pi, v0, v1) -> ValidatedGame:
    """Binary game from an XOR description (``pi``, ``V0``, ``V1`` matrices)."""
    x = XorGame.from_arrays(pi, v0, v1)
    pred = np.zeros((x.n_s, x.n_t, 2, 2), dtype=bool)
    for a in (0, 1):
        for b in (0, 1):
            pred[:, :, a, b] = (x.v1 if a ^ b else x.v0).astype(bool)
    entries = [(s, t, x.pi_entry(s, t)) for s in range(x.n_s) for t in range(x.n_t)]
    return validate(GameSpec(x.n_s, x.n_t, 2, 2, entries, pred))


def random_xor_game(rng: np.random.Generator, n_s=3, n_t=3, denominator=None) -> ValidatedGame:
    """Random XOR game; with ``denominator`` the distribution is rational."""
    v0 = rng.integers(0, 2, size=(n_s, n_t))
    v1 = rng.integers(0, 2, size=(n_s, n_t))
    if denominator:
        counts = rng.multinomial(denominator - n_s * n_t, np.full(n_s * n_t, 1 / (n_s * n_t))) + 1
        pi = [[Fraction(int(counts[s * n_t + t]), denominator) for t in range(n_t)] for s in range(n_s)]
    else:
        w = rng.random((n_s, n_t))
        pi = (w / w.sum()).tolist()
    return xor_game(pi, v0, v1)

"""Exact classical values by best-response enumeration.

Once one player's deterministic strategy is fixed, the objective splits into
independent per-question maximizations for the other player.  We therefore
enumerate only the smaller of the two function spaces.  The enumerated
answers are split into a block of low positions, evaluated for all
combinations at once with numpy, and the remaining high positions, walked in
reflected Gray order so that each step changes a single answer.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction

import numpy as np

from .errors import SearchSpaceTooLarge, TooManyVectors
from .game import DeterministicStrategy, ValidatedGame, XorGame, evaluate_deterministic, trivial_value

DEFAULT_CAP = 2 ** 26
BATCH_TARGET = 1 << 16  # elements of the low-block score table


@dataclasses.dataclass(frozen=True)
class ClassicalResult:
    value: Fraction | float       # exact when the game's pi is rational
    value_float: float
    strategy: DeterministicStrategy
    enumerated_side: str          # "alice" or "bob"
    work_factor: int              # number of enumerated candidate functions

    def to_dict(self):
        return {
            "value": self.value_float,
            "valueExact": str(self.value) if isinstance(self.value, Fraction) else None,
            "strategy": {"a": list(self.strategy.a), "b": list(self.strategy.b)},
            "enumeratedSide": self.enumerated_side,
            "workFactor": self.work_factor,
        }


def gray_steps(n, radix):
    """Reflected ``radix``-ary Gray code on ``n`` digits, starting from all zeros.

    Yields ``(position, new_digit)`` for each of the ``radix**n - 1`` steps.
    """
    if radix < 2:
        return
    digit = [0] * n
    focus = list(range(n + 1))
    direction = [1] * n
    while True:
        j = focus[0]
        focus[0] = 0
        if j == n:
            return
        digit[j] += direction[j]
        yield j, digit[j]
        if digit[j] == 0 or digit[j] == radix - 1:
            direction[j] = -direction[j]
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1


def _weights(g: ValidatedGame):
    """Weight matrix with a dtype that keeps sums exact, plus the scale."""
    if g.exact:
        w, denom = g.scaled_weights()
        if int(sum(w.flat)) < 2 ** 62:
            return w.astype(np.int64), denom
        return w, denom
    return np.array(g.pi_matrix, dtype=float), None


def _space_sizes(g):
    return g.n_a ** g.n_s, g.n_b ** g.n_t


def _enumerate_bob(w, pred):
    """Best Bob strategy (lexicographically smallest among optima) and its score.

    ``pred`` has shape (nS, nT, nA, nB).  Returns ``(best_total, b_tuple)``.
    """
    n_s, n_t, n_a, n_b = pred.shape
    # contribution of Bob answering y at t to Alice's score table
    contrib = np.einsum("st,stay->tysa", w, pred.astype(w.dtype)) if w.dtype != object else \
        np.array([[[[w[s, t] * int(pred[s, t, a, y]) for a in range(n_a)] for s in range(n_s)]
                   for y in range(n_b)] for t in range(n_t)], dtype=object)

    # low block: positions 0..low-1 enumerated jointly, position 0 most significant
    low = 0
    while low < n_t and n_b ** (low + 1) * n_s * n_a <= BATCH_TARGET:
        low += 1
    if n_b == 1:
        low = n_t
    combos = np.array(list(itertools.product(range(n_b), repeat=low)), dtype=np.int64).reshape(-1, low)
    low_score = np.zeros((len(combos), n_s, n_a), dtype=w.dtype)
    for k in range(low):
        low_score = low_score + contrib[k][combos[:, k]]

    high = n_t - low
    digits = [0] * high
    high_score = contrib[low:, 0].sum(axis=0) if high else np.zeros((n_s, n_a), dtype=w.dtype)

    best_total = None
    best_b = None

    def consider():
        nonlocal best_total, best_b
        totals = (low_score + high_score).max(axis=2).sum(axis=1)
        m = totals.max()
        if best_total is not None and m < best_total:
            return
        i = int(np.flatnonzero(totals == m)[0])
        cand = tuple(int(x) for x in combos[i]) + tuple(digits)
        if best_total is None or m > best_total or cand < best_b:
            best_total, best_b = m, cand

    consider()
    for pos, new in gray_steps(high, n_b):
        t = low + pos
        high_score = high_score + contrib[t, new] - contrib[t, digits[pos]]
        digits[pos] = new
        consider()
    return best_total, best_b


def classical_value(g: ValidatedGame, cap: int = DEFAULT_CAP) -> ClassicalResult:
    """Exact classical value and an optimal deterministic strategy."""
    size_a, size_b = _space_sizes(g)
    if min(size_a, size_b) > cap:
        raise SearchSpaceTooLarge(size_a, size_b, cap)
    w, denom = _weights(g)
    pred = g.predicate
    if size_a < size_b:
        side = "alice"
        _, a = _enumerate_bob(w.T.copy(), pred.transpose(1, 0, 3, 2))
        b = _best_response(w.T, pred.transpose(1, 0, 3, 2), a)
    else:
        side = "bob"
        _, b = _enumerate_bob(w, pred)
        a = _best_response(w, pred, b)
    strategy = DeterministicStrategy(a, b)
    value = evaluate_deterministic(g, strategy)
    return ClassicalResult(value, float(value), strategy, side, min(size_a, size_b))


def _best_response(w, pred, b):
    """Lowest-index best answer for every question of the non-enumerated side."""
    n_s, n_t, n_a, _ = pred.shape
    out = []
    for s in range(n_s):
        scores = [sum(w[s, t] * int(pred[s, t, a, b[t]]) for t in range(n_t)) for a in range(n_a)]
        out.append(max(range(n_a), key=lambda a: (scores[a], -a)))
    return tuple(out)


# -- XOR games --------------------------------------------------------------

def _sign_matrix(start, stop, n):
    """Rows are sign vectors for indices start..stop-1; bit 0 (most significant) is position 0."""
    k = np.arange(start, stop, dtype=np.int64)[:, None]
    bits = (k >> np.arange(n - 1, -1, -1, dtype=np.int64)) & 1
    return 1 - 2 * bits


def classical_value_xor(x: XorGame, cap: int = DEFAULT_CAP) -> ClassicalResult:
    """Classical value of an XOR game via sign enumeration.

    For each sign vector of the smaller side the other side answers
    ``sign(sum D b)`` (zero counts as +1); the value is ``tau + max/2``.
    Answer bit 0 stands for sign +1.
    """
    n_s, n_t = x.n_s, x.n_t
    if 2 ** min(n_s, n_t) > cap:
        raise SearchSpaceTooLarge(2 ** n_s, 2 ** n_t, cap)
    if x.exact:
        _, d, denom = x.scaled_costs()
        d = d.astype(np.int64) if int(np.abs(d).sum()) < 2 ** 62 else d
    else:
        d, denom = np.array(x.cost), None
    side = "bob" if n_t <= n_s else "alice"
    m = d if side == "bob" else d.T
    n = m.shape[1]
    best, best_k = None, 0
    chunk = 1 << 14
    for start in range(0, 2 ** n, chunk):
        signs = _sign_matrix(start, min(start + chunk, 2 ** n), n)
        totals = np.abs(signs.astype(m.dtype) @ m.T).sum(axis=1)
        i = int(np.argmax(totals))
        if best is None or totals[i] > best:
            best, best_k = totals[i], start + i
    enumerated = _sign_matrix(best_k, best_k + 1, n)[0]
    other = m @ enumerated.astype(m.dtype)
    other_signs = np.where(other >= 0, 1, -1)
    enumerated_bits = tuple(int(v) for v in (1 - enumerated) // 2)
    other_bits = tuple(int(v) for v in (1 - other_signs) // 2)
    a, b = (other_bits, enumerated_bits) if side == "bob" else (enumerated_bits, other_bits)
    value = xor_strategy_value(x, a, b)
    if x.exact:
        assert value == trivial_value(x) + Fraction(int(best), 2 * denom)
    return ClassicalResult(value, float(value), DeterministicStrategy(a, b), side, 2 ** n)


def xor_strategy_value(x: XorGame, a, b):
    """Value of answer bits ``a``, ``b``; summed in the same order as evaluate_deterministic."""
    total = Fraction(0) if x.exact else 0.0
    for s in range(x.n_s):
        for t in range(x.n_t):
            v = x.v1 if a[s] ^ b[t] else x.v0
            if v[s, t] and x.pi[s, t] > 0:
                total += x.pi_entry(s, t)
    return total


def classical_value_naive(g: ValidatedGame):
    """Double enumeration over both strategy spaces.  Test oracle only.

    The inner loop over Bob's strategies is a table lookup but every pair
    ``(a, b)`` is scored in full.
    """
    w, denom = _weights(g)
    bobs = np.array(list(itertools.product(range(g.n_b), repeat=g.n_t)), dtype=np.int64).reshape(-1, g.n_t)
    support = list(g.pi)
    best, best_strategy = None, None
    for a in itertools.product(range(g.n_a), repeat=g.n_s):
        total = np.zeros(len(bobs), dtype=w.dtype)
        for s, t in support:
            total = total + w[s, t] * g.predicate[s, t, a[s]][bobs[:, t]].astype(w.dtype)
        i = int(np.argmax(total))
        if best is None or total[i] > best:
            best, best_strategy = total[i], DeterministicStrategy(a, bobs[i])
    value = Fraction(int(best), denom) if g.exact else float(best)
    return value, best_strategy


# -- Kochen-Specker colorings -----------------------------------------------

class _Uncolorable:
    def __repr__(self):
        return "UNCOLORABLE"

    def __bool__(self):
        return False


UNCOLORABLE = _Uncolorable()


def _count_search(n, constraints, stats=None, prefer_one=None):
    """DPLL over 0/1 variables with "number of ones in this set lies in C" constraints.

    ``constraints`` is a list of ``(indices, allowed_counts)``.  Variables are
    branched in index order, trying 1 first for indices in ``prefer_one``
    (default: all) and 0 first otherwise.  Returns an assignment list or None.
    """
    watch = [[] for _ in range(n)]
    for k, (idx, _) in enumerate(constraints):
        for i in idx:
            watch[i].append(k)

    def propagate(val, queue):
        while queue:
            k = queue.pop()
            idx, allowed = constraints[k]
            ones = sum(1 for i in idx if val[i] == 1)
            free = [i for i in idx if val[i] < 0]
            feasible = [c for c in allowed if ones <= c <= ones + len(free)]
            if not feasible:
                return False
            if not free:
                continue
            if all(c == ones for c in feasible):
                forced = 0
            elif all(c == ones + len(free) for c in feasible):
                forced = 1
            else:
                continue
            for i in free:
                val[i] = forced
                queue.extend(watch[i])
        return True

    def solve(val):
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + 1
        try:
            i = val.index(-1)
        except ValueError:
            return val
        for choice in ((1, 0) if prefer_one is None or i in prefer_one else (0, 1)):
            trial = list(val)
            trial[i] = choice
            if propagate(trial, list(watch[i])):
                found = solve(trial)
                if found is not None:
                    return found
        return None

    start = [-1] * n
    if not propagate(start, list(range(len(constraints)))):
        return None
    return solve(start)


def check_ks_coloring(ks, coloring) -> bool:
    """Both coloring conditions: no orthogonal pair is all ones, every triple has a one."""
    for i, j in ks.orthogonal_pairs():
        if coloring[i] == 1 and coloring[j] == 1:
            return False
    return all(any(coloring[i] == 1 for i in t) for t in ks.triples)


def ks_color_search(ks, stats=None):
    """A valid {0,1}-coloring of ``ks`` as a tuple, or ``UNCOLORABLE``."""
    n = len(ks.vectors)
    if n > 64:
        raise TooManyVectors(f"coloring search handles at most 64 vectors, got {n}")
    constraints = [(t, (1, 2, 3)) for t in ks.triples]
    constraints += [((i, j), (0, 1)) for i, j in ks.orthogonal_pairs()]
    in_triple = {i for t in ks.triples for i in t}
    found = _count_search(n, constraints, stats, prefer_one=in_triple)
    if found is None:
        return UNCOLORABLE
    return tuple(found)


# ones in a triple -> how many of its three (triple, vector) questions are lost
_DEFICIT_COUNTS = {0: (1,), 1: (0, 2), 2: (3,)}


def ks_classical_value(ks, max_deficit=None) -> ClassicalResult:
    """Exact classical value of ``kochen_specker(ks)`` by minimum-deficit coloring.

    For a fixed coloring Alice loses one question on a triple with zero or two
    ones, two on a triple with three ones, and none otherwise.  We look for
    colorings of total deficit 0, 1, 2, ... by fixing which triples are
    deficient and running the counting search.
    """
    from .generators import kochen_specker

    g = kochen_specker(ks)
    n, m = len(ks.vectors), len(ks.triples)
    if n > 64:
        raise TooManyVectors(f"coloring search handles at most 64 vectors, got {n}")
    stats = {}
    limit = 2 * m if max_deficit is None else max_deficit
    for total in range(limit + 1):
        for deficits in _deficit_patterns(m, total):
            constraints = [(t, _DEFICIT_COUNTS[d]) for t, d in zip(ks.triples, deficits)]
            found = _count_search(n, constraints, stats)
            if found is None:
                continue
            b = tuple(int(max(v, 0)) for v in found)
            a = tuple(next((k for k, i in enumerate(t) if b[i] == 1), 0) for t in ks.triples)
            strategy = DeterministicStrategy(a, b)
            value = evaluate_deterministic(g, strategy)
            assert value == 1 - Fraction(total, 3 * m)
            return ClassicalResult(value, float(value), strategy, "bob", stats["nodes"])
    raise SearchSpaceTooLarge(3 ** m, 2 ** n, limit)


def _deficit_patterns(m, total):
    """All length-m tuples over {0,1,2} summing to ``total``, in lexicographic order of positions."""
    for twos in range(total // 2, -1, -1):
        ones = total - 2 * twos
        if twos + ones > m:
            continue
        for pos2 in itertools.combinations(range(m), twos):
            rest = [i for i in range(m) if i not in pos2]
            for pos1 in itertools.combinations(rest, ones):
                d = [0] * m
                for i in pos2:
                    d[i] = 2
                for i in pos1:
                    d[i] = 1
                yield tuple(d)

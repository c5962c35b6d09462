"""The eleven acceptance criteria, each asserted at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in a summary
section at the end of the pytest run.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from nlgames.bounds import GROTHENDIECK_UPPER, check_bounds, g_function, gamma_constants
from nlgames.classical import UNCOLORABLE, classical_value, classical_value_naive, ks_color_search
from nlgames.config import rng_stream
from nlgames.game import GameSpec, evaluate_deterministic, trivial_value, validate
from nlgames.generators import (
    CnfFormula,
    Graph,
    check_ks_set,
    chsh,
    graph_coloring,
    hamming_graph,
    kochen_specker,
    magic_square,
    magic_square_formula,
    odd_cycle,
    random_xor_game,
    shipped_ks_set,
    standard_basis_ks,
    three_sat,
)
from nlgames.quantum import (
    builtin_ks,
    builtin_magic_square,
    builtin_threesat_magic,
    correlation,
    extract_classical_from_perfect,
    win_probability,
)
from nlgames.tsirelson import jl_reduce, strategy_to_vectors, vectors_to_strategy
from nlgames.verification import planted_perfect_instance, random_unit_family, sigma_z_agreement_instance
from nlgames.xor_solver import quantum_value_bruteforce, quantum_value_xor

pytestmark = pytest.mark.acceptance


class Clock:
    def __init__(self):
        self.t0 = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.t0


def test_chsh(criterion):
    criterion(1, "CHSH: w_c = 3/4, w_q = cos^2(pi/8), gap < 1e-7")
    clock = Clock()
    g = chsh()
    assert classical_value(g).value == Fraction(3, 4)
    q = quantum_value_xor(g.xor_form)
    assert math.cos(math.pi / 8) ** 2 - 1e-7 <= q.value <= q.dual_bound
    assert q.gap < 1e-7
    assert clock.elapsed < 1.0


def test_odd_cycles(criterion):
    criterion(2, "Odd cycles n = 3,5,7,9: w_c = 1 - 1/2n, w_q = cos^2(pi/4n)")
    clock = Clock()
    for n in (3, 5, 7, 9):
        g = odd_cycle(n)
        assert classical_value(g).value == 1 - Fraction(1, 2 * n)
        q = quantum_value_xor(g.xor_form)
        assert abs(q.value - math.cos(math.pi / (4 * n)) ** 2) <= 1e-6
        assert q.gap < 1e-6
    assert clock.elapsed < 10.0


def test_magic_square(criterion):
    criterion(3, "Magic square: w_c = 17/18, built-in strategy wins with probability 1")
    clock = Clock()
    g = magic_square()
    assert classical_value(g).value == Fraction(17, 18)
    assert abs(win_probability(g, builtin_magic_square()) - 1) <= 1e-10
    assert clock.elapsed < 5.0


def test_kochen_specker(criterion):
    criterion(4, "Kochen-Specker: shipped set valid and uncolorable, perfect quantum strategy")
    clock = Clock()
    ks = shipped_ks_set()
    check_ks_set(ks)
    assert ks_color_search(ks) is UNCOLORABLE
    assert abs(win_probability(kochen_specker(ks), builtin_ks(ks)) - 1) <= 1e-10
    assert clock.elapsed < 60.0


def test_three_sat(criterion):
    criterion(5, "3-SAT magic-square formula: 24 clauses, unsatisfiable, w_c <= 71/72, perfect lift")
    clock = Clock()
    f = magic_square_formula()
    assert len(f.clauses) == 24
    assert not any(f.satisfied_by(x) for x in itertools.product((0, 1), repeat=9))
    g = three_sat(f)
    assert classical_value(g).value <= 1 - Fraction(1, 72)
    assert abs(win_probability(g, builtin_threesat_magic()) - 1) <= 1e-10
    assert clock.elapsed < 30.0


def test_perfect_extraction(criterion):
    criterion(6, "Extraction: 50 planted perfect instances plus sigma_z agreement give value exactly 1")
    instances = [planted_perfect_instance(np.random.default_rng(1000 + i)) for i in range(50)]
    instances.append(sigma_z_agreement_instance())
    for g, o in instances:
        assert win_probability(g, o) >= 1 - 1e-9
        d = extract_classical_from_perfect(g, o)
        assert evaluate_deterministic(g, d) == 1
        assert isinstance(evaluate_deterministic(g, d), Fraction)


def test_tsirelson_round_trip(criterion):
    criterion(7, "Tsirelson: correlations equal inner products, round trip keeps the table")
    rng = np.random.default_rng(77)
    for _ in range(100):
        m = int(rng.integers(1, 9))
        vs = random_unit_family(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)), m)
        o = vectors_to_strategy(vs)
        table = np.array([[correlation(o.psi, a, b) for b in o.bob] for a in o.alice])
        assert np.max(np.abs(table - vs.gram())) < 1e-9
        back = strategy_to_vectors(o)
        assert np.max(np.abs(back.gram() - table)) < 1e-9


def test_gamma_constants(criterion):
    criterion(8, "gamma2 = 0.74202, gamma1 = 1.1382, tangency residual < 1e-12")
    c = gamma_constants()
    assert abs(c.gamma2 - 0.74202) <= 5e-6
    assert abs(c.gamma1 - 1.1382) <= 5e-5
    assert c.residual < 1e-12


def test_bound_suite(criterion):
    criterion(9, "Bounds: w_q <= g(w_c) and Grothendieck bound on CHSH, odd cycles, 100 random games")
    games = [chsh()] + [odd_cycle(n) for n in (3, 5, 7, 9)]
    rng = np.random.default_rng(99)
    games += [random_xor_game(rng, 3, 3) for _ in range(100)]
    for g in games:
        r = check_bounds(g)
        assert r.g_bound == g_function(min(1.0, r.omega_c))
        assert r.omega_q_dual <= r.g_bound + 1e-8
        assert r.omega_q_dual - r.tau <= GROTHENDIECK_UPPER * (r.omega_c - r.tau) + 1e-8
    r = check_bounds(chsh())
    assert abs((r.omega_q - r.tau) / (r.omega_c - r.tau) - math.sqrt(2)) <= 1e-6


def _distortion_bounds_hold(points, images, eps):
    for p, q in itertools.combinations(range(len(points)), 2):
        before = np.sum((points[p] - points[q]) ** 2)
        after = np.sum((images[p] - images[q]) ** 2)
        if not (1 - eps) * before <= after <= (1 + eps) * before:
            return False
    return True


def test_jl_reduction(criterion):
    criterion(10, "JL reduction at eps = 0.05: value > w_q - eps, distortions within bounds")
    clock = Clock()
    eps, seed = 0.05, 0
    for g in (chsh(), odd_cycle(5)):
        x = g.xor_form
        q = quantum_value_xor(x)
        red = jl_reduce(q.vectors, eps, seed=seed, allow_identity=False)
        value = float(trivial_value(x)) + 0.5 * float(np.sum(x.cost * red.vectors.gram()))
        assert value > q.value - eps
        # rebuild the accepted map from its stream and check every pair again
        vs = q.vectors
        f = rng_stream(seed, "jl", red.draws - 1).standard_normal((red.dimension, vs.m)) / math.sqrt(red.dimension)
        points = np.vstack([vs.u, vs.v, np.zeros((1, vs.m))])
        assert _distortion_bounds_hold(points, points @ f.T, eps)
        assert np.max(np.abs(red.vectors.gram() - vs.gram())) < 2 * eps
    assert clock.elapsed < 30.0


def _oracle_games():
    games = [chsh(), odd_cycle(3), odd_cycle(5), odd_cycle(7), odd_cycle(9),
             graph_coloring(Graph.cycle(3), 3), graph_coloring(Graph.cycle(5), 2),
             graph_coloring(hamming_graph(2), 2),
             three_sat(CnfFormula(3, (((0, False), (1, False), (2, False)),))),
             three_sat(CnfFormula(2, (((0, False), (1, True), (0, False)), ((1, False), (1, False), (0, True))))),
             kochen_specker(standard_basis_ks())]
    rng = np.random.default_rng(11)
    for _ in range(40):
        n_s, n_t = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        n_a, n_b = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        w = rng.integers(0, 6, (n_s, n_t))
        w[0, 0] += 1
        pi = [(s, t, Fraction(int(w[s, t]), int(w.sum()))) for s in range(n_s) for t in range(n_t) if w[s, t]]
        games.append(validate(GameSpec(n_s, n_t, n_a, n_b, pi, rng.random((n_s, n_t, n_a, n_b)) < 0.4)))
    for _ in range(20):
        games.append(random_xor_game(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4))))
    return [g for g in games if g.n_a ** g.n_s * g.n_b ** g.n_t <= 10 ** 6]


def test_oracle_equivalence(criterion):
    criterion(11, "Oracles: classical value = double enumeration, w_q = grid search on 2x2 XOR games")
    for g in _oracle_games():
        naive, _ = classical_value_naive(g)
        assert classical_value(g).value == naive
    rng = np.random.default_rng(12)
    xs = [chsh().xor_form] + [random_xor_game(rng, 2, 2).xor_form for _ in range(20)]
    for x in xs:
        assert abs(quantum_value_xor(x).value - quantum_value_bruteforce(x)) <= 1e-4

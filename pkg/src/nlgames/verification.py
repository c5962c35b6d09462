"""End-to-end checks of the headline results, one function per claim.

Each check returns a :class:`CheckResult`; the CLI's ``verify-paper`` prints
them as a table and the acceptance tests assert on them.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import time
from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

from .bounds import GROTHENDIECK_UPPER, check_bounds, gamma_constants
from .classical import UNCOLORABLE, classical_value, classical_value_naive, ks_color_search
from .config import rng_stream
from .game import GameSpec, evaluate_deterministic, validate
from .generators import (
    CnfFormula,
    Graph,
    chsh,
    graph_coloring,
    kochen_specker,
    magic_square,
    magic_square_formula,
    odd_cycle,
    random_xor_game,
    shipped_ks_set,
    standard_basis_ks,
    three_sat,
    xor_game,
)
from .quantum import (
    SIGMA_Z,
    ObservableStrategy,
    builtin_ks,
    builtin_magic_square,
    builtin_threesat_magic,
    correlation,
    extract_classical_from_perfect,
    maximally_entangled,
    win_probability,
)
from .tsirelson import correlation_table, jl_reduce, pairwise_distortion, reduced_value, strategy_to_vectors, vectors_to_strategy
from .xor_solver import VectorStrategy, quantum_value_bruteforce, quantum_value_xor


@dataclasses.dataclass
class CheckResult:
    number: int
    claim: str
    passed: bool
    details: list
    seconds: float = 0.0
    time_limit: float | None = None

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.number:>2}. {self.claim}: {status} ({self.seconds:.2f} s)"


class _Recorder:
    def __init__(self):
        self.ok = True
        self.details = []

    def check(self, cond, message):
        self.ok &= bool(cond)
        self.details.append(("ok  " if cond else "FAIL") + " " + message)
        return cond


def _timed(number, claim, limit, body):
    rec = _Recorder()
    start = time.perf_counter()
    body(rec)
    elapsed = time.perf_counter() - start
    if limit is not None:
        rec.check(elapsed < limit, f"runtime {elapsed:.2f} s < {limit} s")
    return CheckResult(number, claim, rec.ok, rec.details, elapsed, limit)


COS2_PI8 = math.cos(math.pi / 8) ** 2


def check_chsh():
    def body(r):
        g = chsh()
        c = classical_value(g)
        r.check(c.value == Fraction(3, 4), f"classical value {c.value} == 3/4")
        q = quantum_value_xor(g.xor_form)
        r.check(COS2_PI8 - 1e-7 <= q.value <= q.dual_bound,
                f"quantum value {q.value:.12f} in [cos^2(pi/8) - 1e-7, {q.dual_bound:.12f}]")
        r.check(q.gap < 1e-7, f"dual gap {q.gap:.2e} < 1e-7")
    return _timed(1, "CHSH: w_c = 3/4, w_q = cos^2(pi/8)", 1.0, body)


def check_odd_cycles(ns=(3, 5, 7, 9)):
    def body(r):
        for n in ns:
            g = odd_cycle(n)
            c = classical_value(g)
            r.check(c.value == 1 - Fraction(1, 2 * n), f"n={n}: classical value {c.value} == 1 - 1/{2 * n}")
            q = quantum_value_xor(g.xor_form)
            target = math.cos(math.pi / (4 * n)) ** 2
            r.check(abs(q.value - target) <= 1e-6, f"n={n}: |w_q - cos^2(pi/4n)| = {abs(q.value - target):.2e}")
            r.check(q.gap < 1e-6, f"n={n}: dual gap {q.gap:.2e} < 1e-6")
    return _timed(2, "Odd cycles: w_c = 1 - 1/2n, w_q = cos^2(pi/4n)", 10.0, body)


def check_magic_square():
    def body(r):
        g = magic_square()
        c = classical_value(g)
        r.check(c.value == Fraction(17, 18), f"classical value {c.value} == 17/18")
        p = win_probability(g, builtin_magic_square())
        r.check(abs(p - 1) <= 1e-10, f"quantum strategy wins with probability {p!r}")
    return _timed(3, "Magic square: w_c = 17/18, perfect quantum strategy", 5.0, body)


def check_kochen_specker():
    def body(r):
        ks = shipped_ks_set()   # validates orthogonality and pair coverage on load
        r.check(True, f"{len(ks.vectors)} vectors, {len(ks.triples)} triples pass validation")
        res = ks_color_search(ks)
        r.check(res is UNCOLORABLE, f"coloring search returns {res!r}")
        p = win_probability(kochen_specker(ks), builtin_ks(ks))
        r.check(abs(p - 1) <= 1e-10, f"quantum strategy wins with probability {p!r}")
    return _timed(4, "Kochen-Specker: set uncolorable, perfect quantum strategy", 60.0, body)


def check_three_sat():
    def body(r):
        f = magic_square_formula()
        r.check(len(f.clauses) == 24 and f.n_vars == 9, f"{len(f.clauses)} clauses over {f.n_vars} variables")
        sat = [x for x in itertools.product((0, 1), repeat=9) if f.satisfied_by(x)]
        r.check(not sat, f"{len(sat)} of 512 assignments satisfy the formula")
        g = three_sat(f)
        c = classical_value(g)
        r.check(c.value <= 1 - Fraction(1, 72), f"classical value {c.value} <= 71/72")
        p = win_probability(g, builtin_threesat_magic())
        r.check(abs(p - 1) <= 1e-10, f"lifted quantum strategy wins with probability {p!r}")
    return _timed(5, "3-SAT magic-square formula: unsatisfiable, perfect quantum strategy", 30.0, body)


# -- planted perfect instances ----------------------------------------------

def planted_perfect_instance(rng: np.random.Generator):
    """Binary game with planted perfect classical strategies, lifted to a rotated quantum strategy.

    A few deterministic strategies are planted; the predicate wins on all of
    them over the support and is random elsewhere.  The quantum strategy runs
    planted strategy ``k`` on branch ``|kk>`` of a weighted entangled state
    (one spare dimension left empty), then applies random local unitaries.
    """
    n_s, n_t = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    k = int(rng.integers(1, 4))
    planted = [(rng.integers(0, 2, n_s), rng.integers(0, 2, n_t)) for _ in range(k)]
    pairs = [(s, t) for s in range(n_s) for t in range(n_t) if rng.random() < 0.7] or [(0, 0)]
    weights = rng.integers(1, 10, len(pairs))
    total = int(weights.sum())
    pi = [(s, t, Fraction(int(w), total)) for (s, t), w in zip(pairs, weights)]
    pred = rng.random((n_s, n_t, 2, 2)) < 0.5
    for s, t in pairs:
        pred[s, t] = False
        for a, b in planted:
            pred[s, t, a[s], b[t]] = True
    g = validate(GameSpec(n_s, n_t, 2, 2, pi, pred))

    dim = k + 1
    amp = rng.random(k) + 0.1
    amp = np.sqrt(amp / amp.sum())
    psi = np.zeros((dim, dim), dtype=complex)
    for i in range(k):
        psi[i, i] = amp[i]
    def diag_obs(bits):
        return np.diag([(-1.0) ** bits[i] for i in range(k)] + [1.0]).astype(complex)

    alice = [diag_obs([planted[i][0][s] for i in range(k)]) for s in range(n_s)]
    bob = [diag_obs([planted[i][1][t] for i in range(k)]) for t in range(n_t)]
    u = unitary_group.rvs(dim, random_state=rng)
    w = unitary_group.rvs(dim, random_state=rng)
    psi = u @ psi @ w.T
    alice = [u @ a @ u.conj().T for a in alice]
    bob = [w @ b @ w.conj().T for b in bob]
    return g, ObservableStrategy(dim, dim, psi.reshape(-1), alice, bob)


def sigma_z_agreement_instance():
    g = xor_game([[Fraction(1, 2), 0], [0, Fraction(1, 2)]], [[1, 1], [1, 1]], [[0, 0], [0, 0]])
    o = ObservableStrategy(2, 2, maximally_entangled(2), [SIGMA_Z, SIGMA_Z], [SIGMA_Z, SIGMA_Z])
    return g, o


def check_extraction(count=50, seed=0):
    def body(r):
        instances = [planted_perfect_instance(rng_stream(seed, "planted", i)) for i in range(count)]
        instances.append(sigma_z_agreement_instance())
        bad = 0
        for g, o in instances:
            d = extract_classical_from_perfect(g, o)
            if evaluate_deterministic(g, d) != 1:
                bad += 1
        r.check(bad == 0, f"{len(instances) - bad} of {len(instances)} extracted strategies win with value exactly 1")
    return _timed(6, "Perfect binary quantum strategies yield perfect classical ones", None, body)


def random_unit_family(rng, n_s, n_t, m):
    u = rng.standard_normal((n_s, m))
    v = rng.standard_normal((n_t, m))
    return VectorStrategy(u / np.linalg.norm(u, axis=1)[:, None], v / np.linalg.norm(v, axis=1)[:, None])


def check_tsirelson(count=100, seed=0):
    def body(r):
        worst_fwd = worst_back = 0.0
        for i in range(count):
            rng = rng_stream(seed, "tsirelson", i)
            m = int(rng.integers(1, 9))
            vs = random_unit_family(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)), m)
            o = vectors_to_strategy(vs)
            table = np.array([[correlation(o.psi, a, b) for b in o.bob] for a in o.alice])
            worst_fwd = max(worst_fwd, float(np.max(np.abs(table - vs.gram()))))
            back = strategy_to_vectors(o)
            worst_back = max(worst_back, float(np.max(np.abs(back.gram() - correlation_table(o)))))
        r.check(worst_fwd < 1e-9, f"max |correlation - <u,v>| = {worst_fwd:.2e}")
        r.check(worst_back < 1e-9, f"round trip changes correlations by at most {worst_back:.2e}")
    return _timed(7, "Tsirelson correspondence in both directions", None, body)


def check_gamma():
    def body(r):
        c = gamma_constants()
        r.check(abs(c.gamma2 - 0.74202) <= 5e-6, f"gamma2 = {c.gamma2:.8f}")
        r.check(abs(c.gamma1 - 1.1382) <= 5e-5, f"gamma1 = {c.gamma1:.8f}")
        r.check(c.residual < 1e-12, f"tangency residual {c.residual:.2e}")
        slope = (math.pi / 2) * math.sin(math.pi * c.gamma2)
        r.check(abs(slope - c.gamma1) < 1e-10, f"slope at gamma2 matches gamma1 ({abs(slope - c.gamma1):.2e})")
    return _timed(8, "Tangency constants gamma1, gamma2", None, body)


def check_bound_suite(random_games=100, seed=0):
    def body(r):
        games = [("CHSH", chsh())] + [(f"odd cycle {n}", odd_cycle(n)) for n in (3, 5, 7, 9)]
        games += [(f"random {i}", random_xor_game(rng_stream(seed, "bound-suite", i), 3, 3, denominator=60))
                  for i in range(random_games)]
        failures = []
        for name, g in games:
            rep = check_bounds(g)
            if not rep.passed:
                failures.append(name)
            if name == "CHSH":
                r.check(rep.ratio is not None and abs(rep.ratio - math.sqrt(2)) <= 1e-6,
                        f"CHSH ratio (w_q - tau)/(w_c - tau) = {rep.ratio!r}")
        r.check(not failures, f"g-bound and Grothendieck bound hold on {len(games) - len(failures)}"
                              f" of {len(games)} games {failures[:5] if failures else ''}".rstrip())
        r.check(GROTHENDIECK_UPPER > 1.78, f"Krivine upper constant {GROTHENDIECK_UPPER:.6f}")
    return _timed(9, "w_q <= g(w_c) and the Grothendieck bound", None, body)


def check_jl(epsilon=0.05, seed=0):
    def body(r):
        for name, g in (("CHSH", chsh()), ("odd cycle 5", odd_cycle(5))):
            x = g.xor_form
            q = quantum_value_xor(x)
            red = jl_reduce(q.vectors, epsilon, seed=seed, allow_identity=False)
            value = reduced_value(x, red)
            r.check(value > q.value - epsilon, f"{name}: reduced value {value:.6f} > {q.value:.6f} - {epsilon}")
            vs = q.vectors
            rng = rng_stream(seed, "jl", red.draws - 1)
            f = rng.standard_normal((red.dimension, vs.m)) / math.sqrt(red.dimension)
            pts = np.vstack([vs.u, vs.v, np.zeros((1, vs.m))])
            worst = pairwise_distortion(pts, pts @ f.T)
            r.check(worst <= epsilon, f"{name}: K = {red.dimension}, worst pairwise distortion {worst:.4f} <= {epsilon}")
            r.check(red.max_inner_change < 2 * epsilon,
                    f"{name}: inner products move by at most {red.max_inner_change:.4f} < {2 * epsilon}")
    return _timed(10, "Dimension reduction keeps the value within epsilon", 30.0, body)


def oracle_corpus(seed=0, random_games=20):
    games = [("CHSH", chsh()), ("odd cycle 3", odd_cycle(3)), ("odd cycle 5", odd_cycle(5)),
             ("odd cycle 7", odd_cycle(7)),
             ("triangle, 3 colors", graph_coloring(Graph.cycle(3), 3)),
             ("C5, 2 colors", graph_coloring(Graph.cycle(5), 2)),
             ("x or y or z", three_sat(CnfFormula(3, (((0, False), (1, False), (2, False)),)))),
             ("standard basis KS", kochen_specker(standard_basis_ks()))]
    for i in range(random_games):
        rng = rng_stream(seed, "oracle-corpus", i)
        n_s, n_t = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        n_a, n_b = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        w = rng.integers(0, 5, (n_s, n_t))
        w[0, 0] += 1
        pi = [(s, t, Fraction(int(w[s, t]), int(w.sum()))) for s in range(n_s) for t in range(n_t)]
        pred = rng.random((n_s, n_t, n_a, n_b)) < 0.4
        games.append((f"random {i}", validate(GameSpec(n_s, n_t, n_a, n_b, pi, pred))))
    return [(n, g) for n, g in games if g.n_a ** g.n_s * g.n_b ** g.n_t <= 10 ** 6]


def check_oracles(seed=0):
    def body(r):
        mismatched = []
        corpus = oracle_corpus(seed)
        for name, g in corpus:
            naive, _ = classical_value_naive(g)
            if classical_value(g).value != naive:
                mismatched.append(name)
        r.check(not mismatched, f"classical value equals double enumeration on {len(corpus) - len(mismatched)}"
                                f" of {len(corpus)} games")
        xs = [("CHSH", chsh().xor_form)]
        xs += [(f"random 2x2 {i}", random_xor_game(rng_stream(seed, "oracle-xor", i), 2, 2).xor_form)
               for i in range(20)]
        worst = 0.0
        for _, x in xs:
            worst = max(worst, abs(quantum_value_xor(x).value - quantum_value_bruteforce(x)))
        r.check(worst <= 1e-4, f"quantum value within {worst:.2e} of the grid oracle on {len(xs)} 2x2 XOR games")
    return _timed(11, "Solvers agree with independent oracles", None, body)


ALL_CHECKS = (check_chsh, check_odd_cycles, check_magic_square, check_kochen_specker, check_three_sat,
              check_extraction, check_tsirelson, check_gamma, check_bound_suite, check_jl, check_oracles)


def run_all():
    return [c() for c in ALL_CHECKS]

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames.classical import (
    UNCOLORABLE,
    check_ks_coloring,
    classical_value,
    classical_value_naive,
    classical_value_xor,
    gray_steps,
    ks_classical_value,
    ks_color_search,
)
from nlgames.errors import SearchSpaceTooLarge, TooManyVectors
from nlgames.game import DeterministicStrategy, GameSpec, evaluate_deterministic, trivial_value, validate
from nlgames.generators import (
    KsVectorSet,
    chsh,
    graph_coloring,
    Graph,
    kochen_specker,
    magic_square,
    odd_cycle,
    random_xor_game,
    shipped_ks_set,
    standard_basis_ks,
    xor_game,
)


def brute_force_value(g):
    """Every pair of deterministic strategies, scored by evaluate_deterministic."""
    return max(evaluate_deterministic(g, DeterministicStrategy(a, b))
               for a in itertools.product(range(g.n_a), repeat=g.n_s)
               for b in itertools.product(range(g.n_b), repeat=g.n_t))


@pytest.mark.parametrize("game, expected", [
    (chsh(), Fraction(3, 4)),
    (magic_square(), Fraction(17, 18)),
    (odd_cycle(3), Fraction(5, 6)),
    (odd_cycle(7), Fraction(13, 14)),
])
def test_known_values(game, expected):
    r = classical_value(game)
    assert r.value == expected
    assert evaluate_deterministic(game, r.strategy) == expected


def test_result_document():
    doc = classical_value(chsh()).to_dict()
    assert doc["valueExact"] == "3/4" and doc["value"] == 0.75
    assert set(doc) == {"value", "valueExact", "strategy", "enumeratedSide", "workFactor"}
    assert doc["workFactor"] == 4


def test_tie_rule_picks_first_strategy():
    # every strategy wins: the all-zeros strategy is reported
    g = validate(GameSpec(2, 2, 3, 3, [(0, 0, 1)], np.ones((2, 2, 3, 3))))
    assert classical_value(g).strategy == DeterministicStrategy((0, 0), (0, 0))


def test_fuzz_against_random_strategies():
    rng = np.random.default_rng(4)
    g = validate(GameSpec(3, 4, 3, 2, [(s, t, Fraction(1, 12)) for s in range(3) for t in range(4)],
                          rng.random((3, 4, 3, 2)) < 0.5))
    best = classical_value(g).value
    for _ in range(1000):
        d = DeterministicStrategy(rng.integers(0, 3, 3), rng.integers(0, 2, 4))
        assert best >= evaluate_deterministic(g, d)


@st.composite
def small_games(draw, max_q=3, max_ans=3):
    n_s, n_t = draw(st.integers(1, max_q)), draw(st.integers(1, max_q))
    n_a, n_b = draw(st.integers(1, max_ans)), draw(st.integers(1, max_ans))
    weights = draw(st.lists(st.integers(0, 7), min_size=n_s * n_t, max_size=n_s * n_t))
    if not any(weights):
        weights[-1] = 1
    total = sum(weights)
    pi = [(i // n_t, i % n_t, Fraction(w, total)) for i, w in enumerate(weights) if w]
    size = n_s * n_t * n_a * n_b
    bits = draw(st.lists(st.booleans(), min_size=size, max_size=size))
    return validate(GameSpec(n_s, n_t, n_a, n_b, pi, np.array(bits).reshape(n_s, n_t, n_a, n_b)))


@settings(max_examples=80, deadline=None)
@given(small_games())
def test_matches_brute_force(g):
    expected = brute_force_value(g)
    assert classical_value(g).value == expected
    assert classical_value_naive(g)[0] == expected


@settings(max_examples=40, deadline=None)
@given(small_games(max_q=3, max_ans=2))
def test_naive_oracle_on_binary_games(g):
    naive, strategy = classical_value_naive(g)
    assert evaluate_deterministic(g, strategy) == naive
    assert classical_value(g).value == naive


def test_float_games():
    g = validate(GameSpec(2, 2, 2, 2, [(0, 0, 0.5), (1, 1, 0.25), (0, 1, 0.25)],
                          lambda s, t, a, b: (a ^ b) == (s & t)))
    r = classical_value(g)
    assert isinstance(r.value, float)
    assert r.value == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(12))
def test_xor_path_equals_general_path(seed):
    rng = np.random.default_rng(seed)
    g = random_xor_game(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
    general = classical_value(g)
    fast = classical_value_xor(g.xor_form)
    assert fast.value == general.value
    assert evaluate_deterministic(g, fast.strategy) == fast.value


def test_xor_examples():
    assert classical_value_xor(chsh().xor_form).value == Fraction(3, 4)
    assert classical_value_xor(odd_cycle(3).xor_form).value == Fraction(5, 6)
    flat = xor_game([["1/4", "1/4"], ["1/4", "1/4"]], [[1, 0], [1, 1]], [[1, 0], [1, 1]])
    r = classical_value_xor(flat.xor_form)
    assert r.value == trivial_value(flat)
    assert r.strategy == DeterministicStrategy((0, 0), (0, 0))


def test_cap_is_enforced():
    with pytest.raises(SearchSpaceTooLarge) as info:
        classical_value(magic_square(), cap=100)
    assert info.value.alice_size == 8 ** 6 and info.value.bob_size == 2 ** 9
    with pytest.raises(SearchSpaceTooLarge):
        classical_value_xor(odd_cycle(9).xor_form, cap=100)
    with pytest.raises(SearchSpaceTooLarge):
        classical_value(kochen_specker(shipped_ks_set()))


@pytest.mark.parametrize("n, radix", [(1, 2), (3, 2), (2, 3), (3, 4), (4, 3)])
def test_gray_code_visits_every_word_once(n, radix):
    digits = [0] * n
    seen = {tuple(digits)}
    for pos, new in gray_steps(n, radix):
        assert abs(new - digits[pos]) == 1
        digits[pos] = new
        seen.add(tuple(digits))
    assert len(seen) == radix ** n
    assert list(gray_steps(3, 1)) == []


def test_ks_search_examples():
    ks = standard_basis_ks()
    coloring = ks_color_search(ks)
    assert coloring is not UNCOLORABLE and sum(coloring) == 1
    assert check_ks_coloring(ks, coloring)
    assert ks_color_search(KsVectorSet(np.zeros((0, 3)), ())) == ()
    stats = {}
    assert ks_color_search(shipped_ks_set(), stats) is UNCOLORABLE
    assert stats["nodes"] > 0
    assert not UNCOLORABLE and repr(UNCOLORABLE) == "UNCOLORABLE"


def test_ks_search_finds_valid_colorings_on_subsets():
    # dropping triples of the shipped set makes it colorable
    full = shipped_ks_set()
    for keep in (1, 3, 6, 10):
        ks = KsVectorSet(full.vectors, full.triples[:keep])
        triple_vectors = sorted({i for t in ks.triples for i in t})
        sub = KsVectorSet(full.vectors[triple_vectors],
                          [tuple(triple_vectors.index(i) for i in t) for t in ks.triples])
        coloring = ks_color_search(sub)
        if coloring is not UNCOLORABLE:
            assert check_ks_coloring(sub, coloring)


def test_ks_too_many_vectors():
    rng = np.random.default_rng(0)
    v = rng.standard_normal((65, 3))
    with pytest.raises(TooManyVectors):
        ks_color_search(KsVectorSet(v / np.linalg.norm(v, axis=1)[:, None], ()))


def test_ks_exact_value():
    ks = shipped_ks_set()
    r = ks_classical_value(ks)
    m = len(ks.triples)
    assert r.value == 1 - Fraction(1, 3 * m)
    assert evaluate_deterministic(kochen_specker(ks), r.strategy) == r.value
    assert ks_classical_value(standard_basis_ks()).value == 1
    with pytest.raises(SearchSpaceTooLarge):
        ks_classical_value(ks, max_deficit=0)

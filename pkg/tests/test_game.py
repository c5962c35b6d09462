import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames.errors import (
    IndexOutOfRange,
    NegativeProbability,
    NonNormalizedDistribution,
    NotXorGame,
    ParseError,
    SchemaViolation,
)
from nlgames.game import (
    DeterministicStrategy,
    GameSpec,
    dumps_game,
    evaluate_deterministic,
    game_to_dict,
    loads_game,
    read_game,
    save_game,
    trivial_value,
    validate,
)
from nlgames.generators import chsh, magic_square, odd_cycle, xor_game

CHSH_PI = [(s, t, "1/4") for s in (0, 1) for t in (0, 1)]


def chsh_spec(pi=CHSH_PI):
    return GameSpec(2, 2, 2, 2, pi, lambda s, t, a, b: (a ^ b) == (s & t))


def test_validate_chsh():
    g = validate(chsh_spec())
    assert g.is_binary and g.exact
    assert g.xor_form is not None
    assert g == chsh()


def test_magic_square_is_not_xor():
    g = magic_square()
    assert not g.is_binary
    assert g.xor_form is None
    with pytest.raises(NotXorGame):
        trivial_value(g)


@pytest.mark.parametrize("pi, err", [
    ([(0, 0, 0.9)], NonNormalizedDistribution),
    ([(0, 0, "9/10")], NonNormalizedDistribution),
    ([(0, 0, -0.1), (0, 1, 1.1)], NegativeProbability),
    ([(2, 0, 1)], IndexOutOfRange),
], ids=["float-0.9", "fraction-0.9", "negative", "out-of-range"])
def test_validation_errors(pi, err):
    with pytest.raises(err):
        validate(chsh_spec(pi))


def test_predicate_shape_checked():
    with pytest.raises(IndexOutOfRange):
        validate(GameSpec(2, 2, 2, 2, CHSH_PI, np.ones((2, 2, 2))))


def test_duplicate_entries_are_summed():
    g = validate(chsh_spec([(0, 0, "1/8"), (0, 0, "1/8")] + CHSH_PI[1:]))
    assert g == chsh()


def test_float_entry_switches_game_to_floats():
    g = validate(chsh_spec([(0, 0, 0.25)] + CHSH_PI[1:]))
    assert not g.exact
    assert all(isinstance(p, float) for p in g.pi.values())


@pytest.mark.parametrize("game, expected", [
    (chsh(), Fraction(1, 2)),
    (odd_cycle(3), Fraction(1, 2)),
    (xor_game([["1/2", "1/2"]], [[1, 1]], [[1, 1]]), Fraction(1)),
])
def test_trivial_value(game, expected):
    assert trivial_value(game) == expected


def test_trivial_value_by_monte_carlo():
    g = odd_cycle(5)
    rng = np.random.default_rng(3)
    n = 20000
    wins = 0.0
    for _ in range(n):
        d = DeterministicStrategy(rng.integers(0, 2, g.n_s), rng.integers(0, 2, g.n_t))
        wins += float(evaluate_deterministic(g, d))
    mean = wins / n
    tau = float(trivial_value(g))
    sigma = 0.5 / np.sqrt(n)   # crude upper bound on the std. error of a [0,1] mean
    assert abs(mean - tau) < 3 * sigma


def test_evaluate_examples():
    assert evaluate_deterministic(chsh(), DeterministicStrategy((0, 0), (0, 0))) == Fraction(3, 4)
    g = odd_cycle(3)
    d = DeterministicStrategy([s % 2 for s in range(3)], [t % 2 for t in range(3)])
    assert evaluate_deterministic(g, d) == Fraction(5, 6)
    always = validate(GameSpec(2, 3, 3, 2, [(1, 2, 1)], np.ones((2, 3, 3, 2))))
    assert evaluate_deterministic(always, DeterministicStrategy((2, 0), (1, 1, 0))) == 1


def test_evaluate_rejects_bad_strategies():
    with pytest.raises(IndexOutOfRange):
        evaluate_deterministic(chsh(), DeterministicStrategy((0,), (0, 0)))
    with pytest.raises(IndexOutOfRange):
        evaluate_deterministic(chsh(), DeterministicStrategy((0, 2), (0, 0)))


@st.composite
def small_games(draw):
    n_s, n_t = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    n_a, n_b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    weights = draw(st.lists(st.integers(0, 5), min_size=n_s * n_t, max_size=n_s * n_t))
    if not any(weights):
        weights[0] = 1
    total = sum(weights)
    pi = [(i // n_t, i % n_t, Fraction(w, total)) for i, w in enumerate(weights)]
    bits = draw(st.lists(st.booleans(), min_size=n_s * n_t * n_a * n_b, max_size=n_s * n_t * n_a * n_b))
    return validate(GameSpec(n_s, n_t, n_a, n_b, pi, np.array(bits).reshape(n_s, n_t, n_a, n_b)))


@settings(max_examples=60, deadline=None)
@given(small_games(), st.randoms(use_true_random=False))
def test_evaluate_is_a_probability(g, rnd):
    d = DeterministicStrategy([rnd.randrange(g.n_a) for _ in range(g.n_s)],
                              [rnd.randrange(g.n_b) for _ in range(g.n_t)])
    assert 0 <= evaluate_deterministic(g, d) <= 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), min_size=16, max_size=16))
def test_xor_detection_sound_and_complete(bits):
    pred = np.array(bits).reshape(2, 2, 2, 2)
    g = validate(GameSpec(2, 2, 2, 2, CHSH_PI, pred))
    depends_on_parity = all(pred[s, t, a, b] == pred[s, t, a ^ 1, b ^ 1]
                            for s, t, a, b in itertools.product((0, 1), repeat=4))
    assert (g.xor_form is not None) == depends_on_parity
    if g.xor_form is not None:
        x = g.xor_form
        for s, t, a, b in itertools.product((0, 1), repeat=4):
            assert pred[s, t, a, b] == bool((x.v1 if a ^ b else x.v0)[s, t])


@settings(max_examples=40, deadline=None)
@given(small_games())
def test_round_trip_through_json(g):
    assert validate(loads_game(dumps_game(g))) == g


def test_save_and_load(tmp_path):
    path = tmp_path / "chsh.json"
    save_game(chsh(), path)
    assert read_game(path) == chsh()
    doc = json.loads(path.read_text())
    assert doc["predicate"]["type"] == "xor"
    assert doc["pi"][0] == [0, 0, "1/4"]


def test_labels_survive_round_trip():
    g = magic_square()
    assert validate(loads_game(dumps_game(g))).labels == g.labels


def test_missing_predicate_is_schema_violation():
    doc = game_to_dict(chsh())
    del doc["predicate"]
    with pytest.raises(SchemaViolation):
        loads_game(json.dumps(doc))


def test_negative_entry_in_file(tmp_path):
    doc = game_to_dict(chsh())
    doc["pi"][0][2] = -0.1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(NegativeProbability):
        read_game(path)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        loads_game('{"nS": 1,\n "nT": }')
    assert info.value.line == 2


def test_bad_probability_string():
    doc = game_to_dict(chsh())
    doc["pi"][0][2] = "one quarter"
    with pytest.raises(ParseError) as info:
        loads_game(json.dumps(doc))
    assert info.value.field == "pi/0"

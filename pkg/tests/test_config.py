import numpy as np

from nlgames.config import override_tolerances, rng_stream, tolerances


def test_override_restores_defaults():
    before = tolerances()
    with override_tolerances(state_norm=1e-3) as t:
        assert t.state_norm == 1e-3
        assert tolerances().state_norm == 1e-3
    assert tolerances() == before


def test_streams_reproducible_and_independent():
    a = rng_stream(7, "xor-restart", 0).standard_normal(4)
    b = rng_stream(7, "xor-restart", 0).standard_normal(4)
    c = rng_stream(7, "xor-restart", 1).standard_normal(4)
    d = rng_stream(7, "jl", 0).standard_normal(4)
    e = rng_stream(8, "xor-restart", 0).standard_normal(4)
    assert np.array_equal(a, b)
    for other in (c, d, e):
        assert not np.allclose(a, other)

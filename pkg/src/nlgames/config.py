"""Numerical tolerances and seeded random streams.

All tolerance constants used by the solvers live in :class:`Tolerances`.
Override them for a block of code with :func:`override_tolerances`::

    with override_tolerances(state_norm=1e-8):
        win_probability(game, strategy)
"""

from __future__ import annotations

import contextlib
import dataclasses
import zlib

import numpy as np


@dataclasses.dataclass(frozen=True)
class Tolerances:
    probability: float = 1e-12      # sum of pi, probability comparisons
    state_norm: float = 1e-10       # |psi| = 1
    measurement: float = 1e-10      # hermiticity, PSD, completeness of POVMs
    observable: float = 1e-9        # A^2 = 1
    clamp: float = 1e-9             # clamp window for reported probabilities
    orthogonality: float = 1e-12    # KS vector sets
    jacobi: float = 1e-13           # off-diagonal / matrix norm at convergence
    eigenvalue: float = 1e-10       # projective rounding: eigenvalues this close to 0 or 1 are kept
    zero_amplitude: float = 1e-12   # extraction: below this an amplitude is zero
    nonzero_amplitude: float = 1e-6  # extraction: above this it is nonzero


_current = Tolerances()


def tolerances() -> Tolerances:
    return _current


@contextlib.contextmanager
def override_tolerances(**changes):
    global _current
    saved = _current
    _current = dataclasses.replace(saved, **changes)
    try:
        yield _current
    finally:
        _current = saved


def rng_stream(seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Independent generator for the named stream ``(name, index)`` under ``seed``.

    Streams with different names or indices never share state, so the output
    of one operation does not depend on how many draws another one made.
    """
    key = (zlib.crc32(name.encode("utf-8")), int(index))
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))

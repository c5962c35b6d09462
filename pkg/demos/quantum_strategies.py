"""Simulating the built-in quantum strategies."""

import math

from nlgames import (
    builtin_chsh,
    builtin_magic_square,
    builtin_odd_cycle,
    chsh,
    magic_square,
    odd_cycle,
    simulate,
)
from nlgames.quantum import correlation, magic_square_observables, SIGMA_X
import numpy as np

# %% CHSH: projectors at angles 0, pi/4 for Alice and +-pi/8 for Bob
res = simulate(chsh(), builtin_chsh())
print("CHSH", res.win_probability, "vs cos^2(pi/8) =", math.cos(math.pi / 8) ** 2)
for s, t, p, w in res.per_pair:
    print(f"  (s={s}, t={t}) pi={p} win={w:.10f}")

# %% odd cycle: every question pair is answered correctly with the same probability
for n in (3, 5, 7):
    res = simulate(odd_cycle(n), builtin_odd_cycle(n))
    wins = {round(w, 12) for *_, w in res.per_pair}
    print(f"odd cycle {n}: {res.win_probability:.10f}, per-pair values {wins}")

# %% magic square: two singlets and a square of commuting Pauli products
obs = magic_square_observables()
print("row 0 product is identity:", np.allclose(obs[0] @ obs[1] @ obs[2], np.eye(4)))
print("column 0 product is -identity:", np.allclose(obs[0] @ obs[3] @ obs[6], -np.eye(4)))
print("magic square win probability", simulate(magic_square(), builtin_magic_square()).win_probability)

# %% correlations on the singlet
singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
print("<sx (x) sx> on the singlet:", correlation(singlet, SIGMA_X, SIGMA_X))

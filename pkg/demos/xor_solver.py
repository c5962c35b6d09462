"""Quantum values of XOR games, certified by a dual bound."""

import math

import numpy as np

from nlgames import chsh, odd_cycle, quantum_value_xor
from nlgames.classical import classical_value_xor
from nlgames.generators import random_xor_game

# %% CHSH reaches Tsirelson's value; the dual bound pins it to ~1e-15
r = quantum_value_xor(chsh().xor_form)
print(f"value {r.value:.15f}  bound {r.dual_bound:.15f}  gap {r.gap:.1e}")
print("optimal correlations\n", r.vectors.gram().round(6))

# %% odd cycles against cos^2(pi/4n)
for n in (3, 5, 7, 9):
    r = quantum_value_xor(odd_cycle(n).xor_form)
    print(n, r.value, math.cos(math.pi / (4 * n)) ** 2, f"gap {r.gap:.1e}")

# %% a random game: quantum beats classical, seeds make it reproducible
x = random_xor_game(np.random.default_rng(7), 5, 5).xor_form
c = classical_value_xor(x)
q = quantum_value_xor(x, restarts=16, seed=42)
print("classical", c.value_float, "quantum", q.value, "iterations", q.iterations)

"""Exact classical values of the standard games."""

# %% CHSH and the odd cycles: enumerate one player, let the other best-respond
from nlgames import chsh, classical_value, magic_square, odd_cycle

r = classical_value(chsh())
print("CHSH", r.value, "with", r.strategy, f"({r.work_factor} candidates)")

for n in (3, 5, 7, 9):
    r = classical_value(odd_cycle(n))
    print(f"odd cycle {n}:", r.value)

# %% the magic square: 8 answers per line question, but only 2^9 Bob strategies
r = classical_value(magic_square())
print("magic square", r.value, "enumerating", r.enumerated_side, r.work_factor)

# %% XOR games have a faster path over sign vectors; both paths agree
import numpy as np
from nlgames.classical import classical_value_xor
from nlgames.generators import random_xor_game

g = random_xor_game(np.random.default_rng(1), 6, 8, denominator=48)
print(classical_value(g).value, classical_value_xor(g.xor_form).value)

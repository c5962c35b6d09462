"""Quantum values bounded by classical ones; hyperplane rounding backwards."""

import numpy as np

from nlgames import check_bounds, chsh, g_function, gamma_constants, odd_cycle, quantum_value_xor, rounding_expectation
from nlgames.bounds import report_csv, sample_rounding
from nlgames.generators import random_xor_game

c = gamma_constants()
print(f"gamma1 = {c.gamma1:.10f}, gamma2 = {c.gamma2:.10f}, residual {c.residual:.1e}")

# %% g(w_c) is tight on CHSH and the odd cycles
for name, g in (("chsh", chsh()), ("c5", odd_cycle(5))):
    r = check_bounds(g)
    print(name, r.omega_q, g_function(r.omega_c), r.ratio)

# %% rounding the optimal CHSH vectors recovers the classical optimum
x = chsh().xor_form
vs = quantum_value_xor(x).vectors
print("expected rounded value", rounding_expectation(x, vs))
print("best of 1000 samples", sample_rounding(x, vs, seed=0, samples=1000).value)

# %% a sweep over random games, as CSV
rng = np.random.default_rng(0)
rows = [(f"random{i}", check_bounds(random_xor_game(rng, 3, 3, denominator=60))) for i in range(5)]
print(report_csv(rows))

"""Vectors to observables and back, and shrinking the dimension with random projections."""

import numpy as np

from nlgames import chsh, odd_cycle, quantum_value_xor, strategy_to_vectors, vectors_to_strategy, win_probability
from nlgames.tsirelson import clifford_generators, correlation_table, entanglement_report, jl_reduce, reduced_value

# %% anticommuting generators on ceil(m/2) qubits
fam = clifford_generators(5)
print(fam.m, "generators of dimension", fam.dim)

# %% the optimal CHSH vectors become a qubit strategy
q = quantum_value_xor(chsh().xor_form)
o = vectors_to_strategy(q.vectors)
print("lifted strategy wins with", win_probability(chsh(), o))
print("max |correlation - <u,v>| =", np.abs(correlation_table(o) - q.vectors.gram()).max())
back = strategy_to_vectors(o)
print("round trip keeps the table:", np.allclose(back.gram(), q.vectors.gram()))

# %% random projection of the odd-cycle vectors (forced, they already fit)
x = odd_cycle(5).xor_form
q = quantum_value_xor(x)
red = jl_reduce(q.vectors, 0.05, seed=0, allow_identity=False)
print(red.report())
print("value", q.value, "-> reduced", reduced_value(x, red))
print(entanglement_report(x))

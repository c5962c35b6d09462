"""From perfect quantum strategies to perfect classical ones (binary games)."""

import numpy as np

from nlgames import evaluate_deterministic, extract_classical_from_perfect, make_projective, win_probability
from nlgames.verification import planted_perfect_instance
from nlgames.quantum import QuantumStrategy, builtin_chsh
from nlgames import chsh

# %% rounding a non-projective measurement can only help
q = builtin_chsh()
half = (0.5 * np.eye(2), 0.5 * np.eye(2))
blurred = QuantumStrategy(2, 2, q.psi, [half, q.alice[1]], q.bob)
sharp = make_projective(chsh(), blurred)
print("before", win_probability(chsh(), blurred), "after", win_probability(chsh(), sharp))

# %% a planted perfect strategy, hidden behind random local unitaries
rng = np.random.default_rng(3)
g, o = planted_perfect_instance(rng)
print("quantum win probability", win_probability(g, o))
d = extract_classical_from_perfect(g, o)
print("extracted", d, "value", evaluate_deterministic(g, d))

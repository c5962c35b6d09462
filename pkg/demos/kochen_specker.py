"""The shipped Kochen-Specker set: no coloring, exact classical value, perfect quantum play."""

from nlgames import (
    UNCOLORABLE,
    builtin_ks,
    kochen_specker,
    ks_classical_value,
    ks_color_search,
    shipped_ks_set,
    win_probability,
)

ks = shipped_ks_set()      # validated on load: unit vectors, orthogonal triples, covered pairs
print(len(ks.vectors), "vectors,", len(ks.triples), "triples")

# %% backtracking search for a {0,1}-coloring
stats = {}
res = ks_color_search(ks, stats)
print(res, "after", stats["nodes"], "search nodes", res is UNCOLORABLE)

# %% the classical value is 1 - 1/(3 * #triples): a single question is always lost
r = ks_classical_value(ks)
print("classical value", r.value)

# %% shared maximally entangled qutrits win every round
g = kochen_specker(ks)
print("quantum win probability", win_probability(g, builtin_ks(ks)))

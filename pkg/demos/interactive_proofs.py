"""Graph coloring and 3-SAT games."""

import itertools

from nlgames import (
    CnfFormula,
    Graph,
    builtin_threesat_magic,
    classical_value,
    graph_coloring,
    hamming_graph,
    magic_square_formula,
    three_sat,
    win_probability,
)

# %% coloring games: odd cycles are not 2-colorable
print("C5, 2 colors:", classical_value(graph_coloring(Graph.cycle(5), 2)).value)
print("triangle, 3 colors:", classical_value(graph_coloring(Graph.cycle(3), 3)).value)
h = hamming_graph(4)
print("Hamming graph n=4:", h.n_vertices, "vertices,", len(h.edges), "edges")

# %% a satisfiable formula
f = CnfFormula(3, (((0, False), (1, False), (2, False)),))
print("x or y or z:", classical_value(three_sat(f)).value)

# %% the magic-square formula: unsatisfiable, yet won with certainty quantumly
f = magic_square_formula()
print(len(f.clauses), "clauses; satisfiable:", any(f.satisfied_by(x) for x in itertools.product((0, 1), repeat=9)))
g = three_sat(f)
print("classical value", classical_value(g).value)
print("quantum value", win_probability(g, builtin_threesat_magic()))

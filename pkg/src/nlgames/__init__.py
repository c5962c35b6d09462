"""Nonlocal games toolkit.

Classical values by exhaustive search, quantum values of XOR games with a
certified dual bound, exact simulation of quantum strategies and the bounds
relating the two.
"""

from .bounds import check_bounds, g_function, gamma_constants, rounding_expectation, sample_rounding
from .classical import UNCOLORABLE, classical_value, classical_value_xor, ks_classical_value, ks_color_search
from .errors import NonlocalGameError
from .game import (
    DeterministicStrategy,
    GameSpec,
    ValidatedGame,
    XorGame,
    evaluate_deterministic,
    load_game,
    read_game,
    save_game,
    trivial_value,
    validate,
)
from .generators import (
    CnfFormula,
    Graph,
    KsVectorSet,
    chsh,
    graph_coloring,
    hamming_graph,
    kochen_specker,
    magic_square,
    magic_square_formula,
    odd_cycle,
    shipped_ks_set,
    three_sat,
    xor_game,
)
from .quantum import (
    ObservableStrategy,
    QuantumStrategy,
    builtin_chsh,
    builtin_ks,
    builtin_magic_square,
    builtin_odd_cycle,
    builtin_threesat_magic,
    correlation,
    extract_classical_from_perfect,
    make_projective,
    simulate,
    win_probability,
)
from .tsirelson import clifford_generators, entanglement_report, jl_reduce, strategy_to_vectors, vectors_to_strategy
from .xor_solver import VectorStrategy, dual_upper_bound, quantum_value_xor

__version__ = "0.1.0"

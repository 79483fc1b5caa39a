"""Ordered dualization of monotone CNFs and Fredman-Khachiyan duality testing."""
from .cnf import (
    ZERO,
    MonotoneCnf,
    VariableOrdering,
    delta,
    delta_conditioned,
    delta_profile,
    evaluate,
    is_prime_implicant,
    minimize,
    restrict,
    term_key,
)
from .enumeration import (
    BudgetExceeded,
    DualizeStats,
    RhoStrategy,
    dualize,
    extend_to_smallest,
    measure_delay,
    r_dualize,
    smallest_prime_implicant,
)
from .fk import (
    Certificate,
    DualPair,
    Witness,
    certificate_bit_length,
    check_dual_A,
    check_dual_B,
    chi,
    replay_certificate,
)
from .io import parse_hypergraph, read_hypergraph
from .oracle import brute_degeneracy, brute_dual_check, brute_transversals
from .structure import (
    analyze,
    gyo_reduce,
    heuristic_td,
    is_alpha_acyclic,
    ordering_from_gyo,
    ordering_from_td2,
    smallest_last_ordering,
)

__version__ = "0.1.0"

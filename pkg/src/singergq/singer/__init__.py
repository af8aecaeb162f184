from .cohomology import fiber_bound, h2_bruteforce, h2_order_paper, h2_oracle_order, schur_multiplier_order
from .heisenberg import (
    BLCandidate,
    CommutingVector,
    HeisenbergModel,
    SingerGroupRecord,
    classify_abelian_quotients,
    commuting_vector,
    cross_line_overlap,
    enumerate_bl,
    heisenberg,
    lift_all,
    lift_eta,
    prime_case_census,
    scalar_candidate,
    total_count,
    total_count_enumerated,
)
from .invariants import (
    directions_of_set,
    distinct_multisets,
    even_char_invariant_count,
    hr_estimate,
    partition_count,
    partition_witness_search,
    partitions,
    zeta,
)

__all__ = [
    "BLCandidate",
    "CommutingVector",
    "HeisenbergModel",
    "SingerGroupRecord",
    "classify_abelian_quotients",
    "commuting_vector",
    "cross_line_overlap",
    "directions_of_set",
    "distinct_multisets",
    "enumerate_bl",
    "even_char_invariant_count",
    "fiber_bound",
    "h2_bruteforce",
    "h2_oracle_order",
    "h2_order_paper",
    "heisenberg",
    "hr_estimate",
    "lift_all",
    "lift_eta",
    "partition_count",
    "partition_witness_search",
    "partitions",
    "prime_case_census",
    "scalar_candidate",
    "schur_multiplier_order",
    "total_count",
    "total_count_enumerated",
    "zeta",
]

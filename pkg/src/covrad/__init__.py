"""Covering radii of constrained systems and the quantized-constraint concatenation pipeline."""

from covrad.entropy import entropy_hq, entropy_hq_inverse
from covrad.essential import (
    EpsRadiusEstimate,
    SlidingBlockRule,
    analytic_essential_0k,
    apply_sliding_block,
    estimate_eps_radius,
    estimate_sbc_mismatch,
    rll0k_rule,
    rll0k_rule_mismatch,
)
from covrad.graphs import (
    ConstrainedSystem,
    LabeledGraph,
    build_from_forbidden_words,
    build_full_shift,
    build_repetition,
    build_rll_0k,
    build_rll_d_inf,
    capacity,
    determinize,
    is_primitive,
    make_system,
    trim_to_essential,
)
from covrad.lp import LinearProgram, LPSolution, solve
from covrad.markov import MarkovChain, markov_from_edge_probs, product_graph, sample_word, uniform_bernoulli
from covrad.markov_bound import dinfty_sandwich, formulate, solve_bound
from covrad.qcc import make_repetition_code, make_table_code, qcc_experiment, qcc_transmit
from covrad.quantizer import (
    covering_radius_exact,
    covering_radius_upper_curve,
    enumerate_language,
    quantize,
    quantize_distance,
    sphere_covering_lower_bound,
)

__version__ = "0.1.0"

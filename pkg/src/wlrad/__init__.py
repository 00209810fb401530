"""Weisfeiler-Leman colorings of graph samples and Rademacher bounds over their color classes."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    GenBoundInputs,
    LossSpec,
    ce_lipschitz_constant,
    dudley_bound,
    dudley_first_term,
    general_upper_bound,
    generalization_bound,
    lower_bound_uniform,
    rescaled_ce_lipschitz,
    stability_bound,
    upper_bound_colors,
)
from .coloring import (
    COLORINGS,
    ColoringFunction,
    InfeasibleColoringError,
    NodeColoring,
    degree_coloring,
    exact_iso_coloring,
    is_finer,
    trivial_coloring,
    wl_refine,
)
from .graph_core import (
    AttributedGraph,
    GraphFormatError,
    GraphSample,
    RandomSampleSpec,
    generate_sample,
    parse_jsonl,
    parse_tu_dataset,
    permute_nodes,
)
from .partition import MultiplicityDiff, SamplePartition, multiplicity_diff, partition_sample
from .rademacher import (
    RademacherEstimate,
    brute_force_rademacher,
    exact_rademacher,
    expected_abs_rademacher_sum,
    mc_rademacher,
)

"""Exact classification of integer linear homogeneous systems, solution
counting in finite ground sets, extremal numbers, and seeded threshold
experiments on binomial random subsets of [n]."""

from .errors import (
    BudgetExhaustedError,
    IllDefinedDensityError,
    RadoError,
    ScaleCapError,
)
from .experiments import (
    EstimateRow,
    MomentReport,
    ThresholdCurve,
    TrialConfig,
    arrow_epsilon,
    arrow_s,
    coloring_avoids,
    estimate_probability,
    expected_count_exact,
    find_avoiding_coloring,
    sample_set,
    smallc_reference,
    threshold_sweep,
    variance_exact,
    wilson_interval,
    write_curve_csv,
)
from .extremal import (
    ExtremalResult,
    PiPoint,
    SupersaturationReport,
    extremal_number,
    max_free_subset,
    pi_sequence,
    supersaturation_min,
)
from .gallery import arithmetic_progression, schur, sidon, single_equation
from .matrix import IntMatrix, kernel_basis, matrix_rank, row_dependencies, rowspace_contains
from .partitions import (
    ColumnPartition,
    contract,
    expand_by_pattern,
    is_nontrivial,
    partitions_of,
    pattern_of,
    realized_patterns,
)
from .solutions import (
    DegreeProfile,
    SolutionClass,
    contains_solution,
    count_solutions,
    enumerate_solutions,
    ground_set,
    interval,
    max_ell_degree,
    patterns_realized_in,
    support,
)
from .systems import (
    ClassificationReport,
    DensityReport,
    LinearSystem,
    Verdict,
    classify,
    column_condition,
    is_abundant,
    is_density_regular,
    is_invariant,
    is_irredundant,
    is_partition_regular,
    is_positive,
    max_density,
    max_one_density,
    rank_contribution,
    stacked_form,
    subsystem,
)

__version__ = "0.1.0"

"""Substitution subshift of the Grigorchuk group, its Schreier graphs and Laplacians."""

from .group import (
    GENERATORS,
    GraphDiff,
    GraphShapeError,
    LabeledGraph,
    WindowBoundaryError,
    act,
    act_word,
    compare_graphs,
    edge_census,
    graph_from_window,
    is_transitive,
    kappa,
    level_permutations,
    lysenok_relators,
    movers,
    orbit_coincidence_check,
    relator_check,
    schreier_graph,
    subshift_generator,
    subshift_word,
)
from .language import (
    PartitionError,
    PartitionResult,
    PowerReport,
    SubwordSet,
    block_occurrences,
    complexity_closed_form,
    enumerated_complexity,
    factor_counts,
    max_power_scan,
    n_partition,
    right_special,
    special_sequence_window,
    stable_subwords,
    subwords,
)
from .spectra import (
    MeasureEstimate,
    Params,
    SpectralData,
    TridiagonalOperator,
    dichotomy_table,
    eigenvalues,
    ids_comparison,
    ids_distribution,
    ids_sup_distance,
    jacobi_from_window,
    laplacian_from_graph,
    level_operator,
    level_spectrum,
    measure_estimate,
    nesting_check,
    window_operator,
)
from .words import (
    ETA_AUTOMATON,
    TAU,
    ZETA,
    OutputAutomaton,
    PointedWord,
    SizeGuardError,
    Substitution,
    apply,
    automaton_letter,
    automaton_prefix,
    eta_prefix,
    iterate,
    letter_at,
    level_word,
    spacer,
    zeta_power,
)

__version__ = "0.1.0"

"""Biclique search lab for bipartite graphs.

Find complete bipartite subgraphs of prescribed dimensions, measure how
expensive the search was in explored candidate combinations, and study
where random ensembles turn hard through the order parameter
pi = z_max / |V|.
"""

from .bigraph import (
    AdjacencyMatrix,
    Biclique,
    BipartiteGraph,
    GramMatrix,
    GramSide,
    GraphParseError,
    ObservationLog,
    adjacency_matrix,
    adjacent_to,
    from_edge_list,
    from_observation_log,
    gram,
    gram_t,
    parse_observation_log,
    spans_biclique,
    to_edge_list,
)
from .dtree import (
    DecisionTree,
    EvalReport,
    Rule,
    TrainParams,
    evaluate,
    extract_rules,
    kfold_cv,
    predict,
    train_c45,
)
from .features import (
    FeatureVector,
    Label,
    OrderParameter,
    extract_features,
    label_instance,
    order_parameter,
)
from .phaselab import (
    DistanceSweepResult,
    EnsembleConfig,
    PowerLawGenerator,
    SweepResult,
    UniformGenerator,
    gen_powerlaw,
    gen_uniform,
    generate_instance,
    run_distance_sweep,
    run_sweep,
    write_distance_csv,
    write_sweep_csv,
)
from .solver import (
    UNLIMITED,
    BlacklistMode,
    SearchBudget,
    SolveReport,
    brute_force_oracle,
    decide,
    find_biclique,
    find_max_weight_of_size,
    size_max_via_gram,
    weight_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "Biclique",
    "BipartiteGraph",
    "BlacklistMode",
    "DecisionTree",
    "DistanceSweepResult",
    "EnsembleConfig",
    "EvalReport",
    "FeatureVector",
    "GramMatrix",
    "GramSide",
    "GraphParseError",
    "Label",
    "ObservationLog",
    "OrderParameter",
    "PowerLawGenerator",
    "Rule",
    "SearchBudget",
    "SolveReport",
    "SweepResult",
    "TrainParams",
    "UNLIMITED",
    "UniformGenerator",
    "adjacency_matrix",
    "adjacent_to",
    "brute_force_oracle",
    "decide",
    "evaluate",
    "extract_features",
    "extract_rules",
    "find_biclique",
    "find_max_weight_of_size",
    "from_edge_list",
    "from_observation_log",
    "gen_powerlaw",
    "gen_uniform",
    "generate_instance",
    "gram",
    "gram_t",
    "kfold_cv",
    "label_instance",
    "order_parameter",
    "parse_observation_log",
    "predict",
    "run_distance_sweep",
    "run_sweep",
    "size_max_via_gram",
    "spans_biclique",
    "to_edge_list",
    "train_c45",
    "weight_upper_bound",
    "write_distance_csv",
    "write_sweep_csv",
]

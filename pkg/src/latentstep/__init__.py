"""latentstep: random-walk factorization of weighted undirected graphs.

Approximates one step of the random walk on a graph A by three steps
through m latent nodes, yielding a soft clustering of the nodes and a
symmetric rank-m reconstruction of the graph. The inter-cluster edge
pattern is steered by a small latent graph that can be held fixed
(homophilous, bipartite, tripartite targets) or trained jointly.
"""

from .graphs import (
    AdjacencyMatrix,
    TransitionMatrix,
    ValidationError,
    degrees,
    entropy,
    load_matrix_text,
    row_normalize,
    save_matrix_text,
    total_normalize,
)
from .model import (
    BipartiteGraph,
    LatentGraph,
    LatentStepModel,
    ParameterSet,
    build_bipartite,
    build_latent_graph,
    data_term,
    diagonal_latent,
    hard_assignments,
    loss,
    loss_gradient,
    make_loss_function,
    offdiagonal_latent,
    paired_latent,
    reconstruct,
    soft_assignments,
    transition,
)
from .optimize import FitConfig, FitResult, MinimizeResult, fit, init_params, minimize
from .ingest import (
    ARPABET_PHONEMES,
    PronunciationMap,
    bigram_graph,
    bundled_dict_path,
    bundled_word_list_path,
    gen_bicliques,
    letter_bigram_graph,
    load_edge_list,
    load_word_list,
    parse_pronouncing_dict,
    phoneme_bigram_graph,
)
from .evaluate import (
    CutReport,
    GroundTruth,
    affinity_margin,
    cluster_accuracy,
    cut_report,
    letter_ground_truth,
    load_ground_truth,
    phoneme_ground_truth,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "ARPABET_PHONEMES",
    "BipartiteGraph",
    "CutReport",
    "FitConfig",
    "FitResult",
    "GroundTruth",
    "LatentGraph",
    "LatentStepModel",
    "MinimizeResult",
    "ParameterSet",
    "PronunciationMap",
    "TransitionMatrix",
    "ValidationError",
    "affinity_margin",
    "bigram_graph",
    "build_bipartite",
    "build_latent_graph",
    "bundled_dict_path",
    "bundled_word_list_path",
    "cluster_accuracy",
    "cut_report",
    "data_term",
    "degrees",
    "diagonal_latent",
    "entropy",
    "fit",
    "gen_bicliques",
    "hard_assignments",
    "init_params",
    "letter_bigram_graph",
    "letter_ground_truth",
    "load_edge_list",
    "load_ground_truth",
    "load_matrix_text",
    "load_word_list",
    "loss",
    "loss_gradient",
    "make_loss_function",
    "minimize",
    "offdiagonal_latent",
    "paired_latent",
    "parse_pronouncing_dict",
    "phoneme_bigram_graph",
    "phoneme_ground_truth",
    "reconstruct",
    "row_normalize",
    "save_matrix_text",
    "soft_assignments",
    "total_normalize",
    "transition",
]

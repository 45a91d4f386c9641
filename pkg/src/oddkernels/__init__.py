"""Graph kernels over canonically ordered shortest-path DAG decompositions."""

from .bigdag import (
    Big2Dag,
    BigDag,
    bigdag_from_stats,
    build_big2dag,
    build_bigdag,
    kernel_big2dag,
    st_big2dag,
    structural_bigdag,
)
from .decompose import DecompDag, decompose, decompose_all
from .errors import FormatError, InternError, LoadError, OddKernelError
from .features import (
    FeatureStats,
    KernelConfig,
    SparseFeatureVector,
    apply_weighting,
    expanded_feature_map,
    feature_vector,
    st_feature_stats,
    stplus_feature_stats,
)
from .graphs import (
    Dataset,
    LabeledGraph,
    dataset_stats,
    load_edge_list,
    load_tu_dataset,
    preprocess_self_loops,
    write_edge_list,
)
from .gram import GramMatrix, dot, gram, min_eigenvalue, normalize
from .oracle import oracle_c_st, oracle_st_kernel, oracle_stplus_kernel
from .ordering import CodeInterner, OrderedDag, canonical_codes, tree_visit
from .trees import ExplicitTree

__version__ = "0.1.0"

__all__ = [
    "Big2Dag",
    "BigDag",
    "CodeInterner",
    "Dataset",
    "DecompDag",
    "ExplicitTree",
    "FeatureStats",
    "FormatError",
    "GramMatrix",
    "InternError",
    "KernelConfig",
    "LabeledGraph",
    "LoadError",
    "OddKernelError",
    "OrderedDag",
    "SparseFeatureVector",
    "apply_weighting",
    "bigdag_from_stats",
    "build_big2dag",
    "build_bigdag",
    "canonical_codes",
    "dataset_stats",
    "decompose",
    "decompose_all",
    "dot",
    "expanded_feature_map",
    "feature_vector",
    "gram",
    "kernel_big2dag",
    "load_edge_list",
    "load_tu_dataset",
    "min_eigenvalue",
    "normalize",
    "oracle_c_st",
    "oracle_st_kernel",
    "oracle_stplus_kernel",
    "preprocess_self_loops",
    "st_big2dag",
    "st_feature_stats",
    "stplus_feature_stats",
    "structural_bigdag",
    "tree_visit",
    "write_edge_list",
]

"""Degree-corrected distribution-free blockmodel tools for weighted networks.

Generative sampling with per-node degree weights and arbitrary edge-weight
families, spectral community detection with (nDFA) and without (DFA) row
normalization, permutation-exact error metrics, bound evaluation, network
file I/O, and a reproducible experiment harness.
"""

from .clustering import KMeansConfig, KMeansResult, kmeans
from .detect import DetectionOutput, detect_both, dfa, ndfa
from .metrics import bound_report, error_rate, worst_community_error
from .model import (
    Bernoulli,
    Binomial,
    ConnectivityMatrix,
    Heterogeneity,
    Labeling,
    ModelParams,
    Normal,
    Poisson,
    WeightedAdjacency,
    expected_adjacency,
    make_distribution,
    sample_adjacency,
    validate_params,
    variance_bound,
)
from .netio import NetworkDataset, add_noise, load_dataset, parse_gml
from .spectral import SpectralEmbedding, leading_eigs, row_normalize

__version__ = "0.1.0"

__all__ = [
    "Bernoulli",
    "Binomial",
    "ConnectivityMatrix",
    "DetectionOutput",
    "Heterogeneity",
    "KMeansConfig",
    "KMeansResult",
    "Labeling",
    "ModelParams",
    "NetworkDataset",
    "Normal",
    "Poisson",
    "SpectralEmbedding",
    "WeightedAdjacency",
    "add_noise",
    "bound_report",
    "detect_both",
    "dfa",
    "error_rate",
    "expected_adjacency",
    "kmeans",
    "leading_eigs",
    "load_dataset",
    "make_distribution",
    "ndfa",
    "parse_gml",
    "row_normalize",
    "sample_adjacency",
    "validate_params",
    "variance_bound",
    "worst_community_error",
]

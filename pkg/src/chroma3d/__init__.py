"""3D color codes with boundaries: lattices, CSS codes, matching decoder, sampling."""

from .colors import Color, MIXED_COLORS, MONO_COLORS, mixed
from .lattice import (
    ColorLattice,
    ValidationReport,
    build_cubic,
    build_tetrahedral,
    family_counts,
    validate,
)
from .code import (
    CssCode,
    PauliFrame,
    Syndrome,
    extract_code,
    logical_operators,
    logical_outcome,
    merge_face_to_cell,
    syndrome_of,
)
from .matching import DefectSet, Matching, MatchedPair, WeightedGraph, mwpm, syndrome_graph
from .decoder import ALL_PATHS, Correction, DecodingPath, Decoder
from .sampling import NoiseSpec, SamplingReport, run_monte_carlo, run_subset_sampling, subset_failure_rate
from .analysis import bench_decode, cross_threshold, pseudothreshold, subthreshold_exponent

__all__ = [
    "Color", "MIXED_COLORS", "MONO_COLORS", "mixed",
    "ColorLattice", "ValidationReport", "build_cubic", "build_tetrahedral",
    "family_counts", "validate",
    "CssCode", "PauliFrame", "Syndrome", "extract_code", "logical_operators",
    "logical_outcome", "merge_face_to_cell", "syndrome_of",
    "DefectSet", "Matching", "MatchedPair", "WeightedGraph", "mwpm", "syndrome_graph",
    "ALL_PATHS", "Correction", "DecodingPath", "Decoder",
    "NoiseSpec", "SamplingReport", "run_monte_carlo", "run_subset_sampling",
    "subset_failure_rate",
    "bench_decode", "cross_threshold", "pseudothreshold", "subthreshold_exponent",
]

__version__ = "0.1.0"

"""Exact construction and verification of mutually unbiased bases and Hadamards."""

from .constructions import (
    HomogeneousSpec,
    TorusFunction,
    check_planarity,
    difference_matrices,
    fourier_matrix,
    half_square_function,
    homogeneous_system,
    is_diff_uniform,
    is_perfect_nonlinear,
    mub_from_function,
    planar_family,
    prime_power_mub,
    shifted_fourier,
    square_function,
)
from .cyclotomic import CyclotomicInt
from .errors import (
    DomainError,
    MubkitError,
    PreconditionError,
    StructuralError,
    TooLargeError,
    UnsupportedDimensionError,
)
from .field import FiniteField, half_square
from .flatmat import FlatMatrix, RingMatrix, VectorSystem, inner, is_hadamard, schur, schur_power
from .group import AbelianGroup, character, character_sum_is_zero, group_add
from .lgraph import PairGraph, chromatic_number, clique_number, covers_complete, k_graph, l_graph
from .mubcheck import BasisSystem, MubVerdict, angle_sq, density_orthogonal, glavnaja_check, is_mub_system, normalize_to_muh
from .rds import CarryGroup, RelativeDifferenceSet, planar_to_rds, rds_to_planar, verify_rds
from .verdict import Verdict
from .welch import WelchReport, attains_welch, build_wset, is_t_design, max_mub_bound, welch_report

__version__ = "0.1.0"

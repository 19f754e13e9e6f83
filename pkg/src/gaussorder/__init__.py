"""Convertibility of two-mode Gaussian states under local Gaussian maps.

The package works entirely at the covariance-matrix level: states are 4x4
covariance matrices, local Gaussian completely positive maps are (M, G)
matrix pairs, and every transformation question is decided from the four
local-symplectic orbit invariants, with brute-force oracles to verify each
decision independently.
"""

from .channels import (
    GaussianCPMap,
    NoiseCondition,
    System1Map,
    apply_map,
    build_system1_map,
    cp_check,
    is_minimal_noise,
    noise_condition,
)
from .criteria import (
    MODE_REFLEXIVE_CLOSURE,
    MODE_STRICT,
    Ordering,
    RegionGrid,
    TransformDecision,
    TransformPair,
    accessible_region,
    compare,
    curve_intersections,
    decide_degenerate_general,
    decide_degenerate_local_1,
    decide_general,
    decide_local_1,
    decide_local_2,
    local_map_margin,
    step1_margin,
    step2_margin,
    step2_margin_poly,
)
from .exceptions import (
    DegenerateInvariantError,
    GaussOrderError,
    InvalidStateError,
    InvariantMismatchError,
    NotCompletelyPositiveError,
    NotSymplecticError,
    UncorrelatedStateError,
)
from .linalg import (
    J2,
    SIGMA,
    HermitianMatrix,
    det2,
    direct_sum,
    herm_eigvals,
    psd_check,
    random_sp2,
    rotation2,
    symplectic_check,
    symplectic_form,
)
from .oracle import ScanConfig, explicit_system1_check, region_scan_decide, sample_cp_map
from .states import (
    CovarianceMatrix,
    InvariantVector,
    NormalFormReduction,
    apply_local_symplectic,
    from_xi,
    invariants,
    reduce_to_normal_form,
    two_mode_squeezed,
    vacuum,
    validate,
)

__version__ = "0.1.0"

"""Coadjoint-orbit character formulas and equivariant Szego kernel
asymptotics on complex projective space, verified against exact
Hardy-space models."""

from .groups import (
    AssumptionViolation,
    CompactGroup,
    HalfWeight,
    InvariantMetric,
    UnsupportedGroupError,
    ad_on_cartan_complement,
    adjoint_action,
    build_group,
    coadjoint_action,
    group_volumes,
    group_volumes_quadrature,
    half_weight,
    haar_quadrature,
    trace_metric,
    torus_metric,
)
from .characters import (
    OrbitQuadrature,
    QuadratureDisagreement,
    WallEvaluationError,
    exp_jacobian,
    kirillov_character,
    orbit_quadrature,
    orbit_volume,
    peter_weyl_projector_weight,
    scaled_dimension,
    weyl_character,
    weyl_dimension,
)
from .models import (
    ConeDistance,
    LocusSample,
    ModelPoint,
    ProjectiveModel,
    build_model,
    find_locus_point,
    MODEL_IDS,
    sphere_distance,
    unit_point,
)
from .hardy import (
    IsotypicBasis,
    LevelBasis,
    diag_profile,
    equivariant_kernel,
    equivariant_kernel_log,
    isotypic_basis,
    isotypic_dim,
    level_basis,
    level_kernel,
    level_kernel_closed,
    off_orbit_value,
    orbit_separation,
    szego_kernel,
)
from .predictor import (
    Prediction,
    dimension_coefficient,
    gaussian_pair_exponent,
    leading_coefficient,
    phase_hessian,
    predict_near_diagonal,
)
from .harness import ExperimentConfig, FitResult, Row, run_suite

__version__ = "0.1.0"

"""Curvature invariants of totally real submanifolds of complex space forms
and numerical checks of upper bounds for Chen's invariant delta_q^Ric."""

from .config import Config, OptimizerConfig, load_config
from .curvature import (
    CurvatureTensor,
    MeanCurvatureData,
    PointClass,
    RicciData,
    SubmanifoldInstance,
    classify_pointwise,
    constant_curvature_tensor,
    gauss_curvature_tensor,
    mean_curvature,
    ricci_data,
    sectional_curvature,
)
from .delta import (
    DeltaReport,
    PlaneSectionSet,
    delta_from_tensor,
    delta_q_ric,
    haar_oracle,
    k_q_inf,
    plane_set_gradient,
    plane_set_objective,
    sup_ric,
)
from .errors import DeltaRicError, DomainError, InvariantError, PreconditionError, StructuralError
from .instances import block_minimal, random_totally_real, totally_geodesic, umbilical_non_j
from .verify import (
    EqualityCertificate,
    TheoremReport,
    check_theorem1,
    check_theorem2,
    corollary1,
    corollary2,
    step_inequality_33,
    step_inequality_46,
)

__version__ = "0.1.0"

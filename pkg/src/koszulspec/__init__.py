"""Taylor joint spectra of commuting matrix tuples and polar spectral mapping checks."""

from .errors import (
    CommutationError,
    DimensionError,
    DomainError,
    HypothesisError,
    IntegrityError,
    KoszulSpecError,
    NotApplicableError,
    ShapeError,
    SizeError,
    SpecError,
)
from .instances import (
    JointDiagonalSpec,
    conjugated_normal_tuple,
    diagonal_tuple,
    tensor_pair,
    truncated_weighted_shift,
)
from .koszul import (
    boundary_map,
    build_complex,
    chain_defect,
    enumerate_basis,
    laplacian,
    recursive_split_check,
)
from .matrix_kernel import (
    PolarFactors,
    eigenvalues,
    hermitian_function,
    min_singular_value,
    polar_decompose,
)
from .operator_tuple import (
    ClassificationReport,
    OperatorTuple,
    Verdict,
    classify,
    commutation_defects,
    is_log_hyponormal,
    is_p_hyponormal,
    satisfies_condition1,
)
from .scalar_function import ScalarFunction
from .spectral_mapping import (
    MappingReport,
    hausdorff,
    map_cloud,
    polynomial_map_verify,
    transform_tuple,
    verify_mapping,
)
from .taylor_spectrum import (
    AdjointWitness,
    Polydisc,
    SpectrumPoint,
    SpectrumPointCloud,
    extract_adjoint_witness,
    grid_scan,
    joint_adjoint_residual,
    polar_factor_residuals,
    singularity_residual,
    vasilescu_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AdjointWitness",
    "ClassificationReport",
    "CommutationError",
    "DimensionError",
    "DomainError",
    "HypothesisError",
    "IntegrityError",
    "JointDiagonalSpec",
    "KoszulSpecError",
    "MappingReport",
    "NotApplicableError",
    "OperatorTuple",
    "PolarFactors",
    "Polydisc",
    "ScalarFunction",
    "ShapeError",
    "SizeError",
    "SpecError",
    "SpectrumPoint",
    "SpectrumPointCloud",
    "Verdict",
    "boundary_map",
    "build_complex",
    "chain_defect",
    "classify",
    "commutation_defects",
    "conjugated_normal_tuple",
    "diagonal_tuple",
    "eigenvalues",
    "enumerate_basis",
    "extract_adjoint_witness",
    "grid_scan",
    "hausdorff",
    "hermitian_function",
    "is_log_hyponormal",
    "is_p_hyponormal",
    "joint_adjoint_residual",
    "laplacian",
    "map_cloud",
    "min_singular_value",
    "polar_decompose",
    "polar_factor_residuals",
    "polynomial_map_verify",
    "recursive_split_check",
    "satisfies_condition1",
    "singularity_residual",
    "tensor_pair",
    "transform_tuple",
    "truncated_weighted_shift",
    "vasilescu_residual",
    "verify_mapping",
]

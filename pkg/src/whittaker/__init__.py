"""Jacquet Whittaker functions on the generalized upper half-plane.

Evaluation by oscillatory quadrature for GL(2) and GL(3), the block
restriction from GL(n) to GL(m), Casimir operators by finite differences,
and a harness of reproducible numerical checks.
"""

__version__ = "0.1.0"

from .casimir import (
    DiffSpec,
    ScalarField,
    casimir_apply,
    casimir_eigenvalue,
    directional_derivative,
    power_field,
    tuple_compose,
)
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateFit,
    DimensionMismatch,
    EigenvalueInconsistency,
    EvaluationFailure,
    IrregularParameters,
    SingularMatrix,
    UnsupportedOrder,
    WhittakerError,
)
from .geometry import (
    HalfPlanePoint,
    IwasawaCoords,
    SiegelSet,
    block_embed,
    block_embed_matrix,
    iwasawa_decompose,
    long_weyl_element,
    measure_weight,
    siegel_contains,
)
from .jacquet import (
    QuadratureSpec,
    WhittakerConfig,
    WhittakerValue,
    integrand,
    whittaker_eval,
    whittaker_eval_y,
    whittaker_field,
)
from .langlands import (
    CharacterTuple,
    LanglandsParams,
    UnipotentElement,
    condition_residual,
    power_function,
    psi_eval,
    rho,
    shift_params,
)
from .restriction import RestrictionConfig, restrict, v_eval, v_field

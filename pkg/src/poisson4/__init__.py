"""Poisson bivectors on R^4 with prescribed Casimir pairs.

Construct the antisymmetric bracket matrix pi^{ij} = det(e_i, e_j, dC1, dC2)
for a pair of Casimir functions, verify the Poisson axioms by exact
polynomial identities, and recover the symplectic form on the leaves
numerically (frames, anchor solves, coefficients, Hamiltonian flow).
"""

from .expr import (
    Expr,
    ParseError,
    Point4,
    Var,
    equals,
    parse,
)
from .leaves import (
    LeafFormResult,
    LeafFrame,
    NonFiniteError,
    NotInImageError,
    SingularPointError,
    Trajectory,
    flow,
    leaf_form_coefficient,
    leaf_tangent_frame,
    solve_anchor,
)
from .models import (
    MODEL_NAMES,
    ModelSpec,
    RationalForm,
    catalogue_json,
    critical_locus_indicator,
    expected_bivector,
    leaf_chart_form,
    leaf_closed_form,
    model,
)
from .poisson import (
    Bivector,
    CasimirPair,
    ConformalFactorWarning,
    Covector4,
    DroppedConstantWarning,
    PoissonVerdict,
    StructureConstants,
    Vector4,
    bivector_to_json,
    bivector_to_json_dict,
    casimir_check,
    flaschka_ratiu,
    gradient,
    hamiltonian_field,
    is_poisson,
    jacobiator,
    linear_part,
    rank_at,
)

__version__ = "0.1.0"
SCHEMA_VERSION = 1

__all__ = [
    "Expr",
    "ParseError",
    "Point4",
    "Var",
    "equals",
    "parse",
    "Bivector",
    "CasimirPair",
    "Covector4",
    "Vector4",
    "PoissonVerdict",
    "StructureConstants",
    "ConformalFactorWarning",
    "DroppedConstantWarning",
    "gradient",
    "flaschka_ratiu",
    "jacobiator",
    "is_poisson",
    "casimir_check",
    "rank_at",
    "hamiltonian_field",
    "linear_part",
    "bivector_to_json",
    "bivector_to_json_dict",
    "MODEL_NAMES",
    "ModelSpec",
    "RationalForm",
    "model",
    "expected_bivector",
    "leaf_closed_form",
    "leaf_chart_form",
    "critical_locus_indicator",
    "catalogue_json",
    "LeafFrame",
    "LeafFormResult",
    "Trajectory",
    "SingularPointError",
    "NotInImageError",
    "NonFiniteError",
    "leaf_tangent_frame",
    "solve_anchor",
    "leaf_form_coefficient",
    "flow",
    "__version__",
    "SCHEMA_VERSION",
]

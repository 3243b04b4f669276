"""Usage-indexed bidirectional type checking."""

from .checker import (  # noqa: F401
    DeclResult, HoleInfo, Judgment, ModuleReport, check_decl_file, check_term,
    check_type, infer_term, normalize_param_term, types_equal,
    validate_parameter_context,
)
from .errors import (  # noqa: F401
    BRANCH_USAGE_MISMATCH, CANNOT_INFER, HOLE_NOT_ALLOWED, LIFT_OF_LINEAR,
    LINEARITY_VIOLATION, NOT_A_FUNCTION, PARAMETER_CONTEXT_VIOLATION,
    SHAPE_VIOLATION, TYPE_MISMATCH, UNBOUND_VARIABLE, Diagnostic,
    TypeCheckError, want_color,
)
from .indices import (  # noqa: F401
    MANY, ONE, ZERO, UsageVector, ctx_add, fits, index_add, index_mul,
    index_semiring, usage_max, usage_scale, zero_usage,
)

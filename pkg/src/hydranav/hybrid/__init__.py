"""Hybrid systems, structure-preserving maps, funnels, and their algebra."""

from .compose import (  # noqa: F401
    ComposeError, InterfaceMismatch, NonEmbeddingLeg, compose_parallel,
    compose_sequential,
)
from .expr import ExprError, Field, eval_expr, parse_expr, render_expr  # noqa: F401
from .iso import SizeLimitExceeded, conjugacy_iso_check, verify_conjugacy  # noqa: F401
from .system import (  # noqa: F401
    AffineMap, DirectedSystem, Edge, HybridSystem, Mode, Semiconjugacy,
    affine, affine_apply, affine_compose, affine_equal, affine_inverse,
    directed_from_doc, directed_to_doc, halton, identity_affine,
    load_directed, sample_box, save_directed,
)
from .validate import (  # noqa: F401
    Failure, Report, integrate_rk4, validate_directed, validate_semiconjugacy,
)

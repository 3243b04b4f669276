"""Checker error codes and diagnostic formatting.

Diagnostics render as `file:line:col: error[CODE]: message`.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass

from ..syntax.ast import Loc

# synthesis errors
UNBOUND_VARIABLE = "UnboundVariable"
NOT_A_FUNCTION = "NotAFunction"
SHAPE_VIOLATION = "ShapeViolation"
CANNOT_INFER = "CannotInfer"
# checking errors
TYPE_MISMATCH = "TypeMismatch"
LINEARITY_VIOLATION = "LinearityViolation"
BRANCH_USAGE_MISMATCH = "BranchUsageMismatch"
LIFT_OF_LINEAR = "LiftOfLinear"
PARAMETER_CONTEXT_VIOLATION = "ParameterContextViolation"
HOLE_NOT_ALLOWED = "HoleNotAllowed"


class TypeCheckError(Exception):
    def __init__(self, code: str, msg: str, loc: Loc | None = None):
        self.code = code
        self.msg = msg
        self.loc = loc
        super().__init__(f"error[{code}]: {msg}")


@dataclass(frozen=True)
class Diagnostic:
    file: str
    loc: Loc | None
    code: str
    message: str

    def render(self, color: bool = False) -> str:
        loc = self.loc or Loc(1, 1)
        head = f"{self.file}:{loc.line}:{loc.col}"
        tag = f"error[{self.code}]"
        if color:
            head = f"\x1b[1m{head}\x1b[0m"
            tag = f"\x1b[31m{tag}\x1b[0m"
        return f"{head}: {tag}: {self.message}"


def want_color(stream=None) -> bool:
    """HYDRANAV_COLOR=1/always forces on, 0/never off; otherwise tty."""
    env = os.environ.get("HYDRANAV_COLOR", "").lower()
    if env in ("1", "always", "yes", "on"):
        return True
    if env in ("0", "never", "no", "off"):
        return False
    stream = stream if stream is not None else sys.stderr
    return bool(getattr(stream, "isatty", lambda: False)())

"""Quasitypes: closed predicates used as subtypes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import TypeError
from ..kernel import Expr, FunTy, SetTy, TypeExpr, infer_type


@dataclass(frozen=True)
class Quasitype:
    carrier: TypeExpr
    pred: Expr
    nterm: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        if infer_type(self.pred) != SetTy(self.carrier):
            raise TypeError("quasitype predicate does not match its carrier")

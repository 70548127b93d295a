"""Finite standard-model semantics: full frames, the valuation function,
model enumeration and bounded validity checks."""

from .backend import HAVE_FASTCORE, backend_name, machine_for
from .frame import Atom, Frame, Func, build_full_frame, default_budget
from .models import (
    Interpretation, NoCounterexample, Refuted, check_validity_at_scale, count_models,
    enumerate_models, eval, eval_code, is_valid, sweep,
)
from .program import Program

__all__ = [
    "HAVE_FASTCORE", "backend_name", "machine_for", "Atom", "Frame", "Func",
    "build_full_frame", "default_budget", "Interpretation", "NoCounterexample",
    "Refuted", "check_validity_at_scale", "count_models", "enumerate_models",
    "eval", "eval_code", "is_valid", "sweep", "Program",
]

"""Compact notation: the registry of notational definitions, the `.alz`
parser, elaboration to kernel syntax and resugaring for display."""

from .registry import NotationDef, builtin_registry, expand, lookup, match
from .nterm import NTerm, desugar as desugar_nterm
from .parser import parse_module_file, parse_qtype, parse_term
from .elaborate import Scope, desugar_surface as desugar, elaborate
from .resugar import resugar
from .printer import show_expr, show_nterm
from .quasitype import Quasitype

__all__ = [
    "NotationDef", "builtin_registry", "expand", "lookup", "match", "NTerm",
    "desugar_nterm", "parse_module_file", "parse_qtype", "parse_term", "Scope",
    "desugar", "elaborate", "resugar", "show_expr", "show_nterm", "Quasitype",
]

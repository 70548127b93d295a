"""The module calculus: theories, developments, translations, obligations,
transport and the development graph."""

from .core import (
    Axiom, CheckedFinite, DefPkg, Development, ProofStatus, Refuted, Theory, ThmPkg,
    Trusted, Unchecked,
)
from .translate import Translation, identity_translation
from .certify import Obligation, certify, counts, entails, obligations
from .transport import transport, transport_definition, transport_theorem
from .workspace import Check, Workspace, load_texts
from .devgraph import DevGraph, Edge, build_graph, export_graph

__all__ = [
    "Axiom", "CheckedFinite", "DefPkg", "Development", "ProofStatus", "Refuted", "Theory",
    "ThmPkg", "Trusted", "Unchecked", "Translation", "identity_translation", "Obligation",
    "certify", "counts", "entails", "obligations", "transport", "transport_definition",
    "transport_theorem", "Check", "Workspace", "load_texts", "DevGraph", "Edge",
    "build_graph", "export_graph",
]

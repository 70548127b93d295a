"""Theories, developments and proof statuses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from ..kernel import BOOL, Const, Eq, Expr, Language, TypeExpr, show_type

# --------------------------------------------------------------------------
# proof statuses


class ProofStatus:
    kind = "?"

    @property
    def discharged(self) -> bool:
        return self.kind in ("Trusted", "CheckedFinite")

    def to_json(self) -> dict:
        return {"status": self.kind}


@dataclass(frozen=True)
class Trusted(ProofStatus):
    reference: str
    kind = "Trusted"

    def __str__(self):
        return f"Trusted({self.reference})"

    def to_json(self):
        return {"status": self.kind, "reference": self.reference}


@dataclass(frozen=True)
class CheckedFinite(ProofStatus):
    sizes: Tuple[Tuple[Tuple[str, int], ...], ...]
    models_checked: int
    kind = "CheckedFinite"

    def __str__(self):
        return f"CheckedFinite({_show_sizes(self.sizes)}, {self.models_checked} models)"

    def to_json(self):
        return {"status": self.kind, "sizes": [dict(s) for s in self.sizes],
                "models_checked": self.models_checked}


@dataclass(frozen=True)
class Refuted(ProofStatus):
    countermodel: dict
    kind = "Refuted"

    def __str__(self):
        return f"Refuted(sizes {self.countermodel.get('sizes')})"

    def to_json(self):
        return {"status": self.kind, "countermodel": self.countermodel}


@dataclass(frozen=True)
class Unchecked(ProofStatus):
    kind = "Unchecked"

    def __str__(self):
        return "Unchecked"


def _show_sizes(sizes) -> str:
    return "; ".join(",".join(f"{b}={n}" for b, n in s) for s in sizes)


# --------------------------------------------------------------------------
# theories


@dataclass
class Axiom:
    label: str
    sentence: Optional[Expr]  # None when opaque
    nterm: object = None
    caption: str = ""

    @property
    def opaque(self) -> bool:
        return self.sentence is None


@dataclass
class Theory:
    """A language and a list of axioms.  ``imports`` are definitions the
    axioms use that live in developments of an ancestor theory; they
    extend the language conservatively and are evaluated, not searched,
    by the finite semantics."""

    name: str
    language: Language
    axiom_list: List[Axiom] = field(default_factory=list)
    base: Optional[str] = None
    imports: List["DefPkg"] = field(default_factory=list)
    infix: set = field(default_factory=set)

    @property
    def axioms(self) -> List[Tuple[str, Optional[Expr]]]:
        return [(a.label, a.sentence) for a in self.axiom_list]

    @property
    def definitions(self) -> List[Tuple[str, TypeExpr, Optional[Expr]]]:
        return [(p.name, p.ty, p.definiens) for p in self.imports]

    def axiom(self, label: str) -> Axiom:
        for a in self.axiom_list:
            if a.label == label:
                return a
        raise KeyError(label)

    @property
    def finite(self) -> bool:
        return all(s is not None for _, s in self.axioms) and \
            all(d is not None for _, _, d in self.definitions)


# --------------------------------------------------------------------------
# developments


@dataclass
class DefPkg:
    label: str
    name: str
    ty: TypeExpr
    definiens: Optional[Expr]
    proof: ProofStatus
    nterm: object = None
    infix: bool = False
    caption: str = ""
    origin: str = ""  # development that introduced the package

    kind = "def"

    @property
    def const(self) -> Tuple[str, TypeExpr]:
        return (self.name, self.ty)

    @property
    def opaque(self) -> bool:
        return self.definiens is None

    def defining_axiom(self) -> Optional[Expr]:
        if self.definiens is None:
            return None
        return Eq(Const(self.name, self.ty), self.definiens)


@dataclass
class ThmPkg:
    label: str
    sentence: Optional[Expr]
    proof: ProofStatus
    nterm: object = None
    caption: str = ""
    origin: str = ""

    kind = "thm"

    @property
    def opaque(self) -> bool:
        return self.sentence is None


Package = Union[DefPkg, ThmPkg]


@dataclass
class Development:
    name: str
    bottom: Theory
    packages: List[Package] = field(default_factory=list)
    parent: Optional[str] = None
    visible: List[Package] = field(default_factory=list)
    hidden: List[str] = field(default_factory=list)  # names hidden by clashes

    def package(self, label: str) -> Package:
        for p in self.packages:
            if p.label == label:
                return p
        for p in self.visible:
            if p.label == label:
                return p
        raise KeyError(f"{label} is not in {self.name}")

    def all_packages(self) -> List[Package]:
        return self.visible + self.packages

    def definitions(self) -> List[DefPkg]:
        seen, out = set(), []
        for p in list(self.bottom.imports) + self.all_packages():
            if isinstance(p, DefPkg) and id(p) not in seen:
                seen.add(id(p))
                out.append(p)
        return out

    def theorems(self) -> List[ThmPkg]:
        return [p for p in self.all_packages() if isinstance(p, ThmPkg)]

    def language(self) -> Language:
        return self.bottom.language.extended(constants=[d.const for d in self.definitions()])

    def top_theory(self) -> "TopTheory":
        return TopTheory(self)

    def counts(self) -> Tuple[int, int]:
        d = sum(1 for p in self.packages if isinstance(p, DefPkg))
        return d, len(self.packages) - d


class TopTheory:
    """The bottom theory extended by every definition the development can
    see, in the shape the finite semantics expects."""

    def __init__(self, dev: Development):
        self.name = dev.name
        self.dev = dev
        self.language = dev.bottom.language
        self.axioms = dev.bottom.axioms
        self.definitions = [(p.name, p.ty, p.definiens) for p in dev.definitions()]

    @property
    def finite(self) -> bool:
        return all(s is not None for _, s in self.axioms) and \
            all(d is not None for _, _, d in self.definitions)

    def __reduce__(self):
        return (_top_from_parts, (self.name, self.language, self.axioms, self.definitions))


class _TopParts:
    def __init__(self, name, language, axioms, definitions):
        self.name, self.language, self.axioms, self.definitions = name, language, axioms, definitions
        self.finite = True


def _top_from_parts(name, language, axioms, definitions):
    return _TopParts(name, language, axioms, definitions)


def describe_const(name: str, ty: TypeExpr) -> str:
    return f"{name} : {show_type(ty)}"

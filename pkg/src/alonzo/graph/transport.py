"""Transporting packages along a certified translation."""

from __future__ import annotations

import copy
from typing import List, Optional, Sequence, Tuple

from ..errors import ClashError, TypeError
from ..kernel import infer_type
from ..notation import lexicon as lx
from ..notation.nterm import NConst, desugar
from .core import DefPkg, Development, Package, Refuted, ThmPkg, Trusted, Unchecked
from .translate import Translation

Item = Tuple[str, str, Optional[str]]  # (label, new label, new constant name)


def shared_constants(t: Translation, from_dev: Development, to_dev: Development) -> dict:
    """Definitions both developments see through the same package (stub
    constants of a common ancestor) translate to themselves."""
    dst = {id(p) for p in to_dev.definitions()}
    return {p.const: p.name for p in from_dev.definitions()
            if id(p) in dst and p.const not in t.const_map}


def _via(t: Translation):
    """The status a transported package inherits from its morphism."""
    if t.rejection is not None:
        bad = next((o.status for o in t.rejection.failures
                    if isinstance(o.status, Refuted)), None)
        if bad is not None:
            return bad
        return Unchecked()
    return Trusted(f"via {t.name}")


def transport_definition(t: Translation, pkg: DefPkg, label: str, name: str,
                         scope_consts: set, target: str) -> DefPkg:
    if pkg.const in t.const_map:
        raise ClashError(f"{pkg.name} already has an image under {t.name}")
    ty = t.carrier(pkg.ty)
    if (name, ty) in scope_consts:
        raise ClashError(f"{name} is already declared at this type in {target}")
    n = t.translate_nterm(pkg.nterm)
    definiens = desugar(n)
    if infer_type(definiens) != ty:
        raise TypeError(f"image of {pkg.label} does not have type {ty}")
    t.const_map[pkg.const] = NConst(name, ty)
    infix = pkg.infix or lx.is_infix_name(pkg.name)
    if infix and not lx.is_symbolic(name):
        lx.INFIX_WORDS.add(name)
    return DefPkg(label, name, ty, definiens, _via(t), n, infix,
                  pkg.caption, target)


def transport_theorem(t: Translation, pkg: ThmPkg, label: str, target: str) -> ThmPkg:
    n = t.translate_nterm(pkg.nterm)
    return ThmPkg(label, desugar(n), _via(t), n, pkg.caption, target)


def transport(t: Translation, from_dev: Development, to_dev: Optional[Development],
              items: Sequence[Item], target: str, fresh: Optional[Development] = None
              ) -> Development:
    """Transport the packages named by items.  The group is atomic: on any
    error neither the translation nor the developments change.  When
    to_dev is None, ``fresh`` is an empty development of the target theory
    that receives the packages."""
    work = copy.copy(t)
    work.const_map = dict(t.const_map)
    work.transported = list(t.transported)
    base = to_dev if to_dev is not None else fresh
    work.shared = shared_constants(t, from_dev, base)
    scope = set(base.language().constants)
    new: List[Package] = []
    for label, new_label, new_name in items:
        pkg = from_dev.package(label)
        if isinstance(pkg, DefPkg):
            if pkg.opaque:
                raise TypeError(f"{label} is opaque and cannot be transported")
            d = transport_definition(work, pkg, new_label, new_name or pkg.name, scope, target)
            scope.add(d.const)
            work.transported.append((pkg.const, d.const))
            new.append(d)
        else:
            if pkg.opaque:
                raise TypeError(f"{label} is opaque and cannot be transported")
            new.append(transport_theorem(work, pkg, new_label, target))
    t.const_map = work.const_map
    t.transported = work.transported
    if to_dev is not None:
        return Development(target, to_dev.bottom, new, parent=to_dev.name,
                           visible=to_dev.visible + to_dev.packages, hidden=list(to_dev.hidden))
    return Development(target, fresh.bottom, new, visible=list(fresh.visible),
                       hidden=list(fresh.hidden))

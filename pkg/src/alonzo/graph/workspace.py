"""Loading module declarations into theories, developments and
translations.

Declarations are processed in order.  A development of a theory T sees
the packages of the latest development (at declaration time) of every
theory included in T, directly or through a chain of inclusions; names
that two such packages define differently are hidden, with a warning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..errors import AlonzoError, DuplicateName, MorphismRejected, ResolveError, TypeError
from ..kernel import BOOL, BaseTy, Const, Language, alpha_eq, constants_of, infer_type
from ..notation import lexicon as lx
from ..notation.elaborate import Elaborator, Scope
from ..notation.nterm import desugar
from ..notation.parser import (
    DefDecl, DevDecl, InclusionDecl, ThmDecl, TheoryDecl, TranslationDecl, TransportDecl,
    parse_module_file, prescan_infix,
)
from ..notation.quasitype import Quasitype
from .certify import certify as certify_translation, counts as obligation_counts, obligations
from .core import Axiom, DefPkg, Development, ThmPkg, Theory, Trusted, Unchecked
from .transport import transport
from .translate import Translation, identity_translation


@dataclass
class Check:
    kind: str
    subject: str
    ok: bool
    detail: str = ""


@dataclass
class TransportRecord:
    name: str
    via: str
    from_dev: str
    to_dev: Optional[str]
    target: str
    items: list


@dataclass
class Workspace:
    theories: Dict[str, Theory] = field(default_factory=dict)
    devs: Dict[str, Development] = field(default_factory=dict)
    translations: Dict[str, Translation] = field(default_factory=dict)
    transports: List[TransportRecord] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    latest: Dict[str, str] = field(default_factory=dict)   # theory -> development
    included_in: Dict[str, List[str]] = field(default_factory=dict)  # dst -> [src]
    graph_exclude: set = field(default_factory=set)
    certify: bool = True
    sizes: tuple = (1, 2)

    # ------------------------------------------------------------------
    # lookup

    def theory(self, name: str) -> Theory:
        if name in self.theories:
            return self.theories[name]
        raise ResolveError(f"unknown theory {name}")

    def dev(self, name: str) -> Development:
        if name in self.devs:
            return self.devs[name]
        raise ResolveError(f"unknown development {name}")

    def translation(self, name: str) -> Translation:
        if name in self.translations:
            return self.translations[name]
        raise ResolveError(f"unknown translation {name}")

    def theory_or_dev(self, name: str) -> Tuple[Theory, Optional[Development]]:
        if name in self.theories:
            return self.theories[name], None
        d = self.dev(name)
        return d.bottom, d

    def context_dev(self, theory: Theory, dev: Optional[Development]) -> Optional[Development]:
        if dev is not None:
            return dev
        latest = self.latest.get(theory.name)
        return self.devs[latest] if latest else None

    def scope_of(self, theory: Theory, dev: Optional[Development]) -> Scope:
        if dev is not None:
            return Scope.of(dev.language())
        return Scope(theory.language.base_types,
                     list(theory.language.constants) + [p.const for p in theory.imports])

    # ------------------------------------------------------------------

    def load_text(self, text: str) -> None:
        for d in parse_module_file(text):
            self.add(d)

    def add(self, d) -> None:
        if isinstance(d, TheoryDecl):
            self.add_theory(d)
        elif isinstance(d, DevDecl):
            self.add_dev(d)
        elif isinstance(d, TranslationDecl):
            self.add_translation(d)
        elif isinstance(d, InclusionDecl):
            self.add_inclusion(d)
        elif isinstance(d, TransportDecl):
            self.add_transport(d)
        else:
            raise TypeError(f"unknown declaration {d!r}")

    def _fresh(self, name: str) -> None:
        if name in self.theories or name in self.devs or name in self.translations:
            raise DuplicateName(f"{name} is already declared")

    # theories

    def add_theory(self, d: TheoryDecl) -> Theory:
        self._fresh(d.name)
        if d.base is not None:
            base = self.theory(d.base)
            L0, axioms, imports = base.language, list(base.axiom_list), list(base.imports)
            base_dev = self.context_dev(base, None)
            avail = base_dev.definitions() if base_dev is not None else list(base.imports)
            infix = set(base.infix)
        else:
            L0, axioms, imports, avail, infix = Language(), [], [], [], set()
        bts = list(L0.base_types) + [b for b in d.base_types if b not in L0.base_types]
        scope = Scope(bts, list(L0.constants) + [p.const for p in avail])
        new = []
        for c in d.constants:
            ty = Elaborator(scope).elab_type(c.type)
            scope.add(c.name, ty)
            new.append((c.name, ty))
            if c.infix:
                infix.add(c.name)
        L = L0.extended(base_types=d.base_types, constants=new)
        labels = {a.label for a in axioms}
        fresh_axioms = []
        for a in d.axioms:
            if a.label in labels:
                raise DuplicateName(f"axiom {a.label} of {d.name} is already declared")
            labels.add(a.label)
            n = Elaborator(scope).elab(a.term, BOOL)
            fresh_axioms.append(Axiom(a.label, desugar(n), n, a.caption))
        for lbl in d.opaque_axioms:
            fresh_axioms.append(Axiom(lbl, None))
        imports += self._closure(fresh_axioms, avail, imports, L)
        T = Theory(d.name, L, axioms + fresh_axioms, d.base, imports, infix)
        self.theories[d.name] = T
        if d.base is not None:
            self.included_in.setdefault(d.name, []).append(d.base)
            self._inclusion(d.base, d.name, hidden=False, implicit=True)
        return T

    @staticmethod
    def _closure(axioms, avail, have, L) -> List[DefPkg]:
        by_const = {p.const: p for p in avail}
        known = {p.const for p in have} | set(L.constants)
        todo = [c for a in axioms if a.sentence is not None for c in constants_of(a.sentence)]
        out = []
        while todo:
            c = todo.pop()
            if c in known or c not in by_const:
                continue
            known.add(c)
            p = by_const[c]
            out.append(p)
            if p.definiens is not None:
                todo.extend(constants_of(p.definiens))
        order = {id(p): i for i, p in enumerate(avail)}
        return sorted(out, key=lambda p: order[id(p)])

    # developments

    def ancestors(self, theory: str) -> List[str]:
        out, todo = [], list(self.included_in.get(theory, []))
        while todo:
            t = todo.pop(0)
            if t in out or t == theory:
                continue
            out.append(t)
            todo.extend(self.included_in.get(t, []))
        return out

    def visible_for(self, theory: str) -> Tuple[list, list]:
        pkgs, seen = [], set()
        for a in self.ancestors(theory):
            latest = self.latest.get(a)
            if latest is None:
                continue
            for p in self.devs[latest].all_packages():
                if id(p) not in seen:
                    seen.add(id(p))
                    pkgs.append(p)
        hidden = set()
        by_label, by_name = {}, {}
        for p in pkgs:
            q = by_label.setdefault(p.label, p)
            if q is not p:
                hidden.add(p.label)
            if isinstance(p, DefPkg):
                q = by_name.setdefault(p.name, p)
                if q is not p:
                    hidden.add(p.name)
        for h in sorted(hidden):
            self.warnings.append(f"{theory}: {h} is defined by two included developments "
                                 f"and is hidden")
        vis = [p for p in pkgs if p.label not in hidden
               and not (isinstance(p, DefPkg) and p.name in hidden)]
        return vis, sorted(hidden)

    def new_dev(self, name: str, theory: Theory) -> Development:
        vis, hidden = self.visible_for(theory.name)
        return Development(name, theory, [], visible=vis, hidden=hidden)

    def _register_dev(self, D: Development) -> None:
        self.devs[D.name] = D
        self.latest[D.bottom.name] = D.name

    def add_dev(self, d: DevDecl) -> Development:
        self._fresh(d.name)
        if d.theory is not None:
            D = self.new_dev(d.name, self.theory(d.theory))
        else:
            P = self.dev(d.parent)
            D = Development(d.name, P.bottom, [], parent=P.name,
                            visible=P.visible + P.packages, hidden=list(P.hidden))
        scope = Scope.of(D.language())
        labels = {p.label for p in D.all_packages()} | {a.label for a in D.bottom.axiom_list}
        for pd in d.packages:
            if pd.label in labels:
                raise DuplicateName(f"{pd.label} is already declared in {d.name}")
            labels.add(pd.label)
            D.packages.append(self._package(pd, scope, d.name))
        self._register_dev(D)
        return D

    @staticmethod
    def _status(st, label):
        if st is None:
            return Trusted(f"AppA:{label}")
        if st[0] == "trusted":
            return Trusted(st[1])
        return Unchecked()

    def _package(self, pd, scope: Scope, origin: str):
        if isinstance(pd, DefDecl):
            ty = Elaborator(scope).elab_type(pd.type)
            if pd.name in scope.consts and ty in scope.consts[pd.name]:
                raise DuplicateName(f"{pd.name} is already declared at this type")
            if pd.term is None:
                p = DefPkg(pd.label, pd.name, ty, None, Trusted(f"AppA:{pd.label}"),
                           infix=pd.infix, origin=origin)
            else:
                n = Elaborator(scope).elab(pd.term, ty)
                p = DefPkg(pd.label, pd.name, ty, desugar(n), self._status(pd.status, pd.label),
                           n, pd.infix, pd.caption, origin)
            scope.add(pd.name, ty)
            return p
        if pd.term is None:
            return ThmPkg(pd.label, None, Trusted(f"AppA:{pd.label}"), origin=origin)
        n = Elaborator(scope).elab(pd.term, BOOL)
        return ThmPkg(pd.label, desugar(n), self._status(pd.status, pd.label), n,
                      pd.caption, origin)

    # translations

    def add_translation(self, d: TranslationDecl) -> Translation:
        self._fresh(d.name)
        src = self.theory(d.src)
        dst, dst_dev = self.theory_or_dev(d.dst)
        ctx = self.context_dev(dst, dst_dev)
        scope = self.scope_of(dst, ctx)
        src_scope = Scope.of(src.language)
        tmap = {}
        for name, q in d.type_map:
            if name not in src.language.base_types:
                raise ResolveError(f"{d.name}: {name} is not a base type of {src.name}")
            kind, v = Elaborator(scope).elab_q(q)
            tmap[name] = v if kind == "type" else Quasitype(v.ty.dom, desugar(v), v)
        missing = sorted(set(src.language.base_types) - set(tmap))
        if missing:
            raise TypeError(f"{d.name} does not map base types {', '.join(missing)}")
        t = Translation(d.name, src, dst, tmap, {}, dst_dev=dst_dev.name if dst_dev else None)
        for name, q, term in d.const_map:
            cands = src_scope.consts.get(name)
            if not cands:
                raise ResolveError(f"{d.name}: {name} is not a constant of {src.name}")
            if q is not None:
                ty = Elaborator(src_scope).elab_type(q)
                if ty not in cands:
                    raise ResolveError(f"{d.name}: {src.name} has no {name} of that type")
            elif len(cands) == 1:
                ty = cands[0]
            else:
                raise TypeError(f"{d.name}: {name} is overloaded in {src.name}; give its type")
            if (name, ty) in t.const_map:
                raise DuplicateName(f"{d.name} maps {name} twice")
            t.const_map[(name, ty)] = Elaborator(scope).elab(term, t.carrier(ty))
        missing = [c for c in src.language.constants if c not in t.const_map]
        if missing:
            raise TypeError(f"{d.name} does not map constants "
                            f"{', '.join(sorted({c for c, _ in missing}))}")
        if d.status is not None and d.status[0] == "trusted":
            t.trusted = d.status[1]
        t.waiver = d.waiver
        self.translations[d.name] = t
        obs = obligations(t)
        if d.counts is not None:
            got = obligation_counts(obs)
            self.checks.append(Check("counts", d.name, got == tuple(d.counts),
                                     f"expected {tuple(d.counts)}, got {got}"))
        for idx, term in d.expects:
            want = desugar(Elaborator(scope).elab(term, BOOL))
            ok = 1 <= idx <= len(obs) and obs[idx - 1].sentence is not None \
                and alpha_eq(obs[idx - 1].sentence, want)
            self.checks.append(Check("obligation", f"{d.name}#{idx}", ok))
        if self.certify:
            self._certify(t, ctx)
        return t

    def _certify(self, t: Translation, ctx, policy="mixed") -> None:
        try:
            t.certificate = certify_translation(t, ctx, sizes=self.sizes, policy=policy)
        except MorphismRejected as e:
            if t.waiver is None:
                del self.translations[t.name]
                raise
            t.rejection = e
            t.certificate = e.obligations
            self.warnings.append(f"{t.name} is not a morphism (waived: {t.waiver})")

    def add_inclusion(self, d: InclusionDecl) -> Translation:
        self.included_in.setdefault(d.dst, []).append(d.src)
        return self._inclusion(d.src, d.dst, d.hidden, implicit=False)

    def _inclusion(self, src: str, dst: str, hidden: bool, implicit: bool) -> Translation:
        name = f"{src} -> {dst}"
        t = identity_translation(name, self.theory(src), self.theory(dst), hidden=hidden)
        t.implicit = implicit
        self.translations[name] = t
        if self.certify:
            self._certify(t, None, policy="trusted-only")
        return t

    # transports

    def add_transport(self, d: TransportDecl) -> Development:
        self._fresh(d.target_dev)
        t = self.translation(d.via)
        if self.certify and t.certificate is None:
            raise AlonzoError(f"{t.name} is not certified")
        frm = self.dev(d.from_dev) if d.from_dev else self.context_dev(t.src, None)
        if frm is None or frm.bottom is not t.src:
            raise TypeError(f"{d.name}: the source development is not a development of {t.src.name}")
        if d.to_dev is not None:
            to = self.dev(d.to_dev)
        else:
            to = self.context_dev(t.dst, self.devs.get(t.dst_dev) if t.dst_dev else None)
        if to is not None and to.bottom is not t.dst:
            raise TypeError(f"{d.name}: {to.name} is not a development of {t.dst.name}")
        fresh = self.new_dev(d.target_dev, t.dst) if to is None else None
        D = transport(t, frm, to, d.items, d.target_dev, fresh)
        self._register_dev(D)
        self.transports.append(TransportRecord(d.name, t.name, frm.name,
                                               to.name if to else None, D.name, list(d.items)))
        scope = Scope.of(D.language())
        for label, term in d.expects:
            try:
                p = D.package(label)
            except KeyError:
                self.checks.append(Check("transport", f"{d.name}:{label}", False, "no such package"))
                continue
            if isinstance(p, DefPkg):
                got, want_ty = p.definiens, p.ty
            else:
                got, want_ty = p.sentence, BOOL
            want = desugar(Elaborator(scope).elab(term, want_ty))
            self.checks.append(Check("transport", f"{d.name}:{label}", alpha_eq(got, want)))
        return D

    # ------------------------------------------------------------------

    def failed_checks(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def inclusions(self) -> List[Translation]:
        return [t for t in self.translations.values() if t.inclusion]


def load_texts(texts, certify: bool = True) -> Workspace:
    for text in texts:
        prescan_infix(text)
    ws = Workspace(certify=certify)
    for text in texts:
        ws.load_text(text)
    return ws

"""Canonical layout for module files.

Every term is elaborated in the context of the declarations before it,
then printed back from its resugared kernel form, so the output is a
normal form: formatting twice gives the same bytes.  Comment lines are
kept and attached to the next declaration or package; comments inside a
translation or transport body move to the top of that body.
"""

from __future__ import annotations

from typing import List, Optional

from ..kernel import BOOL, TypeExpr, show_type
from ..notation.elaborate import Elaborator, Scope
from ..notation.nterm import NTerm, desugar
from ..notation.parser import (
    DefDecl, DevDecl, InclusionDecl, TheoryDecl, TranslationDecl, TransportDecl,
    parse_module_file, prescan_infix,
)
from ..notation.printer import show_nterm
from ..notation.quasitype import Quasitype
from ..notation.resugar import resugar
from .workspace import Workspace

WIDTH = 100


def _term(n: NTerm) -> str:
    return show_nterm(resugar(desugar(n)))


def _str(s: str) -> str:
    return '"' + s + '"'


class _Comments:
    """Comment lines indexed by source line."""

    def __init__(self, text: str):
        self.lines = {}
        self.code = []
        for i, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if s.startswith("--"):
                self.lines[i] = s
            elif s:
                self.code.append(i)
        self.used = set()

    def body_end(self, nxt: int) -> int:
        """The last code line before line nxt: a closing brace."""
        return max((i for i in self.code if i < nxt), default=0)

    def before(self, line: int) -> List[str]:
        out = [i for i in sorted(self.lines) if i < line and i not in self.used]
        self.used.update(out)
        return [self.lines[i] for i in out]

    def rest(self) -> List[str]:
        return self.before(10 ** 9)


def _with_caption(head: str, caption: str, indent: str, tail: str = ";") -> List[str]:
    if not caption:
        return [head + tail]
    one = f"{head}  {_str(caption)}{tail}"
    if len(one) <= WIDTH:
        return [one]
    return [head, f"{indent}  {_str(caption)}{tail}"]


def format_module(text: str, ws: Optional[Workspace] = None) -> str:
    """Lay out a module file.  ``ws`` holds the declarations the file
    depends on; it is extended in place."""
    prescan_infix(text)
    if ws is None:
        ws = Workspace(certify=False)
    comments = _Comments(text)
    out: List[str] = []
    decls = parse_module_file(text)
    for i, d in enumerate(decls):
        nxt = decls[i + 1].pos[0] if i + 1 < len(decls) else 10 ** 9
        limit = comments.body_end(nxt)
        lead = comments.before(d.pos[0])
        if i > 0:
            out.append("")
        out.extend(lead)
        ws.add(d)
        if isinstance(d, TheoryDecl):
            out.extend(_theory(ws, d, comments))
        elif isinstance(d, DevDecl):
            out.extend(_dev(ws, d, comments))
        elif isinstance(d, TranslationDecl):
            out.extend(_translation(ws, d, comments, limit))
        elif isinstance(d, InclusionDecl):
            out.append(f"inclusion {d.src} -> {d.dst}{' hidden' if d.hidden else ''};")
        elif isinstance(d, TransportDecl):
            out.extend(_transport(ws, d, comments, limit))
    tail = comments.rest()
    if tail:
        if out:
            out.append("")
        out.extend(tail)
    return "\n".join(out) + "\n"


def _theory(ws: Workspace, d: TheoryDecl, comments) -> List[str]:
    T = ws.theory(d.name)
    head = f"theory {d.name} {{" if d.base is None else f"extend {d.base} as {d.name} {{"
    out = [head]
    if d.base_types:
        out.append(f"  base_types {', '.join(d.base_types)};")
    if d.constants:
        L = T.language
        parts = []
        for c in d.constants:
            out.extend("  " + s for s in comments.before(c.pos[0]))
            ty = _decl_type(c, L)
            parts.append(f"{c.name} : {show_type(ty)}{' infix' if c.infix else ''}")
        out.extend(_list_lines("  constants ", parts, "    "))
    new = T.axiom_list[len(T.axiom_list) - len(d.axioms) - len(d.opaque_axioms):]
    if d.axioms:
        out.append("  axioms")
        for a, ax in zip(d.axioms, new):
            out.extend("    " + s for s in comments.before(a.pos[0]))
            out.extend(_with_caption(f"    {_str(a.label)}: {_term(ax.nterm)}", a.caption, "    "))
    if d.opaque_axioms:
        out.extend(_list_lines("  opaque axioms ", [_str(x) for x in d.opaque_axioms], "    "))
    out.append("}")
    return out


def _decl_type(c, L) -> TypeExpr:
    return Elaborator(Scope(L.base_types, L.constants)).elab_type(c.type)


def _list_lines(head: str, parts: List[str], indent: str) -> List[str]:
    one = head + ", ".join(parts) + ";"
    if len(one) <= WIDTH:
        return [one]
    lines = [head.rstrip()]
    for i, p in enumerate(parts):
        lines.append(indent + p + ("," if i < len(parts) - 1 else ";"))
    return lines


def _dev(ws: Workspace, d: DevDecl, comments) -> List[str]:
    D = ws.dev(d.name)
    head = f"development {d.name} of {d.theory} {{" if d.theory else \
        f"development {d.name} extends {d.parent} {{"
    out = [head]
    for pd, p in zip(d.packages, D.packages):
        out.extend("  " + s for s in comments.before(pd.pos[0]))
        if isinstance(pd, DefDecl):
            infix = " infix" if pd.infix else ""
            lhs = f"  def {_str(pd.label)} {pd.name} : {show_type(p.ty)}{infix}"
            if p.definiens is None:
                out.append(lhs + " opaque;")
                continue
            out.extend(_with_caption(f"{lhs} := {_term(p.nterm)}", pd.caption, "  ",
                                     _status(pd.status) + ";"))
        else:
            if p.sentence is None:
                out.append(f"  thm {_str(pd.label)} opaque;")
                continue
            out.extend(_with_caption(f"  thm {_str(pd.label)}: {_term(p.nterm)}", pd.caption,
                                     "  ", _status(pd.status) + ";"))
    out.append("}")
    return out


def _status(st) -> str:
    if st is None:
        return ""
    if st[0] == "trusted":
        return f" trusted {_str(st[1])}"
    return " unchecked"


def _translation(ws: Workspace, d: TranslationDecl, comments, limit: int) -> List[str]:
    t = ws.translation(d.name)
    out = [f"translation {d.name} : {d.src} -> {d.dst} {{"]
    out.extend("  " + s for s in comments.before(limit))
    for name, _ in d.type_map:
        im = t.type_map[name]
        txt = _term(im.nterm) if isinstance(im, Quasitype) else show_type(im)
        out.append(f"  type {name} |-> {txt};")
    src_consts = t.src.language.constants
    for (name, ty), img in t.const_map.items():
        if (name, ty) not in src_consts:
            continue  # added by a later transport
        overloaded = sum(1 for c in src_consts if c[0] == name) > 1
        lhs = f"{name} : {show_type(ty)}" if overloaded else name
        out.append(f"  const {lhs} |-> {_term(img)};")
    if d.status is not None:
        out.append(f"  status trusted {_str(d.status[1])};" if d.status[0] == "trusted"
                   else "  status check;")
    if d.waiver is not None:
        out.append(f"  waive {_str(d.waiver)};")
    if d.counts is not None:
        out.append(f"  expect counts {' '.join(str(c) for c in d.counts)};")
    if d.expects:
        dst, dev = ws.theory_or_dev(d.dst)
        scope = ws.scope_of(dst, ws.context_dev(dst, dev))
        for idx, term in d.expects:
            n = Elaborator(scope).elab(term, BOOL)
            out.append(f"  expect obligation {idx}: {_term(n)};")
    out.append("}")
    return out


def _transport(ws: Workspace, d: TransportDecl, comments, limit: int) -> List[str]:
    frm = f" from {d.from_dev}" if d.from_dev else ""
    to = f" to {d.to_dev}" if d.to_dev else ""
    out = [f"transport {d.name} via {d.via}{frm}{to} {{"]
    out.extend("  " + s for s in comments.before(limit))
    parts = []
    for label, new_label, new_name in d.items:
        parts.append(f"{label} -> {new_label}" + (f" {new_name}" if new_name else ""))
    out.extend(_list_lines("  items ", parts, "    "))
    out.append(f"  target-dev {d.target_dev};")
    if d.expects:
        D = ws.dev(d.target_dev)
        scope = Scope.of(D.language())
        for label, term in d.expects:
            p = D.package(label)
            n = Elaborator(scope).elab(term, p.ty if hasattr(p, "ty") else BOOL)
            out.append(f"  expect {label}: {_term(n)};")
    out.append("}")
    return out

"""Lexer and recursive-descent parser for `.alz` module files and terms.

Terms come out as raw surface trees (``S*`` nodes, with ``Q*`` nodes in
quasitype positions); nothing is resolved here.  Elaboration against a
language happens in :mod:`alonzo.notation.elaborate`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..errors import DuplicateName, ParseError
from . import lexicon as lx

Pos = Tuple[int, int]

# --------------------------------------------------------------------------
# tokens

_PUNCT = sorted([
    "|->", "<=>", "!~=", "..", "->", "=>", "<=", ">=", "~=", "!=", "/\\", "\\/",
    ":=", "@[", "(", ")", "{", "}", "[", "]", ",", ";", ":", ".", "=", "<", ">",
    "~", "!", "^", "|", "\\", "*", "+", "-", "/",
], key=len, reverse=True)

_UNI_OPS = set("·⊙∘⊕⊗∗★")


@dataclass(frozen=True)
class Tok:
    kind: str  # id | sym | str | eof
    val: str
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    toks: List[Tok] = []
    i, n = 0, len(text)
    line, lstart = 1, 0
    while i < n:
        c = text[i]
        col = i - lstart + 1
        if c == "\n":
            line += 1
            lstart = i + 1
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = text.find('"', i + 1)
            if j < 0 or "\n" in text[i:j]:
                raise ParseError("unterminated string", line, col)
            toks.append(Tok("str", text[i + 1:j], line, col))
            i = j + 1
            continue
        if c in lx.UNICODE_MAP:
            v = lx.UNICODE_MAP[c]
            toks.append(Tok("id" if v[0].isalpha() else "sym", v, line, col))
            i += 1
            continue
        if c.isalnum() or c == "_":
            j = i + 1
            while j < n:
                d = text[j]
                if lx.is_ident_char(d):
                    j += 1
                elif d == "-" and j + 1 < n and text[j + 1].isalnum() and text[j - 1].isalnum():
                    j += 1
                else:
                    break
            toks.append(Tok("id", text[i:j], line, col))
            i = j
            continue
        if c in _UNI_OPS:
            toks.append(Tok("sym", c, line, col))
            i += 1
            continue
        if text.startswith("~in", i) and not (i + 3 < n and lx.is_ident_char(text[i + 3])):
            toks.append(Tok("sym", "~in", line, col))
            i += 3
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(Tok("sym", p, line, col))
                i += len(p)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Tok("eof", "", line, i - lstart + 1))
    return toks


# --------------------------------------------------------------------------
# raw surface syntax


class SNode:
    pos: Pos = (0, 0)


@dataclass
class SId(SNode):
    name: str
    targs: Optional[list] = None
    pos: Pos = (0, 0)


@dataclass
class SApp(SNode):
    fun: SNode
    arg: SNode
    pos: Pos = (0, 0)


@dataclass
class SBin(SNode):
    op: str
    lhs: SNode
    rhs: SNode
    pos: Pos = (0, 0)


@dataclass
class SChain(SNode):
    items: list
    ops: list
    pos: Pos = (0, 0)


@dataclass
class SNot(SNode):
    arg: SNode
    pos: Pos = (0, 0)


@dataclass
class SPost(SNode):
    op: str
    arg: SNode
    pos: Pos = (0, 0)


@dataclass
class SRestrict(SNode):
    fun: SNode
    q: "SQ"
    pos: Pos = (0, 0)


@dataclass
class SIsDefIn(SNode):
    arg: SNode
    q: "SQ"
    pos: Pos = (0, 0)


@dataclass
class SBinder(SNode):
    kind: str
    groups: list  # [(names, SQ)]
    body: SNode
    pos: Pos = (0, 0)


@dataclass
class SSetB(SNode):
    var: str
    q: "SQ"
    body: SNode
    pos: Pos = (0, 0)


@dataclass
class SSetEnum(SNode):
    items: list
    pos: Pos = (0, 0)


@dataclass
class STuple(SNode):
    items: list
    pos: Pos = (0, 0)


@dataclass
class SIf(SNode):
    cond: SNode
    then: SNode
    other: SNode
    pos: Pos = (0, 0)


@dataclass
class SAsc(SNode):
    expr: SNode
    q: "SQ"
    pos: Pos = (0, 0)


@dataclass
class SBig(SNode):
    const: str
    var: str
    lo: SNode
    hi: SNode
    body: SNode
    pos: Pos = (0, 0)


class SQ:
    pos: Pos = (0, 0)


@dataclass
class QBool(SQ):
    pos: Pos = (0, 0)


@dataclass
class QName(SQ):
    name: str
    targs: Optional[list] = None
    pos: Pos = (0, 0)


@dataclass
class QFun(SQ):
    dom: SQ
    cod: SQ
    pos: Pos = (0, 0)


@dataclass
class QProd(SQ):
    fst: SQ
    snd: SQ
    pos: Pos = (0, 0)


@dataclass
class QSet(SQ):
    elem: SQ
    pos: Pos = (0, 0)


@dataclass
class QExpr(SQ):
    expr: SNode
    pos: Pos = (0, 0)


# --------------------------------------------------------------------------
# module declarations


@dataclass
class ConstDecl:
    name: str
    type: SQ
    infix: bool = False
    pos: Pos = (0, 0)


@dataclass
class AxiomDecl:
    label: str
    term: SNode
    caption: str = ""
    pos: Pos = (0, 0)


@dataclass
class TheoryDecl:
    name: str
    base: Optional[str]
    base_types: list = field(default_factory=list)
    constants: list = field(default_factory=list)
    axioms: list = field(default_factory=list)
    opaque_axioms: list = field(default_factory=list)
    pos: Pos = (0, 0)


@dataclass
class DefDecl:
    label: str
    name: str
    type: SQ
    term: Optional[SNode]
    infix: bool = False
    caption: str = ""
    status: Optional[tuple] = None
    pos: Pos = (0, 0)


@dataclass
class ThmDecl:
    label: str
    term: Optional[SNode]
    caption: str = ""
    status: Optional[tuple] = None
    pos: Pos = (0, 0)


@dataclass
class DevDecl:
    name: str
    theory: Optional[str]
    parent: Optional[str]
    packages: list = field(default_factory=list)
    pos: Pos = (0, 0)


@dataclass
class TranslationDecl:
    name: str
    src: str
    dst: str
    type_map: list = field(default_factory=list)   # [(name, SQ)]
    const_map: list = field(default_factory=list)  # [(name, SQ|None, SNode)]
    status: Optional[tuple] = None
    expects: list = field(default_factory=list)    # [(index, SNode)]
    counts: Optional[tuple] = None
    waiver: Optional[str] = None
    pos: Pos = (0, 0)


@dataclass
class InclusionDecl:
    src: str
    dst: str
    hidden: bool = False
    pos: Pos = (0, 0)


@dataclass
class TransportDecl:
    name: str
    via: str
    from_dev: Optional[str]
    to_dev: Optional[str]
    items: list = field(default_factory=list)    # [(label, new_label, new_name)]
    target_dev: Optional[str] = None
    expects: list = field(default_factory=list)  # [(label, SNode)]
    pos: Pos = (0, 0)


# --------------------------------------------------------------------------

_STOP_WORDS = {"trusted", "unchecked", "opaque", "infix", "hidden", "then", "else",
               "in", "notin", "subseteq", "union", "inter", "diff"}
_REL = {"=", "!=", "~=", "!~=", "<", ">", ">=", "<=", "in", "notin", "subseteq"}


def prescan_infix(text: str) -> None:
    """Record alphanumeric constant names declared `infix` so the term
    parser can treat them as operators wherever they occur."""
    toks = tokenize(text)
    for i, t in enumerate(toks):
        if t.kind == "id" and t.val == "infix" and i >= 3:
            # NAME : TYPE infix  -- walk back to the name before ':'
            j = i - 1
            depth = 0
            while j > 0:
                v = toks[j].val
                if v in (")", "}"):
                    depth += 1
                elif v in ("(", "{"):
                    depth -= 1
                elif v == ":" and depth == 0:
                    break
                elif v in (";", ",") and depth == 0:
                    j = -1
                    break
                j -= 1
            if j > 0 and toks[j - 1].kind == "id" and not lx.is_symbolic(toks[j - 1].val):
                lx.INFIX_WORDS.add(toks[j - 1].val)


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, val, kind=None) -> bool:
        t = self.tok
        return t.val == val and t.kind != "str" and (kind is None or t.kind == kind)

    def eat(self, val) -> bool:
        if self.at(val):
            self.i += 1
            return True
        return False

    def expect(self, val) -> Tok:
        if not self.at(val):
            self.error(f"expected {val!r}")
        t = self.tok
        self.i += 1
        return t

    def error(self, msg):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.val)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)

    def name(self) -> str:
        t = self.tok
        if t.kind == "id" or (t.kind == "sym" and _is_op_token(t.val)):
            self.i += 1
            return t.val
        self.error("expected a name")

    def string(self) -> str:
        t = self.tok
        if t.kind != "str":
            self.error("expected a string")
        self.i += 1
        return t.val

    def pos(self) -> Pos:
        return (self.tok.line, self.tok.col)

    # ------------------------------------------------------------------
    # module files

    def module(self) -> list:
        decls = []
        seen = set()
        while self.tok.kind != "eof":
            d = self.decl()
            if isinstance(d, (TheoryDecl, DevDecl, TranslationDecl, TransportDecl)):
                if d.name in seen:
                    raise DuplicateName(f"{d.name} declared twice (line {d.pos[0]})")
                seen.add(d.name)
            decls.append(d)
        return decls

    def decl(self):
        p = self.pos()
        if self.eat("theory"):
            name = self.name()
            d = TheoryDecl(name, None, pos=p)
            self.theory_body(d)
            return d
        if self.eat("extend"):
            base = self.name()
            self.expect("as")
            d = TheoryDecl(self.name(), base, pos=p)
            self.theory_body(d)
            return d
        if self.eat("development"):
            name = self.name()
            if self.eat("of"):
                d = DevDecl(name, self.name(), None, pos=p)
            else:
                self.expect("extends")
                d = DevDecl(name, None, self.name(), pos=p)
            self.dev_body(d)
            return d
        if self.eat("translation"):
            return self.translation(p)
        if self.eat("inclusion"):
            src = self.name()
            self.expect("->")
            dst = self.name()
            hidden = self.eat("hidden")
            self.expect(";")
            return InclusionDecl(src, dst, hidden, p)
        if self.eat("transport"):
            return self.transport(p)
        self.error("expected a declaration")

    def theory_body(self, d: TheoryDecl):
        self.expect("{")
        while not self.eat("}"):
            if self.eat("base_types"):
                d.base_types.append(self.name())
                while self.eat(","):
                    d.base_types.append(self.name())
                self.expect(";")
            elif self.eat("constants"):
                while True:
                    p = self.pos()
                    nm = self.name()
                    self.expect(":")
                    ty = self.qtype()
                    d.constants.append(ConstDecl(nm, ty, self.eat("infix"), p))
                    if not self.eat(","):
                        break
                self.expect(";")
            elif self.eat("axioms"):
                while self.tok.kind == "str":
                    p = self.pos()
                    label = self.string()
                    self.expect(":")
                    term = self.expr()
                    cap = self.string() if self.tok.kind == "str" else ""
                    self.expect(";")
                    d.axioms.append(AxiomDecl(label, term, cap, p))
            elif self.eat("opaque"):
                self.expect("axioms")
                d.opaque_axioms.append(self.string())
                while self.eat(","):
                    d.opaque_axioms.append(self.string())
                self.expect(";")
            else:
                self.error("expected base_types, constants, axioms or opaque axioms")

    def status(self):
        if self.eat("trusted"):
            return ("trusted", self.string())
        if self.eat("unchecked"):
            return ("unchecked",)
        return None

    def dev_body(self, d: DevDecl):
        self.expect("{")
        while not self.eat("}"):
            p = self.pos()
            if self.eat("def"):
                label = self.string()
                nm = self.name()
                self.expect(":")
                ty = self.qtype()
                infix = self.eat("infix")
                if self.eat("opaque"):
                    self.expect(";")
                    d.packages.append(DefDecl(label, nm, ty, None, infix, pos=p))
                    continue
                self.expect(":=")
                term = self.expr()
                cap = self.string() if self.tok.kind == "str" else ""
                st = self.status()
                self.expect(";")
                d.packages.append(DefDecl(label, nm, ty, term, infix, cap, st, p))
            elif self.eat("thm"):
                label = self.string()
                if self.eat("opaque"):
                    self.expect(";")
                    d.packages.append(ThmDecl(label, None, pos=p))
                    continue
                self.expect(":")
                term = self.expr()
                cap = self.string() if self.tok.kind == "str" else ""
                st = self.status()
                self.expect(";")
                d.packages.append(ThmDecl(label, term, cap, st, p))
            else:
                self.error("expected def or thm")

    def translation(self, p):
        name = self.name()
        self.expect(":")
        src = self.name()
        self.expect("->")
        dst = self.name()
        d = TranslationDecl(name, src, dst, pos=p)
        self.expect("{")
        while not self.eat("}"):
            if self.eat("type"):
                nm = self.name()
                self.expect("|->")
                d.type_map.append((nm, self.qtype()))
            elif self.eat("const"):
                nm = self.name()
                ty = None
                if self.eat(":"):
                    ty = self.qtype()
                self.expect("|->")
                d.const_map.append((nm, ty, self.expr()))
            elif self.eat("status"):
                if self.eat("check"):
                    d.status = ("check",)
                else:
                    self.expect("trusted")
                    d.status = ("trusted", self.string())
            elif self.eat("waive"):
                d.waiver = self.string()
            elif self.eat("expect"):
                if self.eat("counts"):
                    d.counts = tuple(int(self.name()) for _ in range(3))
                else:
                    self.expect("obligation")
                    idx = int(self.name())
                    self.expect(":")
                    d.expects.append((idx, self.expr()))
            else:
                self.error("expected type, const, status, waive or expect")
            self.expect(";")
        return d

    def transport(self, p):
        name = self.name()
        self.expect("via")
        via = self.name()
        frm = self.name() if self.eat("from") else None
        to = self.name() if self.eat("to") else None
        d = TransportDecl(name, via, frm, to, pos=p)
        self.expect("{")
        while not self.eat("}"):
            if self.eat("items"):
                while True:
                    lab = self.name()
                    new_lab, new_name = None, None
                    if self.eat("->"):
                        new_lab = self.name()
                        if self.tok.kind in ("id", "sym") and not self.at(",") and not self.at(";"):
                            new_name = self.name()
                    d.items.append((lab, new_lab, new_name))
                    if not self.eat(","):
                        break
            elif self.eat("target-dev"):
                d.target_dev = self.name()
            elif self.eat("expect"):
                lab = self.name()
                self.expect(":")
                d.expects.append((lab, self.expr()))
            else:
                self.error("expected items, target-dev or expect")
            self.expect(";")
        return d

    # ------------------------------------------------------------------
    # quasitypes (and types, which are the quasitypes without expressions)

    def qtype(self) -> SQ:
        p = self.pos()
        a = self.qprod()
        if self.eat("->"):
            return QFun(a, self.qtype(), p)
        return a

    def qprod(self) -> SQ:
        p = self.pos()
        a = self.qatom()
        if self.eat("*"):
            return QProd(a, self.qprod(), p)
        return a

    def qatom(self) -> SQ:
        p = self.pos()
        t = self.tok
        if t.kind == "id" and t.val == "o":
            self.i += 1
            return QBool(p)
        if self.at("{"):
            if self.peek().kind == "id" and self.peek(2).val == ":":
                return QExpr(self.atom(), p)
            self.i += 1
            q = self.qtype()
            self.expect("}")
            return QSet(q, p)
        if self.at("("):
            save = self.i
            self.i += 1
            try:
                q = self.qtype()
                if self.eat(")"):
                    return q
            except ParseError:
                pass
            self.i = save + 1
            e = self.expr()
            self.expect(")")
            return QExpr(e, p)
        if t.kind == "id" and t.val not in lx.KEYWORDS and t.val not in _STOP_WORDS:
            self.i += 1
            return QName(t.val, self.opt_targs(), p)
        self.error("expected a type")

    def opt_targs(self):
        if not self.eat("@["):
            return None
        out = [self.qtype()]
        while self.eat(","):
            out.append(self.qtype())
        self.expect("]")
        return out

    # ------------------------------------------------------------------
    # expressions

    def expr(self) -> SNode:
        return self.iff()

    def iff(self):
        p = self.pos()
        a = self.imp()
        while self.eat("<=>"):
            a = SBin("<=>", a, self.imp(), p)
        return a

    def imp(self):
        p = self.pos()
        a = self.disj()
        if self.eat("=>"):
            return SBin("=>", a, self.imp(), p)
        return a

    def disj(self):
        p = self.pos()
        a = self.conj()
        while self.eat("\\/"):
            a = SBin("\\/", a, self.conj(), p)
        return a

    def conj(self):
        p = self.pos()
        a = self.neg()
        while self.eat("/\\"):
            a = SBin("/\\", a, self.neg(), p)
        return a

    def neg(self):
        p = self.pos()
        if self.eat("~"):
            return SNot(self.neg(), p)
        return self.rel()

    def _rel_op(self):
        t = self.tok
        if t.kind == "str":
            return None
        if t.val in _REL and (t.kind == "sym" or t.val in ("in", "notin", "subseteq")):
            return t.val
        if t.kind == "sym" and t.val in lx.REL_SYMBOLS:
            return t.val
        return None

    def rel(self):
        p = self.pos()
        a = self.infix()
        if self.eat("~in"):
            return SIsDefIn(a, self.qatom(), p)
        items, ops = [a], []
        while True:
            op = self._rel_op()
            if op is None:
                break
            self.i += 1
            ops.append(op)
            items.append(self.infix())
        if not ops:
            return a
        return SChain(items, ops, p)

    def _infix_op(self):
        t = self.tok
        if t.kind == "sym" and (t.val in _UNI_OPS or t.val in "+-*/"):
            return t.val
        if t.kind == "id" and (t.val in lx.INFIX_WORDS or t.val in ("union", "inter", "diff")):
            return t.val
        return None

    def infix(self):
        p = self.pos()
        a = self.restr()
        op = self._infix_op()
        if op is None:
            return a
        self.i += 1
        b = self.restr()
        if self._infix_op() is not None:
            self.error("operators at the infix level do not associate; add parentheses")
        return SBin(op, a, b, p)

    def restr(self):
        p = self.pos()
        a = self.app()
        while self.eat("|"):
            a = SRestrict(a, self.qatom(), p)
        return a

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "id":
            if t.val in _STOP_WORDS or t.val in lx.INFIX_WORDS:
                return False
            return True
        if t.kind == "sym":
            return t.val in ("(", "{", "\\")
        return False

    def app(self):
        p = self.pos()
        f = self.postfix()
        while self._starts_atom():
            f = SApp(f, self.postfix(), p)
        return f

    def postfix(self):
        p = self.pos()
        a = self.atom()
        while self.at("!") or self.at("^"):
            a = SPost(self.tok.val, a, p)
            self.i += 1
        return a

    def atom(self):
        p = self.pos()
        t = self.tok
        if t.kind == "id":
            v = t.val
            if v in ("forall", "exists", "I"):
                self.i += 1
                return self.binder({"forall": "forall", "exists": "exists", "I": "iota"}[v], p)
            if v == "if":
                self.i += 1
                c = self.expr()
                self.expect("then")
                a = self.expr()
                self.expect("else")
                return SIf(c, a, self.expr(), p)
            if v in lx.BIG_OPS:
                self.i += 1
                var = self.name()
                self.expect("=")
                lo = self.app()
                self.expect("..")
                hi = self.app()
                self.expect(".")
                return SBig(lx.BIG_OPS[v], var, lo, hi, self.expr(), p)
            if v in _STOP_WORDS or v == "o":
                self.error("unexpected keyword")
            self.i += 1
            return SId(v, self.opt_targs(), p)
        if self.eat("\\"):
            return self.binder("lambda", p)
        if self.eat("("):
            t = self.tok
            if (t.kind == "sym" and _is_op_token(t.val) or t.kind == "id" and t.val in lx.INFIX_WORDS) \
                    and self.peek().val == ")":
                self.i += 2
                return SId(t.val, None, p)
            e = self.expr()
            if self.eat(":"):
                q = self.qtype()
                self.expect(")")
                return SAsc(e, q, p)
            if self.at(","):
                items = [e]
                while self.eat(","):
                    items.append(self.expr())
                self.expect(")")
                return STuple(items, p)
            self.expect(")")
            return e
        if self.eat("{"):
            if self.tok.kind == "id" and self.peek().val == ":":
                var = self.name()
                self.expect(":")
                q = self.qtype()
                self.expect("|")
                body = self.expr()
                self.expect("}")
                return SSetB(var, q, body, p)
            items = [self.expr()]
            while self.eat(","):
                items.append(self.expr())
            self.expect("}")
            return SSetEnum(items, p)
        self.error("expected an expression")

    def binder(self, kind, p):
        groups = []
        while True:
            names = [self.name()]
            while self.eat(","):
                names.append(self.name())
            self.expect(":")
            q = self.qtype()
            groups.append((names, q))
            if kind in ("forall", "exists") and self.eat(","):
                continue
            break
        self.expect(".")
        return SBinder(kind, groups, self.expr(), p)


def _is_op_token(v: str) -> bool:
    return v in _UNI_OPS or v in ("+", "-", "*", "/", "<=", "<", ">", ">=") or (
        lx.is_symbolic(v) and v not in ("(", ")", "{", "}", "[", "]", ",", ";", ":", ".",
                                        "..", "@[", ":=", "|->", "->", "\\", "|", "!", "^",
                                        "~", "=", "=>", "<=>", "/\\", "\\/", "~=", "!=",
                                        "!~=", "~in"))


def parse_module_file(text) -> list:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    prescan_infix(text)
    return Parser(text).module()


def parse_term(text: str) -> SNode:
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error("trailing input")
    return e


def parse_qtype(text: str) -> SQ:
    p = Parser(text)
    q = p.qtype()
    if p.tok.kind != "eof":
        p.error("trailing input")
    return q

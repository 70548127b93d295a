"""Interpretations, the valuation function, model enumeration and the
bounded validity check.

A theory is anything with a ``language`` and ``axioms`` (a list of
(label, sentence) pairs, sentence None when opaque) and optionally
``definitions`` (a list of (name, type, definiens)).  Defined constants
are not enumerated: their value is computed from the definiens once the
constants it mentions are fixed, and a model where the definiens is
undefined is dropped (the defining axiom c = definiens is false there).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import BudgetExceeded, NotFinitelyCheckable, TypeError
from ..kernel import (
    BOOL, Const, Expr, Language, TypeExpr, constants_of, free_vars, infer_type, show_type,
    substitute_many,
)
from ..notation import registry as reg
from .backend import machine_for
from .frame import Frame, build_full_frame
from .program import Program


@dataclass
class Interpretation:
    frame: Frame
    consts: Dict[Tuple[str, TypeExpr], int]  # encoded values

    def value(self, name: str, ty: Optional[TypeExpr] = None):
        if ty is None:
            tys = [t for (n, t) in self.consts if n == name]
            if len(tys) != 1:
                raise KeyError(name)
            ty = tys[0]
        return self.frame.decode(ty, self.consts[(name, ty)])

    def to_json(self) -> dict:
        return {
            "sizes": dict(sorted(self.frame.sizes.items())),
            "constants": [
                {"name": n, "type": show_type(t), "value": self.frame.to_json(t, v)}
                for (n, t), v in self.consts.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)


@dataclass
class Refuted:
    countermodel: Interpretation
    sizes: Dict[str, int]
    models_checked: int = 0

    ok = False

    def to_json(self) -> dict:
        return {"result": "Refuted", "sizes": self.sizes, "models_checked": self.models_checked,
                "countermodel": self.countermodel.to_json()}


@dataclass
class NoCounterexample:
    models_checked: int
    sizes: Dict[str, int] = field(default_factory=dict)

    ok = True

    def to_json(self) -> dict:
        return {"result": "NoCounterexample", "sizes": self.sizes,
                "models_checked": self.models_checked}


# --------------------------------------------------------------------------
# evaluation in a given interpretation


def _program_for(M: Interpretation, exprs: Sequence[Expr]):
    prog = Program(M.frame, list(M.consts))
    roots = [prog.add(e) for e in exprs]
    m = machine_for(prog)
    for i, c in enumerate(prog.consts):
        m.set_const(i, M.consts[c])
    return m, roots


def eval_code(e: Expr, M: Interpretation, phi: Optional[dict] = None) -> int:
    """Encoded value of e (-1 if undefined).  phi maps (name, type) of the
    free variables to encoded values."""
    phi = phi or {}
    fv = free_vars(e)
    missing = sorted(n for (n, t) in fv if (n, t) not in phi)
    if missing:
        raise TypeError(f"no value assigned to {missing}")
    # free variables become fresh constants holding their assigned values
    sub = {v: Const("\0" + v[0], v[1]) for v in fv}
    e = substitute_many(e, sub) if sub else e
    prog = Program(M.frame, list(M.consts) + [(c.name, c.cty) for c in sub.values()])
    r = prog.add(e)
    m = machine_for(prog)
    for i, c in enumerate(M.consts):
        m.set_const(i, M.consts[c])
    for k, v in enumerate(sub):
        m.set_const(len(M.consts) + k, phi[v])
    return m.run(r)


def eval(e: Expr, M: Interpretation, phi: Optional[dict] = None):
    """The valuation V_phi(e): a decoded value, or None if undefined."""
    return M.frame.decode(infer_type(e), eval_code(e, M, phi))


def is_valid(sentence: Expr, M: Interpretation) -> bool:
    """T in M for every assignment to the free variables."""
    if infer_type(sentence) != BOOL:
        raise TypeError("is_valid needs a formula")
    for (name, t) in sorted(free_vars(sentence), key=lambda v: v[0]):
        sentence = reg.forall_(name, t, sentence)
    return eval_code(sentence, M) == 1


# --------------------------------------------------------------------------
# model enumeration


def _theory_parts(T):
    L: Language = T.language
    axioms = list(getattr(T, "axioms", ()))
    defs = list(getattr(T, "definitions", ()))
    for lab, s in axioms:
        if s is None:
            raise NotFinitelyCheckable(f"axiom {lab} is opaque")
    for name, t, d in defs:
        if d is None:
            raise NotFinitelyCheckable(f"definition of {name} is opaque")
    return L, axioms, defs


def _sizes_for(L: Language, sizes) -> Dict[str, int]:
    if isinstance(sizes, int):
        return {b: sizes for b in sorted(L.base_types)}
    out = dict(sizes)
    if "*" in out:
        n = out.pop("*")
        for b in L.base_types:
            out.setdefault(b, n)
    return out


class _Search:
    """Backtracking over the primitive constants in declaration order.
    Each axiom is checked as soon as every constant it depends on has a
    value; defined constants are computed when their dependencies are."""

    def __init__(self, T, sizes, extra: Sequence[Expr] = (), budget=None, prefer="auto"):
        L, axioms, defs = _theory_parts(T)
        self.frame = build_full_frame(L, _sizes_for(L, sizes), budget=budget)
        defined = {(n, t) for n, t, _ in defs}
        self.order = [c for c in L.constants if c not in defined]
        # with a sentence to check, definitions that neither it nor an axiom
        # mentions are computed only for a candidate countermodel, by a
        # program of their own (their values may not fit the fast machine)
        self.lazy = []
        if extra:
            needed = set()
            for e in list(extra) + [s for _, s in axioms]:
                needed |= constants_of(e)
            for n, t, d in reversed(defs):
                if (n, t) in needed:
                    needed |= constants_of(d)
            self.lazy = [x for x in defs if (x[0], x[1]) not in needed]
            defs = [x for x in defs if (x[0], x[1]) in needed]
        self.prefer = prefer
        consts = self.order + [(n, t) for n, t, _ in defs]
        prog = Program(self.frame, consts)
        for c in self.order:
            self.frame.need(c[1])
        # dependencies, closed through definitions
        dep: Dict[tuple, set] = {c: {c} for c in self.order}
        for n, t, d in defs:
            s = set()
            for c in constants_of(d):
                s |= dep.get(c, {c})
            dep[(n, t)] = s
        pos = {c: i for i, c in enumerate(self.order)}

        def level(cs) -> int:
            prim = set()
            for c in cs:
                prim |= dep.get(c, {c})
            return max((pos[c] for c in prim if c in pos), default=-1)

        # work at each level: a definition is computed at the level of its
        # first user (the sentence being checked counts as the last level),
        # and axioms that need no definition of their level run first
        last = len(self.order) - 1
        ax_level = [level(constants_of(s)) for _, s in axioms]
        def_level: Dict[tuple, int] = {}
        for i in reversed(range(len(defs))):
            n, t, d = defs[i]
            users = [lv for (_, s), lv in zip(axioms, ax_level) if (n, t) in constants_of(s)]
            users += [def_level[(n2, t2)] for n2, t2, d2 in defs[i + 1:]
                      if (n, t) in constants_of(d2)]
            def_level[(n, t)] = min(users, default=last)
        self.work_at: Dict[int, List[Tuple[Optional[int], int]]] = {}
        for (lab, s), lv in zip(axioms, ax_level):
            if not any(def_level.get(c) == lv for c in constants_of(s)):
                self.work_at.setdefault(lv, []).append((None, prog.add(s)))
        for n, t, d in defs:
            lv = def_level[(n, t)]
            self.work_at.setdefault(lv, []).append((prog.const_index[(n, t)], prog.add(d)))
        for (lab, s), lv in zip(axioms, ax_level):
            if any(def_level.get(c) == lv for c in constants_of(s)):
                self.work_at.setdefault(lv, []).append((None, prog.add(s)))
        self.extra = [prog.add(e) for e in extra]
        self.prog = prog
        self.machine = machine_for(prog, prefer)
        self.vals = [0] * len(consts)

    def _set(self, i: int, v: int) -> None:
        self.vals[i] = v
        self.machine.set_const(i, v)

    def complete(self) -> Optional[dict]:
        """The current values together with the lazy definitions, or None
        when one of those is undefined (the candidate is not a model)."""
        vals = dict(zip(self.prog.consts, self.vals))
        if not self.lazy:
            return vals
        consts = list(vals) + [(n, t) for n, t, _ in self.lazy]
        prog = Program(self.frame, consts)
        rs = [prog.add(d) for _, _, d in self.lazy]
        m = machine_for(prog, self.prefer)
        for i, c in enumerate(vals):
            m.set_const(i, vals[c])
        for (n, t, _), r in zip(self.lazy, rs):
            v = m.run(r)
            if v < 0:
                return None
            vals[(n, t)] = v
            m.set_const(prog.const_index[(n, t)], v)
        return vals

    def ok_at(self, lvl: int) -> bool:
        m = self.machine
        for ci, r in self.work_at.get(lvl, ()):
            v = m.run(r)
            if ci is None:
                if v != 1:
                    return False
            elif v < 0:
                return False
            else:
                self._set(ci, v)
        return True

    def models(self, first: Optional[range] = None) -> Iterator[dict]:
        """Yields the encoded constant values of each model in turn."""
        consts = self.prog.consts
        if not self.ok_at(-1):
            return
        k = len(self.order)
        if k == 0:
            yield dict(zip(consts, self.vals))
            return
        ranges = [range(self.frame.card(t)) for _, t in self.order]
        if first is not None:
            ranges[0] = first
        its = [iter(ranges[0])] + [None] * (k - 1)
        lvl = 0
        while lvl >= 0:
            v = next(its[lvl], None)
            if v is None:
                lvl -= 1
                continue
            self._set(lvl, v)
            if not self.ok_at(lvl):
                continue
            if lvl == k - 1:
                yield dict(zip(consts, self.vals))
            else:
                lvl += 1
                its[lvl] = iter(ranges[lvl])

    def interpretation(self, vals: dict, language: Language) -> Interpretation:
        """Declared constants first (declaration order), then defined ones."""
        order = list(language.constants) + [c for c in vals if c not in language.constants]
        return Interpretation(self.frame, {c: vals[c] for c in order if c in vals})


def enumerate_models(T, base_sizes, budget: Optional[int] = None) -> Iterator[Interpretation]:
    """Every model of T over the full frame with the given base sizes, in
    lexicographic order of the constant tables (declaration order)."""
    s = _Search(T, base_sizes, budget=budget)
    for vals in s.models():
        yield s.interpretation(vals, T.language)


def count_models(T, base_sizes, budget: Optional[int] = None) -> int:
    s = _Search(T, base_sizes, budget=budget)
    return sum(1 for _ in s.models())


def _run_search(s: _Search, first):
    n = 0
    for vals in s.models(first):
        n += 1
        if s.machine.run(s.extra[0]) != 1:
            full = s.complete()
            if full is None:
                n -= 1
            else:
                return n, full
    return n, None


def _check_chunk(T, sentence, sizes, budget, lo, hi):
    s = _Search(T, sizes, [sentence], budget=budget)
    return _run_search(s, range(lo, hi))


def check_validity_at_scale(T, sentence: Expr, base_sizes, budget: Optional[int] = None,
                            jobs: int = 1):
    """Refuted(countermodel) if some model of T at these sizes falsifies the
    sentence, else NoCounterexample(models_checked).  The sentence must
    be closed; a NoCounterexample is evidence, not a proof of validity."""
    if free_vars(sentence):
        raise TypeError("check_validity_at_scale needs a closed sentence")
    if infer_type(sentence) != BOOL:
        raise TypeError("check_validity_at_scale needs a formula")
    sizes = _sizes_for(T.language, base_sizes)
    s = _Search(T, sizes, [sentence], budget=budget)
    if jobs <= 1 or not s.order:
        n, bad = _run_search(s, None)
    else:
        n, bad = _parallel(T, sentence, sizes, budget, s, jobs)
    if bad is not None:
        return Refuted(s.interpretation(bad, T.language), sizes, n)
    return NoCounterexample(n, sizes)


def _parallel(T, sentence, sizes, budget, s: _Search, jobs: int):
    total = s.frame.card(s.order[0][1])
    step = max(1, -(-total // (jobs * 4)))
    chunks = [(lo, min(total, lo + step)) for lo in range(0, total, step)]
    n = 0
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futs = [ex.submit(_check_chunk, T, sentence, sizes, budget, lo, hi) for lo, hi in chunks]
        # merged in enumeration order, so the reported countermodel is the
        # first one a sequential run would find
        for f in futs:
            k, bad = f.result()
            n += k
            if bad is not None:
                for g in futs:
                    g.cancel()
                return n, bad
    return n, None


def sweep(T, sentence: Expr, sizes_list, budget: Optional[int] = None, jobs: int = 1):
    """check_validity_at_scale at each size.  Sizes whose domains exceed
    the budget are reported with the BudgetExceeded error instead."""
    out = []
    for sz in sizes_list:
        try:
            out.append((sz, check_validity_at_scale(T, sentence, sz, budget, jobs)))
        except BudgetExceeded as e:
            out.append((sz, e))
    return out

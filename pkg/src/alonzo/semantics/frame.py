"""Full frames over finite base domains, with values encoded as ints.

Every domain D_t is identified with range(card(t)):

* o is {0, 1} (F, T);
* a base type of size n is range(n);
* a pair (a, b) is a * card(snd) + b;
* a function is its table written as a number, most significant digit
  first.  Predicates use base 2 (they are total); other functions use
  base card(cod) + 1 where digit 0 means "undefined here" and digit k
  means value k - 1.

Integer order therefore coincides with lexicographic order of tables.
Undefined values are represented by -1 and never occur inside domains.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

from ..errors import BudgetExceeded, TypeError
from ..kernel import BaseTy, BoolTy, FunTy, Language, ProdTy, TypeExpr, show_type

DEFAULT_BUDGET = 10 ** 6
UNDEF = -1


def default_budget() -> int:
    v = os.environ.get("ALONZO_BUDGET")
    return int(v) if v else DEFAULT_BUDGET


@dataclass(frozen=True)
class Atom:
    base: str
    index: int

    def __repr__(self):
        return f"{self.base}{self.index}"


@dataclass(frozen=True)
class Func:
    """A function table; entries absent from `table` are undefined."""
    table: tuple  # ((arg, value), ...) in domain order

    def __call__(self, x):
        for a, v in self.table:
            if a == x:
                return v
        return None


class Frame:
    def __init__(self, sizes: Dict[str, int], budget: Optional[int] = None):
        for b, n in sizes.items():
            if n < 1:
                raise ValueError(f"base type {b} needs a positive size")
        self.sizes = dict(sizes)
        self.budget = default_budget() if budget is None else budget
        self._card: Dict[TypeExpr, int] = {}

    def card(self, t: TypeExpr) -> int:
        c = self._card.get(t)
        if c is not None:
            return c
        if isinstance(t, BoolTy):
            c = 2
        elif isinstance(t, BaseTy):
            if t.name not in self.sizes:
                raise TypeError(f"no size given for base type {t.name}")
            c = self.sizes[t.name]
        elif isinstance(t, ProdTy):
            c = self.card(t.fst) * self.card(t.snd)
        elif isinstance(t, FunTy):
            n = self.card(t.dom)
            if n > 4 * self.budget:
                # the exponent alone would be unreasonable; the caller will
                # hit the budget on the domain anyway
                raise BudgetExceeded(show_type(t.dom), n, self.budget)
            c = self.base(t) ** n
        else:
            raise TypeError(f"not a type: {t!r}")
        self._card[t] = c
        return c

    def base(self, t: FunTy) -> int:
        return 2 if isinstance(t.cod, BoolTy) else self.card(t.cod) + 1

    def need(self, t: TypeExpr) -> int:
        """Cardinality of a domain that will be materialized."""
        c = self.card(t)
        if c > self.budget:
            raise BudgetExceeded(show_type(t), c, self.budget)
        return c

    def elements(self, t: TypeExpr) -> range:
        return range(self.need(t))

    # decoding

    def decode(self, t: TypeExpr, code: int):
        """Value for a code: bool, Atom, tuple or Func; None if undefined."""
        if code < 0:
            return None
        if isinstance(t, BoolTy):
            return bool(code)
        if isinstance(t, BaseTy):
            return Atom(t.name, code)
        if isinstance(t, ProdTy):
            k = self.card(t.snd)
            return (self.decode(t.fst, code // k), self.decode(t.snd, code % k))
        return Func(tuple((self.decode(t.dom, x), v)
                          for x, v in self._entries(t, code) if v is not None))

    def _entries(self, t: FunTy, code: int):
        n, b = self.card(t.dom), self.base(t)
        digits = []
        for _ in range(n):
            code, d = divmod(code, b)
            digits.append(d)
        digits.reverse()
        pred = isinstance(t.cod, BoolTy)
        for x, d in enumerate(digits):
            if pred:
                yield x, self.decode(t.cod, d)
            else:
                yield x, None if d == 0 else self.decode(t.cod, d - 1)

    def apply(self, t: FunTy, f: int, x: int) -> int:
        if f < 0 or x < 0:
            return 0 if isinstance(t.cod, BoolTy) else UNDEF
        n, b = self.card(t.dom), self.base(t)
        d = (f // b ** (n - 1 - x)) % b
        return d if isinstance(t.cod, BoolTy) else d - 1

    def to_json(self, t: TypeExpr, code: int):
        """JSON form: bools, atom indices, [fst, snd] pairs and function
        tables as arrays indexed by argument code, null where undefined."""
        if code < 0:
            return None
        if isinstance(t, BoolTy):
            return bool(code)
        if isinstance(t, BaseTy):
            return code
        if isinstance(t, ProdTy):
            k = self.card(t.snd)
            return [self.to_json(t.fst, code // k), self.to_json(t.snd, code % k)]
        out = []
        n, b = self.card(t.dom), self.base(t)
        pred = isinstance(t.cod, BoolTy)
        for x in range(n):
            d = (code // b ** (n - 1 - x)) % b
            out.append(bool(d) if pred else self.to_json(t.cod, d - 1))
        return out

    def from_json(self, t: TypeExpr, v) -> int:
        if v is None:
            return UNDEF
        if isinstance(t, BoolTy):
            return int(bool(v))
        if isinstance(t, BaseTy):
            return int(v)
        if isinstance(t, ProdTy):
            return self.from_json(t.fst, v[0]) * self.card(t.snd) + self.from_json(t.snd, v[1])
        pred = isinstance(t.cod, BoolTy)
        code = 0
        for entry in v:
            d = self.from_json(t.cod, entry)
            code = code * self.base(t) + (d if pred else d + 1)
        return code


def build_full_frame(L: Language, base_sizes: Dict[str, int],
                     needed: Iterable[TypeExpr] = (), budget: Optional[int] = None) -> Frame:
    missing = sorted(set(L.base_types) - set(base_sizes))
    if missing:
        raise TypeError(f"no size given for base types {missing}")
    fr = Frame({b: base_sizes[b] for b in sorted(L.base_types)}, budget)
    for t in needed:
        fr.need(t)
    return fr

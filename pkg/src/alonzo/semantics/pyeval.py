"""Pure-Python backend: each program node becomes a closure over a
shared slot list and constant list."""

from __future__ import annotations

from typing import Callable, Dict, List

from .program import (
    ABS, AND, APP, CONST, EQ, EXISTS, FORALL, FST, IF, IMPLIES, IOTA, ISDEF, LET, LIT, NOT, OR,
    PAIR, SND, VAR, Program,
)


class PyMachine:
    name = "python"

    def __init__(self, prog: Program):
        self.prog = prog
        self.env: List[int] = [0] * max(prog.nslots, 1)
        self.cv: List[int] = [0] * len(prog.consts)
        self._fns: Dict[int, Callable] = {}
        self._roots: List[Callable] = []

    def set_const(self, i: int, v: int) -> None:
        self.cv[i] = v

    def run(self, root: int) -> int:
        while len(self._roots) <= root:
            self._roots.append(self.fn(self.prog.roots[len(self._roots)]))
        return self._roots[root]()

    def eval_node(self, node: int) -> int:
        if len(self.env) < self.prog.nslots:
            self.env.extend([0] * (self.prog.nslots - len(self.env)))
        return self.fn(node)()

    def fn(self, i: int) -> Callable[[], int]:
        f = self._fns.get(i)
        if f is None:
            f = self._build(i)
            self._fns[i] = f
        return f

    def _build(self, i: int):
        op, a, b, c, slot, n, base, flag = self.prog.nodes[i]
        env, cv = self.env, self.cv
        if op == LIT:
            v = self.prog.lits[a]
            return lambda: v
        if op == VAR:
            return lambda: env[slot]
        if op == CONST:
            return lambda: cv[a]
        if op == EQ:
            fa, fb = self.fn(a), self.fn(b)

            def eq():
                x = fa()
                if x < 0:
                    return 0
                y = fb()
                return 1 if x == y else 0
            return eq
        if op == ISDEF:
            fa = self.fn(a)
            return lambda: 1 if fa() >= 0 else 0
        if op == NOT:
            fa = self.fn(a)
            return lambda: 1 - fa()
        if op == AND:
            fa, fb = self.fn(a), self.fn(b)
            return lambda: fb() if fa() else 0
        if op == OR:
            fa, fb = self.fn(a), self.fn(b)
            return lambda: 1 if fa() else fb()
        if op == IMPLIES:
            fa, fb = self.fn(a), self.fn(b)
            return lambda: fb() if fa() else 1
        if op == FORALL:
            fa = self.fn(a)

            def forall():
                for v in range(n):
                    env[slot] = v
                    if not fa():
                        return 0
                return 1
            return forall
        if op == EXISTS:
            fa = self.fn(a)

            def exists():
                for v in range(n):
                    env[slot] = v
                    if fa():
                        return 1
                return 0
            return exists
        if op == IOTA:
            fa = self.fn(a)

            def iota():
                found = -1
                for v in range(n):
                    env[slot] = v
                    if fa():
                        if found >= 0:
                            return -1
                        found = v
                return found
            return iota
        if op == APP:
            ff, fx = self.fn(a), self.fn(b)
            pows = self.prog.pows[c:c + n]
            if flag:
                def app_pred():
                    f = ff()
                    if f < 0:
                        return 0
                    x = fx()
                    if x < 0:
                        return 0
                    return (f // pows[x]) & 1 if base == 2 else (f // pows[x]) % base
                return app_pred

            def app():
                f = ff()
                if f < 0:
                    return -1
                x = fx()
                if x < 0:
                    return -1
                return (f // pows[x]) % base - 1
            return app
        if op == ABS:
            fa = self.fn(a)
            if flag:
                def abs_pred():
                    code = 0
                    for v in range(n):
                        env[slot] = v
                        code = code * base + fa()
                    return code
                return abs_pred

            def abs_():
                code = 0
                for v in range(n):
                    env[slot] = v
                    code = code * base + fa() + 1
                return code
            return abs_
        if op == PAIR:
            fa, fb = self.fn(a), self.fn(b)

            def pair():
                x = fa()
                if x < 0:
                    return -1
                y = fb()
                if y < 0:
                    return -1
                return x * n + y
            return pair
        if op == FST:
            fa = self.fn(a)

            def fst():
                x = fa()
                return -1 if x < 0 else x // n
            return fst
        if op == SND:
            fa = self.fn(a)

            def snd():
                x = fa()
                return -1 if x < 0 else x % n
            return snd
        if op == IF:
            fa, fb, fc = self.fn(a), self.fn(b), self.fn(c)
            return lambda: fb() if fa() else fc()
        if op == LET:
            fa, fb = self.fn(a), self.fn(b)
            undef = 0 if flag else -1

            def let():
                x = fa()
                if x < 0:
                    return undef
                env[slot] = x
                return fb()
            return let
        raise ValueError(f"bad opcode {op}")

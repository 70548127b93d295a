"""Hypothesis strategies for small well-typed kernel terms over M."""

from hypothesis import strategies as st

from alonzo.kernel import BOOL, Abs, App, BaseTy, Const, Eq, FunTy, Iota, Pair, ProdTy, Var

M = BaseTy("M")
MM = ProdTy(M, M)
OP = Const("op", FunTy(MM, M))
E = Const("e", M)
NAMES = ["x", "y", "z"]


def terms_of_m(depth=3):
    leaf = st.one_of(st.just(E), st.sampled_from(NAMES).map(lambda n: Var(n, M)))
    if depth == 0:
        return leaf
    sub = terms_of_m(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, sub).map(lambda p: App(OP, Pair(*p))),
        st.tuples(st.sampled_from(NAMES), formulas(depth - 1)).map(lambda p: Iota(p[0], M, p[1])),
    )


def formulas(depth=3):
    if depth == 0:
        return st.tuples(terms_of_m(0), terms_of_m(0)).map(lambda p: Eq(*p))
    sub = terms_of_m(depth - 1)
    return st.one_of(
        st.tuples(sub, sub).map(lambda p: Eq(*p)),
        st.tuples(st.sampled_from(NAMES), formulas(depth - 1)).map(
            lambda p: Eq(Abs(p[0], M, p[1]), Abs(p[0], M, Eq(Var(p[0], M), Var(p[0], M))))),
    )


def terms(depth=3):
    return st.one_of(terms_of_m(depth), formulas(depth))


__all__ = ["M", "MM", "OP", "E", "BOOL", "terms", "terms_of_m", "formulas"]

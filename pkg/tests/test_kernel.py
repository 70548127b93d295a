import pytest
from hypothesis import given, settings

from alonzo.errors import BudgetExceeded, TypeError
from alonzo.kernel import (
    BOOL, Abs, App, BaseTy, Const, Eq, FunTy, Iota, Language, Pair, ProdTy, SetTy, Var,
    alpha_eq, beta_reduce, check_in_language, dumps_json, expr_to_json, free_vars,
    infer_type, show_type, substitute,
)

from strategies import E, M, MM, OP, terms

S = BaseTy("S")
x, y = Var("x", M), Var("y", M)
MON_L = Language({"M"}, [("·", FunTy(MM, M)), ("e", M)])


def test_identity_function_type():
    assert infer_type(Abs("x", M, x)) == FunTy(M, M)


def test_equation_is_a_formula():
    assert infer_type(Eq(E, x)) == BOOL


def test_application_to_pair():
    assert infer_type(App(Const("·", FunTy(MM, M)), Pair(x, y))) == M


@pytest.mark.parametrize("bad", [
    lambda: App(E, x),                          # not a function
    lambda: App(Abs("x", M, x), Var("s", S)),   # argument type
    lambda: Eq(x, Var("s", S)),                 # sides differ
    lambda: Iota("p", BOOL, Var("p", BOOL)),    # iota over o
    lambda: Iota("x", M, x),                    # body not a formula
])
def test_ill_typed(bad):
    with pytest.raises(TypeError):
        infer_type(bad())


def test_show_type():
    assert show_type(FunTy(M, FunTy(M, M))) == "M -> M -> M"
    assert show_type(FunTy(FunTy(M, M), M)) == "(M -> M) -> M"
    assert show_type(SetTy(M)) == "{M}"
    assert show_type(FunTy(MM, M)) == "M * M -> M"


def test_language_membership():
    assert check_in_language(x, MON_L)
    assert not check_in_language(Const("act", FunTy(ProdTy(M, S), S)), MON_L)
    assert not check_in_language(Const("e", S), MON_L)


def test_language_rejects_undeclared_base_types():
    with pytest.raises(TypeError):
        Language({"M"}, [("c", S)])


def test_free_vars():
    assert free_vars(Abs("x", M, x)) == frozenset()
    assert free_vars(Eq(x, E)) == {("x", M)}
    assert free_vars(Iota("x", M, Eq(x, y))) == {("y", M)}


def test_same_name_different_type_is_a_different_variable():
    assert free_vars(Abs("x", M, Eq(Var("x", S), Var("x", S)))) == {("x", S)}


def test_substitute():
    assert substitute(x, ("x", M), E) == E
    assert substitute(Abs("x", M, x), ("x", M), E) == Abs("x", M, x)


def test_substitute_avoids_capture():
    out = substitute(Abs("y", M, x), ("x", M), y)
    assert isinstance(out, Abs) and out.var != "y"
    assert out.body == y


def test_substitute_type_mismatch():
    with pytest.raises(TypeError):
        substitute(x, ("x", M), Var("s", S))


def test_alpha_eq():
    assert alpha_eq(Abs("x", M, x), Abs("y", M, y))
    assert not alpha_eq(Abs("x", M, x), Abs("x", M, E))
    p, q = Var("p", BOOL), Var("q", BOOL)
    assert alpha_eq(Eq(Abs("p", BOOL, p), Abs("p", BOOL, p)), Eq(Abs("q", BOOL, q), Abs("p", BOOL, p)))


def test_alpha_eq_respects_binding_structure():
    # \x.\y.x and \x.\y.y differ
    assert not alpha_eq(Abs("x", M, Abs("y", M, x)), Abs("x", M, Abs("y", M, y)))


def test_beta_reduce():
    assert beta_reduce(App(Abs("x", M, x), E)) == E
    singleton = App(Abs("s", SetTy(M), Var("s", SetTy(M))), Abs("x", M, Eq(x, E)))
    assert alpha_eq(beta_reduce(singleton), Abs("x", M, Eq(x, E)))
    assert beta_reduce(Eq(x, y)) == Eq(x, y)


def test_beta_budget():
    # (\f. f (f (f e))) (\x. x) needs several steps
    f = Var("f", FunTy(M, M))
    e = App(Abs("f", FunTy(M, M), App(f, App(f, App(f, E)))), Abs("x", M, x))
    assert beta_reduce(e) == E
    with pytest.raises(BudgetExceeded):
        beta_reduce(e, budget=2)


def test_json_is_canonical():
    j = dumps_json(expr_to_json(Eq(x, E)))
    assert j.startswith('{"tag":"Eq"')
    assert dumps_json(expr_to_json(Eq(x, E))) == j


@given(terms())
def test_alpha_eq_reflexive(t):
    assert alpha_eq(t, t)


@given(terms(), terms())
def test_alpha_eq_symmetric(a, b):
    assert alpha_eq(a, b) == alpha_eq(b, a)


@given(terms())
def test_beta_preserves_type(t):
    assert infer_type(beta_reduce(t)) == infer_type(t)


@settings(max_examples=200)
@given(terms(), terms(2))
def test_substitution_free_vars(t, a):
    if infer_type(a) != M:
        return
    out = substitute(t, ("x", M), a)
    assert infer_type(out) == infer_type(t)
    assert free_vars(out) <= (free_vars(t) - {("x", M)}) | free_vars(a)


@given(terms(), terms(2))
def test_substitution_respects_alpha(t, a):
    if infer_type(a) != M or ("z", M) in free_vars(t):
        return
    a1 = Abs("y", M, t)
    a2 = Abs("z", M, substitute(t, ("y", M), Var("z", M)))
    assert alpha_eq(a1, a2)
    assert alpha_eq(substitute(a1, ("x", M), a), substitute(a2, ("x", M), a))

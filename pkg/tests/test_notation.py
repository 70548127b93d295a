import pytest
from hypothesis import given, settings

from alonzo.corpus import read
from alonzo.errors import AmbiguityError, ParseError, ResolveError, TypeError
from alonzo.kernel import (
    BOOL, Abs, App, BaseTy, Eq, FunTy, Iota, Language, ProdTy, SetTy, Var, alpha_eq, infer_type,
)
from alonzo.notation import (
    Scope, desugar, desugar_nterm, elaborate, lookup, parse_module_file, parse_term, resugar,
    show_expr, show_nterm,
)
from alonzo.notation.registry import builtin_registry

from strategies import terms

M = BaseTy("M")
MM = ProdTy(M, M)
MON = Language({"M"}, [("·", FunTy(MM, M)), ("e", M)])
OPL = Language({"M"}, [("op", FunTy(MM, M)), ("e", M)])


# --------------------------------------------------------------------------
# registry


def test_negation_template():
    # the template is the abstraction applied to the hole for its operand
    x = Var("x", BOOL)
    neg = lookup("¬").template
    assert isinstance(neg, App) and isinstance(neg.fun, Abs) and neg.fun.var_ty == BOOL
    assert alpha_eq(neg.fun, Abs("x", BOOL, Eq(x, desugar("F", MON))))


def test_monoid_abbreviation_has_three_holes():
    d = lookup("MONOID")
    assert [h for h, _ in d.expr_params] == ["M", "F", "E"]
    assert d.kind == "abbreviation" and d.table == "11"
    assert show_expr(lookup("MONOID", [M])) == "MONOID(?M, ?F, ?E)"


def test_bottom_is_a_description_of_nothing():
    b = lookup("bot", [M])
    assert isinstance(b, Iota) and b.var_ty == M
    assert alpha_eq(b, desugar("I x:M. x != x", MON))
    assert show_expr(b) == "bot@[M]"


def test_unknown_notation():
    with pytest.raises(ResolveError):
        lookup("no-such-thing")


def test_registry_covers_the_tables():
    names = {d.name for d in builtin_registry()}
    for n in ["T", "F", "and", "implies", "forall", "exists", "bot", "isdef", "qeq", "UnivSet",
              "emptyset", "subseteq", "fst", "snd", "TOTAL", "FunQTy", "ProdQTy", "SetQTy",
              "set-op", "comp-op", "app-op", "MONOID", "COM-MONOID", "MON-ACTION", "MON-HOMOM"]:
        assert n in names or lookup(n), n


# --------------------------------------------------------------------------
# desugaring


def test_true_desugars_to_identity_equation():
    x = Var("x", BOOL)
    assert alpha_eq(desugar("T", MON), Eq(Abs("x", BOOL, x), Abs("x", BOOL, x)))


def test_forall_is_a_formula():
    assert infer_type(desugar("forall x:M. e · x = x", MON)) == BOOL


def test_chained_equality():
    a = desugar("forall x:M. e · x = x · e = x", MON)
    b = desugar("forall x:M. e · x = x · e /\\ x · e = x", MON)
    assert alpha_eq(a, b)


def test_multi_variable_binder():
    a = desugar("forall x,y:M. x · y = y · x", MON)
    b = desugar("forall x:M. forall y:M. x · y = y · x", MON)
    assert alpha_eq(a, b)


def test_restricted_binder_over_universal_set():
    a = desugar("forall x:UnivSet@[M]. x = x", MON)
    b = desugar("forall x:M. x in UnivSet@[M] => x = x", MON)
    assert alpha_eq(a, b)


def test_isdef_in_quasitype():
    a = desugar("forall x:M. x ~in UnivSet@[M]", MON)
    b = desugar("forall x:M. x! /\\ x in UnivSet@[M]", MON)
    assert alpha_eq(a, b)


def test_undeclared_constant():
    with pytest.raises(ResolveError):
        desugar("forall x:M. x = c", MON)


def test_ill_typed_surface_term():
    with pytest.raises(TypeError):
        desugar("forall x:M. x = T", MON)


def test_parametric_pseudoconstant_needs_context():
    with pytest.raises(AmbiguityError):
        desugar("emptyset = emptyset", MON)


# --------------------------------------------------------------------------
# printing and resugaring


def test_resugar_true():
    assert show_expr(desugar("T", MON)) == "T"


def test_associativity_axiom_prints_compactly():
    text = "forall x,y,z:M. x · (y · z) = (x · y) · z"
    assert show_expr(desugar(text, MON)) == text


def test_unmatched_description_prints_raw():
    assert show_expr(desugar("I x:M. x · x = x", MON)) == "I x:M. x · x = x"


@settings(max_examples=150)
@given(terms())
def test_print_parse_round_trip(t):
    # free variables become bound so the text is closed
    closed = t
    for v in ["x", "y", "z"]:
        closed = Abs(v, M, closed)
    back = desugar(show_expr(closed), OPL)
    assert alpha_eq(back, closed)


@given(terms())
def test_resugar_desugar_round_trip(t):
    assert alpha_eq(desugar_nterm(resugar(t)), t)


# --------------------------------------------------------------------------
# module files


def test_mon_module_file():
    decls = parse_module_file(read("mon.alz"))
    theory, dev = decls[0], decls[1]
    assert theory.name == "MON" and len(theory.axioms) == 2
    kinds = [type(p).__name__ for p in dev.packages]
    assert kinds.count("DefDecl") == 4 and kinds.count("ThmDecl") == 10


def test_empty_module_file():
    assert parse_module_file("") == []
    assert parse_module_file("-- only a comment\n") == []


@pytest.mark.parametrize("text, where", [
    ("forall x:M x = x", (1, 12)),
    ("(x = y", (1, 7)),
    ("x = = y", (1, 5)),
])
def test_parse_error_positions(text, where):
    with pytest.raises(ParseError) as err:
        parse_term(text)
    assert (err.value.line, err.value.col) == where


def test_unbalanced_module():
    with pytest.raises(ParseError) as err:
        parse_module_file("theory X {\n  base_types M;\n")
    assert err.value.line >= 2


def test_mixed_infix_needs_parentheses():
    L = MON.extended(constants=[("★", FunTy(MM, M))])
    with pytest.raises(ParseError):
        desugar("forall x,y:M. x · y ★ x = x", L)
    assert infer_type(desugar("forall x,y:M. (x · y) ★ x = x", L)) == BOOL


def test_show_nterm_of_elaborated_term():
    n = elaborate(parse_term("forall x:M. e · x = x"), Scope.of(MON), BOOL)
    assert show_nterm(n) == "forall x:M. e · x = x"


def test_set_types_print_in_braces():
    assert show_expr(Abs("s", SetTy(M), Var("s", SetTy(M)))) == "id@[{M}]"
    assert show_expr(Abs("s", SetTy(M), Eq(Var("s", SetTy(M)), Var("s", SetTy(M))))) == \
        "{s:{M} | s!}"

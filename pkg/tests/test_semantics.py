import itertools
from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

from alonzo.errors import BudgetExceeded, NotFinitelyCheckable
from alonzo.graph import load_texts
from alonzo.kernel import BOOL, App, BaseTy, Const, Eq, Pair, Var, FunTy, ProdTy, SetTy, show_type
from alonzo.notation import desugar
from alonzo.semantics import (
    HAVE_FASTCORE, Atom, Func, Interpretation, build_full_frame, check_validity_at_scale,
    count_models, enumerate_models, eval, is_valid, sweep,
)
from alonzo.semantics.backend import machine_for
from alonzo.semantics.program import Program

M = BaseTy("M")
MM = ProdTy(M, M)

PLAYGROUND = """
theory MON {
  base_types M;
  constants · : M * M -> M, e : M;
  axioms
    "Ax1": forall x,y,z:M. x · (y · z) = (x · y) · z;
    "Ax2": forall x:M. e · x = x · e = x;
}

theory COM-MON {
  base_types M;
  constants · : M * M -> M, e : M;
  axioms
    "Ax1": forall x,y,z:M. x · (y · z) = (x · y) · z;
    "Ax2": forall x:M. e · x = x · e = x;
    "Ax3": forall x,y:M. x · y = y · x;
}

theory FREE {
  base_types M;
  constants c : M, f : M -> M, p : M -> o;
}

theory ABSURD {
  base_types M;
  axioms
    "no": T = F;
}
"""


@pytest.fixture(scope="module")
def pg():
    return load_texts([PLAYGROUND], certify=False)


def model(theory, n, **tables):
    frame = build_full_frame(theory.language, {"M": n})
    consts = {}
    for (name, t) in theory.language.constants:
        consts[(name, t)] = frame.from_json(t, tables[{"·": "op"}.get(name, name)])
    return Interpretation(frame, consts)


def ev(text, M_, theory):
    return eval(desugar(text, theory.language), M_)


@pytest.fixture(scope="module")
def z2(pg):
    # (Z2, xor, 0)
    return model(pg.theory("MON"), 2, op=[0, 1, 1, 0], e=0)


# --------------------------------------------------------------------------
# frames


def test_domain_sizes():
    frame = build_full_frame(SimpleNamespace(base_types={"M"}, constants={}), {"M": 2})
    assert frame.card(FunTy(M, M)) == 9      # partial functions
    assert frame.card(FunTy(M, BOOL)) == 4   # predicates are total
    assert frame.card(MM) == 4
    assert frame.card(BOOL) == 2


def test_budget_is_per_domain():
    frame = build_full_frame(SimpleNamespace(base_types={"M"}, constants={}), {"M": 3}, budget=100)
    assert frame.card(SetTy(M)) == 8
    with pytest.raises(BudgetExceeded) as err:
        frame.need(FunTy(SetTy(M), SetTy(M)))
    assert show_type(FunTy(SetTy(M), SetTy(M))) in str(err.value)


def test_sizes_must_be_positive():
    with pytest.raises(ValueError):
        build_full_frame(SimpleNamespace(base_types={"M"}, constants={}), {"M": 0})


# --------------------------------------------------------------------------
# valuation


def test_undefined_equality_is_false(pg, z2):
    assert ev("bot@[M] = bot@[M]", z2, pg.theory("MON")) is False


def test_true(pg, z2):
    assert ev("T", z2, pg.theory("MON")) is True


def test_application_of_empty_function_is_undefined(pg, z2):
    assert ev("emptyfun@[M,M] e", z2, pg.theory("MON")) is None


def test_predicate_application_falls_back_to_false(pg, z2):
    mon = pg.theory("MON")
    # undefined function in predicate position
    assert ev("bot@[M -> o] e", z2, mon) is False
    # undefined argument
    assert ev("(\\x:M. T) bot@[M]", z2, mon) is False
    assert ev("~((\\x:M. T) bot@[M])", z2, mon) is True


@pytest.mark.parametrize("text, n, expected", [
    ("I x:M. x = x", 1, Atom("M", 0)),
    ("I x:M. x = x", 2, None),      # two witnesses
    ("I x:M. x != x", 2, None),     # no witness
    ("I x:M. x = e", 2, Atom("M", 0)),
])
def test_description_needs_a_unique_witness(pg, text, n, expected):
    mon = pg.theory("MON")
    M_ = model(mon, n, op=[0] * (n * n), e=0)
    assert ev(text, M_, mon) == expected


@pytest.mark.parametrize("text, defined", [
    ("(e, e)", True),
    ("(e, bot@[M])", False),
    ("(bot@[M], e)", False),
    ("(bot@[M], bot@[M])", False),
])
def test_pairs_are_strict(pg, z2, text, defined):
    assert (ev(text, z2, pg.theory("MON")) is not None) == defined


@pytest.mark.parametrize("a, b, expected", [
    ("e", "e", True),
    ("e", "I x:M. x != e", False),
    ("e", "bot@[M]", False),
    ("bot@[M]", "e", False),
    ("bot@[M]", "bot@[M]", True),
])
def test_quasi_equality(pg, z2, a, b, expected):
    assert ev(f"({a}) ~= ({b})", z2, pg.theory("MON")) is expected


def test_abstraction_omits_undefined_entries(pg, z2):
    f = ev("\\x:M. I y:M. y != x /\\ x = e", z2, pg.theory("MON"))
    assert isinstance(f, Func)
    assert f(Atom("M", 0)) == Atom("M", 1) and f(Atom("M", 1)) is None


def test_is_valid_examples(pg, z2):
    mon, com = pg.theory("MON"), pg.theory("COM-MON")
    assert is_valid(desugar("forall x,y,z:M. x · (y · z) = (x · y) · z", mon.language), z2)
    assert is_valid(desugar("T", mon.language), z2)
    # {e, a, b} with a·x = a and b·x = b for x != e
    left = model(com, 3, op=[0, 1, 2, 1, 1, 1, 2, 2, 2], e=0)
    assert not is_valid(com.axiom("Ax3").sentence, left)


def test_is_valid_quantifies_free_variables(pg, z2):
    mon = pg.theory("MON")
    op, e, x = Const("·", FunTy(MM, M)), Const("e", M), Var("x", M)
    assert is_valid(Eq(App(op, Pair(x, e)), x), z2)
    assert not is_valid(Eq(x, e), z2)


def test_formulas_always_have_a_value(pg):
    mon = pg.theory("MON")
    for M_ in enumerate_models(mon, {"M": 2}):
        for text in ["bot@[M] = e", "bot@[M -> o] e", "(I x:M. x = x) = e", "T", "F"]:
            assert ev(text, M_, mon) in (True, False)


# --------------------------------------------------------------------------
# models


def brute_force_monoids(n, commutative=False):
    count = 0
    for tab in itertools.product(range(n), repeat=n * n):
        op = lambda x, y: tab[x * n + y]
        r = range(n)
        if any(op(x, op(y, z)) != op(op(x, y), z) for x in r for y in r for z in r):
            continue
        if commutative and any(op(x, y) != op(y, x) for x in r for y in r):
            continue
        count += sum(all(op(e, x) == x == op(x, e) for x in r) for e in r)
    return count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monoid_counts_match_brute_force(pg, n):
    assert count_models(pg.theory("MON"), {"M": n}) == brute_force_monoids(n)
    assert count_models(pg.theory("COM-MON"), {"M": n}) == brute_force_monoids(n, True)


def test_monoid_counts_golden(pg):
    assert [count_models(pg.theory("MON"), n) for n in (1, 2, 3)] == [1, 4, 33]


def test_contradictory_theory_has_no_models(pg):
    assert list(enumerate_models(pg.theory("ABSURD"), {"M": 2})) == []


def test_enumeration_is_deterministic(pg):
    a = [m.dumps() for m in enumerate_models(pg.theory("MON"), 2)]
    b = [m.dumps() for m in enumerate_models(pg.theory("MON"), 2)]
    assert a == b and len(a) == 4


def test_commutativity_refuted_at_three(pg):
    mon = pg.theory("MON")
    s = desugar("forall x,y:M. x · y = y · x", mon.language)
    assert check_validity_at_scale(mon, s, 2).ok
    r = check_validity_at_scale(mon, s, 3)
    assert not r.ok
    j = r.to_json()
    assert j["result"] == "Refuted" and j["sizes"] == {"M": 3}
    tables = {c["name"]: c["value"] for c in j["countermodel"]["constants"]}
    assert tables == {"·": [0, 0, 0, 0, 1, 2, 2, 2, 2], "e": 1}
    # the countermodel really is a monoid where commutativity fails
    cm = r.countermodel
    assert all(is_valid(a.sentence, cm) for a in mon.axiom_list)
    assert not is_valid(s, cm)


def test_parallel_check_agrees(pg):
    mon = pg.theory("MON")
    s = desugar("forall x,y:M. x · y = y · x", mon.language)
    one = check_validity_at_scale(mon, s, 3, jobs=1)
    many = check_validity_at_scale(mon, s, 3, jobs=3)
    assert one.countermodel.dumps() == many.countermodel.dumps()
    t = desugar("forall x:M. (forall y:M. x · y = y · x = y) => x = e", mon.language)
    assert check_validity_at_scale(mon, t, 3, jobs=3).models_checked == 33


def test_true_has_no_counterexample(pg):
    mon = pg.theory("MON")
    r = check_validity_at_scale(mon, desugar("T", mon.language), 2)
    assert r.ok and r.models_checked == 4


def test_sweep_reports_budget(pg):
    mon = pg.theory("MON")
    s = desugar("forall f:M -> M. f = f", mon.language)
    out = sweep(mon, s, [1, 2, 3], budget=20)
    assert [sz for sz, _ in out] == [1, 2, 3]
    assert isinstance(out[2][1], BudgetExceeded)


def test_opaque_theory_is_not_finitely_checkable():
    ws = load_texts(["theory X { base_types M; opaque axioms \"A\"; }"], certify=False)
    with pytest.raises(NotFinitelyCheckable):
        count_models(ws.theory("X"), 1)


# --------------------------------------------------------------------------
# universal sets


LEMMA_1 = {
    1: "(UnivSet@[{a}])!",
    2: "UnivSet@[{a}] != emptyset@[{a}]",
    3: "forall x:{a}. x in UnivSet@[{a}]",
    5: "(forall x:{a}. {b}) <=> (forall x:UnivSet@[{a}]. {b})",
    8: "({t})! <=> ({t}) ~in UnivSet@[{a}]",
}
BODIES = ["p x", "x = c", "f x = x"]
TERMS = {"M": ["c", "f c", "f (f c)", "bot@[M]"], "M -> M": ["f", "bot@[M -> M]"]}


def lemma_1_sentences(L):
    out = []
    for item, tpl in LEMMA_1.items():
        for a in ["M", "M -> M", "M * M", "{M}"]:
            if item == 5:
                out += [(item, tpl.format(a=a, b=b)) for b in BODIES if a == "M"]
            elif item == 8:
                out += [(item, tpl.format(a=a, t=t)) for t in TERMS.get(a, [])]
            else:
                out.append((item, tpl.format(a=a)))
    return [(i, text, desugar(text, L)) for i, text in out]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_universal_set_lemma(pg, n):
    free = pg.theory("FREE")
    for item, text, s in lemma_1_sentences(free.language):
        r = check_validity_at_scale(free, s, n)
        assert r.ok, (item, text, n)
        assert r.models_checked == (n + 1) ** n * n * 2 ** n


# --------------------------------------------------------------------------
# definitions are conservative


def test_definition_is_conservative(pg):
    mon = pg.theory("MON")
    L = mon.language
    star = desugar("\\p:M * M. snd p · fst p", L)
    ext = SimpleNamespace(language=L.extended(constants=[("★", FunTy(MM, M))]),
                          axioms=mon.axioms, definitions=[("★", FunTy(MM, M), star)])
    sentences = ["forall x,y:M. x · y = y · x", "forall x:M. x · x = x",
                 "exists x:M. x != e", "forall x:M. (forall y:M. x · y = y) => x = e"]
    base = list(enumerate_models(mon, 2))
    extended = list(enumerate_models(ext, 2))
    assert len(base) == len(extended)
    for b, x in zip(base, extended):
        for text in sentences:
            s = desugar(text, L)
            assert is_valid(s, b) == is_valid(s, x)


# --------------------------------------------------------------------------
# backends


@pytest.mark.skipif(not HAVE_FASTCORE, reason="compiled evaluator not built")
@settings(max_examples=60, deadline=None)
@given(st.sampled_from([
    "forall x,y:M. x · y = y · x", "exists x:M. forall y:M. x · y = x",
    "(I x:M. x · x = x) = e", "forall s:{M}. e in s => (exists x:M. x in s)",
    "forall f:M -> M. (exists x:M. f x = e) \\/ (forall x:M. (f x)! => f x != e)",
    "(\\x:M. I y:M. y · x = e) = (\\x:M. I y:M. x · y = e)",
]), st.integers(1, 2))
def test_backends_agree(pg, text, n):
    mon = pg.theory("MON")
    s = desugar(text, mon.language)
    for M_ in enumerate_models(mon, n):
        prog = Program(M_.frame, list(M_.consts))
        r = prog.add(s)
        results = []
        for prefer in ("python", "cython"):
            m = machine_for(prog, prefer)
            for i, c in enumerate(prog.consts):
                m.set_const(i, M_.consts[c])
            results.append(m.run(r))
        assert results[0] == results[1]


def test_pure_backend_selected_by_environment(pure, pg):
    from alonzo.semantics import backend_name
    assert backend_name() == "python"
    assert count_models(pg.theory("MON"), 3) == 33

import json

import pytest

from alonzo.corpus import load_corpus
from alonzo.errors import ClashError, MissingDependency, MorphismRejected, TypeError
from alonzo.graph import (
    CheckedFinite, Refuted, Trusted, Workspace, build_graph, counts, entails, export_graph,
    identity_translation, load_texts, obligations,
)
from alonzo.kernel import BaseTy, FunTy, ProdTy, alpha_eq, infer_type
from alonzo.notation import desugar, show_expr

MON_TEXT = """
theory MON {
  base_types M;
  constants · : M * M -> M, e : M;
  axioms
    "Ax1": forall x,y,z:M. x · (y · z) = (x · y) · z;
    "Ax2": forall x:M. e · x = x · e = x;
}
"""

SQUARES = MON_TEXT + """
development MON-1 of MON {
  def "Sq" sq : M -> M := \\x:M. x · x;
  thm "S": forall x:M. sq x = x · x;
}

theory MON2 {
  base_types N;
  constants * : N * N -> N, u : N;
  axioms
    "Ax1": forall x,y,z:N. x * (y * z) = (x * y) * z;
    "Ax2": forall x:N. u * x = x * u = x;
}

translation MON-to-MON2 : MON -> MON2 {
  type M |-> N;
  const · |-> (*);
  const e |-> u;
}
"""


def test_obligation_counts(ws):
    assert counts(obligations(ws.translation("special-MON-to-T"))) == (0, 2, 2)
    assert counts(obligations(ws.translation("general-MON-to-T"))) == (1, 2, 2)
    assert counts(obligations(ws.translation("MON-over-COF-to-STR-2"))) == (1, 12, 20)


def test_normal_translations_have_no_first_kind_obligations(ws):
    for t in ws.translations.values():
        if t.normal:
            assert counts(obligations(t))[0] == 0, t.name


def test_general_obligations_read_like_the_displayed_ones(ws):
    obs = obligations(ws.translation("general-MON-to-T"))
    assert [o.kind for o in obs] == ["nonempty", "defined", "defined", "axiom", "axiom"]
    assert show_expr(obs[3].sentence) == \
        "forall x,y,z:Q. op (x, op (y, z)) = op (op (x, y), z)"


def test_every_translation_is_certified_or_waived(ws):
    for t in ws.translations.values():
        assert all(o.discharged for o in t.certificate) or t.waiver, t.name


def test_fast_paths_are_named(ws):
    routes = {o.route for o in ws.translation("MON-to-ONE-BT").certificate}
    assert "abstraction-image" in routes
    spec = ws.translation("special-MON-to-T").certificate
    assert [str(o.status) for o in spec[:2]] == ["Trusted(constant-image)"] * 2


def test_opposite_monoid_axioms_match_theorems(ws):
    obs = ws.translation("MON-to-opposite-monoid").certificate
    axioms = [o for o in obs if o.kind == "axiom"]
    assert [str(o.status) for o in axioms] == ["Trusted(syntactic:Thm7)", "Trusted(syntactic:Thm8)"]


def test_fun_comp_has_no_obligations(ws):
    assert ws.translation("FUN-COMP-to-ONE-BT").certificate == []


def test_finite_obligations_record_sizes(ws):
    obs = ws.translation("general-MON-to-T").certificate
    assert all(isinstance(o.status, CheckedFinite) for o in obs)
    assert obs[0].status.models_checked > 0


def test_broken_translation_is_rejected(data):
    ws = load_corpus(certify=False)
    ws.certify = True
    with pytest.raises(MorphismRejected) as err:
        ws.load_text((data / "z3_sub.alz").read_text())
    failed = {o.origin: o.status for o in err.value.failures}
    assert isinstance(failed["Ax1"], Refuted)
    assert "MON-to-Z3-SUB" not in ws.translations


def test_right_action_is_not_a_morphism(ws):
    t = ws.translation("MON-ACT-to-ONE-BT-with-SC")
    assert t.waiver and t.rejection is not None
    refuted = [o for o in t.certificate if isinstance(o.status, Refuted)]
    assert [o.origin for o in refuted] == ["Ax3"]
    thm25 = ws.dev("ONE-BT-with-SC-1").package("Thm25")
    assert isinstance(thm25.proof, Refuted)
    assert any("not a morphism" in w for w in ws.warnings)


def test_unwaived_rejection_fails_the_load(ws):
    from alonzo.corpus import read
    text = read("mon_act.alz").replace("  waive ", "  -- waive ")
    texts = [read(f) for f in ["mon.alz", "com_mon.alz", "trans_mon.alz"]] + [text]
    with pytest.raises(MorphismRejected):
        load_texts(texts)


def test_translate_expr_keeps_types(ws):
    t = ws.translation("MON-to-ONE-BT")
    for a in t.src.axiom_list:
        out = t.translate_expr(a.sentence)
        assert infer_type(out) == infer_type(a.sentence)


def test_identity_translation_is_the_identity(ws):
    mon = ws.theory("MON")
    t = identity_translation("id", mon, mon)
    for a in mon.axiom_list:
        assert alpha_eq(t.translate_expr(a.sentence), a.sentence)


def test_translate_type_into_quasitype(ws):
    t = ws.translation("general-MON-to-T")
    M = BaseTy("M")
    assert t.translate_type(ProdTy(M, M)) is not None
    assert t.carrier(FunTy(ProdTy(M, M), M)) == FunTy(ProdTy(BaseTy("a"), BaseTy("a")),
                                                      BaseTy("a"))


def test_entails_by_chained_equalities():
    from alonzo.kernel import Language
    M = BaseTy("M")
    L = Language({"M"}, [("·", FunTy(ProdTy(M, M), M)), ("e", M)])
    fact = desugar("forall x:M. e · x = x /\\ x · e = x", L)
    assert entails(fact, desugar("forall x:M. e · x = x · e = x", L))
    assert entails(fact, desugar("forall y:M. y · e = y", L))
    assert not entails(fact, desugar("forall x:M. x · x = x", L))


# --------------------------------------------------------------------------
# transport


def test_canonical_extension_is_coherent(ws):
    t = ws.translation("MON-to-ONE-BT")
    src = ws.dev("MON-1").package("Def1")
    dst = ws.dev("ONE-BT-2").package("Def6")
    assert alpha_eq(t.translate_expr(src.defining_axiom()), dst.defining_axiom())


def test_missing_dependency():
    extra = """
transport squares via MON-to-MON2 from MON-1 {
  items S -> S2;
  target-dev MON2-1;
}
"""
    ws = load_texts([SQUARES], certify=False)
    before = dict(ws.translation("MON-to-MON2").const_map)
    with pytest.raises(MissingDependency) as err:
        ws.load_text(extra)
    assert err.value.names == ["sq"]
    assert ws.translation("MON-to-MON2").const_map == before


def test_transport_with_its_dependency():
    extra = """
transport squares via MON-to-MON2 from MON-1 {
  items Sq -> Sq2 sq2, S -> S2;
  target-dev MON2-1;
  expect S2: forall x:N. sq2 x = x * x;
}
"""
    ws = load_texts([SQUARES], certify=False)
    ws.load_text(extra)
    D = ws.dev("MON2-1")
    assert [p.label for p in D.packages] == ["Sq2", "S2"]
    assert all(c.ok for c in ws.checks)
    assert isinstance(D.package("S2").proof, Trusted)


def test_transporting_a_definition_twice_clashes():
    module = """
transport squares{n} via MON-to-MON2 from MON-1 {{
  items Sq -> Sq{n} sq2;
  target-dev MON2-{n};
}}
"""
    ws = load_texts([SQUARES], certify=False)
    ws.load_text(module.format(n=1))
    with pytest.raises(ClashError):
        ws.load_text(module.format(n=2))


def test_opaque_packages_cannot_be_transported():
    extra = """
development MON-1b extends MON-1 {
  thm "Hidden" opaque;
}

transport hidden via MON-to-MON2 from MON-1b {
  items Hidden -> Hidden2;
  target-dev MON2-1;
}
"""
    ws = load_texts([SQUARES], certify=False)
    with pytest.raises(TypeError, match="opaque"):
        ws.load_text(extra)


def test_visibility_clash_hides_the_label():
    text = """
theory A { base_types M; }
theory B { base_types M; }
development A-1 of A { thm "Thm1": forall x:M. x = x; }
development B-1 of B { thm "Thm1": forall y:M. y = y; }
theory C { base_types M; }
inclusion A -> C;
inclusion B -> C;
development C-1 of C { }
"""
    ws = load_texts([text], certify=False)
    C1 = ws.dev("C-1")
    assert C1.hidden == ["Thm1"]
    assert any("Thm1" in w for w in ws.warnings)


def test_com_mon_sees_mon_packages(ws):
    labels = {p.label for p in ws.dev("COM-MON-1").all_packages()}
    assert {"Def1", "Thm1", "Thm12"} <= labels


def test_mon_over_cof_sees_the_integers(ws):
    names = {c[0] for c in ws.dev("MON-over-COF-1").language().constants}
    assert "Z" in names


# --------------------------------------------------------------------------
# graph


def test_graph_shape(ws):
    g = build_graph(ws)
    assert len(g.nodes) == 12 and len(g.edges) == 18
    assert len(g.inclusions()) == 8
    extensions = [e for e in g.inclusions() if e.from_extend]
    assert len(extensions) == 7


def test_graph_exports(ws):
    g = build_graph(ws)
    dot = export_graph(g, "dot").decode()
    assert dot.startswith("digraph") and dot.count("style=dashed") == 8
    assert "color=red" in dot
    j = json.loads(export_graph(g, "json"))
    assert len(j["nodes"]) == 12 and len(j["edges"]) == 18
    assert export_graph(g, "dot") == export_graph(build_graph(ws), "dot")


def test_small_graphs():
    empty = build_graph(Workspace(certify=False))
    assert empty.nodes == [] and empty.edges == []
    assert export_graph(empty, "dot").decode().startswith("digraph")
    one = build_graph(load_texts([MON_TEXT], certify=False))
    assert one.nodes == ["MON"] and one.edges == []


def test_unknown_export_format(ws):
    with pytest.raises(ValueError):
        export_graph(build_graph(ws), "svg")

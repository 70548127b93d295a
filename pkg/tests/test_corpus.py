import pytest

from alonzo import corpus
from alonzo.graph import Workspace
from alonzo.graph.fmt import format_module
from alonzo.kernel import alpha_eq
from alonzo.notation import desugar_nterm, resugar


def test_manifest_lists_every_file():
    files = corpus.files()
    assert files[0] == "mon.alz" and len(files) == 9
    for name in files:
        assert corpus.read(name).strip()


def test_package_counts(ws):
    m = corpus.manifest()
    for key, value in m.items():
        if key.startswith("counts."):
            assert ws.dev(key.split(".", 1)[1]).counts() == tuple(map(int, value.split()))
        elif key.startswith("axioms."):
            assert len(ws.theory(key.split(".", 1)[1]).axiom_list) == int(value)


def test_expected_results_hold(ws):
    assert ws.checks, "the corpus states expected results"
    failed = [f"{c.subject}: {c.detail}" for c in ws.failed_checks()]
    assert failed == []
    kinds = {c.kind for c in ws.checks}
    assert kinds == {"counts", "obligation", "transport"}


def test_extensions(ws):
    com = ws.theory("COM-MON")
    assert com.base == "MON" and [a.label for a in com.axiom_list] == ["Ax1", "Ax2", "Ax3"]
    act = ws.theory("MON-ACT")
    assert act.language.base_types == {"M", "S"}
    assert "act" in {n for n, _ in act.language.constants}
    assert [a.label for a in act.axiom_list][-2:] == ["Ax3", "Ax4"]


def test_cof_is_a_stub(ws):
    cof = ws.theory("COF")
    assert len(cof.axiom_list) == 18 and all(a.opaque for a in cof.axiom_list)
    assert not cof.finite


def test_only_the_waived_translation_warns(ws):
    assert ws.warnings == [w for w in ws.warnings if "MON-ACT-to-ONE-BT-with-SC" in w]
    assert len(ws.warnings) == 1


def _corpus_terms(ws):
    for T in ws.theories.values():
        for a in T.axiom_list:
            if a.sentence is not None:
                yield a.sentence
    for D in ws.devs.values():
        for p in D.packages:
            e = getattr(p, "definiens", None) or getattr(p, "sentence", None)
            if e is not None:
                yield e


def test_resugar_round_trip_over_the_corpus(ws):
    n = 0
    for e in _corpus_terms(ws):
        assert alpha_eq(desugar_nterm(resugar(e)), e)
        n += 1
    assert n > 80


@pytest.mark.parametrize("name", corpus.files())
def test_fmt_is_idempotent(name):
    files = corpus.files()
    ctx = files[:files.index(name)]

    def fmt(text):
        ws = Workspace(certify=False)
        for f in ctx:
            ws.load_text(corpus.read(f))
        return format_module(text, ws)

    once = fmt(corpus.read(name))
    assert fmt(once) == once


def test_formatted_corpus_means_the_same(ws):
    from alonzo.graph import load_texts
    files = corpus.files()
    out = []
    for i, name in enumerate(files):
        ctx = Workspace(certify=False)
        for f in files[:i]:
            ctx.load_text(corpus.read(f))
        out.append(format_module(corpus.read(name), ctx))
    again = load_texts(out, certify=False)
    assert sorted(again.devs) == sorted(ws.devs)
    for name, D in ws.devs.items():
        E = again.dev(name)
        assert [p.label for p in E.packages] == [p.label for p in D.packages]
        for p, q in zip(D.packages, E.packages):
            a = getattr(p, "definiens", None) or getattr(p, "sentence", None)
            b = getattr(q, "definiens", None) or getattr(q, "sentence", None)
            assert (a is None and b is None) or alpha_eq(a, b), (name, p.label)

import json
import shutil

import pytest

from alonzo import corpus
from alonzo.cli import expand_paths, main, parse_sizes


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_sizes():
    assert parse_sizes(None) == [1, 2]
    assert parse_sizes(["3"]) == [3]
    assert parse_sizes(["1,2"]) == [1, 2]
    assert parse_sizes(["1..3"]) == [1, 2, 3]
    assert parse_sizes(["M=2,S=3"]) == [{"M": 2, "S": 3}]


def test_nonpositive_size_is_an_error(capsys):
    code, _, err = run(capsys, "models", "MON", "--sizes", "0")
    assert code == 2 and "positive" in err


def test_manifest_order(tmp_path):
    (tmp_path / "b.alz").write_text("")
    (tmp_path / "a.alz").write_text("")
    assert [p.name for p in expand_paths([str(tmp_path)])] == ["a.alz", "b.alz"]
    (tmp_path / "manifest.txt").write_text("files = b.alz a.alz\n")
    assert [p.name for p in expand_paths([str(tmp_path)])] == ["b.alz", "a.alz"]


def test_check_commutativity_claim(capsys, data):
    code, out, _ = run(capsys, "check", str(data / "bad.alz"), "--sizes", "1..3")
    assert code == 1
    assert "MON-1 Comm: Refuted" in out and "MON-1 Thm3: NoCounterexample" in out


def test_check_json_has_countermodel(capsys, data):
    code, out, _ = run(capsys, "check", str(data / "bad.alz"), "--sizes", "3",
                       "--thm", "Comm", "--emit", "json")
    rows = json.loads(out)
    assert code == 1 and [r["label"] for r in rows] == ["Comm"]
    cm = rows[0]["results"][0]["countermodel"]
    assert cm["sizes"] == {"M": 3}


def test_check_empty_file(capsys, data):
    code, out, _ = run(capsys, "check", str(data / "empty.alz"))
    assert code == 0 and out == ""


def test_check_one_development(capsys):
    code, out, _ = run(capsys, "check", "--dev", "MON-1", "--sizes", "M=2", "--jobs", "1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 10
    assert all("NoCounterexample (M=2: 4 models)" in l for l in lines)


def test_check_reports_the_waived_refutation(capsys):
    code, out, _ = run(capsys, "check", "--dev", "ONE-BT-with-SC-1", "--jobs", "1")
    assert code == 0 and "Thm25: Refuted (waived)" in out


def test_check_unknown_development(capsys):
    code, _, err = run(capsys, "check", "--dev", "NOPE")
    assert code == 2 and "NOPE" in err


def test_models_count(capsys):
    assert run(capsys, "models", "MON", "--sizes", "3", "--count")[:2] == (0, "33\n")
    code, out, _ = run(capsys, "models", "--theory", "MON", "--size", "M=2", "--count",
                       "--emit", "json")
    assert json.loads(out) == {"sizes": {"M": 2}, "models": 4}


def test_models_listing(capsys):
    code, out, _ = run(capsys, "models", "MON", "--sizes", "2")
    models = [json.loads(l) for l in out.splitlines()]
    assert len(models) == 4
    assert models[0]["constants"][0]["name"] == "·"


def test_models_refutation(capsys):
    code, out, _ = run(capsys, "models", "MON", "--sizes", "3", "--check",
                       "forall x,y:M. x · y = y · x", "--emit", "json")
    j = json.loads(out)
    assert code == 1 and j["result"] == "Refuted"
    assert {c["name"]: c["value"] for c in j["countermodel"]["constants"]} == \
        {"·": [0, 0, 0, 0, 1, 2, 2, 2, 2], "e": 1}


def test_models_over_budget(capsys):
    code, _, err = run(capsys, "models", "MON", "--sizes", "3", "--budget", "10", "--count")
    assert code == 3 and "budget" in err


def test_models_parse_error(capsys):
    code, _, err = run(capsys, "models", "MON", "--sizes", "2", "--check", "forall x:M x = x")
    assert code == 2 and "expected '.'" in err


def test_models_json_error(capsys):
    code, out, _ = run(capsys, "models", "NOPE", "--emit", "json")
    assert code == 2 and json.loads(out)["errors"][0]["kind"] == "ResolveError"


def test_obligations(capsys):
    code, out, _ = run(capsys, "obligations", "general-MON-to-T")
    assert code == 0
    assert out.splitlines()[0] == "general-MON-to-T: 1 2 2 (first, second, third kind)"
    assert sum(1 for l in out.splitlines() if l[:1].isdigit()) == 5


def test_obligations_json(capsys):
    code, out, _ = run(capsys, "obligations", "MON-over-COF-to-STR-2", "--emit", "json")
    j = json.loads(out)
    assert j["counts"] == [1, 12, 20] and len(j["obligations"]) == 33


def test_obligations_of_a_rejected_morphism(capsys):
    code, out, _ = run(capsys, "obligations", "MON-ACT-to-ONE-BT-with-SC")
    assert code == 1 and "not a morphism" in out


def test_rejected_translation_fails_the_load(capsys, data, tmp_path):
    d = tmp_path / "c"
    shutil.copytree(corpus.DIR, d, ignore=shutil.ignore_patterns("*.py", "__pycache__"))
    shutil.copy(data / "z3_sub.alz", d)
    m = d / "manifest.txt"
    m.write_text(m.read_text().replace("schematic.alz", "schematic.alz z3_sub.alz"))
    code, _, err = run(capsys, "graph", str(d))
    assert code == 1 and "MON-to-Z3-SUB is not certified" in err


def test_certify_writes_certificates(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--out", str(tmp_path))
    files = sorted(p.name for p in tmp_path.iterdir())
    assert code == 0 and "general-MON-to-T.cert.json" in files
    cert = json.loads((tmp_path / "general-MON-to-T.cert.json").read_text())
    assert cert["morphism"] and len(cert["obligations"]) == 5


def test_transport(capsys):
    code, out, _ = run(capsys, "transport", "monoid-via-MON-to-set-monoid")
    assert code == 0 and "Thm12: MONOID(UnivSet@[{M}], (⊙), E)" in out


def test_graph_dot(capsys):
    code, out, _ = run(capsys, "graph", "--emit", "dot")
    assert code == 0 and out.startswith("digraph")
    assert out.count('" [label=') == 12 and out.count(" -> ") == 18


def test_graph_text_is_deterministic(capsys):
    a = run(capsys, "graph", "--emit", "text")[1]
    b = run(capsys, "graph", "--emit", "text")[1]
    assert a == b and a.startswith("12 theories, 18 edges (8 inclusions)")


def test_fmt_twice(capsys, tmp_path):
    src = corpus.DIR / "mon.alz"
    first = run(capsys, "fmt", str(src))[1]
    assert first == run(capsys, "fmt", str(src))[1]
    out = tmp_path / "mon.alz"
    out.write_text(first)
    assert run(capsys, "fmt", str(out), "--check")[0] == 0


def test_fmt_write(capsys, tmp_path):
    f = tmp_path / "bad.alz"
    f.write_text("theory MON {  base_types M;\n constants · : M * M -> M, e : M; }\n")
    assert run(capsys, "fmt", str(f), "--check")[0] == 1
    assert run(capsys, "fmt", str(f), "--write")[0] == 0
    assert run(capsys, "fmt", str(f), "--check")[0] == 0

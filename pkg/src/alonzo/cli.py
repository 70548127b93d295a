"""Command-line front end.

    alonzo check [PATHS] [--sizes S]...      finite checks of every theorem
    alonzo models NAME [PATHS] --sizes S     enumerate, count or refute
    alonzo obligations TRANSLATION [PATHS]   obligations and their status
    alonzo certify [PATHS] [--out DIR]       certificates as JSON
    alonzo transport MODULE [PATHS]          packages made by a transport
    alonzo graph [PATHS]                     the development graph
    alonzo fmt FILE                          canonical layout of a module file

PATHS are module files or directories (a directory with a manifest.txt
is loaded in manifest order, otherwise its .alz files by name); with no
paths the bundled monoid corpus is used.  Exit status: 0 ok, 1 refuted
or rejected, 2 parse or type error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import corpus
from .errors import AlonzoError, BudgetExceeded, MorphismRejected, NotFinitelyCheckable
from .graph.core import DefPkg, Refuted as RefutedStatus
from .graph.devgraph import build_graph, export_graph
from .graph.fmt import format_module
from .graph.workspace import Workspace, load_texts
from .kernel import BOOL, show_type
from .notation.elaborate import Elaborator, Scope
from .notation.nterm import desugar
from .notation.parser import parse_term
from .notation.printer import show_nterm
from .notation.resugar import resugar
from .semantics import check_validity_at_scale, default_budget, enumerate_models

EXIT_OK, EXIT_REFUTED, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


# --------------------------------------------------------------------------
# inputs


def _manifest_files(d: Path) -> Optional[List[Path]]:
    m = d / "manifest.txt"
    if not m.exists():
        return None
    for line in m.read_text(encoding="utf-8").splitlines():
        k, _, v = line.split("#", 1)[0].partition("=")
        if k.strip() == "files":
            return [d / f for f in v.split()]
    return None


def _manifest_value(d: Path, key: str) -> str:
    m = d / "manifest.txt"
    if not m.exists():
        return ""
    for line in m.read_text(encoding="utf-8").splitlines():
        k, _, v = line.split("#", 1)[0].partition("=")
        if k.strip() == key:
            return v.strip()
    return ""


def expand_paths(paths: Sequence[str]) -> List[Path]:
    out: List[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(_manifest_files(p) or sorted(p.glob("*.alz")))
        else:
            out.append(p)
    return out


def load(paths: Sequence[str], certify: bool = True) -> Workspace:
    if not paths:
        return corpus.load_corpus(certify=certify)
    files = expand_paths(paths)
    ws = load_texts([f.read_text(encoding="utf-8") for f in files], certify=certify)
    for p in map(Path, paths):
        if p.is_dir():
            ws.graph_exclude |= set(_manifest_value(p, "graph_exclude").split())
    return ws


def parse_sizes(specs: Optional[Sequence[str]], default=(1, 2)) -> list:
    """'2', '1,2,3' or '1..3' give uniform scales; 'M=2,S=3' gives one."""
    if not specs:
        return list(default)
    out = []
    for spec in specs:
        if "=" in spec:
            d = {}
            for part in spec.split(","):
                k, _, v = part.partition("=")
                d[k.strip()] = _positive(v)
            out.append(d)
        else:
            for v in spec.split(","):
                lo, dots, hi = v.partition("..")
                if dots:
                    out.extend(range(_positive(lo), _positive(hi) + 1))
                else:
                    out.append(_positive(v))
    return out


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError(f"sizes must be positive, got {n}")
    return n


def _scale(sz, base_types) -> Optional[dict]:
    if isinstance(sz, int):
        return {b: sz for b in sorted(base_types)}
    if not set(base_types) <= set(sz):
        return None
    return {b: sz[b] for b in sorted(base_types)}


def _show_scale(sz: dict) -> str:
    return ",".join(f"{b}={n}" for b, n in sz.items())


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _text(n) -> str:
    return show_nterm(resugar(desugar(n)))


# --------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    ws = load(args.paths)
    scales = parse_sizes(args.sizes)
    budget = args.budget or default_budget()
    rows, failed = [], False
    if args.dev:
        ws.dev(args.dev)  # unknown names are errors
    for D in ws.devs.values():
        if args.dev and D.name != args.dev:
            continue
        top = D.top_theory()
        for p in D.theorems():
            if p not in D.packages or (args.thm and p.label not in args.thm):
                continue
            row = {"development": D.name, "label": p.label, "results": []}
            if p.sentence is None:
                row["status"] = "opaque"
            elif not top.finite:
                row["status"] = "not-finite"
            else:
                row["status"] = _check_one(top, p.sentence, scales, budget, args.jobs, row)
                if row["status"] == "Refuted":
                    if isinstance(p.proof, RefutedStatus):
                        row["status"] = "Refuted (waived)"
                    else:
                        failed = True
            rows.append(row)
    if args.emit == "json":
        _emit_json(rows)
    else:
        for r in rows:
            detail = "; ".join(f"{x['sizes']}: {x['result']}" for x in r["results"])
            print(f"{r['development']} {r['label']}: {r['status']}" + (f" ({detail})" if detail else ""))
    return EXIT_REFUTED if failed else EXIT_OK


def _check_one(top, sentence, scales, budget, jobs, row) -> str:
    status = None
    for sz in scales:
        scale = _scale(sz, top.language.base_types)
        if scale is None:
            row["results"].append({"sizes": str(sz), "result": "no size given"})
            continue
        label = _show_scale(scale) or "-"
        try:
            r = check_validity_at_scale(top, sentence, scale, budget=budget, jobs=jobs)
        except BudgetExceeded:
            row["results"].append({"sizes": label, "result": "over budget"})
            continue
        except NotFinitelyCheckable:
            return "not-finite"
        if not r.ok:
            row["results"].append({"sizes": label, "result": "Refuted",
                                   "countermodel": r.countermodel.to_json()})
            return "Refuted"
        n = r.models_checked
        row["results"].append({"sizes": label, "result": f"{n} model{'' if n == 1 else 's'}"})
        status = "NoCounterexample"
    return status or "unchecked"


def cmd_models(args) -> int:
    ws = load(args.paths, certify=False)
    if args.theory:
        if args.name:
            args.paths.insert(0, args.name)
            ws = load(args.paths, certify=False)
        args.name = args.theory
    if not args.name:
        raise AlonzoError("models needs a theory or development")
    theory, dev = ws.theory_or_dev(args.name)
    top = dev.top_theory() if dev is not None else theory
    scales = parse_sizes(args.sizes, default=(1,))
    budget = args.budget or default_budget()
    if len(scales) != 1:
        raise AlonzoError("models takes a single scale")
    scale = _scale(scales[0], top.language.base_types)
    if scale is None:
        raise AlonzoError(f"give a size for every base type of {args.name}")
    if args.check is not None:
        scope = Scope.of(dev.language()) if dev is not None else ws.scope_of(theory, None)
        sentence = desugar(Elaborator(scope).elab(parse_term(args.check), BOOL))
        r = check_validity_at_scale(top, sentence, scale, budget=budget, jobs=args.jobs)
        if args.emit == "json":
            _emit_json(r.to_json())
        elif r.ok:
            print(f"NoCounterexample at {_show_scale(scale)} ({r.models_checked} models)")
        else:
            print(f"Refuted at {_show_scale(scale)} after {r.models_checked} models")
            print(r.countermodel.dumps())
        return EXIT_OK if r.ok else EXIT_REFUTED
    n = 0
    for M in enumerate_models(top, scale, budget=budget):
        n += 1
        if not args.count:
            print(M.dumps())
        if args.limit and n >= args.limit:
            break
    if args.count:
        if args.emit == "json":
            _emit_json({"sizes": scale, "models": n})
        else:
            print(n)
    return EXIT_OK


def cmd_obligations(args) -> int:
    ws = load(args.paths)
    t = ws.translation(args.translation)
    obs = t.certificate
    if args.emit == "json":
        _emit_json({"translation": t.name, "counts": _counts(obs), "morphism": t.rejection is None,
                    "obligations": [o.to_json() for o in obs]})
    else:
        print(f"{t.name}: {' '.join(map(str, _counts(obs)))} (first, second, third kind)")
        for o in obs:
            text = _text(o.nterm) if o.nterm is not None else f"opaque axiom {o.origin}"
            print(f"{o.index}. [{o.kind} {o.origin}] {text}")
            print(f"     {o.status}" + (f" via {o.route}" if o.route else ""))
        if t.rejection is not None:
            print(f"not a morphism (waived: {t.waiver})")
    return EXIT_OK if t.rejection is None else EXIT_REFUTED


def _counts(obs):
    return [sum(1 for o in obs if o.kind == k) for k in ("nonempty", "defined", "axiom")]


def certificate(t) -> dict:
    return {"translation": t.name, "src": t.src.name, "dst": t.dst_dev or t.dst.name,
            "inclusion": t.inclusion, "morphism": t.rejection is None, "waiver": t.waiver,
            "obligations": [o.to_json() for o in t.certificate]}


def cmd_certify(args) -> int:
    ws = load(args.paths)
    certs = [certificate(t) for t in ws.translations.values()]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for c in certs:
            name = c["translation"].replace(" -> ", "--") + ".cert.json"
            (out / name).write_text(json.dumps(c, indent=2, ensure_ascii=False) + "\n",
                                    encoding="utf-8")
        print(f"{len(certs)} certificates written to {out}")
    else:
        _emit_json(certs)
    return EXIT_OK


def cmd_transport(args) -> int:
    ws = load(args.paths)
    rec = next((r for r in ws.transports if r.name == args.module), None)
    if rec is None:
        raise AlonzoError(f"unknown transport module {args.module}")
    D = ws.dev(rec.target)
    rows = []
    for p in D.packages:
        if isinstance(p, DefPkg):
            kind, text = "def", f"{p.name} : {show_type(p.ty)} := {_text(p.nterm)}"
        else:
            kind, text = "thm", _text(p.nterm)
        rows.append({"label": p.label, "kind": kind, "text": text, "status": str(p.proof)})
    if args.emit == "json":
        _emit_json({"module": rec.name, "via": rec.via, "from": rec.from_dev, "to": rec.to_dev,
                    "target": rec.target, "packages": rows})
    else:
        print(f"{rec.name}: {rec.from_dev} -> {rec.target} via {rec.via}")
        for r in rows:
            print(f"  {r['label']}: {r['text']}")
            print(f"    {r['status']}")
    return EXIT_OK


def cmd_graph(args) -> int:
    ws = load(args.paths)
    g = build_graph(ws)
    if args.emit == "text":
        print(f"{len(g.nodes)} theories, {len(g.edges)} edges "
              f"({len(g.inclusions())} inclusions)")
        for e in g.edges:
            mark = "" if e.morphism is not False else "  (not a morphism)"
            print(f"  {e.src} -> {e.dst}  {e.style}  {e.name}{mark}")
    else:
        sys.stdout.buffer.write(export_graph(g, args.emit))
        sys.stdout.flush()
    return EXIT_OK


def cmd_fmt(args) -> int:
    path = Path(args.file)
    text = path.read_text(encoding="utf-8")
    ws = Workspace(certify=False)
    for f in _context_files(path):
        ws.load_text(f.read_text(encoding="utf-8"))
    out = format_module(text, ws)
    if args.write:
        if out != text:
            path.write_text(out, encoding="utf-8")
    elif args.check:
        return EXIT_OK if out == text else EXIT_REFUTED
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _context_files(path: Path) -> List[Path]:
    """The files a module depends on: those before it in its directory's
    manifest (all of them when it is not listed)."""
    files = _manifest_files(path.parent) or []
    names = [f.name for f in files]
    if path.name in names:
        return files[:names.index(path.name)]
    return files


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="alonzo", description="Alonzo logic toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, emit=("text", "json")):
        p.add_argument("--emit", choices=emit, default=emit[0])
        p.add_argument("--budget", type=int, default=None,
                       help="largest domain to materialize (default: $ALONZO_BUDGET or 10^6)")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="worker processes for finite checks")

    p = sub.add_parser("check", help="check every theorem in finite models")
    p.add_argument("paths", nargs="*")
    p.add_argument("--sizes", "--size", action="append",
                   help="e.g. 2, 1,2,3, 1..3 or M=2,S=3 (repeatable)")
    p.add_argument("--dev", help="only this development")
    p.add_argument("--thm", action="append", help="only these theorems (repeatable)")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("models", help="enumerate or count models, or refute a sentence")
    p.add_argument("name", nargs="?", help="theory or development")
    p.add_argument("paths", nargs="*")
    p.add_argument("--theory", help="same as the positional name")
    p.add_argument("--sizes", "--size", action="append")
    p.add_argument("--count", action="store_true")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--check", metavar="SENTENCE")
    common(p)
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("obligations", help="obligations of a translation")
    p.add_argument("translation")
    p.add_argument("paths", nargs="*")
    common(p)
    p.set_defaults(func=cmd_obligations)

    p = sub.add_parser("certify", help="certificates of every translation")
    p.add_argument("paths", nargs="*")
    p.add_argument("--out", help="directory for the .cert.json files")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("transport", help="packages produced by a transport module")
    p.add_argument("module")
    p.add_argument("paths", nargs="*")
    common(p)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("graph", help="the development graph")
    p.add_argument("paths", nargs="*")
    common(p, emit=("dot", "json", "text"))
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("fmt", help="canonical layout of a module file")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--write", action="store_true", help="rewrite the file in place")
    g.add_argument("--check", action="store_true", help="exit 1 if the file is not formatted")
    p.set_defaults(func=cmd_fmt)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MorphismRejected as e:
        return _fail(args, e, EXIT_REFUTED)
    except BudgetExceeded as e:
        return _fail(args, e, EXIT_BUDGET)
    except (AlonzoError, OSError, argparse.ArgumentTypeError, ValueError) as e:
        return _fail(args, e, EXIT_ERROR)


def _fail(args, e: Exception, code: int) -> int:
    print(f"alonzo: {e}", file=sys.stderr)
    if getattr(args, "emit", None) == "json":
        _emit_json({"errors": [{"kind": type(e).__name__.rstrip("_"), "message": str(e)}]})
    return code


if __name__ == "__main__":
    sys.exit(main())

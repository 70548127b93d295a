"""Compare the pure-Python and compiled evaluators on the monoid corpus.

    python benchmarks/bench_semantics.py [--repeat N] [--max-size K]

Each workload runs under both backends (the pure one selected through
ALONZO_PURE) and the best wall time of N runs is reported.
"""

import argparse
import os
import time

from alonzo.corpus import load_corpus
from alonzo.kernel import BOOL
from alonzo.notation.elaborate import Elaborator, Scope
from alonzo.notation.nterm import desugar
from alonzo.notation.parser import parse_term
from alonzo.semantics import HAVE_FASTCORE, check_validity_at_scale, count_models


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run(fn, repeat, pure):
    old = os.environ.get("ALONZO_PURE")
    os.environ["ALONZO_PURE"] = "1" if pure else "0"
    try:
        return best(fn, repeat)
    finally:
        if old is None:
            del os.environ["ALONZO_PURE"]
        else:
            os.environ["ALONZO_PURE"] = old


def workloads(max_size):
    ws = load_corpus(certify=False)
    mon = ws.theory("MON")
    mon1 = ws.dev("MON-1")
    top = mon1.top_theory()

    def sentence(text, dev):
        scope = Scope.of(dev.language())
        return desugar(Elaborator(scope).elab(parse_term(text), BOOL))

    comm = sentence("forall x,y:M. x · y = y · x", mon1)
    thm = next(p for p in mon1.packages if p.label == "Thm7")
    for n in range(1, max_size + 1):
        yield f"count MON models, |M|={n}", lambda n=n: count_models(mon, {"M": n})
        yield f"refute commutativity, |M|={n}", \
            lambda n=n: check_validity_at_scale(mon, comm, {"M": n}, jobs=1)
        yield f"check MON-1 Thm7 (uses Def2), |M|={n}", \
            lambda n=n: check_validity_at_scale(top, thm.sentence, {"M": n}, jobs=1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-size", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_FASTCORE:
        print("compiled evaluator not built; run `python setup.py build_ext --inplace`")
    print(f"{'workload':45} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in workloads(args.max_size):
        py = run(fn, args.repeat, pure=True)
        if HAVE_FASTCORE:
            cy = run(fn, args.repeat, pure=False)
            print(f"{name:45} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")
        else:
            print(f"{name:45} {py:10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()

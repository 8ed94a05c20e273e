"""Regenerate tests/fixtures/converse_exhaustion.json.

Runs the two linear-class exhaustion searches at q=2, k=3, n_max=2 and
records the node and prune counts.  The acceptance test reruns them and
compares against this file.

    python3 scripts/gen_converse_fixture.py [--workers N]
"""

import argparse
import json
import pathlib
import time

from funcomp import _kernel
from funcomp.model import OMEGA_1, OMEGA_2, T2_ROWS, Model
from funcomp.ffield import Matrix, gf
from funcomp.search import SearchSpec, search_linear

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "converse_exhaustion.json"


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    T2 = Matrix(T2_ROWS, gf(2))
    runs = []
    for name, omega in (("omega1", OMEGA_1), ("omega2", OMEGA_2)):
        model = Model(omega, T2)
        t0 = time.perf_counter()
        out = search_linear(SearchSpec(model, 3, 2, "linear", args.workers))
        elapsed = time.perf_counter() - t0
        runs.append({
            "name": name,
            "model": model.to_json(),
            "k": 3,
            "n_max": 2,
            "status": "found" if out.found is not None else "exhausted",
            "nodes_visited": out.nodes_visited,
            "pruned": out.pruned,
            "pruned_by": out.breakdown,
            "seconds": round(elapsed, 2),
        })
        print(f"{name}: {runs[-1]['status']} nodes={out.nodes_visited} pruned={out.pruned} {elapsed:.2f}s")
    doc = {"backend": _kernel.BACKEND, "workers": args.workers, "runs": runs}
    OUT.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()

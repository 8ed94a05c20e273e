"""``funcomp`` command line.  Every command prints one JSON document on stdout.

Exit codes: 0 ok/found, 1 malformed input, 2 validation failure or
inadmissible code, 3 search exhausted, 4 out of coverage or over a cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .bounds import fmt, lower_bound_gamma, lower_bound_general_witness
from .capacity import OutOfCoverage, capacity_oracle
from .codes import CATALOG, CATALOG_IDS, CodeError, code_from_json, is_realizable, paper_code, rate_of
from .model import (
    MalformedModel,
    Model,
    ModelError,
    classify,
    dependent_pairs,
    enumerate_states,
    find_isomorphism,
    LimitExceeded,
    validate,
)
from .network import to_network
from .search import CapExceeded, SearchSpec, search

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_EXHAUSTED, EXIT_UNCOVERED = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise _Fail(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_MALFORMED, f"{path}: invalid JSON ({exc})") from None


def _model_from_doc(doc) -> Model:
    if isinstance(doc, dict) and "model" in doc and "T" not in doc:
        doc = doc["model"]
    try:
        return Model.from_json(doc)
    except MalformedModel as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None


def _model(path: str, check: bool = True) -> Model:
    model = _model_from_doc(_load(path))
    if check:
        try:
            validate(model)
        except ModelError as exc:
            raise _Fail(EXIT_INVALID, f"invalid model: {exc}") from None
    return model


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------- commands

def cmd_classify(args) -> int:
    model = _model(args.model, check=False)
    _emit({
        "type": classify(model.T).value,
        "rank": model.T.rank(),
        "dependent_pairs": [[a + 1, b + 1] for a, b in dependent_pairs(model.T)],
    })
    return EXIT_OK


def cmd_bound(args) -> int:
    model = _model(args.model)
    value, parts = lower_bound_general_witness(model)
    _emit({
        "lower_bound_general": fmt(value),
        "lower_bound_gamma": fmt(lower_bound_gamma(model)),
        "witness": {
            "cut": sorted(e + 1 for p in parts for e in p),
            "partition": [[e + 1 for e in p] for p in parts],
        },
    })
    return EXIT_OK


def cmd_capacity(args) -> int:
    model = _model(args.model)
    res = capacity_oracle(model)
    _emit(res.to_json())
    return EXIT_UNCOVERED if isinstance(res, OutOfCoverage) else EXIT_OK


def cmd_verify(args) -> int:
    code_doc = _load(args.code)
    if args.model:
        model = _model(args.model)
    elif isinstance(code_doc, dict) and "model" in code_doc:
        model = _model_from_doc(code_doc["model"])
        try:
            validate(model)
        except ModelError as exc:
            raise _Fail(EXIT_INVALID, f"invalid model: {exc}") from None
    else:
        raise _Fail(EXIT_MALFORMED, "no model: pass --model or a code file with a 'model' key")
    if isinstance(code_doc, dict) and "code" in code_doc:
        code_doc = code_doc["code"]
    try:
        code = code_from_json(code_doc, model)
        ok = is_realizable(model, code)
        report = rate_of(model, code)
    except CodeError as exc:
        raise _Fail(EXIT_MALFORMED, f"bad code: {exc}") from None
    out = {"admissible": ok}
    out.update(report.to_json())
    _emit(out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_search(args) -> int:
    model = _model(args.model)
    try:
        spec = SearchSpec(model, args.k, args.n, args.cls, args.workers, not args.no_prune)
        outcome = search(spec)
    except CapExceeded as exc:
        _emit({"status": "cap_exceeded", "reason": str(exc)})
        return EXIT_UNCOVERED
    except ValueError as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None
    _emit(outcome.to_json())
    return EXIT_OK if outcome.found is not None else EXIT_EXHAUSTED


def cmd_transform(args) -> int:
    _emit(to_network(_model(args.model)).to_json())
    return EXIT_OK


def cmd_isomorphic(args) -> int:
    a, b = _model(args.model, check=False), _model(args.other, check=False)
    pp = find_isomorphism(a, b)
    _emit({"isomorphic": pp is not None, "perm": pp.to_json() if pp else None})
    return EXIT_OK


def cmd_enumerate(args) -> int:
    try:
        states = enumerate_states(args.s, args.m)
    except LimitExceeded as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None
    _emit({"s": args.s, "m": args.m, "count": len(states), "states": [st.to_lists() for st in states]})
    return EXIT_OK


def _catalog_doc(code_id: str) -> dict:
    model, code = paper_code(code_id)
    return {
        "id": code_id,
        "model": model.to_json(),
        "code": code.to_json(),
        "rate": fmt(rate_of(model, code).rate),
    }


def _write(directory: str, name: str, doc) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, name), "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def cmd_catalog(args) -> int:
    if args.seed_fixtures:
        for cid in CATALOG_IDS:
            doc = _catalog_doc(cid)
            _write(args.seed_fixtures, f"{cid}.json", doc)
            _write(args.seed_fixtures, f"{cid}.model.json", doc["model"])
            _write(args.seed_fixtures, f"{cid}.code.json", doc["code"])
        _emit({"written": list(CATALOG_IDS), "dir": args.seed_fixtures})
        return EXIT_OK
    if not args.id:
        _emit({"catalog": list(CATALOG_IDS)})
        return EXIT_OK
    if args.id not in CATALOG:
        raise _Fail(EXIT_MALFORMED, f"unknown code id {args.id!r}; known: {', '.join(CATALOG_IDS)}")
    doc = _catalog_doc(args.id)
    if args.out_dir:
        _write(args.out_dir, f"{args.id}.json", doc)
    _emit(doc)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="funcomp", description="Function-compression capacities, bounds and codes.")
    p.add_argument("--version", action="version", version=f"funcomp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_model(name, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--model", required=True, help="model JSON file")
        return sp

    with_model("classify", "classify the target matrix").set_defaults(func=cmd_classify)
    with_model("bound", "cut-set lower bounds").set_defaults(func=cmd_bound)
    with_model("capacity", "closed-form capacity").set_defaults(func=cmd_capacity)
    with_model("transform", "induced network").set_defaults(func=cmd_transform)

    sp = sub.add_parser("verify", help="check a code for admissibility and report its rate")
    sp.add_argument("--model", help="model JSON file (optional if the code file carries one)")
    sp.add_argument("--code", required=True, help="code JSON file")
    sp.set_defaults(func=cmd_verify)

    sp = with_model("search", "exhaustive code search at fixed k and n")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True, help="per-encoder budget n_max")
    sp.add_argument("--class", dest="cls", choices=("linear", "table"), default="linear")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-prune", action="store_true", help="plain enumeration, for cross-checks")
    sp.set_defaults(func=cmd_search)

    sp = with_model("isomorphic", "find a relabelling between two models")
    sp.add_argument("--other", required=True, help="second model JSON file")
    sp.set_defaults(func=cmd_isomorphic)

    sp = sub.add_parser("enumerate", help="list connectivity states")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("paper-code", help="catalog models and codes")
    sp.add_argument("--id", help="catalog id; omit to list ids")
    sp.add_argument("--out-dir", help="also write <id>.json here")
    sp.add_argument("--seed-fixtures", metavar="DIR", help="write every catalog entry to DIR")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"funcomp: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

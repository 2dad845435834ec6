"""Command-line interface.

Exit codes::

    0  success
    1  ``check`` found axiom violations
    2  usage error
    3  corpus parse error (bad JSON, empty motif, invalid sequence)
    4  corpus schema error
    5  duplicate id in corpus
    6  unknown id
    7  lcm of motif sizes above --max-lcm
    8  dimension mismatch
    9  any other invalid input
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import highdim, metric1d, oracle, seqcore
from .corpus import SequenceDocument, document_from_sequence, dumps_corpus, parse_corpus
from .isoset import bridge, isoset, isotree, min_stable_radius
from .errors import (
    DimensionMismatch,
    DuplicateId,
    MotifSizeOverflow,
    ParseError,
    PerseqError,
    SchemaError,
    UnknownId,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SCHEMA = 4
EXIT_DUPLICATE_ID = 5
EXIT_UNKNOWN_ID = 6
EXIT_OVERFLOW = 7
EXIT_DIMENSION = 8
EXIT_INVALID = 9

_EXIT_CODES = [
    (ParseError, EXIT_PARSE),
    (SchemaError, EXIT_SCHEMA),
    (DuplicateId, EXIT_DUPLICATE_ID),
    (UnknownId, EXIT_UNKNOWN_ID),
    (MotifSizeOverflow, EXIT_OVERFLOW),
    (DimensionMismatch, EXIT_DIMENSION),
]

EPS_ENV = "PERSEQ_EPS"


def exit_code_for(exc: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return EXIT_INVALID


def _default_eps() -> float:
    raw = os.environ.get(EPS_ENV)
    return float(raw) if raw else seqcore.DEFAULT_EPS


def _load(args) -> list[SequenceDocument]:
    return parse_corpus(args.file, eps=args.eps)


def _lookup(docs, doc_id) -> SequenceDocument:
    for d in docs:
        if d.id == doc_id:
            return d
    raise UnknownId(f"no sequence with id {doc_id!r}")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# distances shared by dist and matrix


def _distance(A, B, opts: dict) -> metric1d.ElasticDistance:
    one_d = isinstance(A, seqcore.PeriodicSequence1D)
    if one_d != isinstance(B, seqcore.PeriodicSequence1D):
        raise DimensionMismatch("cannot compare a 1d sequence with an nd sequence")
    eps, max_lcm = opts["eps"], opts["max_lcm"]
    if one_d:
        if opts["normalized"]:
            return metric1d.elm_normalized(A, B, opts["oriented"], eps=eps, max_lcm=max_lcm)
        metric = metric1d.elm_oriented if opts["oriented"] else metric1d.elm
        return metric(A, B, reduce=opts["reduce"], eps=eps, max_lcm=max_lcm)
    if opts["normalized"]:
        raise DimensionMismatch("--normalized is only defined for 1d sequences")
    return highdim.elm_oriented_nd(A, B, opts["mode"], reduce=opts["reduce"], eps=eps, max_lcm=max_lcm)


def _metric_name(A, opts) -> str:
    if not isinstance(A, seqcore.PeriodicSequence1D):
        return "elm_oriented_nd"
    name = "elm_oriented" if opts["oriented"] else "elm"
    return name + ("_normalized" if opts["normalized"] else "")


def _opts(args) -> dict:
    return {
        "oriented": args.oriented,
        "normalized": args.normalized,
        "mode": args.mode,
        "reduce": args.reduce,
        "eps": args.eps,
        "max_lcm": args.max_lcm,
    }


_worker_state: dict = {}


def _init_worker(seqs, opts):
    _worker_state["seqs"] = seqs
    _worker_state["opts"] = opts


def _matrix_row(i: int) -> list[float]:
    seqs, opts = _worker_state["seqs"], _worker_state["opts"]
    return [_distance(seqs[i], seqs[j], opts).value for j in range(i + 1, len(seqs))]


def distance_matrix(seqs, opts: dict, jobs: int = 1) -> np.ndarray:
    """Symmetric matrix with zero diagonal; only the upper triangle is computed."""
    n = len(seqs)
    if jobs > 1 and n > 2:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(seqs, opts)) as pool:
            rows = list(pool.map(_matrix_row, range(n)))
    else:
        _init_worker(seqs, opts)
        rows = [_matrix_row(i) for i in range(n)]
    D = np.zeros((n, n))
    for i, row in enumerate(rows):
        D[i, i + 1:] = row
        D[i + 1:, i] = row
    return D


def format_matrix_csv(ids, D) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", *ids])
    for doc_id, row in zip(ids, D):
        writer.writerow([doc_id, *(f"{x:.12g}" for x in row)])
    return buf.getvalue()


# commands


def cmd_invariant(args) -> int:
    out = []
    for doc in _load(args):
        S = doc.to_sequence(args.eps)
        if isinstance(S, seqcore.PeriodicSequence1D):
            if args.reduce:
                S = seqcore.reduce_to_minimal_period(S, args.eps)
            if args.normalized:
                fn = seqcore.ndl_oriented if args.oriented else seqcore.ndl
                name = "NDL^o" if args.oriented else "NDL"
            else:
                fn = seqcore.sdl_oriented if args.oriented else seqcore.sdl
                name = "SDL^o" if args.oriented else "SDL"
            out.append({"id": doc.id, "kind": "1d", "invariant": name,
                        "period": S.period, "gaps": list(fn(S, args.eps).gaps)})
        else:
            if args.normalized:
                raise DimensionMismatch("--normalized is only defined for 1d sequences")
            if args.reduce:
                S = highdim.reduce_nd(S, args.eps)
            entry = {"id": doc.id, "kind": "nd", "invariant": "TVI", "period": S.period,
                     "time_gaps": highdim.time_gaps(S).tolist()}
            entry["value_matrix"] = highdim.cdm(S.values, args.mode).entries.tolist() if len(S) > 1 else []
            entry["mode"] = args.mode
            out.append(entry)
    _emit(out)
    return EXIT_OK


def cmd_dist(args) -> int:
    docs = _load(args)
    A = _lookup(docs, args.id_a).to_sequence(args.eps)
    B = _lookup(docs, args.id_b).to_sequence(args.eps)
    opts = _opts(args)
    d = _distance(A, B, opts)
    _emit({"a": args.id_a, "b": args.id_b, "metric": _metric_name(A, opts),
           "value": d.value, "argmin_shift": d.argmin_shift, "reversed": d.reversed})
    return EXIT_OK


def cmd_matrix(args) -> int:
    docs = _load(args)
    seqs = [d.to_sequence(args.eps) for d in docs]
    D = distance_matrix(seqs, _opts(args), args.jobs)
    ids = [d.id for d in docs]
    if args.format == "json":
        text = json.dumps({"ids": ids, "matrix": D.tolist()}, indent=2) + "\n"
    else:
        text = format_matrix_csv(ids, D)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _one_d(doc: SequenceDocument, eps: float) -> seqcore.PeriodicSequence1D:
    S = doc.to_sequence(eps)
    if not isinstance(S, seqcore.PeriodicSequence1D):
        raise DimensionMismatch(f"{doc.id!r} is an nd sequence; isosets need a 1d sequence")
    return S


def cmd_isoset(args) -> int:
    S = _one_d(_lookup(_load(args), args.id), args.eps)
    I = isoset(S, args.alpha, args.eps)
    _emit({"id": args.id, "radius": I.radius, "items": [
        {"offsets": list(c.offsets), "weight": str(w), "weight_value": float(w)} for c, w in I.items]})
    return EXIT_OK


def cmd_isotree(args) -> int:
    S = _one_d(_lookup(_load(args), args.id), args.eps)
    events = isotree(S, args.alpha_max, args.eps)
    _emit({
        "id": args.id,
        "bridge": bridge(S),
        "min_stable_radius": min_stable_radius(S, args.eps),
        "events": [{"radius": r, "classes": [list(idx) for idx, _ in part.classes]} for r, part in events],
    })
    return EXIT_OK


def cmd_reduce(args) -> int:
    out = []
    for doc in _load(args):
        S = doc.to_sequence(args.eps)
        if isinstance(S, seqcore.PeriodicSequence1D):
            R = seqcore.reduce_to_minimal_period(S, args.eps)
        else:
            R = highdim.reduce_nd(S, args.eps)
        out.append(document_from_sequence(doc.id, R, doc.unit))
    print(dumps_corpus(out))
    return EXIT_OK


def cmd_check(args) -> int:
    report = oracle.check_axioms(trials=args.trials, seed=args.seed, include_nd=args.nd, eps=args.eps)
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perseq",
        description="Isometry invariants and elastic distances for periodic sequences.",
    )
    parser.add_argument("--eps", type=float, default=_default_eps(),
                        help=f"comparison tolerance (default: ${EPS_ENV} or {seqcore.DEFAULT_EPS})")
    parser.add_argument("--max-lcm", type=int, default=metric1d.DEFAULT_MAX_LCM,
                        help="largest common motif size allowed (default: %(default)s)")
    # same flags after the subcommand; SUPPRESS keeps the top-level value unless given
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument("--max-lcm", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help):
        return sub.add_parser(name, parents=[common], help=help)

    def metric_flags(p, reduce_default):
        p.add_argument("--oriented", action="store_true", help="distinguish mirror images")
        p.add_argument("--normalized", action="store_true", help="rescale to unit period first (1d only)")
        p.add_argument("--mode", choices=("generic", "full"), default="full", help="CDM rows for nd sequences")
        p.add_argument("--reduce", action=argparse.BooleanOptionalAction, default=reduce_default,
                       help="reduce to minimal periods first")

    p = command("invariant", "SDL/NDL for 1d, TVI for nd sequences")
    p.add_argument("file")
    metric_flags(p, reduce_default=False)
    p.set_defaults(func=cmd_invariant)

    p = command("dist", "elastic distance between two sequences")
    p.add_argument("file")
    p.add_argument("id_a")
    p.add_argument("id_b")
    metric_flags(p, reduce_default=True)
    p.set_defaults(func=cmd_dist)

    p = command("matrix", "pairwise distance matrix of a corpus")
    p.add_argument("file")
    metric_flags(p, reduce_default=True)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_matrix)

    p = command("isoset", "weighted centered clusters at a radius")
    p.add_argument("file")
    p.add_argument("id")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_isoset)

    p = command("isotree", "partition events up to a radius")
    p.add_argument("file")
    p.add_argument("id")
    p.add_argument("--alpha-max", type=float, required=True)
    p.set_defaults(func=cmd_isotree)

    p = command("reduce", "minimal-period forms as a corpus")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = command("check", "randomized metric-axiom checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nd", action=argparse.BooleanOptionalAction, default=True,
                   help="include the nd metric")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.eps < 0:
        parser.error("--eps must be non-negative")
    if args.max_lcm < 1:
        parser.error("--max-lcm must be >= 1")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except PerseqError as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"perseq: error: {msg}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())

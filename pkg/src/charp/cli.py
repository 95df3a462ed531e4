"""Command-line front end.

    charp dim     --lambda 2,1,2,1,2 [--nu 3,0,1,2,2]
    charp char    --lambda 0,2,0,0,3
    charp table   --lambda 0,0,2,0,0 [--full-index]
    charp verify  --quick | --full | --table 4
    charp bench   --lambda 2,1,2,1,2
    charp cache   stats | clear

Exit status: 0 success, 2 usage error, 3 failed check or internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import re
import sys
import time

from .irreducibles import CharacterEngine, InvariantError
from .roots import (
    GroupConfig,
    Weight,
    dominance_leq,
    dominant_weights_below,
    format_weight,
    is_dominant,
    parse_weight,
)
from .store import ENV_VAR, DiskStore
from .weyl import DecompMatrix

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

QUICK_A5 = ((0, 0, 2, 0, 0), (1, 0, 0, 0, 1), (0, 0, 2, 0, 1), (0, 2, 0, 0, 0), (2, 1, 2, 1, 2))

log = logging.getLogger("charp")


class UsageError(Exception):
    pass


# -- output --------------------------------------------------------------


def weight_label(lam: Weight, config: GroupConfig) -> str:
    """Digit-string labels like 00200 for small primes, comma tuples otherwise."""
    compact = config.prime <= 10 and all(0 <= c <= 9 for c in lam)
    return format_weight(lam, compact)


def matrix_records(D: DecompMatrix) -> list[dict]:
    """One record per row: the row's weight, the weights it spans and its entries."""
    return [
        {"lambda": list(lam), "index": [list(w) for w in D.index[: i + 1]],
         "entries": [int(x) for x in D.rows[i, : i + 1]]}
        for i, lam in enumerate(D.index)
    ]


def records_to_matrix(records: list[dict]) -> DecompMatrix:
    """Inverse of matrix_records."""
    import numpy as np

    index = tuple(tuple(r["lambda"]) for r in records)
    rows = np.zeros((len(index), len(index)), dtype=np.int64)
    for i, r in enumerate(records):
        if [tuple(w) for w in r["index"]] != list(index[: i + 1]):
            raise ValueError(f"record {i} has an index that is not the prefix of the row weights")
        rows[i, : i + 1] = r["entries"]
    return DecompMatrix(index, rows)


def format_matrix(D: DecompMatrix, fmt: str, config: GroupConfig) -> str:
    if fmt == "records":
        return "".join(json.dumps(r, separators=(", ", ": ")) + "\n" for r in matrix_records(D))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda"] + [weight_label(nu, config) for nu in D.index])
        for i, lam in enumerate(D.index):
            w.writerow([weight_label(lam, config)] + [int(x) for x in D.rows[i, : i + 1]])
        return buf.getvalue()
    lines = []
    for i, lam in enumerate(D.index):
        lines.append(" ".join([weight_label(lam, config)] + [str(int(x)) for x in D.rows[i, : i + 1]]))
    return "\n".join(lines) + "\n"


def format_character(ch: dict, fmt: str, config: GroupConfig, lam: Weight) -> str:
    # highest weight first, then down the dominance order
    order = {nu: i for i, nu in enumerate(reversed(dominant_weights_below(lam)))}
    items = sorted(ch.items(), key=lambda kv: order[kv[0]])
    if fmt == "records":
        return json.dumps({"lambda": list(lam), "character": [[list(nu), m] for nu, m in items]}) + "\n"
    if fmt == "csv":
        return "nu,multiplicity\n" + "".join(f"{weight_label(nu, config)},{m}\n" for nu, m in items)
    return "".join(f"{weight_label(nu, config)} {m}\n" for nu, m in items)


# -- argument handling -----------------------------------------------------


def parse_type(text: str) -> int:
    m = re.fullmatch(r"A(\d+)", text.strip())
    if not m or int(m.group(1)) < 1:
        raise argparse.ArgumentTypeError(f"unsupported type {text!r}, expected A<k>")
    return int(m.group(1))


def positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="rank", type=parse_type, default=5, metavar="A<k>",
                        help="root system, default A5")
    common.add_argument("--p", type=int, default=3, help="characteristic, default 3")
    common.add_argument("--lambda", dest="lam", help="weight, e.g. 2,1,2,1,2")
    common.add_argument("--format", choices=("text", "csv", "records"), default="text")
    common.add_argument("--workers", type=positive_int, default=1)
    common.add_argument("--cache-dir", help=f"disk cache (default ${ENV_VAR})")
    common.add_argument("--no-memo", action="store_true", help="disable suffix memoization")
    common.add_argument("--backend", choices=("numba", "numpy"), help="kernel backend")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    parser = argparse.ArgumentParser(prog="charp", description="Simple characters of A_n in characteristic p.")
    sub = parser.add_subparsers(dest="command", required=True)
    d = sub.add_parser("dim", parents=[common], help="dim L(lambda), or one weight space with --nu")
    d.add_argument("--nu", help="weight space to measure")
    sub.add_parser("char", parents=[common], help="ch_p(lambda) in the orbit-sum basis")
    t = sub.add_parser("table", parents=[common], help="decomposition matrix rows below lambda")
    t.add_argument("--full-index", action="store_true",
                   help="index by all dominant weights below lambda, not just its linkage class")
    v = sub.add_parser("verify", parents=[common], help="consistency checks and table comparison")
    g = v.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true", help="A2 weights plus a few A5 weights (default)")
    g.add_argument("--full", action="store_true", help="every restricted A5 weight and every table")
    v.add_argument("--table", help="only the reference table (e.g. 4) or block (e.g. 4.2)")
    v.add_argument("--sample", type=int, default=0, help="extra random restricted A5 weights")
    v.add_argument("--seed", type=int, default=0)
    b = sub.add_parser("bench", parents=[common], help="B matrix with and without memoization")
    b.add_argument("--full-index", action="store_true")
    c = sub.add_parser("cache", parents=[common], help="inspect or clear the disk cache")
    c.add_argument("action", choices=("stats", "clear"))
    return parser


def _config(args) -> GroupConfig:
    try:
        return GroupConfig(args.rank, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _weight(text: str | None, config: GroupConfig, what: str = "--lambda") -> Weight:
    if text is None:
        raise UsageError(f"{what} is required")
    try:
        lam = parse_weight(text, config.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not is_dominant(lam):
        raise UsageError(f"{what} {text} is not dominant")
    return lam


def _store(args):
    return DiskStore.from_env(args.cache_dir)


def _engine(args, config: GroupConfig, memo: bool | None = None) -> CharacterEngine:
    return CharacterEngine(config, memo=not args.no_memo if memo is None else memo,
                           store=_store(args), backend=args.backend, workers=args.workers,
                           progress=args.verbose)


# -- commands --------------------------------------------------------------


def cmd_dim(args, out) -> int:
    config = _config(args)
    lam = _weight(args.lam, config)
    eng = _engine(args, config)
    if args.nu is not None:
        nu = _weight(args.nu, config, "--nu")
        if not config.is_restricted(lam):
            raise UsageError("--nu needs a restricted --lambda")
        if not dominance_leq(nu, lam):
            raise UsageError(f"{args.nu} is not below {args.lam}")
        out.write(f"{eng.weight_space_dim(lam, nu)}\n")
    else:
        out.write(f"{eng.dim_L(lam)}\n")
    return EXIT_OK


def cmd_char(args, out) -> int:
    config = _config(args)
    lam = _weight(args.lam, config)
    out.write(format_character(_engine(args, config).ch(lam), args.format, config, lam))
    return EXIT_OK


def cmd_table(args, out) -> int:
    config = _config(args)
    lam = _weight(args.lam, config)
    D = _engine(args, config).matrix_D(lam, "full" if args.full_index else "block")
    out.write(format_matrix(D, args.format, config))
    return EXIT_OK


def cmd_bench(args, out) -> int:
    config = _config(args)
    lam = _weight(args.lam, config)
    if not config.is_restricted(lam):
        raise UsageError("bench needs a restricted --lambda")
    results = {}
    for memo in (True, False):
        eng = CharacterEngine(config, memo=memo, backend=args.backend, workers=args.workers,
                              progress=args.verbose)
        t0 = time.perf_counter()
        B = eng.matrix_B(lam, eng.index_for(lam, "full" if args.full_index else "block"))
        results[memo] = (B, eng.counter, time.perf_counter() - t0)
    (b1, c1, t1), (b0, c0, t0) = results[True], results[False]
    same = format_matrix(b1, "records", config) == format_matrix(b0, "records", config)
    rec = {
        "lambda": list(lam), "weights": len(b1.index),
        "memo": {"applies": c1.applies, "lookups": c1.lookups, "hits": c1.hits, "seconds": round(t1, 3)},
        "no_memo": {"applies": c0.applies, "seconds": round(t0, 3)},
        "apply_ratio": round(c0.applies / c1.applies, 4) if c1.applies else None,
        "identical": same,
    }
    if args.format == "records":
        out.write(json.dumps(rec) + "\n")
    else:
        out.write(f"lambda        {weight_label(lam, config)} ({len(b1.index)} weights)\n"
                  f"memo          {c1.applies} applies, {c1.hits} hits of {c1.lookups} lookups, {t1:.2f}s\n"
                  f"no memo       {c0.applies} applies, {t0:.2f}s\n"
                  f"apply ratio   {rec['apply_ratio']}\n"
                  f"identical     {same}\n")
    return EXIT_OK if same else EXIT_FAILURE


def _verify_weights(args, config: GroupConfig):
    """(config, weights, with golden comparison) groups for the chosen mode."""
    from .verification.golden import load_golden_tables

    if args.table:
        if config.rank != 5 or config.prime != 3:
            raise UsageError("the reference tables are for A5 with p = 3")
        tables = load_golden_tables()
        picked = [t for tid, t in tables.items() if tid == args.table or tid.split(".")[0] == args.table]
        if not picked:
            raise UsageError(f"no table {args.table!r}; known: {', '.join(tables)}")
        return picked
    if args.full:
        return None
    return "quick"


def cmd_verify(args, out) -> int:
    from .verification.checks import CheckReport
    from .verification.golden import golden_rows, load_golden_tables
    from .verification.runner import verify_tables, verify_weights

    config = _config(args)
    picked = _verify_weights(args, config)
    golden = golden_rows()
    reports: list[CheckReport] = []
    a5 = GroupConfig(5, 3)
    if isinstance(picked, list):
        reports += verify_tables(_engine(args, a5), picked, golden)
    elif picked == "quick":
        a2 = GroupConfig(2, 3)
        reports += verify_weights(_engine(args, a2), a2.restricted_weights(), None)
        weights = list(QUICK_A5)
        rng = random.Random(args.seed)
        pool = [w for w in a5.restricted_weights() if w not in weights]
        weights += rng.sample(pool, args.sample) if args.sample else []
        reports += verify_weights(_engine(args, a5), weights, golden)
    else:
        eng = _engine(args, a5)
        reports += verify_weights(eng, a5.restricted_weights(), golden)
        reports += verify_tables(eng, list(load_golden_tables().values()), golden)
    failed = [r for r in reports if not r.ok]
    if args.format == "records":
        for r in reports:
            out.write(json.dumps(r.to_record()) + "\n")
    else:
        for r in reports:
            out.write(r.line() + "\n")
        out.write(f"{len(reports) - len(failed)} of {len(reports)} checks passed\n")
    return EXIT_OK if not failed else EXIT_FAILURE


def cmd_cache(args, out) -> int:
    store = _store(args)
    if store is None:
        raise UsageError(f"no cache directory: pass --cache-dir or set ${ENV_VAR}")
    if args.action == "stats":
        for kind, n in store.stats().items():
            out.write(f"{kind} {n}\n")
    else:
        out.write(f"removed {store.clear()} files\n")
    return EXIT_OK


COMMANDS = {"dim": cmd_dim, "char": cmd_char, "table": cmd_table, "verify": cmd_verify,
            "bench": cmd_bench, "cache": cmd_cache}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"charp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, ArithmeticError) as exc:
        print(f"charp: internal error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 horizon or
limit exceeded. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import benchmarks, database, oracle3, synthesis
from .core import FormatError, WidthError, circuit_to_perm, format_circuit, format_vector, parse_circuit, parse_vector
from .cost import quantum_cost

log = logging.getLogger("rcsynth")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_HORIZON = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Progress:
    """Rate-limited progress lines on stderr."""

    def __init__(self, quiet: bool, interval: float = 1.0):
        self.quiet = quiet
        self.interval = interval
        self._last = 0.0

    def __call__(self, msg: str, force: bool = False) -> None:
        now = time.monotonic()
        if self.quiet or (not force and now - self._last < self.interval):
            return
        self._last = now
        print(msg, file=sys.stderr, flush=True)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _db_path(args) -> Path:
    path = args.db or os.environ.get("RCSYNTH_DB")
    if not path:
        raise UsageError("no database given (use --db or set RCSYNTH_DB)")
    return Path(path)


def _load_db(args) -> database.OptimalDb:
    path = _db_path(args)
    t = time.monotonic()
    db = database.load(path)
    log.info("loaded %s: n=%d depth=%d, %d classes in %.1fs", path, db.n, db.depth, len(db), time.monotonic() - t)
    return db


def _read_circuits(text: str, n: int):
    """Circuit argument, or circuits one per line from stdin for ``-``."""
    if text != "-":
        return [parse_circuit(text, n)]
    out = []
    for line in sys.stdin:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_circuit(line, n))
    return out


# ---------------------------------------------------------------------------
# Subcommands


def cmd_db_build(args) -> int:
    if args.n not in (3, 4):
        raise UsageError("--n must be 3 or 4")
    prog = _Progress(args.quiet, 0.0)
    t = time.monotonic()
    db = database.build(args.n, args.depth, progress=lambda lvl, k: prog(f"level {lvl}: {k} classes"))
    database.save(db, args.out)
    prog(f"built {len(db)} classes in {time.monotonic() - t:.1f}s", force=True)
    print(args.out)
    return EXIT_OK


def cmd_db_info(args) -> int:
    db = database.load(args.path)
    print(f"n={db.n}")
    print(f"depth={db.depth}")
    print(f"classes={len(db)}")
    for i, k in enumerate(db.level_counts()):
        print(f"level {i}: {k}")
    return EXIT_OK


def cmd_gc(args) -> int:
    f = parse_vector(args.vector)
    db = _load_db(args)
    print(synthesis.optimal_gc(db, f))
    return EXIT_OK


def cmd_synth(args) -> int:
    f = parse_vector(args.vector)
    db = _load_db(args)
    c = synthesis.synthesize_one(db, f)
    rep = quantum_cost(c)
    print(f"GC={rep.gc} QC={rep.qc}")
    print(format_circuit(c, peres_marks=args.marks))
    return EXIT_OK


def cmd_enum(args) -> int:
    f = parse_vector(args.vector)
    req = synthesis.EnumerationRequest(
        f, exact_gc=args.gc, slack=args.slack, max_count=args.max_count,
        time_limit=args.time_limit, threads=args.threads, reduced=not args.raw,
    )
    db = _load_db(args)
    on_circuit = None
    if not args.no_circuits:
        def on_circuit(c, qc):
            print(format_circuit(c, peres_marks=args.marks))
    reports, _ = synthesis.enumerate_all(db, req, on_circuit=on_circuit)
    incomplete = False
    for r in reports:
        witness = format_circuit(r.witness) if r.witness is not None else "-"
        print(f"# gc={r.gc} qc_min={r.qc_min} qc_max={r.qc_max} count={r.count} "
              f"complete={'yes' if r.complete else 'no'} witness={witness}")
        log.info("gc %d: %d circuits in %.2fs", r.gc, r.count, r.seconds)
        incomplete |= not r.complete
    if incomplete:
        print("enumeration stopped by a count or time limit", file=sys.stderr)
        return EXIT_HORIZON
    return EXIT_OK


def cmd_qc(args) -> int:
    circuits = _read_circuits(args.circuit, args.n)
    if args.circuit != "-":
        c = circuits[0]
        rep = quantum_cost(c)
        print(f"GC={rep.gc} QC={rep.qc}")
        print(format_circuit(c, peres_marks=args.marks))
        return EXIT_OK
    qcs = []
    for c in circuits:
        rep = quantum_cost(c)
        qcs.append(rep.qc)
        print(f"GC={rep.gc} QC={rep.qc}\t{format_circuit(c, peres_marks=args.marks)}")
    if qcs:
        print(f"# circuits={len(qcs)} qc_min={min(qcs)} qc_max={max(qcs)}")
    else:
        print("# circuits=0")
    return EXIT_OK


def cmd_simulate(args) -> int:
    c = parse_circuit(args.circuit, args.n)
    f = circuit_to_perm(c)
    if args.input is None:
        print(format_vector(f))
        return EXIT_OK
    if not 0 <= args.input < f.size:
        raise FormatError(f"input {args.input} out of range for {args.n} lines")
    print(f(args.input))
    return EXIT_OK


def cmd_bench(args) -> int:
    suite = benchmarks.load_suite(args.suite)
    db = _load_db(args)
    prog = _Progress(args.quiet, 0.0)

    def progress(r):
        prog(f"{r.case} gc {r.expected.gc}: {r.status} ({r.seconds:.1f}s)")

    result = benchmarks.run_suite(
        db, suite, max_gc=args.max_gc, max_count=args.max_count, time_limit=args.time_limit,
        include_heavy=args.heavy, names=args.case or None, threads=args.threads,
        parallel_cases=args.parallel_cases, progress=progress,
    )
    if args.csv:
        sys.stdout.write(result.to_csv())
    else:
        sys.stdout.write(result.to_text())
    if args.improvements:
        rows = benchmarks.improvements(result)
        sys.stdout.write("\n")
        sys.stdout.write(benchmarks.improvements_csv(rows) if args.csv else benchmarks.format_improvements(rows))
    return EXIT_OK if result.ok else EXIT_DATA


def cmd_oracle3(args) -> int:
    t = time.monotonic()
    table = oracle3.build_full_table(reduced=not args.raw)
    log.info("oracle3 table built in %.1fs", time.monotonic() - t)
    text = table.to_csv()
    if args.out:
        Path(args.out).write_text(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rcsynth", description="Exact synthesis of 3- and 4-line reversible circuits.")
    p.add_argument("--quiet", "-q", action="store_true", help="suppress progress and info messages")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    threads = os.cpu_count() or 1

    def with_db(sp):
        sp.add_argument("--db", help="database file (default: $RCSYNTH_DB)")

    sp = sub.add_parser("db-build", help="build a gate-count database")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--depth", type=_non_negative, default=6)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_db_build)

    sp = sub.add_parser("db-info", help="summarize a database file")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_db_info)

    sp = sub.add_parser("gc", help="optimal gate count of a function")
    with_db(sp)
    sp.add_argument("vector")
    sp.set_defaults(func=cmd_gc)

    sp = sub.add_parser("synth", help="one gate-count-optimal circuit")
    with_db(sp)
    sp.add_argument("vector")
    sp.add_argument("--marks", action="store_true", help="bracket Peres groups")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("enum", help="enumerate all circuits of a gate count")
    with_db(sp)
    sp.add_argument("vector")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--gc", type=_non_negative, help="exact gate count")
    g.add_argument("--slack", type=_non_negative, help="gate counts optimal .. optimal+SLACK")
    sp.add_argument("--max-count", type=_positive)
    sp.add_argument("--time-limit", type=float)
    sp.add_argument("--threads", type=_positive, default=threads)
    sp.add_argument("--raw", action="store_true", help="also count sequences repeating a gate back to back")
    sp.add_argument("--no-circuits", action="store_true", help="print only the report lines")
    sp.add_argument("--marks", action="store_true", help="bracket Peres groups")
    sp.set_defaults(func=cmd_enum)

    sp = sub.add_parser("qc", help="gate count and quantum cost of a circuit ('-' reads stdin)")
    sp.add_argument("circuit")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--marks", action="store_true", help="bracket Peres groups")
    sp.set_defaults(func=cmd_qc)

    sp = sub.add_parser("simulate", help="evaluate a circuit")
    sp.add_argument("circuit")
    sp.add_argument("--input", type=int)
    sp.add_argument("--n", type=int, default=4)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="replay the benchmark suite")
    with_db(sp)
    sp.add_argument("--suite", help="suite file (default: bundled)")
    sp.add_argument("--case", action="append", help="run only this case (repeatable)")
    sp.add_argument("--max-gc", type=_non_negative)
    sp.add_argument("--max-count", type=_positive, help="skip rows with more expected circuits")
    sp.add_argument("--time-limit", type=float, help="seconds per row")
    sp.add_argument("--heavy", action="store_true", help="include heavy rows")
    sp.add_argument("--threads", type=_positive, default=threads)
    sp.add_argument("--parallel-cases", type=_positive, default=1)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--improvements", action="store_true", help="append the improvement table")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("oracle3", help="exhaustive 3-line statistics as CSV")
    sp.add_argument("--out")
    sp.add_argument("--raw", action="store_true", help="also count sequences repeating a gate back to back")
    sp.set_defaults(func=cmd_oracle3)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    if getattr(args, "n", 4) not in (3, 4):
        print("rcsynth: error: --n must be 3 or 4", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rcsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except synthesis.HorizonError as exc:
        print(f"rcsynth: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    except BrokenPipeError:
        return EXIT_OK
    except (FormatError, WidthError, database.DatabaseError, OSError, KeyError, ValueError) as exc:
        print(f"rcsynth: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

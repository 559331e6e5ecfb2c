"""Benchmark suite: published 4-line functions with expected enumeration rows.

The data lives in ``data/suite.txt`` (plain text, one block per case). This
module parses and serializes that format, replays the rows against a database
and renders the quantum-cost improvement table.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable

from .core import FormatError, Permutation, format_vector, parse_circuit, parse_vector
from .database import OptimalDb
from .synthesis import DistanceOracle, EnumerationReport, HorizonError, qc_minimize

log = logging.getLogger(__name__)

HEAVY_COUNT = 10**6
HEAVY_GC = 13
_KEYS = ("name", "group", "vector", "printed", "prior", "row", "note")


class SuiteError(FormatError):
    """Malformed suite file; the message carries the source and line number."""


@dataclass(frozen=True)
class ExpectedRow:
    gc: int
    qc_min: int
    qc_max: int
    count: int
    example: str | None = None

    @property
    def values(self) -> tuple[int, int, int, int]:
        return (self.gc, self.qc_min, self.qc_max, self.count)

    @property
    def heavy(self) -> bool:
        return self.count > HEAVY_COUNT or self.gc >= HEAVY_GC


@dataclass(frozen=True)
class PriorBest:
    gc: int
    qc: int
    source: str


@dataclass
class BenchmarkCase:
    name: str
    vector: Permutation
    expected_rows: list[ExpectedRow]
    prior_best: PriorBest | None = None
    group: str = ""
    printed: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def scale(self) -> str:
        return "heavy" if all(r.heavy for r in self.expected_rows) else "desk"

    def row(self, gc: int) -> ExpectedRow:
        for r in self.expected_rows:
            if r.gc == gc:
                return r
        raise KeyError(f"{self.name} has no row for gc {gc}")


def default_suite_path() -> Path:
    return Path(str(resources.files("rcsynth") / "data" / "suite.txt"))


def _ints(text: str, k: int, what: str) -> list[int]:
    parts = text.split()
    if len(parts) != k or not all(p.isdigit() for p in parts):
        raise ValueError(f"{what} needs {k} non-negative integers, got {text!r}")
    return [int(p) for p in parts]


def _finish(block: dict, start: int, source: str) -> BenchmarkCase:
    where = f"{source}:{start}"
    if "name" not in block:
        raise SuiteError(f"{where}: block without name=")
    name = block["name"][0]
    if "vector" not in block:
        raise SuiteError(f"{where}: case {name!r} has no vector=")
    rows = block.get("row", [])
    for a, b in zip(rows, rows[1:]):
        if b.gc <= a.gc:
            raise SuiteError(f"{where}: case {name!r} rows must have strictly increasing gc")
    return BenchmarkCase(
        name=name,
        vector=block["vector"][0],
        expected_rows=list(rows),
        prior_best=block.get("prior", [None])[0],
        group=block.get("group", [""])[0],
        printed=block.get("printed", [None])[0],
        notes=list(block.get("note", [])),
    )


def parse_suite(text: str, source: str = "<suite>") -> list[BenchmarkCase]:
    cases: list[BenchmarkCase] = []
    names: set[str] = set()
    block: dict[str, list] = {}
    start = 0

    def flush() -> None:
        if block:
            case = _finish(block, start, source)
            if case.name in names:
                raise SuiteError(f"{source}:{start}: duplicate case name {case.name!r}")
            names.add(case.name)
            cases.append(case)
            block.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        if not block:
            start = lineno
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _KEYS:
            raise SuiteError(f"{source}:{lineno}: expected one of {', '.join(k + '=' for k in _KEYS)}")
        if key in ("name", "group", "vector", "printed", "prior") and key in block:
            raise SuiteError(f"{source}:{lineno}: repeated {key}=")
        case_name = block.get("name", ["?"])[0]
        try:
            if key == "vector":
                item = parse_vector(value)
            elif key == "prior":
                gc, qc, src = (value.split(None, 2) + ["", ""])[:3]
                gc, qc = _ints(f"{gc} {qc}", 2, "prior=")
                item = PriorBest(gc, qc, src)
            elif key == "row":
                head, _, example = value.partition("|")
                gc, lo, hi, count = _ints(head, 4, "row=")
                example = example.strip() or None
                if example is not None:
                    parse_circuit(example)
                item = ExpectedRow(gc, lo, hi, count, example)
            else:
                if not value and key == "name":
                    raise ValueError("empty name")
                item = value
        except ValueError as exc:
            raise SuiteError(f"{source}:{lineno}: case {case_name!r}: bad {key}=: {exc}") from None
        block.setdefault(key, []).append(item)
    flush()
    return cases


def load_suite(path: str | Path | None = None) -> list[BenchmarkCase]:
    """Parse a suite file; ``None`` loads the bundled suite."""
    path = Path(path) if path is not None else default_suite_path()
    return parse_suite(path.read_text(encoding="utf-8"), str(path))


def serialize_suite(cases: Iterable[BenchmarkCase]) -> str:
    out = []
    for c in cases:
        out.append(f"name={c.name}")
        if c.group:
            out.append(f"group={c.group}")
        out.append(f"vector={format_vector(c.vector)}")
        if c.printed is not None:
            out.append(f"printed={c.printed}")
        if c.prior_best is not None:
            p = c.prior_best
            out.append(f"prior={p.gc} {p.qc} {p.source}".rstrip())
        for r in c.expected_rows:
            line = f"row={r.gc} {r.qc_min} {r.qc_max} {r.count}"
            out.append(line + (f" | {r.example}" if r.example else ""))
        out.extend(f"note={n}" for n in c.notes)
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# Running

MATCH, MISMATCH, INCOMPLETE, HORIZON, SKIPPED = "match", "mismatch", "incomplete", "horizon", "skipped"


@dataclass
class RowResult:
    case: str
    expected: ExpectedRow
    report: EnumerationReport | None
    status: str
    seconds: float = 0.0
    detail: str = ""

    @property
    def match(self) -> bool:
        return self.status == MATCH


@dataclass
class SuiteResult:
    cases: list[BenchmarkCase]
    rows: list[RowResult]

    def by_status(self, status: str) -> list[RowResult]:
        return [r for r in self.rows if r.status == status]

    @property
    def ok(self) -> bool:
        """No computed row disagrees with its expectation."""
        return not self.by_status(MISMATCH)

    def summary(self) -> dict[str, int]:
        out = {s: 0 for s in (MATCH, MISMATCH, INCOMPLETE, HORIZON, SKIPPED)}
        for r in self.rows:
            out[r.status] += 1
        return out

    def to_text(self) -> str:
        lines = [f"{'case':<16}{'gc':>4}  {'expected':<26}{'computed':<26}{'status':<11}{'time[s]':>8}"]
        for r in self.rows:
            e = r.expected
            exp = f"{e.qc_min}-{e.qc_max} {e.count}"
            got = "-" if r.report is None else f"{r.report.qc_min}-{r.report.qc_max} {r.report.count}"
            lines.append(f"{r.case:<16}{e.gc:>4}  {exp:<26}{got:<26}{r.status:<11}{r.seconds:>8.2f}")
        s = self.summary()
        lines.append(" ".join(f"{k}={v}" for k, v in s.items()))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case", "gc", "exp_qc_min", "exp_qc_max", "exp_count",
                    "qc_min", "qc_max", "count", "status", "seconds"])
        for r in self.rows:
            e, rep = r.expected, r.report
            got = ["", "", ""] if rep is None else [rep.qc_min, rep.qc_max, rep.count]
            w.writerow([r.case, e.gc, e.qc_min, e.qc_max, e.count, *got, r.status, f"{r.seconds:.3f}"])
        return buf.getvalue()


def _run_case(db, case, max_gc, max_count, time_limit, include_heavy, threads, progress) -> list[RowResult]:
    oracle = DistanceOracle(db)
    out = []
    for row in case.expected_rows:
        why = None
        if row.heavy and not include_heavy:
            why = "heavy row"
        elif max_gc is not None and row.gc > max_gc:
            why = f"gc above {max_gc}"
        elif max_count is not None and row.count > max_count:
            why = f"count above {max_count}"
        elif case.vector.n != db.n:
            why = f"width {case.vector.n} != database width {db.n}"
        if why:
            out.append(RowResult(case.name, row, None, SKIPPED, detail=why))
            continue
        start = time.monotonic()
        try:
            (rep,) = qc_minimize(db, case.vector, [row.gc], oracle, time_limit=time_limit, threads=threads)
        except HorizonError as exc:
            out.append(RowResult(case.name, row, None, HORIZON, time.monotonic() - start, str(exc)))
            continue
        if not rep.complete:
            status = INCOMPLETE
        elif (rep.qc_min, rep.qc_max, rep.count) == (row.qc_min, row.qc_max, row.count):
            status = MATCH
        else:
            status = MISMATCH
        res = RowResult(case.name, row, rep, status, time.monotonic() - start)
        out.append(res)
        if progress:
            progress(res)
    return out


def run_suite(db: OptimalDb, suite: list[BenchmarkCase], max_gc: int | None = None,
              max_count: int | None = None, time_limit: float | None = None,
              include_heavy: bool = False, names: Iterable[str] | None = None,
              threads: int = 1, parallel_cases: int = 1,
              progress: Callable[[RowResult], None] | None = None) -> SuiteResult:
    """Replay expected rows; each row is matched exactly or flagged.

    ``time_limit`` applies per row; a row that runs out of time is reported
    incomplete rather than compared.
    """
    if names is not None:
        wanted = set(names)
        unknown = wanted - {c.name for c in suite}
        if unknown:
            raise KeyError(f"unknown case(s): {', '.join(sorted(unknown))}")
        suite = [c for c in suite if c.name in wanted]

    def one(case):
        return _run_case(db, case, max_gc, max_count, time_limit, include_heavy, threads, progress)

    if parallel_cases > 1:
        with ThreadPoolExecutor(max_workers=parallel_cases) as pool:
            parts = list(pool.map(one, suite))
    else:
        parts = [one(c) for c in suite]
    return SuiteResult(list(suite), [r for p in parts for r in p])


# ---------------------------------------------------------------------------
# Improvement table


@dataclass(frozen=True)
class Improvement:
    name: str
    best_known: int
    source: str
    ours: int | None

    @property
    def delta(self) -> int:
        return 0 if self.ours is None else self.ours - self.best_known

    @property
    def percent(self) -> float:
        return 100.0 * -self.delta / self.best_known


def improvements(result: SuiteResult) -> list[Improvement]:
    """Best computed qc_min per case against its prior best."""
    ours: dict[str, int] = {}
    for r in result.rows:
        if r.report is not None and r.report.qc_min is not None and r.status in (MATCH, MISMATCH):
            ours[r.case] = min(ours.get(r.case, r.report.qc_min), r.report.qc_min)
    return [
        Improvement(c.name, c.prior_best.qc, c.prior_best.source, ours.get(c.name))
        for c in result.cases
        if c.prior_best is not None
    ]


def format_improvements(rows: list[Improvement]) -> str:
    lines = [f"{'benchmark':<16}{'best known':>11}  {'source':<9}{'ours':>6}{'dQC':>7}{'% impr.':>9}"]
    for r in rows:
        ours = "-" if r.ours is None else str(r.ours)
        lines.append(f"{r.name:<16}{r.best_known:>11}  {r.source:<9}{ours:>6}{r.delta:>7}{r.percent:>9.1f}")
    if rows:
        k = len(rows)
        have = [r.ours for r in rows if r.ours is not None]
        avg_ours = f"{sum(have) / len(have):.1f}" if have else "-"
        avg_best = sum(r.best_known for r in rows) / k
        avg_delta = sum(r.delta for r in rows) / k
        # the average improvement is taken from the averaged columns
        lines.append(
            f"{'average:':<16}{avg_best:>11.1f}  {'':<9}{avg_ours:>6}"
            f"{avg_delta:>7.1f}{100.0 * -avg_delta / avg_best:>9.1f}"
        )
    return "\n".join(lines) + "\n"


def improvements_csv(rows: list[Improvement]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["benchmark", "best_known", "source", "ours", "delta_qc", "percent"])
    for r in rows:
        w.writerow([r.name, r.best_known, r.source, "" if r.ours is None else r.ours, r.delta, f"{r.percent:.1f}"])
    return buf.getvalue()


def improvement_table(result: SuiteResult) -> str:
    return format_improvements(improvements(result))

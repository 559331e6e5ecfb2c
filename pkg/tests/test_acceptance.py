"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured values
and wall time; the lines are also repeated in the pytest terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import collections
import itertools
import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from rcsynth import benchmarks, oracle3
from rcsynth.canonical import Relabeling, canonical_rep, class_members, relabel
from rcsynth.core import (
    Circuit,
    Permutation,
    circuit_to_perm,
    format_circuit,
    gate_library,
    inverse,
    parse_circuit,
    parse_vector,
)
from rcsynth.cost import peres_pairable, peres_pairs
from rcsynth.synthesis import DistanceOracle, EnumerationRequest, enumerate_all, qc_minimize

pytestmark = pytest.mark.acceptance


def record(num: int, ok: bool, what: str, seconds: float, limit: float | None = None) -> None:
    within = limit is None or seconds <= limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    line = f"[{status}] criterion {num}: {what} [{seconds:.1f}s{budget}]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert within, line


@pytest.fixture(scope="module")
def suite():
    return {c.name: c for c in benchmarks.load_suite()}


def check_rows(db, oracle, suite, wanted, per_row_limit):
    """Run (case, gc) rows; return (all matched, summary text, slowest row seconds)."""
    parts, ok, slowest = [], True, 0.0
    for name, gc in wanted:
        case = suite[name]
        exp = case.row(gc)
        t = time.monotonic()
        (rep,) = qc_minimize(db, case.vector, [gc], oracle)
        dt = time.monotonic() - t
        slowest = max(slowest, dt)
        got = (rep.qc_min, rep.qc_max, rep.count)
        match = rep.complete and got == (exp.qc_min, exp.qc_max, exp.count)
        ok &= match
        parts.append(f"{name} gc{gc}={got}{'' if match else ' expected ' + str(exp.values[1:])}")
    return ok, "; ".join(parts), slowest


def test_c1_three_line_exhaustive(db3):
    t = time.monotonic()
    table = oracle3.build_full_table()
    check = oracle3.crosscheck(db3, table)
    dt = time.monotonic() - t
    max_gc = int(table.gc.max())
    ok = max_gc == 8 and check.ok and check.checked == 40320
    record(1, ok, f"oracle over {check.checked} functions, max optimal gc {max_gc}, "
                  f"database(3,8) mismatches {len(check.mismatches)}", dt, 60)


def test_c2_longer_circuit_cheaper(table3):
    t = time.monotonic()
    hits = table3.cheaper_longer_instances(24, 13)
    dt = time.monotonic() - t
    example = ""
    if hits:
        example = f", e.g. {table3.tables[hits[0]].tolist()} (gc {int(table3.gc[hits[0]])})"
    record(2, bool(hits), f"{len(hits)} function(s) with optimal-gc QC 24 and QC 13 one gate longer{example}",
           dt, 600)


def test_c3_many_optimal_circuits(table3):
    t = time.monotonic()
    counts = table3.optimal_counts
    top = int(np.argmax(counts))
    dt = time.monotonic() - t
    n = int(counts[top])
    record(3, n > 1000, f"max gc-optimal circuits {n} for {table3.tables[top].tolist()}", dt, 600)


def test_c4_small_rows_g1_g2_g3_g7(db4, suite):
    rows = [("g1", 3), ("g1", 4), *[("g2", g) for g in range(4, 9)], ("g3", 7), ("g3", 8), ("g7", 7)]
    t = time.monotonic()
    ok, text, slowest = check_rows(db4, DistanceOracle(db4), suite, rows, 300)
    record(4, ok, f"{text}; slowest row {slowest:.1f}s", time.monotonic() - t, 300 * len(rows))
    assert slowest <= 300


def test_c5_standard_benchmark_rows(db4, suite):
    rows = [("decode42", 10), ("imark", 7), ("imark", 8), ("mperk", 9), ("hwb4", 11), ("4_49", 12),
            ("nth_prime4_inc", 11)]
    t = time.monotonic()
    ok, text, slowest = check_rows(db4, DistanceOracle(db4), suite, rows, 1800)
    record(5, ok, f"{text}; slowest row {slowest:.1f}s", time.monotonic() - t, 1800 * len(rows))
    assert slowest <= 1800


def test_c6_mini_alu_mod10_dmasl_rows(db4, suite):
    rows = [("mini_alu", 6), ("mini_alu", 7), ("mini_alu", 8), ("mod10_176", 7), ("mod10_176", 8), ("dmasl", 9)]
    t = time.monotonic()
    ok, text, slowest = check_rows(db4, DistanceOracle(db4), suite, rows, 1800)
    record(6, ok, f"{text}; slowest row {slowest:.1f}s", time.monotonic() - t, 1800 * len(rows))
    assert slowest <= 1800


def test_c7_nth_prime_counts_by_length(db4, suite):
    f = suite["nth_prime4_inc"].vector
    t = time.monotonic()
    reps = qc_minimize(db4, f, [11, 12], DistanceOracle(db4))
    dt = time.monotonic() - t
    counts = [r.count for r in reps]
    ok = counts == [12, 2288] and all(r.complete for r in reps)
    detail = ", ".join(f"gc {r.gc}: {r.count} circuits (qc {r.qc_min}-{r.qc_max})" for r in reps)
    record(7, ok, detail, dt, 3600)


def _brute_pairs(gates) -> int:
    slots = [i for i in range(len(gates) - 1) if peres_pairable(gates[i], gates[i + 1])]
    for k in range(len(slots), 0, -1):
        for pick in itertools.combinations(slots, k):
            if all(b - a >= 2 for a, b in zip(pick, pick[1:])):
                return k
    return 0


def test_c8_properties_without_database():
    t = time.monotonic()
    rng = random.Random(2024)
    checks = collections.Counter()
    lib4 = gate_library(4)

    # gates are involutions; circuits are reversible; text round-trips
    for n in (3, 4):
        for g in gate_library(n):
            assert all(g.act(g.act(v)) == v for v in range(1 << n))
            checks["involution"] += 1
    for _ in range(300):
        c = Circuit(4, tuple(rng.choice(lib4) for _ in range(rng.randint(0, 12))))
        f = circuit_to_perm(c)
        assert sorted(f.table) == list(range(16))
        assert circuit_to_perm(c.reversed()) == inverse(f)
        assert parse_circuit(format_circuit(c, peres_marks=True)) == c
        assert parse_vector(str(f)) == f
        checks["reversibility+roundtrip"] += 1

    # canonical form: a known 12-member class, idempotence, invariance
    example = parse_vector("[1,0,3,2,5,7,4,6]")
    members = class_members(example)
    assert len(members) == 12 and canonical_rep(example).rep == example
    assert all(canonical_rep(m).rep == example for m in members)
    for _ in range(200):
        t16 = list(range(16))
        rng.shuffle(t16)
        f = Permutation(4, tuple(t16))
        cf = canonical_rep(f)
        assert canonical_rep(cf.rep).rep == cf.rep
        assert canonical_rep(relabel(f, Relabeling.from_index(4, rng.randrange(48)))).rep == cf.rep
        checks["canonical"] += 1

    # pairing DP against exhaustive matching, circuits of length <= 8
    tc = [g for g in lib4 if g.kind in (1, 2)]
    for _ in range(3000):
        gates = tuple(rng.choice(tc) for _ in range(rng.randint(0, 8)))
        assert len(peres_pairs(gates)) == _brute_pairs(gates)
        checks["peres"] += 1

    # count(gc) >= count(gc - 2) above the optimum, every 3-line function
    raw = oracle3.build_full_table(reduced=False)
    idx = np.arange(oracle3.NUM_FUNCTIONS)
    for extra in (2, 3):
        assert np.all(raw.counts[raw.gc + extra, idx] >= raw.counts[raw.gc + extra - 2, idx])
    checks["count-monotone"] = oracle3.NUM_FUNCTIONS
    dt = time.monotonic() - t
    record(8, True, ", ".join(f"{k} {v}" for k, v in checks.items()), dt)


def test_c9_enumeration_completeness(db3):
    t = time.monotonic()
    oracle = DistanceOracle(db3)
    lib = gate_library(3)
    rng = random.Random(9)
    checked = 0
    for reduced in (True, False):
        for gc in range(6):
            groups = collections.defaultdict(set)
            for seq in itertools.product(range(len(lib)), repeat=gc):
                if reduced and any(a == b for a, b in zip(seq, seq[1:])):
                    continue
                v = list(range(8))
                for gid in seq:
                    g = lib[gid]
                    v = [g.act(x) for x in v]
                groups[tuple(v)].add(seq)
            unreachable = [p for p in itertools.islice(itertools.permutations(range(8)), 0, 40320, 97)
                           if p not in groups]
            for table in list(groups) + unreachable[:50]:
                req = EnumerationRequest(Permutation(3, table), exact_gc=gc, reduced=reduced)
                _, got = enumerate_all(db3, req, oracle, keep_circuits=True)
                assert {c.ids() for c in got} == groups.get(table, set()), (table, gc, reduced)
                checked += 1
    dt = time.monotonic() - t
    record(9, True, f"{checked} (function, gc<=5, mode) sets equal brute force", dt, 300)


def test_c10_heavy_rows_documented(suite):
    heavy = [(c.name, r.gc) for c in suite.values() for r in c.expected_rows if r.heavy]
    table3 = [n for n, c in suite.items() if c.group == "4b15g"]
    ok = len(table3) == 5 and all(suite[n].scale == "heavy" for n in table3) and ("nth_prime4_inc", 14) in heavy
    line = (f"[EXCLUDED] criterion 10: not reproduced at desk scale; {len(heavy)} heavy rows "
            f"(all {len(table3)} 15-gate cases, counts > 10^6, gc >= 13) are marked heavy and skipped")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok

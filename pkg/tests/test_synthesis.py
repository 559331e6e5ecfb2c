import random

import pytest

from rcsynth import database
from rcsynth.core import Circuit, Permutation, WidthError, circuit_to_perm, gate_library, parse_vector
from rcsynth.cost import quantum_cost
from rcsynth.synthesis import (
    DistanceOracle,
    EnumerationRequest,
    HorizonError,
    brute_force_circuits,
    distance_at_most,
    enumerate_all,
    optimal_gc,
    qc_minimize,
    synthesize_one,
)

G1 = parse_vector("[0,1,2,3,4,5,6,7,8,9,13,12,14,15,11,10]")
HWB4 = parse_vector("[0,2,4,12,8,5,9,11,1,6,10,13,3,14,7,15]")
DECODE42 = parse_vector("[1,2,4,8,0,3,5,6,7,9,10,11,12,13,14,15]")


@pytest.fixture(scope="module")
def shallow3():
    """Depth-3 database: lengths 4..6 need the split search."""
    return database.build(3, 3)


class TestGateCount:
    def test_beyond_depth(self, db4, oracle4):
        assert optimal_gc(db4, HWB4, oracle4) == 11
        assert optimal_gc(db4, DECODE42, oracle4) == 10
        assert not distance_at_most(db4, HWB4, 10, oracle4)
        assert distance_at_most(db4, HWB4, 11, oracle4)

    def test_split_search_matches_oracle(self, shallow3, table3):
        oracle = DistanceOracle(shallow3)
        rng = random.Random(11)
        for i in rng.sample(range(len(table3.keys)), 400):
            f = Permutation(3, tuple(table3.tables[i].tolist()))
            gc = int(table3.gc[i])
            if gc > 6:
                with pytest.raises(HorizonError):
                    optimal_gc(shallow3, f, oracle)
            else:
                assert optimal_gc(shallow3, f, oracle) == gc

    def test_horizon(self, db4, oracle4):
        with pytest.raises(HorizonError):
            distance_at_most(db4, HWB4, 13, oracle4)
        with pytest.raises(HorizonError):
            enumerate_all(db4, EnumerationRequest(HWB4, exact_gc=13), oracle4)

    def test_width_checked(self, db4):
        with pytest.raises(WidthError):
            optimal_gc(db4, Permutation.identity(3))

    @pytest.mark.parametrize("f", [G1, HWB4, DECODE42])
    def test_synthesize_one(self, db4, oracle4, f):
        c = synthesize_one(db4, f, oracle4)
        assert circuit_to_perm(c) == f
        assert len(c) == optimal_gc(db4, f, oracle4)

    def test_synthesize_random_deep(self, db4, oracle4):
        rng = random.Random(5)
        lib = gate_library(4)
        for _ in range(5):
            f = circuit_to_perm(Circuit(4, tuple(rng.choice(lib) for _ in range(9))))
            c = synthesize_one(db4, f, oracle4)
            assert circuit_to_perm(c) == f and len(c) <= 9


class TestEnumeration:
    def test_request_validation(self):
        with pytest.raises(ValueError):
            EnumerationRequest(G1)
        with pytest.raises(ValueError):
            EnumerationRequest(G1, exact_gc=3, slack=1)
        with pytest.raises(ValueError):
            EnumerationRequest(G1, exact_gc=-1)

    def test_g1_rows(self, db4, oracle4):
        reports, circuits = enumerate_all(db4, EnumerationRequest(G1, slack=1), oracle4, keep_circuits=True)
        assert [r.row() for r in reports] == [(3, 15, 15, 2), (4, 12, 36, 13)]
        assert all(circuit_to_perm(c) == G1 for c in circuits)
        assert len(set(circuits)) == 15

    def test_witness_is_cheapest_and_first(self, db4, oracle4):
        seen = []
        (rep,), _ = enumerate_all(db4, EnumerationRequest(G1, exact_gc=4), oracle4,
                                  on_circuit=lambda c, qc: seen.append((c, qc)))
        assert all(quantum_cost(c).qc == qc for c, qc in seen)
        assert rep.witness == next(c for c, qc in seen if qc == rep.qc_min)
        assert seen == sorted(seen, key=lambda t: t[0].ids())

    def test_threads_do_not_change_result(self, db4, oracle4):
        f = parse_vector("[0,1,2,3,4,5,6,7,11,9,15,13,10,8,14,12]")
        one = qc_minimize(db4, f, [7], oracle4, threads=1)[0]
        many = qc_minimize(db4, f, [7], oracle4, threads=4)[0]
        assert one.row() == many.row() == (7, 15, 31, 358)
        assert one.witness == many.witness

    def test_max_count_marks_incomplete(self, db4, oracle4):
        (rep,), _ = enumerate_all(db4, EnumerationRequest(G1, exact_gc=6, max_count=5), oracle4)
        assert not rep.complete and rep.count == 5

    def test_time_limit_marks_incomplete(self, db4, oracle4):
        (rep,), _ = enumerate_all(db4, EnumerationRequest(G1, exact_gc=7, time_limit=0.0), oracle4)
        assert not rep.complete

    def test_below_optimum_is_empty(self, db4, oracle4):
        (rep,), _ = enumerate_all(db4, EnumerationRequest(G1, exact_gc=2), oracle4)
        assert rep.row() == (2, None, None, 0) and rep.complete

    def test_identity(self, db4, oracle4):
        (rep,), _ = enumerate_all(db4, EnumerationRequest(Permutation.identity(4), exact_gc=0), oracle4)
        assert rep.row() == (0, 0, 0, 1)

    @pytest.mark.parametrize("reduced", [True, False])
    def test_matches_brute_force_with_split_search(self, shallow3, reduced):
        oracle = DistanceOracle(shallow3)
        rng = random.Random(2)
        lib = gate_library(3)
        for gc in (4, 5):
            for _ in range(8):
                f = circuit_to_perm(Circuit(3, tuple(rng.choice(lib) for _ in range(gc))))
                want = {c.ids() for c in brute_force_circuits(f, gc, reduced)}
                _, got = enumerate_all(shallow3, EnumerationRequest(f, exact_gc=gc, reduced=reduced), oracle,
                                       keep_circuits=True)
                assert {c.ids() for c in got} == want

    def test_raw_counts_grow_by_two(self, db3):
        oracle = DistanceOracle(db3)
        rng = random.Random(9)
        lib = gate_library(3)
        for _ in range(10):
            f = circuit_to_perm(Circuit(3, tuple(rng.choice(lib) for _ in range(3))))
            o = optimal_gc(db3, f, oracle)
            reps, _ = enumerate_all(db3, EnumerationRequest(f, slack=4, reduced=False), oracle)
            counts = {r.gc: r.count for r in reps}
            for gc in range(o + 2, o + 5):
                assert counts[gc] >= counts[gc - 2]

    def test_reduced_never_repeats_a_gate(self, db4, oracle4):
        _, cs = enumerate_all(db4, EnumerationRequest(G1, exact_gc=6), oracle4, keep_circuits=True)
        assert len(cs) == 1672
        assert all(a != b for c in cs for a, b in zip(c.ids(), c.ids()[1:]))
        _, raw = enumerate_all(db4, EnumerationRequest(G1, exact_gc=6, reduced=False), oracle4, keep_circuits=True)
        assert set(cs) < set(raw)

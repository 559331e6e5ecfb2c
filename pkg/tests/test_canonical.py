import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcsynth.canonical import (
    Relabeling,
    all_relabelings,
    bit_permutation,
    canonical_rep,
    class_members,
    line_perms,
    relabel,
    transport_circuit,
)
from rcsynth.core import Permutation, circuit_to_perm, gate_library, parse_circuit, parse_vector
from rcsynth.kernels import canon_key

EXAMPLE_CLASS = [
    "[1,0,3,2,5,7,4,6]", "[1,0,3,2,6,4,7,5]", "[1,0,3,7,5,4,2,6]",
    "[1,0,6,2,5,4,7,3]", "[2,3,0,1,5,7,4,6]", "[2,3,0,1,6,4,7,5]",
    "[2,3,0,7,6,1,4,5]", "[2,5,0,1,6,7,4,3]", "[4,3,6,7,0,1,2,5]",
    "[4,5,3,7,0,1,2,6]", "[4,5,6,1,0,7,2,3]", "[4,5,6,2,0,1,7,3]",
]


def perms(n):
    return st.permutations(list(range(1 << n))).map(lambda t: Permutation(n, tuple(t)))


relabelings4 = st.integers(0, 47).map(lambda i: Relabeling.from_index(4, i))


class TestRelabeling:
    def test_index_roundtrip(self):
        for n in (3, 4):
            rs = all_relabelings(n)
            assert len(rs) == 2 * len(line_perms(n))
            assert [r.index for r in rs] == list(range(len(rs)))
            assert rs[0] == Relabeling.identity(n)

    def test_bit_permutation_moves_bits(self):
        # line a goes to b and b goes to a
        sig = bit_permutation((1, 0, 2))
        assert sig[0b001] == 0b010 and sig[0b100] == 0b100

    @given(perms(4), relabelings4)
    def test_inverse_relabeling_undoes(self, f, r):
        assert relabel(relabel(f, r), r.inverse()) == f

    @given(perms(4), relabelings4, relabelings4)
    def test_orbit_closed(self, f, r, s):
        assert relabel(relabel(f, r), s) in class_members(f)

    @given(st.lists(st.sampled_from(gate_library(4)), max_size=8), relabelings4)
    def test_transport_circuit_realizes_relabeled_function(self, gates, r):
        from rcsynth.core import Circuit

        c = Circuit(4, tuple(gates))
        assert circuit_to_perm(transport_circuit(c, r)) == relabel(circuit_to_perm(c), r)


class TestCanonical:
    def test_example_class_reproduced(self):
        f = parse_vector(EXAMPLE_CLASS[0])
        members = class_members(f)
        assert len(members) == 12
        assert members == {parse_vector(v) for v in EXAMPLE_CLASS}
        assert canonical_rep(f).rep == f

    @pytest.mark.parametrize("v", EXAMPLE_CLASS)
    def test_every_member_has_same_rep(self, v):
        assert canonical_rep(parse_vector(v)).rep == parse_vector(EXAMPLE_CLASS[0])

    @given(perms(4))
    def test_idempotent_and_witness(self, f):
        cf = canonical_rep(f)
        assert canonical_rep(cf.rep).rep == cf.rep
        assert relabel(f, cf.witness) == cf.rep
        assert cf.rep.table == min(m.table for m in class_members(f))

    @given(perms(4), relabelings4)
    def test_class_invariance(self, f, r):
        assert canonical_rep(relabel(f, r)).rep == canonical_rep(f).rep

    @given(perms(4))
    def test_kernel_agrees(self, f):
        cf = canonical_rep(f)
        assert canon_key(f.key, 4) == (cf.rep.key, cf.witness.index)

    def test_class_size_bound(self):
        f = parse_vector("[0,2,4,12,8,5,9,11,1,6,10,13,3,14,7,15]")
        assert len(class_members(f)) <= 48
        assert class_members(Permutation.identity(4)) == {Permutation.identity(4)}

    def test_circuit_class_members_share_gate_count(self):
        c = parse_circuit("Tbd-c Tbd-a Tcd-b")
        for r in all_relabelings(4):
            t = transport_circuit(c, r)
            assert len(t) == len(c)

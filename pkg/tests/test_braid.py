import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotpos.braid import (
    BraidWord,
    braid_closure,
    braid_linking_matrix,
    braid_profile,
    embed_quasipositive,
    factor_product,
    free_reduce,
    insertion_word,
    key_lemma_identity,
    parse_braid,
    sub_braid,
)
from knotpos.diagram import diagram_profile
from knotpos.errors import (
    EmptySelection,
    GeneratorOutOfRange,
    InvalidPartition,
    MalformedBraid,
    UnknownComponent,
)
from knotpos.linking import ComponentPartition, all_partitions

from conftest import braids, letter_components, strand_components

SAMPLE4 = BraidWord(4, (2, 2, 2, 1, 3, 2, 1, 3))


class TestParse:
    def test_round_trip(self):
        assert parse_braid("B4: 2 2 2 1 3 2 1 3") == SAMPLE4
        assert str(SAMPLE4) == "B4: 2 2 2 1 3 2 1 3"

    def test_whitespace_and_signs(self):
        assert parse_braid("  B3:1 -2 +1 ").letters == (1, -2, 1)

    def test_empty_word(self):
        b = parse_braid("B3:")
        assert b.letters == () and b.num_components == 3

    @pytest.mark.parametrize("text", ["", "3: 1", "B: 1", "B2: 1 x", "B2: 1.0"])
    def test_malformed(self, text):
        with pytest.raises(MalformedBraid):
            parse_braid(text)

    @pytest.mark.parametrize("text", ["B2: 2", "B3: 0", "B1: 1", "B3: -3"])
    def test_out_of_range(self, text):
        with pytest.raises(GeneratorOutOfRange):
            parse_braid(text)

    def test_zero_strands(self):
        with pytest.raises(MalformedBraid):
            BraidWord(0, ())

    @given(braids())
    def test_str_parse_inverse(self, b):
        assert parse_braid(str(b)) == b


class TestSample4:
    def test_profile(self, backend):
        p = braid_profile(SAMPLE4)
        assert (p.writhe, p.self_linking) == (8, 4)
        assert p.permutation.images == (4, 3, 2, 1)
        assert p.component_cycles == ((1, 4), (2, 3))
        assert p.is_positive and not p.is_pure

    def test_sub_braids(self, backend):
        assert sub_braid(SAMPLE4, [0]) == BraidWord(2, (1,))
        assert sub_braid(SAMPLE4, [1]) == BraidWord(2, (1, 1, 1))

    def test_linking(self, backend):
        assert braid_linking_matrix(SAMPLE4).to_lists() == [[0, 2], [2, 0]]

    def test_key_lemma(self, backend):
        r = key_lemma_identity(SAMPLE4, [[0], [1]])
        assert (r.lhs, r.rhs, r.holds) == (4, 4, True)
        assert r.block_self_linking == (-1, 1)


class TestProfile:
    def test_sl_is_writhe_minus_strands(self):
        assert BraidWord(3, (1, -2, -2)).self_linking == -1 - 3

    def test_alternating_lemma_example(self):
        p = braid_profile(BraidWord(3, (1, -2, 1, -2)))
        assert p.is_alternating and p.is_nonsplit_alternating

    def test_missing_generator_is_split(self):
        p = braid_profile(BraidWord(4, (1, 1, -3)))
        assert p.is_alternating and not p.is_nonsplit_alternating

    def test_mixed_signs_not_alternating(self):
        assert not braid_profile(BraidWord(2, (1, -1))).is_alternating

    @given(braids())
    def test_sl_identity(self, b):
        assert b.self_linking == b.writhe - b.strands

    @given(braids())
    def test_cycles_partition_strands(self, b):
        cycles = b.component_cycles
        assert sorted(s for c in cycles for s in c) == list(range(1, b.strands + 1))
        assert [min(c) for c in cycles] == sorted(min(c) for c in cycles)

    @given(braids())
    def test_nonsplit_alternating_closure_connected(self, b):
        if braid_profile(b).is_nonsplit_alternating:
            assert diagram_profile(braid_closure(b)).ell_s == 1


class TestSubBraid:
    def test_errors(self):
        with pytest.raises(EmptySelection):
            sub_braid(SAMPLE4, [])
        with pytest.raises(UnknownComponent):
            sub_braid(SAMPLE4, [2])

    @given(braids())
    def test_all_components_is_identity(self, b):
        assert sub_braid(b, range(b.num_components)) == b

    @settings(max_examples=60)
    @given(braids(), st.data())
    def test_nested_selection(self, b, data):
        m = b.num_components
        outer = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
        outer_sorted = sorted(outer)
        inner = data.draw(st.sets(st.sampled_from(outer_sorted), min_size=1))
        once = sub_braid(b, inner)
        # component order is preserved, so inner components keep their rank
        twice = sub_braid(sub_braid(b, outer), [outer_sorted.index(i) for i in inner])
        assert once == twice

    @given(braids())
    def test_sub_braid_writhe_oracle(self, b):
        comps = letter_components(b)
        for keep in range(b.num_components):
            w = sum(s for p, q, s in comps if p == keep and q == keep)
            assert sub_braid(b, [keep]).writhe == w


class TestLinking:
    def test_hopf(self):
        assert braid_linking_matrix(BraidWord(2, (1, 1))).to_lists() == [[0, 1], [1, 0]]

    def test_mirror_hopf(self):
        assert braid_linking_matrix(BraidWord(2, (-1, -1))).total == -1

    @given(braids())
    def test_matches_closure(self, b):
        assert braid_linking_matrix(b) == diagram_profile(braid_closure(b)).linking_matrix

    @given(braids())
    def test_half_signed_mixed_count(self, b):
        lk = braid_linking_matrix(b)
        for p, q, v in lk.pairs():
            signed = sum(s for a, c, s in letter_components(b) if {a, c} == {p, q})
            assert 2 * v == signed


class TestKeyLemma:
    def test_single_block(self):
        r = key_lemma_identity(SAMPLE4, [[0, 1]])
        assert r.lhs == r.rhs == 0

    def test_hopf_split(self):
        r = key_lemma_identity(BraidWord(2, (1, 1)), [[0], [1]])
        assert (r.self_linking, r.block_self_linking, r.lhs, r.rhs) == (0, (-1, -1), 2, 2)

    def test_invalid_partition(self):
        with pytest.raises(InvalidPartition):
            key_lemma_identity(SAMPLE4, [[0]])
        with pytest.raises(InvalidPartition):
            key_lemma_identity(SAMPLE4, [[0, 1], [1]])

    @settings(max_examples=150)
    @given(braids())
    def test_identity_against_mixed_letter_count(self, b):
        comp = strand_components(b)
        assert max(comp) + 1 == b.num_components
        letters = letter_components(b)
        for P in all_partitions(b.num_components, min_blocks=1):
            block_of = {c: k for k, blk in enumerate(P.blocks) for c in blk}
            oracle = sum(s for p, q, s in letters if block_of[p] != block_of[q])
            r = key_lemma_identity(b, P)
            assert r.holds and r.lhs == oracle == r.rhs


class TestEmbedding:
    def test_single_negative_letter(self):
        e = embed_quasipositive(BraidWord(2, (-1,)))
        assert e.output == BraidWord(3, (-1, 2, 1, 1, 2))
        assert e.added_linking == 2
        assert braid_linking_matrix(e.output).between([0], [1]) == 2

    def test_positive_braid_untouched(self):
        e = embed_quasipositive(SAMPLE4)
        assert e.output == BraidWord(5, SAMPLE4.letters)
        assert e.insertion_records == ()

    def test_insertion_word(self):
        assert insertion_word(3, 1) == (3, 2, 1, 1, 2, 3)
        assert insertion_word(2, 2) == (2, 2)

    def test_free_reduce(self):
        assert free_reduce([1, -1, 2, 3, -3, -2, 4]) == (4,)

    @settings(max_examples=120)
    @given(braids(max_strands=6, max_length=30))
    def test_invariants(self, b):
        e = embed_quasipositive(b)
        n = b.strands
        out = e.output
        assert out.strands == n + 1
        for _, w in e.insertion_records:
            assert BraidWord(n + 1, w).permutation.is_identity
        new = out.num_components - 1
        assert out.component_cycles[new] == (n + 1,)
        assert sub_braid(out, range(new)) == b
        assert factor_product(e.decomposition) == out.letters
        for f in e.decomposition:
            assert f.generator > 0 and len(f.conjugator) <= 1
        originals = {r for r, _ in e.insertion_records}
        k = 0
        for r, j in enumerate(b.letters):
            assert out.letters[k] == j
            k += 1
            if r in originals:
                w = dict(e.insertion_records)[r]
                assert out.letters[k:k + len(w)] == w and all(t > 0 for t in w)
                k += len(w)
        assert k == len(out)
        lk = braid_linking_matrix(out)
        assert lk.between([new], range(new)) == e.added_linking
        expected = sum(n - abs(j) + 1 for j in b.letters if j < 0)
        assert e.added_linking == expected
        mixed = [s for p, q, s in letter_components(out) if (p == new) != (q == new)]
        assert all(s > 0 for s in mixed)


class TestClosure:
    def test_trefoil_pd(self):
        D = braid_closure(BraidWord(2, (1, 1, 1)))
        assert D.to_text().splitlines()[0] == "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]"

    @given(braids())
    def test_closure_counts(self, b):
        D = braid_closure(b)
        p = diagram_profile(D)
        assert p.x == len(b) and p.o == b.strands and p.w == b.writhe
        assert p.ell == b.num_components


def test_partition_parse_round_trip():
    P = ComponentPartition.parse("2|0,1", 3)
    assert str(P) == "0,1|2"

import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packedmm import (
    DimensionMismatch,
    MatrixNat,
    MMMConfig,
    OpCounter,
    SlotLayout,
    SlotOverflow,
    decode,
    encode_lhs,
    encode_rhs,
    mmm,
    mmm_cascade_literal,
    packed_product,
    shifted_sum,
    trace_illustration,
)
from packedmm.harness import schoolbook_matmul
from packedmm.packint import PackedNat, pn_add, pn_from_natural, pn_shift_digits, pn_slot, pn_to_digit_string


def brute_matmul(A, B):
    n = A.n
    return [[sum(A[r, k] * B[k, c] for k in range(n)) for c in range(n)] for r in range(n)]


@st.composite
def instances(draw, max_n=5, max_entry=10**4):
    n = draw(st.integers(1, max_n))
    entries = st.lists(st.integers(0, max_entry), min_size=n * n, max_size=n * n)
    return MatrixNat(n, tuple(draw(entries))), MatrixNat(n, tuple(draw(entries)))


class TestMatrixNat:
    def test_rejects_ragged(self):
        with pytest.raises(DimensionMismatch):
            MatrixNat.from_rows([[1, 2], [3]])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            MatrixNat.from_rows([[-1]])

    def test_vectorizations(self, paper_pair):
        A, B = paper_pair
        assert A.row_major() == (1, 2, 3, 4)
        assert B.column_major() == (5, 7, 6, 8)


class TestEncode:
    def test_lhs_by_string_construction(self, paper_pair):
        A, _ = paper_pair
        layout = SlotLayout(2, 2, 10)
        field = layout.n**2 * layout.p
        expect = "".join(str(v).zfill(field) for v in reversed(A.row_major()))
        assert expect == "00000004" "00000003" "00000002" "00000001"
        ctr = OpCounter()
        a = encode_lhs(A, layout, ctr)
        assert pn_to_digit_string(a, 32) == expect
        assert ctr.encode_entry == 4

    def test_rhs_slots(self, paper_pair):
        _, B = paper_pair
        b = encode_rhs(B, SlotLayout(2, 2, 10))
        assert pn_to_digit_string(b, 8) == "08060705"
        assert [pn_slot(b, j, 2) for j in range(4)] == [5, 7, 6, 8]

    def test_rhs_identity(self):
        b = encode_rhs(MatrixNat.identity(2), SlotLayout(2, 2, 10))
        assert [pn_slot(b, j, 2) for j in range(4)] == [1, 0, 0, 1]

    def test_one_by_one(self):
        layout = SlotLayout(1, 1, 10)
        assert encode_lhs(MatrixNat.from_rows([[7]]), layout).value == 7
        assert encode_rhs(MatrixNat.from_rows([[9]]), layout).value == 9

    def test_zero(self):
        layout = SlotLayout(3, 2, 10)
        assert encode_lhs(MatrixNat.zeros(3), layout).digits == ()

    def test_entry_too_wide(self):
        A = MatrixNat.from_rows([[1000]])
        with pytest.raises(SlotOverflow):
            encode_lhs(A, SlotLayout(1, 1, 10))

    @given(instances(), st.sampled_from([10, 2**16, 2**32]))
    def test_digit_length_law(self, pair, radix):
        A, B = pair
        layout = SlotLayout.for_matrices(A, B, radix)
        a, b = encode_lhs(A, layout), encode_rhs(B, layout)
        assert len(a) <= layout.lhs_digits
        assert len(b) <= layout.rhs_digits
        last_field = (A.n**2 - 1) * layout.lhs_stride
        if A.row_major()[-1]:
            assert last_field < len(a) <= last_field + layout.p


class TestPackedProduct:
    def test_paper_slots(self, paper_pair):
        A, B = paper_pair
        layout = SlotLayout(2, 2, 10)
        x = packed_product(encode_lhs(A, layout), encode_rhs(B, layout))
        assert pn_slot(x, 0, 2) == 1 * 5
        assert pn_slot(x, 1 * 4 + 1, 2) == 2 * 7
        assert pn_slot(x, 3 * 4 + 3, 2) == 4 * 8

    @settings(deadline=None)
    @given(instances(), st.sampled_from([10, 2**16, 2**32]))
    def test_slot_bijection(self, pair, radix):
        A, B = pair
        layout = SlotLayout.for_matrices(A, B, radix)
        x = packed_product(encode_lhs(A, layout), encode_rhs(B, layout))
        n2, p = A.n**2, layout.p
        for i, av in enumerate(A.row_major()):
            for j, bv in enumerate(B.column_major()):
                assert pn_slot(x, i * n2 + j, p) == av * bv
        assert len(x) <= layout.product_slot_count * p

    def test_zero_operand(self, paper_pair):
        A, _ = paper_pair
        layout = SlotLayout(2, 2, 10)
        assert packed_product(encode_lhs(A, layout), encode_rhs(MatrixNat.zeros(2), layout)).digits == ()

    def test_single(self):
        layout = SlotLayout(1, 2, 10)
        x = packed_product(encode_lhs(MatrixNat.from_rows([[7]]), layout), encode_rhs(MatrixNat.from_rows([[9]]), layout))
        assert x.value == 63


class TestShiftedSumAndDecode:
    def test_n1_is_identity(self):
        x = pn_from_natural(42, 10)
        ctr = OpCounter()
        assert shifted_sum(x, SlotLayout(1, 2, 10), ctr) == x
        assert ctr.total() == 0

    def test_paper_result_slots(self, paper_pair):
        A, B = paper_pair
        layout = SlotLayout(2, 2, 10)
        y = shifted_sum(packed_product(encode_lhs(A, layout), encode_rhs(B, layout)), layout)
        assert pn_slot(y, 5, 2) == 19
        assert pn_slot(y, 15, 2) == 50
        assert decode(y, layout).rows() == [[19, 22], [43, 50]]

    def test_n3_random(self):
        rng = random.Random(3)
        A = MatrixNat(3, tuple(rng.randrange(1000) for _ in range(9)))
        B = MatrixNat(3, tuple(rng.randrange(1000) for _ in range(9)))
        layout = SlotLayout.for_matrices(A, B, 10)
        ctr = OpCounter()
        y = shifted_sum(packed_product(encode_lhs(A, layout), encode_rhs(B, layout)), layout, ctr)
        assert decode(y, layout).rows() == brute_matmul(A, B)
        assert (ctr.big_add, ctr.shift) == (2, 2)

    def test_decode_degenerate(self):
        layout = SlotLayout(1, 3, 10)
        assert decode(pn_from_natural(123, 10), layout).rows() == [[123]]
        assert decode(pn_from_natural(0, 10), SlotLayout(2, 1, 10)) == MatrixNat.zeros(2)


class TestMMM:
    def test_paper(self, paper_pair):
        C, ctr = mmm(*paper_pair)
        assert C.rows() == [[19, 22], [43, 50]]
        assert ctr.snapshot() == {"big_mul": 1, "big_add": 1, "shift": 1, "encode_entry": 8, "decode_entry": 4}
        assert ctr.total() == 15

    @given(instances(max_n=6))
    def test_identity(self, pair):
        A, _ = pair
        assert mmm(A, MatrixNat.identity(A.n))[0] == A

    @settings(deadline=None, max_examples=60)
    @given(instances(max_n=8, max_entry=10**6), st.sampled_from([10, 2**16, 2**32, 977]))
    def test_against_brute_force(self, pair, radix):
        A, B = pair
        C, ctr = mmm(A, B, MMMConfig(radix=radix))
        n = A.n
        assert C.rows() == brute_matmul(A, B)
        assert ctr.total() == 3 * n * n + 2 * n - 1
        assert ctr.arithmetic() == n

    def test_schoolbook_threshold_path(self, paper_pair):
        C, _ = mmm(*paper_pair, MMMConfig(karatsuba_threshold=None))
        assert C.rows() == [[19, 22], [43, 50]]

    def test_dimension_mismatch(self, paper_pair):
        with pytest.raises(DimensionMismatch):
            mmm(paper_pair[0], MatrixNat.identity(3))

    def test_forced_narrow_slot(self, paper_pair):
        with pytest.raises(SlotOverflow):
            mmm(*paper_pair, MMMConfig(slot_width=1))

    def test_wider_slot_still_correct(self, paper_pair):
        assert mmm(*paper_pair, MMMConfig(slot_width=5))[0].rows() == [[19, 22], [43, 50]]


def cascade_shift_multiplicities(n):
    """Shift offsets (in strides) produced by the rebinding loop, via an impulse."""
    x = pn_from_natural(1, 2**32)
    for k in range(n - 1, 0, -1):
        x = pn_add(x, pn_shift_digits(x, k))
    return Counter({i: d for i, d in enumerate(x.digits) if d})


def subset_sum_multiset(n):
    ks = range(1, n)
    return Counter(sum(s) for r in range(n) for s in itertools.combinations(ks, r))


class TestCascadeLiteral:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_shift_multiset_is_subset_sums(self, n):
        assert cascade_shift_multiplicities(n) == subset_sum_multiset(n)

    def test_n4_duplicates_offset_3(self):
        assert subset_sum_multiset(4)[3] == 2

    def test_n2_equals_accumulator(self):
        rng = random.Random(2)
        for _ in range(50):
            A = MatrixNat(2, tuple(rng.randrange(100) for _ in range(4)))
            B = MatrixNat(2, tuple(rng.randrange(100) for _ in range(4)))
            assert mmm_cascade_literal(A, B) == mmm(A, B)[0]

    def test_n3_all_ones_differs(self):
        ones = MatrixNat(3, (1,) * 9)
        wrong = mmm_cascade_literal(ones, ones)
        right = schoolbook_matmul(ones, ones)
        assert wrong != right
        # shift 3*(n*n+1) carries product slot 1*9 + 8 into C[1][0]'s slot
        layout = SlotLayout.for_matrices(ones, ones)
        assert result_slot(layout, 1, 0) - 3 * (3 * 3 + 1) == 1 * 9 + 8
        assert wrong[1, 0] == right[1, 0] + ones.row_major()[1] * ones.column_major()[8]


def result_slot(layout, r, c):
    from packedmm.layout import result_slot_index

    return result_slot_index(layout, r, c)


class TestTrace:
    def test_paper_strings(self, paper_pair):
        t = trace_illustration(*paper_pair)
        assert t.p == 2
        assert t.lhs_string == "0102010203040304"
        assert t.rhs_string == "0507060805070608"
        assert t.product_string == "0514061615281832"
        assert len(t.additions) == 1
        assert t.additions[0].augend == "0514061615281832"
        assert t.additions[0].addend == "051406161528183200"
        assert t.final_string == "51920223143465032"
        assert t.marked_final() == "5[19]20[22]31[43]46[50]32"
        assert t.decoded.rows() == [[19, 22], [43, 50]]

    def test_paper_product_is_not_integer_product(self):
        # the slot-wise product differs from multiplying the two printed numbers
        true = int("0102010203040304") * int("0507060805070608")
        assert len(str(true)) > 16

    def test_zero(self):
        Z = MatrixNat.zeros(2)
        t = trace_illustration(Z, Z)
        for s in (t.lhs_string, t.rhs_string, t.product_string, t.final_string):
            assert set(s) == {"0"}
        assert t.decoded == Z

    def test_overflow(self, paper_pair):
        with pytest.raises(SlotOverflow):
            trace_illustration(*paper_pair, p=1)

    @settings(deadline=None)
    @given(instances(max_n=5, max_entry=999))
    def test_agrees_with_template(self, pair):
        A, B = pair
        assert trace_illustration(A, B).decoded == mmm(A, B)[0]

"""Slot geometry for carry-free packing of two n x n matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DimensionMismatch, SlotOverflow
from .packint import check_radix

if TYPE_CHECKING:
    from .kronmul import MatrixNat


def compute_slot_width(n: int, amax: int, bmax: int, radix: int) -> int:
    """Smallest p >= 1 with radix**p > n * amax * bmax.

    Every result entry, and every slot of the shifted sum, is a sum of at most
    n products of one left and one right entry, so this width rules out carries.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    check_radix(radix)
    bound = n * amax * bmax
    p, power = 1, radix
    while power <= bound:
        p += 1
        power *= radix
    return p


@dataclass(frozen=True)
class SlotLayout:
    n: int
    p: int
    radix: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        check_radix(self.radix)

    @property
    def rhs_stride(self) -> int:
        return self.p

    @property
    def lhs_stride(self) -> int:
        return self.n**2 * self.p

    @property
    def shift_stride(self) -> int:
        return self.p * (self.n**2 + 1)

    @property
    def product_slot_count(self) -> int:
        return self.n**4

    @property
    def lhs_digits(self) -> int:
        """Width of the padded left encoding: n**2 fields of n**2 * p digits."""
        return self.n**4 * self.p

    @property
    def rhs_digits(self) -> int:
        return self.n**2 * self.p

    @property
    def capacity(self) -> int:
        """Exclusive upper bound on any single slot value."""
        return self.radix**self.p

    @classmethod
    def for_matrices(cls, A: MatrixNat, B: MatrixNat, radix: int = 10, p: int | None = None) -> SlotLayout:
        """Minimal layout for ``A @ B``; a requested ``p`` must still validate."""
        _check_pair(A, B)
        if p is None:
            amax, bmax = A.max_entry(), B.max_entry()
            # a zero operand makes the product bound 0; entries must still fit a slot
            p = max(compute_slot_width(A.n, amax, bmax, radix), compute_slot_width(1, max(amax, bmax), 1, radix))
        layout = cls(A.n, p, radix)
        validate_layout(layout, A, B)
        return layout


def _check_pair(A: MatrixNat, B: MatrixNat) -> None:
    if A.n != B.n:
        raise DimensionMismatch(f"left operand is {A.n}x{A.n}, right operand is {B.n}x{B.n}")


def validate_layout(layout: SlotLayout, A: MatrixNat, B: MatrixNat) -> None:
    """Raise unless ``layout`` packs ``A`` and ``B`` without inter-slot carries."""
    _check_pair(A, B)
    if layout.n != A.n:
        raise DimensionMismatch(f"layout is for n={layout.n}, matrices have n={A.n}")
    if layout.p < 1:
        raise SlotOverflow(f"slot width must be >= 1, got p={layout.p}")
    bound = A.n * A.max_entry() * B.max_entry()
    widest = max(A.max_entry(), B.max_entry())
    if layout.capacity <= widest:
        raise SlotOverflow(f"entry {widest} does not fit p={layout.p} digits in radix {layout.radix}")
    if layout.capacity <= bound:
        raise SlotOverflow(
            f"radix**p = {layout.radix}**{layout.p} = {layout.capacity} does not exceed "
            f"n*max(A)*max(B) = {A.n}*{A.max_entry()}*{B.max_entry()} = {bound}"
        )


def result_slot_index(layout: SlotLayout, r: int, c: int) -> int:
    """LS-first slot (width p) of C[r][c] in the shifted sum, 0-based r and c."""
    n = layout.n
    if not (0 <= r < n and 0 <= c < n):
        raise IndexError(f"({r}, {c}) outside a {n}x{n} matrix")
    return r * n**3 + c * n + (n - 1) * (n**2 + 1)


def one_based_decode_start(n: int, p: int, i: int, j: int) -> int:
    """Start digit of C_ij with 1-based i, j, written the way the decode rule states it."""
    return (i * n * p - p) * n**2 + j * n * p - p

"""Packed matrix multiplication: encode, one big multiply, n-1 shifted adds, decode.

The left matrix is flattened row-major with entry i at digit offset i*n*n*p,
the right matrix column-major with entry j at offset j*p.  Their product holds
every pairwise entry product in its own p-digit slot i*n*n + j.  Adding copies
shifted by k*(n*n+1) slots for k = 0..n-1 gathers each inner product into the
slot returned by :func:`result_slot_index`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, SlotOverflow
from .layout import SlotLayout, result_slot_index
from .packint import (
    DEFAULT_KARATSUBA_THRESHOLD,
    OpCounter,
    PackedNat,
    pn_add,
    pn_from_natural,
    pn_mul,
    pn_shift_digits,
    pn_slot,
    pn_to_digit_string,
)


@dataclass(frozen=True)
class MatrixNat:
    """Dense n x n matrix of naturals, row-major."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if self.n < 1:
            raise DimensionMismatch(f"matrix dimension must be >= 1, got {self.n}")
        if len(entries) != self.n * self.n:
            raise DimensionMismatch(f"{len(entries)} entries for a {self.n}x{self.n} matrix")
        for e in entries:
            if not isinstance(e, (int, np.integer)) or e < 0:
                raise ValueError(f"entries must be natural numbers, got {e!r}")
        object.__setattr__(self, "entries", tuple(int(e) for e in entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> MatrixNat:
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise DimensionMismatch(f"matrix is not square: row of length {len(row)} in {n} rows")
        return cls(n, tuple(v for row in rows for v in row))

    @classmethod
    def identity(cls, n: int) -> MatrixNat:
        return cls(n, tuple(int(r == c) for r in range(n) for c in range(n)))

    @classmethod
    def zeros(cls, n: int) -> MatrixNat:
        return cls(n, (0,) * (n * n))

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.entries[r * self.n + c]

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[r * n : (r + 1) * n]) for r in range(n)]

    def row_major(self) -> tuple[int, ...]:
        return self.entries

    def column_major(self) -> tuple[int, ...]:
        n = self.n
        return tuple(self.entries[r * n + c] for c in range(n) for r in range(n))

    def max_entry(self) -> int:
        return max(self.entries)


@dataclass(frozen=True)
class MMMConfig:
    radix: int = 10
    slot_width: int | None = None
    karatsuba_threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD


def _pack(values: Iterable[int], stride: int, layout: SlotLayout) -> PackedNat:
    """Place value i at digit offset i*stride, each value in its low p digits."""
    values = list(values)
    p, radix = layout.p, layout.radix
    cap = layout.capacity
    digits = np.zeros(stride * (len(values) - 1) + p, dtype=np.int64)
    for i, v in enumerate(values):
        if v >= cap:
            raise SlotOverflow(f"entry {v} needs more than p={p} digits in radix {radix}")
        d = pn_from_natural(v, radix).digits
        digits[i * stride : i * stride + len(d)] = d
    return PackedNat._trusted(radix, _strip_list(digits.tolist()))


def _strip_list(digits: list[int]) -> list[int]:
    while digits and digits[-1] == 0:
        digits.pop()
    return digits


def encode_lhs(A: MatrixNat, layout: SlotLayout, ctr: OpCounter | None = None) -> PackedNat:
    """Row-major entries, each padded to a field of n*n*p digits."""
    if ctr is not None:
        ctr.encode_entry += A.n * A.n
    return _pack(A.row_major(), layout.lhs_stride, layout)


def encode_rhs(B: MatrixNat, layout: SlotLayout, ctr: OpCounter | None = None) -> PackedNat:
    """Column-major entries, each padded to p digits."""
    if ctr is not None:
        ctr.encode_entry += B.n * B.n
    return _pack(B.column_major(), layout.rhs_stride, layout)


def packed_product(
    a: PackedNat,
    b: PackedNat,
    ctr: OpCounter | None = None,
    threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD,
) -> PackedNat:
    return pn_mul(a, b, ctr, threshold)


def shifted_sum(x: PackedNat, layout: SlotLayout, ctr: OpCounter | None = None) -> PackedNat:
    """Sum of x * radix**(k * shift_stride) for k = 0..n-1 (n-1 shifts, n-1 adds).

    Each shifted copy is taken from the original product, never from the
    running total.
    """
    y = x
    for k in range(1, layout.n):
        y = pn_add(y, pn_shift_digits(x, k * layout.shift_stride, ctr), ctr)
    return y


def decode(y: PackedNat, layout: SlotLayout, ctr: OpCounter | None = None) -> MatrixNat:
    n, p = layout.n, layout.p
    if ctr is not None:
        ctr.decode_entry += n * n
    return MatrixNat(n, tuple(pn_slot(y, result_slot_index(layout, r, c), p) for r in range(n) for c in range(n)))


def _layout(A: MatrixNat, B: MatrixNat, config: MMMConfig) -> SlotLayout:
    return SlotLayout.for_matrices(A, B, config.radix, config.slot_width)


def mmm(A: MatrixNat, B: MatrixNat, config: MMMConfig | None = None) -> tuple[MatrixNat, OpCounter]:
    """Multiply two natural matrices with one big multiplication and n-1 additions."""
    config = config or MMMConfig()
    layout = _layout(A, B, config)
    ctr = OpCounter()
    a = encode_lhs(A, layout, ctr)
    b = encode_rhs(B, layout, ctr)
    x = packed_product(a, b, ctr, config.karatsuba_threshold)
    y = shifted_sum(x, layout, ctr)
    return decode(y, layout, ctr), ctr


def mmm_cascade_literal(
    A: MatrixNat, B: MatrixNat, config: MMMConfig | None = None, ctr: OpCounter | None = None
) -> MatrixNat:
    """The loop ``x = x + shiftl_k(x)`` for k = n-1..1 with x rebound each pass.

    Rebinding multiplies the product by prod(1 + radix**(k*stride)), which
    produces every subset sum of {1..n-1} as a shift.  Shift 3 already appears
    at n=3 and lands unrelated products in result slots.  Kept as a negative
    reference only; use :func:`mmm`.
    """
    config = config or MMMConfig()
    layout = _layout(A, B, config)
    ctr = OpCounter() if ctr is None else ctr
    x = pn_mul(encode_lhs(A, layout, ctr), encode_rhs(B, layout, ctr), ctr, config.karatsuba_threshold)
    for k in range(layout.n - 1, 0, -1):
        x = pn_add(x, pn_shift_digits(x, k * layout.shift_stride, ctr), ctr)
    return decode(x, layout, ctr)


# ---------------------------------------------------------------------------
# compact illustration: n**3 slots, slot-wise product, 1-slot shifts


@dataclass(frozen=True)
class TraceStep:
    augend: str
    addend: str
    total: str


@dataclass(frozen=True)
class TraceReport:
    n: int
    p: int
    lhs_string: str
    rhs_string: str
    product_string: str
    additions: tuple[TraceStep, ...]
    final_string: str
    final_padded: str
    result_slots: tuple[int, ...]  # MS-first slot of C[r][c], row-major
    decoded: MatrixNat = field(compare=False)

    def marked_final(self, open_mark: str = "[", close_mark: str = "]") -> str:
        """Final digits with each result slot bracketed, leading zeros dropped."""
        p = self.p
        marked = set(self.result_slots)
        parts = []
        for s in range(len(self.final_padded) // p):
            chunk = self.final_padded[s * p : (s + 1) * p]
            parts.append(f"{open_mark}{chunk}{close_mark}" if s in marked else chunk)
        text = "".join(parts)
        head = len(text) - len(text.lstrip("0"))
        first_mark = text.find(open_mark)
        if 0 <= first_mark < head:
            head = first_mark
        return text[head:] or "0"


def _from_ms_slots(values: Sequence[int], p: int, radix: int) -> PackedNat:
    digits: list[int] = []
    for v in reversed(values):
        d = list(pn_from_natural(v, radix).digits)
        digits.extend(d + [0] * (p - len(d)))
    return PackedNat(radix, digits)


def trace_illustration(A: MatrixNat, B: MatrixNat, p: int | None = None) -> TraceReport:
    """Replay the compact decimal walkthrough of the packed method.

    Both operands are spread over n**3 slots ordered by (r, c, k), holding
    A[r][k] and B[k][c].  Their slot-wise product is summed with n-1 copies
    shifted by one slot each, so C[r][c] collects in MS-first slot
    r*n*n + c*n + n - 1.  The product step is slot-wise, not a big
    multiplication: a real product of these operands would mix slots.
    """
    radix = 10
    layout = SlotLayout.for_matrices(A, B, radix, p)
    n, p = layout.n, layout.p
    order = [(r, c, k) for r in range(n) for c in range(n) for k in range(n)]
    lhs_vals = [A[r, k] for r, c, k in order]
    rhs_vals = [B[k, c] for r, c, k in order]
    prod_vals = [a * b for a, b in zip(lhs_vals, rhs_vals)]
    width = n**3 * p

    lhs = _from_ms_slots(lhs_vals, p, radix)
    rhs = _from_ms_slots(rhs_vals, p, radix)
    prod = _from_ms_slots(prod_vals, p, radix)

    ctr = OpCounter()
    acc = prod
    steps = []
    for m in range(1, n):
        addend = pn_shift_digits(prod, m * p, ctr)
        total = pn_add(acc, addend, ctr)
        steps.append(
            TraceStep(
                pn_to_digit_string(acc, width + (m - 1) * p),
                pn_to_digit_string(addend, width + m * p),
                pn_to_digit_string(total, width + m * p),
            )
        )
        acc = total

    slot_count = n**3 + n - 1
    result_slots = tuple(r * n * n + c * n + n - 1 for r in range(n) for c in range(n))
    decoded = MatrixNat(n, tuple(pn_slot(acc, slot_count - 1 - s, p) for s in result_slots))
    return TraceReport(
        n=n,
        p=p,
        lhs_string=pn_to_digit_string(lhs, width),
        rhs_string=pn_to_digit_string(rhs, width),
        product_string=pn_to_digit_string(prod, width),
        additions=tuple(steps),
        final_string=pn_to_digit_string(acc),
        final_padded=pn_to_digit_string(acc, slot_count * p),
        result_slots=result_slots,
        decoded=decoded,
    )

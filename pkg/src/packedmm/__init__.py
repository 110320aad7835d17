"""Natural-number matrix multiplication with one big multiplication and n-1 additions."""

from .errors import DimensionMismatch, MemoryCapExceeded, OracleMismatch, RadixMismatch, SlotOverflow
from .kronmul import (
    MatrixNat,
    MMMConfig,
    TraceReport,
    decode,
    encode_lhs,
    encode_rhs,
    mmm,
    mmm_cascade_literal,
    packed_product,
    shifted_sum,
    trace_illustration,
)
from .layout import SlotLayout, compute_slot_width, result_slot_index, validate_layout
from .packint import OpCounter, PackedNat, pn_add, pn_from_natural, pn_mul, pn_shift_digits, pn_slot
from .polymul import PolyNat, kron_poly_mul, naive_convolution

__version__ = "0.1.0"

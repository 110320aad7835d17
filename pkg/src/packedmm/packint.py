"""Radix-generic natural numbers stored as least-significant-first digit tuples.

Multiplication uses a column-sum schoolbook kernel for short operands and
Karatsuba above a configurable digit threshold.  Digit kernels run on numpy
int64 arrays; the public values are immutable :class:`PackedNat` instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import RadixMismatch

MAX_RADIX = 2**32
DEFAULT_KARATSUBA_THRESHOLD = 32

# Values are produced by np.convolve on int64; beyond this split digits in halves.
_SPLIT_RADIX = 2**16
_CARRY_ROUNDS = 24
# below this length a sequential carry loop beats vectorized rounds
_SHORT = 256


def check_radix(radix: int) -> int:
    if not isinstance(radix, int) or isinstance(radix, bool):
        raise TypeError(f"radix must be an int, got {type(radix).__name__}")
    if not 2 <= radix <= MAX_RADIX:
        raise ValueError(f"radix must lie in [2, 2**32], got {radix}")
    return radix


@dataclass
class OpCounter:
    """Per-kind operation tallies for one run."""

    big_mul: int = 0
    big_add: int = 0
    shift: int = 0
    encode_entry: int = 0
    decode_entry: int = 0

    def total(self) -> int:
        return sum(getattr(self, f.name) for f in fields(self))

    def arithmetic(self) -> int:
        """Multiplications plus additions; loads, shifts and stores excluded."""
        return self.big_mul + self.big_add

    def snapshot(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __add__(self, other: OpCounter) -> OpCounter:
        return OpCounter(**{k: v + getattr(other, k) for k, v in self.snapshot().items()})


@dataclass(frozen=True)
class PackedNat:
    """A natural number ``sum(digits[k] * radix**k)``.

    ``digits`` is least-significant first with no most-significant zero;
    zero is the empty tuple.
    """

    radix: int
    digits: tuple[int, ...]

    def __post_init__(self):
        check_radix(self.radix)
        digits = tuple(self.digits)
        for d in digits:
            if not 0 <= d < self.radix:
                raise ValueError(f"digit {d} out of range for radix {self.radix}")
        object.__setattr__(self, "digits", _strip(digits))

    @classmethod
    def _trusted(cls, radix: int, digits) -> PackedNat:
        obj = object.__new__(cls)
        object.__setattr__(obj, "radix", radix)
        object.__setattr__(obj, "digits", tuple(digits))
        return obj

    @property
    def value(self) -> int:
        return _digits_value(self.digits, self.radix)

    def __len__(self) -> int:
        return len(self.digits)

    def __int__(self) -> int:
        return self.value


def _strip(digits: tuple[int, ...]) -> tuple[int, ...]:
    end = len(digits)
    while end and digits[end - 1] == 0:
        end -= 1
    return digits[:end]


def _digits_value(digits, radix: int) -> int:
    n = len(digits)
    if n <= 64:
        v = 0
        for d in reversed(digits):
            v = v * radix + d
        return v
    mid = n // 2
    return _digits_value(digits[:mid], radix) + _digits_value(digits[mid:], radix) * radix**mid


def _natural_digits(v: int, radix: int) -> list[int]:
    if v < radix**64:
        out = []
        while v:
            v, d = divmod(v, radix)
            out.append(d)
        return out
    half = int(v.bit_length() / math.log2(radix)) // 2
    hi, lo = divmod(v, radix**half)
    low = _natural_digits(lo, radix)
    low.extend([0] * (half - len(low)))
    return low + _natural_digits(hi, radix)


def pn_from_natural(v: int, radix: int) -> PackedNat:
    check_radix(radix)
    if v < 0:
        raise ValueError("PackedNat holds naturals only")
    return PackedNat._trusted(radix, _natural_digits(v, radix))


def pn_zero(radix: int) -> PackedNat:
    return PackedNat._trusted(check_radix(radix), ())


def pn_is_zero(x: PackedNat) -> bool:
    return not x.digits


def pn_cmp(a: PackedNat, b: PackedNat) -> int:
    _same_radix(a, b)
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    for da, db in zip(reversed(a.digits), reversed(b.digits)):
        if da != db:
            return -1 if da < db else 1
    return 0


def _same_radix(a: PackedNat, b: PackedNat) -> None:
    if a.radix != b.radix:
        raise RadixMismatch(f"radix {a.radix} vs {b.radix}")


# ---------------------------------------------------------------------------
# digit-array kernels (LS-first int64 arrays, trimmed on return)


def _arr(digits) -> np.ndarray:
    return np.asarray(digits, dtype=np.int64)


def _trim(x: np.ndarray) -> np.ndarray:
    if x.size == 0 or x[-1]:
        return x
    nz = np.flatnonzero(x)
    return x[: nz[-1] + 1] if nz.size else x[:0]


def _propagate(c: np.ndarray, radix: int) -> np.ndarray:
    """Normalize non-negative column values (each < 2**62) into digits."""
    if c.size == 0:
        return c
    if c.size < _SHORT:
        return _carry_loop(c.tolist(), radix)
    headroom = int(62 / math.log2(radix)) + 2
    c = np.concatenate([c, np.zeros(headroom, dtype=np.int64)])
    for _ in range(_CARRY_ROUNDS):
        hi = c // radix
        if not hi.any():
            return _trim(c)
        c -= hi * radix
        c[1:] += hi[:-1]
    # long ripple chains finish sequentially
    return _carry_loop(c.tolist(), radix)


def _carry_loop(lst: list[int], radix: int) -> np.ndarray:
    carry = 0
    for i, t in enumerate(lst):
        carry, lst[i] = divmod(t + carry, radix)
    while carry:
        carry, d = divmod(carry, radix)
        lst.append(d)
    return _trim(_arr(lst))


def _add(a: np.ndarray, b: np.ndarray, radix: int) -> np.ndarray:
    if a.size < b.size:
        a, b = b, a
    s = a.copy()
    s[: b.size] += b
    return _propagate(s, radix)


def _sub(a: np.ndarray, b: np.ndarray, radix: int) -> np.ndarray:
    """a - b for a >= b."""
    d = a.copy()
    d[: b.size] -= b
    for _ in range(_CARRY_ROUNDS):
        neg = d < 0
        if not neg.any():
            return _trim(d)
        d[neg] += radix
        d[1:] -= neg[:-1]
    lst = d.tolist()
    borrow = 0
    for i, t in enumerate(lst):
        t -= borrow
        borrow = 1 if t < 0 else 0
        lst[i] = t + radix * borrow
    if borrow:
        raise ValueError("subtraction underflow")
    return _trim(_arr(lst))


def _schoolbook(a: np.ndarray, b: np.ndarray, radix: int) -> np.ndarray:
    """Column sums of all digit products, then one carry pass."""
    if a.size == 0 or b.size == 0:
        return a[:0]
    if radix <= _SPLIT_RADIX:
        return _propagate(np.convolve(a, b), radix)
    a_lo, a_hi = a & 0xFFFF, a >> 16
    b_lo, b_hi = b & 0xFFFF, b >> 16
    ll = np.convolve(a_lo, b_lo).tolist()
    lh = (np.convolve(a_lo, b_hi) + np.convolve(a_hi, b_lo)).tolist()
    hh = np.convolve(a_hi, b_hi).tolist()
    out = []
    carry = 0
    for x, y, z in zip(ll, lh, hh):
        carry, d = divmod(x + (y << 16) + (z << 32) + carry, radix)
        out.append(d)
    while carry:
        carry, d = divmod(carry, radix)
        out.append(d)
    return _trim(_arr(out))


def _lopsided(a: np.ndarray, b: np.ndarray, radix: int, threshold: int) -> np.ndarray:
    # a is much shorter than b: multiply a by len(a)-digit chunks of b
    step = a.size
    out = np.zeros(a.size + b.size + 1, dtype=np.int64)
    for start in range(0, b.size, step):
        chunk = b[start : start + step]
        nz = np.flatnonzero(chunk)
        if not nz.size:
            continue
        # sparse operands: skip zero digits at both ends of the chunk
        lo = start + nz[0]
        prod = _karatsuba(a, chunk[nz[0] : nz[-1] + 1], radix, threshold)
        out[lo : lo + prod.size] += prod
    return _propagate(out, radix)


def _karatsuba(a: np.ndarray, b: np.ndarray, radix: int, threshold: int) -> np.ndarray:
    if a.size > b.size:
        a, b = b, a
    if a.size == 0:
        return a
    if a.size <= threshold:
        return _schoolbook(a, b, radix)
    if 2 * a.size <= b.size:
        return _lopsided(a, b, radix, threshold)
    m = b.size // 2
    a0, a1 = _trim(a[:m]), a[m:]
    b0, b1 = _trim(b[:m]), b[m:]
    z0 = _karatsuba(a0, b0, radix, threshold)
    z2 = _karatsuba(a1, b1, radix, threshold)
    t = _karatsuba(_add(a0, a1, radix), _add(b0, b1, radix), radix, threshold)
    z1 = _sub(_sub(t, z0, radix), z2, radix)
    out = np.zeros(a.size + b.size + 1, dtype=np.int64)
    out[: z0.size] += z0
    out[m : m + z1.size] += z1
    out[2 * m : 2 * m + z2.size] += z2
    return _propagate(out, radix)


def mul_digits(a, b, radix: int, threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD) -> list[int]:
    """Multiply two LS-first digit sequences.

    ``threshold=None`` forces the schoolbook kernel for the whole product.
    """
    x, y = _trim(_arr(a)), _trim(_arr(b))
    if threshold is None:
        return _schoolbook(x, y, radix).tolist()
    if threshold < 1:
        raise ValueError("Karatsuba threshold must be >= 1")
    return _karatsuba(x, y, radix, threshold).tolist()


# ---------------------------------------------------------------------------
# counted operations


def pn_add(a: PackedNat, b: PackedNat, ctr: OpCounter | None = None) -> PackedNat:
    _same_radix(a, b)
    if ctr is not None:
        ctr.big_add += 1
    if not a.digits:
        return b
    if not b.digits:
        return a
    s = _add(_arr(a.digits), _arr(b.digits), a.radix)
    return PackedNat._trusted(a.radix, s.tolist())


def pn_mul(
    a: PackedNat,
    b: PackedNat,
    ctr: OpCounter | None = None,
    threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD,
) -> PackedNat:
    """Product of ``a`` and ``b``; counts as one multiplication however it recurses."""
    _same_radix(a, b)
    if ctr is not None:
        ctr.big_mul += 1
    return PackedNat._trusted(a.radix, mul_digits(a.digits, b.digits, a.radix, threshold))


def pn_shift_digits(x: PackedNat, d: int, ctr: OpCounter | None = None) -> PackedNat:
    """Multiply by ``radix**d`` by inserting ``d`` low zero digits."""
    if d < 0:
        raise ValueError("shift must be non-negative")
    if ctr is not None:
        ctr.shift += 1
    if not x.digits:
        return x
    return PackedNat._trusted(x.radix, (0,) * d + x.digits)


def pn_slot(x: PackedNat, index: int, width: int) -> int:
    """Value of digits ``[index*width, (index+1)*width)``; missing digits read 0."""
    if width < 1 or index < 0:
        raise ValueError("need width >= 1 and index >= 0")
    start = index * width
    return _digits_value(x.digits[start : start + width], x.radix)


def pn_to_digit_string(x: PackedNat, min_digits: int = 0) -> str:
    """Most-significant-first rendering, zero-padded to ``min_digits``.

    Radix 10 gives a plain decimal string; other radices render a bracketed
    MS-first digit list.
    """
    digits = list(reversed(x.digits))
    pad = max(0, min_digits - len(digits))
    if x.radix == 10:
        return "0" * pad + "".join(map(str, digits)) if digits or pad else "0"
    return "[" + ", ".join(map(str, [0] * pad + digits)) + "]"

"""Polynomial multiplication by Kronecker substitution.

Both polynomials are evaluated at radix**q, multiplied once, and the product's
q-digit slots read back as coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .layout import compute_slot_width
from .packint import (
    DEFAULT_KARATSUBA_THRESHOLD,
    OpCounter,
    PackedNat,
    check_radix,
    pn_from_natural,
    pn_mul,
    pn_slot,
)


@dataclass(frozen=True)
class PolyNat:
    """Natural-coefficient polynomial; ``coeffs[k]`` multiplies z**k.

    Highest-degree zeros are trimmed, so zero is ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be natural numbers")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> PolyNat:
        return cls(coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def max_coeff(self) -> int:
        return max(self.coeffs, default=0)


def _as_poly(f: PolyNat | Sequence[int]) -> PolyNat:
    return f if isinstance(f, PolyNat) else PolyNat(tuple(f))


def naive_convolution(f: PolyNat | Sequence[int], g: PolyNat | Sequence[int]) -> PolyNat:
    f, g = _as_poly(f), _as_poly(g)
    if not f.coeffs or not g.coeffs:
        return PolyNat(())
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] += a * b
    return PolyNat(tuple(out))


def poly_slot_width(f: PolyNat, g: PolyNat, radix: int) -> int:
    """Smallest q with radix**q above the largest possible product coefficient."""
    terms = min(len(f), len(g))
    return compute_slot_width(max(terms, 1), f.max_coeff(), g.max_coeff(), radix)


def kron_pack(f: PolyNat, q: int, radix: int, ctr: OpCounter | None = None) -> PackedNat:
    """Evaluate f at radix**q as a packed number."""
    digits: list[int] = []
    for c in f.coeffs:
        d = pn_from_natural(c, radix).digits
        digits.extend(d)
        digits.extend([0] * (q - len(d)))
    if ctr is not None:
        ctr.encode_entry += len(f)
    return PackedNat(radix, digits)


def kron_poly_mul(
    f: PolyNat | Sequence[int],
    g: PolyNat | Sequence[int],
    radix: int = 10,
    ctr: OpCounter | None = None,
    threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD,
) -> PolyNat:
    """f * g using a single big multiplication."""
    f, g = _as_poly(f), _as_poly(g)
    check_radix(radix)
    q = poly_slot_width(f, g, radix)
    x = pn_mul(kron_pack(f, q, radix, ctr), kron_pack(g, q, radix, ctr), ctr, threshold)
    count = len(f) + len(g) - 1 if f.coeffs and g.coeffs else 0
    if ctr is not None:
        ctr.decode_entry += count
    coeffs = tuple(pn_slot(x, k, q) for k in range(count))
    if len(x) > count * q:
        raise AssertionError("product spilled past its last coefficient slot")
    return PolyNat(coeffs)

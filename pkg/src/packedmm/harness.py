"""Ground truth, seeded instance generation, equivalence suite and benchmark."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DimensionMismatch, MemoryCapExceeded, OracleMismatch, SlotOverflow
from .kronmul import MatrixNat, MMMConfig, decode, encode_lhs, encode_rhs, mmm, packed_product, shifted_sum
from .layout import SlotLayout, compute_slot_width
from .packint import DEFAULT_KARATSUBA_THRESHOLD, OpCounter

log = logging.getLogger(__name__)

REPORT_VERSION = 1
DEFAULT_SEED = 0x5EED
DEFAULT_MAX_N = 16
DEFAULT_MEMORY_CAP_DIGITS = 1 << 22

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator.

    state += 0x9E3779B97F4A7C15, then the output is mixed with
    z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9, z = (z ^ z >> 27) * 0x94D049BB133111EB,
    z ^ z >> 31, all modulo 2**64.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by masked rejection."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        if bound == 1:
            return 0
        bits = (bound - 1).bit_length()
        words = (bits + 63) // 64
        mask = (1 << bits) - 1
        while True:
            v = 0
            for _ in range(words):
                v = (v << 64) | self.next_u64()
            v &= mask
            if v < bound:
                return v

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def fork(self) -> SplitMix64:
        return SplitMix64(self.next_u64())


def schoolbook_matmul(A: MatrixNat, B: MatrixNat) -> MatrixNat:
    if A.n != B.n:
        raise DimensionMismatch(f"{A.n}x{A.n} times {B.n}x{B.n}")
    n = A.n
    a, b = A.entries, B.entries
    out = []
    for r in range(n):
        for c in range(n):
            out.append(sum(a[r * n + k] * b[k * n + c] for k in range(n)))
    return MatrixNat(n, tuple(out))


def random_matrix(n: int, max_entry: int, rng: SplitMix64) -> MatrixNat:
    """Entries uniform in [0, max_entry], drawn row-major."""
    if max_entry < 0:
        raise ValueError("max_entry must be >= 0")
    return MatrixNat(n, tuple(rng.below(max_entry + 1) for _ in range(n * n)))


def expected_counts(n: int) -> dict[str, int]:
    return {
        "big_mul": 1,
        "big_add": n - 1,
        "shift": n - 1,
        "encode_entry": 2 * n * n,
        "decode_entry": n * n,
    }


# ---------------------------------------------------------------------------
# equivalence suite


@dataclass(frozen=True)
class SuiteConfig:
    cases: int = 1000
    n_min: int = 1
    n_max: int = 8
    max_entry: int = 10**6
    radices: tuple[int, ...] = (10, 2**16, 2**32)
    seed: int = DEFAULT_SEED
    # negative values force the slot width below the carry-free minimum
    slot_width_delta: int = 0
    karatsuba_threshold: int | None = DEFAULT_KARATSUBA_THRESHOLD


@dataclass
class CaseFailure:
    case: int
    seed: int
    n: int
    radix: int
    reason: str
    lhs: list[list[int]]
    rhs: list[list[int]]


@dataclass
class SuiteSummary:
    config: SuiteConfig
    cases: int = 0
    passed: int = 0
    expected_failures: int = 0
    ops_per_n: dict[int, int] = field(default_factory=dict)
    failures: list[CaseFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.passed + self.expected_failures == self.cases

    def lines(self) -> list[str]:
        out = [
            f"cases: {self.cases}",
            f"passed: {self.passed}",
            f"expected SlotOverflow: {self.expected_failures}",
            f"failures: {len(self.failures)}",
        ]
        for n in sorted(self.ops_per_n):
            out.append(f"n={n}: {self.ops_per_n[n]} ops/case")
        for f in self.failures:
            out.append(f"FAIL case {f.case} seed={f.seed:#x} n={f.n} radix={f.radix}: {f.reason}")
            out.append(f"  A={f.lhs}")
            out.append(f"  B={f.rhs}")
        out.append("PASS" if self.ok else "FAIL")
        return out


def _run_case(i: int, rng: SplitMix64, config: SuiteConfig, summary: SuiteSummary) -> None:
    seed = rng.state
    n = rng.integer(config.n_min, config.n_max)
    radix = config.radices[i % len(config.radices)]
    A = random_matrix(n, config.max_entry, rng)
    B = random_matrix(n, config.max_entry, rng)

    def fail(reason: str) -> None:
        summary.failures.append(CaseFailure(i, seed, n, radix, reason, A.rows(), B.rows()))

    p = None
    if config.slot_width_delta:
        p = compute_slot_width(n, A.max_entry(), B.max_entry(), radix) + config.slot_width_delta
    mmm_config = MMMConfig(radix=radix, slot_width=p, karatsuba_threshold=config.karatsuba_threshold)
    try:
        C, ctr = mmm(A, B, mmm_config)
    except SlotOverflow as exc:
        if config.slot_width_delta < 0:
            summary.expected_failures += 1
        else:
            fail(f"unexpected SlotOverflow: {exc}")
        return
    if config.slot_width_delta < 0:
        fail(f"slot width {p} below the minimum was accepted")
        return
    if C != schoolbook_matmul(A, B):
        fail(f"result {C.rows()} differs from schoolbook")
        return
    if ctr.snapshot() != expected_counts(n) or ctr.total() != 3 * n * n + 2 * n - 1:
        fail(f"operation counts {ctr.snapshot()} differ from {expected_counts(n)}")
        return
    summary.ops_per_n[n] = ctr.total()
    summary.passed += 1


def run_equivalence_suite(config: SuiteConfig | None = None) -> SuiteSummary:
    """Compare the packed product against the schoolbook oracle on random cases."""
    config = config or SuiteConfig()
    if not config.radices:
        raise ValueError("at least one radix is required")
    master = SplitMix64(config.seed)
    summary = SuiteSummary(config)
    for i in range(config.cases):
        summary.cases += 1
        _run_case(i, master.fork(), config, summary)
    log.info("suite: %d cases, %d failures", summary.cases, len(summary.failures))
    return summary


# ---------------------------------------------------------------------------
# benchmark


@dataclass
class BenchReport:
    config: dict
    cases: list[dict] = field(default_factory=list)
    version: int = REPORT_VERSION

    def to_dict(self) -> dict:
        return {"version": self.version, "config": self.config, "cases": self.cases}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def deterministic_view(self) -> dict:
        """The report without wall-clock fields."""
        d = self.to_dict()
        d["cases"] = [{k: v for k, v in c.items() if k != "timings"} for c in d["cases"]]
        return d


def _padded_length(digit_count: int, field_width: int) -> int:
    """Digits spanned by the fields the operand occupies."""
    return -(-digit_count // field_width) * field_width


def check_bench_size(n: int, max_entry: int, radix: int, *, max_n: int, memory_cap_digits: int, force: bool) -> None:
    if force:
        return
    p = compute_slot_width(n, max_entry, max_entry, radix)
    digits = n**4 * p
    if n > max_n:
        raise MemoryCapExceeded(f"n={n} exceeds the default maximum n={max_n} (force overrides)")
    if digits > memory_cap_digits:
        raise MemoryCapExceeded(
            f"n={n}: left operand would need n**4*p = {n}**4*{p} = {digits} digits, cap is {memory_cap_digits}"
        )


def bench_case(n: int, radix: int, max_entry: int, rng: SplitMix64, threshold=DEFAULT_KARATSUBA_THRESHOLD) -> dict:
    seed = rng.state
    A = random_matrix(n, max_entry, rng)
    B = random_matrix(n, max_entry, rng)
    layout = SlotLayout.for_matrices(A, B, radix)
    ctr = OpCounter()

    t0 = time.perf_counter()
    a = encode_lhs(A, layout, ctr)
    b = encode_rhs(B, layout, ctr)
    t1 = time.perf_counter()
    x = packed_product(a, b, ctr, threshold)
    t2 = time.perf_counter()
    y = shifted_sum(x, layout, ctr)
    t3 = time.perf_counter()
    C = decode(y, layout, ctr)
    t4 = time.perf_counter()

    match = C == schoolbook_matmul(A, B)
    if not match:
        raise OracleMismatch(f"n={n} radix={radix} seed={seed:#x}: packed product differs from schoolbook")

    lhs_digits = _padded_length(len(a), layout.lhs_stride)
    rhs_digits = _padded_length(len(b), layout.rhs_stride)
    if A.row_major()[-1] and lhs_digits != layout.lhs_digits:
        raise OracleMismatch(f"left operand spans {lhs_digits} digits, expected n**4*p = {layout.lhs_digits}")
    if B.column_major()[-1] and rhs_digits != layout.rhs_digits:
        raise OracleMismatch(f"right operand spans {rhs_digits} digits, expected n**2*p = {layout.rhs_digits}")

    return {
        "n": n,
        "radix": radix,
        "p": layout.p,
        "seed": seed,
        "timings": {"encode": t1 - t0, "multiply": t2 - t1, "sum": t3 - t2, "decode": t4 - t3},
        "lhs_digits": lhs_digits,
        "rhs_digits": rhs_digits,
        "lhs_significant_digits": len(a),
        "rhs_significant_digits": len(b),
        "product_digits": len(x),
        "sum_digits": len(y),
        "counter": ctr.snapshot(),
        "total_ops": ctr.total(),
        "oracle_match": match,
    }


def run_benchmark(
    sizes: Sequence[int],
    max_entry: int = 10**6,
    radices: Sequence[int] = (2**32,),
    seed: int = DEFAULT_SEED,
    *,
    max_n: int = DEFAULT_MAX_N,
    memory_cap_digits: int = DEFAULT_MEMORY_CAP_DIGITS,
    force: bool = False,
) -> BenchReport:
    """Time each pipeline stage for every (size, radix) pair.

    All sizes are checked against the memory guard before any case runs.
    """
    for n in sizes:
        if n < 1:
            raise ValueError(f"size must be >= 1, got {n}")
        for radix in radices:
            check_bench_size(n, max_entry, radix, max_n=max_n, memory_cap_digits=memory_cap_digits, force=force)
    config = {
        "sizes": list(sizes),
        "max_entry": max_entry,
        "radices": list(radices),
        "seed": seed,
        "max_n": max_n,
        "memory_cap_digits": memory_cap_digits,
        "force": force,
    }
    report = BenchReport(config)
    master = SplitMix64(seed)
    for n in sizes:
        for radix in radices:
            report.cases.append(bench_case(n, radix, max_entry, master.fork()))
    return report

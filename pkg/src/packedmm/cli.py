"""packedmm command line.

  packedmm multiply A.txt B.txt [--count-ops] [--json] [--mode cascade-literal]
  packedmm trace A.txt B.txt
  packedmm verify [--cases N] [--max-n N] [--max-entry M] [--radix R,...] [--seed S]
  packedmm bench --sizes 2,4,8 [--radix R,...] [--json-out report.json] [--force]
  packedmm polymul 1,2 3,4 [--count-ops]

Exit status: 0 success, 1 dimension/overflow/verification failure,
2 usage, I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import harness
from .errors import DimensionMismatch, MemoryCapExceeded, OracleMismatch, SlotOverflow
from .kronmul import MMMConfig, mmm, mmm_cascade_literal, trace_illustration
from .layout import SlotLayout
from .matrixfile import MatrixFormatError, read_matrix, render_matrix
from .packint import DEFAULT_KARATSUBA_THRESHOLD, MAX_RADIX, OpCounter
from .polymul import PolyNat, kron_poly_mul

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_int(text: str) -> int:
    """Decimal integer, or a power written ``2^32`` / ``2**32``."""
    text = text.strip()
    m = re.fullmatch(r"([0-9]+)\s*(?:\^|\*\*)\s*([0-9]+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    if not re.fullmatch(r"[0-9]+", text):
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return int(text)


def parse_radix(text: str) -> int:
    r = parse_int(text)
    if not 2 <= r <= MAX_RADIX:
        raise argparse.ArgumentTypeError(f"radix must lie in [2, 2^32], got {r}")
    return r


def parse_int_list(text: str) -> list[int]:
    return [parse_int(tok) for tok in text.split(",") if tok.strip()]


def parse_radix_list(text: str) -> list[int]:
    radices = [parse_radix(tok) for tok in text.split(",") if tok.strip()]
    if not radices:
        raise argparse.ArgumentTypeError("at least one radix is required")
    return radices


def parse_coeffs(text: str) -> PolyNat:
    tokens = [t.strip() for t in text.split(",")]
    if tokens == [""]:
        return PolyNat(())
    for t in tokens:
        if not re.fullmatch(r"[0-9]+", t):
            raise UsageError(f"bad coefficient {t!r} in {text!r}")
    return PolyNat(tuple(int(t) for t in tokens))


def counter_lines(ctr: OpCounter, n: int | None = None) -> list[str]:
    lines = [f"{name:<13}{value}" for name, value in ctr.snapshot().items()]
    total = f"{'total':<13}{ctr.total()}"
    if n is not None:
        total += f"  (3n^2+2n-1 = {3 * n * n + 2 * n - 1})"
    lines.append(total)
    arith = f"{'arithmetic':<13}{ctr.arithmetic()}"
    if n is not None:
        arith += f"  (n = {n})"
    lines.append(arith)
    return lines


def _threshold(value: int) -> int | None:
    return None if value == 0 else value


def cmd_multiply(args) -> int:
    A, B = read_matrix(args.lhs), read_matrix(args.rhs)
    config = MMMConfig(radix=args.radix, slot_width=args.slot_width, karatsuba_threshold=_threshold(args.threshold))
    if args.mode == "cascade-literal":
        print(
            "warning: cascade-literal rebinds x inside the loop and is wrong for n >= 3; "
            "it exists only as a documented negative reference",
            file=sys.stderr,
        )
        ctr = OpCounter()
        C = mmm_cascade_literal(A, B, config, ctr)
    else:
        C, ctr = mmm(A, B, config)
    layout = SlotLayout.for_matrices(A, B, args.radix, args.slot_width)
    if args.json:
        doc = {
            "version": harness.REPORT_VERSION,
            "mode": args.mode,
            "n": C.n,
            "radix": args.radix,
            "p": layout.p,
            "result": C.rows(),
        }
        if args.count_ops:
            doc["counter"] = ctr.snapshot()
            doc["total_ops"] = ctr.total()
            doc["arithmetic_ops"] = ctr.arithmetic()
        print(json.dumps(doc, sort_keys=True))
        return EXIT_OK
    sys.stdout.write(render_matrix(C))
    if args.count_ops:
        print("\n".join(counter_lines(ctr, C.n)))
    return EXIT_OK


def cmd_trace(args) -> int:
    if args.radix != 10:
        raise UsageError("trace works in radix 10 only")
    A, B = read_matrix(args.lhs), read_matrix(args.rhs)
    t = trace_illustration(A, B, args.slot_width)
    print(f"n={t.n} p={t.p}")
    print(f"lhs      {t.lhs_string}")
    print(f"rhs      {t.rhs_string}")
    print(f"product  {t.product_string}  (slot-wise)")
    for i, step in enumerate(t.additions, start=1):
        print(f"add {i}    {step.augend} + {step.addend}")
        print(f"       =  {step.total}")
    print(f"final    {t.final_string}")
    print(f"marked   {t.marked_final()}")
    print("result")
    sys.stdout.write(render_matrix(t.decoded))
    return EXIT_OK


def cmd_verify(args) -> int:
    config = harness.SuiteConfig(
        cases=args.cases,
        n_min=args.min_n,
        n_max=args.max_n,
        max_entry=args.max_entry,
        radices=tuple(args.radix),
        seed=args.seed,
        karatsuba_threshold=_threshold(args.threshold),
    )
    if config.n_min > config.n_max:
        raise UsageError("--min-n exceeds --max-n")
    summary = harness.run_equivalence_suite(config)
    print("\n".join(summary.lines()))
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_bench(args) -> int:
    report = harness.run_benchmark(
        args.sizes,
        max_entry=args.max_entry,
        radices=args.radix,
        seed=args.seed,
        max_n=args.max_n,
        memory_cap_digits=args.memory_cap,
        force=args.force,
    )
    text = report.to_json()
    if args.json_out:
        Path(args.json_out).write_text(text + "\n", encoding="utf-8")
        print(f"{'n':>3} {'radix':>10} {'p':>3} {'lhs':>9} {'rhs':>6} {'ops':>5} {'mul s':>9} {'total s':>9}")
        for c in report.cases:
            tm = c["timings"]
            print(
                f"{c['n']:>3} {c['radix']:>10} {c['p']:>3} {c['lhs_digits']:>9} {c['rhs_digits']:>6} "
                f"{c['total_ops']:>5} {tm['multiply']:>9.5f} {sum(tm.values()):>9.5f}"
            )
        print(f"wrote {args.json_out}")
    else:
        print(text)
    return EXIT_OK


def cmd_polymul(args) -> int:
    f, g = parse_coeffs(args.f), parse_coeffs(args.g)
    ctr = OpCounter()
    h = kron_poly_mul(f, g, args.radix, ctr)
    print(",".join(map(str, h.coeffs)) if h.coeffs else "0")
    if args.count_ops:
        print("\n".join(counter_lines(ctr)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="packedmm", description="Packed natural-number matrix multiplication.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_pair(p):
        p.add_argument("lhs", help="left matrix file")
        p.add_argument("rhs", help="right matrix file")
        p.add_argument("--slot-width", type=int, default=None, help="slot width p; validated before use")

    threshold_help = f"Karatsuba threshold in digits, 0 for schoolbook only (default {DEFAULT_KARATSUBA_THRESHOLD})"

    p = sub.add_parser("multiply", help="multiply two matrix files")
    add_pair(p)
    p.add_argument("--radix", type=parse_radix, default=10)
    p.add_argument("--mode", choices=["template", "cascade-literal"], default="template")
    p.add_argument("--count-ops", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--threshold", type=int, default=DEFAULT_KARATSUBA_THRESHOLD, help=threshold_help)
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("trace", help="print the compact decimal walkthrough")
    add_pair(p)
    p.add_argument("--radix", type=parse_radix, default=10)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="compare against the schoolbook oracle on random cases")
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--min-n", type=int, default=1)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--max-entry", type=parse_int, default=10**6)
    p.add_argument("--radix", type=parse_radix_list, default=[10, 2**16, 2**32])
    p.add_argument("--seed", type=parse_int, default=harness.DEFAULT_SEED)
    p.add_argument("--threshold", type=int, default=DEFAULT_KARATSUBA_THRESHOLD, help=threshold_help)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time each pipeline stage and write a JSON report")
    p.add_argument("--sizes", type=parse_int_list, default=[2, 4, 8])
    p.add_argument("--radix", type=parse_radix_list, default=[2**32])
    p.add_argument("--max-entry", type=parse_int, default=10**6)
    p.add_argument("--seed", type=parse_int, default=harness.DEFAULT_SEED)
    p.add_argument("--json-out", default=None)
    p.add_argument("--force", action="store_true", help="skip the size and memory guard")
    p.add_argument("--max-n", type=int, default=harness.DEFAULT_MAX_N)
    p.add_argument("--memory-cap", type=parse_int, default=harness.DEFAULT_MEMORY_CAP_DIGITS, help="digits")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("polymul", help="multiply two polynomials given as coefficient lists")
    p.add_argument("f", help="comma-separated coefficients, constant term first")
    p.add_argument("g")
    p.add_argument("--radix", type=parse_radix, default=10)
    p.add_argument("--count-ops", action="store_true")
    p.set_defaults(func=cmd_polymul)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, MatrixFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionMismatch, SlotOverflow, MemoryCapExceeded, OracleMismatch) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())

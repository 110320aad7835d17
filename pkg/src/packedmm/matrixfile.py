"""Plain-text matrix format: a line holding n, then n rows of n naturals."""

from __future__ import annotations

import re
from pathlib import Path

from .kronmul import MatrixNat

_NATURAL = re.compile(r"[0-9]+")


class MatrixFormatError(ValueError):
    pass


def parse_matrix(text: str) -> MatrixNat:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 1 or not _NATURAL.fullmatch(header[0]) or int(header[0]) < 1:
        raise MatrixFormatError(f"first line must be a dimension n >= 1, got {lines[0]!r}")
    n = int(header[0])
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(body)}")
    entries = []
    for lineno, line in enumerate(body, start=2):
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"line {lineno}: expected {n} entries, found {len(tokens)}")
        for tok in tokens:
            if not _NATURAL.fullmatch(tok):
                raise MatrixFormatError(f"line {lineno}: {tok!r} is not a natural number")
            entries.append(int(tok))
    return MatrixNat(n, tuple(entries))


def render_matrix(M: MatrixNat) -> str:
    rows = "\n".join(" ".join(map(str, row)) for row in M.rows())
    return f"{M.n}\n{rows}\n"


def read_matrix(path: str | Path) -> MatrixNat:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))

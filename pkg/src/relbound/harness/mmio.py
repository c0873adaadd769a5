"""Matrix Market reader and writer (dense results, array or coordinate files).

Values are written with 17 significant digits so binary64 entries survive a
round trip exactly. Symmetric, skew-symmetric and Hermitian files store only
the lower triangle.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from ..errors import ParseError, SymmetryViolation

_TOKEN = re.compile(r"\S+")
FIELDS = ("real", "complex", "integer", "pattern")
SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _detect(M: np.ndarray) -> tuple[str, str]:
    field = "complex" if np.iscomplexobj(M) and np.any(M.imag != 0) else "real"
    if M.shape[0] != M.shape[1]:
        return field, "general"
    if field == "complex":
        return field, "hermitian" if np.array_equal(M, M.conj().T) else "general"
    R = M.real
    return field, "symmetric" if np.array_equal(R, R.T) else "general"


def write_matrix(path, M, layout: str = "array", symmetry: str = "auto", comment: str | None = None) -> None:
    """Write a dense matrix. ``symmetry="auto"`` picks the tightest qualifier."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    field, sym = _detect(M)
    if symmetry != "auto":
        sym = symmetry
        if sym == "hermitian":
            field = "complex"
    if layout not in ("array", "coordinate"):
        raise ValueError(f"unknown layout {layout!r}")
    rows, cols = M.shape
    if sym != "general" and rows != cols:
        raise ValueError(f"{sym} storage needs a square matrix")
    if sym not in SYMMETRIES:
        raise ValueError(f"unknown symmetry {sym!r}")
    mirror = {"symmetric": M.T, "skew-symmetric": -M.T, "hermitian": M.conj().T}.get(sym)
    if mirror is not None and not np.array_equal(M, mirror):
        raise ValueError(f"matrix is not {sym}; the lower triangle would not reproduce it")

    def keep(i: int, j: int) -> bool:
        if sym == "general":
            return True
        if sym == "skew-symmetric":
            return i > j
        return i >= j

    def value(x) -> str:
        if field == "complex":
            return f"{_fmt(x.real)} {_fmt(x.imag)}"
        return _fmt(np.real(x))

    lines = [f"%%MatrixMarket matrix {layout} {field} {sym}"]
    if comment:
        lines += [f"%{line}" for line in comment.splitlines()]
    if layout == "array":
        lines.append(f"{rows} {cols}")
        for j in range(cols):
            for i in range(rows):
                if keep(i, j):
                    lines.append(value(M[i, j]))
    else:
        entries = [
            f"{i + 1} {j + 1} {value(M[i, j])}"
            for j in range(cols)
            for i in range(rows)
            if keep(i, j) and M[i, j] != 0
        ]
        lines.append(f"{rows} {cols} {len(entries)}")
        lines += entries
    Path(path).write_text("\n".join(lines) + "\n")


def _tokens(line: str):
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _number(tok: str, col: int, lineno: int, integer: bool = False) -> float:
    try:
        return float(int(tok)) if integer else float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", lineno, col) from None


def _index(tok: str, col: int, lineno: int, limit: int) -> int:
    try:
        k = int(tok)
    except ValueError:
        raise ParseError(f"expected an integer index, got {tok!r}", lineno, col) from None
    if not 1 <= k <= limit:
        raise ParseError(f"index {k} outside 1..{limit}", lineno, col)
    return k - 1


def read_matrix(path) -> np.ndarray:
    """Read a Matrix Market file into a dense float64 or complex128 array."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1, 1)
    head = _tokens(lines[0])
    if not head or head[0][0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket banner", 1, 1)
    if len(head) != 5:
        raise ParseError("banner needs: object format field symmetry", 1, head[-1][1])
    obj, fmt, field, sym = (t.lower() for t, _ in head[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1, head[1][1])
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unsupported format {fmt!r}", 1, head[2][1])
    if field not in FIELDS or (field == "pattern" and fmt == "array"):
        raise ParseError(f"unsupported field {field!r}", 1, head[3][1])
    if sym not in SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym!r}", 1, head[4][1])
    if sym == "hermitian" and field != "complex":
        raise ParseError("hermitian symmetry requires the complex field", 1, head[4][1])

    body = [
        (no, _tokens(line))
        for no, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith("%")
    ]
    if not body:
        raise ParseError("missing size line", len(lines) + 1, 1)
    size_no, size = body[0]
    want = 2 if fmt == "array" else 3
    if len(size) != want:
        raise ParseError(f"size line needs {want} integers", size_no, size[-1][1] if size else 1)
    dims = []
    for tok, col in size:
        try:
            dims.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", size_no, col) from None
    rows, cols = dims[0], dims[1]
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", size_no, size[0][1])
    if sym != "general" and rows != cols:
        raise ParseError(f"{sym} matrix must be square", size_no, size[0][1])

    is_complex = field == "complex"
    per_value = 2 if is_complex else (0 if field == "pattern" else 1)
    integer = field == "integer"
    M = np.zeros((rows, cols), dtype=np.complex128 if is_complex else np.float64)
    entries = body[1:]

    def parse_value(toks, lineno):
        if per_value == 0:
            return 1.0
        re_ = _number(toks[0][0], toks[0][1], lineno, integer)
        if is_complex:
            return complex(re_, _number(toks[1][0], toks[1][1], lineno))
        return re_

    if fmt == "array":
        slots = [
            (i, j)
            for j in range(cols)
            for i in range(rows)
            if sym == "general" or (i > j if sym == "skew-symmetric" else i >= j)
        ]
        if len(entries) != len(slots):
            where = entries[len(slots)][0] if len(entries) > len(slots) else len(lines) + 1
            raise ParseError(f"expected {len(slots)} values, found {len(entries)}", where, 1)
        for (i, j), (lineno, toks) in zip(slots, entries):
            if len(toks) != per_value:
                raise ParseError(f"expected {per_value} number(s) per line", lineno, toks[-1][1])
            M[i, j] = parse_value(toks, lineno)
            _check_diagonal(sym, i, j, M[i, j], lineno)
    else:
        nnz = dims[2]
        if len(entries) != nnz:
            where = entries[nnz][0] if len(entries) > nnz else len(lines) + 1
            raise ParseError(f"expected {nnz} entries, found {len(entries)}", where, 1)
        seen = set()
        for lineno, toks in entries:
            if len(toks) != 2 + per_value:
                raise ParseError(f"expected {2 + per_value} fields per entry", lineno, toks[-1][1])
            i = _index(toks[0][0], toks[0][1], lineno, rows)
            j = _index(toks[1][0], toks[1][1], lineno, cols)
            if sym != "general" and i < j:
                raise SymmetryViolation(
                    f"line {lineno}: entry ({i + 1}, {j + 1}) lies above the diagonal of a {sym} file"
                )
            if (i, j) in seen:
                raise ParseError(f"duplicate entry ({i + 1}, {j + 1})", lineno, toks[0][1])
            seen.add((i, j))
            M[i, j] = parse_value(toks[2:], lineno)
            _check_diagonal(sym, i, j, M[i, j], lineno)

    if sym == "symmetric":
        low = np.tril(M, -1)
        M = M + low.T
    elif sym == "skew-symmetric":
        low = np.tril(M, -1)
        M = M - low.T
    elif sym == "hermitian":
        low = np.tril(M, -1)
        M = M + low.conj().T
    return M


def _check_diagonal(sym: str, i: int, j: int, v, lineno: int) -> None:
    if i != j:
        return
    if sym == "hermitian" and np.imag(v) != 0:
        raise SymmetryViolation(f"line {lineno}: hermitian diagonal entry ({i + 1}, {i + 1}) is not real")
    if sym == "skew-symmetric" and v != 0:
        raise SymmetryViolation(f"line {lineno}: skew-symmetric diagonal entry must be zero")

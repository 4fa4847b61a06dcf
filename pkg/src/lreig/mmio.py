"""Matrix Market file reader and writer.

Supports the array and coordinate layouts with real, integer, or complex
fields and the general or symmetric qualifiers.  Values are written with 17
significant digits, so an array-format write/read round trip reproduces
float64 entries bit for bit.  Parse failures report the offending line
number.
"""

import os

import numpy as np

from .densekit import as_matrix

__all__ = ["read_matrix_market", "write_matrix_market"]

_LAYOUTS = ("array", "coordinate")
_FIELDS = ("real", "integer", "complex")
_SYMMETRIES = ("general", "symmetric")


def _fmt(x):
    return f"{x:.17g}"


def _parse_header(path, lines):
    if not lines:
        raise ValueError(f"{path}: empty file")
    head = lines[0].split()
    if (
        len(head) != 5
        or head[0].lower() != "%%matrixmarket"
        or head[1].lower() != "matrix"
    ):
        raise ValueError(
            f"{path}, line 1: expected header "
            f"'%%MatrixMarket matrix <format> <field> <symmetry>'"
        )
    layout, field, symmetry = (t.lower() for t in head[2:5])
    if layout not in _LAYOUTS:
        raise ValueError(
            f"{path}, line 1: unsupported format {layout!r} "
            f"(expected one of {_LAYOUTS})"
        )
    if field not in _FIELDS:
        raise ValueError(
            f"{path}, line 1: unsupported field {field!r} "
            f"(expected one of {_FIELDS})"
        )
    if symmetry not in _SYMMETRIES:
        raise ValueError(
            f"{path}, line 1: unsupported symmetry {symmetry!r} "
            f"(expected one of {_SYMMETRIES})"
        )
    return layout, field, symmetry


def _data_lines(path, lines, start):
    """Yield (line_number, stripped_text) for non-blank, non-comment lines."""
    for idx in range(start, len(lines)):
        text = lines[idx].strip()
        if not text or text.startswith("%"):
            continue
        yield idx + 1, text


def _parse_value(path, lineno, parts, field):
    want = 2 if field == "complex" else 1
    if len(parts) != want:
        raise ValueError(
            f"{path}, line {lineno}: expected {want} value token(s) for a "
            f"{field} entry, got {len(parts)}"
        )
    try:
        if field == "complex":
            return complex(float(parts[0]), float(parts[1]))
        return float(parts[0])
    except ValueError:
        raise ValueError(
            f"{path}, line {lineno}: could not parse {' '.join(parts)!r} as a "
            f"{field} value"
        ) from None


def read_matrix_market(path):
    """Read a Matrix Market file into a dense float64/complex128 array.

    Symmetric-qualified files are expanded to full storage.  Duplicate
    coordinate entries accumulate by summation, following common practice.
    """
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    layout, field, symmetry = _parse_header(path, lines)
    data = _data_lines(path, lines, 1)

    try:
        sizeno, sizetext = next(data)
    except StopIteration:
        raise ValueError(f"{path}: missing size line") from None
    sizes = sizetext.split()
    want_sizes = 3 if layout == "coordinate" else 2
    if len(sizes) != want_sizes:
        raise ValueError(
            f"{path}, line {sizeno}: size line must contain {want_sizes} "
            f"integers for {layout} format, got {sizetext!r}"
        )
    try:
        sizes = [int(s) for s in sizes]
    except ValueError:
        raise ValueError(
            f"{path}, line {sizeno}: size line must contain integers, got "
            f"{sizetext!r}"
        ) from None
    if any(s < 0 for s in sizes):
        raise ValueError(f"{path}, line {sizeno}: sizes must be nonnegative")
    nrows, ncols = sizes[0], sizes[1]
    dtype = np.complex128 if field == "complex" else np.float64

    if symmetry == "symmetric" and nrows != ncols:
        raise ValueError(
            f"{path}, line {sizeno}: symmetric matrices must be square, got "
            f"{nrows}x{ncols}"
        )

    if layout == "array":
        return _read_array(path, data, nrows, ncols, field, symmetry, dtype)
    return _read_coordinate(path, data, nrows, ncols, sizes[2], field, symmetry, dtype)


def _read_array(path, data, nrows, ncols, field, symmetry, dtype):
    if symmetry == "general":
        slots = [(i, j) for j in range(ncols) for i in range(nrows)]
    else:
        slots = [(i, j) for j in range(ncols) for i in range(j, nrows)]
    m = np.zeros((nrows, ncols), dtype=dtype)
    filled = 0
    for lineno, text in data:
        if filled >= len(slots):
            raise ValueError(
                f"{path}, line {lineno}: extra data beyond the "
                f"{len(slots)} expected entries"
            )
        value = _parse_value(path, lineno, text.split(), field)
        i, j = slots[filled]
        m[i, j] = value
        if symmetry == "symmetric" and i != j:
            m[j, i] = value
        filled += 1
    if filled < len(slots):
        raise ValueError(
            f"{path}: file ended after {filled} of {len(slots)} array entries"
        )
    return m


def _read_coordinate(path, data, nrows, ncols, nnz, field, symmetry, dtype):
    m = np.zeros((nrows, ncols), dtype=dtype)
    seen = 0
    for lineno, text in data:
        if seen >= nnz:
            raise ValueError(
                f"{path}, line {lineno}: extra data beyond the declared "
                f"{nnz} entries"
            )
        parts = text.split()
        if len(parts) < 3:
            raise ValueError(
                f"{path}, line {lineno}: coordinate entry needs "
                f"'row col value', got {text!r}"
            )
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(
                f"{path}, line {lineno}: indices must be integers, got "
                f"{text!r}"
            ) from None
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ValueError(
                f"{path}, line {lineno}: index ({i}, {j}) outside the "
                f"{nrows}x{ncols} matrix"
            )
        value = _parse_value(path, lineno, parts[2:], field)
        m[i - 1, j - 1] += value
        if symmetry == "symmetric" and i != j:
            m[j - 1, i - 1] += value
        seen += 1
    if seen < nnz:
        raise ValueError(
            f"{path}: file ended after {seen} of {nnz} coordinate entries"
        )
    return m


def write_matrix_market(m, path, layout="array", comment=None):
    """Write a dense matrix as a Matrix Market file (general symmetry).

    The array layout stores every entry column by column with 17 significant
    digits (bit-exact round trip); the coordinate layout stores the nonzero
    entries only.
    """
    m = as_matrix(m, "matrix")
    if layout not in _LAYOUTS:
        raise ValueError(f"unsupported layout {layout!r} (expected {_LAYOUTS})")
    is_complex = np.iscomplexobj(m)
    field = "complex" if is_complex else "real"
    nrows, ncols = m.shape

    lines = [f"%%MatrixMarket matrix {layout} {field} general"]
    if comment:
        lines.extend(f"% {text}" for text in str(comment).splitlines())

    def render(value):
        if is_complex:
            return f"{_fmt(value.real)} {_fmt(value.imag)}"
        return _fmt(value)

    if layout == "array":
        lines.append(f"{nrows} {ncols}")
        for j in range(ncols):
            for i in range(nrows):
                lines.append(render(m[i, j]))
    else:
        rows, cols = np.nonzero(m)
        lines.append(f"{nrows} {ncols} {rows.size}")
        for i, j in zip(rows, cols):
            lines.append(f"{i + 1} {j + 1} {render(m[i, j])}")

    path = os.fspath(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

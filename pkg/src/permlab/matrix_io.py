"""Plain-text matrix files.

    # optional comments
    matrix <n> <field-tag>
    <n lines of n whitespace-separated scalar literals>

field-tag is one of rational, gaussian, cyc40, cycN:<N>, float.  A file may
hold several matrices one after another.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .matrix import Matrix
from .numeric import DEFAULT_PRECISION, format_scalar, normalize_field_tag, parse_scalar

BUILTIN_PREFIX = "builtin:"


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_matrices(text, prec=DEFAULT_PRECISION):
    lines = list(_content_lines(text))
    out = []
    pos = 0
    while pos < len(lines):
        lineno, header = lines[pos]
        parts = header.split()
        if len(parts) != 3 or parts[0] != "matrix":
            raise ParseError(f"expected 'matrix <n> <field-tag>', got {header!r}", lineno)
        try:
            n = int(parts[1])
        except ValueError:
            raise ParseError(f"bad dimension {parts[1]!r}", lineno) from None
        if n < 0:
            raise ParseError("negative dimension", lineno)
        tag = normalize_field_tag(parts[2]) if parts[2] != "cyc40" else "cycN:40"
        rows = []
        for k in range(n):
            if pos + 1 + k >= len(lines):
                raise ParseError(f"expected {n} rows, found {k}", lineno)
            rl, row = lines[pos + 1 + k]
            toks = row.split()
            if toks and toks[0] == "matrix":
                raise ParseError(f"expected {n} rows, found {k}", rl)
            if len(toks) != n:
                raise ParseError(f"row has {len(toks)} entries, expected {n}", rl)
            try:
                rows.append([parse_scalar(t, tag, prec) for t in toks])
            except ParseError as exc:
                raise ParseError(str(exc), rl) from None
        out.append(Matrix(rows, tag, prec))
        pos += 1 + n
    if not out:
        raise ParseError("no matrix found")
    return out


def parse_matrix(text, prec=DEFAULT_PRECISION):
    return parse_matrices(text, prec)[0]


def format_matrix(A, comment=None):
    tag = A.field
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"matrix {A.n} {tag}")
    for r in A.rows:
        lines.append(" ".join(format_scalar(x) for x in r))
    return "\n".join(lines) + "\n"


def load_matrices(source, prec=DEFAULT_PRECISION):
    """Read a file path or a `builtin:<name>` pseudo-file."""
    source = str(source)
    if source.startswith(BUILTIN_PREFIX):
        from .registry import builtin_instance

        return [builtin_instance(source[len(BUILTIN_PREFIX):]).matrix]
    return parse_matrices(Path(source).read_text(), prec)


def load_matrix(source, prec=DEFAULT_PRECISION):
    return load_matrices(source, prec)[0]


def save_matrix(path, A, comment=None):
    Path(path).write_text(format_matrix(A, comment))

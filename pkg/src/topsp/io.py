"""Plain-text complex and signal files.

Complex files hold one ``simplex v1 v2 ...`` record per line (maximal
simplices; the closure is taken on load). Signal files hold
``value v1 [v2 [v3]] x`` records and must cover every simplex of one order.
Label files hold ``label v1 [v2] x`` records for a subset. ``#`` starts a
comment everywhere.
"""

from __future__ import annotations

import io as _io
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex, from_maximal_simplices
from .interpolation import LabeledSignal


class FormatError(ValueError):
    pass


def _records(text, keyword, source):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != keyword:
            raise FormatError(f"{source}:{lineno}: expected a '{keyword}' record, got {parts[0]!r}")
        yield lineno, parts[1:]


def _read_text(path):
    p = Path(path)
    return p.read_text(encoding="utf-8"), str(p)


def _vertices(tokens, source, lineno):
    try:
        vs = tuple(int(t) for t in tokens)
    except ValueError:
        raise FormatError(f"{source}:{lineno}: vertex ids must be integers: {' '.join(tokens)}") from None
    if not vs:
        raise FormatError(f"{source}:{lineno}: record has no vertices")
    if any(v < 0 for v in vs) or any(a >= b for a, b in zip(vs, vs[1:])):
        raise FormatError(f"{source}:{lineno}: vertices must be non-negative and strictly increasing: {vs}")
    return vs


def parse_complex(text, source="<string>") -> SimplicialComplex:
    simplices = [_vertices(tokens, source, ln) for ln, tokens in _records(text, "simplex", source)]
    return from_maximal_simplices(simplices)


def read_complex(path) -> SimplicialComplex:
    text, source = _read_text(path)
    return parse_complex(text, source)


def format_complex(X: SimplicialComplex) -> str:
    lines = ["# maximal simplices; closure is taken on load"]
    lines += ["simplex " + " ".join(str(v) for v in s) for s in X.maximal_simplices()]
    return "\n".join(lines) + "\n"


def write_complex(X: SimplicialComplex, path):
    Path(path).write_text(format_complex(X), encoding="utf-8")


def _valued_records(text, keyword, source, X):
    out = {}
    order = None
    for ln, tokens in _records(text, keyword, source):
        if len(tokens) < 2:
            raise FormatError(f"{source}:{ln}: '{keyword}' needs vertices and a value")
        vs = _vertices(tokens[:-1], source, ln)
        try:
            x = float(tokens[-1])
        except ValueError:
            raise FormatError(f"{source}:{ln}: bad value {tokens[-1]!r}") from None
        k = len(vs) - 1
        if order is None:
            order = k
        elif k != order:
            raise FormatError(f"{source}:{ln}: mixes order {k} with order {order}")
        if vs not in X:
            raise FormatError(f"{source}:{ln}: simplex {vs} is not in the complex")
        if vs in out:
            raise FormatError(f"{source}:{ln}: duplicate record for {vs}")
        out[vs] = x
    if order is None:
        raise FormatError(f"{source}: no '{keyword}' records")
    return order, out


def parse_signal(text, X: SimplicialComplex, source="<string>"):
    """Return ``(order, vector)`` in canonical simplex order."""
    order, values = _valued_records(text, "value", source, X)
    missing = [s for s in X.simplices(order) if s not in values]
    if missing:
        raise FormatError(f"{source}: missing values for {', '.join(map(str, missing))}")
    return order, np.array([values[s] for s in X.simplices(order)])


def read_signal(path, X: SimplicialComplex):
    text, source = _read_text(path)
    return parse_signal(text, X, source)


def parse_labels(text, X: SimplicialComplex, source="<string>"):
    """Return ``(order, LabeledSignal)``."""
    order, values = _valued_records(text, "label", source, X)
    labels = {X.index_of(s): x for s, x in values.items()}
    return order, LabeledSignal.from_mapping(labels, X.count(order))


def read_labels(path, X: SimplicialComplex):
    text, source = _read_text(path)
    return parse_labels(text, X, source)


def fmt(x) -> str:
    """17 significant digits: round-trips every double."""
    return f"{float(x):.17g}"


def format_signal(X: SimplicialComplex, order, values, keyword="value") -> str:
    buf = _io.StringIO()
    for s, x in zip(X.simplices(order), values):
        buf.write(f"{keyword} {' '.join(str(v) for v in s)} {fmt(x)}\n")
    return buf.getvalue()


def simplex_label(s) -> str:
    return "-".join(str(v) for v in s)

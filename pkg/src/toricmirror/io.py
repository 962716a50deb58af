"""Text formats for polytopes and triangulations.

Polytope file::

    # comment
    n d
    x_1 ... x_n        (d vertex rows)

Triangulation file::

    n p m
    x_1 ... x_n        (p point rows)
    i_1 ... i_n        (m rows of 0-based point indices, one per maximal simplex)
"""

from __future__ import annotations

import warnings
from pathlib import Path
from typing import Optional, Union

from .polytope import LatticePolytope, PolytopeError, from_vertices
from .triangulation import Triangulation, TriangulationError

__all__ = [
    "ParseError",
    "parse_polytope",
    "read_polytope",
    "format_polytope",
    "parse_triangulation",
    "read_triangulation",
    "format_triangulation",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _rows(text: str):
    """Yield (line number, integer list) for non-blank, non-comment lines."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            yield no, [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"expected integers, got {raw.strip()!r}", no) from None


def _take(rows, count: int, width: int, what: str, last_line: int):
    out = []
    for _ in range(count):
        try:
            no, vals = next(rows)
        except StopIteration:
            raise ParseError(f"expected {count} {what} rows, found {len(out)}", last_line) from None
        if len(vals) != width:
            raise ParseError(f"{what} row has {len(vals)} entries, expected {width}", no)
        out.append((no, tuple(vals)))
        last_line = no
    return out


def _header(rows, size: int, fmt: str):
    try:
        no, head = next(rows)
    except StopIteration:
        raise ParseError("empty input", 1) from None
    if len(head) != size or any(x < 0 for x in head):
        raise ParseError(f"header must be {fmt}", no)
    return no, head


def _no_trailing(rows, what: str):
    extra = next(rows, None)
    if extra is not None:
        raise ParseError(f"unexpected row after the {what}", extra[0])


def parse_polytope(text: str) -> LatticePolytope:
    rows = _rows(text)
    no, (n, d) = _header(rows, 2, "'n d'")
    if n == 0:
        raise ParseError("rank must be positive", no)
    verts = _take(rows, d, n, "vertex", no)
    _no_trailing(rows, "vertex rows")
    seen = {}
    for line, v in verts:
        if v in seen:
            warnings.warn(f"line {line}: duplicate vertex {v} (first on line {seen[v]})")
        else:
            seen[v] = line
    try:
        return from_vertices([v for _, v in verts])
    except PolytopeError as exc:
        raise ParseError(str(exc)) from None


def read_polytope(path: Union[str, Path]) -> LatticePolytope:
    return parse_polytope(Path(path).read_text())


def format_polytope(vertices) -> str:
    vertices = [tuple(v) for v in vertices]
    n = len(vertices[0]) if vertices else 0
    lines = [f"{n} {len(vertices)}"]
    lines += [" ".join(str(x) for x in v) for v in vertices]
    return "\n".join(lines) + "\n"


def parse_triangulation(text: str, host: Optional[LatticePolytope] = None) -> Triangulation:
    rows = _rows(text)
    no, (n, p, m) = _header(rows, 3, "'n p m'")
    if host is not None and host.n != n:
        raise ParseError(f"triangulation rank {n} differs from polytope rank {host.n}", no)
    pts = _take(rows, p, n, "point", no)
    last = pts[-1][0] if pts else no
    simp = _take(rows, m, n, "simplex", last)
    _no_trailing(rows, "simplex rows")
    for line, s in simp:
        if any(i < 0 or i >= p for i in s):
            raise ParseError("simplex index out of range", line)
    try:
        return Triangulation([v for _, v in pts], [s for _, s in simp], host=host)
    except TriangulationError as exc:
        raise ParseError(f"invalid triangulation: {exc}") from None


def read_triangulation(path: Union[str, Path], host: Optional[LatticePolytope] = None) -> Triangulation:
    return parse_triangulation(Path(path).read_text(), host)


def format_triangulation(T: Triangulation) -> str:
    lines = [f"{T.n} {len(T.points)} {len(T.simplices)}"]
    lines += [" ".join(str(x) for x in p) for p in T.points]
    lines += [" ".join(str(i) for i in s) for s in T.simplices]
    return "\n".join(lines) + "\n"

"""Simplicial decompositions of the boundary of a reflexive polytope.

A triangulation is stored by its point list (sorted) and its maximal
simplices, each a sorted tuple of point indices.  Lower skeleta, adjacency
and stars are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .exactlin import determinant, dot, lattice_index
from .polytope import (
    LatticePolytope,
    PolytopeError,
    is_reflexive,
    normalized_volume,
    pulling_boundary_simplices,
)

__all__ = [
    "TriangulationError",
    "Triangulation",
    "FlopCircuit",
    "boundary_skeleton_points",
    "build_triangulation",
    "check_spanning",
    "find_containing_simplex",
    "flop_candidates",
    "apply_flop",
]


class TriangulationError(ValueError):
    pass


def _cramer(S: Sequence[Sequence[int]], x: Sequence) -> Optional[tuple]:
    """Coefficients c with x = sum c_i S[i] (S given as n points), or None if singular."""
    cols = list(S)
    det = determinant(cols)
    if det == 0:
        return None
    out = []
    for i in range(len(cols)):
        rep = cols[:i] + [tuple(x)] + cols[i + 1:]
        out.append(Fraction(determinant(rep)) / det)
    return tuple(c.numerator if c.denominator == 1 else c for c in out)


# Fixed generic directions used to certify coverage of a fan.
_PROBES = (
    (1, 3, 7, 19, 43, 101, 211),
    (-5, 2, 11, -13, 29, -61, 127),
    (17, -23, 5, 41, -3, 67, -89),
)


class Triangulation:
    """A complete simplicial fan given by maximal simplices on ``points``.

    With a host polytope, every simplex must also lie in a facet of it.
    """

    def __init__(self, points, simplices, host: Optional[LatticePolytope] = None, validate: bool = True):
        self.points = tuple(tuple(int(x) for x in p) for p in points)
        if not self.points:
            raise TriangulationError("no points")
        self.n = len(self.points[0])
        simp = sorted({tuple(sorted(s)) for s in simplices})
        self.simplices = tuple(simp)
        self.host = host
        if validate:
            self.validate()

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_simplices(cls, points, simplices, host: Optional[LatticePolytope] = None) -> "Triangulation":
        """Build a triangulation from explicit data (used for hand-made fans).

        Points are kept in the given order so indices in ``simplices`` stay
        meaningful.  The result is validated as a complete simplicial fan,
        and against ``host`` when one is supplied.
        """
        return cls(points, simplices, host=host)

    # -- derived structure ----------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def skeleton(self, j: int) -> tuple:
        """Simplices of dimension ``j`` (sorted index tuples)."""
        if j == self.n - 1:
            return self.simplices
        out = set()
        for s in self.simplices:
            out.update(combinations(s, j + 1))
        return tuple(sorted(out))

    @cached_property
    def ridge_map(self) -> dict:
        """(n-2)-face -> maximal simplices containing it."""
        out: dict = {}
        for s in self.simplices:
            for r in combinations(s, self.n - 1):
                out.setdefault(r, []).append(s)
        return out

    @cached_property
    def adjacency(self) -> dict:
        """For each maximal simplex: neighbours keyed by the omitted point index."""
        out = {}
        for s in self.simplices:
            nb = {}
            for i in s:
                r = tuple(x for x in s if x != i)
                others = [t for t in self.ridge_map.get(r, []) if t != s]
                nb[i] = others[0] if others else None
            out[s] = nb
        return out

    def star(self, s: Iterable[int]) -> tuple:
        """Maximal simplices containing ``s``."""
        ss = set(s)
        return tuple(t for t in self.simplices if ss.issubset(t))

    def link_points(self, s: Iterable[int]) -> tuple:
        """Indices ``k`` not in ``s`` such that ``s + {k}`` is a simplex."""
        ss = set(s)
        out = set()
        for t in self.star(ss):
            out.update(t)
        return tuple(sorted(out - ss))

    def contains_simplex(self, s: Iterable[int]) -> bool:
        ss = set(s)
        return any(ss.issubset(t) for t in self.simplices)

    @cached_property
    def carriers(self) -> dict:
        """Host facet indices containing each maximal simplex."""
        if self.host is None:
            return {}
        out = {}
        for s in self.simplices:
            out[s] = tuple(
                j for j, (u, c) in enumerate(self.host.facets)
                if all(dot(u, self.points[i]) == -c for i in s)
            )
        return out

    def matrix(self, s: Sequence[int]) -> list:
        return [self.points[i] for i in s]

    def volume(self) -> int:
        """Sum of |det| over maximal simplices (normalised lattice volume)."""
        return sum(abs(determinant(self.matrix(s))) for s in self.simplices)

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        n = self.n
        if len(set(self.points)) != len(self.points):
            raise TriangulationError("duplicate points")
        for p in self.points:
            if len(p) != n:
                raise TriangulationError("points of different lengths")
            if not any(p):
                raise TriangulationError("the origin cannot be a point of the fan")
        if not self.simplices:
            raise TriangulationError("no simplices")
        used = set()
        for s in self.simplices:
            if len(s) != n:
                raise TriangulationError(f"simplex {s} does not have {n} points")
            if any(i < 0 or i >= len(self.points) for i in s):
                raise TriangulationError(f"simplex {s} has an index out of range")
            if determinant(self.matrix(s)) == 0:
                raise TriangulationError(f"simplex {s} is degenerate")
            used.update(s)
        if used != set(range(len(self.points))):
            raise TriangulationError("some points are not used by any simplex")
        for r, ts in self.ridge_map.items():
            if len(ts) != 2:
                raise TriangulationError(f"ridge {r} lies in {len(ts)} simplices, expected 2")
        if self.host is not None:
            for s, fac in self.carriers.items():
                if not fac:
                    raise TriangulationError(f"simplex {s} is not contained in a facet")
            expected = normalized_volume(self.host)
            if self.volume() != expected:
                raise TriangulationError(
                    f"simplices have total volume {self.volume()}, the polytope has {expected}"
                )
        for probe in _PROBES:
            x = probe[:n] if n <= len(probe) else probe + (1,) * (n - len(probe))
            hits = []
            for s in self.simplices:
                c = _cramer(self.matrix(s), x)
                if c is not None and all(v >= 0 for v in c):
                    hits.append((s, c))
            if len(hits) == 1 and all(v > 0 for v in hits[0][1]):
                continue
            if any(all(v > 0 for v in c) for _, c in hits):
                raise TriangulationError("simplicial cones overlap")
            if not hits:
                raise TriangulationError("simplicial cones do not cover the space")
            # probe hit a wall; try the next one

    # -- equality / io ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Triangulation)
            and self.points == other.points
            and self.simplices == other.simplices
        )

    def __hash__(self) -> int:
        return hash((self.points, self.simplices))

    def __repr__(self) -> str:
        return f"Triangulation(n={self.n}, points={len(self.points)}, simplices={len(self.simplices)})"

    # cached per-simplex inverse data: (adjugate-like rows, det)
    @cached_property
    def _solvers(self) -> dict:
        return {}

    def coefficients(self, s: Sequence[int], x: Sequence) -> tuple:
        """Exact coefficients expressing ``x`` in the points of ``s``."""
        key = tuple(s)
        inv = self._solvers.get(key)
        if inv is None:
            from .exactlin import rational_inverse, transpose

            cols = transpose(self.matrix(key))
            inv = rational_inverse(cols)
            self._solvers[key] = inv
        return tuple(sum(a * b for a, b in zip(row, x)) for row in inv)


# ------------------------------------------------------------- operations


def _require_reflexive(P) -> None:
    if not isinstance(P, LatticePolytope) or not is_reflexive(P):
        raise TriangulationError("polytope is not reflexive")


def boundary_skeleton_points(P: LatticePolytope) -> tuple:
    """Boundary lattice points that are not in the relative interior of a facet."""
    _require_reflexive(P)
    n = P.n
    out = []
    for info in P.lattice_point_info:
        if info.face is None:
            continue
        if P.face(info.face).dim <= n - 2:
            out.append(info.point)
    return tuple(sorted(out))


def build_triangulation(P: LatticePolytope) -> Triangulation:
    """Triangulate the boundary using exactly the skeleton points.

    Start from the pulling triangulation on vertices (each face coned from
    its smallest vertex), then insert the remaining points in lexicographic
    order by stellar subdivision of the smallest simplex containing each.
    """
    _require_reflexive(P)
    pts = boundary_skeleton_points(P)
    verts = P.vertices
    # simplices as frozensets of points, with carrier facet
    current = [(frozenset(verts[i] for i in s), j) for s, j in pulling_boundary_simplices(P)]
    vertex_set = set(verts)
    for p in pts:
        if p in vertex_set:
            continue
        tight = {j for j, (u, c) in enumerate(P.facets) if dot(u, p) == -c}
        sigma = None
        for simplex, j in current:
            if j not in tight:
                continue
            ordered = sorted(simplex)
            c = _cramer(ordered, p)
            if c is not None and all(v >= 0 for v in c):
                sigma = frozenset(q for q, v in zip(ordered, c) if v > 0)
                break
        if sigma is None:
            raise TriangulationError(f"point {p} is not covered during insertion")
        nxt = []
        for simplex, j in current:
            if sigma <= simplex:
                for q in sigma:
                    nxt.append(((simplex - {q}) | {p}, j))
            else:
                nxt.append((simplex, j))
        current = nxt
    current = _recone_facets(P, pts, current)
    index = {p: i for i, p in enumerate(pts)}
    simplices = [tuple(sorted(index[q] for q in s)) for s, _ in current]
    return Triangulation(pts, simplices, host=P)


def _recone_facets(P: LatticePolytope, pts, current) -> list:
    """Re-triangulate each facet as a cone from a single apex when possible.

    The triangulation induced on faces of dimension <= n-2 is kept.  A point
    ``p`` of a facet is a usable apex when, on every lower face containing
    ``p``, all induced top simplices already contain ``p``.  The smallest
    usable point is taken; facets without one keep their current simplices.
    """
    n = P.n

    def in_face(face, x):
        return all(dot(P.facets[j][0], x) == -P.facets[j][1] for j in face.facets)

    lower = [f for d in range(0, n - 1) for f in P.faces[d]]
    induced = {}
    for face in lower:
        k = face.dim + 1
        cells = set()
        for simplex, _ in current:
            inside = [q for q in simplex if in_face(face, q)]
            if len(inside) >= k:
                for sub in combinations(sorted(inside), k):
                    cells.add(frozenset(sub))
        induced[face.id] = cells
    by_facet: dict = {}
    for simplex, j in current:
        by_facet.setdefault(j, []).append(simplex)
    out = []
    for facet in P.faces[n - 1]:
        j = facet.facets[0]
        fpts = [q for q in pts if in_face(facet, q)]
        ridges = [g for g in P.faces[n - 2] if j in g.facets]
        apex = None
        for q in fpts:
            ok = True
            for face in lower:
                if j in face.facets and in_face(face, q):
                    if not all(q in cell for cell in induced[face.id]):
                        ok = False
                        break
            if ok:
                apex = q
                break
        if apex is None:
            out.extend((s, j) for s in by_facet[j])
            continue
        for g in ridges:
            if in_face(g, apex):
                continue
            for cell in induced[g.id]:
                out.append((cell | {apex}, j))
    return out


def check_spanning(T: Triangulation) -> int:
    """Index of the sublattice generated by the points (1 means they span)."""
    return lattice_index(T.points, T.n)


def find_containing_simplex(T: Triangulation, x: Sequence) -> tuple:
    """Simplex whose relative interior meets the ray through ``x``.

    Returns ``(point_indices, coefficients)`` with every coefficient
    positive and ``x == sum(c * point)``.
    """
    x = tuple(x)
    if len(x) != T.n:
        raise TriangulationError("dimension mismatch")
    if not any(x):
        raise TriangulationError("the origin is not on any ray")
    candidates = T.simplices
    if T.host is not None:
        vals = [Fraction(-dot(u, x), c) for u, c in T.host.facets]
        t = max(vals)
        hit = {j for j, v in enumerate(vals) if v == t}
        candidates = [s for s in T.simplices if hit.intersection(T.carriers[s])]
    for s in candidates:
        c = T.coefficients(s, x)
        if all(v >= 0 for v in c):
            support = tuple(i for i, v in zip(s, c) if v != 0)
            coeffs = tuple(_exactify(v) for v in c if v != 0)
            return support, coeffs
    raise TriangulationError(f"no simplex contains the ray through {x}")


def _exactify(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


# ------------------------------------------------------------------ flops


@dataclass(frozen=True)
class FlopCircuit:
    """Two adjacent tetrahedra ``s = {d0,d1,d2,d3}`` and ``t = {d0,d4,d2,d3}``
    with ``d1 + d4 == d2 + d3`` inside one 2-face of the host.

    The same square is also coned from ``apex2`` in the other facet through
    that 2-face (simplices ``s2``, ``t2``); a flip has to change both sides.
    """

    s: tuple
    t: tuple
    d0: int
    d1: int
    d2: int
    d3: int
    d4: int
    apex2: int
    s2: tuple
    t2: tuple

    @property
    def removed(self) -> tuple:
        return tuple(sorted((self.s, self.t, self.s2, self.t2)))

    @property
    def added(self) -> tuple:
        a, b = self.d0, self.apex2
        d1, d2, d3, d4 = self.d1, self.d2, self.d3, self.d4
        return tuple(sorted(
            tuple(sorted(q)) for q in (
                (a, d1, d2, d4), (a, d1, d3, d4), (b, d1, d2, d4), (b, d1, d3, d4)
            )
        ))

    @property
    def s_flat(self) -> tuple:
        return tuple(sorted((self.d0, self.d1, self.d2, self.d4)))

    @property
    def t_flat(self) -> tuple:
        return tuple(sorted((self.d0, self.d1, self.d3, self.d4)))


def _face_dim_of(P: LatticePolytope, pts) -> int:
    mask = (1 << len(P.vertices)) - 1
    for j, (u, c) in enumerate(P.facets):
        if all(dot(u, p) == -c for p in pts):
            mask &= P._facet_masks[j]
    return P._face_by_mask[mask].dim


def flop_candidates(T: Triangulation) -> list:
    """All flippable circuits of a triangulation of a 4-dimensional polytope."""
    if T.n != 4:
        raise TriangulationError("flops are only defined for rank 4")
    P = T.host
    pt = T.points
    seen = set()
    out = []
    for s in T.simplices:
        for omitted, t in T.adjacency[s].items():
            if t is None or t < s:
                continue
            shared = tuple(x for x in s if x != omitted)
            d1 = omitted
            d4 = next(x for x in t if x not in s)
            for d0 in shared:
                d2, d3 = (x for x in shared if x != d0)
                if tuple(a + b for a, b in zip(pt[d1], pt[d4])) != tuple(
                    a + b for a, b in zip(pt[d2], pt[d3])
                ):
                    continue
                quad = [pt[d1], pt[d2], pt[d3], pt[d4]]
                if P is not None and _face_dim_of(P, quad) != 2:
                    continue
                tri1 = tuple(sorted((d1, d2, d3)))
                tri4 = tuple(sorted((d4, d2, d3)))
                s2 = [x for x in T.star(tri1) if x != s]
                t2 = [x for x in T.star(tri4) if x != t]
                if len(s2) != 1 or len(t2) != 1:
                    continue
                b1 = next(x for x in s2[0] if x not in tri1)
                b4 = next(x for x in t2[0] if x not in tri4)
                if b1 != b4 or b1 == d0:
                    continue
                key = frozenset((s, t, s2[0], t2[0]))
                if key in seen:
                    continue
                seen.add(key)
                lo, hi = sorted((d2, d3))
                out.append(FlopCircuit(s, t, d0, d1, lo, hi, d4, b1, s2[0], t2[0]))
    out.sort(key=lambda c: (c.removed, c.d1, c.d2))
    return out


def apply_flop(T: Triangulation, c: FlopCircuit) -> Triangulation:
    """Replace the four tetrahedra around the diagonal d2-d3 by the four
    around d1-d4.  The point set is unchanged and the result is revalidated."""
    present = set(T.simplices)
    if not all(x in present for x in c.removed):
        raise TriangulationError("circuit is stale: its simplices are not in the triangulation")
    simp = [s for s in T.simplices if s not in set(c.removed)] + list(c.added)
    return Triangulation(T.points, simp, host=T.host)

"""Lattice polytopes with the origin in their interior.

Facets are stored as ``<u, x> >= -c`` with ``u`` primitive and ``c > 0``.
Vertices are sorted lexicographically and facets are sorted by ``u / c``;
with that convention facet ``i`` of ``P`` is vertex ``i`` of the dual
polytope, which is how dual faces are looked up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor, gcd
from typing import Iterable, Optional, Sequence

from .exactlin import dot, extreme_rays, primitive, rank

__all__ = [
    "PolytopeError",
    "Face",
    "RationalPolytope",
    "LatticePolytope",
    "from_vertices",
    "dual_polytope",
    "is_reflexive",
    "lattice_points",
    "face_interior_points",
    "dual_face",
    "rho_dual_polytope",
    "pulling_boundary_simplices",
    "normalized_volume",
]


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    """A face given by the indices of its vertices.

    ``facets`` holds the indices of the facets containing it.  For a
    reflexive polytope these are the vertex indices of the dual face.
    """

    id: tuple
    dim: int
    facets: tuple


@dataclass(frozen=True)
class LatticePointInfo:
    point: tuple
    face: Optional[tuple]  # id of the face whose relative interior holds it; None = interior

    @property
    def interior(self) -> bool:
        return self.face is None


def _as_fraction_tuple(v) -> tuple:
    return tuple(x if isinstance(x, int) else (x.numerator if x.denominator == 1 else x)
                 for x in (Fraction(y) for y in v))


class RationalPolytope:
    """Full-dimensional polytope with exact (possibly rational) vertices."""

    full_dimensional = True

    def __init__(self, vertices: Sequence[Sequence], _facets=None):
        pts = sorted({_as_fraction_tuple(v) for v in vertices})
        if not pts:
            raise PolytopeError("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise PolytopeError("points of different lengths")
        self.n = n
        if rank([tuple(x - y for x, y in zip(p, pts[0])) for p in pts[1:]] or [(0,) * n]) < n:
            raise PolytopeError("points are not full-dimensional")
        if _facets is None:
            _facets = _facets_from_points(pts, n)
        for u, c in _facets:
            if not c > 0:
                raise PolytopeError("origin is not in the interior")
        keep = [p for p in pts if sum(1 for u, c in _facets if dot(u, p) == -c) >= n]
        self.vertices = tuple(keep)
        self.facets = tuple(sorted(_facets, key=lambda f: tuple(Fraction(x, 1) / f[1] for x in f[0])))

    # -- structure -------------------------------------------------------

    @cached_property
    def _facet_masks(self) -> tuple:
        masks = []
        for u, c in self.facets:
            m = 0
            for i, v in enumerate(self.vertices):
                if dot(u, v) == -c:
                    m |= 1 << i
            masks.append(m)
        return tuple(masks)

    @cached_property
    def faces(self) -> dict:
        """Face lattice: dimension -> list of :class:`Face`, sorted by id."""
        fm = self._facet_masks
        seen = set(fm)
        frontier = list(fm)
        while frontier:
            nxt = []
            for a in frontier:
                for b in fm:
                    c = a & b
                    if c and c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        out: dict = {k: [] for k in range(self.n)}
        for mask in seen:
            idx = tuple(i for i in range(len(self.vertices)) if mask >> i & 1)
            pts = [self.vertices[i] for i in idx]
            d = rank([tuple(x - y for x, y in zip(p, pts[0])) for p in pts[1:]]) if len(pts) > 1 else 0
            fac = tuple(j for j, f in enumerate(fm) if f & mask == mask)
            out[d].append(Face(idx, d, fac))
        for k in out:
            out[k].sort(key=lambda f: f.id)
        return out

    @cached_property
    def _face_by_mask(self) -> dict:
        out = {}
        for faces in self.faces.values():
            for f in faces:
                out[sum(1 << i for i in f.id)] = f
        return out

    @cached_property
    def _face_by_facets(self) -> dict:
        return {f.facets: f for fs in self.faces.values() for f in fs}

    def face(self, face_id: Iterable[int]) -> Face:
        key = tuple(sorted(face_id))
        mask = sum(1 << i for i in key)
        f = self._face_by_mask.get(mask)
        if f is None:
            raise PolytopeError(f"unknown face id {key}")
        return f

    def face_containing(self, x: Sequence) -> Optional[Face]:
        """Face whose relative interior contains the point ``x`` (None if ``x`` is interior)."""
        tight = tuple(j for j, (u, c) in enumerate(self.facets) if dot(u, x) == -c)
        if not tight:
            return None
        mask = (1 << len(self.vertices)) - 1
        for j in tight:
            mask &= self._facet_masks[j]
        return self._face_by_mask[mask]

    def contains(self, x: Sequence) -> bool:
        return all(dot(u, x) >= -c for u, c in self.facets)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    # -- lattice points --------------------------------------------------

    @cached_property
    def lattice_point_info(self) -> tuple:
        lo = [floor(min(v[i] for v in self.vertices)) for i in range(self.n)]
        hi = [ceil(max(v[i] for v in self.vertices)) for i in range(self.n)]
        out = []
        facets = [(u, c) for u, c in self.facets]
        for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if all(dot(u, p) >= -c for u, c in facets):
                f = self.face_containing(p)
                out.append(LatticePointInfo(p, None if f is None else f.id))
        return tuple(out)

    @cached_property
    def lattice_points(self) -> tuple:
        return tuple(info.point for info in self.lattice_point_info)

    @cached_property
    def _points_by_face(self) -> dict:
        out: dict = {}
        for info in self.lattice_point_info:
            out.setdefault(info.face, []).append(info.point)
        return out

    def face_interior_points(self, face) -> tuple:
        f = face if isinstance(face, Face) else self.face(face)
        return tuple(self._points_by_face.get(f.id, ()))

    def interior_points(self) -> tuple:
        return tuple(self._points_by_face.get(None, ()))

    def boundary_points(self) -> tuple:
        return tuple(i.point for i in self.lattice_point_info if i.face is not None)

    # -- misc ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)


class LatticePolytope(RationalPolytope):
    """Polytope with integral vertices."""

    def __init__(self, vertices: Sequence[Sequence[int]], _facets=None):
        for v in vertices:
            for x in v:
                if isinstance(x, bool) or not isinstance(x, int):
                    if isinstance(x, Fraction) and x.denominator == 1:
                        continue
                    raise PolytopeError(f"non-integral coordinate {x!r}")
        super().__init__(vertices, _facets)


def _facets_from_points(pts: Sequence[tuple], n: int) -> list:
    """Facets of conv(pts) via the double description of the homogenised cone."""
    # cone over (1, p): facets are rays of {(c, u) : c + <u,p> >= 0}
    rows = []
    for p in pts:
        den = 1
        for x in p:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        rows.append((den,) + tuple(int(x * den) for x in p))
    cr = extreme_rays(rows, n + 1)
    if cr.lineality:
        raise PolytopeError("points are not full-dimensional")
    facets = []
    for ray in cr.rays:
        c, u = Fraction(ray[0]), ray[1:]
        g = 0
        for x in u:
            g = gcd(g, x)
        u = tuple(x // g for x in u)
        c = c / g
        c = c.numerator if c.denominator == 1 else c
        facets.append((u, c))
    return facets


# ------------------------------------------------------------ module API


def from_vertices(points: Iterable[Sequence[int]]) -> LatticePolytope:
    """Convex hull of integral points; the origin must be strictly inside."""
    return LatticePolytope(list(points))


def dual_polytope(P: RationalPolytope) -> RationalPolytope:
    """``{y : <y, v> >= -1 for every vertex v}``.

    Returns a :class:`LatticePolytope` whenever the dual happens to be
    integral.  Facet ``i`` of ``P`` becomes vertex ``i`` of the result.
    """
    verts = [tuple(Fraction(x) / c for x in u) for u, c in P.facets]
    dual_facets = []
    for v in P.vertices:
        den = 1
        for x in v:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        g = 0
        for x in iv:
            g = gcd(g, x)
        off = Fraction(den, g)
        dual_facets.append((tuple(x // g for x in iv), off.numerator if off.denominator == 1 else off))
    verts = [_as_fraction_tuple(v) for v in verts]
    cls = LatticePolytope if all(isinstance(x, int) for v in verts for x in v) else RationalPolytope
    return cls(verts, dual_facets)


def is_reflexive(P: RationalPolytope) -> bool:
    if not P.is_integral():
        return False
    return all(all(x % c == 0 for x in u) for u, c in P.facets)


def lattice_points(P: RationalPolytope) -> tuple:
    """All integral points, sorted lexicographically."""
    return P.lattice_points


def face_interior_points(P: RationalPolytope, face) -> tuple:
    return P.face_interior_points(face)


def dual_face(P: RationalPolytope, face, dual: Optional[RationalPolytope] = None) -> Face:
    """The face of the dual polytope on which every point of ``face`` pairs to -1."""
    if not is_reflexive(P):
        raise PolytopeError("dual faces are only defined here for reflexive polytopes")
    f = face if isinstance(face, Face) else P.face(face)
    D = dual if dual is not None else dual_polytope(P)
    return D.face(f.facets)


def rho_dual_polytope(P: RationalPolytope, points: Sequence[Sequence[int]], rho: Sequence) -> RationalPolytope:
    """``{y : <y, delta> >= -rho[delta]}`` over the given points.

    Lower-dimensional results (for instance ``rho = 0``) are returned as a
    :class:`DegenerateSet` carrying the single point or its affine hull data;
    an unbounded result raises :class:`PolytopeError`.
    """
    if len(points) != len(rho):
        raise PolytopeError("rho must have one entry per point")
    n = P.n if P is not None else len(points[0])
    rows = [(1,) + (0,) * n]  # homogenising coordinate t >= 0
    for d, r in zip(points, rho):
        r = Fraction(r)
        rows.append((r.numerator,) + tuple(r.denominator * x for x in d))
    cr = extreme_rays(rows, n + 1)
    if cr.lineality:
        raise PolytopeError("rho-dual set is unbounded")
    verts = []
    for ray in cr.rays:
        t = ray[0]
        if t == 0:
            raise PolytopeError("rho-dual set is unbounded")
        if t < 0:
            continue
        verts.append(tuple(Fraction(x, t) for x in ray[1:]))
    if not verts:
        raise PolytopeError("rho-dual set is empty")
    inequalities = tuple((tuple(d), Fraction(r)) for d, r in zip(points, rho))
    try:
        poly = _polytope_from_hrep(verts, inequalities, n)
    except PolytopeError:
        return DegenerateSet(n, verts, inequalities)
    return poly


def _polytope_from_hrep(verts, inequalities, n):
    verts = [_as_fraction_tuple(v) for v in verts]
    pts = sorted(set(verts))
    if len(pts) <= n or rank([tuple(x - y for x, y in zip(p, pts[0])) for p in pts[1:]]) < n:
        raise PolytopeError("lower-dimensional")
    # the origin need not be interior for a general rho, so translate-free facets:
    facets = _facets_general(pts, n)
    P = RationalPolytope.__new__(LatticePolytope if all(isinstance(x, int) for v in pts for x in v) else RationalPolytope)
    P.n = n
    P.vertices = tuple(pts)
    P.facets = tuple(facets)
    P.inequalities = inequalities
    return P


def _facets_general(pts, n):
    """Facets ``<u,x> >= -c`` of conv(pts) without assuming c > 0."""
    rows = []
    for p in pts:
        den = 1
        for x in p:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        rows.append((den,) + tuple(int(x * den) for x in p))
    cr = extreme_rays(rows, n + 1)
    out = []
    for ray in cr.rays:
        u = ray[1:]
        g = 0
        for x in u:
            g = gcd(g, x)
        if g == 0:
            continue
        c = Fraction(ray[0], g)
        out.append((tuple(x // g for x in u), c.numerator if c.denominator == 1 else c))
    out.sort(key=lambda f: (f[0], f[1]))
    return out


@dataclass(frozen=True)
class DegenerateSet:
    """A rho-dual set that is not full-dimensional.

    It has no interior; its lattice points are still enumerated.
    """

    n: int
    vertices_list: tuple = field(default=())
    inequalities: tuple = field(default=())

    def __init__(self, n, vertices, inequalities):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "vertices_list", tuple(sorted(set(_as_fraction_tuple(v) for v in vertices))))
        object.__setattr__(self, "inequalities", tuple(inequalities))

    @property
    def vertices(self) -> tuple:
        return self.vertices_list

    full_dimensional = False

    def contains(self, x) -> bool:
        return all(dot(d, x) >= -r for d, r in self.inequalities)

    @cached_property
    def lattice_points(self) -> tuple:
        lo = [floor(min(v[i] for v in self.vertices)) for i in range(self.n)]
        hi = [ceil(max(v[i] for v in self.vertices)) for i in range(self.n)]
        return tuple(p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
                     if self.contains(p))

    def interior_points(self) -> tuple:
        return ()


def pulling_boundary_simplices(P: RationalPolytope, reverse: bool = False) -> list:
    """Pulling triangulation of the boundary using vertices only.

    Each face is coned from its lexicographically smallest vertex (largest
    when ``reverse``) over the pulled faces that avoid it.  Returns a list of
    ``(vertex_index_tuple, facet_index)`` pairs.
    """
    faces = P.faces
    masks = {}
    for k, fs in faces.items():
        for f in fs:
            masks[f.id] = sum(1 << i for i in f.id)
    memo: dict = {}

    def children(face: Face):
        m = masks[face.id]
        return [g for g in faces[face.dim - 1] if masks[g.id] & m == masks[g.id]]

    def pull(face: Face) -> list:
        if face.id in memo:
            return memo[face.id]
        if len(face.id) == face.dim + 1:
            res = [face.id]
        else:
            apex = max(face.id) if reverse else min(face.id)
            res = []
            for g in children(face):
                if apex in g.id:
                    continue
                for s in pull(g):
                    res.append(tuple(sorted((apex,) + s)))
        memo[face.id] = res
        return res

    out = []
    for facet in faces[P.n - 1]:
        j = facet.facets[0]
        for s in pull(facet):
            out.append((s, j))
    return out


def normalized_volume(P: RationalPolytope) -> int:
    """``n! * vol(P)`` computed from a reverse-order pulling triangulation."""
    from .exactlin import determinant

    total = 0
    for s, _ in pulling_boundary_simplices(P, reverse=True):
        total += abs(determinant([P.vertices[i] for i in s]))
    return total

"""Divisor lattice of a triangulation, convexity, Kähler cones and sections.

Notation used in the code: ``d`` points of the triangulation index the
standard basis ``e^delta`` of ``Z^d``.  ``beta`` sends ``e^delta`` to the
point ``delta``; its kernel is the relation lattice.  A divisor is a
rational vector over the same index set, paired with ``Z^d`` by the dot
product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

from .cones import RationalCone, cone_interior_disjoint, dual_cone  # noqa: F401  (re-exported)
from .exactlin import (
    dot,
    integer_kernel_basis,
    kernel_vectors,
    matvec,
    primitive,
    rank,
    rational_inverse,
    transpose,
)
from .polytope import rho_dual_polytope
from .triangulation import Triangulation, find_containing_simplex

__all__ = [
    "DivisorError",
    "LocalBasisError",
    "DivisorLattice",
    "Divisor",
    "build_divisor_lattice",
    "anticanonical",
    "n_vector",
    "n_s_vector",
    "all_generators",
    "local_basis",
    "LocalBasis",
    "decompose_divisor",
    "is_convex_divisor",
    "is_strictly_convex_divisor",
    "convex_by_decomposition",
    "kahler_cone",
    "wall_generators",
    "KahlerCone",
    "quadrant_generators",
    "RationalCone",
    "dual_cone",
    "cone_interior_disjoint",
    "SectionSpace",
    "section_space",
    "canonical_section_count",
    "restrict_divisor_to_orbit",
]


class DivisorError(ValueError):
    pass


class LocalBasisError(DivisorError):
    """The vectors n^delta' for delta' outside a simplex are linearly dependent."""


def _exact(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


# --------------------------------------------------------------- lattices


@dataclass(frozen=True)
class DivisorLattice:
    """Points, the map ``beta`` (columns are points) and a kernel basis."""

    points: tuple
    beta: tuple
    kernel: tuple  # d x r, columns are the basis
    saturated: bool = True

    @property
    def d(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def rank(self) -> int:
        return len(self.kernel[0]) if self.kernel and self.kernel[0] else 0

    @cached_property
    def basis_vectors(self) -> list:
        return kernel_vectors(self.kernel)

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def _coordinate_solver(self):
        K = self.basis_vectors
        r = len(K)
        # fast path: unit pivots with zeros elsewhere in those columns
        piv = []
        for j, v in enumerate(K):
            cols = [i for i in range(self.d) if v[i] == 1 and all(K[k][i] == 0 for k in range(r) if k != j)]
            if not cols:
                break
            piv.append(cols[0])
        if len(piv) == r:
            return ("pivot", tuple(piv))
        rows = []
        chosen = []
        for i in range(self.d):
            cand = chosen + [tuple(v[i] for v in K)]
            if rank(cand) > len(chosen):
                chosen = cand
                rows.append(i)
                if len(rows) == r:
                    break
        return ("inverse", tuple(rows), rational_inverse(chosen))

    def in_kernel(self, v: Sequence) -> bool:
        return not any(matvec(self.beta, v))

    def kernel_coordinates(self, v: Sequence) -> tuple:
        """Coordinates of a kernel element in the stored basis."""
        if len(v) != self.d:
            raise DivisorError("vector length differs from the number of points")
        if not self.in_kernel(v):
            raise DivisorError("vector is not in the kernel of beta")
        solver = self._coordinate_solver
        if solver[0] == "pivot":
            return tuple(_exact(v[i]) for i in solver[1])
        _, rows, inv = solver
        sub = [v[i] for i in rows]
        return tuple(_exact(sum(a * b for a, b in zip(row, sub))) for row in inv)

    def iota_star(self, rho: Sequence) -> tuple:
        """Restriction of a divisor to the kernel: pairings with the basis."""
        return tuple(_exact(dot(v, rho)) for v in self.basis_vectors)

    def beta_star(self, m: Sequence) -> tuple:
        """The divisor ``delta -> <m, delta>`` of a dual vector ``m``."""
        return tuple(_exact(dot(m, p)) for p in self.points)


def build_divisor_lattice(T: Triangulation, kernel_basis: Optional[Sequence[Sequence[int]]] = None) -> DivisorLattice:
    """Exact-sequence data for the points of ``T``.

    ``kernel_basis`` (a list of vectors) replaces the canonical saturated
    basis; it must span the rational kernel.
    """
    pts = T.points
    beta = tuple(tuple(p[i] for p in pts) for i in range(T.n))
    d = len(pts)
    if kernel_basis is None:
        K = integer_kernel_basis(beta, d)
        return DivisorLattice(pts, beta, K, True)
    vecs = [tuple(int(x) for x in v) for v in kernel_basis]
    expected = d - rank(beta)
    for v in vecs:
        if len(v) != d or any(matvec(beta, v)):
            raise DivisorError(f"{v} is not a relation among the points")
    if len(vecs) != expected or rank(vecs) != expected:
        raise DivisorError(f"kernel basis must consist of {expected} independent relations")
    canonical = kernel_vectors(integer_kernel_basis(beta, d))
    # saturated iff the canonical basis has integral coordinates in the given one
    probe = DivisorLattice(pts, beta, tuple(tuple(v[i] for v in vecs) for i in range(d)), False)
    sat = all(all(isinstance(c, int) for c in probe.kernel_coordinates(w)) for w in canonical)
    return DivisorLattice(pts, beta, probe.kernel, sat)


@dataclass(frozen=True)
class Divisor:
    """Rational coefficients indexed by the points of a divisor lattice."""

    coefficients: tuple

    def __init__(self, coefficients):
        object.__setattr__(self, "coefficients", tuple(_exact(c) for c in coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __add__(self, other):
        return Divisor(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return Divisor(a - b for a, b in zip(self, other))

    def scale(self, f) -> "Divisor":
        return Divisor(f * a for a in self)


def _coeffs(rho) -> tuple:
    return rho.coefficients if isinstance(rho, Divisor) else tuple(_exact(x) for x in rho)


def anticanonical(DL_or_T) -> Divisor:
    """The divisor with coefficient 1 on every point."""
    d = DL_or_T.d if isinstance(DL_or_T, DivisorLattice) else len(DL_or_T.points)
    return Divisor([1] * d)


# ------------------------------------------------------- relation vectors


def n_vector(T: Triangulation, DL: DivisorLattice, delta) -> tuple:
    """``e^delta + sum c e^p`` where ``-delta = sum c p`` inside its simplex."""
    i = _point_index(T, delta)
    support, coeffs = find_containing_simplex(T, tuple(-x for x in T.points[i]))
    v = [0] * len(T.points)
    v[i] = 1
    for j, c in zip(support, coeffs):
        v[j] = c
    return tuple(v)


def _point_index(T: Triangulation, delta) -> int:
    if isinstance(delta, int):
        if not 0 <= delta < len(T.points):
            raise DivisorError(f"point index {delta} out of range")
        return delta
    try:
        return T.index[tuple(delta)]
    except KeyError:
        raise DivisorError(f"{tuple(delta)} is not a point of the triangulation") from None


def n_s_vector(T: Triangulation, DL: DivisorLattice, s: Sequence[int], delta) -> tuple:
    """The relation with coefficient 1 on ``delta`` supported on ``s + {delta}``."""
    s = tuple(sorted(s))
    if s not in set(T.simplices):
        raise DivisorError(f"{s} is not a maximal simplex")
    i = _point_index(T, delta)
    if i in s:
        raise DivisorError("the point must lie outside the simplex")
    c = T.coefficients(s, tuple(-x for x in T.points[i]))
    v = [0] * len(T.points)
    v[i] = 1
    for j, x in zip(s, c):
        v[j] = _exact(x)
    return tuple(v)


def _simplex_solver(T: Triangulation, s: tuple):
    """Integer data (adj, det) with det * coefficients(x) == adj . x."""
    inv = T._solvers.get(("int", s))
    if inv is None:
        from .exactlin import determinant

        M = [list(r) for r in transpose(T.matrix(s))]
        det = determinant(M)
        rinv = rational_inverse(M)
        adj = tuple(tuple(int(x * det) for x in row) for row in rinv)
        inv = (adj, det)
        T._solvers[("int", s)] = inv
    return inv


def all_generators(T: Triangulation, DL: Optional[DivisorLattice] = None) -> dict:
    """Every ``n_s^delta'`` as a primitive integral vector in sparse form.

    Keys are ``(s, delta_index)``; values are sorted ``(index, value)`` tuples
    of the primitive positive multiple.
    """
    cached = T._solvers.get("generators")
    if cached is not None:
        return cached
    out = {}
    pts = T.points
    for s in T.simplices:
        adj, det = _simplex_solver(T, s)
        sign = 1 if det > 0 else -1
        sset = set(s)
        for k, p in enumerate(pts):
            if k in sset:
                continue
            negp = [-x for x in p]
            coeffs = [sum(a * b for a, b in zip(row, negp)) for row in adj]
            entries = [(k, det)] + [(j, c) for j, c in zip(s, coeffs) if c]
            g = 0
            for _, x in entries:
                g = gcd(g, x)
            g *= sign
            out[(s, k)] = tuple(sorted((j, x // g) for j, x in entries))
    T._solvers["generators"] = out
    return out


def _dense(sparse, d) -> tuple:
    v = [0] * d
    for j, x in sparse:
        v[j] = x
    return tuple(v)


# ------------------------------------------------------ local coordinates


@dataclass(frozen=True)
class LocalBasis:
    """Basis ``{e^delta : delta in s} + {n^delta' : delta' not in s}`` and its dual.

    ``dual_e[delta]`` and ``dual_n[delta']`` are the dual basis vectors
    (divisors).  ``g`` is the matrix of the dual vectors in the standard
    dual basis restricted to the points outside ``s``.
    """

    simplex: tuple
    outside: tuple
    n_vectors: dict
    dual_e: dict
    dual_n: dict
    g: tuple


def local_basis(T: Triangulation, DL: DivisorLattice, s: Sequence[int]) -> LocalBasis:
    s = tuple(sorted(s))
    if s not in set(T.simplices):
        raise DivisorError(f"{s} is not a maximal simplex")
    d = len(T.points)
    outside = tuple(k for k in range(d) if k not in s)
    nv = {k: n_vector(T, DL, k) for k in outside}
    N = [tuple(Fraction(nv[k][j]) for j in outside) for k in outside]
    if len(outside) and rank(N) < len(outside):
        raise LocalBasisError(
            f"the relation vectors n^delta for points outside {s} are linearly dependent"
        )
    cols = []
    for j in s:
        cols.append(tuple(1 if i == j else 0 for i in range(d)))
    for k in outside:
        cols.append(nv[k])
    B = [[Fraction(cols[c][r]) for c in range(d)] for r in range(d)]
    Binv = rational_inverse(B)  # rows are the dual basis
    dual_e = {j: tuple(_exact(x) for x in Binv[t]) for t, j in enumerate(s)}
    dual_n = {k: tuple(_exact(x) for x in Binv[len(s) + t]) for t, k in enumerate(outside)}
    g = tuple(tuple(dual_n[k][j] for j in outside) for k in outside)
    return LocalBasis(s, outside, nv, dual_e, dual_n, g)


def decompose_divisor(rho, T: Triangulation, DL: DivisorLattice, s: Sequence[int]) -> tuple:
    """Split ``rho`` into a linear part and a part vanishing on ``s``.

    The linear part is ``delta -> <m, delta>`` for the unique ``m`` that
    agrees with ``rho`` on the points of ``s``; the remainder is zero on
    ``s``.  Returns two :class:`Divisor` objects.
    """
    s = tuple(sorted(s))
    r = _coeffs(rho)
    if len(r) != len(T.points):
        raise DivisorError("divisor length differs from the number of points")
    key = ("rows", s)
    inv = T._solvers.get(key)
    if inv is None:
        inv = rational_inverse([list(T.points[i]) for i in s])  # rows: points of s
        T._solvers[key] = inv
    vals = [r[i] for i in s]
    m = [sum(a * b for a, b in zip(row, vals)) for row in inv]
    linear = DL.beta_star(m)
    rest = tuple(_exact(a - b) for a, b in zip(r, linear))
    return Divisor(linear), Divisor(rest)


# ------------------------------------------------------------- convexity


def _scaled(rho, T: Triangulation) -> list:
    """Coefficients times a positive common denominator (signs are all we test)."""
    r = _coeffs(rho)
    if len(r) != len(T.points):
        raise DivisorError("divisor length differs from the number of points")
    den = 1
    for x in r:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in r]


def _unique_generators(T: Triangulation) -> tuple:
    cached = T._solvers.get("unique generators")
    if cached is None:
        cached = tuple(sorted(set(all_generators(T).values())))
        T._solvers["unique generators"] = cached
    return cached


def _pairings(rho, T: Triangulation) -> list:
    r = _scaled(rho, T)
    return [sum(r[j] * x for j, x in g) for g in _unique_generators(T)]


def is_convex_divisor(rho, T: Triangulation, DL: Optional[DivisorLattice] = None) -> bool:
    return all(v >= 0 for v in _pairings(rho, T))


def is_strictly_convex_divisor(rho, T: Triangulation, DL: Optional[DivisorLattice] = None) -> bool:
    return all(v > 0 for v in _pairings(rho, T))


def _scaled_remainder(r: list, T: Triangulation, s: tuple) -> list:
    """``|det| * rest`` of the split of the integer divisor ``r`` along ``s``.

    Same decomposition as :func:`decompose_divisor`, kept in integers: the
    linear part ``m`` solves ``<m, delta> = r_delta`` on ``s`` and
    ``det * m = adj^T r_s``.
    """
    adj, det = _simplex_solver(T, s)
    vals = [r[i] for i in s]
    n = len(vals)
    dm = [sum(adj[i][k] * vals[i] for i in range(n)) for k in range(n)]
    sign = 1 if det > 0 else -1
    return [sign * (det * x - sum(a * b for a, b in zip(dm, p))) for x, p in zip(r, T.points)]


def convex_by_decomposition(rho, T: Triangulation, DL: DivisorLattice, strict: bool = False) -> bool:
    """Convexity straight from the definition: for every maximal simplex the
    non-linear part must be nonnegative (positive) off the simplex."""
    r = _scaled(rho, T)
    for s in T.simplices:
        rest = _scaled_remainder(r, T, s)
        sset = set(s)
        for k, v in enumerate(rest):
            if k in sset:
                if v != 0:
                    raise AssertionError("decomposition does not vanish on its simplex")
                continue
            if v < 0 or (strict and v == 0):
                return False
    return True


# ----------------------------------------------------------- Kähler cone


class KahlerCone(RationalCone):
    """Dual of the cone spanned by all ``n_s^delta'`` in kernel coordinates.

    ``relation_generators`` are those vectors in ``Z^d`` (primitive,
    deduplicated).  The H-description uses only the wall generators, where
    ``delta'`` is the extra vertex of a neighbouring simplex: on a complete
    fan, convexity across every wall already forces global convexity, so the
    other generators lie in the cone these span.
    """

    def __init__(self, DL: DivisorLattice, relation_generators: Sequence[tuple], wall_generators=None):
        self.lattice = DL
        self.relation_generators = tuple(sorted(set(relation_generators)))
        walls = self.relation_generators if wall_generators is None else wall_generators
        self.wall_generators = tuple(sorted(set(walls)))
        coords = [DL.kernel_coordinates(g) for g in self.wall_generators]
        super().__init__(DL.rank, normals=coords)

    @property
    def generator_cone(self) -> RationalCone:
        """The cone spanned by the relation vectors (kernel coordinates)."""
        return dual_cone(self)

    def relation_coordinates(self) -> tuple:
        """Kernel coordinates of every relation generator, walls or not."""
        return tuple(sorted({primitive(self.lattice.kernel_coordinates(g)) for g in self.relation_generators}))

    def contains_divisor(self, rho) -> bool:
        return self.contains(self.lattice.iota_star(_coeffs(rho)))


def wall_generators(T: Triangulation) -> list:
    """``n_s^delta'`` for each simplex ``s`` and each neighbour's extra point ``delta'``."""
    gens = all_generators(T)
    d = len(T.points)
    out = set()
    for s, nb in T.adjacency.items():
        for t in nb.values():
            if t is None:
                continue
            (k,) = set(t) - set(s)
            out.add(_dense(gens[(s, k)], d))
    return sorted(out)


def kahler_cone(T: Triangulation, DL: DivisorLattice) -> KahlerCone:
    gens = {_dense(g, len(T.points)) for g in all_generators(T).values()}
    return KahlerCone(DL, gens, wall_generators(T))


def quadrant_generators(T: Triangulation) -> list:
    """Generators ``n_s^delta'`` whose defining simplex of ``-delta'`` is not inside ``s``.

    Inside the nonnegative orthant these suffice to cut out the convex
    divisors; the rest are redundant there.
    """
    out = set()
    gens = all_generators(T)
    for (s, k), g in gens.items():
        support, _ = find_containing_simplex(T, tuple(-x for x in T.points[k]))
        if not set(support) <= set(s):
            out.add(g)
    return sorted(out)


# --------------------------------------------------------------- sections


@dataclass(frozen=True)
class SectionSpace:
    """Lattice points of the rho-dual polytope with their exponent vectors."""

    rho: tuple
    points: tuple
    exponents: tuple
    polytope: object = field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.points)


def _check_section_divisor(rho, T) -> tuple:
    r = _coeffs(rho)
    if len(r) != len(T.points):
        raise DivisorError("divisor length differs from the number of points")
    for x in r:
        if not isinstance(x, int) or x < 0:
            raise DivisorError("section spaces need nonnegative integer coefficients")
    if not is_convex_divisor(r, T):
        raise DivisorError("divisor is not convex")
    return r


def _rho_dual(T: Triangulation, r):
    return rho_dual_polytope(T.host, T.points, r)


def section_space(T: Triangulation, DL: DivisorLattice, rho) -> SectionSpace:
    r = _check_section_divisor(rho, T)
    Q = _rho_dual(T, r)
    pts = tuple(Q.lattice_points)
    exps = tuple(tuple(dot(v, p) + rp for p, rp in zip(T.points, r)) for v in pts)
    for e in exps:
        if any(x < 0 for x in e):
            raise AssertionError("negative exponent in a section")
    return SectionSpace(r, pts, exps, Q)


def canonical_section_count(T: Triangulation, DL: DivisorLattice, rho) -> tuple:
    """Number of interior lattice points of the rho-dual polytope.

    Returns ``(count, lower_dimensional)``; a lower-dimensional polytope
    has no interior and gives ``(0, True)``.
    """
    r = _check_section_divisor(rho, T)
    Q = _rho_dual(T, r)
    if getattr(Q, "full_dimensional", True) is False:
        return 0, True
    count = sum(
        1 for v in Q.lattice_points
        if all(dot(v, p) + rp > 0 for p, rp in zip(T.points, r))
    )
    return count, False


def restrict_divisor_to_orbit(T: Triangulation, DL: DivisorLattice, s: Sequence[int], rho, v0) -> dict:
    """Values ``rho[k] + <v0, p_k>`` on the link points of ``s``.

    ``v0`` must lie in the rho-dual polytope and be tight on every point of
    ``s``.  Returns ``{point_index: value}``.
    """
    r = _coeffs(rho)
    s = tuple(sorted(s))
    if not T.contains_simplex(s):
        raise DivisorError(f"{s} is not a simplex of the triangulation")
    v0 = tuple(v0)
    for i in s:
        if dot(v0, T.points[i]) != -r[i]:
            raise DivisorError(f"v0 is not tight on point {T.points[i]} of the simplex")
    for p, rp in zip(T.points, r):
        if dot(v0, p) < -rp:
            raise DivisorError("v0 is outside the rho-dual polytope")
    out = {}
    for k in T.link_points(s):
        val = _exact(r[k] + dot(v0, T.points[k]))
        out[k] = val
    return out

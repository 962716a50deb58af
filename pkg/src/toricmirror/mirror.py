"""Hodge-type dimension counts, degeneration cones and mirror-pair checks."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cones import DisjointnessReport, RationalCone, cone_interior_disjoint
from .divisors import (
    DivisorLattice,
    KahlerCone,
    _dense,
    all_generators,
    build_divisor_lattice,
    kahler_cone,
)
from .exactlin import dot, smith_normal_form
from .polytope import LatticePolytope, PolytopeError, dual_polytope, from_vertices, is_reflexive
from .triangulation import (
    FlopCircuit,
    Triangulation,
    TriangulationError,
    apply_flop,
    boundary_skeleton_points,
    build_triangulation,
    check_spanning,
    flop_candidates,
)

__all__ = [
    "MirrorError",
    "FaceCorrection",
    "HodgeReport",
    "picard_dim",
    "deformation_dim",
    "degeneration_cone",
    "DegenerationFamily",
    "classify_degeneration",
    "MirrorReport",
    "mirror_check",
    "OrbitClosureData",
    "orbit_closure_data",
    "FlopMirrorReport",
    "flop_mirror_report",
    "FamilyTerm",
    "OneParameterFamily",
    "one_parameter_family",
]

K3_SUM = 20


class MirrorError(ValueError):
    pass


def _require_reflexive(P) -> LatticePolytope:
    if not isinstance(P, LatticePolytope) or not is_reflexive(P):
        raise MirrorError("polytope is not reflexive")
    return P


# ------------------------------------------------------------ dimensions


@dataclass(frozen=True)
class FaceCorrection:
    """One codimension-2 face together with its dual and their interior point counts."""

    face: tuple
    dual_face: tuple
    interior: int
    dual_interior: int

    @property
    def product(self) -> int:
        return self.interior * self.dual_interior


@dataclass(frozen=True)
class HodgeReport:
    kind: str  # "picard" or "deformation"
    d: int
    n: int
    corrections: tuple
    spanning_index: Optional[int] = None

    @property
    def base(self) -> int:
        return self.d - self.n

    @property
    def total(self) -> int:
        return self.base + sum(c.product for c in self.corrections)

    @property
    def nonzero_corrections(self) -> tuple:
        return tuple(c for c in self.corrections if c.product)


def _count(kind: str, P: LatticePolytope, D: LatticePolytope, spanning=None) -> HodgeReport:
    """Base rank from ``P`` plus products over the codimension-2 faces of ``P``."""
    n = P.n
    d = len(boundary_skeleton_points(P))
    corr = []
    for F in P.faces.get(n - 2, ()):
        G = D.face(F.facets)
        corr.append(
            FaceCorrection(F.id, G.id, len(P.face_interior_points(F)), len(D.face_interior_points(G)))
        )
    return HodgeReport(kind, d, n, tuple(corr), spanning)


def picard_dim(P, T: Optional[Triangulation] = None) -> HodgeReport:
    """Dimension of the Picard group from the face lattices of ``P`` and its dual.

    Only the point set of ``T`` matters, so ``T`` is optional; when given it
    must use the boundary skeleton points of ``P`` and its lattice index is
    recorded (a warning is issued when the points do not span the lattice).
    """
    P = _require_reflexive(P)
    index = None
    if T is not None:
        if tuple(sorted(T.points)) != tuple(sorted(boundary_skeleton_points(P))):
            raise MirrorError("triangulation points differ from the boundary skeleton points")
        index = check_spanning(T)
        if index != 1:
            warnings.warn(f"triangulation points generate a sublattice of index {index}")
    return _count("picard", P, dual_polytope(P), index)


def deformation_dim(P) -> HodgeReport:
    """Number of deformation parameters: the same count run over the dual polytope."""
    P = _require_reflexive(P)
    return _count("deformation", dual_polytope(P), P)


# -------------------------------------------------------- degenerations


def degeneration_cone(Pstar, Tstar: Triangulation, DLstar: Optional[DivisorLattice] = None) -> KahlerCone:
    """The Kähler cone construction applied to the dual polytope's triangulation."""
    _require_reflexive(Pstar)
    if Tstar.host is not None and Tstar.host != Pstar:
        raise MirrorError("triangulation is not over the given polytope")
    DLstar = DLstar or build_divisor_lattice(Tstar)
    return kahler_cone(Tstar, DLstar)


CLASSES = ("not nonnegative", "nonnegative", "positive", "maximal unipotent")


@dataclass(frozen=True)
class DegenerationFamily:
    mu: tuple
    generators: tuple = field(repr=False)
    pairings: tuple = field(repr=False)
    classification: str = ""
    limit_exponents: Optional[tuple] = None

    def consistent(self) -> bool:
        """Recompute the class from the stored pairings."""
        return _classify(self.mu, self.pairings) == self.classification


def _classify(mu, pairings) -> str:
    if any(p < 0 for p in pairings):
        return CLASSES[0]
    if not all(p > 0 for p in pairings):
        return CLASSES[1]
    if all(m > 0 for m in mu):
        return CLASSES[3]
    return CLASSES[2]


def _exact(x):
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def classify_degeneration(mu: Sequence, Tstar: Triangulation) -> DegenerationFamily:
    """Sort a direction ``mu`` over the dual skeleton points by its generator pairings.

    For a maximal unipotent direction the limit is the single monomial of
    the origin section, whose exponent vector is recorded (all ones over the
    skeleton points of the original polytope).
    """
    d = len(Tstar.points)
    if len(mu) != d:
        raise MirrorError(f"mu has {len(mu)} entries, expected {d}")
    mu = tuple(_exact(x) for x in mu)
    gens = Tstar._solvers.get("dense generators")
    if gens is None:
        gens = tuple(sorted({_dense(g, d) for g in all_generators(Tstar).values()}))
        Tstar._solvers["dense generators"] = gens
    pairings = tuple(sum(mu[j] * x for j, x in enumerate(g) if x) for g in gens)
    cls = _classify(mu, pairings)
    limit = None
    if cls == CLASSES[3]:
        limit = (1,) * len(_original_skeleton(Tstar))
    return DegenerationFamily(mu, gens, pairings, cls, limit)


def _original_skeleton(Tstar: Triangulation) -> tuple:
    if Tstar.host is None:
        raise MirrorError("the dual triangulation has no host polytope")
    return boundary_skeleton_points(dual_polytope(Tstar.host))


# ------------------------------------------------------------ mirror pair


@dataclass(frozen=True)
class MirrorReport:
    n: int
    picard: HodgeReport
    deformation: HodgeReport
    mirror_picard: HodgeReport
    mirror_deformation: HodgeReport
    cones_identified: Optional[bool] = None

    @property
    def pic(self) -> int:
        return self.picard.total

    @property
    def defo(self) -> int:
        return self.deformation.total

    @property
    def pic_mirror(self) -> int:
        return self.mirror_picard.total

    @property
    def def_mirror(self) -> int:
        return self.mirror_deformation.total

    @property
    def picard_matches(self) -> bool:
        """Picard dimension of X equals the deformation count of its mirror."""
        return self.pic == self.def_mirror

    @property
    def deformation_matches(self) -> bool:
        return self.defo == self.pic_mirror

    @property
    def corrections_swap(self) -> bool:
        """The correction terms of X reappear, face for face, in the mirror."""

        def key(rep):
            return sorted((c.face, c.dual_face, c.interior, c.dual_interior) for c in rep.corrections)

        return key(self.picard) == key(self.mirror_deformation) and key(self.deformation) == key(
            self.mirror_picard
        )

    @property
    def k3(self) -> Optional[bool]:
        """For n = 3, whether the two dimensions add up to 20; None otherwise."""
        if self.n != 3:
            return None
        return self.pic + self.defo == K3_SUM

    @property
    def all_ok(self) -> bool:
        flags = [self.picard_matches, self.deformation_matches, self.corrections_swap]
        if self.k3 is not None:
            flags.append(self.k3)
        if self.cones_identified is not None:
            flags.append(self.cones_identified)
        return all(flags)


def mirror_check(P, T: Optional[Triangulation] = None, Tstar: Optional[Triangulation] = None,
                 compare_cones: bool = True) -> MirrorReport:
    """Compare the dimension counts of a reflexive polytope and its dual.

    When ``compare_cones`` is set, the Kähler cone over ``Tstar`` and the
    degeneration cone of the original side are built separately and their
    primitive generator sets compared.
    """
    P = _require_reflexive(P)
    D = dual_polytope(P)
    identified = None
    if compare_cones:
        if Tstar is None:
            Tstar = build_triangulation(D)
        DLs = build_divisor_lattice(Tstar)
        K = kahler_cone(Tstar, DLs)
        G = degeneration_cone(D, Tstar, DLs)
        identified = K.relation_generators == G.relation_generators and K.normals == G.normals
    return MirrorReport(
        n=P.n,
        picard=picard_dim(P, T),
        deformation=deformation_dim(P),
        mirror_picard=picard_dim(D, Tstar),
        mirror_deformation=deformation_dim(D),
        cones_identified=identified,
    )


# ------------------------------------------------------- orbit closures


@dataclass(frozen=True)
class OrbitClosureData:
    simplex: tuple
    m: int
    projection: tuple  # m x n integer matrix, kernel = saturated span of the simplex
    star: tuple  # maximal simplices containing the simplex
    link: tuple  # indices of star points outside the simplex
    points: tuple  # projected link points, in link order
    simplices: tuple  # projected maximal cells as index tuples into ``points``
    polytope: Optional[LatticePolytope] = None
    triangulation: Optional[Triangulation] = None

    @property
    def dimension(self) -> int:
        return self.m


def orbit_closure_data(P, T: Triangulation, s: Sequence[int]) -> OrbitClosureData:
    """Quotient-lattice data of the torus orbit attached to simplex ``s``.

    ``s`` holds point indices of ``T``.  The projection comes from the Smith
    form of the simplex points; its rows span the annihilator of their
    saturated span.  A maximal simplex gives the zero lattice and an empty
    record.
    """
    s = tuple(sorted(s))
    n = T.n
    if not s or len(s) > n:
        raise MirrorError("a simplex has between 1 and n points")
    if not T.star(s):
        raise MirrorError(f"{s} is not a simplex of the triangulation")
    A = tuple(tuple(T.points[i][k] for i in s) for k in range(n))  # n x k, columns = points
    snf = smith_normal_form(A)
    r = snf.rank
    proj = tuple(tuple(row) for row in snf.U[r:])
    star = T.star(s)
    link = T.link_points(s)
    if r == n:
        return OrbitClosureData(s, 0, proj, star, link, (), ())
    pos = {k: j for j, k in enumerate(link)}
    pts = tuple(tuple(dot(row, T.points[k]) for row in proj) for k in link)
    cells = tuple(sorted(tuple(sorted(pos[k] for k in t if k not in s)) for t in star))
    poly = from_vertices(pts)
    tri = Triangulation(pts, cells)
    return OrbitClosureData(s, n - r, proj, star, link, pts, tri.simplices, poly, tri)


# ---------------------------------------------------------------- flops


@dataclass(frozen=True)
class FlopMirrorReport:
    circuit: FlopCircuit
    picard: HodgeReport
    picard_flopped: HodgeReport
    cone: KahlerCone = field(repr=False)
    cone_flopped: KahlerCone = field(repr=False)
    disjointness: DisjointnessReport = None

    @property
    def picard_unchanged(self) -> bool:
        return self.picard.total == self.picard_flopped.total

    @property
    def disjoint(self) -> bool:
        return self.disjointness.disjoint


def _find_flop(T: Triangulation, Tflat: Triangulation) -> FlopCircuit:
    if T.points != Tflat.points:
        raise MirrorError("the two triangulations use different points")
    for c in flop_candidates(T):
        if apply_flop(T, c) == Tflat:
            return c
    raise MirrorError("the second triangulation is not a flop of the first")


def flop_mirror_report(T: Triangulation, Tflat: Triangulation, P) -> FlopMirrorReport:
    """Compare a triangulation with its flop.

    Both Kähler cones are expressed in the same kernel coordinates.  On the
    mirror side they are two degeneration cones of one family.
    """
    P = _require_reflexive(P)
    c = _find_flop(T, Tflat)
    DL = build_divisor_lattice(T)
    K1 = kahler_cone(T, DL)
    K2 = kahler_cone(Tflat, DL)
    rep = FlopMirrorReport(
        circuit=c,
        picard=picard_dim(P, T),
        picard_flopped=picard_dim(P, Tflat),
        cone=K1,
        cone_flopped=K2,
        disjointness=cone_interior_disjoint(K1, K2),
    )
    assert rep.picard_unchanged
    return rep


# ------------------------------------------------- one-parameter families


@dataclass(frozen=True)
class FamilyTerm:
    point: tuple
    coefficient: object
    parameter_exponent: object
    exponents: tuple


@dataclass(frozen=True)
class OneParameterFamily:
    """``z^{0*} + sum_k s^{mu_k} b_k z^{k}`` recorded through exponent vectors."""

    origin_exponents: tuple
    terms: tuple

    @property
    def mu(self) -> tuple:
        return tuple(t.parameter_exponent for t in self.terms)

    @property
    def base(self) -> tuple:
        return tuple(t.coefficient for t in self.terms)

    @property
    def is_constant(self) -> bool:
        return not any(self.mu)

    @property
    def deformed(self) -> tuple:
        """Points whose monomial carries a nonzero power of the parameter."""
        return tuple(t.point for t in self.terms if t.parameter_exponent)

    def equivalent(self, other: "OneParameterFamily") -> bool:
        """Same base data and ``mu`` related by a positive rescaling."""
        if self.base != other.base or self.origin_exponents != other.origin_exponents:
            return False
        a, b = self.mu, other.mu
        if len(a) != len(b):
            return False
        ratio = None
        for x, y in zip(a, b):
            if (x == 0) != (y == 0):
                return False
            if x:
                r = Fraction(y) / Fraction(x)
                if r <= 0 or (ratio is not None and r != ratio):
                    return False
                ratio = r
        return True


def one_parameter_family(mu: Sequence, base: Sequence, Tstar: Triangulation) -> OneParameterFamily:
    """Monomials of the family deforming ``z^{0*}`` by ``s^mu`` over the dual skeleton points.

    Exponent vectors are indexed by the skeleton points of the original
    polytope: the monomial of a dual point ``v`` has entry ``<v, delta> + 1``.
    """
    d = len(Tstar.points)
    if len(mu) != d or len(base) != d:
        raise MirrorError(f"mu and base need {d} entries")
    skel = _original_skeleton(Tstar)
    terms = []
    for p, b, m in zip(Tstar.points, base, mu):
        exps = tuple(dot(p, delta) + 1 for delta in skel)
        terms.append(FamilyTerm(p, _exact(b), _exact(m), exps))
    return OneParameterFamily((1,) * len(skel), tuple(terms))

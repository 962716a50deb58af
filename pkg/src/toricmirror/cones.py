"""Finitely generated rational cones with lazy V/H conversion."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .exactlin import dot, extreme_rays, primitive, rank, rational_feasible

__all__ = ["RationalCone", "dual_cone", "cone_interior_disjoint", "DisjointnessReport"]


def _clean(vectors: Optional[Iterable[Sequence]], dim: int) -> Optional[tuple]:
    if vectors is None:
        return None
    out = set()
    for v in vectors:
        if len(v) != dim:
            raise ValueError(f"vector {tuple(v)} does not have length {dim}")
        p = primitive(v)
        if any(p):
            out.add(p)
    return tuple(sorted(out))


class RationalCone:
    """A closed convex cone in ``Q^dim``.

    Either description may be given:

    * ``generators``: the cone is their nonnegative span;
    * ``normals``: the cone is ``{x : <h, x> >= 0 for all h}``.

    The missing description is computed on demand by double description.
    Generators and normals are stored primitive, deduplicated and sorted.
    """

    def __init__(self, dim: int, generators=None, normals=None):
        if generators is None and normals is None:
            raise ValueError("a cone needs generators or normals")
        self.dim = dim
        self._gens = _clean(generators, dim)
        self._norms = _clean(normals, dim)

    # -- descriptions ----------------------------------------------------

    @cached_property
    def _v_description(self):
        if self._gens is not None and self._norms is None:
            # cone(G) has no cheaper canonical V-form than its own extreme rays
            dual = extreme_rays(self._gens, self.dim)
            inner = extreme_rays(
                list(dual.rays) + list(dual.lineality) + [tuple(-x for x in v) for v in dual.lineality],
                self.dim,
            )
            return inner
        return extreme_rays(self.normals, self.dim)

    @cached_property
    def _h_description(self):
        return extreme_rays(self.generators, self.dim)

    @property
    def generators(self) -> tuple:
        """Generators as given, or the computed minimal ones."""
        if self._gens is not None:
            return self._gens
        return self.minimal_generators

    @property
    def normals(self) -> tuple:
        if self._norms is not None:
            return self._norms
        return self.minimal_normals

    @property
    def minimal_generators(self) -> tuple:
        """Extreme rays plus both signs of a lineality basis, sorted."""
        v = self._v_description
        lin = [primitive(x) for x in v.lineality]
        return tuple(sorted(set(v.rays) | set(lin) | {tuple(-a for a in x) for x in lin}))

    @property
    def extreme_rays(self) -> tuple:
        return self._v_description.rays

    @property
    def lineality(self) -> tuple:
        return self._v_description.lineality

    @property
    def minimal_normals(self) -> tuple:
        h = self._h_description
        lin = [primitive(x) for x in h.lineality]
        return tuple(sorted(set(h.rays) | set(lin) | {tuple(-a for a in x) for x in lin}))

    @property
    def has_generators(self) -> bool:
        return self._gens is not None

    @property
    def has_normals(self) -> bool:
        return self._norms is not None

    # -- predicates ------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        if self._norms is not None:
            return all(dot(h, x) >= 0 for h in self._norms)
        if not any(x):
            return True
        # Farkas: x lies outside cone(G) iff some y is >= 0 on G and < 0 on x
        return not rational_feasible([tuple(-a for a in x)], self._gens, dim=self.dim).feasible

    def contains_interior(self, x: Sequence) -> bool:
        """Strict containment in the interior (needs a full-dimensional cone)."""
        if not self.interior_nonempty:
            return False
        return all(dot(h, x) > 0 for h in self.normals)

    @cached_property
    def implicit_equalities(self) -> tuple:
        """Normals that vanish on the whole cone (H-description only)."""
        if self._norms is None:
            return tuple(h for h in self.minimal_normals if tuple(-a for a in h) in set(self.minimal_normals))
        rows = list(self._norms)
        active = set(range(len(rows)))
        while active:
            combo = [sum(rows[i][k] for i in active) for k in range(self.dim)]
            if not any(combo):
                # each active row is >= 0 on the cone and they sum to zero
                break
            res = rational_feasible([combo], rows, dim=self.dim)
            if not res.feasible:
                break
            w = res.witness
            active = {i for i in active if dot(rows[i], w) == 0}
        return tuple(rows[i] for i in sorted(active))

    @cached_property
    def dimension(self) -> int:
        if self._gens is not None:
            return rank(self._gens) if self._gens else 0
        eq = self.implicit_equalities
        return self.dim - (rank(eq) if eq else 0)

    @property
    def interior_nonempty(self) -> bool:
        """Interior taken in the ambient space, so lower-dimensional cones have none."""
        return self.dimension == self.dim

    @cached_property
    def interior_witness(self) -> Optional[tuple]:
        if self._norms is None and self._gens is not None:
            if rank(self._gens) < self.dim:
                return None
            return tuple(sum(g[k] for g in self._gens) for k in range(self.dim))
        res = rational_feasible(self.normals, (), dim=self.dim)
        return res.witness if res.feasible else None

    def is_subset_of(self, other: "RationalCone") -> bool:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if self._gens is not None:
            return all(other.contains(g) for g in self._gens)
        if other._norms is not None:
            dual_self = RationalCone(self.dim, generators=self._norms)
            return all(dual_self.contains(h) for h in other._norms)
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalCone) or other.dim != self.dim:
            return False
        same_gens = self._gens is not None and self._gens == other._gens
        same_norms = self._norms is not None and self._norms == other._norms
        if same_gens or same_norms:
            return True
        return self.is_subset_of(other) and other.is_subset_of(self)

    __hash__ = None  # mutable caches; compare explicitly

    def __repr__(self) -> str:
        parts = [f"dim={self.dim}"]
        if self._gens is not None:
            parts.append(f"generators={len(self._gens)}")
        if self._norms is not None:
            parts.append(f"normals={len(self._norms)}")
        return f"RationalCone({', '.join(parts)})"


def dual_cone(C: RationalCone) -> RationalCone:
    """``{y : <x, y> >= 0 for every x in C}``; the two descriptions swap."""
    return RationalCone(C.dim, generators=C._norms, normals=C._gens)


@dataclass(frozen=True)
class DisjointnessReport:
    disjoint: bool
    first_interior_nonempty: bool
    second_interior_nonempty: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.disjoint


def cone_interior_disjoint(C1: RationalCone, C2: RationalCone) -> DisjointnessReport:
    """Whether no point is strictly inside both cones.

    Interiors are taken in the ambient space: a cone of lower dimension has
    an empty interior, which the report records.
    """
    if C1.dim != C2.dim:
        raise ValueError("cones live in different dimensions")
    strict = list(C1.normals) + list(C2.normals)
    res = rational_feasible(strict, (), dim=C1.dim)
    return DisjointnessReport(
        disjoint=not res.feasible,
        first_interior_nonempty=C1.interior_nonempty,
        second_interior_nonempty=C2.interior_nonempty,
        witness=res.witness,
    )

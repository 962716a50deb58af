import random

import pytest

from oracles import in_cone_nnls
from toricmirror.cones import RationalCone, cone_interior_disjoint, dual_cone
from toricmirror.exactlin import dot


def test_quadrant_is_self_dual():
    Q = RationalCone(2, generators=[(1, 0), (0, 1)])
    D = dual_cone(Q)
    assert set(D.extreme_rays) == {(1, 0), (0, 1)}
    assert D == Q


def test_dual_of_half_plane_is_ray():
    H = RationalCone(2, normals=[(0, 1)])
    assert H.lineality and H.dimension == 2
    D = dual_cone(H)
    assert D.dimension == 1
    assert D.contains((0, 3)) and not D.contains((1, 1))


def test_dual_of_wedge():
    C = RationalCone(2, generators=[(1, 0), (1, 2)])
    D = dual_cone(C)
    assert set(D.extreme_rays) == {(0, 1), (2, -1)}


def test_cone_needs_a_description():
    with pytest.raises(ValueError):
        RationalCone(2)


def test_membership_and_interior():
    C = RationalCone(3, generators=[(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert C.contains((1, 2, 0)) and not C.contains_interior((1, 2, 0))
    assert C.contains_interior((1, 1, 1))
    w = C.interior_witness
    assert all(x > 0 for x in w)
    flat = RationalCone(3, generators=[(1, 0, 0), (0, 1, 0)])
    assert flat.dimension == 2 and not flat.interior_nonempty
    assert flat.implicit_equalities


def test_subset():
    A = RationalCone(2, generators=[(1, 1)])
    B = RationalCone(2, generators=[(1, 0), (0, 1)])
    assert A.is_subset_of(B) and not B.is_subset_of(A)


def test_double_dual_by_sampling():
    rng = random.Random(23)
    for _ in range(30):
        dim = rng.randint(2, 4)
        gens = [tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(rng.randint(1, 6))]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        C = RationalCone(dim, generators=gens)
        DD = dual_cone(dual_cone(C))
        for _ in range(20):
            x = tuple(rng.randint(-4, 4) for _ in range(dim))
            expected = in_cone_nnls(gens, x)
            assert C.contains(x) == expected
            assert DD.contains(x) == expected
        # every normal of C is nonnegative on its generators
        for h in C.normals:
            assert all(dot(h, g) >= 0 for g in gens)


def test_disjointness_examples():
    Q = RationalCone(2, generators=[(1, 0), (0, 1)])
    Q2 = RationalCone(2, generators=[(-1, 0), (0, 1)])
    r = cone_interior_disjoint(Q, Q2)
    assert r.disjoint and bool(r)
    assert r.first_interior_nonempty and r.second_interior_nonempty
    W = RationalCone(2, generators=[(1, 1), (-1, 1)])
    r = cone_interior_disjoint(Q, W)
    assert not r.disjoint
    assert Q.contains_interior(r.witness) and W.contains_interior(r.witness)
    ray = RationalCone(2, generators=[(1, 1)])
    r = cone_interior_disjoint(Q, ray)
    assert r.disjoint and not r.second_interior_nonempty


def test_disjointness_dimension_mismatch():
    with pytest.raises(ValueError):
        cone_interior_disjoint(RationalCone(2, normals=[(1, 0)]), RationalCone(3, normals=[(1, 0, 0)]))

import random
from fractions import Fraction

import pytest

from oracles import normalized_volume_oracle
from polytopes import REFLEXIVE, SMALL, cube, diamond, polytope, quintic, triangulation
from toricmirror.exactlin import determinant
from toricmirror.triangulation import (
    Triangulation,
    TriangulationError,
    apply_flop,
    boundary_skeleton_points,
    build_triangulation,
    check_spanning,
    find_containing_simplex,
    flop_candidates,
)


def test_skeleton_counts():
    assert len(boundary_skeleton_points(cube())) == 20
    assert len(boundary_skeleton_points(quintic())) == 5
    assert len(boundary_skeleton_points(diamond())) == 4


def test_skeleton_requires_reflexive():
    from toricmirror.polytope import from_vertices

    with pytest.raises(TriangulationError):
        boundary_skeleton_points(from_vertices([(2, 0), (-2, 0), (0, 1), (0, -1)]))


def test_build_examples():
    T = build_triangulation(diamond())
    assert len(T.simplices) == 4
    assert T.volume() == 4
    T = build_triangulation(quintic())
    assert len(T.simplices) == 5 and T.volume() == 5
    T = triangulation("cube")
    assert len(T.points) == 20 and T.volume() == 48


@pytest.mark.parametrize("name", SMALL)
def test_triangulation_invariants(name):
    P = polytope(name)
    T = triangulation(name)
    assert set(T.points) == set(boundary_skeleton_points(P))
    assert T.volume() == normalized_volume_oracle([tuple(int(x) for x in v) for v in P.vertices])
    for s in T.simplices:
        assert determinant(T.matrix(s)) != 0
        # each simplex lies in a facet of the polytope
        assert any(all(sum(a * b for a, b in zip(u, T.points[i])) == -c for i in s) for u, c in P.facets)
    for r, ts in T.ridge_map.items():
        assert len(ts) == 2
    T.validate()
    # the square's skeleton is its four vertices, which span the even sublattice
    assert check_spanning(T) == (2 if name == "square" else 1)


def test_quintic_mirror_triangulation():
    T = triangulation("quintic_mirror")
    assert len(T.points) == 105
    assert T.volume() == normalized_volume_oracle([tuple(int(x) for x in v) for v in polytope("quintic_mirror").vertices])


def test_spanning_index_of_sublattice_fan():
    T = Triangulation.from_simplices([(2, 0), (0, 1), (-2, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert check_spanning(T) == 2


def test_find_containing_examples():
    T = build_triangulation(diamond())
    idx = T.index
    support, coeffs = find_containing_simplex(T, (1, 0))
    assert [T.points[i] for i in support] == [(1, 0)] and coeffs == (1,)
    support, coeffs = find_containing_simplex(T, (1, 1))
    assert sorted(support) == sorted([idx[(1, 0)], idx[(0, 1)]]) and coeffs == (1, 1)
    support, coeffs = find_containing_simplex(T, (3, 1))
    assert dict(zip((T.points[i] for i in support), coeffs)) == {(1, 0): 3, (0, 1): 1}
    with pytest.raises(TriangulationError):
        find_containing_simplex(T, (0, 0))
    with pytest.raises(TriangulationError):
        find_containing_simplex(T, (1, 0, 0))


@pytest.mark.parametrize("name", ["cube", "quartic_mirror", "diamonds", "quintic"])
def test_find_containing_random_directions(name):
    T = triangulation(name)
    rng = random.Random(17)
    for _ in range(100):
        x = tuple(rng.randint(-7, 7) for _ in range(T.n))
        if not any(x):
            continue
        support, coeffs = find_containing_simplex(T, x)
        assert all(Fraction(c) > 0 for c in coeffs)
        total = [sum(Fraction(c) * T.points[i][k] for i, c in zip(support, coeffs)) for k in range(T.n)]
        assert total == list(x)
        assert any(set(support) <= set(s) for s in T.simplices)


# -------------------------------------------------------------------- flops


def test_flops_on_product_of_diamonds():
    T = triangulation("diamonds")
    cands = flop_candidates(T)
    assert len(cands) >= 1
    c = cands[0]
    Tf = apply_flop(T, c)
    assert Tf != T
    assert Tf.volume() == T.volume() and Tf.points == T.points
    # the flopped triangulation carries the opposite circuit; flipping it returns T
    back = [b for b in flop_candidates(Tf) if set(b.removed) == set(c.added)]
    assert back
    assert apply_flop(Tf, back[0]) == T
    with pytest.raises(TriangulationError):
        apply_flop(Tf, c)


def test_flop_circuit_relation():
    T = triangulation("diamonds")
    for c in flop_candidates(T):
        p = T.points
        assert [a + b for a, b in zip(p[c.d1], p[c.d4])] == [a + b for a, b in zip(p[c.d2], p[c.d3])]


def test_flops_rank_and_absence():
    with pytest.raises(TriangulationError):
        flop_candidates(triangulation("cube"))
    assert flop_candidates(triangulation("quintic")) == []


# ---------------------------------------------------------- invalid fans


def test_invalid_fans_rejected():
    square = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    with pytest.raises(TriangulationError):  # missing a cone
        Triangulation.from_simplices(square, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(TriangulationError):  # overlapping cones
        Triangulation.from_simplices(square + [(1, 1)], [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 1)])
    with pytest.raises(TriangulationError):  # degenerate simplex
        Triangulation.from_simplices([(1, 0), (2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(TriangulationError):  # origin as a point
        Triangulation.from_simplices(square + [(0, 0)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(TriangulationError):  # unused point
        Triangulation.from_simplices(square + [(1, 1)], [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_host_check_rejects_non_facet_simplex():
    P = polytope("square")
    pts = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
    # cones over the diagonals are fine as a fan but do not lie in facets of the square
    pts2 = pts + [(1, 0), (0, 1), (-1, 0), (0, -1)]
    good = Triangulation.from_simplices(
        pts2, [(0, 4), (4, 3), (0, 5), (5, 1), (1, 6), (6, 2), (2, 7), (7, 3)], host=P
    )
    assert good.volume() == 8
    with pytest.raises(TriangulationError):
        Triangulation.from_simplices(pts, [(0, 1), (1, 2), (2, 3), (3, 0)], host=diamond())

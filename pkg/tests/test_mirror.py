import warnings

import pytest

from oracles import hodge_oracle
from polytopes import REFLEXIVE, polytope, triangulation
from toricmirror.divisors import build_divisor_lattice, kahler_cone
from toricmirror.exactlin import solve_rational
from toricmirror.mirror import (
    CLASSES,
    MirrorError,
    classify_degeneration,
    deformation_dim,
    degeneration_cone,
    flop_mirror_report,
    mirror_check,
    one_parameter_family,
    orbit_closure_data,
    picard_dim,
)
from toricmirror.polytope import dual_polytope, from_vertices
from toricmirror.triangulation import apply_flop, flop_candidates


def int_vertices(P):
    return [tuple(int(x) for x in v) for v in P.vertices]


@pytest.mark.parametrize("name", list(REFLEXIVE))
def test_hodge_counts_match_oracle(name):
    P = polytope(name)
    pic, defo = hodge_oracle(int_vertices(P))
    assert picard_dim(P).total == pic
    assert deformation_dim(P).total == defo


def test_hodge_examples():
    assert (picard_dim(polytope("quintic")).total, deformation_dim(polytope("quintic")).total) == (1, 101)
    assert (picard_dim(polytope("cube")).total, deformation_dim(polytope("cube")).total) == (17, 3)
    assert picard_dim(polytope("diamond")).total == 6


def test_hodge_report_structure():
    rep = picard_dim(polytope("cube"))
    assert rep.base == rep.d - rep.n
    assert rep.total == rep.base + sum(c.product for c in rep.corrections)
    assert all(c.product == c.interior * c.dual_interior for c in rep.corrections)


def test_hodge_requires_reflexive():
    with pytest.raises(MirrorError):
        picard_dim(from_vertices([(2, 0), (-2, 0), (0, 1), (0, -1)]))


def test_picard_with_triangulation_checks_points():
    P = polytope("square")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = picard_dim(P, triangulation("square"))
    assert rep.spanning_index == 2 and caught
    with pytest.raises(MirrorError):
        picard_dim(polytope("cube"), triangulation("octahedron"))


# ------------------------------------------------------------ mirror pairs


@pytest.mark.parametrize("name", ["cube", "octahedron", "quartic", "diamond", "hexagon", "diamonds"])
def test_mirror_check_small(name):
    r = mirror_check(polytope(name))
    assert r.picard_matches and r.deformation_matches and r.corrections_swap
    assert r.cones_identified
    assert r.all_ok
    assert r.k3 == (True if r.n == 3 else None)


def test_mirror_check_quintic():
    r = mirror_check(polytope("quintic"), compare_cones=False)
    assert (r.pic, r.defo, r.pic_mirror, r.def_mirror) == (1, 101, 101, 1)
    assert r.all_ok and r.k3 is None and r.cones_identified is None


def test_degeneration_cone_is_kahler_cone():
    D = polytope("cube")
    Ts = triangulation("cube")
    G = degeneration_cone(D, Ts)
    K = kahler_cone(Ts, build_divisor_lattice(Ts))
    assert G.normals == K.normals and G.relation_generators == K.relation_generators
    with pytest.raises(MirrorError):
        degeneration_cone(polytope("octahedron"), Ts)


# --------------------------------------------------------- classification


def strictly_convex_positive(T):
    """A strictly convex divisor with every coefficient positive."""
    DL = build_divisor_lattice(T)
    K = kahler_cone(T, DL)
    w = K.interior_witness
    rho = solve_rational([list(v) for v in DL.basis_vectors], list(w))
    lo = min(rho)
    return [x - lo + 1 for x in rho]


def test_classify_examples():
    Ts = triangulation("cube")
    d = len(Ts.points)
    assert classify_degeneration([0] * d, Ts).classification == CLASSES[1]
    DL = build_divisor_lattice(Ts)
    assert classify_degeneration(DL.beta_star((1, 2, 3)), Ts).classification == CLASSES[1]
    bad = [0] * d
    bad[0] = -1
    assert classify_degeneration(bad, Ts).classification == CLASSES[0]
    mu = strictly_convex_positive(Ts)
    fam = classify_degeneration(mu, Ts)
    assert fam.classification == CLASSES[3]
    assert fam.limit_exponents == (1,) * 6  # one entry per vertex of the octahedron
    assert fam.consistent()
    # subtracting a linear function keeps positivity of the pairings but not of mu
    shifted = [a + b for a, b in zip(mu, DL.beta_star((-50, 0, 0)))]
    assert classify_degeneration(shifted, Ts).classification == CLASSES[2]
    with pytest.raises(MirrorError):
        classify_degeneration([1, 2], Ts)


def test_classify_anticanonical_on_quintic_mirror():
    Ts = triangulation("quintic_mirror")
    fam = classify_degeneration([1] * len(Ts.points), Ts)
    # -K is convex, but each facet carries many simplices, so some pairings vanish
    assert fam.classification == CLASSES[1]
    assert min(fam.pairings) == 0


# ------------------------------------------------------------ orbit closures


def test_orbit_of_octahedron_vertex():
    T = triangulation("octahedron")
    i = T.index[(1, 0, 0)]
    O = orbit_closure_data(polytope("octahedron"), T, (i,))
    assert O.m == 2 and O.dimension == 2
    assert len(O.points) == 4 and len(O.polytope.vertices) == 4
    assert len(O.simplices) == 4
    for row in O.projection:
        assert sum(a * b for a, b in zip(row, (1, 0, 0))) == 0


def test_orbit_of_quintic_edge():
    T = triangulation("quintic")
    O = orbit_closure_data(polytope("quintic"), T, (0, 1))
    assert O.m == 2
    assert len(O.points) == 3 and len(O.polytope.vertices) == 3
    assert len(O.simplices) == 3


def test_orbit_of_maximal_simplex():
    T = triangulation("quintic")
    O = orbit_closure_data(polytope("quintic"), T, T.simplices[0])
    assert O.m == 0 and O.points == () and O.polytope is None


def test_orbit_errors():
    T = triangulation("octahedron")
    with pytest.raises(MirrorError):
        orbit_closure_data(polytope("octahedron"), T, ())
    i, j = T.index[(1, 0, 0)], T.index[(-1, 0, 0)]
    with pytest.raises(MirrorError):
        orbit_closure_data(polytope("octahedron"), T, (i, j))


# ------------------------------------------------------------------- flops


def test_flop_report():
    P = polytope("diamonds")
    T = triangulation("diamonds")
    c = flop_candidates(T)[0]
    Tf = apply_flop(T, c)
    rep = flop_mirror_report(T, Tf, P)
    assert rep.circuit == c
    assert rep.picard_unchanged and rep.picard.total == 28
    assert rep.disjoint
    assert rep.disjointness.first_interior_nonempty and rep.disjointness.second_interior_nonempty
    with pytest.raises(MirrorError):
        flop_mirror_report(T, T, P)


# -------------------------------------------------- one-parameter families


def test_one_parameter_family():
    Ts = triangulation("quintic_mirror")
    d = len(Ts.points)
    base = [1] * d
    fam0 = one_parameter_family([0] * d, base, Ts)
    assert fam0.is_constant and fam0.deformed == ()
    assert fam0.origin_exponents == (1,) * 5
    for t in fam0.terms:
        assert all(e >= 0 for e in t.exponents)
        assert sum(t.exponents) == 5  # the five vertices of the quintic sum to zero
    mu = [0] * d
    mu[7] = 1
    fam = one_parameter_family(mu, base, Ts)
    assert fam.deformed == (Ts.points[7],)
    assert fam.equivalent(one_parameter_family([2 * x for x in mu], base, Ts))
    assert not fam.equivalent(one_parameter_family([-x for x in mu], base, Ts))
    assert not fam.equivalent(fam0)
    with pytest.raises(MirrorError):
        one_parameter_family([0], base, Ts)

"""Fixture polytopes and hand-made fans shared by the test modules."""

import itertools
from functools import lru_cache

from toricmirror.exactlin import smith_normal_form
from toricmirror.polytope import dual_polytope, from_vertices
from toricmirror.triangulation import Triangulation, build_triangulation

DIAMOND_SQUARES = [(1, 0), (0, 1), (-1, 0), (0, -1)]


def quintic():
    return from_vertices([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)])


def quartic():
    return from_vertices([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])


def cube(n=3):
    return from_vertices(list(itertools.product((-1, 1), repeat=n)))


def octahedron():
    return from_vertices([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])


def diamond():
    return from_vertices(DIAMOND_SQUARES)


def hexagon():
    return from_vertices([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])


def product_of_diamonds():
    return from_vertices([a + b for a in DIAMOND_SQUARES for b in DIAMOND_SQUARES])


# name -> constructor for every reflexive fixture
REFLEXIVE = {
    "diamond": diamond,
    "square": lambda: dual_polytope(diamond()),
    "hexagon": hexagon,
    "quintic": quintic,
    "quintic_mirror": lambda: dual_polytope(quintic()),
    "quartic": quartic,
    "quartic_mirror": lambda: dual_polytope(quartic()),
    "cube": cube,
    "octahedron": octahedron,
    "diamonds": product_of_diamonds,
    "diamonds_mirror": lambda: dual_polytope(product_of_diamonds()),
}

# fixtures small enough for exhaustive per-divisor checks in a few seconds
SMALL = [k for k in REFLEXIVE if k != "quintic_mirror"]


@lru_cache(maxsize=None)
def polytope(name):
    return REFLEXIVE[name]()


@lru_cache(maxsize=None)
def triangulation(name):
    return build_triangulation(polytope(name))


def weighted_points(weights):
    """Points delta^1..delta^{n+1} generating Z^n with sum w_i delta^i = 0.

    The Smith form of the weight column gives a unimodular U with U w = e_1;
    the remaining rows of U send e^i to delta^i.
    """
    w = [[x] for x in weights]
    U = smith_normal_form(w).U
    rows = U[1:]
    return [tuple(r[i] for r in rows) for i in range(len(weights))]


def example1_fan(weights):
    """Face fan of the weighted simplex, points indexed delta^1..delta^{n+1}."""
    pts = weighted_points(weights)
    m = len(pts)
    simplices = [tuple(j for j in range(m) if j != i) for i in range(m)]
    return Triangulation.from_simplices(pts, simplices)


def example2_fan(weights):
    """Blow-up fan: delta^{n+2} = -delta^{n+1}; simplices s_i and t_i for i <= n.

    Index i-1 holds delta^i.
    """
    pts = weighted_points(weights)
    n = len(weights) - 1
    pts = pts + [tuple(-x for x in pts[n])]
    s = [tuple(j for j in range(n + 1) if j != i) for i in range(n)]
    t = [tuple([k for k in range(n) if k != i] + [n + 1]) for i in range(n)]
    return Triangulation.from_simplices(pts, s + t)


def example2_kernel(weights):
    """The basis (n^1, n^2) of the relation lattice of the blow-up fan."""
    n = len(weights) - 1
    n1 = [0] * (n + 2)
    n1[n] = n1[n + 1] = 1
    n2 = list(weights[:n]) + [0, -weights[n]]
    return [tuple(n1), tuple(n2)]

"""Exact integer and rational linear algebra.

Everything here works on plain Python integers and :class:`fractions.Fraction`
values.  Matrices are tuples of row tuples.  No floating point is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "as_matrix",
    "transpose",
    "matmul",
    "matvec",
    "identity",
    "dot",
    "primitive",
    "rank",
    "determinant",
    "smith_normal_form",
    "hermite_normal_form",
    "integer_kernel_basis",
    "lattice_index",
    "solve_rational",
    "rational_inverse",
    "rational_feasible",
    "FeasibilityResult",
    "extreme_rays",
    "ConeRays",
]

IntMatrix = tuple  # tuple[tuple[int, ...], ...]

FM_DIMENSION_LIMIT = 12


# ---------------------------------------------------------------- basics


def as_matrix(rows: Iterable[Iterable], cols: Optional[int] = None) -> tuple:
    """Copy ``rows`` into an immutable row-major matrix of exact numbers."""
    out = []
    for row in rows:
        r = tuple(_exact(x) for x in row)
        out.append(r)
    if cols is None:
        cols = len(out[0]) if out else 0
    for i, r in enumerate(out):
        if len(r) != cols:
            raise ValueError(f"row {i} has length {len(r)}, expected {cols}")
    return tuple(out)


def _exact(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return _exact(Fraction(x))
    raise TypeError(f"inexact or unsupported entry {x!r}")


def shape(A: Sequence[Sequence]) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def transpose(A: Sequence[Sequence], cols: Optional[int] = None) -> tuple:
    if not A:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*A))


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("length mismatch in dot product")
    return sum(a * b for a, b in zip(u, v))


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(dot(row, x) for row in A)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    if A and len(A[0]) != len(B):
        raise ValueError("inner dimensions differ")
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def primitive(v: Sequence) -> tuple:
    """Smallest positive integer multiple of ``v`` with coprime entries.

    The zero vector is returned unchanged.
    """
    dens = 1
    for x in v:
        if isinstance(x, Fraction):
            dens = dens * x.denominator // gcd(dens, x.denominator)
    ints = [int(x * dens) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# ------------------------------------------------------ rational elimination


def _rref(A: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form with leftmost pivots.  Returns (R, pivots)."""
    M = [[Fraction(x) for x in row] for row in A]
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    # Fraction-free Bareiss style elimination on a copy.
    M = [list(row) for row in A]
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, m):
            f = M[i][c]
            if f:
                M[i] = [piv * a - f * b for a, b in zip(M[i], M[r])]
                g = 0
                for x in M[i]:
                    if isinstance(x, int):
                        g = gcd(g, x)
                    else:
                        g = 1
                        break
                if g > 1:
                    M[i] = [x // g for x in M[i]]
        r += 1
        if r == m:
            break
    return r


def determinant(A: Sequence[Sequence]):
    """Exact determinant (Bareiss for integer input, elimination otherwise)."""
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for row in A for x in row):
        M = [list(row) for row in A]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if M[k][k] == 0:
                p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
                if p is None:
                    return 0
                M[k], M[p] = M[p], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return _exact(det)


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[tuple]:
    """Solve ``A x = b`` exactly.

    Returns ``None`` when the system is inconsistent.  Free variables are set
    to zero, so the answer is supported on the leftmost pivot columns.
    """
    m = len(A)
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    n = len(A[0]) if A else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = _rref(aug, n + 1)
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = R[i][n]
    # A pivot in the augmented column can only appear after the real ones.
    for i in range(len(pivots), m):
        if R[i][n] != 0:
            return None
    return tuple(_exact(v) for v in x)


def rational_inverse(A: Sequence[Sequence]) -> tuple:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(_exact(x) for x in R[i][n:]) for i in range(n))


def rational_nullspace(A: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of the rational kernel, one vector per free column."""
    if not A:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    R, pivots = _rref(A, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(tuple(v))
    return basis


# ------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == D`` with ``D`` diagonal and d1 | d2 | ..."""

    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self) -> tuple:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(self.D[i][i] for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: the leftmost column of the active block that has a nonzero
    entry, and in it the entry of smallest absolute value (topmost on ties).
    """
    M = [list(map(int, row)) for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in M:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        col = next((c for c in range(t, n) if any(M[i][c] for i in range(t, m))), None)
        if col is None:
            break
        if col != t:
            swap_cols(t, col)
        while True:
            # bring smallest nonzero of column t (active rows) to the pivot
            best = min(
                (i for i in range(t, m) if M[i][t]),
                key=lambda i: (abs(M[i][t]), i),
            )
            if best != t:
                swap_rows(t, best)
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    add_row(i, t, -q)
                    if M[i][t]:
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    add_col(j, t, -q)
                    if M[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder sits in row t; move it into column t
                j = min(
                    (j for j in range(t + 1, n) if M[t][j]),
                    key=lambda j: (abs(M[t][j]), j),
                )
                swap_cols(t, j)
                continue
            # pivot isolated; enforce divisibility on the remaining block
            bad = next(
                (i for i in range(t + 1, m) if any(M[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithDecomposition(
        U=tuple(map(tuple, U)), D=tuple(map(tuple, M)), V=tuple(map(tuple, V))
    )


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns only the nonzero rows.  Pivots are positive and entries above a
    pivot are reduced into ``[0, pivot)``; the result is a canonical basis of
    the row lattice.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return ()
    n = len(M[0])
    out_rows = []
    r = 0
    for c in range(n):
        active = [i for i in range(r, len(M)) if M[i][c]]
        if not active:
            continue
        while True:
            active = [i for i in range(r, len(M)) if M[i][c]]
            piv = min(active, key=lambda i: (abs(M[i][c]), i))
            M[r], M[piv] = M[piv], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        out_rows.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r])


def integer_kernel_basis(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple:
    """Saturated basis of ``{x in Z^n : A x = 0}`` as the columns of a matrix.

    The basis is put in Hermite normal form (as rows of the transpose) so it
    does not depend on elimination details.  A matrix with zero columns is
    returned for an injective map.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    if m == 0:
        vecs = list(identity(n))
    else:
        snf = smith_normal_form(A)
        r = snf.rank
        vecs = [tuple(snf.V[i][j] for i in range(n)) for j in range(r, n)]
    vecs = list(hermite_normal_form(vecs)) if vecs else []
    return tuple(tuple(v[i] for v in vecs) for i in range(n))


def kernel_vectors(K: Sequence[Sequence[int]]) -> list[tuple]:
    """Columns of a kernel matrix as a list of tuples."""
    if not K or not K[0]:
        return []
    return [tuple(row[j] for row in K) for j in range(len(K[0]))]


def lattice_index(vectors: Sequence[Sequence[int]], dim: int) -> int:
    """Index in ``Z^dim`` of the lattice generated by ``vectors``.

    Returns 0 when they do not span ``Q^dim``.
    """
    if not vectors:
        return 0 if dim else 1
    # columns are the vectors
    A = tuple(tuple(v[i] for v in vectors) for i in range(dim))
    diag = smith_normal_form(A).diagonal
    if len(diag) < dim or any(d == 0 for d in diag[:dim]):
        return 0
    out = 1
    for d in diag[:dim]:
        out *= d
    return out


# ------------------------------------------------------------- feasibility


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.feasible


def rational_feasible(
    strict: Sequence[Sequence], nonstrict: Sequence[Sequence] = (), dim: Optional[int] = None
) -> FeasibilityResult:
    """Is there ``x`` with ``<g,x> > 0`` for every strict ``g`` and ``<h,x> >= 0``
    for every nonstrict ``h``?

    The system is homogeneous, so strict rows are rescaled to ``<g,x> >= 1``.
    Small dimensions use Fourier-Motzkin elimination; larger ones use an exact
    two-phase simplex.  The returned witness is exact.
    """
    vecs = list(strict) + list(nonstrict)
    if dim is None:
        if not vecs:
            raise ValueError("ambient dimension unknown")
        dim = len(vecs[0])
    for v in vecs:
        if len(v) != dim:
            raise ValueError("vectors of different lengths")
    if not strict:
        return FeasibilityResult(True, tuple([0] * dim))
    cons = [(primitive(g), 1) for g in strict] + [(primitive(h), 0) for h in nonstrict]
    cons = [(a, b) for a, b in cons if any(a) or b > 0]
    if any(not any(a) for a, _ in cons):
        return FeasibilityResult(False)
    x = _fourier_motzkin(cons, dim) if dim <= FM_DIMENSION_LIMIT else _FM_GAVE_UP
    if x is _FM_GAVE_UP:
        x = _simplex_feasible(cons, dim)
    if x is None:
        return FeasibilityResult(False)
    x = tuple(_exact(v) for v in x)
    for g in strict:
        assert dot(g, x) > 0
    for h in nonstrict:
        assert dot(h, x) >= 0
    return FeasibilityResult(True, x)


def _normalize(a: tuple, b) -> tuple:
    """Scale a constraint a.x >= b to coprime integers (positive factor)."""
    den = 1
    for x in (*a, b):
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    ai = [int(x * den) for x in a]
    bi = int(b * den)
    g = 0
    for x in ai:
        g = gcd(g, x)
    g = gcd(g, bi) if g else abs(bi)
    if g > 1:
        ai = [x // g for x in ai]
        bi //= g  # exact: g divides bi
    return tuple(ai), bi


_FM_GAVE_UP = object()
FM_PAIR_LIMIT = 20000


def _fourier_motzkin(cons, dim):
    """Eliminate variables last to first, keeping every stage for back-substitution.

    Gives up (returning a sentinel) when one elimination step would combine
    more than ``FM_PAIR_LIMIT`` pairs.
    """
    current = {_normalize(a, b) for a, b in cons}
    stages = []
    for k in range(dim - 1, -1, -1):
        stages.append(current)
        pos, neg, rest = [], [], set()
        for a, b in current:
            if a[k] > 0:
                pos.append((a, b))
            elif a[k] < 0:
                neg.append((a, b))
            else:
                rest.add((a, b))
        if len(pos) * len(neg) > FM_PAIR_LIMIT:
            return _FM_GAVE_UP
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = -an[k], ap[k]
                a = tuple(fp * x + fn * y for x, y in zip(ap, an))
                b = fp * bp + fn * bn
                rest.add(_normalize(a, b))
        current = set()
        for a, b in rest:
            if not any(a):
                if b > 0:
                    return None
                continue
            current.add((a, b))
    x = [Fraction(0)] * dim
    for k in range(dim):
        stage = stages[dim - 1 - k]
        lo = hi = None
        for a, b in stage:
            if a[k] == 0 or any(a[j] for j in range(k + 1, dim)):
                continue
            val = Fraction(b - sum(a[j] * x[j] for j in range(k)), a[k])
            if a[k] > 0:
                lo = val if lo is None or val > lo else lo
            else:
                hi = val if hi is None or val < hi else hi
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution failed")
        if lo is not None:
            x[k] = lo
        elif hi is not None:
            x[k] = min(hi, Fraction(0))
        else:
            x[k] = Fraction(0)
    return x


def _simplex_feasible(cons, dim):
    """Decide ``a.x >= b`` (b in {0, 1}) through the transposed system.

    By Gordan's alternative the constraints are infeasible exactly when some
    ``lam >= 0`` with ``sum(lam over b == 1 rows) == 1`` has
    ``sum(lam_i a_i) == 0``.  That phase-one problem has only ``dim + 1``
    rows.  It is solved with an integer fraction-free tableau and Bland's
    rule; when its optimum is positive the final dual values give ``x``.
    """
    m = len(cons)
    rows = dim + 1
    ncols = m + rows  # lambda columns, then artificials
    # tableau entries are actual_value * D
    M = []
    for k in range(dim):
        M.append([a[k] for a, _ in cons] + [1 if j == k else 0 for j in range(rows)] + [0])
    M.append([1 if b else 0 for _, b in cons] + [1 if j == dim else 0 for j in range(rows)] + [1])
    obj = [-sum(M[i][j] for i in range(rows)) for j in range(m)] + [0] * rows + [-1]
    basis = [m + i for i in range(rows)]
    D = 1
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            piv = M[i][enter]
            if piv > 0:
                # compare rhs_i / piv lexicographically with (ratio, basis index)
                if best is None:
                    best = i
                else:
                    lhs = M[i][-1] * M[best][enter]
                    rhs = M[best][-1] * piv
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                        best = i
        if best is None:
            raise AssertionError("phase-one objective unbounded")
        r = best
        p = M[r][enter]
        pr = M[r]
        for i in range(rows):
            if i == r:
                continue
            f = M[i][enter]
            row = M[i]
            if f:
                M[i] = [(x * p - f * y) // D for x, y in zip(row, pr)]
            elif p != D:
                M[i] = [(x * p) // D for x in row]
        f = obj[enter]
        obj = [(x * p - f * y) // D for x, y in zip(obj, pr)]
        D = p
        basis[r] = enter
    if obj[-1] == 0:
        return None
    # reduced cost of artificial k is 1 - y_k; the witness is -y_x / y_last
    y = [1 - Fraction(obj[m + k], D) for k in range(rows)]
    return [-v / y[dim] for v in y[:dim]]


# ------------------------------------------------------ double description


@dataclass(frozen=True)
class ConeRays:
    """Minimal description of ``{x : A x >= 0}``: extreme rays plus lineality."""

    rays: tuple
    lineality: tuple


def extreme_rays(rows: Sequence[Sequence], dim: int) -> ConeRays:
    """Extreme rays of ``{x in Q^dim : <a,x> >= 0 for every row a}``.

    The lineality space is split off first; rays are returned inside its
    orthogonal complement, so they are canonical up to positive scaling.
    Rays come back primitive and sorted, the lineality basis in Hermite
    normal form.
    """
    A = []
    seen = set()
    for r in rows:
        if len(r) != dim:
            raise ValueError("row length differs from dimension")
        p = primitive(r)
        if any(p) and p not in seen:
            seen.add(p)
            A.append(p)
    if not A:
        return ConeRays((), tuple(identity(dim)) if dim else ())
    lin = kernel_vectors(integer_kernel_basis(A, dim))
    # Row space basis (leftmost independent rows) parametrises L^perp.
    B = _independent_rows(A)
    k = len(B)
    # constraints in z coordinates: x = B^T z
    M = [tuple(dot(a, b) for b in B) for a in A]
    zrays = _dd_pointed(M, k)
    rays = set()
    for z in zrays:
        x = [sum(z[i] * B[i][j] for i in range(k)) for j in range(dim)]
        rays.add(primitive(x))
    return ConeRays(tuple(sorted(rays)), tuple(lin))


def _independent_rows(A):
    chosen = []
    for a in A:
        if rank(chosen + [a]) > len(chosen):
            chosen.append(a)
    return chosen


def _dd_pointed(M, k):
    """Double description for a pointed cone ``{z : M z >= 0}`` of full rank k."""
    m = len(M)
    order = sorted(range(m), key=lambda i: M[i])
    # initial simplex cone from k independent rows
    init = []
    for i in order:
        if rank([M[j] for j in init] + [M[i]]) > len(init):
            init.append(i)
            if len(init) == k:
                break
    Binv = rational_inverse([M[i] for i in init])
    rays = []  # list of (vector, zero-set bitmask)
    for j in range(k):
        v = primitive([Binv[i][j] for i in range(k)])
        zero = 0
        for t, i in enumerate(init):
            if t != j:
                zero |= 1 << i
        rays.append((v, zero))
    done = set(init)
    for i in order:
        if i in done:
            continue
        done.add(i)
        a = M[i]
        bit = 1 << i
        vals = [dot(a, v) for v, _ in rays]
        pos = [t for t, s in enumerate(vals) if s > 0]
        neg = [t for t, s in enumerate(vals) if s < 0]
        if not neg:
            rays = [(v, z | bit) if vals[t] == 0 else (v, z) for t, (v, z) in enumerate(rays)]
            continue
        new = []
        zsets = [z for _, z in rays]
        for p in pos:
            vp, zp = rays[p]
            for q in neg:
                vq, zq = rays[q]
                common = zp & zq
                if bin(common).count("1") < k - 2:
                    continue
                adjacent = True
                for t, zt in enumerate(zsets):
                    if t != p and t != q and (zt & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sq = vals[p], vals[q]
                w = primitive([sp * y - sq * x for x, y in zip(vp, vq)])
                new.append((w, common | bit))
        kept = []
        for t, (v, z) in enumerate(rays):
            if vals[t] > 0:
                kept.append((v, z))
            elif vals[t] == 0:
                kept.append((v, z | bit))
        rays = kept + new
    return [v for v, _ in rays]

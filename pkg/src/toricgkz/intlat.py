"""Exact integer linear algebra, polytopes, cones and relation lattices.

Vectors and matrices are plain tuples of Python ints (arbitrary precision),
kept immutable.  Canonical forms go through the row Hermite normal form so
lattice comparisons are plain equality of canonical bases.
"""

from fractions import Fraction
from math import gcd

from . import exactlp
from .errors import (
    BraneOutsideSupport,
    DegenerateBrane,
    InconsistentInput,
    InvalidInput,
    UnsupportedWeights,
)


def ivec(v):
    return tuple(int(x) for x in v)


def imat(rows):
    rows = tuple(ivec(r) for r in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInput("ragged matrix")
    return rows


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a, c):
    return tuple(c * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def mat_vec(rows, v):
    return tuple(dot(r, v) for r in rows)


def transpose(rows):
    if not rows:
        return ()
    return tuple(tuple(r[j] for r in rows) for j in range(len(rows[0])))


def primitive(v):
    """Divide out the gcd, keeping the first nonzero entry's sign."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        return ivec(v)
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# Hermite normal form and kernels
# ---------------------------------------------------------------------------

def hnf(rows):
    """Row Hermite normal form (pivots positive, entries above reduced).

    Returns the canonical basis of the row lattice, with zero rows dropped.
    """
    rows = [list(r) for r in imat(rows)]
    if not rows:
        return ()
    m, n = len(rows), len(rows[0])
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        # clear the column below the pivot by gcd steps
        for i in range(r + 1, m):
            while rows[i][col] != 0:
                q = rows[r][col] // rows[i][col]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[i])]
                rows[r], rows[i] = rows[i], rows[r]
        if rows[r][col] < 0:
            rows[r] = [-a for a in rows[r]]
        for i in range(r):
            q = rows[i][col] // rows[r][col]
            if q != 0:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in rows[:r] if any(row))


def hnf_with_transform(rows):
    """Return (H, U) with U unimodular, U*rows = H-with-zero-rows.

    H keeps its zero rows here so U's trailing rows span the left kernel.
    """
    rows = [list(r) for r in imat(rows)]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            while rows[i][col] != 0:
                q = rows[r][col] // rows[i][col]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                rows[r], rows[i] = rows[i], rows[r]
                U[r], U[i] = U[i], U[r]
        if rows[r][col] < 0:
            rows[r] = [-a for a in rows[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = rows[i][col] // rows[r][col]
            if q != 0:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    H = tuple(tuple(row) for row in rows)
    return H, tuple(tuple(u) for u in U)


def lattices_equal(basis_a, basis_b):
    """Lattice equality via canonical HNF bases."""
    return hnf(basis_a) == hnf(basis_b)


def solve_integer(basis, v):
    """Solve x * basis = v over Z; returns tuple or None.

    basis rows need not be in HNF; uses HNF back-substitution.
    """
    H, U = hnf_with_transform(basis)
    rank = sum(1 for row in H if any(row))
    x = [0] * len(H)
    rem = list(v)
    for i in range(rank):
        row = H[i]
        col = next(j for j, a in enumerate(row) if a != 0)
        if rem[col] % row[col] != 0:
            return None
        c = rem[col] // row[col]
        x[i] = c
        rem = [a - c * b for a, b in zip(rem, row)]
    if any(rem):
        return None
    # x solves x*H = v; convert back through U
    out = [0] * len(U)
    for i, c in enumerate(x):
        if c:
            for j, u in enumerate(U[i]):
                out[j] += c * u
    return tuple(out)


def solve_rational(rows, rhs):
    """Solve rows^T * x = rhs over Q (rows = list of vectors, x per row).

    Returns tuple of Fractions or None when inconsistent.
    """
    m = len(rows)
    if m == 0:
        return () if not any(rhs) else None
    n = len(rows[0])
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(rhs[j])]
           for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [a / pv for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    return tuple(x)


# ---------------------------------------------------------------------------
# Relation lattices
# ---------------------------------------------------------------------------

class RelationLattice:
    """Z-basis of a saturated integer kernel, HNF-canonicalized."""

    def __init__(self, basis, canonical=True):
        self.basis = imat(basis)
        self.canonical = canonical

    @property
    def rank(self):
        return len(self.basis)

    def contains(self, v):
        return solve_integer(self.basis, ivec(v)) is not None

    def coordinates(self, v):
        """Integer coordinates of v in this basis, or None."""
        return solve_integer(self.basis, ivec(v))

    def __eq__(self, other):
        if isinstance(other, RelationLattice):
            other = other.basis
        return lattices_equal(self.basis, other)

    def __repr__(self):
        return f"RelationLattice(rank={self.rank}, basis={list(self.basis)})"


def kernel_basis(columns):
    """Saturated integer kernel of the matrix with the given columns.

    Returns the lattice {l : sum_i l_i * columns[i] = 0} with an
    HNF-canonical basis.  Lattice equality, not basis equality, is the
    contract for comparisons.
    """
    columns = imat(columns)
    if not columns:
        raise InvalidInput("kernel_basis needs at least one column")
    H, U = hnf_with_transform(columns)
    ker = [U[i] for i in range(len(H)) if not any(H[i])]
    return RelationLattice(hnf(ker) if ker else ())


def lift(points):
    """Lift points v to (1, v)."""
    return tuple((1,) + ivec(p) for p in points)


# ---------------------------------------------------------------------------
# Polytopes and branes
# ---------------------------------------------------------------------------

class Polytope:
    """Ordered list of integral points; index 0 is the interior origin.

    Points are never re-sorted or deduplicated: operator indices downstream
    are position sensitive, so duplicates are rejected outright.
    """

    def __init__(self, points, origin_first=True):
        self.points = imat(points)
        if not self.points:
            raise InvalidInput("empty point list")
        self.dim = len(self.points[0])
        if len(set(self.points)) != len(self.points):
            raise InvalidInput("duplicate points in polytope")
        if origin_first and any(self.points[0]):
            raise InvalidInput("point 0 must be the origin")

    def __len__(self):
        return len(self.points)

    def lifted(self):
        return lift(self.points)

    def relation_lattice(self):
        return kernel_basis(self.lifted())

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.points == other.points

    def __repr__(self):
        return f"Polytope(dim={self.dim}, n={len(self.points)})"


def fermat_dual_polytope(weights, extra_points=()):
    """Vertex set of the dual polytope of a Fermat weighted projective P4.

    Requires w[4] == 1 and w_i | sum(w).  Emits the origin, the unit
    vectors, and (-w1,..,-w4); interior-facet points for specific examples
    are supplied by the caller (they ship with the fixtures).
    """
    w = ivec(weights)
    if len(w) != 5:
        raise UnsupportedWeights("expected five weights")
    d = sum(w)
    if w[4] != 1 or any(wi <= 0 or d % wi != 0 for wi in w):
        raise UnsupportedWeights(f"weights {w} are not of Fermat type")
    n = 4
    pts = [tuple([0] * n)]
    for i in range(n):
        pts.append(tuple(1 if j == i else 0 for j in range(n)))
    pts.append(tuple(-w[i] for i in range(n)))
    for p in extra_points:
        pts.append(ivec(p))
    return Polytope(pts)


class BraneData:
    """Toric B-brane vector q with the derived points w0, w1."""

    def __init__(self, q, polytope):
        self.q = ivec(q)
        if len(self.q) != len(polytope):
            raise InvalidInput("brane vector length must match point count")
        if sum(self.q) != 0:
            raise InvalidInput("brane vector entries must sum to zero")
        n = polytope.dim
        shift = tuple(
            sum(self.q[i] * polytope.points[i][k] for i in range(len(self.q)))
            for k in range(n)
        )
        self.w0 = tuple([0] * n + [1])
        self.w1 = shift + (1,)
        if self.w0 == self.w1:
            raise DegenerateBrane("w1 coincides with w0 (sum q_i v_i = 0)")


def enhance_polytope(delta, brane):
    """Enhanced polytope: points (v_i;0) in input order, then w0, w1."""
    pts = [p + (0,) for p in delta.points]
    pts.append(brane.w0)
    pts.append(brane.w1)
    return Polytope(pts)


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

class Cone:
    """Rational polyhedral cone given by primitive integral generators."""

    def __init__(self, generators, dim=None):
        gens = [primitive(g) for g in (ivec(g) for g in generators) if any(g)]
        seen = []
        for g in gens:
            if g not in seen:
                seen.append(g)
        self.generators = tuple(seen)
        if dim is None:
            if not self.generators:
                raise InvalidInput("zero cone needs an explicit dimension")
            dim = len(self.generators[0])
        self.dim = dim
        self.span_basis = None  # set when a dual was computed in a sublattice

    def is_zero(self):
        return not self.generators

    def rank(self):
        return len(hnf(self.generators))

    def contains(self, v):
        """Exact membership of an integer/rational vector."""
        gens = self.generators
        if not gens:
            return not any(v)
        n = len(gens)
        eqs = [([g[k] for g in gens], v[k]) for k in range(self.dim)]
        ges = [([1 if i == j else 0 for i in range(n)], 0) for j in range(n)]
        return exactlp.feasible(n, eqs, ges) is not None

    def __repr__(self):
        return f"Cone(dim={self.dim}, generators={list(self.generators)})"


def is_strongly_convex(cone):
    """True iff cone \\cap -cone = {0}.

    A generated cone fails strong convexity exactly when -g lies back in
    the cone for some generator g.
    """
    for g in cone.generators:
        if cone.contains(tuple(-x for x in g)):
            return False
    return True


def _span_coordinates(generators):
    """Basis of the saturated span lattice and generator coordinates.

    For full-dimensional spans the basis is the ambient standard basis, so
    coordinates coincide with the input vectors.
    """
    d = len(generators[0])
    perp = kernel_basis(transpose(generators)).basis
    if not perp:
        basis = tuple(
            tuple(1 if j == i else 0 for j in range(d)) for i in range(d)
        )
    else:
        basis = kernel_basis(transpose(perp)).basis
    coords = []
    for g in generators:
        c = solve_integer(basis, g)
        if c is None:
            raise InvalidInput("generator escapes the saturated span lattice")
        coords.append(c[: len(basis)])
    return basis, imat(coords)


def dual_cone(cone):
    """Dual cone by facet enumeration, restricted to the span.

    For a full-dimensional cone the result lives in the ambient dual
    lattice.  For lower-dimensional input the dual is computed inside the
    saturated span lattice; the chosen span basis is attached to the
    returned cone as `span_basis`.  The dual of the zero cone is the full
    dual space (generators +-e_i).
    """
    if cone.is_zero():
        full = [tuple(1 if j == i else 0 for j in range(cone.dim))
                for i in range(cone.dim)]
        full += [tuple(-x for x in v) for v in full]
        out = Cone(full, cone.dim)
        return out
    basis, coords = _span_coordinates(cone.generators)
    r = len(basis)
    rays = _dual_extreme_rays(coords, r)
    out = Cone(rays, r) if rays else Cone((), r)
    if r != cone.dim:
        out.span_basis = basis
    return out


def _dual_extreme_rays(gens, r):
    """Extreme rays of {y : <y, g> >= 0 for all g} for full-rank gen span."""
    from itertools import combinations

    if r == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        if len(signs) == 2:
            return []
        s = signs.pop()
        return [(s,)]
    found = []
    for sub in combinations(range(len(gens)), r - 1):
        mat = [gens[i] for i in sub]
        ker = kernel_basis(transpose(mat)).basis if mat else ()
        if len(ker) != 1:
            continue
        y = primitive(ker[0])
        pos = any(dot(y, g) > 0 for g in gens)
        neg = any(dot(y, g) < 0 for g in gens)
        if pos and neg:
            continue
        if neg:
            y = tuple(-v for v in y)
        if y not in found:
            found.append(y)
    return sorted(found)


def extreme_rays(generators, dim=None):
    """Minimal generating set of a pointed cone (drops redundant rays)."""
    cone = Cone(generators, dim)
    keep = []
    gens = list(cone.generators)
    for i, g in enumerate(gens):
        others = Cone([h for j, h in enumerate(gens) if j != i], cone.dim)
        if others.is_zero() or not others.contains(g):
            keep.append(g)
    return sorted(keep)


# ---------------------------------------------------------------------------
# Test-oracle helpers (brute force, small dimensions only)
# ---------------------------------------------------------------------------

def box_lattice_points(radius, dim):
    """All integer points in [-radius, radius]^dim (dim <= 3 oracles)."""
    if dim > 3:
        raise InvalidInput("box enumeration is a dim <= 3 oracle only")
    from itertools import product

    return [tuple(p) for p in product(range(-radius, radius + 1), repeat=dim)]


def _facets(points):
    """Supporting facets of conv(points) by hyperplane subset scan."""
    from itertools import combinations

    pts = imat(points)
    d = len(pts[0])
    facets = []
    seen = set()
    for sub in combinations(range(len(pts)), d):
        base = pts[sub[0]]
        rows = [vec_sub(pts[i], base) for i in sub[1:]]
        ker = kernel_basis(transpose(rows)).basis if rows else ()
        if len(ker) != 1:
            continue
        nrm = primitive(ker[0])
        c = dot(nrm, base)
        vals = [dot(nrm, p) - c for p in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            nrm = tuple(-x for x in nrm)
            c = -c
            vals = [-v for v in vals]
        else:
            continue
        key = (nrm, c)
        if key in seen:
            continue
        seen.add(key)
        facets.append((nrm, c, tuple(i for i, v in enumerate(vals) if v == 0)))
    return facets


def normalized_volume(points):
    """Brute-force normalized volume of conv(points) (test oracle).

    Recursively cones off the first vertex over the opposite facets.
    Exact, exponential in the facet scan; fine at desk dimensions.
    """
    pts = [ivec(p) for p in dict.fromkeys(imat(points))]
    d = len(pts[0])
    basis = hnf([vec_sub(p, pts[0]) for p in pts[1:]])
    if len(basis) < d:
        # flat polytope: compute inside its own lattice
        if not basis:
            return 0
        coords = [solve_integer(basis, vec_sub(p, pts[0])) for p in pts]
        if any(c is None for c in coords):
            raise InvalidInput("points escape their span lattice")
        return normalized_volume([c[: len(basis)] for c in coords])
    if d == 1:
        xs = [p[0] for p in pts]
        return max(xs) - min(xs)
    apex = pts[0]
    total = 0
    for nrm, c, idx in _facets(pts):
        if dot(nrm, apex) == c:
            continue
        fpts = [pts[i] for i in idx]
        fbasis = hnf([vec_sub(p, fpts[0]) for p in fpts[1:]])
        coords = [solve_integer(fbasis, vec_sub(p, fpts[0])) for p in fpts]
        if any(co is None for co in coords):
            raise InvalidInput("facet points escape their span lattice")
        fvol = normalized_volume([co[: len(fbasis)] for co in coords])
        total += fvol * abs(dot(nrm, apex) - c) // _facet_height(nrm)
    return total


def _facet_height(nrm):
    g = 0
    for x in nrm:
        g = gcd(g, abs(x))
    return g if g else 1


def simplex_normalized_volume(vertices):
    """|det| of the edge matrix of a full-dimensional lattice simplex."""
    base = vertices[0]
    rows = [vec_sub(v, base) for v in vertices[1:]]
    return abs(_det(rows))


def _det(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    num = det
    assert num.denominator == 1
    return num.numerator

"""Fans, canonical triangulations, star subdivision at the brane point,
primitive collections, Stanley-Reisner ideals and the two certificates
(semi-positivity, regularity) that the Gamma series construction needs.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import exactlp, intlat
from .errors import BraneOutsideSupport, InconsistentInput, InvalidInput
from .intlat import Cone, dot, solve_rational, transpose, vec_add


class Fan:
    """Simplicial fan: rays (primitive generators) plus maximal cones as
    index sets into the ray list.

    Validation is eager: each maximal cone must have linearly independent
    generators, and pairwise intersections must be common faces (decided by
    an exact separating-functional LP).  Invalid fans are rejected, never
    repaired.
    """

    def __init__(self, rays, max_cones, complete=False, validate=True):
        self.rays = tuple(intlat.ivec(r) for r in rays)
        self.max_cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        self.dim = len(self.rays[0]) if self.rays else 0
        self.complete = complete
        for c in self.max_cones:
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise InconsistentInput("cone index out of range")
        if validate:
            self.validate()

    def cone_generators(self, cone):
        return [self.rays[i] for i in cone]

    def validate(self):
        for c in self.max_cones:
            gens = self.cone_generators(c)
            if len(intlat.hnf(gens)) != len(gens):
                raise InvalidInput(f"cone {c} is not simplicial")
        for a, b in combinations(self.max_cones, 2):
            if not self._faces_properly(a, b):
                raise InvalidInput(f"cones {a} and {b} do not meet in a face")

    def _faces_properly(self, a, b):
        """Separating functional h with h=0 on shared rays, h>=1 / <=-1 on
        the private rays of a / b.  Existence is equivalent to the two
        cones meeting in the face spanned by their common rays.
        """
        common = set(a) & set(b)
        eqs = [(self.rays[i], 0) for i in sorted(common)]
        ges = [(self.rays[i], 1) for i in a if i not in common]
        ges += [(tuple(-x for x in self.rays[i]), 1) for i in b if i not in common]
        return exactlp.feasible(self.dim, eqs, ges) is not None

    def cone_containing(self, v):
        """Smallest cone (as index set) whose span contains v, or None.

        Scans maximal cones; on a hit, returns the support of the
        barycentric coordinates (the carrier face).
        """
        for c in self.max_cones:
            gens = self.cone_generators(c)
            coeffs = solve_rational(gens, v)
            if coeffs is None or any(x < 0 for x in coeffs):
                continue
            return tuple(i for i, x in zip(c, coeffs) if x > 0), coeffs
        return None

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"


@dataclass(frozen=True)
class Triangulation:
    """Simplices as index sets into a polytope's points; each contains the
    origin index 0."""

    simplices: tuple

    def __len__(self):
        return len(self.simplices)


@dataclass(frozen=True)
class MonomialIdeal:
    """Square-free monomial ideal; generators are sorted index sets."""

    generators: tuple

    def __post_init__(self):
        gens = sorted(set(tuple(sorted(g)) for g in self.generators))
        for a, b in combinations(gens, 2):
            if set(a) <= set(b) or set(b) <= set(a):
                raise InvalidInput("monomial ideal generators not minimal")
        object.__setattr__(self, "generators", tuple(gens))


@dataclass(frozen=True)
class PrimitiveRelation:
    """Primitive collection (ray indices of the polytope, 1-based like the
    D variables) together with its integer relation over the lifted
    points, index 0 included."""

    collection: tuple
    relation: tuple

    @property
    def l0(self):
        return self.relation[0]


@dataclass
class Certificate:
    passed: bool
    witness: object = None
    notes: tuple = ()

    def __bool__(self):
        return self.passed


def canonical_triangulation(fan, polytope):
    """One simplex {0} + cone generators per maximal cone.

    Ray vectors must literally occur among the polytope points (the
    operator indexing is position sensitive).
    """
    index_of = {p: i for i, p in enumerate(polytope.points)}
    simplices = []
    for c in fan.max_cones:
        idx = [0]
        for i in c:
            ray = fan.rays[i]
            if ray not in index_of:
                raise InconsistentInput(f"fan ray {ray} is not a polytope point")
            idx.append(index_of[ray])
        simplices.append(tuple(sorted(idx)))
    return Triangulation(tuple(sorted(simplices)))


def enhanced_fan(base, brane):
    """Lift every cone of the complete base fan by the brane ray w1, then
    star-subdivide at w0.  The resulting incomplete fan has ray set equal
    to the nonzero points of the enhanced polytope.
    """
    w0, w1 = brane.w0, brane.w1
    rays = [r + (0,) for r in base.rays] + [w0, w1]
    i_w0 = len(base.rays)
    i_w1 = len(base.rays) + 1
    lifted = [tuple(c) + (i_w1,) for c in base.max_cones]

    def coords_in(cone_idx, v):
        gens = [rays[i] for i in cone_idx]
        return solve_rational(gens, v)

    out = []
    touched = False
    for c in lifted:
        coeffs = coords_in(c, w0)
        if coeffs is None or any(x < 0 for x in coeffs):
            out.append(c)
            continue
        touched = True
        for i, lam in zip(c, coeffs):
            if lam > 0:
                sub = tuple(sorted([j for j in c if j != i] + [i_w0]))
                out.append(sub)
    if not touched:
        raise BraneOutsideSupport("w0 is not in the support of the lifted fan")
    # swap ray list order to polytope order: (v_i;0) ..., w0, w1 already holds
    return Fan(rays, sorted(set(out)))


def primitive_collections(fan):
    """Minimal ray subsets not contained in any maximal cone."""
    n = len(fan.rays)
    cones = [set(c) for c in fan.max_cones]
    collections = []
    for size in range(1, n + 1):
        for sub in combinations(range(n), size):
            s = set(sub)
            if any(s <= c for c in cones):
                continue
            if any(set(p) <= s for p in collections):
                continue
            collections.append(sub)
    return collections


def primitive_relations(fan, polytope):
    """T-primitive relation of every primitive collection.

    The relation balances the sum of the collection's generators against
    the carrier cone of that sum, with an origin entry l_0 making the
    coordinates sum to zero.  Collections whose generator sum leaves the
    fan support are reported via a RelationUndefined note (excluded from
    certificates, not fatal).
    """
    index_of = {p: i for i, p in enumerate(polytope.points)}
    ray_index = []
    for ray in fan.rays:
        if ray not in index_of:
            raise InconsistentInput(f"fan ray {ray} is not a polytope point")
        ray_index.append(index_of[ray])
    rels = []
    undefined = []
    for coll in primitive_collections(fan):
        total = fan.rays[coll[0]]
        for i in coll[1:]:
            total = vec_add(total, fan.rays[i])
        hit = fan.cone_containing(total)
        if hit is None:
            undefined.append(tuple(ray_index[i] for i in coll))
            continue
        carrier, _ = hit
        gens = [fan.rays[i] for i in carrier]
        coeffs = solve_rational(gens, total) if gens else ()
        l = [Fraction(0)] * len(polytope.points)
        for i in coll:
            l[ray_index[i]] += 1
        for i, c in zip(carrier, coeffs):
            l[ray_index[i]] -= c
        den = 1
        for x in l:
            den = den * x.denominator // gcd(den, x.denominator)
        l = [int(x * den) for x in l]
        l[0] = -sum(l)
        rels.append(
            PrimitiveRelation(tuple(ray_index[i] for i in coll), tuple(l))
        )
    return rels, undefined


def check_semipositive(rels, undefined=()):
    """Semi-positivity of c1 holds iff every primitive relation has
    l_0 <= 0."""
    notes = tuple(
        f"collection {u} has no relation inside the support" for u in undefined
    )
    for r in rels:
        if r.l0 > 0:
            return Certificate(False, witness=r, notes=notes)
    return Certificate(True, notes=notes)


def check_regular(rels, lattice, undefined=()):
    """Regularity of the canonical triangulation: the cone spanned by the
    primitive relations, in relation-lattice coordinates, is strongly
    convex."""
    notes = tuple(
        f"collection {u} has no relation inside the support" for u in undefined
    )
    coords = []
    for r in rels:
        c = lattice.coordinates(r.relation)
        if c is None:
            raise InconsistentInput(
                f"primitive relation {r.relation} is not in the lattice"
            )
        coords.append(c)
    if not coords:
        return Certificate(True, notes=notes + ("no relations: vacuous",))
    cone = Cone(coords, len(coords[0]))
    if intlat.is_strongly_convex(cone):
        return Certificate(True, witness=dual_cone_generators(rels, lattice), notes=notes)
    return Certificate(False, witness=cone, notes=notes)


def dual_cone_generators(rels, lattice):
    """Minimal generators of C(T)^vee among the primitive relations,
    reported as full-length relation vectors."""
    coords = [lattice.coordinates(r.relation) for r in rels]
    keep = intlat.extreme_rays(coords, len(coords[0])) if coords else []
    out = []
    for c in keep:
        v = [0] * len(rels[0].relation)
        for m, row in zip(c, lattice.basis):
            for j, x in enumerate(row):
                v[j] += m * x
        out.append(tuple(v))
    return sorted(out)


def sr_ideal(fan):
    """Stanley-Reisner ideal: primitive collections as square-free
    monomials in the ray variables D_1..D_p (1-based, matching the
    polytope position of each ray when rays follow polytope order)."""
    gens = [tuple(i + 1 for i in coll) for coll in primitive_collections(fan)]
    return MonomialIdeal(tuple(gens))


def fan_volume(fan):
    """Sum of the |det| normalized volumes of the maximal cones."""
    total = 0
    for c in fan.max_cones:
        gens = fan.cone_generators(c)
        total += abs(intlat._det(gens))
    return total

"""Exact arithmetic in the nilpotent quotient ring Q[D_0..D_p]/J.

J is generated by the Stanley-Reisner monomials together with the linear
forms coming from the lifted points.  The linear forms are eliminated
first (dependent D's become combinations of a few free generators E_i);
the rewritten monomial generators are then homogeneous, so the quotient is
graded and normal forms reduce to one linear solve per degree.  Everything
is over Q; no floating point.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import InvalidInput, NonArtinian, NotAUnit
from .intlat import lift, transpose

_MAX_DEGREE = 64


def _monomials_of_degree(nvars, d):
    """Degree-d exponent tuples in ascending lex order.

    Ascending order makes the graded row reduction pivot away the
    lex-smallest monomials, so the surviving (standard) monomials are the
    greedy lex-largest choices: E1^2, E1*E2 rather than E2^2.
    """
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


class RingElement:
    """Element of a DivisorRing in normal form: dict basis monomial -> Q."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = {e: c for e, c in coeffs.items() if c != 0}

    def _check(self, other):
        if self.ring is not other.ring:
            raise InvalidInput("ring elements from different rings")

    def is_zero(self):
        return not self.coeffs

    def constant_term(self):
        return self.coeffs.get((0,) * self.ring.num_free, Fraction(0))

    def coefficient(self, monomial):
        return self.coeffs.get(tuple(monomial), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElement(
                self.ring, {e: c * other for e, c in self.coeffs.items()}
            )
        self._check(other)
        out = {}
        table = self.ring._mult_table
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                prod = table[(e1, e2)]
                c = c1 * c2
                for e, v in prod.items():
                    s = out.get(e, Fraction(0)) + c * v
                    if s == 0:
                        out.pop(e, None)
                    else:
                        out[e] = s
        return RingElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
            if out.is_zero():
                break
        return out

    def inverse(self):
        """Exact inverse by a geometric series in the nilpotent part."""
        c0 = self.constant_term()
        if c0 == 0:
            raise NotAUnit("constant term is zero")
        nil = self - c0
        inv_c0 = Fraction(1) / c0
        out = self.ring.const(inv_c0)
        term = self.ring.const(inv_c0)
        while True:
            term = term * nil * (-inv_c0)
            if term.is_zero():
                break
            out = out + term
        return out

    def degree_part(self, d):
        return RingElement(
            self.ring, {e: c for e, c in self.coeffs.items() if sum(e) == d}
        )

    def max_degree(self):
        return max((sum(e) for e in self.coeffs), default=-1)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, key=lambda m: (sum(m), tuple(-x for x in m))):
            c = self.coeffs[e]
            m = self.ring.monomial_name(e)
            if m == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append(f"-{m}")
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class DivisorRing:
    """Q[D_0..D_p] / (linear forms + Stanley-Reisner), Artinian.

    free_vars holds the indices of the representative variables E_1..E_r;
    expressions maps every D_i to its vector of E-coefficients.  The basis
    is collected greedily in (degree, descending-lex) order, so for the
    enhanced quintic it reproduces {1, E1, E2, E1^2, E1*E2, ...}.
    """

    def __init__(self, points, sr, free_names=None):
        lifted = lift(points.points)
        p1 = len(lifted)
        rows = transpose(lifted)  # one linear form per lifted coordinate
        if len(intlat_rank(rows)) != len(rows):
            raise InvalidInput("linear relations are not of full rank")
        self.num_vars = p1
        self.sr = sr
        self.free_vars, self.expressions = _eliminate(rows, p1)
        self.num_free = len(self.free_vars)
        if free_names is None:
            free_names = tuple(f"E{i + 1}" for i in range(self.num_free))
        self.free_names = tuple(free_names)
        gens = [self._rewrite_monomial(g) for g in sr.generators]
        self.rewritten_generators = tuple(gens)
        self.basis, self._reducers = _graded_basis(gens, self.num_free)
        self.length = len(self.basis)
        self._basis_index = {e: i for i, e in enumerate(self.basis)}
        self._mult_table = self._build_mult_table()

    # -- construction helpers ---------------------------------------------

    def _rewrite_monomial(self, gen):
        """Square-free D-monomial (1-based index set) -> poly in the E's,
        as dict exponent-tuple -> Fraction."""
        poly = {(0,) * self.num_free: Fraction(1)}
        for i in gen:
            poly = _poly_mul(poly, self.d_class_poly(i), self.num_free)
        return poly

    def d_class_poly(self, i):
        """D_i as a linear polynomial dict in the free E variables."""
        out = {}
        for j, c in enumerate(self.expressions[i]):
            if c:
                e = tuple(1 if k == j else 0 for k in range(self.num_free))
                out[e] = c
        return out

    def d_class(self, i):
        return self.normal_form_poly(self.d_class_poly(i))

    def _build_mult_table(self):
        table = {}
        for e1 in self.basis:
            for e2 in self.basis:
                prod = {tuple(a + b for a, b in zip(e1, e2)): Fraction(1)}
                table[(e1, e2)] = self.normal_form_poly(prod).coeffs
        return table

    # -- element constructors ----------------------------------------------

    def const(self, c):
        c = Fraction(c)
        if c == 0:
            return RingElement(self, {})
        return RingElement(self, {(0,) * self.num_free: c})

    def zero(self):
        return self.const(0)

    def one(self):
        return self.const(1)

    def gen(self, j):
        """The j-th free generator E_{j+1}."""
        e = tuple(1 if k == j else 0 for k in range(self.num_free))
        return self.normal_form_poly({e: Fraction(1)})

    def normal_form_poly(self, poly):
        """Normal form of a raw polynomial dict in the free variables."""
        by_deg = {}
        for e, c in poly.items():
            by_deg.setdefault(sum(e), {})[e] = c
        out = {}
        for d, part in by_deg.items():
            reducer = self._reducers.get(d)
            if reducer is None:
                continue  # beyond the socle: everything reduces to zero
            monos, mat = reducer
            for e, c in part.items():
                for be, bc in mat[monos[e]].items():
                    s = out.get(be, Fraction(0)) + c * bc
                    if s == 0:
                        out.pop(be, None)
                    else:
                        out[be] = s
        return RingElement(self, out)

    def monomial_name(self, e):
        if not any(e):
            return "1"
        return "*".join(
            f"{self.free_names[i]}^{k}" if k > 1 else self.free_names[i]
            for i, k in enumerate(e)
            if k
        )

    def basis_names(self):
        return tuple(self.monomial_name(e) for e in self.basis)

    def c1(self):
        """Sum of all ray classes D_1 + .. + D_p, reduced."""
        total = {}
        for i in range(1, self.num_vars):
            for e, c in self.d_class_poly(i).items():
                total[e] = total.get(e, Fraction(0)) + c
        return self.normal_form_poly(total)

    def __repr__(self):
        return (
            f"DivisorRing(free={list(self.free_names)}, length={self.length})"
        )


def intlat_rank(rows):
    from .intlat import hnf

    return hnf(rows)


def _poly_mul(a, b, nvars):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, Fraction(0)) + c1 * c2
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _eliminate(rows, nvars):
    """Pick free variables and express every D_i in them.

    Pivot rule: D_0 is always eliminated first (it is the anticanonical
    class, determined by the rays), then greedily from the largest index
    down, skipping columns already dependent on the chosen ones.  This
    keeps the smallest index of each symmetric ray class free and
    reproduces E1=D_1, E2=D_5 for the quintic and E=D_1 for P4.
    """
    cols = [tuple(r[i] for r in rows) for i in range(nvars)]
    rank = len(intlat_rank(rows))
    dependent = [0]
    for i in range(nvars - 1, 0, -1):
        if len(dependent) == rank:
            break
        trial = [cols[j] for j in dependent] + [cols[i]]
        if len(intlat_rank(trial)) == len(trial):
            dependent.append(i)
    dependent = sorted(dependent)
    free = [i for i in range(nvars) if i not in dependent]

    # solve for the dependent columns over Q: for each free var j, express
    # the dependents when E_j = 1 and the other free vars vanish
    m = len(rows)
    expressions = {i: None for i in range(nvars)}
    for k, j in enumerate(free):
        expressions[j] = tuple(
            Fraction(1) if t == k else Fraction(0) for t in range(len(free))
        )
    # dependent part: solve A_dep * x = -A_free * e_j for each free j
    import itertools

    dep_cols = [cols[i] for i in dependent]
    sols = []
    for j in free:
        rhs = tuple(-Fraction(rows[r][j]) for r in range(m))
        sol = _solve_columns(dep_cols, rhs)
        if sol is None:
            raise InvalidInput("elimination failed (inconsistent relations)")
        sols.append(sol)
    for t, i in enumerate(dependent):
        expressions[i] = tuple(sols[k][t] for k in range(len(free)))
    return tuple(free), expressions


def _solve_columns(cols, rhs):
    """Solve sum_i x_i * cols[i] = rhs over Q (least structure, exact)."""
    m = len(rhs)
    n = len(cols)
    aug = [[Fraction(cols[j][r]) for j in range(n)] + [Fraction(rhs[r])]
           for r in range(m)]
    piv = []
    r = 0
    for c in range(n):
        i = next((k for k in range(r, m) if aug[k][c] != 0), None)
        if i is None:
            continue
        aug[r], aug[i] = aug[i], aug[r]
        pv = aug[r][c]
        aug[r] = [a / pv for a in aug[r]]
        for k in range(m):
            if k != r and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[r])]
        piv.append(c)
        r += 1
    for k in range(r, m):
        if aug[k][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = aug[i][n]
    return x


def _graded_basis(gens, nvars):
    """Greedy monomial basis and per-degree reduction matrices.

    For each degree d the span H_d of {monomial * generator} is row
    reduced; every degree-d monomial is then rewritten as a combination of
    the chosen (independent) basis monomials.  Iteration stops at the
    first empty degree, which for a graded ideal kills all higher degrees.
    """
    basis = []
    reducers = {}
    for d in range(_MAX_DEGREE + 1):
        monos = _monomials_of_degree(nvars, d)
        index = {e: i for i, e in enumerate(monos)}
        rows = []
        for g in gens:
            gd = max(sum(e) for e in g)
            if gd > d:
                continue
            for shift in _monomials_of_degree(nvars, d - gd):
                row = [Fraction(0)] * len(monos)
                for e, c in g.items():
                    row[index[tuple(a + b for a, b in zip(e, shift))]] += c
                rows.append(row)
        # row reduce H_d; record pivot columns
        pivots = {}
        r = 0
        for c in range(len(monos)):
            i = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
            if i is None:
                continue
            rows[r], rows[i] = rows[i], rows[r]
            pv = rows[r][c]
            rows[r] = [a / pv for a in rows[r]]
            for k in range(len(rows)):
                if k != r and rows[k][c] != 0:
                    f = rows[k][c]
                    rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
            pivots[c] = r
            r += 1
        standard = [monos[c] for c in range(len(monos)) if c not in pivots]
        if not standard:
            break
        basis.extend(sorted(standard, reverse=True))
        # reduction map: monomial -> dict(basis monomial -> coefficient)
        mat = {}
        std_index = {e: e for e in standard}
        for c, e in enumerate(monos):
            if c not in pivots:
                mat[c] = {e: Fraction(1)}
            else:
                row = rows[pivots[c]]
                mat[c] = {
                    monos[c2]: -row[c2]
                    for c2 in range(len(monos))
                    if c2 not in pivots and row[c2] != 0
                }
        reducers[d] = (index, mat)
    else:
        raise NonArtinian(
            f"quotient still nonzero at degree {_MAX_DEGREE}; fan cones do "
            "not cover enough directions"
        )
    return tuple(basis), reducers


def build_quotient(points, sr, free_names=None):
    """Build the divisor ring from a polytope and its SR ideal."""
    return DivisorRing(points, sr, free_names)


def invert_unit(x):
    """Exact inverse of a unit (geometric series in the nilpotent part)."""
    return x.inverse()

"""GKZ box and Euler operators, theta-form rewriting, the deformed Gamma
series with divisor-ring coefficients, recurrence verification, component
extraction, the c1 filter and the mirror map.

Conventions (pinned by the worked quintic fixtures):

* A moduli chart stores a Z-basis l~(1)..l~(r) of the relation lattice and
  one sign per coordinate.  The default sign is (-1)**l0 of the basis
  vector, the classical choice x_k = (-1)**l0 * a**l(k); fixture charts may
  override it to match printed coordinates.
* theta_form produces  P(theta) - sign**delta * x**delta * N(theta)  from
  the box operator of l, where delta are the chart coordinates of l.  With
  default signs this reproduces the printed quintic operator
  Theta^5 - x*prod(5*Theta+i).
* gamma_series stores, for each multi-index m >= 0, the normalized ratio
  B(l(m))/B(0) of deformed Gamma coefficients, multiplied by the sign
  twist prod_k (sign_k * (-1)**l0(k))**m_k.  All Gamma ratios reduce to
  rising/falling factorials in nilpotent divisor classes; transcendental
  factors cancel identically and are never represented.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import intlat
from .errors import (
    ChartMismatch,
    InvalidInput,
    NotARelation,
    NotAUnit,
    NotUnimodular,
)
from .nilring import RingElement, invert_unit

# ---------------------------------------------------------------------------
# theta polynomials: dict {exponent tuple over chart coordinates: Fraction}
# ---------------------------------------------------------------------------

def _tp_const(rank, c):
    c = Fraction(c)
    return {(0,) * rank: c} if c else {}


def _tp_add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, Fraction(0)) + c
        if s == 0:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _tp_scale(a, c):
    c = Fraction(c)
    return {e: c * v for e, v in a.items()} if c else {}


def _tp_mul(a, b):
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


def _tp_shift(a, gamma):
    """Substitute theta_k -> theta_k + gamma_k."""
    rank = len(gamma)
    out = {}
    for e, c in a.items():
        term = _tp_const(rank, c)
        for k, ek in enumerate(e):
            lin = {(0,) * rank: Fraction(gamma[k])}
            unit = tuple(1 if j == k else 0 for j in range(rank))
            lin[unit] = Fraction(1)
            if lin[(0,) * rank] == 0:
                del lin[(0,) * rank]
            for _ in range(ek):
                term = _tp_mul(term, lin)
        out = _tp_add(out, term)
    return out


def _tp_subs_linear(a, rows):
    """Substitute theta_j -> sum_k rows[j][k] * theta'_k."""
    rank_new = len(rows[0]) if rows else 0
    out = {}
    for e, c in a.items():
        term = _tp_const(rank_new, c)
        for j, ej in enumerate(e):
            lin = {}
            for k, coef in enumerate(rows[j]):
                if coef:
                    unit = tuple(1 if t == k else 0 for t in range(rank_new))
                    lin[unit] = Fraction(coef)
            for _ in range(ej):
                term = _tp_mul(term, lin)
        out = _tp_add(out, term)
    return out


def _tp_eval(a, args, ring):
    """Evaluate at ring elements (the arguments commute)."""
    total = ring.zero()
    pows = [[ring.one()] for _ in args]
    for e, c in a.items():
        term = ring.const(c)
        for k, ek in enumerate(e):
            if ek == 0:
                continue
            cache = pows[k]
            while len(cache) <= ek:
                cache.append(cache[-1] * args[k])
            term = term * cache[ek]
        total = total + term
    return total


def _tp_str(a, names):
    if not a:
        return "0"
    parts = []
    for e in sorted(a, key=lambda m: (sum(m), m), reverse=True):
        c = a[e]
        mono = "*".join(
            f"{names[k]}^{x}" if x > 1 else names[k]
            for k, x in enumerate(e)
            if x
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

class BoxOperator:
    """GKZ box operator of a relation vector, in the D_l-tilde form with the
    a_0 factors shifted (j runs from 1 for index 0, from 0 otherwise)."""

    def __init__(self, relation, points):
        self.relation = intlat.ivec(relation)
        lifted = points.lifted() if hasattr(points, "lifted") else intlat.imat(points)
        if len(self.relation) != len(lifted):
            raise NotARelation("relation length does not match point count")
        for k in range(len(lifted[0])):
            if sum(self.relation[i] * lifted[i][k] for i in range(len(lifted))) != 0:
                raise NotARelation(f"{self.relation} is not a lattice relation")
        if not any(self.relation):
            raise InvalidInput("zero relation gives the zero operator")

    def __str__(self):
        l = self.relation
        pos, neg = [], []
        for i, li in enumerate(l):
            if li > 0:
                pos.append(f"(d/da_{i})^{li}")
            elif li < 0:
                neg.append(f"(d/da_{i})^{-li}")
        mono = "*".join(
            f"a_{i}^{li}" for i, li in enumerate(l) if li != 0
        )
        return f"{'*'.join(pos) or '1'} - a^l*{'*'.join(neg) or '1'}   [a^l = {mono}]"

    __repr__ = __str__


@dataclass(frozen=True)
class EulerOperator:
    """First-order Euler operator sum_i coeff_i * a_i d/da_i (+ brane
    weight on b1) minus beta_k."""

    index: int
    coeffs: tuple
    beta: Fraction
    b1_coeff: Fraction = Fraction(0)

    def apply_to_monomial(self, exponents, b1_exponent=0):
        total = sum(Fraction(c) * e for c, e in zip(self.coeffs, exponents))
        total += self.b1_coeff * b1_exponent
        return total - self.beta


def euler_operators(points, brane=None):
    """Euler operators of a point configuration.

    For an enhanced polytope the brane data is already part of the points
    and `brane` stays None.  With `brane` given, the open-string modulus
    b1 enters with weight q_i on each coordinate row (the b0 row is the
    separate homogeneity operator, index -1).
    """
    lifted = points.lifted()
    nrows = len(lifted[0])
    ops = []
    for k in range(nrows):
        coeffs = tuple(v[k] for v in lifted)
        beta = Fraction(-1) if k == 0 else Fraction(0)
        b1 = Fraction(0)
        if brane is not None:
            b1 = Fraction(sum(brane.q[i] * lifted[i][k] for i in range(len(lifted))))
        ops.append(EulerOperator(k, coeffs, beta, b1))
    return ops


class ModuliChart:
    """Ordered lattice basis with per-coordinate signs and names.

    sign_k relates the chart coordinate to the a-monomial of the basis
    vector: x_k = sign_k * a**l(k).  Default sign is (-1)**l0(k).
    """

    def __init__(self, basis, signs=None, names=None):
        self.basis = intlat.imat(basis)
        self.rank = len(self.basis)
        if signs is None:
            signs = tuple((-1) ** (v[0] % 2) for v in self.basis)
        self.signs = tuple(int(s) for s in signs)
        if any(s not in (1, -1) for s in self.signs):
            raise InvalidInput("chart signs must be +-1")
        if names is None:
            names = tuple(f"x{k + 1}" for k in range(self.rank))
        self.names = tuple(names)
        if len(intlat.hnf(self.basis)) != self.rank:
            raise InvalidInput("chart basis vectors are dependent")

    def coordinates_of(self, l):
        c = intlat.solve_integer(self.basis, intlat.ivec(l))
        if c is None:
            raise ChartMismatch(f"{l} is not in the span of the chart basis")
        return c[: self.rank]

    def sign_twist(self, m):
        """prod_k (sign_k * (-1)**l0(k))**m_k, the series storage twist."""
        s = 1
        for k, mk in enumerate(m):
            eps = self.signs[k] * (-1) ** (self.basis[k][0] % 2)
            if eps == -1 and mk % 2:
                s = -s
        return s

    def monomial_sign(self, delta):
        s = 1
        for k, dk in enumerate(delta):
            if self.signs[k] == -1 and dk % 2:
                s = -s
        return s

    def validate_against(self, relations):
        """Every given relation must be a nonnegative combination of the
        basis (so Gamma-series exponents stay nonnegative)."""
        for r in relations:
            c = self.coordinates_of(r)
            if any(x < 0 for x in c):
                raise ChartMismatch(
                    f"relation {r} has negative chart coordinates {c}"
                )
        return True

    def same_as(self, other):
        return (
            self.basis == other.basis
            and self.signs == other.signs
        )

    def __repr__(self):
        return f"ModuliChart(names={list(self.names)}, signs={list(self.signs)})"


class ThetaOperator:
    """Operator sum_delta x**delta * p_delta(theta) on a moduli chart.

    terms maps integer shift tuples to theta polynomials.  Composition
    uses the commutation theta o x**g = x**g o (theta + g).
    """

    def __init__(self, chart, terms):
        self.chart = chart
        self.terms = {
            tuple(d): dict(p) for d, p in terms.items() if p
        }

    def compose(self, other):
        if not self.chart.same_as(other.chart):
            raise ChartMismatch("operators on different charts")
        out = {}
        for d1, p1 in self.terms.items():
            for d2, p2 in other.terms.items():
                d = tuple(a + b for a, b in zip(d1, d2))
                prod = _tp_mul(_tp_shift(p1, d2), p2)
                out[d] = _tp_add(out.get(d, {}), prod)
        return ThetaOperator(self.chart, out)

    def __eq__(self, other):
        return (
            isinstance(other, ThetaOperator)
            and self.chart.same_as(other.chart)
            and self.terms == other.terms
        )

    def perturbed(self, delta, exponent, amount=1):
        """Copy with one coefficient nudged (negative-control testing)."""
        terms = {d: dict(p) for d, p in self.terms.items()}
        p = terms.setdefault(tuple(delta), {})
        e = tuple(exponent)
        p[e] = p.get(e, Fraction(0)) + amount
        return ThetaOperator(self.chart, terms)

    def __str__(self):
        names = self.chart.names
        parts = []
        for d in sorted(self.terms):
            p = _tp_str(self.terms[d], tuple(f"th_{n}" for n in names))
            mono = "*".join(
                f"{names[k]}^{x}" if x not in (0, 1) else names[k]
                for k, x in enumerate(d)
                if x
            )
            parts.append(f"{mono or '1'} * ({p})")
        return "  +  ".join(parts)

    __repr__ = __str__


def box_operator(l, points):
    return BoxOperator(l, points)


def theta_form(op, chart):
    """Rewrite a box operator in the chart's theta coordinates.

    a_i d/da_i maps to sum_k basis[k][i] * theta_k; the monomial a**l
    becomes sign**delta * x**delta.  The result has exactly two terms,
    P(theta) at shift 0 and -sign**delta * N(theta) at shift delta.
    """
    l = op.relation
    rank = chart.rank
    delta = chart.coordinates_of(l)

    def axis(i):
        out = {}
        for k in range(rank):
            c = chart.basis[k][i]
            if c:
                out[tuple(1 if t == k else 0 for t in range(rank))] = Fraction(c)
        return out

    def factor(i, j):
        return _tp_add(axis(i), _tp_const(rank, -j))

    P = _tp_const(rank, 1)
    N = _tp_const(rank, 1)
    l0 = l[0]
    if l0 > 0:
        for j in range(1, l0 + 1):
            P = _tp_mul(P, factor(0, j))
    elif l0 < 0:
        for j in range(1, -l0 + 1):
            N = _tp_mul(N, factor(0, j))
    for i, li in enumerate(l):
        if i == 0:
            continue
        if li > 0:
            for j in range(li):
                P = _tp_mul(P, factor(i, j))
        elif li < 0:
            for j in range(-li):
                N = _tp_mul(N, factor(i, j))
    sgn = chart.monomial_sign(delta)
    terms = {(0,) * rank: P}
    key = tuple(delta)
    terms[key] = _tp_add(terms.get(key, {}), _tp_scale(N, -sgn))
    return ThetaOperator(chart, terms)


def change_basis(op, M, signs=None, names=None):
    """Rewrite an operator under a unimodular change of chart basis.

    M[i][j] is the exponent of new coordinate i in old coordinate j, so
    shifts transform as delta' = M delta and theta_old_j = sum_k
    inv(M)[j][k] theta'_k.  With x = z1*z2, u = z2 (M = [[1,0],[1,1]])
    this maps theta_x -> theta_z1 and theta_u -> theta_z2 - theta_z1.
    Optional `signs` give the sign of each old coordinate as a monomial in
    the new ones (x_j = signs[j] * z**M[:,j]); default +1.
    """
    M = intlat.imat(M)
    rank = op.chart.rank
    det, inv = _integer_inverse(M)
    if det not in (1, -1) or inv is None:
        raise NotUnimodular(f"determinant {det} is not a unit")
    # rows for theta substitution: theta_old_j = sum_k inv[j][k] theta_new_k
    rows = [[inv[j][k] for k in range(rank)] for j in range(rank)]
    # new chart basis: l_old(j) = sum_k M[k][j] l_new(k)
    new_basis = []
    for k in range(rank):
        row = [
            sum(inv[j][k] * op.chart.basis[j][i] for j in range(rank))
            for i in range(len(op.chart.basis[0]))
        ]
        new_basis.append(row)
    signs = tuple(signs) if signs is not None else (1,) * rank
    # new chart signs: solve prod_k s'_k**M[k][j] = s_old_j * signs_j over
    # GF(2) exponents, so the coordinate/monomial dictionary stays coherent
    tau = [
        (0 if op.chart.signs[j] == 1 else 1) ^ (0 if signs[j] == 1 else 1)
        for j in range(rank)
    ]
    new_signs = []
    for k in range(rank):
        e = sum(inv[j][k] * tau[j] for j in range(rank)) % 2
        new_signs.append(-1 if e else 1)
    chart = ModuliChart(new_basis, signs=new_signs, names=names)
    terms = {}
    for d, p in op.terms.items():
        d2 = tuple(sum(M[k][j] * d[j] for j in range(rank)) for k in range(rank))
        coef = 1
        for j, dj in enumerate(d):
            if signs[j] == -1 and dj % 2:
                coef = -coef
        terms[d2] = _tp_add(terms.get(d2, {}), _tp_scale(_tp_subs_linear(p, rows), coef))
    return ThetaOperator(chart, terms)


def _integer_inverse(M):
    n = len(M)
    aug = [[Fraction(M[i][j]) for j in range(n)] + [
        Fraction(1) if k == i else Fraction(0) for k in range(n)
    ] for i in range(n)]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return 0, None
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
            det = -det
        det *= aug[c][c]
        pv = aug[c][c]
        aug[c] = [a / pv for a in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    if det.denominator != 1 or det.numerator not in (1, -1):
        return int(det) if det.denominator == 1 else 0, None
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in inv for x in row):
        return int(det), None
    return int(det), [[int(x) for x in row] for row in inv]


# ---------------------------------------------------------------------------
# the deformed Gamma series
# ---------------------------------------------------------------------------

class MultiSeries:
    """Truncated multi-index series with DivisorRing coefficients.

    coeffs[m] is the normalized Gamma ratio at lattice vector sum m_k
    l~(k), including the chart sign twist; the coefficient at 0 is 1.
    deformation holds the ring elements Lambda_k with sum_k Lambda_k
    l~(k)_i = class(D_i).
    """

    def __init__(self, ring, chart, coeffs, order, deformation):
        self.ring = ring
        self.chart = chart
        self.coeffs = coeffs
        self.order = order
        self.deformation = tuple(deformation)

    def coefficient(self, m):
        m = tuple(m)
        if any(x < 0 for x in m):
            return self.ring.zero()
        if sum(m) > self.order:
            raise InvalidInput(
                f"coefficient {m} beyond truncation order {self.order}"
            )
        return self.coeffs[m]

    def scaled(self, unit):
        return MultiSeries(
            self.ring,
            self.chart,
            {m: unit * c for m, c in self.coeffs.items()},
            self.order,
            self.deformation,
        )

    def to_json_obj(self):
        names = self.ring.basis_names()
        out = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            entry = {
                "index": list(m),
                "coeff": {
                    names[i]: str(c.coefficient(e))
                    for i, e in enumerate(self.ring.basis)
                    if c.coefficient(e) != 0
                },
            }
            out.append(entry)
        return out


def _multi_indices(rank, order):
    if rank == 0:
        return [()]
    out = []

    def rec(prefix, remaining):
        if len(prefix) == rank - 1:
            for v in range(remaining + 1):
                out.append(tuple(prefix) + (v,))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], order)
    return sorted(out, key=lambda m: (sum(m), m))


def _deformation_classes(chart, ring):
    """Solve sum_k Lambda_k basis[k][i] = class(D_i) for ring elements."""
    npts = ring.num_vars
    lam = [ring.zero() for _ in range(chart.rank)]
    for j in range(ring.num_free):
        rhs = [ring.expressions[i][j] for i in range(npts)]
        sol = intlat.solve_rational(chart.basis, rhs)
        if sol is None:
            raise ChartMismatch(
                "divisor classes are not expressible in the chart basis"
            )
        ej = ring.gen(j)
        for k in range(chart.rank):
            if sol[k]:
                lam[k] = lam[k] + sol[k] * ej
    return lam


def gamma_series(chart, ring, order, certificates=None):
    """Normalized deformed Gamma series on the chart, to total degree
    `order`.

    The semi-positivity and regularity certificates are the theorem's
    hypotheses; when provided they must both pass.  Coefficients are
    exact: rising factorials for the index-0 slot, inverted unit rising
    factorials for positive entries and falling factorials (nilpotent
    times integers) for negative entries.
    """
    if certificates is not None:
        for cert in certificates:
            if not cert.passed:
                raise InvalidInput(
                    f"certificate failed: {cert.witness!r}; Gamma series "
                    "hypotheses are not met"
                )
    dclasses = [ring.d_class(i) for i in range(ring.num_vars)]
    lam = _deformation_classes(chart, ring)
    coeffs = {}
    for m in _multi_indices(chart.rank, order):
        l = [0] * ring.num_vars
        for k, mk in enumerate(m):
            if mk:
                for i in range(ring.num_vars):
                    l[i] += mk * chart.basis[k][i]
        if l[0] > 0:
            raise AssertionError(
                f"internal invariant violated: l0 = {l[0]} > 0 at {m}; the "
                "chart cone is not contained in the Gamma series domain"
            )
        val = ring.one()
        for k in range(1, -l[0] + 1):
            val = val * (ring.const(k) - dclasses[0])
        for i in range(1, ring.num_vars):
            li = l[i]
            if li > 0:
                den = ring.one()
                for k in range(1, li + 1):
                    den = den * (ring.const(k) + dclasses[i])
                val = val * invert_unit(den)
            elif li < 0:
                for k in range(-li):
                    val = val * (dclasses[i] - ring.const(k))
        twist = chart.sign_twist(m)
        coeffs[m] = val if twist == 1 else -val
    return MultiSeries(ring, chart, coeffs, order, lam)


# ---------------------------------------------------------------------------
# recurrence verification
# ---------------------------------------------------------------------------

@dataclass
class AnnihilationReport:
    passed: bool
    checked: int
    first_failure: tuple = None
    residual: object = None

    def __bool__(self):
        return self.passed


def verify_annihilation(series, op, order=None):
    """Check sum_delta p_delta(m - delta + Lambda) c_{m-delta} = 0 for all
    |m| <= order, exactly in the ring."""
    if not op.chart.same_as(series.chart):
        raise ChartMismatch("operator chart differs from series chart")
    if order is None:
        order = series.order
    ring = series.ring
    lam = series.deformation
    checked = 0
    max_shift = [0] * series.chart.rank
    for d in op.terms:
        for k, dk in enumerate(d):
            max_shift[k] = max(max_shift[k], -min(dk, 0))
    for m in _multi_indices(series.chart.rank, order):
        if sum(m) + sum(max_shift) > series.order:
            break
        total = ring.zero()
        for d, p in op.terms.items():
            shifted = tuple(a - b for a, b in zip(m, d))
            if any(x < 0 for x in shifted):
                continue
            if sum(shifted) > series.order:
                raise InvalidInput(
                    "series order too small for this operator; increase it"
                )
            c = series.coeffs[shifted]
            if c.is_zero():
                continue
            args = [lam[k] + shifted[k] for k in range(series.chart.rank)]
            total = total + _tp_eval(p, args, ring) * c
        checked += 1
        if not total.is_zero():
            return AnnihilationReport(False, checked, m, total)
    return AnnihilationReport(True, checked)


# ---------------------------------------------------------------------------
# component extraction, c1 filter, mirror map
# ---------------------------------------------------------------------------

class LogSeries:
    """Scalar series in the chart coordinates and formal logs.

    data maps (multi-index m, log-exponent tuple) to a rational
    coefficient; zero coefficients are dropped.
    """

    def __init__(self, names, data, order, label=""):
        self.names = tuple(names)
        self.order = order
        self.label = label
        self.data = {k: v for k, v in data.items() if v != 0}

    def coefficient(self, m, logs=None):
        logs = tuple(logs) if logs is not None else (0,) * len(self.names)
        return self.data.get((tuple(m), logs), Fraction(0))

    def max_log_degree(self):
        return max((sum(b) for (_, b) in self.data), default=0)

    def log_free_part(self):
        zero = (0,) * len(self.names)
        return LogSeries(
            self.names,
            {k: v for k, v in self.data.items() if k[1] == zero},
            self.order,
            self.label,
        )

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        return (
            isinstance(other, LogSeries)
            and self.names == other.names
            and self.data == other.data
        )

    def __add__(self, other):
        out = dict(self.data)
        for k, v in other.data.items():
            s = out.get(k, Fraction(0)) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return LogSeries(self.names, out, min(self.order, other.order))

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        c = Fraction(c)
        return LogSeries(
            self.names, {k: c * v for k, v in self.data.items()}, self.order,
            self.label,
        )

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = {}
        for (m1, b1), v1 in self.data.items():
            for (m2, b2), v2 in other.data.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if sum(m) > order:
                    continue
                b = tuple(a + b for a, b in zip(b1, b2))
                key = (m, b)
                s = out.get(key, Fraction(0)) + v1 * v2
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return LogSeries(self.names, out, order)

    def inverse(self):
        """Series inverse; requires a log-free unit (nonzero constant)."""
        rank = len(self.names)
        zero_m = (0,) * rank
        zero_b = (0,) * rank
        if self.max_log_degree() != 0:
            raise NotAUnit("cannot invert a series with log terms")
        c0 = self.data.get((zero_m, zero_b), Fraction(0))
        if c0 == 0:
            raise NotAUnit("constant term is zero")
        by_m = {m: v for (m, _), v in self.data.items()}
        inv = {zero_m: Fraction(1) / c0}
        for m in _multi_indices(rank, self.order):
            if m == zero_m:
                continue
            acc = Fraction(0)
            for m2, v2 in by_m.items():
                if m2 == zero_m:
                    continue
                rest = tuple(a - b for a, b in zip(m, m2))
                if any(x < 0 for x in rest):
                    continue
                acc += v2 * inv[rest]
            inv[m] = -acc / c0
        return LogSeries(
            self.names, {(m, zero_b): v for m, v in inv.items()}, self.order
        )

    def __str__(self):
        parts = []
        for (m, b) in sorted(self.data, key=lambda k: (sum(k[0]), k[0], k[1])):
            v = self.data[(m, b)]
            mono = "*".join(
                f"{self.names[i]}^{e}" if e > 1 else self.names[i]
                for i, e in enumerate(m)
                if e
            )
            logs = "*".join(
                f"log({self.names[i]})^{e}" if e > 1 else f"log({self.names[i]})"
                for i, e in enumerate(b)
                if e
            )
            body = "*".join(x for x in (mono, logs) if x) or "1"
            parts.append(f"({v})*{body}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def extract_components(series):
    """Expand x**(m+Lambda) into logs and collect one scalar log-series per
    ring basis monomial.  Returns them in ring basis order."""
    ring = series.ring
    rank = series.chart.rank
    # exp(sum_k Lambda_k L_k) as dict {log exponent tuple: ring element}
    expo = {(0,) * rank: ring.one()}
    for k in range(rank):
        lamk = series.deformation[k]
        powers = [ring.one()]
        while not powers[-1].is_zero():
            powers.append(powers[-1] * lamk)
        fact = Fraction(1)
        term = {}
        for j, p in enumerate(powers):
            if p.is_zero():
                break
            if j:
                fact *= j
            key = j
            term[key] = p * Fraction(1, int(fact))
        new = {}
        for b, val in expo.items():
            for j, p in term.items():
                prod = val * p
                if prod.is_zero():
                    continue
                b2 = list(b)
                b2[k] += j
                key = tuple(b2)
                cur = new.get(key)
                new[key] = prod if cur is None else cur + prod
        expo = new
    components = []
    for i, alpha in enumerate(ring.basis):
        data = {}
        for m, c in series.coeffs.items():
            for b, e in expo.items():
                v = (c * e).coefficient(alpha)
                if v != 0:
                    data[(m, b)] = v
        components.append(
            LogSeries(series.chart.names, data, series.order,
                      label=ring.basis_names()[i])
        )
    return components


def c1_filter(series):
    """Multiply every coefficient by the Calabi-Yau class c1 = sum of ray
    classes."""
    c1 = series.ring.c1()
    return series.scaled(c1)


def mirror_map(num, den, order=None):
    """Exact series division num/den to the truncation order."""
    if order is not None:
        num = _truncate(num, order)
        den = _truncate(den, order)
    return num * den.inverse()


def _truncate(s, order):
    return LogSeries(
        s.names,
        {k: v for k, v in s.data.items() if sum(k[0]) <= order},
        min(s.order, order),
        s.label,
    )


def component_rank(components):
    """Rank over Q of a family of log-series (rows)."""
    keys = sorted({k for c in components for k in c.data})
    rows = [[c.data.get(k, Fraction(0)) for k in keys] for c in components]
    rank = 0
    ncols = len(keys)
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r

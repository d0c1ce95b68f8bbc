"""Exterior calculus over rational-function fields with root parameters.

Forms live on an affine coordinate patch: a tuple of polynomial variables,
of which a subset (the z variables) carry differentials; the rest are
formal root parameters t_k with declared relations x_k = t_k**r_k.  All
coefficients are factored rational functions, so pole orders along the
hypersurface stay visible.

The box operators act on the distinguished form Pi = Omega_0/f through the
substitution a_i d/da_i -> (theta part) + weight * Lie(field_i); expanding
the product sorts the result into a pure theta piece (the Picard-Fuchs
side) and Lie-carrying pieces that the Cartan formula turns into one exact
form, the beta term.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import gkz
from .errors import InvalidInput
from .poly import Poly, RatFun


class FormSpace:
    """Variable context: polynomial names plus which of them are z-vars."""

    def __init__(self, zvars, params=()):
        self.zvars = tuple(zvars)
        self.params = tuple(params)
        self.names = self.zvars + self.params

    def poly(self, coeffs=None):
        return Poly(self.names, coeffs)

    def var(self, name, power=1):
        return Poly.var(self.names, name, power)

    def const(self, c):
        return Poly.const(self.names, c)

    def zero_form(self):
        return DifferentialForm(self, {})

    def function(self, ratfun):
        """Degree-0 form from a RatFun/Poly/scalar."""
        if isinstance(ratfun, Poly):
            ratfun = RatFun(ratfun)
        elif not isinstance(ratfun, RatFun):
            ratfun = RatFun(self.const(ratfun))
        return DifferentialForm(self, {(): ratfun})

    def __eq__(self, other):
        return (
            isinstance(other, FormSpace)
            and self.zvars == other.zvars
            and self.params == other.params
        )


def _merge_wedge(idx, wedge):
    """Insert index into a sorted wedge tuple; returns (sign, wedge) or
    None when the index already occurs."""
    if idx in wedge:
        return None
    pos = 0
    while pos < len(wedge) and wedge[pos] < idx:
        pos += 1
    sign = -1 if pos % 2 else 1
    return sign, wedge[:pos] + (idx,) + wedge[pos:]


class DifferentialForm:
    """Sum of wedge monomials dz_I with RatFun coefficients."""

    __slots__ = ("space", "comps")

    def __init__(self, space, comps):
        self.space = space
        self.comps = {I: c for I, c in comps.items() if not c.is_zero()}

    def is_zero(self):
        return not self.comps

    def degree_components(self):
        return sorted({len(I) for I in self.comps})

    def coefficient(self, wedge):
        zero = RatFun(self.space.poly())
        return self.comps.get(tuple(wedge), zero)

    def _check(self, other):
        if self.space != other.space:
            raise InvalidInput("forms on different coordinate patches")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for I, c in other.comps.items():
            if I in out:
                out[I] = out[I] + c
            else:
                out[I] = c
        return DifferentialForm(self.space, out)

    def __neg__(self):
        return DifferentialForm(self.space, {I: -c for I, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply by a function (RatFun, Poly or rational)."""
        if isinstance(c, Poly):
            c = RatFun(c)
        elif not isinstance(c, RatFun):
            c = RatFun(self.space.const(c))
        return DifferentialForm(
            self.space, {I: v * c for I, v in self.comps.items()}
        )

    def __eq__(self, other):
        return isinstance(other, DifferentialForm) and (self - other).is_zero()

    def max_pole_order(self, factor):
        return max(
            (c.pole_order(factor) for c in self.comps.values()), default=0
        )

    def __str__(self):
        if not self.comps:
            return "0"
        names = self.space.zvars
        parts = []
        for I in sorted(self.comps):
            w = "^".join(f"d{names[i]}" for i in I) or "1"
            parts.append(f"({self.comps[I]}) {w}")
        return " + ".join(parts)

    __repr__ = __str__


def wedge(f, g):
    f._check(g)
    out = {}
    for I, a in f.comps.items():
        for J, b in g.comps.items():
            sign = 1
            W = I
            ok = True
            # append J's factors from the left to right: each one moves
            # past the elements of the current W that are larger than it
            for j in J:
                m = _merge_wedge(j, W)
                if m is None:
                    ok = False
                    break
                s, W2 = m
                # s is the prepend sign (-1)**pos; appending passes
                # len(W) - pos elements instead
                pos_parity = 1 if s == 1 else -1
                append_sign = -1 if (len(W) % 2) else 1
                sign *= pos_parity * append_sign
                W = W2
            if not ok:
                continue
            c = a * b if sign == 1 else a * b * (-1)
            out[W] = out.get(W, RatFun(f.space.poly())) + c
    return DifferentialForm(f.space, out)


def exterior_d(f):
    """Exterior derivative in the z variables only (parameters are inert)."""
    out = {}
    for I, c in f.comps.items():
        for i, name in enumerate(f.space.zvars):
            dc = c.diff(name)
            if dc.is_zero():
                continue
            m = _merge_wedge(i, I)
            if m is None:
                continue
            sign, W = m
            term = dc if sign == 1 else -dc
            out[W] = out.get(W, RatFun(f.space.poly())) + term
    return DifferentialForm(f.space, out)


@dataclass(frozen=True)
class TorusField:
    """Monomial vector field coeff * d/dz_index (coeff is a Poly, usually a
    monomial like z1 or z5^7, possibly with root-parameter factors)."""

    space: FormSpace
    coeff: Poly
    index: int

    @classmethod
    def scaling(cls, space, name):
        """z d/dz for the named variable."""
        i = space.zvars.index(name)
        return cls(space, space.var(name), i)

    @classmethod
    def monomial(cls, space, coeff, name):
        return cls(space, coeff, space.zvars.index(name))

    def applied_to(self, ratfun):
        """Directional derivative of a function."""
        return ratfun.diff(self.space.zvars[self.index]) * self.coeff


def interior_product(v, f):
    out = {}
    for I, c in f.comps.items():
        if v.index not in I:
            continue
        pos = I.index(v.index)
        sign = -1 if pos % 2 else 1
        W = I[:pos] + I[pos + 1:]
        term = c * v.coeff if sign == 1 else c * v.coeff * (-1)
        out[W] = out.get(W, RatFun(f.space.poly())) + term
    return DifferentialForm(f.space, out)


def lie_derivative(v, f):
    """Cartan's magic formula d(iota_v f) + iota_v(d f)."""
    return exterior_d(interior_product(v, f)) + interior_product(v, exterior_d(f))


def lie_derivative_direct(v, f):
    """Independent implementation by coefficient transport, for testing:
    L_v(g dz_I) = v(g) dz_I + g * sum_k dz_{i_1}..d(v(z_{i_k}))..dz_{i_p}.
    """
    space = f.space
    out = {}

    def acc(W, term):
        out[W] = out.get(W, RatFun(space.poly())) + term

    dcoeff = {
        u: v.coeff.diff(space.zvars[u]) for u in range(len(space.zvars))
    }
    for I, g in f.comps.items():
        acc(I, v.applied_to(g))
        for pos, i in enumerate(I):
            if i != v.index:
                continue
            base = I[:pos] + I[pos + 1:]
            sign0 = -1 if pos % 2 else 1
            for u, dP in dcoeff.items():
                if dP.is_zero():
                    continue
                m = _merge_wedge(u, base)
                if m is None:
                    continue
                s, W = m
                term = g * dP
                if sign0 * s == -1:
                    term = term * (-1)
                acc(W, term)
    return DifferentialForm(space, out)


def verify_exact_identity(lhs, rhs):
    """Exact equality of forms after common-denominator normalization."""
    return (lhs - rhs).is_zero()


# ---------------------------------------------------------------------------
# the distinguished form and the box operators acting on it
# ---------------------------------------------------------------------------

class PiData:
    """The form Pi = Omega0/f with the operator substitution table.

    lie_table maps a point index i to a list of (weight, TorusField): the
    Lie part of the substitution for a_i d/da_i.  chart supplies the theta
    parts; root_map maps chart coordinate index -> (parameter name,
    exponent r) realizing x_k = t_k**r_k.
    """

    def __init__(self, space, pi, f, lie_table, chart, root_map):
        self.space = space
        self.pi = pi
        self.f = f
        self.lie_table = dict(lie_table)
        self.chart = chart
        self.root_map = dict(root_map)

    def theta_once(self, form, k):
        """Apply Theta_{x_k} = (t_k / r_k) d/dt_k to a form."""
        tname, r = self.root_map[k]
        tpow = Poly.var(self.space.names, tname)
        out = {}
        for I, c in form.comps.items():
            dc = c.diff(tname)
            if dc.is_zero():
                continue
            out[I] = dc * tpow * Fraction(1, r)
        return DifferentialForm(self.space, out)

    def apply_theta_poly(self, form, tp):
        """Apply a theta polynomial (dict exponent tuple -> Fraction)."""
        total = self.space.zero_form()
        for e, coef in tp.items():
            term = form
            for k, ek in enumerate(e):
                for _ in range(ek):
                    term = self.theta_once(term, k)
            total = total + term.scale(coef)
        return total

    def apply_lie(self, form, i):
        total = self.space.zero_form()
        for weight, field in self.lie_table[i]:
            total = total + lie_derivative(field, form).scale(weight)
        return total

    def contract(self, form, i):
        total = self.space.zero_form()
        for weight, field in self.lie_table[i]:
            total = total + interior_product(field, form).scale(weight)
        return total

    def shift_monomial(self, delta):
        """The function x**delta = prod t_k**(r_k delta_k)."""
        p = self.space.const(1)
        for k, dk in enumerate(delta):
            if dk:
                tname, r = self.root_map[k]
                p = p * Poly.var(self.space.names, tname, r * dk)
        return p


def _expand_factors(factors, rank):
    """Expand a product of (theta linear form + optional Lie op) factors
    into {lie multiset: theta polynomial}."""
    terms = {(): {(0,) * rank: Fraction(1)}}
    for lp, lie_i in factors:
        new = {}
        for ms, poly in terms.items():
            tchoice = gkz._tp_mul(poly, lp)
            new[ms] = gkz._tp_add(new.get(ms, {}), tchoice)
            if lie_i is not None:
                ms2 = tuple(sorted(ms + (lie_i,)))
                new[ms2] = gkz._tp_add(new.get(ms2, {}), poly)
        terms = {ms: p for ms, p in new.items() if p}
    return terms


def box_factorization(l, data):
    """The two halves of the substituted box operator for relation l.

    Returns (pos_terms, neg_terms, delta, neg_prefactor_sign) where each
    terms dict maps a Lie multiset to a theta polynomial.
    """
    chart = data.chart
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
        lp = gkz._tp_add(axis(i), {(0,) * rank: Fraction(-j)} if j else {})
        lie = i if i in data.lie_table else None
        return lp, lie

    pos, neg = [], []
    l0 = l[0]
    if l0 > 0:
        pos += [factor(0, j) for j in range(1, l0 + 1)]
    elif l0 < 0:
        neg += [factor(0, j) for j in range(1, -l0 + 1)]
    for i, li in enumerate(l):
        if i == 0:
            continue
        if li > 0:
            pos += [factor(i, j) for j in range(li)]
        elif li < 0:
            neg += [factor(i, j) for j in range(-li)]
    sgn = chart.monomial_sign(delta)
    return (
        _expand_factors(pos, rank),
        _expand_factors(neg, rank),
        tuple(delta),
        sgn,
    )


def apply_box_identity(l, data):
    """Evaluate the full substituted operator on Pi; zero iff the exact
    GKZ identity holds."""
    pos, neg, delta, sgn = box_factorization(l, data)
    mono = data.shift_monomial(delta)
    total = data.space.zero_form()
    for ms, tp in pos.items():
        form = data.pi
        for i in ms:
            form = data.apply_lie(form, i)
        total = total + data.apply_theta_poly(form, tp)
    for ms, tp in neg.items():
        form = data.pi
        for i in ms:
            form = data.apply_lie(form, i)
        form = data.apply_theta_poly(form, tp)
        total = total - form.scale(mono).scale(sgn)
    return total


def theta_only_operator(l, data):
    """The pure Picard-Fuchs side: the Lie-free part of the box operator,
    as a gkz.ThetaOperator on the data's chart."""
    return gkz.theta_form(_FakeBox(l), data.chart)


class _FakeBox:
    def __init__(self, l):
        self.relation = tuple(l)


def apply_theta_operator(op, data):
    """Apply a chart ThetaOperator to Pi (x**delta realized through the
    root parameters)."""
    total = data.space.zero_form()
    for d, p in op.terms.items():
        form = data.apply_theta_poly(data.pi, p)
        total = total + form.scale(data.shift_monomial(d))
    return total


def default_peel(lie_multiset, zvar_count=5):
    """Which Lie factor to integrate by parts: ascending index, the last
    z variable only when alone."""
    distinct = sorted(set(lie_multiset))
    last = zvar_count
    non_last = [i for i in distinct if i != last]
    return non_last[0] if non_last else distinct[0]


class BetaForm:
    """A beta term: list of (theta polynomial, form) pairs, kept split so
    residue pipelines can carry the Theta prefactors symbolically."""

    def __init__(self, data, pieces):
        self.data = data
        self.pieces = [(dict(tp), form) for tp, form in pieces if not form.is_zero()]

    def expand(self):
        total = self.data.space.zero_form()
        for tp, form in self.pieces:
            total = total + self.data.apply_theta_poly(form, tp)
        return total

    def d_expand(self):
        return exterior_d(self.expand())


def beta_term(l, data, peel=None):
    """Construct beta with d(beta) = -(theta-only operator applied to Pi).

    Every Lie-carrying term of the substituted box identity is turned into
    an exact form by contracting one of its Lie fields (the integrand
    stays closed, so L_v = d iota_v on it).  The peel choice is free; any
    valid choice satisfies the defining contract.
    """
    if peel is None:
        peel = default_peel
    pos, neg, delta, sgn = box_factorization(l, data)
    mono = data.shift_monomial(delta)
    pieces = []
    for src, is_neg in ((pos, False), (neg, True)):
        for ms, tp in src.items():
            if not ms:
                continue
            i_star = peel(ms)
            rest = list(ms)
            rest.remove(i_star)
            form = data.pi
            for i in rest:
                form = data.apply_lie(form, i)
            form = data.contract(form, i_star)
            if is_neg:
                form = form.scale(mono).scale(-sgn)
                tp = gkz._tp_shift(tp, tuple(-d for d in delta))
            pieces.append((tp, form))
    return BetaForm(data, pieces)


# ---------------------------------------------------------------------------
# builders for the Fermat weighted projective setting
# ---------------------------------------------------------------------------

def fermat_space(nz=5, params=("t",)):
    return FormSpace(tuple(f"z{i}" for i in range(1, nz + 1)), tuple(params))


def weighted_omega0(space, weights):
    """Omega0 = sum_r (-1)**(r-1) w_r z_r dz_1 ^ .. ^ hat(dz_r) ^ .. ^ dz_n."""
    n = len(space.zvars)
    comps = {}
    for r in range(n):
        wedge_idx = tuple(i for i in range(n) if i != r)
        coeff = RatFun(space.var(space.zvars[r]).scale(weights[r]))
        if r % 2 == 1:
            coeff = -coeff
        comps[wedge_idx] = coeff
    return DifferentialForm(space, comps)


def fermat_pi_data(weights, f, chart, root_map, space=None):
    """Pi = Omega0/f for a Fermat weighted projective family.

    The substitution table attaches (w_i/d) z_i d/dz_i to the point
    indices 1..5; all other indices act by their theta parts alone.
    """
    weights = tuple(int(w) for w in weights)
    d = sum(weights)
    if space is None:
        space = fermat_space(5, tuple(t for t, _ in root_map.values()))
    pi = weighted_omega0(space, weights).scale(RatFun(space.const(1), ((f, 1),)))
    lie_table = {}
    for i in range(1, 6):
        field = TorusField.scaling(space, space.zvars[i - 1])
        lie_table[i] = [(Fraction(weights[i - 1], d), field)]
    return PiData(space, pi, f, lie_table, chart, root_map)


def toric_pi_data(f, chart, root_map, space=None, nx=4):
    """Pi = (1/f) prod dX_j/X_j in toric coordinates.

    Substitutions: a_0 gets -L(sum X_j d/dX_j), a_j (1<=j<=4) gets
    +L(X_j d/dX_j), higher indices act by theta parts alone.
    """
    if space is None:
        space = FormSpace(
            tuple(f"X{j}" for j in range(1, nx + 1)),
            tuple(t for t, _ in root_map.values()),
        )
    comps = {}
    top = tuple(range(nx))
    denom_mono = space.const(1)
    for name in space.zvars:
        denom_mono = denom_mono * space.var(name)
    comps[top] = RatFun(space.const(1), ((f, 1),)) * RatFun(
        space.const(1), ((denom_mono, 1),)
    )
    pi = DifferentialForm(space, comps)
    lie_table = {0: [
        (Fraction(-1), TorusField.scaling(space, nm)) for nm in space.zvars
    ]}
    for j in range(1, nx + 1):
        lie_table[j] = [(Fraction(1), TorusField.scaling(space, space.zvars[j - 1]))]
    return PiData(space, pi, f, lie_table, chart, root_map)

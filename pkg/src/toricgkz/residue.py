"""Chart restriction, pole-order reduction and the double-residue pipeline
for inhomogeneous Picard-Fuchs equations of curve pairs.

Everything is exact: restrictions are polynomial substitutions with
transported differentials, the Griffith-Dwork step divides by a single
partial derivative that is checked nonzero at the reduction point, and
residues are Laurent-coefficient extractions of rational functions.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AssumptionViolated,
    ChartOnPole,
    InvalidForm,
    InvalidInput,
    SingularPoint,
)
from .forms import DifferentialForm, FormSpace, exterior_d, _merge_wedge
from .poly import Poly, RatFun


class AffineChart:
    """Substitution chart между coordinate patches.

    substitutions maps eliminated variable names to polynomials in the
    surviving variables; differentials are transported consistently
    (d of the substitution expression).
    """

    def __init__(self, old_space, substitutions, survivors):
        self.old_space = old_space
        self.new_space = FormSpace(tuple(survivors), old_space.params)
        self.substitutions = {}
        for name, expr in substitutions.items():
            if not isinstance(expr, Poly):
                expr = Poly.const(self.new_space.names, expr)
            if expr.names != self.new_space.names:
                expr = expr.rename(self.new_space.names)
            self.substitutions[name] = expr
        missing = set(old_space.zvars) - set(survivors) - set(substitutions)
        if missing:
            raise InvalidInput(f"variables {missing} neither kept nor substituted")

    def push_poly(self, p):
        assignment = {}
        temp = p.rename(
            self.new_space.names + tuple(
                n for n in self.old_space.names if n not in self.new_space.names
            )
        )
        wide_names = temp.names
        for name, expr in self.substitutions.items():
            assignment[name] = expr.rename(wide_names)
        out = temp.subs(assignment)
        return out.rename(self.new_space.names)

    def push_ratfun(self, c):
        num = self.push_poly(c.num)
        out = RatFun(num)
        for q, e in c.den:
            q2 = self.push_poly(q)
            if q2.is_zero():
                raise ChartOnPole(f"chart kills denominator factor {q}")
            out = out.div_poly(q2, e)
        return out

    def differential(self, name):
        """dz_name as a 1-form on the new space."""
        space = self.new_space
        if name in space.zvars:
            i = space.zvars.index(name)
            return DifferentialForm(space, {(i,): RatFun(space.const(1))})
        expr = self.substitutions[name]
        comps = {}
        for i, nm in enumerate(space.zvars):
            d = expr.diff(nm)
            if not d.is_zero():
                comps[(i,)] = RatFun(d)
        return DifferentialForm(space, comps)


@dataclass
class PoleForm:
    """A form together with the factored hypersurface it has poles on."""

    form: DifferentialForm
    pole: Poly

    def order(self):
        return self.form.max_pole_order(self.pole)

    def is_zero(self):
        return self.form.is_zero()


def restrict(form, chart, pole=None):
    """Restrict a form through an affine chart (exact substitution with
    transported differentials).  When `pole` is given, the restricted
    hypersurface factor is attached to the result."""
    from .forms import wedge as wedge_op

    space = chart.new_space
    out = space.zero_form()
    diffs = {nm: chart.differential(nm) for nm in chart.old_space.zvars}
    for I, c in form.comps.items():
        piece = space.function(chart.push_ratfun(c))
        for i in I:
            piece = wedge_op(piece, diffs[chart.old_space.zvars[i]])
            if piece.is_zero():
                break
        out = out + piece
    if pole is not None:
        restricted_pole = chart.push_poly(pole)
        if restricted_pole.is_zero():
            raise ChartOnPole("hypersurface vanishes identically on chart")
        return PoleForm(out, restricted_pole.normalized_factor()[1])
    return out


def reduce_pole_order(pf, avoid):
    """Griffith-Dwork reduction of a top-degree pole form.

    Writes pf = d(eta) + remainder with remainder of pole order <= 1 in
    the hypersurface factor.  Each step divides by the single partial
    d P/dz_j with the smallest index j such that the partial does not
    vanish at `avoid` (a dict of rational coordinates; root parameters
    stay symbolic).  Auxiliary poles along that partial are tracked.  The
    reconstruction identity is asserted on every call.
    """
    space = pf.form.space
    P = pf.pole
    point = dict(avoid)
    partial_j = None
    dPj = None
    for j, nm in enumerate(space.zvars):
        cand = P.diff(nm)
        if cand.is_zero():
            continue
        val = _eval_at_point(cand, point, space)
        if not val.is_zero():
            partial_j = j
            dPj = cand
            break
    if partial_j is None:
        raise SingularPoint(f"all partials of {P} vanish at {avoid}")

    eta = space.zero_form()
    current = pf.form
    top = tuple(range(len(space.zvars)))
    while True:
        k = current.max_pole_order(P)
        if k <= 1:
            break
        comp = current.coefficient(top)
        lower = {
            I: c for I, c in current.comps.items() if I != top
        }
        if any(c.pole_order(P) >= k for c in lower.values()):
            raise InvalidInput("non-top component carries the deepest pole")
        # split comp = deep/(P^k) + shallower
        deep_num = RatFun(comp.num, tuple(
            (q, e) for q, e in comp.den if q.sort_key() != P.sort_key()
        ))
        shallow_order = comp.pole_order(P)
        if shallow_order < k:
            # the top component's pole is already below k: nothing deep here
            raise InvalidInput("pole bookkeeping out of sync")
        zeta_coeff = deep_num.div_poly(dPj, 1)
        pos = partial_j
        sign = -1 if pos % 2 else 1
        rest = top[:pos] + top[pos + 1:]
        zeta = DifferentialForm(space, {rest: zeta_coeff if sign == 1 else -zeta_coeff})
        # pf_top = dP ^ zeta / P^k = -d(zeta/(k-1)P^{k-1}) + d(zeta)/(k-1)P^{k-1}
        scale = Fraction(1, k - 1)
        eta_piece = zeta.scale(-scale)
        eta_piece = DifferentialForm(space, {
            I: c.div_poly(P, k - 1) for I, c in eta_piece.comps.items()
        })
        eta = eta + eta_piece
        dzeta = exterior_d(zeta)
        new_top = DifferentialForm(space, {
            I: c.scale(scale).div_poly(P, k - 1)
            for I, c in dzeta.comps.items()
        })
        current = DifferentialForm(space, lower) + new_top
    remainder = PoleForm(current, P)
    recon = exterior_d(eta) + current - pf.form
    if not recon.is_zero():
        raise AssertionError("pole reduction lost exactness")
    return PoleForm(eta, P), remainder


def _eval_at_point(p, point, space):
    """Substitute the z coordinates by rationals, keeping parameters."""
    assignment = {k: Fraction(v) for k, v in point.items()}
    out = p.subs(assignment)
    # the result involves parameters only
    return out


def refactor(ratfun, candidates):
    """Split denominator factors by exact division against candidates
    (restricted curve factors); monomial leftovers are absorbed."""
    out = RatFun(ratfun.num)
    for q, e in ratfun.den:
        parts = []
        rest = q
        changed = True
        while changed:
            changed = False
            for cand in candidates:
                _, cn = cand.normalized_factor()
                if cn.sort_key() == rest.sort_key():
                    continue
                quo = rest.exact_div(cn)
                if quo is not None and not quo.is_constant():
                    parts.append(cn)
                    rest = quo
                    changed = True
                    break
                if quo is not None and quo.is_constant():
                    parts.append(cn)
                    rest = quo
                    changed = False
                    break
        for part in parts:
            out = out.div_poly(part, e)
        if not rest.is_constant():
            out = out.div_poly(rest, e)
        else:
            val = rest.constant_value()
            if val != 1:
                out = out * RatFun.const(ratfun.names, Fraction(1) / val ** e)
    return out


def laurent_coefficient(c, name, space, k=-1):
    """Coefficient of name**k in the Laurent expansion of a rational
    function around name = 0, as a rational function of the remaining
    variables."""
    rest_names = tuple(n for n in space.names if n != name)
    i = space.names.index(name)

    def split(p):
        """p = sum_j name**j * (poly in the rest): dict j -> renamed poly."""
        slices = {}
        for e, v in p.icoeffs.items():
            j = e[i]
            e2 = tuple(x for t, x in enumerate(e) if t != i)
            slices.setdefault(j, {})[e2] = slices.get(j, {}).get(e2, 0) + v
        out = {}
        for j, d in slices.items():
            q = Poly(rest_names)
            q.icoeffs = {e: v for e, v in d.items() if v}
            q.content = p.content
            q._reduce()
            if not q.is_zero():
                out[j] = q
        return out

    B = c.num.__class__.const(space.names, 1)
    for q, e in c.den:
        B = B * q ** e
    A = c.num
    a_slices = split(A)
    b_slices = split(B)
    if not a_slices:
        return RatFun(Poly.const(rest_names, 0))
    if not b_slices:
        raise InvalidForm("zero denominator")
    mB = min(b_slices)
    mA = min(a_slices)
    n = mB - mA + k  # coefficient index needed in the regular series A~/B~
    if n < 0:
        return RatFun(Poly.const(rest_names, 0))
    B0 = b_slices[mB]
    inv = [RatFun(Poly.const(rest_names, 1), ((B0, 1),))]
    for m in range(1, n + 1):
        acc = RatFun(Poly.const(rest_names, 0))
        for j in range(1, m + 1):
            Bj = b_slices.get(mB + j)
            if Bj is None:
                continue
            acc = acc + inv[m - j] * Bj
        inv.append(-acc.div_poly(B0, 1) if not acc.is_zero() else acc)
    total = RatFun(Poly.const(rest_names, 0))
    for jj, Aj in a_slices.items():
        idx = n - (jj - mA)
        if 0 <= idx <= n:
            total = total + inv[idx] * Aj
    return total


def residue_along_divisor(pf, g, space=None):
    """Residue of a top 2-form along {g = 0} on a surface chart.

    g must be monic in its leading surface variable (the worked curves are
    z1 +- t z5^2 and alike).  Returns the 1-form on the curve, in the
    remaining coordinate; a form with no pole along g gives zero.
    """
    form = pf.form if isinstance(pf, PoleForm) else pf
    space = space or form.space
    if len(space.zvars) != 2:
        raise InvalidInput("residue_along_divisor expects a surface chart")
    # find the variable g is monic-linear in
    elim = None
    for nm in space.zvars:
        d = g.diff(nm)
        if d == 1:
            elim = nm
            break
    if elim is None:
        raise InvalidInput(f"curve factor {g} is not monic in a chart variable")
    keep = next(n for n in space.zvars if n != elim)
    tail = g - space.var(elim)
    if not tail.diff(elim).is_zero():
        raise InvalidInput("curve factor is not linear in its leading variable")
    shift = {elim: space.var(elim) - tail}
    curve_space = FormSpace((keep,), space.params)
    ei = space.zvars.index(elim)
    ki = space.zvars.index(keep)
    out = RatFun(Poly.const(curve_space.names, 0))
    for I, c in form.comps.items():
        if len(I) != 2:
            continue
        c2 = c.subs(shift)
        if c2.pole_order(g.subs(shift)) == 0 and _no_elim_pole(c2, space, ei):
            continue
        val = laurent_coefficient(c2, elim, space, k=-1)
        val = val.rename(curve_space.names)
        if I == tuple(sorted((ei, ki))):
            sign = 1 if ei < ki else -1
        else:
            continue
        out = out + (val if sign == 1 else -val)
    return DifferentialForm(curve_space, {(0,): out})


def _no_elim_pole(c, space, ei):
    name = space.names[ei]
    for e in c.num.icoeffs:
        if e[ei] < 0:
            return False
    for q, _ in c.den:
        if any(ex[ei] for ex in q.icoeffs):
            return False
    return True


def residue_at_point(oneform, at_zero_of=None):
    """Residue of a meromorphic 1-form on a curve at the coordinate
    origin: the coefficient of dw/w.  Returns a rational function of the
    root parameters."""
    space = oneform.space
    if len(space.zvars) != 1:
        raise InvalidForm("expected a 1-form in a single curve coordinate")
    name = at_zero_of or space.zvars[0]
    c = oneform.coefficient((0,))
    params = FormSpace((), space.params)
    val = laurent_coefficient(c, name, space, k=-1)
    return val.rename(params.names)


# ---------------------------------------------------------------------------
# the end-to-end Abel-Jacobi pipeline
# ---------------------------------------------------------------------------

@dataclass
class CurveConfig:
    """Hypersurface, boundary divisors, curve factors and special points.

    points are coordinate dicts; curve factor signs identify C+ (index 0)
    and C- (index 1).
    """

    space: FormSpace
    hypersurface: Poly
    q1: Poly
    q2: Poly
    curve_factors: tuple
    points: tuple
    t_name: str = "t"
    t_exponent: int = 10


def _gradient_at(p, point, space):
    return [
        _eval_at_point(p.diff(nm), point, space) for nm in space.zvars
    ]


def _rank2(rows):
    """Rank of a 2 x n matrix of polynomials (in the parameters)."""
    r0, r1 = rows
    nonzero0 = any(not v.is_zero() for v in r0)
    nonzero1 = any(not v.is_zero() for v in r1)
    if not (nonzero0 and nonzero1):
        return 1 if (nonzero0 or nonzero1) else 0
    n = len(r0)
    for i in range(n):
        for j in range(i + 1, n):
            det = r0[i] * r1[j] - r0[j] * r1[i]
            if not det.is_zero():
                return 2
    return 1


def transversal_divisor(config, point):
    """Pick the boundary divisor meeting the hypersurface transversally at
    the given special point; raises when neither does."""
    space = config.space
    if not _eval_at_point(config.hypersurface, point, space).is_zero():
        raise AssumptionViolated("special point does not lie on the hypersurface")
    gp = _gradient_at(config.hypersurface, point, space)
    for q in (config.q1, config.q2):
        gq = _gradient_at(q, point, space)
        if _rank2((gp, gq)) == 2:
            return q
    raise AssumptionViolated(
        f"neither boundary divisor is transversal at {point}"
    )


def point_charts(config, point):
    """The 3-fold chart (scaling + tube divisor) and the surface chart
    (other divisor) at a special point."""
    space = config.space
    tube_q = transversal_divisor(config, point)
    other_q = config.q2 if tube_q is config.q1 else config.q1

    j0 = next(nm for nm in space.zvars if Fraction(point[nm]) != 0)

    def solve_linear(q, banned):
        """Eliminate one variable from the binomial divisor q."""
        vars_in = [nm for nm in space.zvars if not q.diff(nm).is_zero()]
        cand = [nm for nm in vars_in if nm not in banned]
        if not cand:
            raise InvalidInput("divisor cannot be solved in the chart")
        elim = cand[-1]
        coef = q.diff(elim)
        rest = q - space.var(elim).scale(coef.constant_value())
        return elim, rest.scale(Fraction(-1) / coef.constant_value())

    elim1, expr1 = solve_linear(tube_q, {j0})
    survivors1 = tuple(nm for nm in space.zvars if nm not in (j0, elim1))
    chart_space1 = FormSpace(survivors1, space.params)
    subs1 = {
        j0: Poly.const(chart_space1.names, Fraction(point[j0])),
        elim1: expr1.rename(
            chart_space1.names,
            {j0: survivors1[0]},  # placeholder, fixed below
        ) if False else None,
    }
    # expr1 may reference j0; substitute its chart value first
    expr1 = expr1.subs({j0: Poly.const(space.names, Fraction(point[j0]))})
    subs1 = {
        j0: Poly.const(chart_space1.names, Fraction(point[j0])),
        elim1: _project(expr1, chart_space1.names),
    }
    chart1 = AffineChart(space, subs1, survivors1)

    # surface: impose the other divisor inside chart1
    q_other = chart1.push_poly(other_q)
    elim2, expr2 = _solve_in(q_other, chart1.new_space)
    survivors2 = tuple(nm for nm in chart1.new_space.zvars if nm != elim2)
    subs2 = {elim2: _project(expr2, FormSpace(survivors2, space.params).names)}
    chart2 = AffineChart(chart1.new_space, subs2, survivors2)
    point1 = {nm: point[nm] for nm in survivors1}
    point2 = {nm: point[nm] for nm in survivors2}
    return chart1, chart2, point1, point2


def _project(p, names):
    return p.rename(names)


def _solve_in(q, space):
    for nm in reversed(space.zvars):
        d = q.diff(nm)
        if d.is_zero() or not d.is_constant():
            continue
        coef = d.constant_value()
        rest = q - space.var(nm).scale(coef)
        return nm, rest.scale(Fraction(-1) / coef)
    raise InvalidInput("divisor is not linear in any chart variable")


def double_residue_at_point(config, beta, point):
    """All curve residues of the beta term near one special point.

    Returns {curve index: list of (theta exponent tuple, residue RatFun)}
    where each residue is taken первый along the restricted curve factor
    and then at the point.
    """
    chart1, chart2, point1, point2 = point_charts(config, point)
    out = {0: [], 1: []}
    for tp, form in beta.pieces:
        restricted = restrict(form, chart1, pole=config.hypersurface)
        if restricted.is_zero():
            continue
        eta, remainder = reduce_pole_order(restricted, point1)
        if eta.is_zero():
            continue
        surf = restrict(eta.form, chart2)
        surf_pole = chart2.push_poly(eta.pole)
        candidates = [chart2.push_poly(chart1.push_poly(g))
                      for g in config.curve_factors]
        # hmm: curve factors live on the ambient space; push through both
        surf = DifferentialForm(
            surf.space,
            {I: refactor(c, candidates) for I, c in surf.comps.items()},
        )
        for ci, g in enumerate(candidates):
            res1 = residue_along_divisor(surf, g, surf.space)
            if res1.is_zero():
                continue
            val = residue_at_point(res1)
            if val.is_zero():
                continue
            for e, coeff in tp.items():
                out[ci].append((e, val * coeff))
    return out


def apply_theta_prefactor(values, t_name, t_exponent):
    """Sum theta-prefixed residues: Theta^a acts as (t/r) d/dt."""
    if not values:
        return None
    names = values[0][1].names
    total = RatFun(Poly.const(names, 0))
    for e, val in values:
        a = e[0] if e else 0
        cur = val
        for _ in range(a):
            cur = cur.diff(t_name) * Poly.var(names, t_name) * Fraction(
                1, t_exponent
            )
        total = total + cur
    return total


def abel_jacobi_inhomogeneous(config, beta):
    """Assemble -sum_{p in C+} ResRes + sum_{p in C-} ResRes with the
    Theta prefactors applied symbolically; returns (total, report)."""
    per_point = {}
    names = None
    for pi, point in enumerate(config.points):
        per_point[pi] = double_residue_at_point(config, beta, point)
    total = None
    report = {}
    for pi, res in per_point.items():
        for ci in (0, 1):
            v = apply_theta_prefactor(res[ci], config.t_name, config.t_exponent)
            report[(pi, ci)] = v
            if v is None:
                continue
            signed = -v if ci == 0 else v
            total = signed if total is None else total + signed
    return total, report

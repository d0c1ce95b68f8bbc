"""Built-in data for the three weighted projective worked examples.

The JSON files under fixtures/ are the CLI inputs; this module also offers
assembled Python objects (polytopes, fans, rings, charts) for the enhanced
quintic, which most of the pipeline exercises.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import InvalidInput
from .fans import (
    Fan,
    canonical_triangulation,
    check_regular,
    check_semipositive,
    primitive_relations,
    sr_ideal,
)
from .gkz import ModuliChart, gamma_series
from .intlat import BraneData, Polytope, enhance_polytope
from .nilring import build_quotient

FIXTURE_NAMES = ("quintic", "p22211", "p72221")


def fixture_path(name):
    if name not in FIXTURE_NAMES:
        raise InvalidInput(
            f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}"
        )
    return resources.files("toricgkz.data").joinpath(f"{name}.json")


def load_input(source):
    """Load a toric input file (path, file object, or fixture name)."""
    if isinstance(source, str) and source in FIXTURE_NAMES:
        text = fixture_path(source).read_text()
    elif hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return validate_input(json.loads(text))


_SCHEMA_KEYS = {"name", "points", "weights", "fan", "brane", "chart", "options"}


def validate_input(doc):
    """Schema check with JSON-pointer style error paths."""
    if not isinstance(doc, dict):
        raise InvalidInput("/: input must be an object")
    for key in doc:
        if key not in _SCHEMA_KEYS:
            raise InvalidInput(f"/{key}: unknown key")
    if "points" not in doc:
        raise InvalidInput("/points: required")
    pts = doc["points"]
    if not isinstance(pts, list) or not pts:
        raise InvalidInput("/points: nonempty array required")
    width = None
    for i, p in enumerate(pts):
        if not isinstance(p, list) or not all(isinstance(x, int) for x in p):
            raise InvalidInput(f"/points/{i}: array of integers required")
        if width is None:
            width = len(p)
        elif len(p) != width:
            raise InvalidInput(f"/points/{i}: inconsistent dimension")
    if any(doc["points"][0]):
        raise InvalidInput("/points/0: must be the origin")
    if "fan" in doc:
        fan = doc["fan"]
        if not isinstance(fan, dict) or "max_cones" not in fan:
            raise InvalidInput("/fan/max_cones: required")
        for i, c in enumerate(fan["max_cones"]):
            if not all(isinstance(x, int) for x in c):
                raise InvalidInput(f"/fan/max_cones/{i}: integers required")
            if any(x < 1 or x >= len(pts) for x in c):
                raise InvalidInput(
                    f"/fan/max_cones/{i}: point indices out of range (1-based,"
                    " origin excluded)"
                )
    if "brane" in doc:
        q = doc["brane"].get("q")
        if not isinstance(q, list) or len(q) != len(pts):
            raise InvalidInput("/brane/q: length must match points")
        if sum(q) != 0:
            raise InvalidInput("/brane/q: entries must sum to zero")
    if "chart" in doc:
        chart = doc["chart"]
        if "basis" not in chart:
            raise InvalidInput("/chart/basis: required")
    return doc


@dataclass
class AssembledModel:
    """Everything the solver needs, built from one input file."""

    name: str
    polytope: Polytope
    brane: object
    enhanced: Polytope
    base_fan: Fan
    fan: Fan
    triangulation: object
    sr: object
    ring: object
    lattice: object
    relations: list
    undefined: list
    certificates: tuple
    chart: ModuliChart
    order: int
    t_exp: int


def assemble(doc):
    """Build the combinatorial and algebraic model from a validated input.

    Requires a fan; the brane is optional (closed-string inputs work too,
    everything then happens on the original polytope).
    """
    pts = [tuple(p) for p in doc["points"]]
    polytope = Polytope(pts)
    options = doc.get("options", {})
    order = int(options.get("order", 8))
    t_exp = int(options.get("t_exp", 1))
    if "fan" not in doc:
        raise InvalidInput("/fan: this command needs a fan")
    base_rays = [pts[i] for i in sorted({i for c in doc["fan"]["max_cones"] for i in c})]
    ray_order = sorted({i for c in doc["fan"]["max_cones"] for i in c})
    pos = {i: k for k, i in enumerate(ray_order)}
    base_cones = [tuple(pos[i] for i in c) for c in doc["fan"]["max_cones"]]
    base_fan = Fan(base_rays, base_cones, complete=True)
    if "brane" in doc:
        brane = BraneData(doc["brane"]["q"], polytope)
        enhanced = enhance_polytope(polytope, brane)
        from .fans import enhanced_fan

        fan = enhanced_fan(base_fan, brane)
        working = enhanced
    else:
        brane = None
        enhanced = None
        fan = base_fan
        working = polytope
    tri = canonical_triangulation(fan, working)
    sr = sr_ideal(fan)
    ring = build_quotient(working, sr)
    lattice = working.relation_lattice()
    rels, und = primitive_relations(fan, working)
    certs = (
        check_semipositive(rels, und),
        check_regular(rels, lattice, und),
    )
    if "chart" in doc:
        chart = ModuliChart(
            doc["chart"]["basis"],
            signs=doc["chart"].get("signs"),
            names=doc["chart"].get("names"),
        )
        chart.validate_against([r.relation for r in rels])
    else:
        chart = None
    return AssembledModel(
        name=doc.get("name", "input"),
        polytope=polytope,
        brane=brane,
        enhanced=enhanced,
        base_fan=base_fan,
        fan=fan,
        triangulation=tri,
        sr=sr,
        ring=ring,
        lattice=lattice,
        relations=rels,
        undefined=und,
        certificates=certs,
        chart=chart,
        order=order,
        t_exp=t_exp,
    )


# ---------------------------------------------------------------------------
# form-level data for the three weighted projective families
# ---------------------------------------------------------------------------

def quintic_pi_data(root_power=1):
    """Pi for the quintic family f = z1..z5 - t**root_power * sum z_i^5.

    root_power = 1 gives x = t**5 (the beta identities); root_power = 2
    gives x = t**10, where sqrt(x) and sqrt(x**(1/5)) are both monomials
    (the Abel-Jacobi pipeline).
    """
    from .forms import fermat_space, fermat_pi_data
    from .poly import Poly

    space = fermat_space(5, ("t",))
    prod = space.const(1)
    for nm in space.zvars:
        prod = prod * space.var(nm)
    quintics = space.poly()
    for nm in space.zvars:
        quintics = quintics + space.var(nm, 5)
    f = prod - Poly.var(space.names, "t", root_power) * quintics
    chart = ModuliChart([(-5, 1, 1, 1, 1, 1)], names=("x",))
    return fermat_pi_data(
        (1, 1, 1, 1, 1), f, chart, {0: ("t", 5 * root_power)}, space=space
    )


def p22211_pi_data():
    """Pi for the degree-8 family in P(2,2,2,1,1), printed denominator
    z1z2z3z4z5 + t1 t2 (z1^4+z2^4+z3^4+z4^8+z5^8) + t1 t2^-3 z4^4 z5^4
    with x1 = t1^4, x2 = t2^8."""
    from .forms import FormSpace, fermat_pi_data
    from .poly import Poly

    space = FormSpace(tuple(f"z{i}" for i in range(1, 6)), ("t1", "t2"))
    names = space.names
    prod = space.const(1)
    for nm in space.zvars:
        prod = prod * space.var(nm)
    powers = (4, 4, 4, 8, 8)
    vertex = space.poly()
    for nm, p in zip(space.zvars, powers):
        vertex = vertex + space.var(nm, p)
    f = (
        prod
        + Poly.var(names, "t1") * Poly.var(names, "t2") * vertex
        + Poly.var(names, "t1") * Poly.var(names, "t2", -3)
        * space.var("z4", 4) * space.var("z5", 4)
    )
    chart = ModuliChart(
        [(-4, 1, 1, 1, 0, 0, 1), (0, 0, 0, 0, 1, 1, -2)], names=("x1", "x2")
    )
    return fermat_pi_data(
        (2, 2, 2, 1, 1), f, chart, {0: ("t1", 4), 1: ("t2", 8)}, space=space
    )


def p72221_pi_data():
    """Pi for the degree-14 family in P(7,2,2,2,1), printed denominator
    with x1 = t1, x2 = t2^2, x3 = t3^7, x4 = t4^7."""
    from .forms import FormSpace, fermat_pi_data
    from .poly import Poly

    space = FormSpace(tuple(f"z{i}" for i in range(1, 6)), ("t1", "t2", "t3", "t4"))
    names = space.names

    def mono(**exps):
        p = space.const(1)
        for nm, e in exps.items():
            p = p * Poly.var(names, nm, e)
        return p

    prod = mono(z1=1, z2=1, z3=1, z4=1, z5=1)
    vertex = (
        space.var("z1", 2) + space.var("z2", 7) + space.var("z3", 7)
        + space.var("z4", 7) + space.var("z5", 14)
    )
    f = (
        prod
        - mono(t1=1, t2=1, t3=1, t4=4) * vertex
        - mono(t1=1, t3=1, t4=4) * mono(z1=1, z5=7)
        - mono(t1=1, t2=1) * mono(z2=1, z3=1, z4=1, z5=8)
        - mono(t1=1, t2=1, t3=-1, t4=3) * mono(z2=2, z3=2, z4=2, z5=2)
    )
    chart = ModuliChart(
        [
            (-1, 0, 0, 0, 0, -1, 1, 1, 0),
            (0, 1, 0, 0, 0, 1, -2, 0, 0),
            (0, 0, 1, 1, 1, 0, 0, 1, -4),
            (0, 0, 0, 0, 0, 1, 0, -2, 1),
        ],
        names=("x1", "x2", "x3", "x4"),
    )
    return fermat_pi_data(
        (7, 2, 2, 2, 1),
        f,
        chart,
        {0: ("t1", 1), 1: ("t2", 2), 2: ("t3", 7), 3: ("t4", 7)},
        space=space,
    )


def paper_quintic_beta(data):
    """The specific beta_x printed for the mirror quintic, term by term.

    Layout: Theta^3/25 {z1 i1 L2 + z3 i3 L4 + (z3 i3 + z4 i4)(L1 + L2)} Pi
          + Theta^2/125 {(z3 i3 + z4 i4) L1 L2 + z3 i3 (L1 + L2) L4} Pi
          + Theta/625 z3 i3 L4 L1 L2 Pi
          + sum_{I in {1..4}, |I|>=1} Theta^(4-|I|)/5^(|I|+1) z5 i5 L_I Pi
    where i_k and L_k use the scaling fields z_k d/dz_k.
    """
    from itertools import combinations

    from .forms import BetaForm, TorusField, interior_product, lie_derivative

    space = data.space
    fields = [TorusField.scaling(space, nm) for nm in space.zvars]

    def L(form, k):
        return lie_derivative(fields[k - 1], form)

    def ic(form, k):
        return interior_product(fields[k - 1], form)

    pi = data.pi
    f5 = Fraction(1, 5)
    pieces = []
    block1 = ic(L(pi, 2), 1) + ic(L(pi, 4), 3)
    l12 = L(pi, 1) + L(pi, 2)
    block1 = block1 + ic(l12, 3) + ic(l12, 4)
    pieces.append(({(3,): f5 ** 2}, block1))
    l1l2 = L(L(pi, 2), 1)
    l12_l4 = L(L(pi, 4), 1) + L(L(pi, 4), 2)
    block2 = ic(l1l2, 3) + ic(l1l2, 4) + ic(l12_l4, 3)
    pieces.append(({(2,): f5 ** 3}, block2))
    pieces.append(({(1,): f5 ** 4}, ic(L(l1l2, 4), 3)))
    for size in range(1, 5):
        for I in combinations((1, 2, 3, 4), size):
            form = pi
            for k in reversed(I):
                form = L(form, k)
            pieces.append(({(4 - size,): f5 ** (size + 1)}, ic(form, 5)))
    return BetaForm(data, pieces)


def quintic_model(order=8):
    """The enhanced quintic, fully assembled."""
    doc = load_input("quintic")
    doc.setdefault("options", {})["order"] = order
    return assemble(doc)


def quintic_series(order=8):
    model = quintic_model(order)
    return model, gamma_series(model.chart, model.ring, order, model.certificates)

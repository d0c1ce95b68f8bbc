import pytest

from toricgkz import intlat
from toricgkz.errors import InvalidInput
from toricgkz.fans import (
    Fan,
    MonomialIdeal,
    canonical_triangulation,
    check_regular,
    check_semipositive,
    dual_cone_generators,
    enhanced_fan,
    fan_volume,
    primitive_collections,
    primitive_relations,
    sr_ideal,
)
from toricgkz.intlat import (
    BraneData,
    Polytope,
    enhance_polytope,
    fermat_dual_polytope,
    normalized_volume,
)

L0 = (-1, 0, 0, 0, 0, 1, 1, -1)
L1 = (-5, 1, 1, 1, 1, 1, 0, 0)
L1_MINUS_L0 = tuple(a - b for a, b in zip(L1, L0))


def p4_fan():
    rays = [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
        (-1, -1, -1, -1),
    ]
    cones = [tuple(c for c in range(5) if c != k) for k in range(5)]
    return Fan(rays, cones, complete=True)


def enhanced_quintic():
    delta = fermat_dual_polytope((1, 1, 1, 1, 1))
    brane = BraneData((-1, 0, 0, 0, 0, 1), delta)
    hat = enhance_polytope(delta, brane)
    fan = enhanced_fan(p4_fan(), brane)
    return delta, brane, hat, fan


def test_enhanced_quintic_nine_cones():
    _, _, hat, fan = enhanced_quintic()
    tri = canonical_triangulation(fan, hat)
    assert len(tri) == 9
    listed = {
        (0, 1, 2, 3, 4, 6),
        (0, 1, 2, 3, 5, 7),
        (0, 1, 2, 4, 5, 7),
        (0, 1, 3, 4, 5, 7),
        (0, 2, 3, 4, 5, 7),
        (0, 1, 2, 3, 6, 7),
        (0, 1, 2, 4, 6, 7),
        (0, 1, 3, 4, 6, 7),
        (0, 2, 3, 4, 6, 7),
    }
    assert set(tri.simplices) == listed


def test_cone_count_matches_volume_oracle():
    _, _, hat, fan = enhanced_quintic()
    assert len(fan.max_cones) == fan_volume(fan)
    assert fan_volume(fan) == normalized_volume(hat.points) == 9


def test_untouched_cones_pass_through():
    # cones away from w0 survive lifting unchanged (joined with w1)
    _, _, hat, fan = enhanced_quintic()
    ray_idx = {r: i for i, r in enumerate(fan.rays)}
    w1 = ray_idx[(-1, -1, -1, -1, 1)]
    lifted = tuple(sorted([ray_idx[(0, 1, 0, 0, 0)], ray_idx[(0, 0, 1, 0, 0)],
                           ray_idx[(0, 0, 0, 1, 0)], ray_idx[(-1, -1, -1, -1, 0)], w1]))
    assert lifted in fan.max_cones


def test_p1_triangulation_trivial():
    poly = Polytope([(0,), (1,), (-1,)])
    fan = Fan([(1,), (-1,)], [(0,), (1,)], complete=True)
    tri = canonical_triangulation(fan, poly)
    assert tri.simplices == ((0, 1), (0, 2))


def test_primitive_relations_enhanced_quintic():
    _, _, hat, fan = enhanced_quintic()
    rels, undefined = primitive_relations(fan, hat)
    assert not undefined
    got = {r.collection: r.relation for r in rels}
    assert set(got) == {(1, 2, 3, 4, 7), (5, 6), (1, 2, 3, 4, 5)}
    assert got[(1, 2, 3, 4, 7)] == L1_MINUS_L0
    assert got[(5, 6)] == L0
    assert got[(1, 2, 3, 4, 5)] == L1


def test_primitive_relation_p2():
    poly = Polytope([(0, 0), (1, 0), (0, 1), (-1, -1)])
    fan = Fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)], complete=True)
    rels, _ = primitive_relations(fan, poly)
    assert len(rels) == 1
    assert rels[0].relation == (-3, 1, 1, 1)
    assert check_semipositive(rels).passed


def test_primitive_relation_f3_fails_semipositive():
    poly = Polytope([(0, 0), (1, 0), (0, 1), (-1, 3), (0, -1)])
    fan = Fan(
        [(1, 0), (0, 1), (-1, 3), (0, -1)],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
        complete=True,
    )
    rels, _ = primitive_relations(fan, poly)
    by_coll = {r.collection: r for r in rels}
    assert by_coll[(1, 3)].l0 == 1
    cert = check_semipositive(rels)
    assert not cert.passed
    assert cert.witness.l0 == 1


def test_semipositive_enhanced_quintic():
    _, _, hat, fan = enhanced_quintic()
    rels, und = primitive_relations(fan, hat)
    assert check_semipositive(rels, und).passed


def test_regularity_enhanced_quintic():
    _, _, hat, fan = enhanced_quintic()
    rels, und = primitive_relations(fan, hat)
    lat = hat.relation_lattice()
    cert = check_regular(rels, lat, und)
    assert cert.passed
    assert cert.witness == sorted([L0, L1_MINUS_L0])


def test_regularity_rank0_vacuous():
    poly = Polytope([(0,), (1,)])
    fan = Fan([(1,)], [(0,)])
    rels, und = primitive_relations(fan, poly)
    lat = poly.relation_lattice()
    assert lat.rank == 0
    assert check_regular(rels, lat, und).passed


def test_regularity_negative_control():
    _, _, hat, fan = enhanced_quintic()
    rels, und = primitive_relations(fan, hat)
    lat = hat.relation_lattice()
    neg = rels[0].__class__(rels[0].collection, tuple(-x for x in rels[0].relation))
    cert = check_regular(list(rels) + [neg], lat, und)
    assert not cert.passed


def test_sr_ideal_quintic():
    _, _, hat, fan = enhanced_quintic()
    sr = sr_ideal(fan)
    assert set(sr.generators) == {(1, 2, 3, 4, 7), (5, 6), (1, 2, 3, 4, 5)}


def test_sr_ideal_p4():
    fan = p4_fan()
    sr = sr_ideal(fan)
    assert sr.generators == ((1, 2, 3, 4, 5),)


def brute_minimal_nonfaces(fan):
    from itertools import combinations

    n = len(fan.rays)
    cones = [set(c) for c in fan.max_cones]
    nonfaces = [
        s
        for size in range(1, n + 1)
        for s in combinations(range(n), size)
        if not any(set(s) <= c for c in cones)
    ]
    return sorted(
        s
        for s in nonfaces
        if not any(set(t) < set(s) for t in nonfaces if t != s)
    )


def test_sr_against_bruteforce_oracle():
    for fan in [p4_fan(), enhanced_quintic()[3]]:
        expect = [tuple(i + 1 for i in s) for s in brute_minimal_nonfaces(fan)]
        assert sorted(sr_ideal(fan).generators) == sorted(expect)


def test_simplex_volumes_sum():
    _, _, hat, fan = enhanced_quintic()
    tri = canonical_triangulation(fan, hat)
    total = 0
    for s in tri.simplices:
        verts = [hat.points[i] for i in s]
        total += intlat.simplex_normalized_volume(verts)
    assert total == normalized_volume(hat.points)


def test_invalid_fan_rejected():
    # two overlapping 1-cones along the same line are fine, but two 2-cones
    # overlapping in their interiors must be rejected
    with pytest.raises(InvalidInput):
        Fan([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])


def test_monomial_ideal_minimality():
    with pytest.raises(InvalidInput):
        MonomialIdeal(((1, 2), (1, 2, 3)))

import random

import pytest

from toricgkz import intlat
from toricgkz.errors import DegenerateBrane, InvalidInput, UnsupportedWeights
from toricgkz.intlat import (
    BraneData,
    Cone,
    Polytope,
    dual_cone,
    enhance_polytope,
    extreme_rays,
    fermat_dual_polytope,
    hnf,
    is_strongly_convex,
    kernel_basis,
    lattices_equal,
    lift,
    normalized_volume,
    solve_integer,
    transpose,
)

QUINTIC_EXTRA = ()
P22211_POINTS = [
    (0, 0, 0, 0),
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (-2, -2, -2, -1),
    (-1, -1, -1, 0),
]


def quintic_polytope():
    return fermat_dual_polytope((1, 1, 1, 1, 1))


def test_kernel_quintic():
    lat = kernel_basis(lift(quintic_polytope().points))
    assert lat == [(-5, 1, 1, 1, 1, 1)]


def test_kernel_identity_columns():
    cols = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert kernel_basis(cols).rank == 0


def test_kernel_p22211():
    lat = kernel_basis(lift(P22211_POINTS))
    expect = [(-4, 1, 1, 1, 0, 0, 1), (0, 0, 0, 0, 1, 1, -2)]
    assert lat == expect


def test_kernel_rows_annihilate():
    cols = lift(P22211_POINTS)
    for row in kernel_basis(cols).basis:
        assert all(
            sum(row[i] * cols[i][k] for i in range(len(cols))) == 0
            for k in range(len(cols[0]))
        )


def test_hnf_idempotent_and_lattice_preserving():
    rng = random.Random(23)
    for _ in range(40):
        rows = [
            tuple(rng.randint(-6, 6) for _ in range(4))
            for _ in range(rng.randint(1, 4))
        ]
        h = hnf(rows)
        assert hnf(h) == h
        # mutual integer solvability
        for r in rows:
            assert solve_integer(h, r) is not None
        for r in h:
            assert solve_integer(rows, r) is not None


def test_fermat_dual_polytopes():
    p = quintic_polytope()
    assert p.points[0] == (0, 0, 0, 0)
    assert p.points[5] == (-1, -1, -1, -1)
    assert fermat_dual_polytope((2, 2, 2, 1, 1)).points[5] == (-2, -2, -2, -1)
    assert fermat_dual_polytope((7, 2, 2, 2, 1)).points[5] == (-7, -2, -2, -2)
    with pytest.raises(UnsupportedWeights):
        fermat_dual_polytope((3, 2, 1, 1, 1))  # 3 does not divide 8
    with pytest.raises(UnsupportedWeights):
        fermat_dual_polytope((1, 1, 1, 2, 2))  # w5 != 1


def test_duplicate_points_rejected():
    with pytest.raises(InvalidInput):
        Polytope([(0, 0), (1, 0), (1, 0)])


def test_enhance_quintic():
    p = quintic_polytope()
    brane = BraneData((-1, 0, 0, 0, 0, 1), p)
    hat = enhance_polytope(p, brane)
    assert len(hat) == 8
    assert hat.points[6] == (0, 0, 0, 0, 1)
    assert hat.points[7] == (-1, -1, -1, -1, 1)
    lat = hat.relation_lattice()
    l0 = (-1, 0, 0, 0, 0, 1, 1, -1)
    l1 = (-5, 1, 1, 1, 1, 1, 0, 0)
    assert lat == [l0, l1]
    assert lat.contains(l0) and lat.contains(l1)


def test_enhance_degenerate():
    p = quintic_polytope()
    with pytest.raises(DegenerateBrane):
        BraneData((0, 0, 0, 0, 0, 0), p)


def test_enhanced_kernel_degree_zero():
    p = quintic_polytope()
    hat = enhance_polytope(p, BraneData((-1, 0, 0, 0, 0, 1), p))
    for row in hat.relation_lattice().basis:
        assert sum(row) == 0


def test_strong_convexity():
    l0 = (-1, 0, 0, 0, 0, 1, 1, -1)
    l1 = (-5, 1, 1, 1, 1, 1, 0, 0)
    diff = tuple(a - b for a, b in zip(l1, l0))
    assert is_strongly_convex(Cone([l0, diff]))
    v = (2, -1, 3)
    assert not is_strongly_convex(Cone([v, tuple(-x for x in v)]))
    assert is_strongly_convex(Cone((), 3))


def brute_dual_2d(gens, radius=6):
    pts = [
        p
        for p in intlat.box_lattice_points(radius, 2)
        if all(intlat.dot(p, g) >= 0 for g in gens) and any(p)
    ]
    return pts


def test_dual_cone_2d_against_brute_force():
    gens = [(1, 0), (1, 5)]
    dual = dual_cone(Cone(gens))
    assert sorted(dual.generators) == [(0, 1), (5, -1)]
    # every brute-force dual point is a nonnegative combination of the output
    dc = Cone(dual.generators)
    for p in brute_dual_2d(gens):
        assert dc.contains(p)


def test_dual_cone_involution():
    rng = random.Random(17)
    for _ in range(20):
        dim = rng.choice([2, 3])
        gens = []
        while True:
            gens = [
                tuple(rng.randint(-4, 4) for _ in range(dim))
                for _ in range(rng.randint(dim, dim + 2))
            ]
            c = Cone([g for g in gens if any(g)] or [(1,) * dim], dim)
            if c.rank() == dim and is_strongly_convex(c):
                break
        c = Cone([g for g in gens if any(g)], dim)
        dd = dual_cone(dual_cone(c))
        assert sorted(extreme_rays(dd.generators, dim)) == sorted(
            extreme_rays(c.generators, dim)
        )


def test_dual_of_zero_cone_is_full_space():
    d = dual_cone(Cone((), 2))
    assert not is_strongly_convex(d)
    assert Cone(d.generators).contains((3, -7))


def test_normalized_volume_basics():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert normalized_volume(square) == 2
    simplex = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert normalized_volume(simplex) == 1
    seg = [(0,), (4,)]
    assert normalized_volume(seg) == 4


def test_normalized_volume_quintic_dual():
    # conv(unit vectors, -(1,1,1,1), origin) has normalized volume 5
    pts = quintic_polytope().points
    assert normalized_volume(pts) == 5

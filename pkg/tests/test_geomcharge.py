import random
from fractions import Fraction

import pytest

from gepnerstab.classify import GeometryDescriptor, enumerate_types
from gepnerstab.exactmath import CycloNum, cyclo, embed
from gepnerstab.geomcharge import (
    ChClass,
    MukaiVector,
    NoEigenvalueError,
    build_M,
    charpoly_3x3,
    constants,
    mukai,
    solve_alpha,
    solve_for_type,
    spherical_check,
    zg_absolute,
    zg_geom,
    zg_k3,
)
from gepnerstab.mfcore import WeightedType, koszul_closed_form

K3_44 = GeometryDescriptor("K3", h_square=Fraction(4))
K3_62 = GeometryDescriptor("K3", h_square=Fraction(2))
ELL3 = GeometryDescriptor("elliptic", h_degree=Fraction(3))


def test_build_M_k3_m2():
    # (1, H, pt) coordinates with H-entries resolved via H^2 = 4
    assert build_M(K3_44) == [[-3, -4, -1], [1, 1, 0], [2, 4, 1]]


def test_build_M_elliptic():
    assert build_M(ELL3) == [[-2, -1], [3, 1]]


def test_charpoly_matches_closed_form():
    for geom, m in ((K3_44, 2), (K3_62, 1)):
        coeffs = charpoly_3x3(build_M(geom))
        # -(x+1)(x^2+(m-2)x+1) expanded low->high
        want = [-1, -(m - 1), -(m - 1), -1]
        assert coeffs == [Fraction(c) for c in want]


def test_solve_alpha_elliptic():
    sol = solve_alpha(build_M(ELL3), 3, ELL3)
    assert sol.int_alpha0 == cyclo(3, 1) - 1


def test_solve_alpha_k3():
    sol = solve_alpha(build_M(K3_44), 4, K3_44)
    z = cyclo(4, 1)
    assert sol.int_alpha0 == z - 1
    assert sol.alpha1_coefficient() == z / (1 - z)
    sol2 = solve_alpha(build_M(K3_62), 6, K3_62)
    z = cyclo(6, 1)
    assert sol2.int_alpha0 == z - 1
    assert sol2.alpha1_coefficient() == z / (1 - z)


def test_eigenspace_is_one_dimensional_for_all_cy_targets():
    for wtype, geom in enumerate_types((3, 4), 6):
        if wtype.epsilon != 0:
            continue
        sol = solve_alpha(build_M(geom), wtype.degree, geom)  # raises if dim != 1
        assert len(sol.row) == wtype.n - 1
        # u.M = zeta.u exactly
        mat = build_M(geom)
        z = cyclo(wtype.degree, 1)
        n = len(mat)
        for j in range(n):
            lhs = sum((sol.row[i] * mat[i][j] for i in range(n)), CycloNum.zero())
            assert lhs == z * sol.row[j]


def test_no_eigenvalue_error():
    with pytest.raises(NoEigenvalueError):
        solve_alpha(build_M(ELL3), 5, ELL3)


def test_zg_geom_k3_values():
    sol = solve_alpha(build_M(K3_44), 4, K3_44)
    i = cyclo(4, 1)
    # structure sheaf: ch = (1, 0, 0)
    assert zg_geom(ChClass(2, (1, 0, 0)), sol) == -1 + i
    # ideal sheaf of a point: ch = (1, 0, -1)
    assert zg_geom(ChClass(2, (1, 0, -1)), sol) == i
    # skyscraper: ch = (0, 0, 1)
    assert zg_geom(ChClass(2, (0, 0, 1)), sol) == -1


def test_zg_geom_elliptic_values():
    sol = solve_alpha(build_M(ELL3), 3, ELL3)
    assert zg_geom(ChClass(1, (0, 1)), sol) == -1
    assert zg_geom(ChClass(1, (1, 0)), sol) == cyclo(3, 1) - 1


def test_zg_geom_curve_pushforward():
    # genus 3 curve inside the quartic K3: skyscraper still goes to -1
    sol = solve_for_type(WeightedType((1, 1, 1), 4))
    assert sol.geometry.kind == "K3"
    assert zg_geom(ChClass(1, (0, 1)), sol) == -1
    # (r, delta) = (1, 0): -delta + r*m(1+z)/(1-z) combination; check Gepner shift
    z = cyclo(4, 1)
    v1 = zg_geom(ChClass(1, (1, 0)), sol)
    assert v1 == 2 * (1 + z) / (1 - z)


def test_constants_examples():
    c = constants(WeightedType((1, 1, 1, 1), 4))
    assert c.c_w == 2 + 2 * cyclo(4, 1)
    assert c.theta_w == Fraction(1, 4)
    c2 = constants(WeightedType((1, 1), 4))
    assert c2.theta_w == Fraction(-1, 4)


def test_constants_cross_check_alpha0():
    # C_W * (zeta - 1) = prod (1 - zeta^{-a_j}) for every table type
    for wtype, _ in enumerate_types((2, 3, 4), 6):
        d = wtype.degree
        c = constants(wtype)
        prod = CycloNum.one(d)
        for a in wtype.weights:
            prod = prod * (1 - cyclo(d, -a))
        assert c.c_w * (cyclo(d, 1) - 1) == prod
        # and the koszul closed form is C_W (1 - zeta)
        assert koszul_closed_form(wtype, 0) == c.c_w * (1 - cyclo(d, 1))


def test_constants_ray_numeric():
    for wtype, _ in enumerate_types((2, 3, 4), 6):
        c = constants(wtype)
        box = embed(c.c_w, 64)
        mid = box.midpoint()
        import cmath, math

        want = cmath.exp(1j * math.pi * float(c.theta_w))
        got = mid / abs(mid)
        assert abs(got - want) < 1e-12


def test_mukai_examples():
    # O_X on the quartic: v = (1, 2, 3/2)
    v = mukai(ChClass(2, (1, 0, 0)), 4)
    assert (v.v0, v.v1h, v.v2) == (1, 2, Fraction(3, 2))
    # skyscraper: v = (0, 0, 1)
    vx = mukai(ChClass(2, (0, 0, 1)), 4)
    assert (vx.v0, vx.v1h, vx.v2) == (0, 0, 1)
    assert zg_k3(vx, 4, 4) == -1


def test_zg_k3_agrees_with_solver_on_random_classes():
    rng = random.Random(11)
    for geom, d in ((K3_44, 4), (K3_62, 6)):
        sol = solve_alpha(build_M(geom), d, geom)
        for _ in range(100):
            e = ChClass(2, tuple(Fraction(rng.randint(-9, 9)) for _ in range(3)))
            v = mukai(e, geom.h_square)
            assert zg_k3(v, d, geom.h_square) == zg_geom(e, sol)


def test_zg_k3_closed_values():
    v = mukai(ChClass(2, (1, 0, 0)), 4)
    assert zg_k3(v, 4, 4) == -1 + cyclo(4, 1)
    v = mukai(ChClass(2, (1, 0, -1)), 4)
    assert zg_k3(v, 4, 4) == cyclo(4, 1)


def test_spherical_check():
    # v0 = 2, v1h = 0 forces v2 = 1/2 on a spherical class
    assert spherical_check(MukaiVector(2, 0, Fraction(1, 2)), 4, 4) == "positive"
    assert spherical_check(MukaiVector(2, 0, Fraction(1, 2)), 6, 2) == "positive"
    assert spherical_check(MukaiVector(1, 0, 1), 4, 4) == "violated_rank1"
    assert spherical_check(MukaiVector(3, 0, Fraction(1, 3)), 4, 4) == "positive"
    with pytest.raises(ValueError):
        spherical_check(MukaiVector(2, 0, 1), 4, 4)  # square != -2
    with pytest.raises(ValueError):
        spherical_check(MukaiVector(1, 2, Fraction(3, 2)), 4, 4)  # v1h != 0


def test_spherical_positive_for_all_higher_ranks():
    # -v2 + (d/8) v0 >= (1/v0)((d/8) v0^2 - 1) > 0 whenever v0 >= 2
    for d, h2 in ((4, 4), (6, 2)):
        for v0 in range(2, 30):
            v2 = Fraction(1, v0)  # pinned by square -2 and v1h = 0
            assert spherical_check(MukaiVector(v0, 0, v2), d, h2) == "positive"
            value = -v2 + Fraction(d, 8) * v0
            bound = (Fraction(d, 8) * v0 * v0 - 1) / v0
            assert value >= bound > 0


def test_zg_absolute_skyscraper_is_minus_cw():
    for wtype, geom in enumerate_types((2, 3, 4), 6):
        if wtype.n == 2:
            continue  # no geometric chart for points; covered by hearts
        dim = 1 if wtype.n == 3 else 2
        sky = ChClass(dim, (0,) * dim + (1,))
        assert zg_absolute(sky, wtype) == -constants(wtype).c_w

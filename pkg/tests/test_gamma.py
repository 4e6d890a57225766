import random

import pytest

from higman.gamma import (
    CapExceeded,
    GammaGroup,
    check_relators,
    g_generator,
    g_inv,
    g_mul,
    g_order,
    g_pow,
    jacobson_check,
    rotation_check,
    zs_check,
    zs_factor,
)
from higman.rewrite import Context, RuleSystem
from higman.zmod import Modulus


@pytest.fixture(scope="module")
def g342(rs342):
    return GammaGroup(rules=rs342)


@pytest.fixture(scope="module")
def g343(rs343):
    return GammaGroup(rules=rs343)


def test_generator_examples(g342):
    assert g_generator(g342, 1).poly == g342.ring("1 + 3*x1")
    gens = g342.generators()
    assert len(set(gens)) == 4
    degenerate = GammaGroup(Context(3, 1, 4))
    assert all(a.is_identity() for a in degenerate.generators())


def test_defining_relation_and_inverse(g342):
    a = g342.generators()
    assert g_mul(a[1], a[0]) == g_mul(a[0], g_pow(a[1], 4))
    for x in a:
        assert g_mul(x, g_inv(x)).is_identity()
    assert g_pow(a[1], 9).is_identity()
    assert g_pow(a[1], Modulus(3, 2)(9)).is_identity()


def test_order_examples(g342, g343):
    assert g_order(g342.generator(1)) == 3
    assert g_order(g342.identity()) == 1
    assert g_order(g343.generator(1)) == 9


def test_enumerate_examples(g342):
    a = g342.generators()
    assert len(g342.enumerate(a)) == 81
    assert len(g342.enumerate([a[0], a[2]])) == 9
    assert len(g342.enumerate([g342.identity()])) == 1
    with pytest.raises(CapExceeded):
        g342.enumerate(a, cap=10)


def test_check_relators(g342, g343):
    assert check_relators(g342)
    assert check_relators(g343)
    assert not check_relators(GammaGroup(rules=RuleSystem.corrupted(Context(3, 3, 4))))


def test_zs_check_small(g342):
    rep = zs_check(g342, keep_factors=True)
    assert (rep["sizeS"], rep["sizeT"], rep["sizeG"]) == (9, 9, 81)
    assert rep["intersection_trivial"] and rep["unique_factorization"]
    a = g342.generators()
    x = a[3] * a[0] * a[1] * a[2]
    s, t = zs_factor(rep["factors"], x)
    assert s * t == x


def test_zs_check_degenerate():
    rep = zs_check(GammaGroup(Context(3, 1, 4)))
    assert (rep["sizeS"], rep["sizeT"], rep["sizeG"]) == (1, 1, 1)


def test_jacobson(g342):
    rep = jacobson_check(g342)
    assert rep == {"free_size": 9, "sizeS": 9, "equal": True}


def test_jacobson_n3(g343):
    rep = jacobson_check(g343)
    assert rep["free_size"] == 243 and rep["equal"]


def test_group_axioms(g342):
    rng = random.Random(1)
    elements = sorted(g342.enumerate(g342.generators()), key=str)
    for _ in range(200):
        x, y, z = (rng.choice(elements) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * g342.identity() == x == g342.identity() * x
        assert (x * y).inverse() == y.inverse() * x.inverse()


def test_exponent_laws(g343):
    a = g343.generators()
    x = a[0] * a[1] * a[3].inverse()
    for r in range(0, 30, 7):
        for s in range(0, 30, 5):
            assert x ** (r + s) == (x**r) * (x**s)
    assert (x**27).is_identity()


def test_relation_consequences(g343):
    # a_{i+1} a_i = a_i a_{i+1}^k gives a_{i+1}^m a_i^r = a_i^r a_{i+1}^(m k^r)
    a = g343.generators()
    for i in range(4):
        j = (i + 1) % 4
        for r in range(1, 4):
            for m in (1, 2, 5):
                assert a[j] ** m * a[i] ** r == a[i] ** r * a[j] ** (m * 4**r)


def test_rotation_symmetry(g342):
    elements = g342.enumerate(g342.generators())
    rep = rotation_check(g342, elements)
    assert rep == {"permutation": True, "order": 4}

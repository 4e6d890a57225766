import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higman.ncpoly import (
    IntPoly,
    NotInvertibleForm,
    PolyParseError,
    PolyRing,
    commutator,
    format_poly,
    gen_unit,
    left_normed,
    magnus_expand,
    p_class,
    parse_poly,
    poly_arith,
    unit_inverse,
    unit_pow,
    word_expand,
    word_inverse,
    word_power,
)

R = PolyRing(3, 2, 4)


def test_arith_examples():
    x0, x1 = R.var(0), R.var(1)
    assert x0 * x1 == R.monomial((0, 1))
    assert x1 * x0 == R.monomial((1, 0))
    assert x0 * x1 != x1 * x0
    f = R("2*x0.x1 + 5*x3 + 7")
    assert f * R.one() == f
    assert poly_arith(x0.scale(3), x1.scale(3), "mul") == R.zero()
    assert poly_arith(f, 2, "scale") == f + f


def test_gen_unit_examples():
    assert gen_unit(R, 0) == R("1 + 3*x0")
    assert gen_unit(PolyRing(3, 1, 4), 0) == 1
    assert gen_unit(PolyRing(5, 2, 4), 2) == PolyRing(5, 2, 4)("1 + 5*x2")


def test_unit_inverse_examples():
    assert unit_inverse(R("1 + 3*x0")) == R("1 + 6*x0")
    assert unit_inverse(R.one()) == R.one()
    u = R("1 + 3*x0 + 3*x1")
    assert unit_inverse(u) == R("1 + 6*x0 + 6*x1")
    assert u * unit_inverse(u) == 1


def test_unit_inverse_rejects_non_units():
    with pytest.raises(NotInvertibleForm):
        unit_inverse(R("2 + 3*x0"))
    with pytest.raises(NotInvertibleForm):
        unit_inverse(R("1 + x0"))


def test_unit_pow_examples():
    u = R("1 + 3*x1")
    assert unit_pow(u, 9) == 1
    assert unit_pow(u, 0) == 1
    assert unit_pow(u, 3) == 1
    assert unit_pow(u, 2) == R("1 + 6*x1")


def test_word_expand_examples():
    assert word_expand(R, [(1, 1), (0, 1)]) == R("1 + 3*x0 + 3*x1")
    assert word_expand(R, []) == 1
    assert word_expand(R, [(0, 1), (0, -1)]) == 1


def test_magnus_examples():
    c = magnus_expand(commutator([(0, 1)], [(1, 1)]), 2)
    assert c == IntPoly({(): 1, (0, 1): 1, (1, 0): -1}, 2)
    assert magnus_expand([(0, 1)], 3) == IntPoly({(): 1, (0,): 1}, 3)
    w = left_normed([0, 1, 1])
    s = magnus_expand(w, 3)
    assert s.low_degree() == 3
    lie = {(0, 1, 1): 1, (1, 0, 1): -2, (1, 1, 0): 1}
    assert s.homogeneous(3) == lie


def _bracket(u: dict, v: dict) -> dict:
    out: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {m: c for m, c in out.items() if c}


@pytest.mark.parametrize("gens", [[0, 1], [1, 0], [0, 1, 1], [0, 1, 0], [1, 0, 1, 1], [0, 1, 2, 3]])
def test_magnus_lowest_term_is_lie_bracket(gens):
    lie = {(gens[0],): 1}
    for g in gens[1:]:
        lie = _bracket(lie, {(g,): 1})
    d = len(gens)
    s = magnus_expand(left_normed(gens), d)
    assert s.low_degree() == d
    assert s.homogeneous(d) == lie


def test_p_class_examples():
    assert p_class([(0, 1)], 3, 6) == 1
    assert p_class([(0, 3)], 3, 6) == 2
    assert p_class(commutator([(0, 1)], [(1, 1)]), 3, 6) == 2
    assert p_class(left_normed([0, 1, 1]), 3, 6) == 3


def test_p_class_filtration():
    rng = random.Random(7)
    for _ in range(40):
        w = [(rng.randrange(2), rng.choice([-2, -1, 1, 2])) for _ in range(rng.randint(1, 3))]
        v = [(rng.randrange(2), rng.choice([-2, -1, 1, 2])) for _ in range(rng.randint(1, 3))]
        cw, cv = p_class(w, 3, 6), p_class(v, 3, 6)
        assert p_class(w + v, 3, 6) >= min(cw, cv)
        assert p_class(word_inverse(w), 3, 6) == cw
        assert p_class(commutator(w, v), 3, 6) >= min(cw + cv, 6)
        assert p_class(word_power(w, 3), 3, 6) >= min(cw + 1, 6)


def test_parse_format_examples():
    f = parse_poly(R, "x1.x0 - 4*x0.x1 - x1 - 6*x1.x1 - 3*x1.x1.x1")
    assert format_poly(f) == "5*x0.x1 + 8*x1 + x1.x0 + 3*x1.x1 + 6*x1.x1.x1"
    assert format_poly(R.zero()) == "0"
    assert format_poly(R("3")) == "3"
    for bad in ["x4", "x0..x1", "2**x0", "y0"]:
        with pytest.raises(PolyParseError):
            parse_poly(R, bad)


monos = st.lists(st.integers(0, 3), max_size=4).map(tuple)
polys = st.dictionaries(monos, st.integers(0, 8), max_size=5).map(lambda d: R.from_terms(d.items()))
units = polys.map(lambda q: R.one() + q.scale(3) - R.const(3 * q.constant()))


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f + g) * h == f * h + g * h
    assert f - f == R.zero()
    assert R.one() * f == f == f * R.one()


@settings(max_examples=150, deadline=None)
@given(polys)
def test_format_round_trip(f):
    assert parse_poly(R, format_poly(f)) == f


@settings(max_examples=100, deadline=None)
@given(units)
def test_units_invert_and_have_exponent_pn(u):
    inv = unit_inverse(u)
    assert u * inv == 1 and inv * u == 1
    assert unit_pow(u, 9) == 1


words = st.lists(st.tuples(st.integers(0, 3), st.integers(-4, 4)), max_size=5)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_word_expand_is_a_homomorphism(w, v):
    assert word_expand(R, w + v) == word_expand(R, w) * word_expand(R, v)
    assert word_expand(R, word_inverse(w)) == unit_inverse(word_expand(R, w))

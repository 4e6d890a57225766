import random

import pytest

from higman.gamma import GammaGroup
from higman.rewrite import Context
from higman.zappa import (
    HTilde,
    HTildeElement,
    WordParseError,
    format_word,
    h_inv,
    h_mul,
    h_normalize,
    hom_to_gamma,
    parse_word,
    push,
    relation_words,
)

CTX = Context(3, 2, 4)
H = HTilde(CTX)


@pytest.fixture(scope="module")
def group(rs342):
    return GammaGroup(rules=rs342)


def random_raw(rng, length=6):
    return [(rng.randrange(4), rng.randrange(-9, 10)) for _ in range(rng.randint(0, length))]


def test_push_examples():
    assert push(H, (1, 1), [(0, 1)]) == (((0, 1),), (1, 4))
    assert push(H, (1, 1), [(2, 1)]) == (((2, 7),), (1, 1))
    assert push(H, (3, 5), []) == ((), (3, 5))


def test_normalize_examples():
    assert h_normalize(H, [(1, 1), (0, 1)]) == HTildeElement(((0, 1),), ((1, 4),))
    assert h_normalize(H, [(0, 1), (0, 8)]).is_identity()
    assert h_normalize(H, [(3, 1), (0, 1)]) == HTildeElement(((0, 7),), ((3, 1),))
    assert h_normalize(H, [(0, 1), (2, 3), (2, 6), (0, 8)]).is_identity()


def test_normalize_matches_hom_of_raw_word(group):
    rng = random.Random(2)
    gens = group.generators()
    for _ in range(100):
        raw = random_raw(rng)
        direct = group.identity()
        for g, e in raw:
            direct = direct * group.pow(gens[g], e)
        assert hom_to_gamma(H, h_normalize(H, raw), group) == direct


def test_inverse_and_idempotence():
    rng = random.Random(4)
    for _ in range(100):
        x = h_normalize(H, random_raw(rng))
        assert h_mul(H, x, h_inv(H, x)).is_identity()
        assert h_mul(H, h_inv(H, x), x).is_identity()
        assert h_normalize(H, x.letters()) == x
        assert all(g % 2 == 0 for g, _ in x.even) and all(g % 2 for g, _ in x.odd)
        blocks = x.even, x.odd
        for block in blocks:
            assert all(a[0] != b[0] for a, b in zip(block, block[1:]))
            assert all(0 < e < 9 for _, e in block)


@pytest.mark.parametrize("n", [2, 3])
def test_relations_and_associativity(n):
    h = HTilde(Context(3, n, 4))
    for lhs, rhs in relation_words(4):
        assert h.normalize(lhs) == h.normalize(rhs)
    rng = random.Random(n)
    for _ in range(100):
        x, y, z = (h.normalize(random_raw(rng)) for _ in range(3))
        assert h.mul(h.mul(x, y), z) == h.mul(x, h.mul(y, z))


def test_hom(group):
    assert hom_to_gamma(H, H.identity(), group).is_identity()
    rng = random.Random(6)
    for _ in range(100):
        x, y = h_normalize(H, random_raw(rng)), h_normalize(H, random_raw(rng))
        assert hom_to_gamma(H, h_mul(H, x, y), group) == (
            hom_to_gamma(H, x, group) * hom_to_gamma(H, y, group))


def test_word_grammar():
    assert parse_word("a1^3, a0^-1, a2") == [(1, 3), (0, -1), (2, 1)]
    assert parse_word("1") == [] and parse_word("") == []
    x = H.parse("a1, a0")
    assert str(x) == "a0^1, a1^4"
    assert format_word(()) == "1"
    for bad in ["a4", "b1", "a1^x"]:
        with pytest.raises(WordParseError):
            parse_word(bad)

import random
from fractions import Fraction

import pytest

from higman.expmap import (
    CapExceeded,
    CycleFunction,
    ansatz_table,
    brute_oracle,
    from_csv,
    kx_orbits,
    match_ceiling,
    search_best,
    to_csv,
    verify,
)


def naive_best(size, k):
    """Generate-and-test over every permutation, kept deliberately simple."""
    import itertools

    best = -1
    for perm in itertools.permutations(range(size)):
        if all(perm[perm[perm[perm[x]]]] == x for x in range(size)):
            best = max(best, sum(perm[(x + 1) % size] == k * perm[x] % size for x in range(size)))
    return best


def test_verify_examples():
    ident = verify(CycleFunction.identity(3, 2, 4))
    assert ident.is_bijection and ident.four_periodic and ident.match_count == 0
    powers = verify(CycleFunction(3, 2, 4, tuple(pow(4, x, 9) for x in range(9))))
    assert not powers.is_bijection
    assert set(pow(4, x, 9) for x in range(9)) == {1, 4, 7}


def test_breakpoint_definition():
    rng = random.Random(0)
    for _ in range(50):
        table = list(range(9))
        rng.shuffle(table)
        f = CycleFunction(3, 2, 4, tuple(table))
        rep = verify(f)
        inv = [pow(4, -x % 3, 9) for x in range(9)]
        a = [table[x] * inv[x] % 9 for x in range(9)]
        assert rep.breakpoints == sum(a[(x + 1) % 9] != a[x] for x in range(9))
        assert rep.breakpoints == 9 - rep.match_count
        assert rep.epsilon == Fraction(rep.breakpoints, 9)


@pytest.mark.parametrize("p,m,k", [(3, 1, 4), (3, 2, 4), (3, 2, 7), (3, 2, 10), (2, 3, 3), (5, 1, 6)])
def test_oracle_matches_naive_and_exhaustive(p, m, k):
    best, witness = brute_oracle(p, m, k)
    assert best == naive_best(p**m, k % p**m)
    rep = verify(witness)
    assert rep.is_bijection and rep.four_periodic and rep.match_count == best
    assert search_best(p, m, k, "exhaustive").report.match_count == best


def test_oracle_examples():
    best, witness = brute_oracle(3, 2, 4)
    assert (best, verify(witness).breakpoints) == (4, 5)
    assert brute_oracle(3, 0, 4)[0] == 1
    with pytest.raises(CapExceeded):
        brute_oracle(3, 3, 4)


def test_ceiling():
    assert match_ceiling(9, 4) == 9 - len(kx_orbits(9, 4))
    assert brute_oracle(3, 2, 4)[0] <= match_ceiling(9, 4)


def test_backtrack_27_reaches_pinned_value():
    res = search_best(3, 3, 4, "backtrack", budget=2_000_000)
    assert res.complete and not res.budget_exceeded
    assert (res.report.match_count, res.report.breakpoints) == (20, 7)
    assert res.report.is_bijection and res.report.four_periodic


def test_budget_exceeded_is_reported():
    res = search_best(3, 3, 4, "backtrack", budget=2_000)
    assert res.budget_exceeded and not res.complete
    assert res.report.is_bijection and res.report.four_periodic


def test_exhaustive_refuses_large():
    with pytest.raises(CapExceeded):
        search_best(3, 4, 4, "exhaustive")


def test_single_block_ansatz_is_never_a_bijection():
    for m in (2, 3):
        size = 3**m
        for c in range(size):
            table = ansatz_table(size, 4, [], [c])
            assert len(set(table)) < size
    res = search_best(3, 2, 4, "block_ansatz", budget=5_000, blocks=1, restarts=4)
    assert res.extra["ansatz_rejected"] == 4
    assert res.report.is_bijection


def test_block_ansatz_search_returns_admissible_table():
    res = search_best(3, 2, 4, "block_ansatz", budget=20_000, seed=1)
    assert res.report.is_bijection and res.report.four_periodic


def test_every_result_satisfies_f4():
    for k in (4, 7, 10):
        f = search_best(3, 2, k, "exhaustive").function
        assert all(f(f(f(f(x)))) == x for x in range(9))


def test_csv_round_trip():
    _, f = brute_oracle(3, 2, 4)
    text = to_csv(f)
    assert text.splitlines()[0] == "x,f(x)"
    assert from_csv(text, 3, 2, 4) == f
    with pytest.raises(ValueError):
        from_csv("x,f(x)\n0,0\n", 3, 2, 4)

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kannappan.algebra import (
    FiniteSemigroup,
    InvalidAutomorphism,
    InvolutiveAutomorphism,
    NotAssociative,
    OutOfRangeEntry,
    direct_product,
    enumerate_involutions,
    find_identity,
    index_period,
    lcm_of_periods,
    verify_associativity,
)

from conftest import cyclic, left_zero, trunc


def brute_involutions(S):
    n, t = S.n, S.table
    out = []
    for p in itertools.permutations(range(n)):
        if all(p[p[x]] == x for x in range(n)) and all(
            p[t[x][y]] == t[p[x]][p[y]] for x in range(n) for y in range(n)
        ):
            out.append(p)
    return out


class TestAssociativity:
    def test_cyclic_table_is_valid(self):
        assert verify_associativity(cyclic(3).table) == []

    def test_reports_violations_sorted(self):
        bad = verify_associativity([[0, 0], [1, 0]])
        assert (1, 1, 1) in bad
        assert bad == sorted(bad)
        # exhaustive against the triple loop
        t = [[0, 0], [1, 0]]
        expected = [(x, y, z) for x in range(2) for y in range(2) for z in range(2)
                    if t[t[x][y]][z] != t[x][t[y][z]]]
        assert bad == expected

    def test_truncated_addition_is_valid(self):
        assert verify_associativity([[min(x + y, 3) for y in range(4)] for x in range(4)]) == []

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeEntry):
            verify_associativity([[0, 2], [1, 0]])

    def test_constructor_rejects_non_associative(self):
        with pytest.raises(NotAssociative) as info:
            FiniteSemigroup([[0, 0], [1, 0]])
        assert (1, 1, 1) in info.value.violations


class TestIdentityAndPeriods:
    def test_identity(self):
        assert find_identity(cyclic(3)) == 0
        assert find_identity(left_zero(2)) is None
        assert find_identity(trunc(4)) == 0

    def test_index_period_examples(self):
        assert (index_period(cyclic(3), 1).index, index_period(cyclic(3), 1).period) == (1, 3)
        c = index_period(trunc(4), 1)
        assert (c.index, c.period) == (3, 1)
        for x in range(2):
            c = index_period(left_zero(2), x)
            assert (c.index, c.period) == (1, 1)

    @pytest.mark.parametrize("S", [cyclic(5), cyclic(6), trunc(4), left_zero(3)], ids=repr)
    def test_power_iteration(self, S):
        for x in range(S.n):
            c = index_period(S, x)
            assert S.power(x, c.index + c.period) == S.power(x, c.index)
            powers = [S.power(x, k) for k in range(1, c.index + c.period)]
            assert len(set(powers)) == len(powers)

    def test_lcm_of_periods(self):
        assert lcm_of_periods(cyclic(6)) == 6
        assert lcm_of_periods(trunc(4)) == 1


class TestInvolutions:
    def test_cyclic3(self):
        assert [s.perm for s in enumerate_involutions(cyclic(3))] == [(0, 1, 2), (0, 2, 1)]

    def test_trunc4_only_identity(self):
        assert [s.perm for s in enumerate_involutions(trunc(4))] == [(0, 1, 2, 3)]

    def test_product_has_swap(self):
        P = direct_product(trunc(4), trunc(4))
        perms = [s.perm for s in enumerate_involutions(P)]
        swap = tuple(4 * (i % 4) + i // 4 for i in range(16))
        assert swap in perms
        assert perms[0] == tuple(range(16))
        assert perms == sorted(perms)

    def test_search_matches_scan(self):
        # a 9-element product goes through the backtracking path
        P = direct_product(cyclic(3), cyclic(3))
        got = [s.perm for s in enumerate_involutions(P)]
        assert got == brute_involutions(P)

    @pytest.mark.parametrize("S", [cyclic(4), cyclic(5), left_zero(3), trunc(3)], ids=repr)
    def test_matches_brute_force(self, S):
        assert [s.perm for s in enumerate_involutions(S)] == brute_involutions(S)

    def test_checked_rejects(self):
        with pytest.raises(InvalidAutomorphism):
            InvolutiveAutomorphism.checked(cyclic(3), (1, 2, 0))
        with pytest.raises(InvalidAutomorphism):
            InvolutiveAutomorphism.checked(trunc(3), (0, 2, 1))
        with pytest.raises(InvalidAutomorphism):
            InvolutiveAutomorphism.checked(cyclic(3), (0, 1))


@st.composite
def small_tables(draw):
    n = draw(st.integers(1, 3))
    return [[draw(st.integers(0, n - 1)) for _ in range(n)] for _ in range(n)]


@given(small_tables())
def test_associativity_agrees_with_triple_loop(t):
    n = len(t)
    expected = [(x, y, z) for x in range(n) for y in range(n) for z in range(n)
                if t[t[x][y]][z] != t[x][t[y][z]]]
    assert verify_associativity(t) == expected


@given(small_tables())
def test_involutions_of_random_semigroups(t):
    if verify_associativity(t):
        return
    S = FiniteSemigroup(t)
    invs = enumerate_involutions(S)
    assert tuple(range(S.n)) in [s.perm for s in invs]
    assert [s.perm for s in invs] == brute_involutions(S)
    for s in invs:
        InvolutiveAutomorphism.checked(S, s.perm)

import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from barkerpairs import criteria
from barkerpairs.arith import Factorization, factorize
from barkerpairs.criteria import Outcome, Theorem

U0 = Factorization.parse("13*41*2953*138200401")
U7 = Factorization.parse("5*13*29*41*2953*138200401")


def F(text):
    return Factorization.parse(text)


# -- semiprimitivity and self-conjugacy --------------------------------------


@pytest.mark.parametrize("r,s,expected", [(4, 5, True), (2, 7, False), (2, 9, True), (3, 1, True), (3, 2, True), (3, 6, False)])
def test_is_semiprimitive_examples(r, s, expected):
    assert criteria.is_semiprimitive(r, s) is expected


def test_p_free_part_examples():
    assert criteria.p_free_part(72, 2) == 9
    assert criteria.p_free_part(7, 3) == 7
    assert criteria.p_free_part(2 * 2953**2, 2953) == 2


def test_is_self_conjugate_examples():
    assert criteria.is_self_conjugate(2, 9)
    assert not criteria.is_self_conjugate(6, 35)
    assert criteria.is_self_conjugate(1, 12345)


@given(st.integers(min_value=2, max_value=500), st.integers(min_value=1, max_value=5000))
def test_semiprimitive_matches_power_scan(r, s):
    assert criteria.is_semiprimitive(r, s) == oracles.semiprimitive(r, s)


@given(st.integers(min_value=1, max_value=3000), st.integers(min_value=1, max_value=10**6))
def test_self_conjugate_matches_oracle(r, s):
    assert criteria.is_self_conjugate(r, s) == oracles.self_conjugate(r, s)


@given(st.integers(min_value=2, max_value=200), st.integers(min_value=3, max_value=20000))
def test_semiprimitive_restricts_to_divisors(r, s):
    if not criteria.is_semiprimitive(r, s):
        return
    for d in oracles.divisors(s):
        if d > 2 and math.gcd(r, d) == 1:
            assert criteria.is_semiprimitive(r, d)


@given(st.integers(min_value=1, max_value=500), st.integers(min_value=1, max_value=20000))
def test_self_conjugacy_restricts_to_divisors(r, s):
    if not criteria.is_self_conjugate(r, s):
        return
    for d in oracles.divisors(s):
        assert criteria.is_self_conjugate(r, d)


# -- field descent ------------------------------------------------------------


def test_m_q_examples():
    assert criteria.m_q(45, 3) == 5
    assert criteria.m_q(12, 3) == 4
    assert criteria.m_q(1, 7) == 1


def test_b_conventions():
    assert criteria.b_exponent(2, 15, 8) == 2
    assert criteria.b_exponent(3, 15, 27) == 1
    assert criteria.b_exponent(5, 25, 1) == 1


def test_b_for_u0():
    # with m = u0^2 the prime 138200401 (= 1 mod 2953) sits in m_q, which is what lifts b to 2
    got = criteria.b_exponent(2953, U0.value**2, U0)
    assert got >= 2 and got == oracles.b(2953, U0.value**2, U0.value)
    # 7869745 = 5*13*41*2953 leaves 138200401 out, and b drops to 1
    m = 7869745**2
    assert criteria.b_exponent(2953, m, U0) == oracles.b(2953, m, U0.value) == 1


def test_F_examples():
    assert criteria.field_descent_F(1, 99) == 1
    assert criteria.field_descent_F(U0.value**2, U0.value) == U0.value**2


small_odd = st.integers(min_value=1, max_value=5000).map(lambda x: 2 * x + 1)


@given(st.integers(min_value=1, max_value=10**5), st.integers(min_value=1, max_value=10**5))
def test_F_matches_oracle_and_divides_m(m, n):
    f = criteria.field_descent_F(m, n)
    assert m % f == 0
    assert f == oracles.F(m, n)


@given(st.sampled_from([2, 3, 5, 13, 29, 41, 2953]), st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=10**6))
def test_b_matches_oracle(r, m, n):
    assert criteria.b_exponent(r, m, n) == oracles.b(r, m, n)


# -- the single-inequality tests ------------------------------------------------


def test_eks_examples():
    assert not criteria.test_eks(F("5*13")).excluded
    v = criteria.test_eks(F("3*7"))
    assert v.excluded and v.witness == (3,)
    assert not criteria.test_eks(F("1")).excluded


def test_large_prime_examples():
    assert not criteria.test_large_prime_cor(F("3*5*11*71")).excluded
    v = criteria.test_large_prime_cor(F("5*101"))
    assert v.excluded and v.witness == (101, 1)
    for p in (3, 5, 2953, 138200401):
        assert criteria.test_large_prime_cor(factorize(p)).excluded


def test_field_descent_examples():
    assert not criteria.test_field_descent(U0).excluded
    assert not criteria.test_field_descent(F("1")).excluded
    assert criteria.test_field_descent(F("5*13")).excluded == oracles.field_descent_excludes(65)


@given(small_odd)
def test_field_descent_matches_oracle(u):
    assert criteria.test_field_descent(factorize(u)).excluded == oracles.field_descent_excludes(u)


# -- Turyn ----------------------------------------------------------------------


def test_turyn_excludes_printed_values_and_witnesses_hold():
    cases = [
        ("5^2*193*4877*53471161", 53471161, 2 * 4877**2 * 53471161**2),
        ("5*5333*188748146801", 5333, 188748146801**2 * 5333**2),
        ("5*53*193*4877*53471161", 4877 * 53471161, (4877 * 53471161) ** 2),
    ]
    for text, r, s in cases:
        u = F(text)
        v = criteria.test_turyn(u)
        assert v.excluded
        assert criteria.turyn_witness_holds(u.value, *v.witness)
        assert oracles.turyn_holds(u.value, *v.witness)
        assert criteria.turyn_witness_holds(u.value, r, s)
        assert oracles.turyn_holds(u.value, r, s)


def test_turyn_passes_admissible_value():
    assert criteria.test_turyn(U7).outcome is Outcome.PASS


def test_turyn_cap_gives_inconclusive():
    v = criteria.test_turyn(F("5*13*17*29*37*41*53*61*73"))
    assert v.inconclusive and not v.excluded


@given(st.integers(min_value=1, max_value=3000).map(lambda x: 2 * x + 1))
@settings(max_examples=60)
def test_turyn_matches_exhaustive_oracle(u):
    assert criteria.test_turyn(factorize(u)).excluded == oracles.turyn_excludes(u)


# -- LS5 ------------------------------------------------------------------------


def test_ls5_examples():
    cases = [
        (U0, (138200401, 2953)),
        (F("5*13*41*2953*138200401"), (138200401, 5 * 2953)),
        (F("5*29*41*2953*138200401"), (138200401, 29 * 2953)),
        (F("13*29*41*2953*138200401"), (138200401, 29 * 2953)),
    ]
    for u, w in cases:
        v = criteria.test_ls5(u)
        assert v.excluded and v.witness == w
        assert oracles.ls5_holds(u.value, *w)
    assert criteria.test_ls5(F("3*5*11*71")).outcome is Outcome.PASS


def test_ls5_empty_gcd_policy():
    # u = 3 * 5^2: p = 5 qualifies (625 > 150); r = 1 leaves ord_5(3) = 4 <= 9,
    # so only r = m = 3 (3^2 = -1 mod 5) can exclude, through the empty gcd
    assert criteria.EMPTY_GCD_IS_INFINITE
    v = criteria.test_ls5(F("3*5^2"))
    assert v.excluded and v.witness == (5, 3)
    assert not oracles.ls5_holds(75, 5, 1)


# -- LS1 ------------------------------------------------------------------------


def test_ls1_passes_admissible_value():
    assert criteria.test_ls1(U7).outcome is Outcome.PASS


def test_ls1_trivial_branch_is_not_a_witness():
    u = 65
    assert not criteria.ls1_witness_holds(u, 1, 4 * u * u)


def test_ls1_desk_exclusion():
    u = F("5*11*23*47*71")
    v = criteria.test_ls1(u)
    assert v.excluded
    assert criteria.ls1_witness_holds(u.value, *v.witness)
    assert oracles.ls1_holds(u.value, *v.witness)


def test_ls1_cap():
    assert criteria.test_ls1(F("5*13*17*29*37*41*53")).inconclusive


# -- LS10 -----------------------------------------------------------------------


def test_ls10_examples():
    v = criteria.test_ls10(F("3*11"))
    assert v.excluded and criteria.ls10_witness_holds(33, *v.witness)
    assert criteria.ls10_witness_holds(33, 3, 33) and oracles.ls10_holds(33, 3, 33)
    assert criteria.test_ls10(F("5*13")).outcome is Outcome.PASS
    assert not criteria.ls10_witness_holds(21, 3, 21)
    assert not oracles.ls10_holds(21, 3, 21)


def test_ls10_desk_exclusion_revalidates():
    v = criteria.test_ls10(F("3*7*11*71"))
    assert v.excluded
    assert oracles.ls10_holds(16401, *v.witness)


# -- witness and order properties ------------------------------------------------

TESTS = [
    (criteria.test_turyn, oracles.turyn_holds),
    (criteria.test_ls5, oracles.ls5_holds),
    (criteria.test_ls1, oracles.ls1_holds),
    (criteria.test_ls10, oracles.ls10_holds),
]


@given(st.integers(min_value=1, max_value=20000).map(lambda x: 2 * x + 1), st.sampled_from(range(len(TESTS))))
@settings(max_examples=200)
def test_excluding_witnesses_revalidate(u, i):
    test, oracle = TESTS[i]
    uf = factorize(u)
    v = test(uf)
    if v.excluded:
        assert criteria.witness_holds(u, v)
        assert oracle(u, *v.witness)


@given(st.integers(min_value=1, max_value=20000).map(lambda x: 2 * x + 1), st.sampled_from(range(len(TESTS))))
@settings(max_examples=200)
def test_verdict_independent_of_enumeration_order(u, i):
    test, _ = TESTS[i]
    uf = factorize(u)
    assert test(uf).outcome == test(uf, reverse=True).outcome


def test_published_values_reverse_order_agree():
    for text in ["5^2*193*4877*53471161", "5*13*41*2953*138200401", "5*13*29*41*2953*138200401"]:
        u = F(text)
        for test in (criteria.test_turyn, criteria.test_ls5):
            assert test(u).outcome == test(u, reverse=True).outcome


def test_witness_holds_covers_single_inequality_tests():
    u = 505
    for test in (criteria.test_eks, criteria.test_large_prime_cor):
        v = test(factorize(u))
        if v.excluded:
            assert criteria.witness_holds(u, v)
    assert v.theorem is Theorem.LARGE_PRIME

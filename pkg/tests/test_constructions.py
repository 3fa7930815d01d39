import math
from fractions import Fraction

import pytest

from schemmel.arith import factorize, is_prime
from schemmel.constructions import (
    FOLK_BOUND_X,
    M4_CHAIN_START,
    AbundantWitness,
    SearchExhausted,
    alpha_checks,
    check_folk_bound_counterexample,
    check_r2_lower_conjecture,
    check_r2_upper_bound,
    find_abundant_prime,
    solve_crt_system,
    verify_abundant_witness,
    verify_m4_remark,
)
from schemmel.dynamics import build_tables, classify, iteration_count
from schemmel.totient import schemmel_totient


def test_crt_examples():
    s2 = solve_crt_system(2)
    assert (s2.modulus_M, s2.solution) == (2, 1)
    assert s2.congruences == ((2, 1),)

    s4 = solve_crt_system(4)
    assert (s4.modulus_M, s4.solution) == (6, 5)

    s6 = solve_crt_system(6)
    assert (s6.modulus_M, s6.solution) == (30, 19)


def test_crt_invariants_even_m():
    for m in range(2, 21, 2):
        s = solve_crt_system(m)
        assert 0 < s.solution < s.modulus_M
        assert math.gcd(s.solution, s.modulus_M) == 1
        assert math.gcd(s.solution - m, s.modulus_M) == 1
        for p, r in s.congruences:
            assert s.solution % p == r % p
            if m % p == 0:
                assert r == 1


def test_crt_rejects_bad_m():
    for bad in (3, 7, 1, 0, 42):
        with pytest.raises(ValueError):
            solve_crt_system(bad)


def test_find_abundant_prime_m2():
    w = find_abundant_prime(2)
    assert isinstance(w, AbundantWitness)
    assert w.p0 == 13
    assert w.lhs == 11 * schemmel_totient(2, 11) == 99
    assert w.p0_minus_m.n == 11
    # every smaller odd prime fails (p-2)L_2(p-2) > A*p^(2-delta) + 2p at A=1, delta=1
    for p in (3, 5, 7, 11):
        lhs = (p - 2) * schemmel_totient(2, p - 2)
        assert lhs <= p + 2 * p


def test_find_abundant_prime_m4():
    w = find_abundant_prime(4)
    assert isinstance(w, AbundantWitness)
    assert w.p0 == 17
    assert w.lhs == 13 * schemmel_totient(4, 13) == 117


def test_search_exhaustion():
    res = find_abundant_prime(2, search_limit=12)
    assert isinstance(res, SearchExhausted)
    assert res.search_limit == 12
    assert res.scanned == 4  # 3, 5, 7, 11


def test_fractional_parameters():
    w = find_abundant_prime(2, a=10, delta=Fraction(1, 2))
    assert isinstance(w, AbundantWitness)
    assert w.p0 == 139
    assert verify_abundant_witness(w, 6)

    res = find_abundant_prime(2, a=10**6, delta=Fraction(1, 2), search_limit=10**4)
    assert isinstance(res, SearchExhausted)
    assert res.scanned == 1228


def test_rejects_nonpositive_parameters():
    with pytest.raises(ValueError):
        find_abundant_prime(2, a=0)
    with pytest.raises(ValueError):
        find_abundant_prime(2, delta=Fraction(-1, 2))


def test_alpha_checks_values():
    w = find_abundant_prime(2)
    checks = alpha_checks(w, 3)
    assert [c.alpha for c in checks] == [1, 2, 3]
    a1, a2, a3 = checks

    assert (a1.l1, a1.l2) == (11, 9)
    # alpha=2: L(169) = 13*11, then L(143) = 9*11
    assert (a2.l1, a2.l2) == (143, 99)
    assert a2.l1 + a2.l2 == 242 > 13**2 + 13
    assert (a3.l1, a3.l2) == (13 * 143, 13 * 99)
    assert all(c.ok for c in checks)
    assert verify_abundant_witness(w, 6)


def test_alpha_checks_reject_bad_witness():
    s2 = solve_crt_system(2)
    fake = AbundantWitness(
        m=2,
        a=Fraction(1),
        delta=Fraction(1),
        p0=5,
        lhs=3 * schemmel_totient(2, 3),
        crt=s2,
        p0_minus_m=factorize(3),
    )
    checks = alpha_checks(fake, 1)
    assert not checks[0].ok  # 3 + 1 = 4 is not > 5 + 1
    assert not verify_abundant_witness(fake, 1)


def test_alpha_one_reduction():
    # the alpha=1 inequality scaled by p0 dominates the alpha=2 left side
    for m in (2, 4):
        w = find_abundant_prime(m)
        a1, a2 = alpha_checks(w, 2)
        assert (a1.l1 + a1.l2) * w.p0 > a2.l1 + a2.l2


def test_witness_numbers_are_abundant():
    w = find_abundant_prime(2)
    for alpha in range(1, 5):
        assert classify(2, w.p0**alpha).kind == "abundant", alpha


def test_conjecture_no_violations_small():
    assert check_r2_lower_conjecture(5, 7) == ()
    assert check_r2_lower_conjecture(5, 5) == ()
    assert check_r2_lower_conjecture(5, 10**4) == ()


def test_conjecture_equality_points_not_flagged():
    # 15 * 7^R == 49x exactly at x = 15 and x = 105
    assert iteration_count(2, 15) == 2 and 15 * 7**2 == 49 * 15
    assert iteration_count(2, 105) == 3 and 15 * 7**3 == 49 * 105
    assert check_r2_lower_conjecture(5, 200) == ()


def test_conjecture_domain_guard():
    with pytest.raises(ValueError):
        check_r2_lower_conjecture(3, 100)
    with pytest.raises(ValueError):
        check_r2_lower_conjecture(10, 9)


def test_upper_bound_reports():
    rep = check_r2_upper_bound(2, 10**4)
    assert rep.equality_points == (7,)
    assert rep.violations == (2,)
    assert not rep.ok

    rep3 = check_r2_upper_bound(3, 10**4)
    assert rep3.violations == ()
    assert rep3.ok
    assert rep3.equality_points == (7,)

    small = check_r2_upper_bound(8, 100)
    assert small.equality_points == ()
    assert small.violations == ()


def test_upper_bound_equality_at_seven():
    # R_2(7) = 3 and 3^(3+3) == (7+2)^3 exactly
    assert iteration_count(2, 7) == 3
    assert 3**6 == 9**3 == 729


def test_upper_bound_two_is_genuine():
    # R_2(2) = 1 but the bound allows less than 1 there: 3^4 > 4^3
    assert iteration_count(2, 2) == 1
    assert 3 ** (1 + 3) > (2 + 2) ** 3


def test_upper_bound_domain_guard():
    with pytest.raises(ValueError):
        check_r2_upper_bound(1, 100)


def test_upper_bound_accepts_shared_table():
    table = build_tables(2, 10**4)
    rep = check_r2_upper_bound(3, 10**4, table=table)
    assert rep.violations == ()


def test_folk_bound_counterexample():
    rep = check_folk_bound_counterexample()
    assert rep.x == FOLK_BOUND_X == 480314203
    assert rep.r == rep.r_expected == 22
    assert rep.lower_power == 3**18
    assert rep.upper_power == 3**19
    assert rep.lower_power < rep.x < rep.upper_power
    assert rep.ok
    t = rep.trajectory
    assert t.r == 22
    assert all(v >= 2 for v in t.iterates[:-1])
    assert t.iterates[-1] <= 1


def test_m4_remark_chain_structure():
    chain = verify_m4_remark()
    ps = chain.primes_chain
    assert len(ps) == 5
    assert ps[0] == M4_CHAIN_START == 306167
    for a, b in zip(ps, ps[1:]):
        assert b == 4 + a * a
    assert chain.probable == (False, False, False, True, True)
    assert chain.mr_rounds == 64
    assert chain.primes_ok
    assert all(is_prime(p) for p in ps[:3])


def test_m4_remark_trajectory():
    chain = verify_m4_remark()
    p1, p2, p3, p4, p5 = chain.primes_chain
    assert chain.target == 5 * p5

    steps = chain.trajectory
    assert steps[0] == (p4 * p4, ((p4, 2),))
    assert steps[1] == (p4 * p3**2, ((p3, 2), (p4, 1)))
    assert steps[-1][0] == 0
    assert chain.d_value == sum(v for v, _ in steps)
    assert chain.abundant
    assert chain.d_value < 2 * chain.target
    assert chain.ok

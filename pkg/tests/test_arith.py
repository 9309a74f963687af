"""Primality, factorization, and the multiplicative functions."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from minset.arith import (COMPOSITE, PRIME, PROBABLE_PRIME, FactorPolicy,
                          FactorTable, FactorTableError, factorize, is_prime,
                          load_factor_tables, phi_eval, primes_up_to,
                          psi_eval)
from minset.numerals import DomainError


class TestPrimality:
    def test_small(self):
        assert is_prime(2) == PRIME
        assert is_prime(1) == COMPOSITE
        assert [n for n in range(2, 50) if is_prime(n) == PRIME] == \
            list(primes_up_to(49))

    def test_reference_primes(self):
        assert is_prime(555555555551) == PRIME
        assert is_prime(5551) == COMPOSITE
        assert is_prime(991) == PRIME
        assert is_prime(946669) == PRIME

    def test_large_is_probable(self):
        m89 = (1 << 89) - 1  # Mersenne prime, above the deterministic range
        assert is_prime(m89) == PROBABLE_PRIME
        assert is_prime(((1 << 89) - 1) * ((1 << 107) - 1)) == COMPOSITE
        # a 70-digit prime from the psi tail analysis
        assert is_prime(int("5" * 68 + "49")) == PROBABLE_PRIME

    def test_strong_pseudoprimes_caught(self):
        # strong pseudoprimes to base 2
        for n in (2047, 3277, 4033, 1373653, 3215031751):
            assert is_prime(n) == COMPOSITE

    @given(st.integers(2, 10**6))
    @settings(max_examples=300)
    def test_agrees_with_trial_division(self, n):
        by_trial = all(n % p for p in primes_up_to(1000) if p * p <= n)
        assert (is_prime(n) == PRIME) == by_trial

    def test_domain(self):
        with pytest.raises(DomainError):
            is_prime(0)


class TestFactorize:
    def test_reference_factorizations(self):
        assert factorize(5550).render() == "2*3*5^2*37"
        assert factorize(55555555550).render() == "2*5^2*11*41*271*9091"
        assert factorize(1).render() == "1"

    def test_repunit_presplit(self):
        # 5...50 with 40 fives = 2 * 5^2 * R_40; R_40 splits via the table
        fac = factorize(int("5" * 40 + "0"))
        assert fac.complete
        assert fac.product() == int("5" * 40 + "0")
        assert any("repunit" in a for a in fac.assumptions)
        assert fac.exponent_of(5) == 2

    def test_partial_is_a_value(self):
        p, q = 1000003, 1000033
        policy = FactorPolicy(trial_bound=100, rho_rounds=0, use_tables=False)
        fac = factorize(p * q, policy)
        assert not fac.complete
        assert fac.status == "partial"
        assert fac.cofactor == p * q
        assert fac.product() == p * q
        assert "C13" in fac.render()

    def test_square_detection(self):
        fac = factorize(1000003**2, FactorPolicy(trial_bound=100,
                                                 use_tables=False))
        assert fac.factors == ((1000003, 2),)

    @given(st.integers(1, 10**12))
    @settings(max_examples=200, deadline=None)
    def test_product_reassembles(self, n):
        fac = factorize(n, FactorPolicy(trial_bound=10**4))
        assert fac.product() == n
        for p, e in fac.factors:
            assert e >= 1 and is_prime(p) != COMPOSITE

    def test_seed_reproducible(self):
        n = 10000019 * 10000079
        policy = FactorPolicy(trial_bound=100, seed=7, use_tables=False)
        assert factorize(n, policy) == factorize(n, policy)


class TestFactorTable:
    def test_bundled_tables_load(self):
        table = load_factor_tables()
        assert len(table) >= 60
        r40 = (10**40 - 1) // 9
        assert r40 in table
        hits = table.divisor_hits(2 * 25 * r40)
        assert hits and hits[0][0] == r40

    def test_bad_line_rejected(self):
        table = FactorTable()
        with pytest.raises(FactorTableError):
            table._load_line("12=2^2*4", "test:1")  # 4 is not prime
        with pytest.raises(FactorTableError):
            table._load_line("12=2*3", "test:2")  # product mismatch


class TestPhiPsi:
    def test_reference_values(self):
        assert phi_eval(991) == 990
        assert phi_eval(555555555551) == 555555555550
        assert psi_eval(146) == 222
        assert psi_eval(625) == 750
        assert psi_eval(6631) == 7000
        assert phi_eval(1) == psi_eval(1) == 1

    def test_prime_identities(self):
        for p in primes_up_to(10**4):
            assert phi_eval(p) == p - 1
            assert psi_eval(p) == p + 1

    @given(st.integers(2, 10**6))
    @settings(max_examples=100)
    def test_multiplicative_bounds(self, n):
        assert phi_eval(n) < n < psi_eval(n)
        assert psi_eval(n) * phi_eval(n) <= n * n

    def test_incomplete_factorization_raises(self):
        policy = FactorPolicy(trial_bound=100, rho_rounds=0, use_tables=False)
        with pytest.raises(DomainError):
            phi_eval(1000003 * 1000033, policy)


def test_random_product_reassembly_sweep():
    rng = random.Random(20260823)
    policy = FactorPolicy(trial_bound=10**4)
    for _ in range(2000):
        n = rng.randrange(1, 10**12)
        assert factorize(n, policy).product() == n

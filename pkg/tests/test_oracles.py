"""Membership oracles: inverse phi/psi, set expressions, and the grammar."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minset.arith import phi_eval, psi_eval
from minset.numerals import DomainError
from minset.oracles import (EvenPerfect, FiniteSet, Intersection, Primes,
                            QuadResidues, ResidueClass, ShiftedTotient,
                            SpecSyntaxError, SumThreeSquares, TotientImage,
                            Union, even_perfects, is_even_perfect,
                            is_psi_value, is_sum_of_three_squares, is_totient,
                            iter_prime_blocks, parse_oracle_spec,
                            psi_values_up_to, qr_residues,
                            totient_values_up_to)
from minset.automata import accepts
from minset.numerals import to_numeral


def spf_sieve(limit):
    """Smallest-prime-factor table, an independent brute-force backbone."""
    spf = np.arange(limit + 1)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            sl = spf[p * p:: p]
            sl[sl == np.arange(p * p, limit + 1, p)] = p
    return spf


def brute_phi_psi(limit):
    spf = spf_sieve(limit)
    phi = np.ones(limit + 1, dtype=np.int64)
    psi = np.ones(limit + 1, dtype=np.int64)
    for n in range(2, limit + 1):
        p = int(spf[n])
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        phi[n] = phi[m] * (p - 1) * (pk // p)
        psi[n] = psi[m] * (p + 1) * (pk // p)
    return phi, psi


class TestThreeSquares:
    def test_examples(self):
        assert is_sum_of_three_squares(77)
        assert not is_sum_of_three_squares(7)
        assert not is_sum_of_three_squares(28)  # 4 * 7

    def test_brute_equivalence(self):
        limit = 2000
        sums = {x * x + y * y + z * z
                for x in range(45) for y in range(45) for z in range(45)}
        for n in range(1, limit + 1):
            assert is_sum_of_three_squares(n) == (n in sums)

    def test_blocks_match_predicate(self):
        got = [int(v) for block in SumThreeSquares().value_blocks(500)
               for v in block]
        assert got == [n for n in range(1, 501) if is_sum_of_three_squares(n)]


class TestQuadResidues:
    def test_known_moduli(self):
        assert qr_residues(6) == {0, 1, 3, 4}
        assert qr_residues(7) == {0, 1, 2, 4}

    @given(st.integers(2, 60))
    def test_definition(self, m):
        assert qr_residues(m) == {x * x % m for x in range(1, m + 1)}

    def test_spec(self):
        spec = QuadResidues(7)
        assert spec.contains(63).member
        assert not spec.contains(333 + 1).member
        assert accepts(spec.language_dfa(10), to_numeral(333))


class TestInversePhiPsi:
    def test_known_image_values(self):
        for value, preimage in [(990, 991), (900, 1057), (5590, 5591),
                                (9550, 9551), (500, 625)]:
            r = is_totient(value)
            assert r.status == "yes"
            assert phi_eval(r.witness) == value
            assert phi_eval(preimage) == value  # the published witness too
        for value, preimage in [(222, 146), (552, 411), (592, 511),
                                (750, 625), (7000, 6631)]:
            r = is_psi_value(value)
            assert r.status == "yes"
            assert psi_eval(r.witness) == value
            assert psi_eval(preimage) == value

    def test_known_non_values(self):
        for n in (50, 90, 550, 590, 950, 5950, 3, 5, 7, 9):
            assert is_totient(n).status == "no"
        for n in (22, 50, 52, 70, 92, 292, 502, 550, 700, 922):
            assert is_psi_value(n).status == "no"

    def test_952_is_a_psi_value(self):
        # psi(871) = psi(13 * 67) = 14 * 68 = 952
        r = is_psi_value(952)
        assert r.status == "yes"
        assert psi_eval(r.witness) == 952
        assert psi_eval(871) == 952

    def test_brute_equivalence_to_3000(self):
        limit = 3000
        phi, psi = brute_phi_psi(6 * limit)
        phi_image = set(int(v) for v in phi[1:] if v <= limit)
        psi_image = set(int(v) for v in psi[1:] if v <= limit)
        for n in range(1, limit + 1):
            assert (is_totient(n).status == "yes") == (n in phi_image), n
            assert (is_psi_value(n).status == "yes") == (n in psi_image), n

    @given(st.integers(1, 10**7))
    @settings(max_examples=150, deadline=None)
    def test_witnesses_verify(self, n):
        r = is_totient(n)
        if r.status == "yes":
            assert phi_eval(r.witness) == n
        r = is_psi_value(n)
        if r.status == "yes":
            assert psi_eval(r.witness) == n


class TestImageSieves:
    def test_match_brute_force(self):
        bound = 1500
        phi, psi = brute_phi_psi(6 * bound)
        phi_vals, phi_wit = totient_values_up_to(bound)
        assert list(phi_vals) == sorted({int(v) for v in phi[1:] if v <= bound})
        psi_vals, psi_wit = psi_values_up_to(bound)
        assert list(psi_vals) == sorted({int(v) for v in psi[1:] if v <= bound})
        for v, m in list(phi_wit.items())[:200]:
            assert phi_eval(m) == v
        for v, m in list(psi_wit.items())[:200]:
            assert psi_eval(m) == v

    def test_prime_blocks(self):
        got = [int(p) for b in iter_prime_blocks(10**5, block_size=999)
              for p in b]
        sieve = np.ones(10**5 + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, 317):
            if sieve[p]:
                sieve[p * p:: p] = False
        assert got == list(np.nonzero(sieve)[0])


class TestSpecs:
    @pytest.mark.parametrize("text,members,non_members", [
        ("primes", [2, 3, 991], [1, 4, 5551]),
        ("pow2", [1, 2, 65536], [3, 6]),
        ("3squares", [77, 1], [7, 28]),
        ("qr:6", [1, 3, 88], [2, 5]),
        ("residue:2+10N0", [2, 12, 992], [3, 23]),
        ("residue:7+10N", [17, 227], [7, 18]),
        ("totient", [1, 2, 990], [3, 90]),
        ("totient+3", [4, 5, 993], [6, 93]),
        ("psi", [1, 3, 952], [2, 22]),
        ("finite:{6,28,496}", [6, 496], [7]),
    ])
    def test_membership(self, text, members, non_members):
        spec = parse_oracle_spec(text)
        for n in members:
            assert spec.contains(n).member, (text, n)
        for n in non_members:
            assert not spec.contains(n).member, (text, n)

    @pytest.mark.parametrize("text", [
        "primes", "pow2", "3squares", "qr:6", "qr:7", "residue:2+10N0",
        "residue:7+10N", "totient", "totient+3", "psi",
        "finite:{1,2,3}", "primes&residue:1+4N0", "finite:{2}|primes&qr:7",
    ])
    def test_enumerate_matches_contains(self, text):
        spec = parse_oracle_spec(text)
        bound = 2000
        got = list(spec.enumerate(bound))
        want = [n for n in range(1, bound + 1) if spec.contains(n).member]
        assert got == want

    def test_residue_class_start(self):
        with_zero = ResidueClass(2, 10, include_zero=True)
        without = ResidueClass(2, 10, include_zero=False)
        assert with_zero.contains(2).member
        assert not without.contains(2).member and without.contains(12).member
        zero_offset = ResidueClass(0, 7, include_zero=True)
        assert zero_offset.start == 7  # positive integers only

    def test_residue_language_dfa_excludes_below_start(self):
        spec = ResidueClass(2, 10, include_zero=False)  # {12, 22, 32, ...}
        dfa = spec.language_dfa(10)
        assert not accepts(dfa, to_numeral(2))
        assert accepts(dfa, to_numeral(12))
        spec = ResidueClass(32, 10, include_zero=True)  # {32, 42, ...}
        dfa = spec.language_dfa(10)
        for n in (2, 12, 22):
            assert not accepts(dfa, to_numeral(n))
        for n in (32, 42, 112):
            assert accepts(dfa, to_numeral(n))

    def test_union_intersection_semantics(self):
        u = parse_oracle_spec("finite:{2}|primes&residue:1+4N0")
        assert u.describe() == "finite:{2}|primes&residue:1+4N0"
        assert [v for v in u.enumerate(50)] == \
            [2] + [p for p in (5, 13, 17, 29, 37, 41)]
        i = parse_oracle_spec("primes&residue:3+4N0")
        assert list(i.enumerate(50)) == [3, 7, 11, 19, 23, 31, 43, 47]

    def test_even_perfect(self):
        assert even_perfects(3) == [6, 28, 496]
        assert is_even_perfect(8128).member
        assert not is_even_perfect(12).member
        odd = is_even_perfect(945)
        assert odd.member is False
        assert any("odd perfect" in a for a in odd.assumptions)
        spec = EvenPerfect()
        assert list(spec.enumerate(10**4)) == [6, 28, 496, 8128]

    def test_shifted_totient_witnesses(self):
        spec = ShiftedTotient(3)
        for v, m in spec.witnesses(200).items():
            assert phi_eval(m) + 3 == v

    def test_describe_round_trip(self):
        for text in ("primes", "qr:11", "residue:3+7N", "totient+5",
                     "finite:{1,5,9}", "primes&qr:6|pow2"):
            spec = parse_oracle_spec(text)
            assert parse_oracle_spec(spec.describe()) == spec


class TestGrammarErrors:
    @pytest.mark.parametrize("text,position", [
        ("blah", 0),
        ("primes|junk", 7),
        ("qr:x", 3),
        ("residue:5", 8),
        ("residue:5+4X", 12),
        ("totient+x", 8),
    ])
    def test_positions(self, text, position):
        with pytest.raises(SpecSyntaxError) as exc:
            parse_oracle_spec(text)
        assert exc.value.position == position

    def test_finite_file(self, tmp_path):
        path = tmp_path / "vals.txt"
        path.write_text("6\n28  # comment\n\n496\n")
        spec = parse_oracle_spec(f"finite:{path}")
        assert spec.values == (6, 28, 496)
        with pytest.raises(SpecSyntaxError):
            parse_oracle_spec(f"finite:{tmp_path / 'missing.txt'}")

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            Primes().contains(0)
        with pytest.raises(DomainError):
            FiniteSet([0, 3])
        with pytest.raises(DomainError):
            Union([])
        with pytest.raises(DomainError):
            Intersection([])

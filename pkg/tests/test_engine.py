"""Minimal-set computation paths and the completeness verifier."""

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from minset.engine import (MODE_BOUNDED, MODE_EXACT_AUTOMATIC,
                           MODE_INCOMPLETE, MODE_UNDECIDED,
                           MODE_VERIFIED_COMPLETE, minimal_set_automatic,
                           minimal_set_bounded, set_algebra_experiment,
                           verify_completeness)
from minset.numerals import (DomainError, antichain_from_values,
                             is_subsequence, to_numeral)
from minset.oracles import FiniteSet, PowersOfTwo, parse_oracle_spec


def naive_minimal(values, base=10):
    """Quadratic reference: members containing no smaller member."""
    out = []
    for v in sorted(set(values)):
        if not any(is_subsequence(to_numeral(w, base), to_numeral(v, base))
                   for w in out):
            out.append(v)
    return tuple(out)


class TestBounded:
    def test_trivial_sets(self):
        assert minimal_set_bounded("residue:0+1N", bound=100).values() == \
            tuple(range(1, 10))
        assert minimal_set_bounded("pow2", bound=1 << 20).values() == \
            (1, 2, 4, 8, 65536)

    def test_report_fields(self):
        report = minimal_set_bounded("primes", bound=100)
        assert report.mode == MODE_BOUNDED and report.ok
        assert report.bound == 100
        assert report.values() == (2, 3, 5, 7, 11, 19, 41, 61, 89)
        assert report.kernel in ("compiled", "python")

    def test_base_2(self):
        report = minimal_set_bounded("primes", base=2, bound=100)
        assert [e.render(True) for e in report.elements] == ["10_2", "11_2"]

    @given(st.sets(st.integers(1, 50000), min_size=1, max_size=120))
    @settings(max_examples=150, deadline=None)
    def test_matches_naive(self, values):
        report = minimal_set_bounded(FiniteSet(values), bound=max(values))
        assert report.values() == naive_minimal(values)

    @given(st.sets(st.integers(1, 2000), min_size=1, max_size=60),
           st.integers(2, 16))
    @settings(max_examples=100, deadline=None)
    def test_other_bases_match_naive(self, values, base):
        report = minimal_set_bounded(FiniteSet(values), base=base,
                                     bound=max(values))
        assert report.values() == naive_minimal(values, base)

    def test_minimal_set_is_fixpoint(self):
        # M(M(S)) = M(S)
        for text in ("primes", "qr:6", "3squares"):
            m = minimal_set_bounded(text, bound=10**4)
            again = minimal_set_bounded(FiniteSet(m.values()), bound=10**4)
            assert again.values() == m.values()

    def test_huge_bound_uses_python_path(self):
        spec = FiniteSet([6, 28, 496, 2**62 + 1])
        report = minimal_set_bounded(spec, bound=2**62 + 1)
        assert report.values() == (6, 28)

    def test_bad_bound(self):
        with pytest.raises(DomainError):
            minimal_set_bounded("primes", bound=0)


class TestExactAutomatic:
    def test_quadratic_residues(self):
        r6 = minimal_set_automatic("qr:6")
        assert r6.mode == MODE_EXACT_AUTOMATIC
        assert r6.values() == (1, 3, 4, 6, 7, 9, 22, 25, 28, 52, 55, 58,
                               82, 85, 88)

    def test_agrees_with_bounded(self):
        for text in ("qr:6", "qr:7", "residue:2+10N0", "residue:7+10N",
                     "residue:32+10N0"):
            exact = minimal_set_automatic(text)
            bounded = minimal_set_bounded(text, bound=10**6)
            assert exact.values() == bounded.values(), text

    def test_non_automatic_set_rejected(self):
        with pytest.raises(DomainError):
            minimal_set_automatic("primes")

    def test_iteration_cap(self):
        with pytest.raises(RuntimeError):
            minimal_set_automatic("qr:7", iteration_cap=3)


class TestVerifyCompleteness:
    def test_empty_residual(self):
        report = verify_completeness("residue:0+1N", range(1, 10))
        assert report.mode == MODE_VERIFIED_COMPLETE
        assert report.residual.is_empty

    def test_finite_residual_with_exclusion(self):
        report = verify_completeness(
            "3squares", [1, 2, 3, 4, 5, 6, 8, 9, 70, 77])
        assert report.mode == MODE_VERIFIED_COMPLETE
        assert [m.value for m in report.residual.finite_members] == [7]
        assert report.excluded == (7,)

    def test_missing_element_reported(self):
        report = verify_completeness(
            "3squares", [1, 2, 3, 4, 5, 6, 8, 9, 70], extend=False)
        assert report.mode == MODE_INCOMPLETE
        assert report.missing == (77,)

    def test_extension_absorbs_missing(self):
        report = verify_completeness("3squares", [1, 2, 3, 4, 5, 6, 8, 9, 70])
        assert report.mode == MODE_VERIFIED_COMPLETE
        assert report.values() == (1, 2, 3, 4, 5, 6, 8, 9, 70, 77)

    def test_non_member_candidate_rejected(self):
        with pytest.raises(DomainError):
            verify_completeness("primes", [2, 3, 9])

    def test_rich_residual_is_undecided(self):
        report = verify_completeness("perfect", [6, 28])
        assert report.mode == MODE_UNDECIDED
        assert not report.ok


class TestSetAlgebra:
    def test_union_inclusion_randomized(self):
        rng = random.Random(13)
        for _ in range(60):
            a = sorted(rng.sample(range(1, 400), rng.randint(1, 25)))
            b = sorted(rng.sample(range(1, 400), rng.randint(1, 25)))
            out = set_algebra_experiment("union", FiniteSet(a), FiniteSet(b),
                                         bound=400)
            assert out["holds"], (a, b)

    def test_intersection_can_fail(self):
        out = set_algebra_experiment("intersection", "residue:7+10N",
                                     "primes", bound=1000)
        assert not out["holds"]
        assert 227 in out["witnesses"]

    def test_bad_kind(self):
        with pytest.raises(DomainError):
            set_algebra_experiment("xor", "primes", "pow2")


class TestReportSerialization:
    def test_json_round_trip(self):
        report = minimal_set_bounded("qr:6", bound=1000)
        doc = json.loads(report.to_json())
        assert doc["mode"] == "bounded"
        assert [int(e["value"]) for e in doc["elements"]] == \
            list(report.values())
        assert all(isinstance(e["value"], str) for e in doc["elements"])

    def test_csv(self):
        report = minimal_set_bounded(PowersOfTwo(), bound=10**5)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "digits,value,base"
        assert lines[-1] == "65536,65536,10"

    def test_text_render(self):
        report = verify_completeness(
            "3squares", [1, 2, 3, 4, 5, 6, 8, 9, 70, 77])
        text = report.render_text()
        assert "verified-complete" in text
        assert "residual: finite" in text
        assert "confirmed non-members: 7" in text

"""Finite case analyses for the stubborn tails.

The residual language of the totient / psi candidates leaves one pumped
family (all fives, then a zero).  A value n = 55...50 is 2 mod 4, so a
preimage must be p^k or 2 p^k; the three exponent cases k = 1, k = 2,
k >= 3 are each decidable, the last one via the square divisors of the
repunit R_l (n = 2 * 5^2 * R_l).  This module also hosts the
powers-of-two digit-conjecture checker, the Lucas ending check for even
perfect numbers, and the family-prover registry used by
``engine.verify_completeness``.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .arith import (COMPOSITE, PROBABLE_PRIME, FactorPolicy, factorize,
                    is_prime, phi_eval, primes_up_to, psi_eval)
from .automata import FamilyDescriptor
from .numerals import DomainError
from .oracles import OracleSpec, PsiImage, TotientImage, even_perfects

IN_IMAGE = "in-image"
NOT_IN_IMAGE = "not-in-image"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class TailVerdict:
    """Outcome of one 55...50 tail case analysis."""

    reps: int                      # number of fives
    value: int
    verdict: str                   # in-image | not-in-image | unknown
    witness: Optional[int] = None
    trace: tuple[str, ...] = ()    # one entry per exponent case
    assumptions: tuple[str, ...] = ()


def _prime_status(p: int, assumptions: list[str]) -> bool:
    status = is_prime(p)
    if status == PROBABLE_PRIME:
        assumptions.append(f"probable prime {p}")
    return status != COMPOSITE


def phi_tail_check(reps: int,
                   policy: FactorPolicy = FactorPolicy()) -> TailVerdict:
    """Is n = 55...50 (``reps`` fives) a totient value?

    n = 2 mod 4 forces a preimage p^k or 2 p^k with p an odd prime, so
    phi gives p^(k-1)(p-1) = n; the three k cases are checked directly.
    """
    if reps < 3:
        raise DomainError(f"tail check applies to reps >= 3, got {reps}")
    n = int("5" * reps + "0")
    trace: list[str] = []
    assumptions: list[str] = []

    # k >= 3 needs an odd prime square divisor of n = 2 * 5^2 * R_reps
    fac = factorize(n, policy)
    if not fac.complete:
        return TailVerdict(reps, n, UNKNOWN, None,
                           (f"k>=3: unfactored cofactor {fac.cofactor}",),
                           fac.assumptions)
    assumptions.extend(fac.assumptions)
    for p, e in fac.factors:
        if p == 2 or e < 2:
            continue
        k = e + 1
        if p ** (k - 1) * (p - 1) == n:
            witness = p**k
            assert phi_eval(witness, policy) == n
            return TailVerdict(reps, n, IN_IMAGE, witness,
                               (f"k={k}: phi({p}^{k}) = n",),
                               tuple(assumptions))
    squares = [p for p, e in fac.factors if e >= 2 and p != 2]
    trace.append(f"k>=3: square primes {squares or 'none'}; "
                 "no p^(k-1)(p-1) matches n")

    # k = 2: p(p-1) = n
    p = (1 + math.isqrt(1 + 4 * n)) // 2
    if p * (p - 1) == n and p % 2 == 1 and _prime_status(p, assumptions):
        witness = p * p
        assert phi_eval(witness, policy) == n
        return TailVerdict(reps, n, IN_IMAGE, witness,
                           (f"k=2: phi({p}^2) = n",), tuple(assumptions))
    trace.append(f"k=2: no prime root of p^2 - p - n (candidate {p})")

    # k = 1: n + 1 prime
    if _prime_status(n + 1, assumptions):
        witness = n + 1
        assert phi_eval(witness, policy) == n
        return TailVerdict(reps, n, IN_IMAGE, witness,
                           (f"k=1: {n + 1} is prime",), tuple(assumptions))
    trace.append(f"k=1: {n + 1} is composite")

    return TailVerdict(reps, n, NOT_IN_IMAGE, None, tuple(trace),
                       tuple(dict.fromkeys(assumptions)))


def psi_tail_check(reps: int,
                   policy: FactorPolicy = FactorPolicy()) -> TailVerdict:
    """Is n = 55...50 (``reps`` fives) a Dedekind-psi value?

    As in the totient case m = p^k or 2 p^k, hence p^(k-1)(p+1) = n or
    3 p^(k-1)(p+1) = n with 4 never dividing p + 1.
    """
    if reps < 3:
        raise DomainError(f"tail check applies to reps >= 3, got {reps}")
    n = int("5" * reps + "0")
    trace: list[str] = []
    assumptions: list[str] = []

    # k = 1: psi(p) = p + 1 or psi(2p) = 3(p + 1)
    if _prime_status(n - 1, assumptions):
        witness = n - 1
        assert psi_eval(witness, policy) == n
        return TailVerdict(reps, n, IN_IMAGE, witness,
                           (f"k=1: {n - 1} is prime",), tuple(assumptions))
    third = n // 3 - 1 if n % 3 == 0 else None
    if third is not None and third % 2 == 1 and third >= 3 \
            and _prime_status(third, assumptions):
        witness = 2 * third
        assert psi_eval(witness, policy) == n
        return TailVerdict(reps, n, IN_IMAGE, witness,
                           (f"k=1: psi(2*{third}) = n",), tuple(assumptions))
    trace.append(f"k=1: neither n-1 nor n/3-1 is prime")

    # k = 2: p(p+1) = n or 3p(p+1) = n
    for target, doubled in [(n, False)] + ([(n // 3, True)] if n % 3 == 0 else []):
        p = (math.isqrt(4 * target + 1) - 1) // 2
        if p >= 3 and p % 2 == 1 and p * (p + 1) == target \
                and _prime_status(p, assumptions):
            witness = 2 * p * p if doubled else p * p
            assert psi_eval(witness, policy) == n
            return TailVerdict(reps, n, IN_IMAGE, witness,
                               (f"k=2: psi({witness}) = n",), tuple(assumptions))
    trace.append("k=2: no prime root of p^2+p-n or 3p^2+3p-n")

    # k >= 3: odd p with p^2 | n and 4 not dividing p+1; n = 2 * 5^2 * R_reps
    fac = factorize(n, policy)
    if not fac.complete:
        return TailVerdict(reps, n, UNKNOWN, None,
                           tuple(trace) +
                           (f"k>=3: unfactored cofactor {fac.cofactor}; "
                            f"repunit table lacks R{reps}",),
                           tuple(dict.fromkeys(assumptions + list(fac.assumptions))))
    assumptions.extend(fac.assumptions)
    table_squares = {p for p, e in fac.factors if e >= 2 and p % 2 == 1}
    scanned = repunit_square_scan(reps)
    if not scanned <= table_squares | {5}:
        raise AssertionError(
            f"square scan found {sorted(scanned)} not all in factorization "
            f"of {n}")  # pragma: no cover
    for p in sorted(table_squares):
        if (p + 1) % 4 == 0:
            continue
        e = fac.exponent_of(p)
        k = e + 1
        for target, doubled in [(n, False)] + ([(n // 3, True)] if n % 3 == 0 else []):
            if p ** (k - 1) * (p + 1) == target:
                witness = 2 * p**k if doubled else p**k
                assert psi_eval(witness, policy) == n
                return TailVerdict(reps, n, IN_IMAGE, witness,
                                   (f"k={k}: psi({witness}) = n",),
                                   tuple(assumptions))
    trace.append(f"k>=3: square primes {sorted(table_squares) or 'none'} "
                 "(p=5 would force n=150 or 450); no product matches n")

    return TailVerdict(reps, n, NOT_IN_IMAGE, None, tuple(trace),
                       tuple(dict.fromkeys(assumptions)))


def repunit_square_scan(length: int, bound: int = 10**6) -> set[int]:
    """Primes p <= bound with p^2 dividing the length-``length`` repunit.

    For p coprime to 30, p^2 | R_length iff 10^length = 1 mod p^2; the
    prime 3 divides R_length iff 3 | length, with a square exactly when
    9 | length.  Corroborates the shipped repunit factor table.
    """
    found = set()
    if length % 9 == 0:
        found.add(3)
    for p in primes_up_to(bound):
        if p in (2, 3, 5):
            continue
        if pow(10, length, p * p) == 1:
            found.add(p)
    return found


# ---------------------------------------------------------------------------
# powers of two


def pow2_digit_check(m_min: int, m_max: int) -> dict:
    """Check that each 16^m, m in [m_min, m_max], has a digit in {1,2,4,8}.

    m = 4 (65536) is the conjectured minimal element itself and is
    reported separately, never counted as a violation.
    """
    if not 4 <= m_min <= m_max:
        raise DomainError(f"need 4 <= m_min <= m_max, got {m_min}..{m_max}")
    digits_needed = int(m_max * math.log10(16)) + 16
    violations = []
    base_case = None
    with decimal.localcontext() as ctx:
        ctx.prec = digits_needed
        ctx.Emax = decimal.MAX_EMAX
        x = decimal.Decimal(16) ** m_min
        for m in range(m_min, m_max + 1):
            s = str(x)
            hit = any(c in "1248" for c in s)
            if m == 4:
                base_case = f"16^4 = {s} has no digit from {{1,2,4,8}}"
            elif not hit:
                violations.append(m)
            x *= 16
    return {
        "m_min": m_min,
        "m_max": m_max,
        "holds": not violations,
        "violations": violations,
        "base_case": base_case,
        "statement": (f"every 16^m with {max(m_min, 5)} <= m <= {m_max} "
                      "has a digit from {1,2,4,8}"),
    }


# ---------------------------------------------------------------------------
# perfect numbers


_LUCAS_ENDINGS = frozenset({16, 28, 36, 56, 76})


def lucas_ending_check(count: int, data_dir: Optional[str] = None) -> dict:
    """Check the last two decimal digits of the first ``count`` even perfects.

    Every even perfect other than 6 and 496 must end in 16, 28, 36, 56
    or 76; under the no-odd-perfect conjecture the minimal set is {6,28}
    in base 10 and {110_2} in base 2.
    """
    from .engine import minimal_set_bounded
    from .oracles import FiniteSet

    assumptions: list[str] = ["conjecture: no odd perfect numbers"]
    perfects = even_perfects(count, data_dir, collect_assumptions=assumptions)
    endings = {n: n % 100 for n in perfects if n not in (6, 496)}
    bad = {n: e for n, e in endings.items() if e not in _LUCAS_ENDINGS}

    def conditional_minimal(base: int):
        spec = FiniteSet(perfects)
        return minimal_set_bounded(spec, base, max(perfects))

    return {
        "count": count,
        "endings": endings,
        "endings_ok": not bad,
        "bad_endings": bad,
        "conditional_base10": conditional_minimal(10),
        "conditional_base2": conditional_minimal(2),
        "assumptions": tuple(dict.fromkeys(assumptions)),
    }


def perfect_minimal_set(base: int, count: int = 12,
                        data_dir: Optional[str] = None):
    """Bounded minimal set of the first ``count`` even perfects in any base."""
    from .engine import minimal_set_bounded
    from .oracles import FiniteSet

    perfects = even_perfects(count, data_dir)
    return minimal_set_bounded(FiniteSet(perfects), base, max(perfects))


# ---------------------------------------------------------------------------
# family provers (consulted by engine.verify_completeness)


@dataclass(frozen=True)
class FamilyVerdict:
    kind: str                      # member | excluded-up-to | unknown
    detail: str
    value: Optional[int] = None
    witness: Optional[int] = None
    assumptions: tuple[str, ...] = ()


FamilyProver = Callable[[OracleSpec, FamilyDescriptor, int],
                        Optional[FamilyVerdict]]

_REGISTRY: list[FamilyProver] = []


def register_family_prover(prover: FamilyProver) -> FamilyProver:
    _REGISTRY.append(prover)
    return prover


def family_prover(spec: OracleSpec, family: FamilyDescriptor,
                  max_reps: int) -> FamilyVerdict:
    """Dispatch a residual family to the first applicable registered prover."""
    for prover in _REGISTRY:
        verdict = prover(spec, family, max_reps)
        if verdict is not None:
            return verdict
    return _generic_family_prover(spec, family, max_reps)


def _generic_family_prover(spec: OracleSpec, family: FamilyDescriptor,
                           max_reps: int) -> FamilyVerdict:
    """Test expansions one by one; cannot prove a whole infinite tail."""
    assumptions: list[str] = []
    for reps in range(family.min_reps, family.min_reps + max_reps + 1):
        numeral = family.expand(reps)
        m = spec.contains(numeral.value)
        assumptions.extend(m.assumptions)
        if m.member:
            return FamilyVerdict("member", f"expansion at reps={reps} is a member",
                                 numeral.value, m.witness, tuple(assumptions))
        if m.member is None:
            return FamilyVerdict("unknown",
                                 f"membership undecided at reps={reps}",
                                 numeral.value, None, tuple(assumptions))
    return FamilyVerdict(
        "excluded-up-to",
        f"no member among expansions reps <= {family.min_reps + max_reps}; "
        "tail beyond that is unproven",
        assumptions=tuple(dict.fromkeys(assumptions)))


@register_family_prover
def _phi_psi_tail_prover(spec: OracleSpec, family: FamilyDescriptor,
                         max_reps: int) -> Optional[FamilyVerdict]:
    """Three-case tail analysis for all-fives-then-zero families (base 10)."""
    if family.base != 10 or family.loop != (5,) or family.suffix != (0,):
        return None
    if not all(d == 5 for d in family.prefix):
        return None
    if isinstance(spec, TotientImage):
        check = phi_tail_check
    elif isinstance(spec, PsiImage):
        check = psi_tail_check
    else:
        return None
    offset = len(family.prefix)
    assumptions: list[str] = []
    excluded: list[int] = []
    for reps in range(family.min_reps, family.min_reps + max_reps + 1):
        fives = offset + reps
        if fives < 3:
            m = spec.contains(family.expand(reps).value)
            assumptions.extend(m.assumptions)
            if m.member:
                return FamilyVerdict("member", f"member at {fives} fives",
                                     family.expand(reps).value, m.witness,
                                     tuple(assumptions))
            continue
        verdict = check(fives)
        assumptions.extend(verdict.assumptions)
        if verdict.verdict == IN_IMAGE:
            return FamilyVerdict(
                "member",
                f"tail case analysis: member at {fives} fives "
                f"({'; '.join(verdict.trace)})",
                verdict.value, verdict.witness, tuple(assumptions))
        if verdict.verdict == UNKNOWN:
            return FamilyVerdict(
                "unknown", f"tail case analysis stuck at {fives} fives: "
                f"{'; '.join(verdict.trace)}", verdict.value, None,
                tuple(assumptions))
        excluded.append(fives)
    return FamilyVerdict(
        "excluded-up-to",
        f"three-case analysis excludes {min(excluded)}..{max(excluded)} fives; "
        "tail beyond that is unproven",
        assumptions=tuple(dict.fromkeys(assumptions)))

"""Membership oracles for the arithmetically defined sets.

Each set is a describable ``OracleSpec`` with a total membership
decision, an ascending enumerator, and optional necessary-condition
automata.  Inverse problems (is n a totient value? a Dedekind-psi
value?) are solved by a recursive preimage search over prime-power
blocks, with a dedicated fast path for n = 2 mod 4 where any preimage
must be p^k or 2 p^k.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import arith
from .arith import (COMPOSITE, PRIME, PROBABLE_PRIME, FactorPolicy,
                    factorize, is_prime, primes_up_to)
from .automata import SubwordDfa, intersect, residue_dfa
from .numerals import DomainError


@dataclass(frozen=True)
class Membership:
    """Membership decision; ``member=None`` means undecided."""

    member: Optional[bool]
    witness: Optional[int] = None
    assumptions: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.member)


YES = "yes"
NO = "no"
CONDITIONAL = "conditional"


@dataclass(frozen=True)
class InverseResult:
    """Outcome of an inverse phi / psi query."""

    status: str  # yes | no | conditional
    witness: Optional[int] = None
    assumptions: tuple[str, ...] = ()

    def to_membership(self) -> Membership:
        if self.status == YES:
            return Membership(True, self.witness, self.assumptions)
        if self.status == NO:
            return Membership(False, None, self.assumptions)
        return Membership(None, None, self.assumptions)


# ---------------------------------------------------------------------------
# elementary predicates


def is_sum_of_three_squares(n: int) -> bool:
    """Legendre: n is x^2+y^2+z^2 iff n is not of the form 4^a (8b+7)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    while n % 4 == 0:
        n //= 4
    return n % 8 != 7


def qr_residues(m: int) -> frozenset[int]:
    """{x^2 mod m : x in [1, m]}."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    return frozenset(x * x % m for x in range(1, m + 1))


# ---------------------------------------------------------------------------
# inverse totient / inverse psi


def _divisors(factors: Sequence[tuple[int, int]]) -> list[int]:
    divs = [1]
    for p, e in factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _preimage_search(n: int, prime_from_divisor: Callable[[int], int],
                     policy: FactorPolicy) -> InverseResult:
    """Generic inverse search: write n as a product of blocks f(p^k) over
    distinct primes p, where f(p^k) = p^(k-1) * block_base(p)."""
    fac = factorize(n, policy)
    if not fac.complete:
        return InverseResult(CONDITIONAL, None,
                             fac.assumptions +
                             (f"unfactored cofactor {fac.cofactor} of {n}",))
    assumptions = list(fac.assumptions)
    candidates = []
    for d in _divisors(fac.factors):
        p = prime_from_divisor(d)
        if p < 2:
            continue
        status = is_prime(p)
        if status == COMPOSITE:
            continue
        if status == PROBABLE_PRIME:
            assumptions.append(f"probable prime {p}")
        candidates.append((d, p))
    candidates.sort(reverse=True)  # largest block base first

    memo: dict[tuple[int, int], Optional[int]] = {}

    def search(rem: int, start: int) -> Optional[int]:
        if rem == 1:
            return 1
        key = (rem, start)
        if key in memo:
            return memo[key]
        found = None
        for i in range(start, len(candidates)):
            d, p = candidates[i]
            if rem % d:
                continue
            block = d
            power = p
            while rem % block == 0:
                sub = search(rem // block, i + 1)
                if sub is not None:
                    found = sub * power
                    break
                block *= p
                power *= p
            if found is not None:
                break
        memo[key] = found
        return found

    witness = search(n, 0)
    if witness is None:
        return InverseResult(NO, None, tuple(dict.fromkeys(assumptions)))
    return InverseResult(YES, witness, tuple(dict.fromkeys(assumptions)))


def _square_divisor_primes(n: int, policy: FactorPolicy):
    """All primes p with p^2 | n, or None when factorization is partial."""
    fac = factorize(n, policy)
    if not fac.complete:
        return None, fac
    return [(p, e) for p, e in fac.factors if e >= 2], fac


def is_totient(n: int, policy: FactorPolicy = FactorPolicy()) -> InverseResult:
    """Does phi(m) = n have a solution?"""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n == 1:
        return InverseResult(YES, 1)
    if n % 2:
        return InverseResult(NO)  # phi(m) is even for m > 2
    if n == 2:
        return InverseResult(YES, 3)
    if n % 4 == 2:
        return _inv_phi_2_mod_4(n, policy)
    return _preimage_search(n, lambda d: d + 1, policy)


def _inv_phi_2_mod_4(n: int, policy: FactorPolicy) -> InverseResult:
    """n = 2 mod 4: any preimage is p^k or 2 p^k with p an odd prime, so
    p^(k-1)(p-1) = n and three exponent cases cover everything."""
    assumptions: list[str] = []

    # k = 1: n + 1 prime
    status = is_prime(n + 1)
    if status != COMPOSITE:
        if status == PROBABLE_PRIME:
            assumptions.append(f"probable prime {n + 1}")
        return InverseResult(YES, n + 1, tuple(assumptions))

    # k = 2: p(p-1) = n
    p = (1 + math.isqrt(1 + 4 * n)) // 2
    if p * (p - 1) == n and p % 2 == 1:
        status = is_prime(p)
        if status != COMPOSITE:
            if status == PROBABLE_PRIME:
                assumptions.append(f"probable prime {p}")
            return InverseResult(YES, p * p, tuple(assumptions))

    # k >= 3: p^2 | n for the needed odd prime
    squares, fac = _square_divisor_primes(n, policy)
    if squares is None:
        return InverseResult(
            CONDITIONAL, None,
            fac.assumptions + (f"unfactored cofactor {fac.cofactor} of {n}",))
    assumptions.extend(fac.assumptions)
    for p, e in squares:
        if p == 2:
            continue
        k = e + 1
        if p ** (k - 1) * (p - 1) == n:
            return InverseResult(YES, p**k, tuple(dict.fromkeys(assumptions)))
    return InverseResult(NO, None, tuple(dict.fromkeys(assumptions)))


def is_psi_value(n: int, policy: FactorPolicy = FactorPolicy()) -> InverseResult:
    """Does psi(m) = n have a solution?"""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n == 1:
        return InverseResult(YES, 1)
    if n == 3:
        return InverseResult(YES, 2)
    if n % 2:
        return InverseResult(NO)  # psi(m) is even for m > 2
    if n % 4 == 2:
        return _inv_psi_2_mod_4(n, policy)
    return _preimage_search(n, lambda d: d - 1, policy)


def _inv_psi_2_mod_4(n: int, policy: FactorPolicy) -> InverseResult:
    """n = 2 mod 4: any preimage is p^k or 2 p^k with p an odd prime,
    hence p^(k-1)(p+1) = n or 3 p^(k-1)(p+1) = n, with 4 never dividing
    p + 1."""
    assumptions: list[str] = []

    def prime_or_note(p: int) -> bool:
        status = is_prime(p)
        if status == PROBABLE_PRIME:
            assumptions.append(f"probable prime {p}")
        return status != COMPOSITE

    # k = 1: psi(p) = p + 1 = n, or psi(2p) = 3(p + 1) = n
    if n - 1 >= 2 and prime_or_note(n - 1):
        return InverseResult(YES, n - 1, tuple(assumptions))
    if n % 3 == 0 and n // 3 - 1 >= 3 and (n // 3 - 1) % 2 == 1 \
            and prime_or_note(n // 3 - 1):
        return InverseResult(YES, 2 * (n // 3 - 1), tuple(assumptions))

    # k = 2: p(p+1) = n or 3p(p+1) = n
    targets = [(n, False)]
    if n % 3 == 0:
        targets.append((n // 3, True))
    for target, doubled in targets:
        p = (math.isqrt(4 * target + 1) - 1) // 2
        if p >= 3 and p % 2 == 1 and p * (p + 1) == target and prime_or_note(p):
            return InverseResult(YES, 2 * p * p if doubled else p * p,
                                 tuple(assumptions))

    # k >= 3: odd p with p^2 | n and 4 not dividing p + 1
    squares, fac = _square_divisor_primes(n, policy)
    if squares is None:
        return InverseResult(
            CONDITIONAL, None,
            fac.assumptions + (f"unfactored cofactor {fac.cofactor} of {n}",))
    assumptions.extend(fac.assumptions)
    for p, e in squares:
        if p == 2 or (p + 1) % 4 == 0:
            continue
        k = e + 1
        if p ** (k - 1) * (p + 1) == n:
            return InverseResult(YES, p**k, tuple(dict.fromkeys(assumptions)))
        if n % 3 == 0 and p ** (k - 1) * (p + 1) == n // 3:
            return InverseResult(YES, 2 * p**k, tuple(dict.fromkeys(assumptions)))
    return InverseResult(NO, None, tuple(dict.fromkeys(assumptions)))


# ---------------------------------------------------------------------------
# sieves for image enumeration


@lru_cache(maxsize=4)
def phi_sieve(limit: int) -> np.ndarray:
    """phi(m) for m = 0..limit (index 0 unused)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # untouched -> prime
            phi[p::p] -= phi[p::p] // p
    return phi


@lru_cache(maxsize=4)
def psi_sieve(limit: int) -> np.ndarray:
    """psi(m) for m = 0..limit (index 0 unused; psi(1) fixed to 1)."""
    psi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if psi[p] == p:
            psi[p::p] += psi[p::p] // p
    if limit >= 1:
        psi[1] = 1
    return psi


def _phi_preimage_limit(bound: int) -> int:
    """Sieve limit guaranteeing every totient value <= bound is seen.

    m / phi(m) < e^gamma loglog m + 3/loglog m (Rosser-Schoenfeld, with
    slack), so the smallest preimage of a value v <= bound lies below
    bound times that ratio; iterate the bound to a fixed point.
    """
    limit = max(4 * bound, 64)
    for _ in range(4):
        ll = math.log(math.log(max(limit, 16)))
        ratio = math.exp(0.5772156649015329) * ll + 3.0 / ll + 1.0
        limit = max(int(bound * ratio) + 16, 64)
    return limit


def totient_values_up_to(bound: int) -> tuple[np.ndarray, dict[int, int]]:
    """Ascending totient values <= bound and a smallest-witness map."""
    limit = _phi_preimage_limit(bound)
    phi = phi_sieve(limit)
    # empirical corroboration of the analytic preimage bound
    ratio = (np.arange(1, limit + 1, dtype=np.float64) /
             phi[1:].astype(np.float64)).max()
    if bound * ratio > limit:
        raise AssertionError("phi preimage bound too small")  # pragma: no cover
    mask = phi[1:] <= bound
    values = phi[1:][mask]
    preimages = np.nonzero(mask)[0] + 1
    uniq, first = np.unique(values, return_index=True)
    witnesses = {int(v): int(preimages[i]) for v, i in zip(uniq, first)}
    return uniq, witnesses


def psi_values_up_to(bound: int) -> tuple[np.ndarray, dict[int, int]]:
    """Ascending psi values <= bound (psi(m) >= m, so the sieve is tight)."""
    psi = psi_sieve(max(bound, 2))
    mask = psi[1:] <= bound
    values = psi[1:][mask]
    preimages = np.nonzero(mask)[0] + 1
    uniq, first = np.unique(values, return_index=True)
    witnesses = {int(v): int(preimages[i]) for v, i in zip(uniq, first)}
    return uniq, witnesses


def iter_prime_blocks(bound: int, block_size: int = 1 << 20) -> Iterator[np.ndarray]:
    """Segmented sieve: ascending numpy blocks of primes <= bound."""
    if bound < 2:
        return
    base = primes_up_to(math.isqrt(bound) + 1)
    lo = 2
    while lo <= bound:
        hi = min(lo + block_size, bound + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo:: p] = False
        yield (np.nonzero(seg)[0] + lo).astype(np.int64)
        lo = hi


# ---------------------------------------------------------------------------
# even perfect numbers


class InsufficientDataError(RuntimeError):
    """A shipped table does not extend far enough for the request."""


def mersenne_exponents(data_dir: Optional[str] = None) -> list[int]:
    path = f"{arith.default_data_dir(data_dir)}/mersenne_exponents.txt"
    exps = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                exps.append(int(line))
    return exps


def even_perfects(count: int, data_dir: Optional[str] = None,
                  collect_assumptions: Optional[list] = None) -> list[int]:
    """First ``count`` even perfect numbers 2^(p-1) (2^p - 1)."""
    exps = mersenne_exponents(data_dir)
    if count > len(exps):
        raise InsufficientDataError(
            f"only {len(exps)} Mersenne exponents in mersenne_exponents.txt, "
            f"need {count}")
    out = []
    for p in exps[:count]:
        m = (1 << p) - 1
        status = is_prime(m)
        if status == COMPOSITE:
            raise AssertionError(f"table exponent {p} gives composite 2^{p}-1")
        if status == PROBABLE_PRIME and collect_assumptions is not None:
            collect_assumptions.append(f"probable prime 2^{p}-1")
        out.append((1 << (p - 1)) * m)
    return out


def is_even_perfect(n: int) -> Membership:
    """Euler form check: n = 2^(p-1)(2^p - 1) with 2^p - 1 prime."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n % 2:
        return Membership(False, None,
                          ("conjecture: no odd perfect numbers",))
    a = 0
    q = n
    while q % 2 == 0:
        q //= 2
        a += 1
    if q != (1 << (a + 1)) - 1:
        return Membership(False)
    status = is_prime(q)
    if status == COMPOSITE:
        return Membership(False)
    asm = (f"probable prime {q}",) if status == PROBABLE_PRIME else ()
    return Membership(True, None, asm)


# ---------------------------------------------------------------------------
# oracle specs


class OracleSpec:
    """A describable membership predicate for a set S of positive integers."""

    def describe(self) -> str:
        raise NotImplementedError

    def contains(self, n: int) -> Membership:
        raise NotImplementedError

    def enumerate(self, bound: int) -> Iterator[int]:
        """Members <= bound, ascending."""
        for n in range(1, bound + 1):
            if self.contains(n).member:
                yield n

    def value_blocks(self, bound: int,
                     block_size: int = 1 << 18) -> Iterator[np.ndarray]:
        """Members <= bound as ascending int64 numpy blocks."""
        buf = []
        for n in self.enumerate(bound):
            buf.append(n)
            if len(buf) >= block_size:
                yield np.array(buf, dtype=np.int64)
                buf = []
        if buf:
            yield np.array(buf, dtype=np.int64)

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        return []

    def language_dfa(self, base: int) -> Optional[SubwordDfa]:
        """Exact member-language automaton when the set is automatic."""
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"

    def __eq__(self, other):
        return isinstance(other, OracleSpec) and self.describe() == other.describe()

    def __hash__(self):
        return hash(self.describe())


class Primes(OracleSpec):
    def describe(self) -> str:
        return "primes"

    def contains(self, n: int) -> Membership:
        status = is_prime(n)
        if status == PRIME:
            return Membership(True, n)
        if status == PROBABLE_PRIME:
            return Membership(True, n, (f"probable prime {n}",))
        return Membership(False)

    def enumerate(self, bound: int) -> Iterator[int]:
        for block in iter_prime_blocks(bound):
            yield from (int(p) for p in block)

    def value_blocks(self, bound, block_size=1 << 20):
        yield from iter_prime_blocks(bound, block_size)


class PowersOfTwo(OracleSpec):
    def describe(self) -> str:
        return "pow2"

    def contains(self, n: int) -> Membership:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        return Membership(n & (n - 1) == 0)

    def enumerate(self, bound: int) -> Iterator[int]:
        v = 1
        while v <= bound:
            yield v
            v <<= 1


class SumThreeSquares(OracleSpec):
    def describe(self) -> str:
        return "3squares"

    def contains(self, n: int) -> Membership:
        return Membership(is_sum_of_three_squares(n))

    def value_blocks(self, bound, block_size=1 << 20):
        lo = 1
        while lo <= bound:
            hi = min(lo + block_size, bound + 1)
            vals = np.arange(lo, hi, dtype=np.int64)
            stripped = vals.copy()
            while True:
                div4 = stripped % 4 == 0
                if not div4.any():
                    break
                stripped[div4] //= 4
            yield vals[stripped % 8 != 7]
            lo = hi

    def enumerate(self, bound: int) -> Iterator[int]:
        for block in self.value_blocks(bound):
            yield from (int(v) for v in block)


class QuadResidues(OracleSpec):
    def __init__(self, modulus: int):
        self.modulus = modulus
        self.residues = qr_residues(modulus)

    def describe(self) -> str:
        return f"qr:{self.modulus}"

    def contains(self, n: int) -> Membership:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        return Membership(n % self.modulus in self.residues)

    def enumerate(self, bound: int) -> Iterator[int]:
        for n in range(1, bound + 1):
            if n % self.modulus in self.residues:
                yield n

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        return [residue_dfa(base, self.modulus, self.residues)]

    def language_dfa(self, base: int) -> SubwordDfa:
        return residue_dfa(base, self.modulus, self.residues)


class ResidueClass(OracleSpec):
    """a + mN (x >= 1) or a + mN0 (x >= 0), exactly as written."""

    def __init__(self, offset: int, modulus: int, include_zero: bool):
        if modulus < 1 or offset < 0:
            raise DomainError("residue class needs modulus >= 1, offset >= 0")
        self.offset = offset
        self.modulus = modulus
        self.include_zero = include_zero
        self.start = offset if include_zero else offset + modulus
        if self.start < 1:
            self.start += modulus  # sets live in the positive integers

    def describe(self) -> str:
        suffix = "N0" if self.include_zero else "N"
        return f"residue:{self.offset}+{self.modulus}{suffix}"

    def contains(self, n: int) -> Membership:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        return Membership(n >= self.start and
                          n % self.modulus == self.offset % self.modulus)

    def enumerate(self, bound: int) -> Iterator[int]:
        yield from range(self.start, bound + 1, self.modulus)

    def value_blocks(self, bound, block_size=1 << 20):
        vals = np.arange(self.start, bound + 1, self.modulus, dtype=np.int64)
        for i in range(0, len(vals), block_size):
            yield vals[i:i + block_size]

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        return [residue_dfa(base, self.modulus, {self.offset % self.modulus})]

    def language_dfa(self, base: int) -> Optional[SubwordDfa]:
        machine = residue_dfa(base, self.modulus, {self.offset % self.modulus})
        canonical = self.offset % self.modulus or self.modulus
        excluded = list(range(canonical, self.start, self.modulus))
        if len(excluded) > 64:
            return None
        for v in excluded:
            machine = intersect(machine, _exclude_exact_value_dfa(base, v))
        return machine


def _exclude_exact_value_dfa(base: int, value: int) -> SubwordDfa:
    """Accepts every string except the exact digit string of ``value``."""
    from .numerals import to_numeral
    digits = to_numeral(value, base).digits
    n = len(digits)
    # states 0..n-1: matched prefix so far; n: full match; n+1: diverged
    rows = []
    for s in range(n):
        rows.append(tuple(s + 1 if d == digits[s] else n + 1
                          for d in range(base)))
    rows.append(tuple(n + 1 for _ in range(base)))  # extending the match diverges
    rows.append(tuple(n + 1 for _ in range(base)))
    accepting = frozenset(set(range(n)) | {n + 1})
    return SubwordDfa(base, 0, tuple(rows), accepting)


class TotientImage(OracleSpec):
    def __init__(self, policy: FactorPolicy = FactorPolicy()):
        self.policy = policy

    def describe(self) -> str:
        return "totient"

    def contains(self, n: int) -> Membership:
        return is_totient(n, self.policy).to_membership()

    def enumerate(self, bound: int) -> Iterator[int]:
        values, _ = totient_values_up_to(bound)
        yield from (int(v) for v in values)

    def witnesses(self, bound: int) -> dict[int, int]:
        return totient_values_up_to(bound)[1]

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        return [residue_dfa(base, 2, {0})]  # phi(m) even for m > 2


class ShiftedTotient(OracleSpec):
    def __init__(self, shift: int, policy: FactorPolicy = FactorPolicy()):
        self.shift = shift
        self.policy = policy

    def describe(self) -> str:
        return f"totient+{self.shift}"

    def contains(self, n: int) -> Membership:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        if n - self.shift < 1:
            return Membership(False)
        return is_totient(n - self.shift, self.policy).to_membership()

    def enumerate(self, bound: int) -> Iterator[int]:
        if bound <= self.shift:
            return
        values, _ = totient_values_up_to(bound - self.shift)
        yield from (int(v) + self.shift for v in values)

    def witnesses(self, bound: int) -> dict[int, int]:
        if bound <= self.shift:
            return {}
        return {v + self.shift: m
                for v, m in totient_values_up_to(bound - self.shift)[1].items()}


class PsiImage(OracleSpec):
    def __init__(self, policy: FactorPolicy = FactorPolicy()):
        self.policy = policy

    def describe(self) -> str:
        return "psi"

    def contains(self, n: int) -> Membership:
        return is_psi_value(n, self.policy).to_membership()

    def enumerate(self, bound: int) -> Iterator[int]:
        values, _ = psi_values_up_to(bound)
        yield from (int(v) for v in values)

    def witnesses(self, bound: int) -> dict[int, int]:
        return psi_values_up_to(bound)[1]

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        return [residue_dfa(base, 2, {0})]  # psi(m) even for m > 2


class EvenPerfect(OracleSpec):
    def __init__(self, data_dir: Optional[str] = None):
        self.data_dir = data_dir

    def describe(self) -> str:
        return "perfect"

    def contains(self, n: int) -> Membership:
        return is_even_perfect(n)

    def enumerate(self, bound: int) -> Iterator[int]:
        exps = mersenne_exponents(self.data_dir)
        values = even_perfects(len(exps), self.data_dir)
        if values[-1] < bound:
            raise InsufficientDataError(
                f"mersenne_exponents.txt covers perfect numbers up to "
                f"{values[-1]}, requested bound {bound}")
        yield from (v for v in values if v <= bound)


class FiniteSet(OracleSpec):
    def __init__(self, values, source: Optional[str] = None):
        self.values = tuple(sorted(set(int(v) for v in values)))
        if self.values and self.values[0] < 1:
            raise DomainError("finite sets live in the positive integers")
        self.source = source
        self._set = frozenset(self.values)

    def describe(self) -> str:
        if self.source:
            return f"finite:{self.source}"
        return "finite:{" + ",".join(str(v) for v in self.values) + "}"

    def contains(self, n: int) -> Membership:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        return Membership(n in self._set)

    def enumerate(self, bound: int) -> Iterator[int]:
        yield from (v for v in self.values if v <= bound)


class Union(OracleSpec):
    def __init__(self, parts: Sequence[OracleSpec]):
        self.parts = tuple(parts)
        if not self.parts:
            raise DomainError("union of no sets")

    def describe(self) -> str:
        return "|".join(p.describe() for p in self.parts)

    def contains(self, n: int) -> Membership:
        assumptions = []
        undecided = False
        for p in self.parts:
            m = p.contains(n)
            if m.member:
                return m
            if m.member is None:
                undecided = True
                assumptions.extend(m.assumptions)
        if undecided:
            return Membership(None, None, tuple(assumptions))
        return Membership(False)

    def enumerate(self, bound: int) -> Iterator[int]:
        merged = heapq.merge(*(p.enumerate(bound) for p in self.parts))
        last = None
        for v in merged:
            if v != last:
                yield v
                last = v


class Intersection(OracleSpec):
    def __init__(self, parts: Sequence[OracleSpec]):
        self.parts = tuple(parts)
        if not self.parts:
            raise DomainError("intersection of no sets")

    def describe(self) -> str:
        return "&".join(p.describe() for p in self.parts)

    def contains(self, n: int) -> Membership:
        assumptions = []
        witness = None
        undecided = False
        for p in self.parts:
            m = p.contains(n)
            if m.member is False:
                return Membership(False)
            if m.member is None:
                undecided = True
            assumptions.extend(m.assumptions)
            witness = witness or m.witness
        if undecided:
            return Membership(None, None, tuple(assumptions))
        return Membership(True, witness, tuple(assumptions))

    def enumerate(self, bound: int) -> Iterator[int]:
        first, rest = self.parts[0], self.parts[1:]
        for v in first.enumerate(bound):
            if all(p.contains(v).member for p in rest):
                yield v

    def necessary_conditions(self, base: int) -> list[SubwordDfa]:
        out = []
        for p in self.parts:
            out.extend(p.necessary_conditions(base))
        return out


def necessary_conditions(spec: OracleSpec, base: int) -> list[SubwordDfa]:
    """Automata for conditions implied by membership in the set."""
    return spec.necessary_conditions(base)


# ---------------------------------------------------------------------------
# spec grammar


class SpecSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_oracle_spec(text: str,
                      policy: FactorPolicy = FactorPolicy(),
                      data_dir: Optional[str] = None) -> OracleSpec:
    """Grammar: primes | pow2 | 3squares | qr:<m> | residue:<a>+<m>N[0]
    | totient[+<c>] | psi | perfect | finite:<file-or-{list}>,
    combinable with '&' (intersection) and '|' (union); '&' binds tighter."""
    text = text.strip()
    if not text:
        raise SpecSyntaxError("empty oracle spec", 0)
    union_parts = []
    pos = 0
    for chunk in text.split("|"):
        inter_parts = []
        inner = 0
        for atom in chunk.split("&"):
            inter_parts.append(_parse_atom(atom.strip(), pos + inner,
                                           policy, data_dir))
            inner += len(atom) + 1
        union_parts.append(inter_parts[0] if len(inter_parts) == 1
                           else Intersection(inter_parts))
        pos += len(chunk) + 1
    return union_parts[0] if len(union_parts) == 1 else Union(union_parts)


def _parse_atom(atom: str, position: int, policy: FactorPolicy,
                data_dir: Optional[str]) -> OracleSpec:
    if not atom:
        raise SpecSyntaxError("empty set expression", position)
    if atom == "primes":
        return Primes()
    if atom == "pow2":
        return PowersOfTwo()
    if atom == "3squares":
        return SumThreeSquares()
    if atom == "psi":
        return PsiImage(policy)
    if atom == "perfect":
        return EvenPerfect(data_dir)
    if atom == "totient":
        return TotientImage(policy)
    if atom.startswith("totient+"):
        try:
            return ShiftedTotient(int(atom[len("totient+"):]), policy)
        except ValueError:
            raise SpecSyntaxError("totient shift must be an integer",
                                  position + len("totient+"))
    if atom.startswith("qr:"):
        try:
            return QuadResidues(int(atom[3:]))
        except ValueError:
            raise SpecSyntaxError("qr modulus must be an integer", position + 3)
    if atom.startswith("residue:"):
        body = atom[len("residue:"):]
        if "+" not in body:
            raise SpecSyntaxError("residue class looks like a+mN or a+mN0",
                                  position + len("residue:"))
        a_txt, rest = body.split("+", 1)
        include_zero = rest.endswith("N0")
        m_txt = rest[:-2] if include_zero else (
            rest[:-1] if rest.endswith("N") else None)
        if m_txt is None:
            raise SpecSyntaxError("residue class must end with N or N0",
                                  position + len(atom))
        try:
            return ResidueClass(int(a_txt), int(m_txt), include_zero)
        except ValueError:
            raise SpecSyntaxError("residue class needs integer a and m",
                                  position + len("residue:"))
    if atom.startswith("finite:"):
        body = atom[len("finite:"):]
        if body.startswith("{") and body.endswith("}"):
            try:
                values = [int(v) for v in body[1:-1].split(",") if v.strip()]
            except ValueError:
                raise SpecSyntaxError("finite set values must be integers",
                                      position + len("finite:"))
            return FiniteSet(values)
        try:
            with open(body, "r", encoding="utf-8") as fh:
                values = [int(line.split("#", 1)[0])
                          for line in fh
                          if line.split("#", 1)[0].strip()]
        except OSError as exc:
            raise SpecSyntaxError(f"cannot read finite set file: {exc}",
                                  position + len("finite:"))
        return FiniteSet(values, source=body)
    raise SpecSyntaxError(f"unknown set expression {atom!r}", position)

"""Primality, factorization, and the multiplicative functions phi and psi.

Primality is deterministic below 2**64 (fixed Miller-Rabin base set) and
a Baillie-PSW style probable-prime battery above; callers must treat
``PROBABLE_PRIME`` as an assumption and surface it in reports.

Factorization is desk-scale: trial division, Brent's variant of Pollard
rho, then consulted factor tables (notably the repunit table, since
55...50 = 2 * 5^2 * R_l); anything left over is reported as a Partial
result rather than guessed at.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .numerals import DomainError

PRIME = "prime"
COMPOSITE = "composite"
PROBABLE_PRIME = "probable_prime"

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
# Deterministic Miller-Rabin base set for n < 2**64 (Sinclair/Jaeschke).
_MR64_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TWO64 = 1 << 64


def _miller_rabin_witness(n: int, a: int) -> bool:
    """True if a witnesses compositeness of odd n > 2."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a % n, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    assert n > 0 and n % 2 == 1
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_perfect_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test, Selfridge parameter choice."""
    if _is_perfect_square(n):
        return False
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    p, q = 1, (1 - d) // 4

    k = n + 1
    s = 0
    while k % 2 == 0:
        k //= 2
        s += 1
    # compute U_k, V_k, Q^k by binary expansion of k
    u, v, qk = 1, p, q % n
    for bit in bin(k)[3:]:
        u, v = (u * v) % n, (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if bit == "1":
            u, v = ((p * u + v) * ((n + 1) // 2)) % n, \
                   ((d * u + p * v) * ((n + 1) // 2)) % n
            qk = (qk * q) % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        u, v = (u * v) % n, (v * v - 2 * qk) % n
        qk = (qk * qk) % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> str:
    """PRIME / COMPOSITE below 2**64; PROBABLE_PRIME / COMPOSITE above."""
    if n < 1:
        raise DomainError(f"primality is defined for n >= 1, got {n}")
    if n == 1:
        return COMPOSITE
    for p in _SMALL_PRIMES:
        if n == p:
            return PRIME
        if n % p == 0:
            return COMPOSITE
    if n < _TWO64:
        for a in _MR64_BASES:
            if _miller_rabin_witness(n, a):
                return COMPOSITE
        return PRIME
    if _miller_rabin_witness(n, 2):
        return COMPOSITE
    return PROBABLE_PRIME if _strong_lucas_prp(n) else COMPOSITE


def is_probably_prime(n: int) -> bool:
    return is_prime(n) in (PRIME, PROBABLE_PRIME)


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> tuple:
    """Ascending tuple of primes <= limit (simple sieve, cached)."""
    import numpy as np
    if limit < 2:
        return ()
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


def _brent_rho(n: int, rounds: int, rng: random.Random) -> Optional[int]:
    """Brent's cycle-finding Pollard rho; returns a nontrivial factor."""
    if n % 2 == 0:
        return 2
    for _ in range(rounds):
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


@dataclass(frozen=True)
class FactorPolicy:
    trial_bound: int = 10**6
    rho_rounds: int = 32
    seed: int = 0
    use_tables: bool = True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization, possibly partial (unfactored cofactor left)."""

    n: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent) ascending
    cofactor: int = 1                     # 1 when complete
    assumptions: tuple[str, ...] = ()     # probable-prime / table usage notes

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def status(self) -> str:
        return "complete" if self.complete else "partial"

    def product(self) -> int:
        out = self.cofactor
        for p, e in self.factors:
            out *= p**e
        return out

    def exponent_of(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def square_divisor_primes(self) -> tuple[int, ...]:
        return tuple(p for p, e in self.factors if e >= 2)

    def render(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if not self.complete:
            parts.append(f"C{len(str(self.cofactor))}({self.cofactor})")
        return "*".join(parts) if parts else "1"


class FactorTableError(ValueError):
    pass


class FactorTable:
    """Consulted factorizations loaded from text files.

    Line format ``N=p1^e1*p2^e2*...``; the repunit file uses ``R<l>=...``
    keys.  Every line is validated on load: the product must reproduce
    the keyed value and every listed factor must be (probable) prime.
    """

    def __init__(self):
        self._by_value: dict[int, tuple[tuple[int, int], ...]] = {}
        self._notes: dict[int, str] = {}

    def __contains__(self, n: int) -> bool:
        return n in self._by_value

    def __len__(self) -> int:
        return len(self._by_value)

    def lookup(self, n: int):
        return self._by_value.get(n)

    def note(self, n: int) -> str:
        return self._notes.get(n, "factor table")

    def divisor_hits(self, n: int):
        """Table entries whose keyed value divides n, largest first."""
        hits = [(v, f) for v, f in self._by_value.items() if n % v == 0]
        hits.sort(reverse=True)
        return hits

    def load_file(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                self._load_line(line, f"{os.path.basename(path)}:{lineno}")

    def _load_line(self, line: str, where: str) -> None:
        try:
            key, body = line.split("=", 1)
        except ValueError:
            raise FactorTableError(f"{where}: expected KEY=FACTORS")
        key = key.strip()
        if key.startswith("R"):
            length = int(key[1:])
            value = (10**length - 1) // 9
            note = f"repunit factor table (R{length})"
        else:
            value = int(key)
            note = "factor table"
        factors = []
        for part in body.strip().split("*"):
            if "^" in part:
                p_txt, e_txt = part.split("^")
                p, e = int(p_txt), int(e_txt)
            else:
                p, e = int(part), 1
            if not is_probably_prime(p):
                raise FactorTableError(f"{where}: listed factor {p} is composite")
            factors.append((p, e))
        factors.sort()
        product = 1
        for p, e in factors:
            product *= p**e
        if product != value:
            raise FactorTableError(
                f"{where}: factors multiply to {product}, expected {value}")
        self._by_value[value] = tuple(factors)
        self._notes[value] = note


def default_data_dir(override: Optional[str] = None) -> str:
    """Data directory: explicit flag, then $MINSET_DATA_DIR, then bundled."""
    if override:
        return override
    env = os.environ.get("MINSET_DATA_DIR")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "data")


@lru_cache(maxsize=4)
def load_factor_tables(data_dir: Optional[str] = None) -> FactorTable:
    table = FactorTable()
    directory = default_data_dir(data_dir)
    for name in ("repunit_factors.txt", "factor_tables.txt"):
        path = os.path.join(directory, name)
        if os.path.exists(path):
            table.load_file(path)
    return table


def factorize(n: int, policy: FactorPolicy = FactorPolicy(),
              tables: Optional[FactorTable] = None) -> Factorization:
    """Complete when everything reduces to (probable) primes, else Partial."""
    if n < 1:
        raise DomainError(f"factorization is defined for n >= 1, got {n}")
    if n == 1:
        return Factorization(1, ())
    if tables is None and policy.use_tables:
        tables = load_factor_tables()

    factors: dict[int, int] = {}
    assumptions: list[str] = []

    def credit(p: int, e: int = 1) -> None:
        factors[p] = factors.get(p, 0) + e

    remaining = n
    # Consult the tables before trial division: trial division would strip
    # the small factors of a keyed value and the leftover cofactor would no
    # longer match any table key.
    if tables is not None:
        for value, table_factors in tables.divisor_hits(n):
            applied = False
            while remaining % value == 0:
                for p, e in table_factors:
                    credit(p, e)
                remaining //= value
                applied = True
            if applied:
                assumptions.append(tables.note(value))
    for p in primes_up_to(min(policy.trial_bound, math.isqrt(remaining) + 1)):
        if p * p > remaining:
            break
        while remaining % p == 0:
            credit(p)
            remaining //= p
    if remaining > 1 and remaining <= policy.trial_bound * policy.trial_bound:
        # survived trial division below its square root: prime
        credit(remaining)
        remaining = 1

    rng = random.Random(policy.seed or 0x5eed)
    stack = [remaining] if remaining > 1 else []
    unfactored = 1
    while stack:
        m = stack.pop()
        status = is_prime(m)
        if status == PRIME:
            credit(m)
            continue
        if status == PROBABLE_PRIME:
            credit(m)
            assumptions.append(f"probable prime {m}")
            continue
        if tables is not None and tables.lookup(m) is not None:
            for p, e in tables.lookup(m):
                credit(p, e)
            assumptions.append(tables.note(m))
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        g = _brent_rho(m, policy.rho_rounds, rng)
        if g is None or g in (1, m):
            unfactored *= m
            continue
        stack.extend((g, m // g))

    ordered = tuple(sorted(factors.items()))
    return Factorization(n, ordered, unfactored, tuple(dict.fromkeys(assumptions)))


def phi_eval(n: int, policy: FactorPolicy = FactorPolicy()) -> int:
    """Euler phi via the product formula; requires complete factorization."""
    if n < 1:
        raise DomainError(f"phi is defined for n >= 1, got {n}")
    if n == 1:
        return 1
    fac = factorize(n, policy)
    if not fac.complete:
        raise DomainError(f"unfactored input: cofactor {fac.cofactor} of {n}")
    out = 1
    for p, e in fac.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def psi_eval(n: int, policy: FactorPolicy = FactorPolicy()) -> int:
    """Dedekind psi via the product formula; requires complete factorization."""
    if n < 1:
        raise DomainError(f"psi is defined for n >= 1, got {n}")
    if n == 1:
        return 1
    fac = factorize(n, policy)
    if not fac.complete:
        raise DomainError(f"unfactored input: cofactor {fac.cofactor} of {n}")
    out = 1
    for p, e in fac.factors:
        out *= (p + 1) * p ** (e - 1)
    return out

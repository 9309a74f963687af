#!/usr/bin/env python3
"""Regenerate data/repunit_factors.txt.

Factors the repunits R_3 .. R_68 by factoring the cyclotomic values
Phi_d(10) for every d dividing some target length, then multiplying the
pieces back together.  The heavy lifting (ECM for 15-25 digit factors)
is done by sympy; a few known large factors are seeded as hints and
verified before use, so a stale hint can never corrupt the table.

Run from the repository root:

    python3 tools/gen_repunit_table.py > src/minset/data/repunit_factors.txt
"""

import sys
from functools import reduce

from sympy import factorint, isprime
from sympy.ntheory import mobius

MAX_LEN = 68

# Verified-before-use factor hints for the slow cyclotomic values.
HINTS = {
    31: [2791, 6943319],
    37: [2028119, 247629013],
    41: [83, 1231, 538987],
    43: [173, 1527791, 1963506722254397],
    47: [35121409],
    49: [505885997],
    53: [107, 1659431, 1325815267337711173],
    59: [2559647034361],
    67: [493121, 79863595778924342083],
}


def cyclotomic_value_10(d):
    """Phi_d(10) via the Moebius product over divisors."""
    num = 1
    den = 1
    for e in range(1, d + 1):
        if d % e:
            continue
        mu = mobius(d // e)
        if mu == 1:
            num *= 10**e - 1
        elif mu == -1:
            den *= 10**e - 1
    assert num % den == 0
    return num // den


def factor_with_hints(n, hints):
    factors = {}
    for h in hints:
        if n % h == 0 and isprime(h):
            while n % h == 0:
                factors[h] = factors.get(h, 0) + 1
                n //= h
    if n > 1:
        if isprime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            for p, e in factorint(n, use_ecm=True).items():
                factors[p] = factors.get(p, 0) + e
    return factors


def main():
    phi_factors = {}
    for d in range(2, MAX_LEN + 1):
        v = cyclotomic_value_10(d)
        phi_factors[d] = factor_with_hints(v, HINTS.get(d, []))
        check = reduce(lambda a, b: a * b,
                       (p**e for p, e in phi_factors[d].items()), 1)
        assert check == v, d
        print(f"phi({d}) done", file=sys.stderr)

    print("# Prime factorizations of the repunits R_l = (10^l - 1)/9.")
    print("# Generated by tools/gen_repunit_table.py; each line is")
    print("# validated (multiplication + primality) when loaded.")
    for length in range(3, MAX_LEN + 1):
        combined = {}
        for d in range(2, length + 1):
            if length % d:
                continue
            for p, e in phi_factors[d].items():
                combined[p] = combined.get(p, 0) + e
        r = (10**length - 1) // 9
        check = reduce(lambda a, b: a * b,
                       (p**e for p, e in combined.items()), 1)
        assert check == r, length
        body = "*".join(f"{p}^{e}" if e > 1 else str(p)
                        for p in sorted(combined)
                        for e in [combined[p]])
        print(f"R{length}={body}")


if __name__ == "__main__":
    main()

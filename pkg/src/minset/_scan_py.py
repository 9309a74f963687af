"""Pure-Python scan kernel (fallback for the compiled extension).

``scan_segment`` filters an ascending block of candidate values against
the patterns collected so far: a value survives when no pattern is a
digit-subsequence of it.  Each survivor's digit string is appended to
``patterns`` immediately, so later values in the same block already see
it -- exactly the incremental minimal-set recurrence.
"""

from __future__ import annotations

from .numerals import DIGIT_ALPHABET


def render_digits(value: int, base: int) -> str:
    if base == 10:
        return str(value)
    out = []
    v = value
    while v:
        v, d = divmod(v, base)
        out.append(DIGIT_ALPHABET[d])
    return "".join(reversed(out))


def _is_subseq(pattern: str, text: str) -> bool:
    it = iter(text)
    return all(ch in it for ch in pattern)


def scan_segment(values, patterns: list[str], base: int) -> list[int]:
    """Return the survivors of ``values``; mutates ``patterns`` in place."""
    survivors: list[int] = []
    for raw in values:
        v = int(raw)
        s = render_digits(v, base)
        n = len(s)
        for p in patterns:
            if len(p) <= n and _is_subseq(p, s):
                break
        else:
            survivors.append(v)
            patterns.append(s)
    return survivors

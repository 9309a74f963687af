"""Base-b digit strings, the subsequence order, and antichains.

Everything downstream works on ``Numeral`` values: a positive integer
together with its digit expansion in some base between 2 and 36.  The
subsequence (subword) order x <| y -- "x can be obtained from y by
deleting digits" -- is implemented here once, by the greedy two-pointer
scan, and every faster path in the package is tested against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

DIGIT_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
MIN_BASE = 2
MAX_BASE = 36


class DomainError(ValueError):
    """Raised when an argument is outside an operation's domain."""


def _check_base(base: int) -> None:
    if not MIN_BASE <= base <= MAX_BASE:
        raise DomainError(f"base must be in [{MIN_BASE}, {MAX_BASE}], got {base}")


@dataclass(frozen=True, order=False)
class Numeral:
    """A positive integer paired with its base-b expansion.

    digits are most significant first and never start with 0.
    """

    base: int
    digits: tuple[int, ...]
    value: int = field(compare=False)

    def __post_init__(self):
        _check_base(self.base)
        if not self.digits:
            raise DomainError("empty digit sequence")
        if self.digits[0] == 0:
            raise DomainError("leading zero in numeral")
        if any(not 0 <= d < self.base for d in self.digits):
            raise DomainError(f"digit out of range for base {self.base}")
        v = 0
        for d in self.digits:
            v = v * self.base + d
        if v != self.value:
            raise DomainError(f"value {self.value} does not match digits {self.digits}")

    def __str__(self) -> str:
        return "".join(DIGIT_ALPHABET[d] for d in self.digits)

    def render(self, with_base: bool = False) -> str:
        """Plain digit string, optionally with a ``_b`` suffix (e.g. 110_2)."""
        s = str(self)
        return f"{s}_{self.base}" if with_base else s

    def __len__(self) -> int:
        return len(self.digits)

    def __lt__(self, other: "Numeral") -> bool:
        return self.value < other.value

    def __le__(self, other: "Numeral") -> bool:
        return self.value <= other.value


def to_numeral(value: int, base: int = 10) -> Numeral:
    """Digit expansion of a positive integer, most significant first."""
    _check_base(base)
    if value < 1:
        raise DomainError(f"numerals represent positive integers, got {value}")
    digits = []
    v = value
    while v:
        v, d = divmod(v, base)
        digits.append(d)
    return Numeral(base, tuple(reversed(digits)), value)


def parse_numeral(text: str, base: int = 10) -> Numeral:
    """Parse a digit string (base-36 alphabet, case-insensitive)."""
    _check_base(base)
    s = text.strip().lower()
    if s.endswith(f"_{base}"):
        s = s[: s.rfind("_")]
    if not s:
        raise DomainError("empty numeral string")
    digits = []
    for ch in s:
        d = DIGIT_ALPHABET.find(ch)
        if d < 0 or d >= base:
            raise DomainError(f"invalid digit {ch!r} for base {base}")
        digits.append(d)
    if digits[0] == 0:
        raise DomainError(f"leading zero in numeral {text!r}")
    value = 0
    for d in digits:
        value = value * base + d
    return Numeral(base, tuple(digits), value)


def digits_of(value: int, base: int) -> tuple[int, ...]:
    """Digit tuple of a positive integer without building a Numeral."""
    return to_numeral(value, base).digits


def _same_base(x: Numeral, y: Numeral) -> None:
    if x.base != y.base:
        raise DomainError(f"base mismatch: {x.base} vs {y.base}")


def is_subsequence(x: Numeral, y: Numeral) -> bool:
    """Greedy left-to-right test of x <| y (reference algorithm)."""
    _same_base(x, y)
    return is_digit_subsequence(x.digits, y.digits)


def is_digit_subsequence(xs: Sequence[int], ys: Sequence[int]) -> bool:
    if len(xs) > len(ys):
        return False
    i = 0
    for d in ys:
        if d == xs[i]:
            i += 1
            if i == len(xs):
                return True
    return i == len(xs)


def incomparable(x: Numeral, y: Numeral) -> bool:
    """Neither x <| y nor y <| x."""
    _same_base(x, y)
    return not is_subsequence(x, y) and not is_subsequence(y, x)


@dataclass(frozen=True)
class Antichain:
    """A finite set of pairwise incomparable numerals, sorted by value."""

    base: int
    elements: tuple[Numeral, ...]

    def __post_init__(self):
        _check_base(self.base)
        for e in self.elements:
            if e.base != self.base:
                raise DomainError("mixed bases in antichain")
        values = [e.value for e in self.elements]
        if values != sorted(values) or len(set(values)) != len(values):
            raise DomainError("antichain elements must be strictly ascending")
        for i, x in enumerate(self.elements):
            for y in self.elements[i + 1:]:
                if is_subsequence(x, y) or is_subsequence(y, x):
                    raise DomainError(
                        f"{x} and {y} are comparable; not an antichain")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, item) -> bool:
        if isinstance(item, Numeral):
            return item in self.elements
        return any(e.value == item for e in self.elements)

    def values(self) -> tuple[int, ...]:
        return tuple(e.value for e in self.elements)

    def render(self, with_base: bool = False) -> str:
        return "{" + ", ".join(e.render(with_base) for e in self.elements) + "}"


def antichain_from_values(values: Iterable[int], base: int = 10) -> Antichain:
    return Antichain(base, tuple(to_numeral(v, base) for v in sorted(set(values))))


def reduce_to_antichain(candidates: Iterable[Numeral]) -> Antichain:
    """Drop every candidate that contains a numerically smaller candidate.

    Keeps exactly those elements for which no strictly smaller candidate
    is a subsequence; the survivors are pairwise incomparable because a
    comparable pair is ordered by value (deleting digits from a valid
    numeral can only decrease it).
    """
    pool = sorted({c.digits: c for c in candidates}.values(), key=lambda c: c.value)
    if not pool:
        raise DomainError("cannot form an antichain from no candidates")
    base = pool[0].base
    for c in pool:
        if c.base != base:
            raise DomainError("mixed bases among candidates")
    kept: list[Numeral] = []
    for c in pool:
        if not any(is_subsequence(k, c) for k in kept if k.value < c.value):
            kept.append(c)
    return Antichain(base, tuple(kept))

"""Binary and ternary words over {0, 1, *}.

A ternary word of length ``n`` is stored as two disjoint bitmasks: ``zeros``
marks positions holding 0 and ``ones`` marks positions holding 1.  Positions
in neither mask hold the erasure symbol ``*``.  Bit ``i`` of a mask is
position ``i`` of the word (the ``i``-th character of its string form).

With this layout the symmetric disjunctive sum is two ANDs and the
symmetric cover test is two subset checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, Union


class Trit(enum.Enum):
    ZERO = "0"
    ONE = "1"
    STAR = "*"

    def __str__(self) -> str:
        return self.value


def _full(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class BinaryWord:
    n: int
    bits: int
    weight: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("word length must be >= 1")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.n}")
        object.__setattr__(self, "weight", self.bits.bit_count())

    @classmethod
    def from_string(cls, text: str) -> "BinaryWord":
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"illegal binary symbol {ch!r}")
        return cls(len(text), bits)

    @classmethod
    def from_bits(cls, seq: Sequence[int]) -> "BinaryWord":
        return cls.from_string("".join("1" if b else "0" for b in seq))

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        return (self.bits >> (i % self.n)) & 1

    def __iter__(self):
        return (self[i] for i in range(self.n))

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def negate(self) -> "BinaryWord":
        return BinaryWord(self.n, ~self.bits & _full(self.n))

    def to_ternary(self) -> "TernaryWord":
        return TernaryWord(self.n, ~self.bits & _full(self.n), self.bits)


@dataclass(frozen=True)
class TernaryWord:
    n: int
    zeros: int
    ones: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("word length must be >= 1")
        full = _full(self.n)
        if self.zeros & ~full or self.ones & ~full or self.zeros < 0 or self.ones < 0:
            raise ValueError("masks do not fit in word length")
        if self.zeros & self.ones:
            raise ValueError("a position cannot be both 0 and 1")

    @classmethod
    def from_string(cls, text: str) -> "TernaryWord":
        zeros = ones = 0
        for i, ch in enumerate(text):
            if ch == "0":
                zeros |= 1 << i
            elif ch == "1":
                ones |= 1 << i
            elif ch != "*":
                raise ValueError(f"illegal ternary symbol {ch!r}")
        return cls(len(text), zeros, ones)

    @classmethod
    def from_trits(cls, trits: Iterable[Trit]) -> "TernaryWord":
        return cls.from_string("".join(t.value for t in trits))

    @property
    def stars(self) -> int:
        """Bitmask of erased positions."""
        return _full(self.n) & ~(self.zeros | self.ones)

    @property
    def trits(self) -> tuple[Trit, ...]:
        return tuple(self[i] for i in range(self.n))

    def is_binary(self) -> bool:
        return not self.stars

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> Trit:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        i %= self.n
        if (self.zeros >> i) & 1:
            return Trit.ZERO
        if (self.ones >> i) & 1:
            return Trit.ONE
        return Trit.STAR

    def __str__(self) -> str:
        return "".join(self[i].value for i in range(self.n))

    def with_star(self, i: int) -> "TernaryWord":
        """Copy of this word with position ``i`` erased."""
        mask = ~(1 << i)
        return TernaryWord(self.n, self.zeros & mask, self.ones & mask)


Word = Union[BinaryWord, TernaryWord]


def _as_ternary(x: Word) -> TernaryWord:
    return x.to_ternary() if isinstance(x, BinaryWord) else x


def _check_lengths(u: Word, v: Word) -> None:
    if u.n != v.n:
        raise ValueError(f"length mismatch: {u.n} vs {v.n}")


def disjunctive_sum(u: BinaryWord, v: BinaryWord) -> BinaryWord:
    _check_lengths(u, v)
    return BinaryWord(u.n, u.bits | v.bits)


def symmetric_sum(x: Word, y: Word) -> TernaryWord:
    """Componentwise 0 if both are 0, 1 if both are 1, otherwise ``*``."""
    _check_lengths(x, y)
    x, y = _as_ternary(x), _as_ternary(y)
    return TernaryWord(x.n, x.zeros & y.zeros, x.ones & y.ones)


def symmetric_sum_all(words: Iterable[Word]) -> TernaryWord:
    words = list(words)
    if not words:
        raise ValueError("symmetric sum of an empty collection")
    return reduce(symmetric_sum, words[1:], _as_ternary(words[0]))


def disjunctive_sum_all(words: Iterable[BinaryWord]) -> BinaryWord:
    words = list(words)
    if not words:
        raise ValueError("disjunctive sum of an empty collection")
    return reduce(disjunctive_sum, words)


def covers(u: BinaryWord, v: BinaryWord) -> bool:
    """True iff ``u OR v == u``."""
    _check_lengths(u, v)
    return v.bits & ~u.bits == 0


def sym_covers(u: Word, v: Word) -> bool:
    """True iff every position of ``u`` is ``*`` or equals ``v`` there."""
    _check_lengths(u, v)
    u, v = _as_ternary(u), _as_ternary(v)
    return u.zeros & ~v.zeros == 0 and u.ones & ~v.ones == 0

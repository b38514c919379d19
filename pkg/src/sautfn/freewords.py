"""Freely reduced words in the free group F_n.

A word is stored as a tuple of signed generator numbers: ``k`` stands for
``x_k`` and ``-k`` for ``x_k^-1`` (generators are numbered from 1).  Words are
reduced at construction, so equality of words is plain tuple equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class RankError(ValueError):
    """A letter refers to a generator outside the declared rank, or ranks differ."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for a in letters:
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise RankError(f"rank must be positive, got {self.rank}")
        letters = tuple(int(a) for a in self.letters)
        for a in letters:
            if a == 0 or abs(a) > self.rank:
                raise RankError(f"letter {a} out of range for rank {self.rank}")
        object.__setattr__(self, "letters", _free_reduce(letters))

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, k: int, sign: int = 1) -> "Word":
        return cls(rank, (sign * k,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters

    def signed_letters(self) -> list[tuple[int, int]]:
        """The word as ``(index, sign)`` pairs."""
        return [(abs(a), 1 if a > 0 else -1) for a in self.letters]

    def __str__(self) -> str:
        return render_word(self)


def reduce(letters: Sequence[int], rank: int) -> Word:
    return Word(rank, tuple(letters))


def concat(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise RankError(f"rank mismatch: {u.rank} vs {v.rank}")
    return Word(u.rank, u.letters + v.letters)


def invert(w: Word) -> Word:
    return Word(w.rank, tuple(-a for a in reversed(w.letters)))


_TERM = re.compile(r"x(\d+)(\^-1)?")


def parse_word(text: str, rank: int) -> Word:
    """Parse ``x1*x2^-1*x3``; the empty string is the identity."""
    if text.strip() == "":
        return Word.identity(rank)
    letters = []
    pos = 0
    for chunk in text.split("*"):
        stripped = chunk.strip()
        start = pos + (len(chunk) - len(chunk.lstrip()))
        m = _TERM.fullmatch(stripped)
        if m is None:
            raise WordSyntaxError(f"expected x<k> or x<k>^-1, got {stripped!r}", start)
        k = int(m.group(1))
        if k < 1 or k > rank:
            raise RankError(f"generator x{k} at position {start} exceeds rank {rank}")
        letters.append(-k if m.group(2) else k)
        pos += len(chunk) + 1
    return Word(rank, tuple(letters))


def render_word(w: Word) -> str:
    return "*".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in w.letters)


def abelianize_word(w: Word) -> tuple[int, ...]:
    """Exponent sum of each generator."""
    v = [0] * w.rank
    for a in w.letters:
        v[abs(a) - 1] += 1 if a > 0 else -1
    return tuple(v)

"""Indicator vectors, hyperplanes of Z_2^n, and the matching free subgroups.

A hyperplane P of Z_2^n is recorded by its indicator vector: bit j is 1 iff
the standard vector epsilon_j lies in P.  Every binary vector except the
all-ones vector is the indicator of exactly one hyperplane, namely
``{v : sum_j (1 - i_j) v_j = 0}``.

Positions are 1-based in everything user facing (``x1``, ``epsilon_1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _bits
from .automorphisms import Automorphism, ElementaryAuto, RIGHT, certify, compose, elementary
from .freewords import RankError, Word, abelianize_word


@dataclass(frozen=True)
class Indicator:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("indicator must be non-empty")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"indicator entries must be 0/1, got {bits}")
        if all(bits):
            raise ValueError("the all-ones vector is not the indicator of a hyperplane")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "Indicator":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"indicator must be a bitstring, got {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def n(self) -> int:
        return len(self.bits)

    def zeros(self) -> list[int]:
        return [j for j, b in enumerate(self.bits, start=1) if b == 0]

    def ones(self) -> list[int]:
        return [j for j, b in enumerate(self.bits, start=1) if b == 1]

    def normal(self) -> int:
        """Packed linear functional whose kernel is P_I."""
        return _bits.pack([1 - b for b in self.bits])

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def all_indicators(n: int) -> list[Indicator]:
    """Every indicator of length n, in increasing bitstring order."""
    out = []
    for v in range(2**n - 1):
        out.append(Indicator(tuple(int(c) for c in format(v, f"0{n}b"))))
    return out


@dataclass(frozen=True)
class Hyperplane:
    n: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        basis = tuple(tuple(int(b) & 1 for b in v) for v in self.basis)
        if any(len(v) != self.n for v in basis):
            raise ValueError("basis vectors must have length n")
        if len(basis) != self.n - 1 or _bits.rank(_bits.pack(v) for v in basis) != self.n - 1:
            raise ValueError(f"basis must consist of {self.n - 1} independent vectors")
        object.__setattr__(self, "basis", basis)

    @property
    def vectors(self) -> list[int]:
        return [_bits.pack(v) for v in self.basis]

    def contains(self, v: Sequence[int]) -> bool:
        return _bits.in_span(_bits.pack(v), _bits.echelon(self.vectors))


def _unit(n: int, j: int) -> tuple[int, ...]:
    return tuple(1 if c == j else 0 for c in range(1, n + 1))


def hyperplane_basis(ind: Indicator) -> Hyperplane:
    n, z = ind.n, ind.zeros()
    vecs = []
    for a, b in zip(z, z[1:]):
        vecs.append(tuple(x ^ y for x, y in zip(_unit(n, a), _unit(n, b))))
    vecs.extend(_unit(n, o) for o in ind.ones())
    return Hyperplane(n, tuple(vecs))


def indicator_of(plane: Hyperplane) -> Indicator:
    span = _bits.echelon(plane.vectors)
    if len(span) != plane.n - 1:
        raise ValueError("rank-deficient hyperplane basis")
    return Indicator(tuple(int(_bits.in_span(1 << (j - 1), span)) for j in range(1, plane.n + 1)))


def s_basis(ind: Indicator) -> list[Word]:
    """Free basis of the subgroup S_I, which maps onto P_I mod 2."""
    n, z = ind.n, ind.zeros()
    words = [Word(n, (a, -b)) for a, b in zip(z, z[1:])]
    words.extend(Word.generator(n, o) for o in ind.ones())
    return words


def complete_basis(ind: Indicator, append: int | None = None) -> tuple[list[Word], Automorphism]:
    """S_I basis followed by x_j, by default for the smallest j with i_j = 0."""
    if append is None:
        append = ind.zeros()[0]
    elif append not in ind.zeros():
        raise ValueError(f"x{append} lies in S_I and cannot complete its basis")
    words = s_basis(ind) + [Word.generator(ind.n, append)]
    return words, certify(words)


def word_mod2(w: Word) -> int:
    """Packed image of a word in Z_2^n."""
    return _bits.pack([x & 1 for x in abelianize_word(w)])


def mod2_rows(phi: Automorphism) -> list[int]:
    return [word_mod2(w) for w in phi.images]


def indicator_in_basis(ind: Indicator, phi: Automorphism) -> tuple[int, ...]:
    """Indicator of P_I read in the basis of Z_2^n given by the images of ``phi``.

    P_I is rewritten in the new coordinates and passed back through
    ``indicator_of``.  The result may be all ones only if ``phi`` is singular
    mod 2, which certified automorphisms never are.
    """
    if ind.n != phi.rank:
        raise RankError(f"indicator length {ind.n} vs rank {phi.rank}")
    rows = mod2_rows(phi)
    inv = _bits.invert_rows(rows)
    if inv is None:
        raise ValueError("automorphism is singular mod 2")
    coords = [_bits.unpack(_bits.vec_mat(v, inv), ind.n) for v in hyperplane_basis(ind).vectors]
    return indicator_of(Hyperplane(ind.n, tuple(coords))).bits


def lemma_a_target(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (1, 0) + (1,) * (n - 2), (0, 1) + (1,) * (n - 2)


def verify_lemma_a(ind: Indicator, ind2: Indicator, phi: Automorphism) -> bool:
    if ind.n != ind2.n or ind.n != phi.rank:
        raise RankError("indicator lengths and automorphism rank must agree")
    if not phi.certified:
        raise ValueError("verify_lemma_a needs a certified automorphism")
    t1, t2 = lemma_a_target(ind.n)
    return indicator_in_basis(ind, phi) == t1 and indicator_in_basis(ind2, phi) == t2


def _blocks(a: Sequence[int], b: Sequence[int]) -> list[list[int]]:
    # disagreement classes in the fixed order (1,0), (0,1), (1,1), (0,0)
    return [[j for j, (x, y) in enumerate(zip(a, b), start=1) if (x, y) == pat]
            for pat in ((1, 0), (0, 1), (1, 1), (0, 0))]


def _premove(ind: Indicator, ind2: Indicator) -> ElementaryAuto | None:
    """Basis change that makes both disagreement classes non-empty.

    If I and I' disagree only one way, some position p is 0 in both; replacing
    x_p by x_p x_a^-1 for a disagreeing position a flips p into the missing class.
    """
    d10, d01, _, s00 = _blocks(ind.bits, ind2.bits)
    if d10 and d01:
        return None
    a = (d10 or d01)[0]
    return ElementaryAuto(RIGHT, s00[0], a, -1)


def stage_words(a: Sequence[int], b: Sequence[int]) -> list[Word]:
    """Basis y_1..y_n built from the block structure of two indicators.

    Both disagreement classes must be non-empty.  Positions are sorted into
    the block order (1,0) (0,1) (1,1) (0,0), the basis is written for that
    order, and letters are mapped back to the original positions.
    """
    d10, d01, s11, s00 = _blocks(a, b)
    if not d10 or not d01:
        raise ValueError("both disagreement classes must be non-empty")
    order = d10 + d01 + s11 + s00
    n = len(order)
    k, d, m, z = len(d10), len(d10) + len(d01), len(s11), len(s00)

    def t(p: int, sign: int = 1) -> int:
        return sign * order[p - 1]

    ys: list[tuple[int, ...]] = [(t(1),), (t(k + 1),)]
    ys += [(t(j), t(j + 1, -1)) for j in range(1, k)]
    ys += [(t(j), t(j + 1, -1)) for j in range(k + 1, d)]
    ys += [(t(d + l),) for l in range(1, m + 1)]
    ys += [(t(d + m + l), t(d + m + l + 1, -1)) for l in range(1, z)]
    if z:
        ys.append((t(1), t(d + m + 1, -1), t(k + 1)))
    return [Word(n, y) for y in ys]


def lemma_a_change(ind: Indicator, ind2: Indicator) -> Automorphism:
    """Certified basis change putting P_I, P_I' at indicators (1,0,1..1), (0,1,1..1)."""
    if ind.n != ind2.n:
        raise RankError("indicators must have the same length")
    if ind == ind2:
        raise ValueError("indicators must be distinct")
    n = ind.n
    pre = _premove(ind, ind2)
    if pre is None:
        words = stage_words(ind.bits, ind2.bits)
        return certify(words)
    beta = elementary(pre, n)
    a = indicator_in_basis(ind, beta)
    b = indicator_in_basis(ind2, beta)
    return compose(certify(stage_words(a, b)), beta)

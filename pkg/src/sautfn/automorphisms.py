"""Automorphisms of F_n given by generator images.

Composition is left to right: ``compose(phi, psi)`` first applies ``phi`` and
then ``psi``, so the image of ``x_i`` is ``psi`` applied to ``phi(x_i)``.
Integer matrices use the row-vector convention (row ``k`` is the exponent
vector of the image of ``x_k``), which makes the abelianization map a
homomorphism without order reversal.

Automorphisms built from elementary moves carry a *certificate*: the list of
moves whose left-to-right product gives the images.  Inverses and commutators
are only computed for certified automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .freewords import RankError, Word, abelianize_word, invert, parse_word, render_word


class UncertifiedError(ValueError):
    """Operation needs an invertibility certificate that is missing."""


class CertificateError(ValueError):
    """A certificate does not reproduce the stored images."""


RIGHT = "R"   # x_i -> x_i x_j^e
LEFT = "L"    # x_i -> x_j^-e x_i
INVERSION = "I"
SWAP = "S"


@dataclass(frozen=True)
class ElementaryAuto:
    """One elementary move.

    ``R(i,j)`` is the free transvection E_{x_i,x_j} (x_i -> x_i x_j), ``L(i,j)``
    is E_{x_i^-1,x_j} (x_i -> x_j^-1 x_i).  ``power=-1`` gives their inverses,
    x_i -> x_i x_j^-1 and x_i -> x_j x_i.
    """

    kind: str
    i: int
    j: int = 0
    power: int = 1

    def __post_init__(self):
        if self.kind not in (RIGHT, LEFT, INVERSION, SWAP):
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind in (RIGHT, LEFT, SWAP) and self.i == self.j:
            raise ValueError(f"move {self.kind} needs distinct indices, got {self.i}")
        if self.power not in (1, -1):
            raise ValueError("power must be +1 or -1")
        if self.kind in (INVERSION, SWAP) and self.power != 1:
            raise ValueError("inversions and swaps are involutions")

    def check_rank(self, rank: int) -> None:
        idx = (self.i,) if self.kind == INVERSION else (self.i, self.j)
        if any(k < 1 or k > rank for k in idx):
            raise RankError(f"move {self.descriptor()} out of range for rank {rank}")

    def inverse(self) -> "ElementaryAuto":
        if self.kind in (RIGHT, LEFT):
            return ElementaryAuto(self.kind, self.i, self.j, -self.power)
        return self

    def letter_images(self, rank: int) -> list[tuple[int, ...]]:
        """Image of each generator as a raw letter tuple."""
        images = [(k,) for k in range(1, rank + 1)]
        i, j, e = self.i, self.j, self.power
        if self.kind == RIGHT:
            images[i - 1] = (i, e * j)
        elif self.kind == LEFT:
            images[i - 1] = (-e * j, i)
        elif self.kind == INVERSION:
            images[i - 1] = (-i,)
        else:
            images[i - 1], images[j - 1] = (j,), (i,)
        return images

    def descriptor(self) -> str:
        if self.kind == INVERSION:
            return f"I({self.i})"
        s = f"{self.kind}({self.i},{self.j})"
        return s + "^-1" if self.power == -1 else s

    @classmethod
    def from_descriptor(cls, text: str) -> "ElementaryAuto":
        text = text.strip()
        power = 1
        if text.endswith("^-1"):
            power, text = -1, text[:-3]
        kind, rest = text[0], text[1:]
        if not (rest.startswith("(") and rest.endswith(")")):
            raise ValueError(f"bad move descriptor {text!r}")
        args = [int(a) for a in rest[1:-1].split(",")]
        return cls(kind, *args, power=power) if len(args) == 2 else cls(kind, args[0], power=power)


def _substitute(images: Sequence[Word], w: Word) -> Word:
    out: list[int] = []
    inv_cache: dict[int, tuple[int, ...]] = {}
    for a in w.letters:
        if a > 0:
            out.extend(images[a - 1].letters)
        else:
            if a not in inv_cache:
                inv_cache[a] = tuple(-b for b in reversed(images[-a - 1].letters))
            out.extend(inv_cache[a])
    return Word(w.rank, tuple(out))


def _apply_move(move: ElementaryAuto, w: Word) -> Word:
    imgs = [Word(w.rank, t) for t in move.letter_images(w.rank)]
    return _substitute(imgs, w)


def replay(rank: int, certificate: Sequence[ElementaryAuto]) -> tuple[Word, ...]:
    """Images obtained by composing the moves left to right from the identity."""
    images = tuple(Word.generator(rank, k) for k in range(1, rank + 1))
    for move in certificate:
        move.check_rank(rank)
        images = tuple(_apply_move(move, w) for w in images)
    return images


@dataclass(frozen=True, eq=False)
class Automorphism:
    rank: int
    images: tuple[Word, ...]
    certificate: Optional[tuple[ElementaryAuto, ...]] = None

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise RankError(f"need {self.rank} images, got {len(self.images)}")
        for w in self.images:
            if w.rank != self.rank:
                raise RankError("image rank differs from automorphism rank")
        object.__setattr__(self, "images", tuple(self.images))
        if self.certificate is not None:
            cert = tuple(self.certificate)
            object.__setattr__(self, "certificate", cert)
            if replay(self.rank, cert) != self.images:
                raise CertificateError("certificate does not reproduce the images")

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        return cls(rank, tuple(Word.generator(rank, k) for k in range(1, rank + 1)), ())

    @classmethod
    def from_moves(cls, rank: int, moves: Sequence[ElementaryAuto]) -> "Automorphism":
        return cls(rank, replay(rank, moves), tuple(moves))

    @property
    def certified(self) -> bool:
        return self.certificate is not None

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.rank == other.rank and self.images == other.images

    def __hash__(self):
        return hash((self.rank, self.images))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(w.letters == (k,) for k, w in enumerate(self.images, start=1))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "images": [render_word(w) for w in self.images],
            "certificate": None if self.certificate is None else [m.descriptor() for m in self.certificate],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Automorphism":
        rank = data["rank"]
        images = tuple(parse_word(s, rank) for s in data["images"])
        cert = data.get("certificate")
        if cert is not None:
            cert = tuple(ElementaryAuto.from_descriptor(d) for d in cert)
        return cls(rank, images, cert)

    def __repr__(self):
        body = ", ".join(f"x{k}->{render_word(w) or '1'}" for k, w in enumerate(self.images, start=1))
        return f"Automorphism({body})"


def elementary(move: ElementaryAuto, rank: int) -> Automorphism:
    move.check_rank(rank)
    return Automorphism.from_moves(rank, (move,))


def transvection(side: str, i: int, j: int, rank: int, power: int = 1) -> Automorphism:
    """E_{x_i,x_j} (side ``"right"``) or E_{x_i^-1,x_j} (side ``"left"``)."""
    if i == j:
        raise ValueError(f"transvection needs i != j, got i = j = {i}")
    kind = {"right": RIGHT, "left": LEFT}[side]
    return elementary(ElementaryAuto(kind, i, j, power), rank)


def inversion(i: int, rank: int) -> Automorphism:
    return elementary(ElementaryAuto(INVERSION, i), rank)


def swap(i: int, j: int, rank: int) -> Automorphism:
    return elementary(ElementaryAuto(SWAP, i, j), rank)


def apply(phi: Automorphism, w: Word) -> Word:
    if phi.rank != w.rank:
        raise RankError(f"rank mismatch: automorphism {phi.rank}, word {w.rank}")
    return _substitute(phi.images, w)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """``phi`` first, then ``psi``."""
    if phi.rank != psi.rank:
        raise RankError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    images = tuple(_substitute(psi.images, w) for w in phi.images)
    cert = None
    if phi.certified and psi.certified:
        cert = phi.certificate + psi.certificate
    return Automorphism(phi.rank, images, cert)


def compose_all(rank: int, autos: Sequence[Automorphism]) -> Automorphism:
    out = Automorphism.identity(rank)
    for a in autos:
        out = compose(out, a)
    return out


def inverse(phi: Automorphism) -> Automorphism:
    if not phi.certified:
        raise UncertifiedError("inverse needs a certified automorphism")
    return Automorphism.from_moves(phi.rank, [m.inverse() for m in reversed(phi.certificate)])


def commutator(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """[phi, psi] = phi psi phi^-1 psi^-1, read left to right."""
    return compose_all(phi.rank, [phi, psi, inverse(phi), inverse(psi)])


def conjugate(phi: Automorphism, by: Automorphism) -> Automorphism:
    """by^-1 phi by: ``phi`` transported to the basis ``by`` maps onto."""
    return compose_all(phi.rank, [inverse(by), phi, by])


def magnus_generator(rank: int) -> Automorphism:
    """E_{x1,x2} E_{x1^-1,x2}, normal generator of the Torelli subgroup."""
    if rank < 2:
        raise ValueError("magnus_generator needs rank >= 2")
    return compose(transvection("right", 1, 2, rank), transvection("left", 1, 2, rank))


def phi_vw(v: Word, w: Word) -> Automorphism:
    """x_N -> v x_N w^-1 fixing the other generators; v, w avoid x_N."""
    rank = v.rank
    if w.rank != rank:
        raise RankError("v and w must have the same rank")
    if any(abs(a) == rank for a in v.letters + w.letters):
        raise ValueError(f"v and w must not involve x{rank}")
    images = [Word.generator(rank, k) for k in range(1, rank)]
    images.append(Word(rank, v.letters + (rank,) + invert(w).letters))
    return certify(images)


def abelianization_matrix(phi: Automorphism) -> list[list[int]]:
    return [list(abelianize_word(w)) for w in phi.images]


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mod_reduction(m: Sequence[Sequence[int]], modulus: int) -> list[list[int]]:
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    return [[x % modulus for x in row] for row in m]


def is_special(phi: Automorphism) -> bool:
    return int_det(abelianization_matrix(phi)) == 1


def nielsen_certificate(images: Sequence[Word]) -> tuple[ElementaryAuto, ...]:
    """Find elementary moves whose product has the given generator images.

    Greedy Nielsen reduction: repeatedly replace some u_i by u_i u_j^{+-1} or
    u_j^{+-1} u_i when that shortens the tuple, until every entry is a single
    letter, then sort out the signed permutation.  Raises ``UncertifiedError``
    if the greedy search stalls (the tuple may still be a basis).
    """
    rank = len(images)
    cur = [w.letters for w in images]
    undo: list[ElementaryAuto] = []

    def prepend(move: ElementaryAuto):
        # tuple after the move = images of compose(move, current)
        nonlocal cur
        imgs = [Word(rank, t) for t in move.letter_images(rank)]
        cur = [_substitute([Word(rank, t) for t in cur], w).letters for w in imgs]
        undo.append(move.inverse())

    while any(len(t) != 1 for t in cur):
        best = None
        total = sum(len(t) for t in cur)
        for i in range(1, rank + 1):
            for j in range(1, rank + 1):
                if i == j:
                    continue
                for kind in (RIGHT, LEFT):
                    for e in (1, -1):
                        move = ElementaryAuto(kind, i, j, e)
                        ui, uj = cur[i - 1], cur[j - 1]
                        ujinv = tuple(-a for a in reversed(uj))
                        if kind == RIGHT:
                            new = Word(rank, ui + (uj if e == 1 else ujinv))
                        else:
                            new = Word(rank, (ujinv if e == 1 else uj) + ui)
                        gain = len(ui) - len(new)
                        if gain > 0 and (best is None or gain > best[0]):
                            best = (gain, move)
        if best is None:
            raise UncertifiedError(f"Nielsen reduction stalled at total length {total}")
        prepend(best[1])

    if sorted(abs(t[0]) for t in cur) != list(range(1, rank + 1)):
        raise UncertifiedError("images do not form a basis")
    for i in range(1, rank + 1):
        target = next(p for p in range(i, rank + 1) if abs(cur[p - 1][0]) == i)
        if target != i:
            prepend(ElementaryAuto(SWAP, i, target))
        if cur[i - 1][0] < 0:
            prepend(ElementaryAuto(INVERSION, i))
    return tuple(undo)


def certify(images: Sequence[Word]) -> Automorphism:
    images = tuple(images)
    return Automorphism(len(images), images, nielsen_certificate(images))

"""SL(n,2) as an explicit table, its subgroups, and the projection from SAut(F_n).

Matrices act on row vectors.  A matrix is stored as ``n`` packed rows; the
whole matrix also packs into one integer *code* with entry (r, c) at bit
``r*n + c``.  Tables hold the codes of all group elements in BFS discovery
order, which fixes element indices across runs.  Bulk products go through
numpy on arrays of codes.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _bits
from .automorphisms import (
    Automorphism,
    ElementaryAuto,
    INVERSION,
    LEFT,
    RIGHT,
    compose,
    compose_all,
    conjugate,
    elementary,
    is_special,
    transvection,
)
from .hyperplanes import Hyperplane, Indicator, complete_basis, indicator_of, mod2_rows

MAX_N = 4
LARGE_N = 5
_CHUNK = 1 << 18


class NonSpecialError(ValueError):
    pass


class NotInTableError(KeyError):
    pass


@dataclass(frozen=True)
class GF2Matrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != self.n or any(r < 0 or r >> self.n for r in rows):
            raise ValueError(f"need {self.n} rows of {self.n} bits")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, tuple(1 << r for r in range(n)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "GF2Matrix":
        return cls(len(entries), tuple(_bits.pack([x % 2 for x in row]) for row in entries))

    @classmethod
    def transvection(cls, n: int, i: int, j: int) -> "GF2Matrix":
        """I + e_ij, 1-based."""
        rows = list(cls.identity(n).rows)
        rows[i - 1] ^= 1 << (j - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_code(cls, n: int, code: int) -> "GF2Matrix":
        mask = (1 << n) - 1
        return cls(n, tuple((int(code) >> (r * n)) & mask for r in range(n)))

    @property
    def code(self) -> int:
        return sum(row << (r * self.n) for r, row in enumerate(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [list(_bits.unpack(r, self.n)) for r in self.rows]

    def render(self) -> list[str]:
        return ["".join(map(str, _bits.unpack(r, self.n))) for r in self.rows]

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix(self.n, tuple(
            _bits.pack([(self.rows[r] >> c) & 1 for r in range(self.n)]) for c in range(self.n)))

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        return mat_mul(self, other)

    def __str__(self):
        return "\n".join(self.render())


def mat_mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch {a.n} vs {b.n}")
    return GF2Matrix(a.n, _bits.mat_mul_rows(a.rows, b.rows))


def det_gf2(a: GF2Matrix) -> int:
    return int(_bits.rank(a.rows) == a.n)


def mat_inv(a: GF2Matrix) -> GF2Matrix:
    inv = _bits.invert_rows(a.rows)
    if inv is None:
        raise ZeroDivisionError("singular matrix over GF(2)")
    out = GF2Matrix(a.n, inv)
    if mat_mul(a, out) != GF2Matrix.identity(a.n):
        raise ArithmeticError("GF(2) inverse failed verification")
    return out


def sl_order(n: int) -> int:
    out = 1
    for k in range(n):
        out *= 2**n - 2**k
    return out


# --- vectorized kernels on arrays of codes ---------------------------------

def _row(codes: np.ndarray, r: int, n: int) -> np.ndarray:
    return (codes >> np.uint64(r * n)) & np.uint64((1 << n) - 1)


def _mul_right(codes: np.ndarray, b: GF2Matrix) -> np.ndarray:
    """X @ b for every code X."""
    n = b.n
    out = np.zeros_like(codes)
    for r in range(n):
        for c in range(n):
            bit = (codes >> np.uint64(r * n + c)) & np.uint64(1)
            out ^= bit * np.uint64(b.rows[c] << (r * n))
    return out


def _mul_left(a: GF2Matrix, codes: np.ndarray) -> np.ndarray:
    """a @ X for every code X."""
    n = a.n
    out = np.zeros_like(codes)
    rows = [_row(codes, c, n) for c in range(n)]
    for r in range(n):
        acc = np.zeros_like(codes)
        for c in range(n):
            if (a.rows[r] >> c) & 1:
                acc ^= rows[c]
        out |= acc << np.uint64(r * n)
    return out


def _mul_pairs(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """Elementwise X_k @ Y_k."""
    out = np.zeros_like(x)
    yrows = [_row(y, c, n) for c in range(n)]
    for r in range(n):
        acc = np.zeros_like(x)
        for c in range(n):
            acc ^= ((x >> np.uint64(r * n + c)) & np.uint64(1)) * yrows[c]
        out |= acc << np.uint64(r * n)
    return out


def _inv_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Gauss-Jordan inverse of every (invertible) code."""
    size = len(codes)
    a = np.stack([_row(codes, r, n) for r in range(n)], axis=1)
    inv = np.tile(np.array([1 << r for r in range(n)], dtype=np.uint64), (size, 1))
    idx = np.arange(size)
    one = np.uint64(1)
    for c in range(n):
        cand = np.stack([(a[:, r] >> np.uint64(c)) & one for r in range(c, n)], axis=1)
        if not cand.any(axis=1).all():
            raise ZeroDivisionError("singular matrix in table")
        piv = c + np.argmax(cand, axis=1)
        for arr in (a, inv):
            tmp = arr[idx, piv].copy()
            arr[idx, piv] = arr[:, c]
            arr[:, c] = tmp
        for r in range(n):
            if r == c:
                continue
            m = (a[:, r] >> np.uint64(c)) & one
            a[:, r] ^= m * a[:, c]
            inv[:, r] ^= m * inv[:, c]
    out = np.zeros(size, dtype=np.uint64)
    for r in range(n):
        out |= inv[:, r] << np.uint64(r * n)
    return out


def _bfs(n: int, start: np.ndarray, gens: Sequence[GF2Matrix], seen: Optional[np.ndarray] = None) -> np.ndarray:
    """Codes reachable from ``start`` by right multiplication, in FIFO discovery order."""
    if seen is None:
        seen = np.zeros(1 << (n * n), dtype=bool)
    start = np.asarray(start, dtype=np.uint64)
    seen[start] = True
    levels = [start]
    frontier = start
    while len(frontier) and gens:
        found = []
        # chunking keeps peak memory bounded; sequential chunks preserve FIFO order
        for lo in range(0, len(frontier), _CHUNK):
            part = frontier[lo:lo + _CHUNK]
            cand = np.stack([_mul_right(part, g) for g in gens], axis=1).reshape(-1)
            _, first = np.unique(cand, return_index=True)
            cand = cand[np.sort(first)]
            cand = cand[~seen[cand]]
            seen[cand] = True
            found.append(cand)
        frontier = np.concatenate(found)
        levels.append(frontier)
    return np.concatenate(levels)


class GroupTable:
    """All of SL(n,2), indexed by BFS discovery order from the transvections."""

    def __init__(self, n: int, codes: np.ndarray):
        self.n = n
        self.codes = codes
        self._order = np.argsort(codes, kind="stable")
        self._sorted = codes[self._order]

    @property
    def size(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return self.size

    @cached_property
    def generators(self) -> list[GF2Matrix]:
        return [GF2Matrix.transvection(self.n, i, j)
                for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j]

    @cached_property
    def inverse_codes(self) -> np.ndarray:
        return _inv_codes(self.codes, self.n)

    def element(self, idx: int) -> GF2Matrix:
        return GF2Matrix.from_code(self.n, int(self.codes[idx]))

    def indices(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.uint64)
        pos = np.searchsorted(self._sorted, codes)
        pos = np.minimum(pos, self.size - 1)
        if not np.array_equal(self._sorted[pos], codes):
            raise NotInTableError("element not in table")
        return self._order[pos]

    def index(self, m: GF2Matrix) -> int:
        if m.n != self.n:
            raise NotInTableError(f"matrix of dimension {m.n} in table of dimension {self.n}")
        return int(self.indices(np.array([m.code], dtype=np.uint64))[0])

    def contains(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.uint64)
        pos = np.minimum(np.searchsorted(self._sorted, codes), self.size - 1)
        return self._sorted[pos] == codes

    def mul(self, a: int, b: int) -> int:
        return self.index(mat_mul(self.element(a), self.element(b)))

    @property
    def identity_index(self) -> int:
        return 0


def enumerate_sl(n: int, allow_large: bool = False) -> GroupTable:
    """BFS closure of {I + e_ij} from the identity; n = 5 needs ``allow_large``."""
    if not (2 <= n <= MAX_N or (n == LARGE_N and allow_large)):
        raise ValueError(f"enumerate_sl supports 2 <= n <= {MAX_N} (n = {LARGE_N} with allow_large)")
    gens = [GF2Matrix.transvection(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    codes = _bfs(n, np.array([GF2Matrix.identity(n).code], dtype=np.uint64), gens)
    if len(codes) != sl_order(n):
        raise ArithmeticError(f"enumerated {len(codes)} elements, expected {sl_order(n)}")
    return GroupTable(n, codes)


_TABLES: dict[int, GroupTable] = {}


def sl_table(n: int) -> GroupTable:
    """Cached ``enumerate_sl`` for the supported small dimensions."""
    if n not in _TABLES:
        _TABLES[n] = enumerate_sl(n)
    return _TABLES[n]


def pi(phi: Automorphism) -> GF2Matrix:
    """Mod-2 abelianization matrix of a special automorphism."""
    if not is_special(phi):
        raise NonSpecialError("pi is defined on special automorphisms only")
    return GF2Matrix(phi.rank, tuple(mod2_rows(phi)))


# --- subgroups ---------------------------------------------------------------

class Subgroup:
    def __init__(self, parent: GroupTable, members: Iterable[int], generators: Iterable[int] = ()):
        self.parent = parent
        self.members = tuple(sorted(int(m) for m in members))
        self.generators = tuple(int(g) for g in generators)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __contains__(self, idx: int) -> bool:
        return idx in self._member_set

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    @cached_property
    def codes(self) -> np.ndarray:
        return self.parent.codes[list(self.members)]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.sort(self.codes).astype("<u8").tobytes())
        return h.hexdigest()[:16]

    def report(self) -> dict:
        return {"order": self.order, "generators": list(self.generators), "hash": self.content_hash()}

    def __repr__(self):
        return f"Subgroup(order={self.order}, hash={self.content_hash()})"


def _as_matrix(table: GroupTable, g) -> GF2Matrix:
    if isinstance(g, GF2Matrix):
        table.index(g)
        return g
    g = int(g)
    if not 0 <= g < table.size:
        raise NotInTableError(f"index {g} outside table of size {table.size}")
    return table.element(g)


def subgroup_closure(table: GroupTable, gens: Sequence) -> Subgroup:
    mats = [_as_matrix(table, g) for g in gens]
    codes = _bfs(table.n, np.array([GF2Matrix.identity(table.n).code], dtype=np.uint64), mats)
    return Subgroup(table, table.indices(codes), [table.index(m) for m in mats])


def subgroup_from_members(table: GroupTable, members: Iterable[int]) -> Subgroup:
    """Wrap a known subgroup, picking a small generating set greedily."""
    members = sorted(int(m) for m in members)
    gens: list[int] = []
    current = {table.identity_index}
    for m in members:
        if m not in current:
            gens.append(m)
            current = set(subgroup_closure(table, gens).members)
    if current != set(members):
        raise ValueError("member set is not a subgroup")
    return Subgroup(table, members, gens)


def conjugate_subgroup(g, h: Subgroup) -> Subgroup:
    """g H g^-1."""
    table = h.parent
    gm = _as_matrix(table, g)
    ginv = mat_inv(gm)
    conj = _mul_left(gm, _mul_right(h.codes, ginv))
    gens = _mul_left(gm, _mul_right(table.codes[list(h.generators)], ginv)) if h.generators else []
    return Subgroup(table, table.indices(conj), table.indices(gens) if len(gens) else ())


def conjugate_subgroup_by_matrix(h: Subgroup, m: GF2Matrix) -> Subgroup:
    """m^-1 H m (the basis-change direction used for automorphism conjugates)."""
    return conjugate_subgroup(mat_inv(m), h)


def orbit_of_subgroup(h: Subgroup) -> list[Subgroup]:
    """Conjugacy class of H, by BFS over conjugation by the table generators."""
    seen = {h.members: h}
    queue = [h]
    while queue:
        cur = queue.pop(0)
        for g in cur.parent.generators:
            nxt = conjugate_subgroup(g, cur)
            if nxt.members not in seen:
                seen[nxt.members] = nxt
                queue.append(nxt)
    return list(seen.values())


def normalizer(h: Subgroup) -> Subgroup:
    table = h.parent
    n = table.n
    mask = np.ones(table.size, dtype=bool)
    hcodes = np.sort(h.codes)
    for gi in h.generators:
        conj = _mul_pairs(_mul_right(table.codes, table.element(gi)), table.inverse_codes, n)
        pos = np.minimum(np.searchsorted(hcodes, conj), len(hcodes) - 1)
        mask &= hcodes[pos] == conj
    return subgroup_from_members(table, np.nonzero(mask)[0])


def orbit_stabilizer(h: Subgroup) -> tuple[list[Subgroup], Subgroup]:
    orbit = orbit_of_subgroup(h)
    norm = normalizer(h)
    if len(orbit) * norm.order != h.parent.size:
        raise ArithmeticError(f"|orbit| * |normalizer| = {len(orbit)} * {norm.order} != {h.parent.size}")
    return orbit, norm


def hyperplane_stabilizer(plane: Hyperplane, table: GroupTable) -> Subgroup:
    """Setwise stabilizer: g with P g = P, i.e. g fixes the normal column vector."""
    if plane.n != table.n:
        raise ValueError(f"hyperplane dimension {plane.n} vs table dimension {table.n}")
    f = np.uint64(indicator_of(plane).normal())
    n = table.n
    fixed = np.ones(table.size, dtype=bool)
    for r in range(n):
        bit = np.bitwise_count(_row(table.codes, r, n) & f) & np.uint8(1)
        fixed &= bit == ((int(f) >> r) & 1)
    return subgroup_from_members(table, np.nonzero(fixed)[0])


def c_generators(rank: int) -> list[Automorphism]:
    """Generators of the standard C = AB in SAut(F_{n+1}), n = rank - 1.

    A: E_{x_i^{+-1}, x_j} for i != j <= n.  B: phi_{x_j,1} (x_{n+1} -> x_j x_{n+1})
    and phi_{1,x_j} (x_{n+1} -> x_{n+1} x_j^-1) for j <= n.
    """
    n = rank - 1
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                gens.append(transvection("right", i, j, rank))
                gens.append(transvection("left", i, j, rank))
    for j in range(1, n + 1):
        gens.append(elementary(ElementaryAuto(LEFT, rank, j, -1), rank))
        gens.append(elementary(ElementaryAuto(RIGHT, rank, j, -1), rank))
    return gens


def c_subgroup_image(ind: Indicator, table: GroupTable, append: Optional[int] = None) -> Subgroup:
    """pi(C_I), computed on automorphisms and cross-checked by matrix conjugation."""
    if ind.n != table.n:
        raise ValueError(f"indicator length {ind.n} vs table dimension {table.n}")
    _, beta = complete_basis(ind, append=append)
    if not is_special(beta):
        # inverting the appended element keeps A and swaps the two factors of B
        beta = compose(elementary(ElementaryAuto(INVERSION, table.n), table.n), beta)
    std = c_generators(table.n)
    via_autos = subgroup_closure(table, [pi(conjugate(g, beta)) for g in std])
    c_std = subgroup_closure(table, [pi(g) for g in std])
    via_matrix = conjugate_subgroup_by_matrix(c_std, pi(beta))
    if via_autos != via_matrix:
        raise ArithmeticError(f"C_I image mismatch for I={ind}: automorphism and matrix routes disagree")
    return via_autos


def b_automorphisms(n: int) -> list[tuple[tuple[int, ...], Automorphism]]:
    """R^p = R_1^p1 ... R_n^pn with R_j = E_{x_{n+1}, x_j}, over all binary p."""
    rank = n + 1
    r = [transvection("right", rank, j, rank) for j in range(1, n + 1)]
    out = []
    for p in itertools.product((0, 1), repeat=n):
        out.append((p, compose_all(rank, [rj for rj, pj in zip(r, p) if pj])))
    return out


def b_images(n: int, table: GroupTable) -> list[GF2Matrix]:
    if table.n != n + 1:
        raise ValueError(f"b_images({n}) needs a table of dimension {n + 1}, got {table.n}")
    mats = [pi(a) for _, a in b_automorphisms(n)]
    for m in mats:
        table.index(m)
    return mats


def random_a_element(n: int, rng: random.Random, length: int = 8) -> Automorphism:
    """Random product of E_{x_i^{+-1},x_j}^{+-1}, i,j <= n, inside SAut(F_{n+1})."""
    rank = n + 1
    moves = []
    for _ in range(length):
        i, j = rng.sample(range(1, n + 1), 2)
        moves.append(elementary(ElementaryAuto(rng.choice((RIGHT, LEFT)), i, j, rng.choice((1, -1))), rank))
    return compose_all(rank, moves)


def transpose_inverse(m: GF2Matrix) -> GF2Matrix:
    return mat_inv(m.transpose())

"""Finite groups as multiplication tables, and the groups of order at most 8."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np


class GroupLawError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Elements are ``0..order-1``; element 0 need not be the identity."""

    name: str
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = len(t)
        if t.shape != (n, n) or n == 0:
            raise GroupLawError(f"{self.name}: table must be square and non-empty")
        if t.min() < 0 or t.max() >= n:
            raise GroupLawError(f"{self.name}: table entries out of range")
        ids = [e for e in range(n) if (t[e] == np.arange(n)).all() and (t[:, e] == np.arange(n)).all()]
        if len(ids) != 1:
            raise GroupLawError(f"{self.name}: no unique identity")
        e = ids[0]
        inv = []
        for a in range(n):
            hits = np.nonzero(t[a] == e)[0]
            if len(hits) != 1 or t[hits[0], a] != e:
                raise GroupLawError(f"{self.name}: element {a} has no two-sided inverse")
            inv.append(int(hits[0]))
        # (ab)c == a(bc) over the full table: t[t][a,b,c] = (ab)c
        if not np.array_equal(t[t], _assoc_rhs(t)):
            raise GroupLawError(f"{self.name}: multiplication is not associative")
        object.__setattr__(self, "table", tuple(tuple(int(x) for x in row) for row in t))
        object.__setattr__(self, "_identity", e)
        object.__setattr__(self, "_inverse", tuple(inv))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def inverse(self) -> tuple[int, ...]:
        return self._inverse

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def closure(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_cyclic_subgroup(self, members: frozenset[int]) -> bool:
        return any(self.element_order(a) == len(members) for a in members)

    def is_abelian(self) -> bool:
        t = np.asarray(self.table)
        return bool((t == t.T).all())

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if sorted(perm) != list(range(self.order)):
            return False
        return all(perm[self.mul(a, b)] == self.mul(perm[a], perm[b])
                   for a in range(self.order) for b in range(self.order))

    def inner_automorphisms(self) -> list[tuple[int, ...]]:
        """x -> g x g^-1 for every g, deduplicated, as permutations."""
        out = {tuple(self.mul(self.mul(g, x), self.inverse[g]) for x in range(self.order))
               for g in range(self.order)}
        return sorted(out)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def _assoc_rhs(t: np.ndarray) -> np.ndarray:
    # result[a, b, c] = a * (b * c)
    n = len(t)
    return t[np.arange(n)[:, None, None], t[None, :, :]]


def from_operation(name: str, gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> FiniteGroup:
    """Table of the group generated by ``gens``, elements in BFS order from the identity."""
    elems = [identity]
    pos = {identity: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = mul(elems[i], g)
            if y not in pos:
                pos[y] = len(elems)
                elems.append(y)
        i += 1
    table = [[pos[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(name, tuple(map(tuple, table)), tuple(map(str, elems)))


def cyclic(n: int) -> FiniteGroup:
    return from_operation(f"Z{n}", [1 % n], lambda a, b: (a + b) % n, 0)


def abelian_product(name: str, moduli: Sequence[int]) -> FiniteGroup:
    k = len(moduli)
    gens = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    return from_operation(name, gens, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, moduli)),
                          (0,) * k)


def _perm_mul(p, q):
    # apply p first, then q
    return tuple(q[p[i]] for i in range(len(p)))


def symmetric3() -> FiniteGroup:
    return from_operation("S3", [(1, 0, 2), (1, 2, 0)], _perm_mul, (0, 1, 2))


def dihedral4() -> FiniteGroup:
    return from_operation("D4", [(1, 2, 3, 0), (0, 3, 2, 1)], _perm_mul, (0, 1, 2, 3))


_QUAT = {  # unit products i*j = k etc., as (sign, unit)
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion8() -> FiniteGroup:
    def mul(a, b):
        s, u = _QUAT[(a[1], b[1])]
        return (a[0] * b[0] * s, u)
    return from_operation("Q8", [(1, "i"), (1, "j")], mul, (1, "1"))


def small_groups_catalog(max_order: int) -> list[FiniteGroup]:
    """Every group of order <= max_order up to isomorphism (max_order <= 8)."""
    if not 1 <= max_order <= 8:
        raise ValueError(f"catalog covers orders 1..8, got max_order={max_order}")
    builders = [
        (1, lambda: cyclic(1)), (2, lambda: cyclic(2)), (3, lambda: cyclic(3)),
        (4, lambda: cyclic(4)), (4, lambda: abelian_product("V4", (2, 2))),
        (5, lambda: cyclic(5)), (6, lambda: cyclic(6)), (6, symmetric3),
        (7, lambda: cyclic(7)), (8, lambda: cyclic(8)),
        (8, lambda: abelian_product("Z2xZ4", (2, 4))), (8, lambda: abelian_product("Z2^3", (2, 2, 2))),
        (8, dihedral4), (8, quaternion8),
    ]
    return [b() for order, b in builders if order <= max_order]


def group_by_name(name: str) -> FiniteGroup:
    for g in small_groups_catalog(8):
        if g.name == name:
            return g
    raise KeyError(f"no catalog group named {name!r}")


def isomorphism_signature(g: FiniteGroup) -> tuple:
    """Order statistics plus commutativity; separates all groups of order <= 8."""
    orders = sorted(g.element_order(a) for a in range(g.order))
    return (g.order, g.is_abelian(), tuple(orders))


"""Bit-vector helpers shared by the GF(2) modules.

A vector of length n is packed into an int: bit ``c`` holds coordinate ``c``
(0-based), so ``epsilon_1`` is ``1`` and ``epsilon_n`` is ``1 << (n-1)``.
"""

from typing import Iterable, Sequence


def pack(bits: Sequence[int]) -> int:
    v = 0
    for c, b in enumerate(bits):
        if b & 1:
            v |= 1 << c
    return v


def unpack(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> c) & 1 for c in range(n))


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced basis keyed by leading (highest) bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return basis


def rank(vectors: Iterable[int]) -> int:
    return len(echelon(vectors))


def in_span(v: int, basis: dict[int, int]) -> bool:
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


def mat_mul_rows(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Product of square matrices given as packed rows (row-vector action)."""
    out = []
    for row in a:
        acc, c = 0, 0
        while row:
            if row & 1:
                acc ^= b[c]
            row >>= 1
            c += 1
        out.append(acc)
    return tuple(out)


def vec_mat(v: int, m: Sequence[int]) -> int:
    return mat_mul_rows((v,), m)[0]


def invert_rows(rows: Sequence[int]) -> tuple[int, ...] | None:
    """Gauss-Jordan inverse over GF(2); ``None`` if singular."""
    n = len(rows)
    a = list(rows)
    inv = [1 << r for r in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if (a[r] >> c) & 1), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        for r in range(n):
            if r != c and (a[r] >> c) & 1:
                a[r] ^= a[c]
                inv[r] ^= inv[c]
    return tuple(inv)

"""Reference computations kept deliberately naive."""

import itertools
from functools import reduce
from math import gcd


def laplace_det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** c * m[0][c] * laplace_det([row[:c] + row[c + 1:] for row in m[1:]])
               for c in range(len(m)))


def minor_gcd_invariants(m, ncols):
    """Invariant factors from d_k = gcd of k x k minors: factor_k = d_k / d_{k-1}."""
    rows = len(m)
    d_prev, factors, rank = 1, [], 0
    for k in range(1, min(rows, ncols) + 1):
        minors = [laplace_det([[m[r][c] for c in cs] for r in rs])
                  for rs in itertools.combinations(range(rows), k)
                  for cs in itertools.combinations(range(ncols), k)]
        d_k = reduce(gcd, (abs(x) for x in minors), 0)
        if d_k == 0:
            break
        factors.append(d_k // d_prev)
        d_prev, rank = d_k, k
    return [f for f in factors if f != 1] + [0] * (ncols - rank)

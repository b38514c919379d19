"""Finite presentations: parsing, abelianization, and homomorphisms into small groups.

Grammar: ``<a,b ; a^4, a^2*b^-3>``.  Relators are ``*``-separated terms
``name`` or ``name^k`` (``k`` any integer).  A relator is stored expanded into
signed generator numbers (1-based) and is *not* freely reduced, so rendering
and re-parsing gives back exactly the same presentation.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from . import automorphisms as auto
from .catalog import FiniteGroup
from .gf2group import GF2Matrix, mat_inv, mat_mul, pi

DEFAULT_HOM_CEILING = 10**8
HOM_CEILING_ENV = "SAUTFN_HOM_CEILING"

SL2Z = "<a,b ; a^4, a^2*b^-3>"


class PresentationSyntaxError(ValueError):
    pass


class WorkBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        k = len(self.generators)
        for rel in self.relators:
            if any(a == 0 or abs(a) > k for a in rel):
                raise ValueError(f"relator {rel} references an undeclared generator")

    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for rel in self.relators:
            row = [0] * len(self.generators)
            for a in rel:
                row[abs(a) - 1] += 1 if a > 0 else -1
            rows.append(row)
        return rows

    def render(self) -> str:
        return render_presentation(self)

    def __str__(self):
        return self.render()


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TERM = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?")


def parse_presentation(text: str) -> Presentation:
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")):
        raise PresentationSyntaxError("presentation must be enclosed in < >")
    body = s[1:-1]
    gens_part, _, rels_part = body.partition(";")
    gens = tuple(g.strip() for g in gens_part.split(",")) if gens_part.strip() else ()
    for g in gens:
        if not _NAME.fullmatch(g):
            raise PresentationSyntaxError(f"bad generator name {g!r}")
    index = {g: i for i, g in enumerate(gens, start=1)}
    relators = []
    if rels_part.strip():
        for chunk in rels_part.split(","):
            chunk = chunk.strip()
            if not chunk:
                raise PresentationSyntaxError("empty relator")
            letters: list[int] = []
            if chunk != "1":
                for term in chunk.split("*"):
                    m = _TERM.fullmatch(term.strip())
                    if m is None:
                        raise PresentationSyntaxError(f"bad term {term.strip()!r} in relator {chunk!r}")
                    name, power = m.group(1), int(m.group(2) or 1)
                    if name not in index:
                        raise PresentationSyntaxError(f"unknown generator {name!r}")
                    sign = 1 if power > 0 else -1
                    letters.extend([sign * index[name]] * abs(power))
            relators.append(tuple(letters))
    try:
        return Presentation(gens, tuple(relators))
    except ValueError as exc:
        raise PresentationSyntaxError(str(exc)) from exc


def _render_relator(rel: Sequence[int], names: Sequence[str]) -> str:
    if not rel:
        return "1"
    terms = []
    for a, run in itertools.groupby(rel):
        k = len(list(run)) * (1 if a > 0 else -1)
        name = names[abs(a) - 1]
        terms.append(name if k == 1 else f"{name}^{k}")
    return "*".join(terms)


def render_presentation(p: Presentation) -> str:
    rels = ", ".join(_render_relator(r, p.generators) for r in p.relators)
    return f"<{','.join(p.generators)} ; {rels}>"


# --- Smith normal form -------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    invariants: list[int]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithForm:
    """D = U M V with U, V unimodular and d_1 | d_2 | ... on the diagonal.

    ``invariants`` describes Z^ncols / rowspace(M): diagonal entries other than
    1, followed by one 0 per free summand.
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    if any(len(r) != cols for r in a):
        raise ValueError("ragged matrix")
    u, v = _eye(rows), _eye(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        for mat in (a, u):
            mat[dst] = [x + k * y for x, y in zip(mat[dst], mat[src])]

    def add_col(src, dst, k):
        for mat in (a, v):
            for row in mat:
                row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            for mat in (a, u):
                mat[t] = [-x for x in mat[t]]
        t += 1

    diag = [a[i][i] for i in range(t)]
    invariants = [d for d in diag if d != 1] + [0] * (cols - t)
    return SmithForm(a, u, v, invariants)


def abelianization_invariants(p: Presentation) -> list[int]:
    return smith_normal_form(p.exponent_matrix(), ncols=len(p.generators)).invariants


# --- homomorphisms -----------------------------------------------------------

def evaluate(rel: Sequence[int], images: Sequence[int], g: FiniteGroup) -> int:
    x = g.identity
    for a in rel:
        y = images[abs(a) - 1]
        x = g.mul(x, y if a > 0 else g.inverse[y])
    return x


@dataclass(frozen=True)
class Hom:
    source: Presentation
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source.generators):
            raise ValueError("one image per generator required")
        for rel in self.source.relators:
            if evaluate(rel, self.images, self.target) != self.target.identity:
                raise ValueError(f"relator {_render_relator(rel, self.source.generators)} not killed")

    def image(self) -> frozenset[int]:
        return self.target.closure(self.images)

    def is_surjective(self) -> bool:
        return len(self.image()) == self.target.order

    def report(self) -> dict:
        return {"images": dict(zip(self.source.generators, self.images))}


def hom_ceiling() -> int:
    return int(os.environ.get(HOM_CEILING_ENV, DEFAULT_HOM_CEILING))


def enumerate_homs(p: Presentation, g: FiniteGroup, ceiling: Optional[int] = None) -> list[Hom]:
    """All homomorphisms P -> G by backtracking over generator images.

    Generators are assigned in declaration order; each relator is checked as
    soon as every generator it mentions has an image.
    """
    k = len(p.generators)
    ceiling = hom_ceiling() if ceiling is None else ceiling
    work = k * g.order**k
    if work > ceiling:
        raise WorkBoundExceeded(f"estimated work {work} exceeds ceiling {ceiling}")
    due: list[list[tuple[int, ...]]] = [[] for _ in range(k + 1)]
    for rel in p.relators:
        due[max((abs(a) for a in rel), default=0)].append(rel)
    if any(evaluate(rel, (), g) != g.identity for rel in due[0]):
        return []
    out: list[Hom] = []
    images: list[int] = []

    def extend(depth: int):
        if depth == k:
            out.append(Hom(p, g, tuple(images)))
            return
        for x in range(g.order):
            images.append(x)
            if all(evaluate(rel, images, g) == g.identity for rel in due[depth + 1]):
                extend(depth + 1)
            images.pop()

    extend(0)
    return out


def brute_force_homs(p: Presentation, g: FiniteGroup) -> list[tuple[int, ...]]:
    """Unpruned reference: every assignment, every relator checked at the end."""
    return [imgs for imgs in itertools.product(range(g.order), repeat=len(p.generators))
            if all(evaluate(rel, imgs, g) == g.identity for rel in p.relators)]


def _automorphism_closure(perms: Sequence[tuple[int, ...]], order: int) -> list[tuple[int, ...]]:
    ident = tuple(range(order))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for b in perms:
                c = tuple(b[a[x]] for x in range(order))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def classify_surjections(homs: Sequence[Hom], g: FiniteGroup,
                         outer_reps: Sequence[Sequence[int]] = ()) -> list[list[Hom]]:
    """Surjective homs grouped by post-composition with Inn(G) and ``outer_reps``."""
    for rep in outer_reps:
        if not g.is_automorphism(rep):
            raise ValueError(f"outer representative {tuple(rep)} is not an automorphism of {g.name}")
    surj = [h for h in homs if h.is_surjective()]
    if not surj:
        return []
    sources = {h.source for h in surj}
    if len(sources) != 1 or any(h.target is not g for h in surj):
        raise ValueError("homs must share source and target")
    autos = _automorphism_closure(g.inner_automorphisms() + [tuple(r) for r in outer_reps], g.order)
    classes: dict[tuple[int, ...], list[Hom]] = {}
    for h in surj:
        key = min(tuple(alpha[x] for x in h.images) for alpha in autos)
        classes.setdefault(key, []).append(h)
    return [sorted(classes[key], key=lambda h: h.images) for key in sorted(classes)]


def sl2_as_finite_group(table) -> tuple[FiniteGroup, list[int]]:
    """SL(n,2) from an enumerated table (n <= 3) and its transpose-inverse automorphism."""
    if table.n > 3:
        raise ValueError("multiplication table only built for n <= 3")
    elems = [table.element(i) for i in range(table.size)]
    mul = [[table.index(mat_mul(a, b)) for b in elems] for a in elems]
    ti = [table.index(mat_inv(m.transpose())) for m in elems]
    return FiniteGroup(f"SL({table.n},2)", tuple(map(tuple, mul))), ti


# --- relation families as identities ----------------------------------------

def _violation(kind: str, idx, lhs, rhs) -> dict:
    return {"family": kind, "indices": list(idx), "lhs": str(lhs), "rhs": str(rhs)}


def _mat_comm(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    return mat_mul(mat_mul(mat_mul(a, b), mat_inv(a)), mat_inv(b))


def gersten_relation_report(n: int) -> dict:
    """[E_ij, E_kl] = 1 and [E_ij, E_jk] = E_ik over all index tuples, on automorphisms and under pi."""
    if not 3 <= n <= 4:
        raise ValueError(f"gersten_relation_report supports n in 3..4, got {n}")
    e = {(i, j): auto.transvection("right", i, j, n)
         for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
    mats = {key: pi(a) for key, a in e.items()}
    ident = auto.Automorphism.identity(n)
    mident = GF2Matrix.identity(n)
    report = {"n": n}
    checks = {"family_a": [0, []], "family_b": [0, []], "matrix_a": [0, []], "matrix_b": [0, []]}
    for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
        c = auto.commutator(e[i, j], e[k, l])
        checks["family_a"][0] += 1
        if c != ident:
            checks["family_a"][1].append(_violation("A", (i, j, k, l), c, ident))
        mc = _mat_comm(mats[i, j], mats[k, l])
        checks["matrix_a"][0] += 1
        if mc != mident:
            checks["matrix_a"][1].append(_violation("A", (i, j, k, l), mc.render(), mident.render()))
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        c = auto.commutator(e[i, j], e[j, k])
        checks["family_b"][0] += 1
        if c != e[i, k]:
            checks["family_b"][1].append(_violation("B", (i, j, k), c, e[i, k]))
        mc = _mat_comm(mats[i, j], mats[j, k])
        checks["matrix_b"][0] += 1
        if mc != mats[i, k]:
            checks["matrix_b"][1].append(_violation("B", (i, j, k), mc.render(), mats[i, k].render()))
    for name, (count, viol) in checks.items():
        report[name] = {"checked": count, "violations": viol}
    report["ok"] = all(not v for _, v in checks.values())
    return report

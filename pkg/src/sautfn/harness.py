"""Named verification checks and their JSON reports.

Each check returns ``(ok, counts, witness)``; ``run_check`` wraps it into a
``CheckReport``.  Reports are deterministic for fixed parameters; wall time
is recorded but only serialized when timing output is requested.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import automorphisms as auto
from . import gf2group as gg
from .catalog import small_groups_catalog
from .freewords import Word, parse_word
from .hyperplanes import (
    Indicator,
    all_indicators,
    complete_basis,
    hyperplane_basis,
    indicator_of,
    lemma_a_change,
    s_basis,
    verify_lemma_a,
    word_mod2,
)
from . import _bits
from .presentations import (
    SL2Z,
    abelianization_invariants,
    classify_surjections,
    enumerate_homs,
    gersten_relation_report,
    parse_presentation,
    sl2_as_finite_group,
)

PASS, FAIL, REFUSED = "pass", "fail", "refused"

EXAMPLE_INDICATORS = ("11000", "00011")
EXAMPLE_BASIS = ("x1", "x2*x3^-1", "x1*x2^-1", "x1*x3^-1*x4", "x4*x5^-1")


class CheckRefused(ValueError):
    pass


@dataclass
class CheckReport:
    check: str
    params: dict
    status: str
    counts: dict = field(default_factory=dict)
    witness: Any = None
    elapsed_ms: Optional[float] = None
    paper_ref: str = ""

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError(f"failing report for {self.check} must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timing: bool = False) -> dict:
        out = {"check": self.check, "params": self.params, "status": self.status, "counts": self.counts}
        if self.witness is not None:
            out["witness"] = self.witness
        out["elapsed_ms"] = round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None
        out["paper_ref"] = self.paper_ref
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing))


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[..., tuple]
    paper_ref: str
    param: Optional[str]
    supported: tuple
    quick: tuple
    full: tuple


def _need(params: dict, key: str, supported) -> int:
    if key not in params:
        raise CheckRefused(f"missing parameter {key}")
    value = params[key]
    if value not in supported:
        raise CheckRefused(f"{key}={value} outside supported range {list(supported)}")
    return value


# --- individual checks -------------------------------------------------------

def check_sl_order(n: int, allow_large: bool = False):
    table = gg.enumerate_sl(n, allow_large=allow_large)
    expected = gg.sl_order(n)
    counts = {"order": table.size, "expected": expected}
    ok = table.size == expected
    return ok, counts, None if ok else {"order": table.size, "expected": expected}


def check_counting_identity(n: int):
    sl_n, sl_next = gg.sl_table(n).size, gg.sl_table(n + 1).size
    hyperplanes = 2 ** (n + 1) - 1
    lhs = hyperplanes * 2**n * sl_n
    counts = {"hyperplanes": hyperplanes, "b_order": 2**n, "sl_n": sl_n, "sl_n_plus_1": sl_next, "product": lhs}
    ok = lhs == sl_next
    return ok, counts, None if ok else {"product": lhs, "sl_n_plus_1": sl_next}


def check_image_b_size(n: int):
    table = gg.sl_table(n + 1)
    mats = gg.b_images(n, table)
    distinct = len({m.code for m in mats})
    closure = gg.subgroup_closure(table, mats)
    ident = gg.GF2Matrix.identity(n + 1)
    exponent_two = all(gg.mat_mul(m, m) == ident for m in mats)
    abelian = all(gg.mat_mul(a, b) == gg.mat_mul(b, a) for a, b in itertools.combinations(mats, 2))
    counts = {"elements": len(mats), "distinct": distinct, "closure_order": closure.order,
              "exponent_two": exponent_two, "abelian": abelian}
    ok = distinct == 2**n and closure.order == 2**n and exponent_two and abelian
    witness = None
    if not ok:
        seen: dict[int, tuple] = {}
        for p, a in gg.b_automorphisms(n):
            code = gg.pi(a).code
            if code in seen:
                witness = {"collision": [list(seen[code]), list(p)]}
                break
            seen[code] = p
        witness = witness or counts
    return ok, counts, witness


def check_c_subgroups(n_plus_1: int):
    table = gg.sl_table(n_plus_1)
    inds = all_indicators(n_plus_1)
    subs = {str(i): gg.c_subgroup_image(i, table) for i in inds}
    distinct = len({c.members for c in subs.values()})
    std = subs["1" * (n_plus_1 - 1) + "0"]
    orbit, norm = gg.orbit_stabilizer(std)
    orbit_keys = {h.members for h in orbit}
    conjugate = all(c.members in orbit_keys for c in subs.values())
    witness = None
    stab_ok = self_norm_ok = completion_ok = True
    for i in inds:
        c = subs[str(i)]
        if c != gg.hyperplane_stabilizer(hyperplane_basis(i), table):
            stab_ok = False
            witness = witness or {"indicator": str(i), "failure": "not the hyperplane stabilizer"}
        o, nm = gg.orbit_stabilizer(c)
        if nm != c:
            self_norm_ok = False
            witness = witness or {"indicator": str(i), "failure": "normalizer larger than C_I",
                                  "normalizer_order": nm.order}
        for j in i.zeros()[1:]:
            if gg.c_subgroup_image(i, table, append=j) != c:
                completion_ok = False
                witness = witness or {"indicator": str(i), "failure": f"depends on appended x{j}"}
    counts = {
        "subgroups": len(subs), "distinct": distinct, "orbit_size": len(orbit),
        "c_order": std.order, "normalizer_order": norm.order, "group_order": table.size,
        "pairwise_conjugate": conjugate, "equal_stabilizers": stab_ok,
        "self_normalizing": self_norm_ok, "completion_independent": completion_ok,
        "hashes": {k: v.content_hash() for k, v in subs.items()},
    }
    ok = (distinct == len(inds) and conjugate and stab_ok and self_norm_ok and completion_ok
          and len(orbit) == len(inds) and len(orbit) * norm.order == table.size)
    if not ok and witness is None:
        witness = {"distinct": distinct, "orbit_size": len(orbit), "pairwise_conjugate": conjugate}
    return ok, counts, witness


def check_lemma_a(n: int):
    inds = all_indicators(n)
    pairs = 0
    witness = None
    for a, b in itertools.permutations(inds, 2):
        pairs += 1
        phi = lemma_a_change(a, b)
        if not verify_lemma_a(a, b, phi):
            witness = {"pair": [str(a), str(b)], "basis": phi.to_json()["images"]}
            break
    counts = {"pairs": pairs}
    if n == 5 and witness is None:
        example = auto.certify([parse_word(s, 5) for s in EXAMPLE_BASIS])
        ex_ok = verify_lemma_a(Indicator.parse(EXAMPLE_INDICATORS[0]), Indicator.parse(EXAMPLE_INDICATORS[1]), example)
        counts["example_basis"] = ex_ok
        if not ex_ok:
            witness = {"example_basis": list(EXAMPLE_BASIS)}
    return witness is None, counts, witness


def check_hyperplane_bijection(n: int):
    inds = all_indicators(n)
    spans = set()
    for i in inds:
        plane = hyperplane_basis(i)
        if indicator_of(plane) != i:
            return False, {"indicators": len(inds)}, {"indicator": str(i), "roundtrip": str(indicator_of(plane))}
        span = frozenset(v for v in range(2**n) if _bits.in_span(v, _bits.echelon(plane.vectors)))
        spans.add(span)
    counts = {"indicators": len(inds), "distinct_hyperplanes": len(spans)}
    ok = len(spans) == 2**n - 1
    return ok, counts, None if ok else counts


def check_s_basis_projection(n: int):
    inds = all_indicators(n)
    for i in inds:
        plane = hyperplane_basis(i)
        span = _bits.echelon(plane.vectors)
        images = [word_mod2(w) for w in s_basis(i)]
        if _bits.rank(images) != n - 1 or not all(_bits.in_span(v, span) for v in images):
            return False, {"indicators": len(inds)}, {"indicator": str(i)}
        _, beta = complete_basis(i)
        if abs(auto.int_det(auto.abelianization_matrix(beta))) != 1:
            return False, {"indicators": len(inds)}, {"indicator": str(i), "failure": "completion not unimodular"}
    return True, {"indicators": len(inds)}, None


def check_gersten_relations(n: int):
    rep = gersten_relation_report(n)
    counts = {k: rep[k]["checked"] for k in ("family_a", "family_b", "matrix_a", "matrix_b")}
    viol = [v for k in ("family_a", "family_b", "matrix_a", "matrix_b") for v in rep[k]["violations"]]
    return rep["ok"], counts, viol[0] if viol else None


def check_torelli(n: int):
    phi = auto.magnus_generator(n)
    mat = auto.abelianization_matrix(phi)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    ok = mat == ident and gg.pi(phi) == gg.GF2Matrix.identity(n)
    counts = {"image_x1": str(phi.images[0]), "integer_identity": mat == ident}
    return ok, counts, None if ok else {"matrix": mat}


def check_base_case():
    pres = parse_presentation(SL2Z)
    per_group = {}
    witness = None
    s3_classes = None
    for g in small_groups_catalog(6):
        homs = enumerate_homs(pres, g)
        noncyclic = [h for h in homs if not g.is_cyclic_subgroup(h.image())]
        classes = classify_surjections(homs, g)
        per_group[g.name] = {"homs": len(homs), "noncyclic_images": len(noncyclic), "surjection_classes": len(classes)}
        if g.name == "S3":
            s3_classes = len(classes)
        elif noncyclic and witness is None:
            witness = {"group": g.name, "images": list(noncyclic[0].images)}
    sl22, ti = sl2_as_finite_group(gg.sl_table(2))
    sl_classes = len(classify_surjections(enumerate_homs(pres, sl22), sl22, [ti]))
    counts = {"groups": per_group, "sl22_surjection_classes": sl_classes}
    ok = witness is None and s3_classes == 1 and per_group["S3"]["noncyclic_images"] > 0 and sl_classes == 1
    if not ok and witness is None:
        witness = {"s3_classes": s3_classes, "sl22_classes": sl_classes}
    return ok, counts, witness


def check_abelianization():
    inv = abelianization_invariants(parse_presentation(SL2Z))
    ok = inv == [12]
    return ok, {"invariants": inv}, None if ok else {"invariants": inv}


def check_conjugation_stability(n: int, seed: int = 0, samples: int = 16):
    rng = random.Random(seed)
    table = gg.sl_table(n + 1)
    b = gg.subgroup_closure(table, gg.b_images(n, table))
    for s in range(samples):
        psi = gg.random_a_element(n, rng)
        v = Word(n + 1, tuple(rng.choice([k, -k]) for k in rng.choices(range(1, n + 1), k=3)))
        w = Word(n + 1, tuple(rng.choice([k, -k]) for k in rng.choices(range(1, n + 1), k=3)))
        lhs = auto.conjugate(auto.phi_vw(v, w), psi)
        rhs = auto.phi_vw(auto.apply(psi, v), auto.apply(psi, w))
        if lhs != rhs:
            return False, {"samples": s}, {"psi": psi.to_json()["images"], "v": str(v), "w": str(w)}
        if gg.conjugate_subgroup_by_matrix(b, gg.pi(psi)) != b:
            return False, {"samples": s}, {"psi": psi.to_json()["images"], "failure": "matrix level"}
    return True, {"samples": samples, "b_order": b.order}, None


CHECKS: dict[str, Check] = {c.name: c for c in [
    Check("sl-order", check_sl_order, "|SL(n,Z_2)| = prod_k (2^n - 2^k)", "n", (2, 3, 4, 5), (2, 3), (2, 3, 4)),
    Check("counting-identity", check_counting_identity,
          "|Orb(C)| |Stab(C)| = (2^{n+1}-1) 2^n |SL(n,Z_2)| = |SL(n+1,Z_2)|", "n", (2, 3), (2,), (2, 3)),
    Check("image-b-size", check_image_b_size, "image of B has size at least 2^n", "n", (2, 3), (2,), (2, 3)),
    Check("c-subgroups", check_c_subgroups, "the 2^{n+1}-1 subgroups C_I are distinct and all conjugate",
          "n_plus_1", (3, 4), (3,), (3, 4)),
    Check("lemma-a", check_lemma_a, "new basis with indicators (1,0,1,...,1) and (0,1,1,...,1)",
          "n", (2, 3, 4, 5, 6), (3, 4), (3, 4, 5)),
    Check("hyperplane-bijection", check_hyperplane_bijection, "indicator vectors <-> hyperplanes P_I of Z_2^n",
          "n", (1, 2, 3, 4, 5, 6), (1, 2, 3, 4, 5, 6), (1, 2, 3, 4, 5, 6)),
    Check("s-basis-projection", check_s_basis_projection, "S_I projects precisely to P_I",
          "n", (1, 2, 3, 4, 5, 6), (1, 2, 3, 4, 5, 6), (1, 2, 3, 4, 5, 6)),
    Check("gersten-relations", check_gersten_relations,
          "[E_{x_i,x_j},E_{x_k,x_l}]=1 and [E_{x_i,x_j},E_{x_j,x_k}]=E_{x_i,x_k}", "n", (3, 4), (3, 4), (3, 4)),
    Check("torelli", check_torelli, "Torelli group normally generated by E_{x_1,x_2}E_{x_1^{-1},x_2}",
          "n", (2, 3, 4, 5, 6), (2, 3, 4, 5, 6), (2, 3, 4, 5, 6)),
    Check("conjugation-stability", check_conjugation_stability, "psi^{-1} phi_{v,w} psi = phi_{psi(v),psi(w)}",
          "n", (2, 3), (2,), (2, 3)),
    Check("base-case", check_base_case, "SL(2,Z_2) = S_3 is the smallest non-cyclic quotient", None, (), (), ()),
    Check("abelianization", check_abelianization, "abelianization Z_12", None, (), (), ()),
]}


def run_check(name: str, params: Optional[dict] = None) -> CheckReport:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    check = CHECKS[name]
    params = dict(params or {})
    kwargs = {}
    t0 = time.perf_counter()
    try:
        if check.param is not None:
            kwargs[check.param] = _need(params, check.param, check.supported)
        if name == "sl-order":
            kwargs["allow_large"] = bool(params.get("allow_large", False))
            if kwargs["n"] == gg.LARGE_N and not kwargs["allow_large"]:
                raise CheckRefused("n = 5 needs allow_large")
        if name == "conjugation-stability":
            kwargs["seed"] = int(params.setdefault("seed", 0))
        ok, counts, witness = check.fn(**kwargs)
        status = PASS if ok else FAIL
    except CheckRefused as exc:
        status, counts, witness = REFUSED, {}, {"reason": str(exc)}
    elapsed = (time.perf_counter() - t0) * 1000
    return CheckReport(name, params, status, counts, witness, elapsed, check.paper_ref)


def profile_runs(profile: str) -> list[tuple[str, dict]]:
    if profile not in ("quick", "full"):
        raise ValueError(f"profile must be quick or full, got {profile!r}")
    runs = []
    for check in CHECKS.values():
        if check.param is None:
            runs.append((check.name, {}))
            continue
        for v in getattr(check, profile):
            params = {check.param: v}
            if check.name == "conjugation-stability":
                params["seed"] = 0
            runs.append((check.name, params))
    return runs


def run_all(profile: str = "quick") -> list[CheckReport]:
    return [run_check(name, params) for name, params in profile_runs(profile)]


def exit_code(reports: list[CheckReport]) -> int:
    if any(r.status == REFUSED for r in reports):
        return 2
    return 0 if all(r.passed for r in reports) else 1

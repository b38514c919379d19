import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sautfn import presentations as pr
from sautfn.catalog import cyclic, group_by_name, small_groups_catalog, symmetric3
from sautfn.gf2group import sl_table
from sautfn.presentations import (
    SL2Z,
    Hom,
    PresentationSyntaxError,
    WorkBoundExceeded,
    abelianization_invariants,
    brute_force_homs,
    classify_surjections,
    enumerate_homs,
    gersten_relation_report,
    parse_presentation,
    smith_normal_form,
)

from oracles import laplace_det, minor_gcd_invariants

SNF_SEED = 20261019

SMALL_PRESENTATIONS = [
    "<a ; a^2>", "<a ; a^3>", "<a ; a^4>", "<a ; a^6>", "<a ; >",
    "<a,b ; >", "<a,b ; a^2, b^2>", "<a,b ; a*b*a^-1*b^-1>", "<a,b ; a^2, b^3, a*b*a^-1*b^-1>",
    SL2Z, "<a,b ; a^2, b^2, a*b*a*b*a*b>", "<a,b ; a^4, b^2, b*a*b^-1*a>",
    "<a,b ; a^2*b^-2, a*b*a^-1*b>", "<a,b ; a^3, b^3, a*b*a*b>", "<a,b ; a*b^2*a^-1*b^-3>",
]


def test_parse_examples():
    p = parse_presentation("<a ; a^2>")
    assert p.generators == ("a",) and p.relators == ((1, 1),)
    p = parse_presentation(SL2Z)
    assert p.relators == ((1, 1, 1, 1), (1, 1, -2, -2, -2))
    assert parse_presentation("<a ; >").relators == ()


@pytest.mark.parametrize("text", SMALL_PRESENTATIONS)
def test_render_roundtrip(text):
    p = parse_presentation(text)
    assert parse_presentation(p.render()) == p


@pytest.mark.parametrize("bad", ["a ; a^2", "<a ; c>", "<a ; a^x>", "<a,a ; >", "<1a ; >", "<a ; a,,a>"])
def test_parse_errors(bad):
    with pytest.raises(PresentationSyntaxError):
        parse_presentation(bad)


def check_smith(m, ncols=None):
    s = smith_normal_form(m, ncols)
    M, U, V, D = (np.array(x, dtype=object) for x in (m, s.U, s.V, s.D))
    if M.size:
        assert (U.dot(M).dot(V) == D).all()
    assert abs(laplace_det(s.U)) == 1 and abs(laplace_det(s.V)) == 1
    diag = [int(x) for x in s.diagonal]
    for i in range(len(D)):
        for j in range(len(D[0])):
            assert i == j or D[i][j] == 0
    nz = [d for d in diag if d != 0]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))
    return s


def test_snf_examples():
    assert check_smith([[2, 0], [0, 3]]).diagonal == [1, 6]
    s = check_smith([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert s.diagonal == [1, 1, 1] and s.invariants == []
    s = check_smith([[4, 0], [2, -3]])
    assert s.diagonal == [1, 12] and s.invariants == [12]


def test_snf_random_vs_minor_gcd():
    rnd = random.Random(SNF_SEED)
    print(f"SNF oracle seed {SNF_SEED}")
    for _ in range(1000):
        r, c = rnd.randint(1, 4), rnd.randint(1, 4)
        m = [[rnd.randint(-5, 5) for _ in range(c)] for _ in range(r)]
        s = check_smith(m)
        assert s.invariants == minor_gcd_invariants(m, c), m


@given(st.data())
def test_snf_property(data):
    r, c = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    m = data.draw(st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r))
    assert check_smith(m).invariants == minor_gcd_invariants(m, c)


@pytest.mark.parametrize("text, inv", [("<a ; a^2>", [2]), (SL2Z, [12]), ("<a,b ; >", [0, 0]), ("<a ; >", [0])])
def test_abelianization_examples(text, inv):
    assert abelianization_invariants(parse_presentation(text)) == inv


def test_hom_examples():
    assert len(enumerate_homs(parse_presentation("<a ; a^2>"), cyclic(2))) == 2
    # homs factor through Z12, and |Hom(Z12, Z6)| = gcd(12, 6)
    assert len(enumerate_homs(parse_presentation(SL2Z), cyclic(6))) == 6
    s3 = symmetric3()
    homs = enumerate_homs(parse_presentation(SL2Z), s3)
    assert len(homs) == len(brute_force_homs(parse_presentation(SL2Z), s3)) == 12
    assert any(h.is_surjective() for h in homs)


@pytest.mark.parametrize("text", SMALL_PRESENTATIONS)
def test_homs_match_brute_force(text):
    p = parse_presentation(text)
    for g in small_groups_catalog(8):
        homs = enumerate_homs(p, g)
        assert [h.images for h in homs] == brute_force_homs(p, g), (text, g.name)
        for h in homs:
            assert all(pr.evaluate(rel, h.images, g) == g.identity for rel in p.relators)


def test_hom_rejects_non_hom():
    with pytest.raises(ValueError):
        Hom(parse_presentation("<a ; a^2>"), cyclic(3), (1,))


def test_work_bound(monkeypatch):
    p = parse_presentation("<a,b,c ; >")
    g = group_by_name("D4")
    with pytest.raises(WorkBoundExceeded):
        enumerate_homs(p, g, ceiling=100)
    monkeypatch.setenv(pr.HOM_CEILING_ENV, "1000")
    assert pr.hom_ceiling() == 1000
    with pytest.raises(WorkBoundExceeded):
        enumerate_homs(p, g)
    monkeypatch.setenv(pr.HOM_CEILING_ENV, "2000")
    assert len(enumerate_homs(p, g)) == 512


def test_classify_examples():
    p = parse_presentation(SL2Z)
    s3 = symmetric3()
    classes = classify_surjections(enumerate_homs(p, s3), s3)
    assert len(classes) == 1
    assert classify_surjections([], s3) == []
    z6 = cyclic(6)
    classes = classify_surjections(enumerate_homs(p, z6), z6)
    surj = [h for h in enumerate_homs(p, z6) if h.is_surjective()]
    assert sum(len(c) for c in classes) == len(surj)
    assert all(h.is_surjective() for c in classes for h in c)
    with pytest.raises(ValueError):
        classify_surjections([], s3, [(0, 0, 1, 2, 3, 4)])


def test_classify_invariant_under_reordering():
    p = parse_presentation(SL2Z)
    g, ti = pr.sl2_as_finite_group(sl_table(3))
    homs = enumerate_homs(p, g)
    base = classify_surjections(homs, g, [ti])
    rnd = random.Random(1)
    for _ in range(3):
        shuffled = homs[:]
        rnd.shuffle(shuffled)
        assert [[h.images for h in c] for c in classify_surjections(shuffled, g, [ti])] == \
               [[h.images for h in c] for c in base]


def test_sl_as_finite_group():
    g, ti = pr.sl2_as_finite_group(sl_table(2))
    assert g.order == 6 and g.is_automorphism(ti)
    g3, ti3 = pr.sl2_as_finite_group(sl_table(3))
    assert g3.order == 168 and g3.is_automorphism(ti3)
    assert tuple(ti3) not in set(g3.inner_automorphisms())
    with pytest.raises(ValueError):
        pr.sl2_as_finite_group(sl_table(4))


@pytest.mark.parametrize("n, a, b", [(3, 0, 6), (4, 24, 24)])
def test_gersten_report(n, a, b):
    rep = gersten_relation_report(n)
    assert rep["ok"]
    assert rep["family_a"]["checked"] == a and rep["family_b"]["checked"] == b
    assert rep["matrix_a"]["checked"] == a and rep["matrix_b"]["checked"] == b
    with pytest.raises(ValueError):
        gersten_relation_report(5)

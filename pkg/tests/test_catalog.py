import pytest

from sautfn.catalog import (
    FiniteGroup,
    GroupLawError,
    cyclic,
    group_by_name,
    isomorphism_signature,
    quaternion8,
    small_groups_catalog,
)

NAMES = ["Z1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7", "Z8", "Z2xZ4", "Z2^3", "D4", "Q8"]


def test_catalog_contents():
    cat = small_groups_catalog(8)
    assert [g.name for g in cat] == NAMES
    assert [g.name for g in small_groups_catalog(1)] == ["Z1"]
    assert len(small_groups_catalog(6)) == 8
    with pytest.raises(ValueError):
        small_groups_catalog(9)


def test_catalog_pairwise_non_isomorphic():
    sigs = [isomorphism_signature(g) for g in small_groups_catalog(8)]
    assert len(set(sigs)) == len(sigs)


def test_counts_per_order():
    counts = {}
    for g in small_groups_catalog(8):
        counts[g.order] = counts.get(g.order, 0) + 1
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5}


def test_group_laws_checked():
    with pytest.raises(GroupLawError):
        FiniteGroup("bad", ((0, 1), (1, 1)))
    # a Latin square with identity that is not associative
    loop = ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3), (3, 2, 4, 0, 1), (4, 3, 1, 2, 0))
    with pytest.raises(GroupLawError):
        FiniteGroup("loop", loop)


def test_element_orders():
    q8 = quaternion8()
    assert sorted(q8.element_order(a) for a in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
    d4 = group_by_name("D4")
    assert sorted(d4.element_order(a) for a in range(8)) == [1, 2, 2, 2, 2, 2, 4, 4]
    assert not d4.is_abelian() and cyclic(5).is_abelian()


def test_automorphisms_and_closure():
    s3 = group_by_name("S3")
    assert len(s3.inner_automorphisms()) == 6
    assert all(s3.is_automorphism(p) for p in s3.inner_automorphisms())
    assert not s3.is_automorphism((0, 0, 1, 2, 3, 4))
    z4 = cyclic(4)
    assert len(z4.inner_automorphisms()) == 1
    assert z4.closure([2]) == frozenset({0, 2})
    assert z4.is_cyclic_subgroup(z4.closure([1]))
    v4 = group_by_name("V4")
    assert not v4.is_cyclic_subgroup(v4.closure([1, 2]))
    with pytest.raises(KeyError):
        group_by_name("A5")

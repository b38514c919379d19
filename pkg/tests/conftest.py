import random

import pytest
from hypothesis import settings, strategies as st

from sautfn import automorphisms as auto
from sautfn.automorphisms import ElementaryAuto, INVERSION, LEFT, RIGHT, SWAP
from sautfn.freewords import Word

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def letters(rank, max_size=12):
    return st.lists(st.integers(1, rank).flatmap(lambda k: st.sampled_from([k, -k])), max_size=max_size)


def words(rank, max_size=12):
    return letters(rank, max_size).map(lambda ls: Word(rank, tuple(ls)))


@st.composite
def moves(draw, rank, special=False):
    kinds = [RIGHT, LEFT] if special else [RIGHT, LEFT, INVERSION, SWAP]
    kind = draw(st.sampled_from(kinds))
    if kind == INVERSION:
        return ElementaryAuto(kind, draw(st.integers(1, rank)))
    i, j = draw(st.permutations(range(1, rank + 1)))[:2]
    if kind == SWAP:
        return ElementaryAuto(kind, i, j)
    return ElementaryAuto(kind, i, j, draw(st.sampled_from([1, -1])))


def automorphisms(rank, max_moves=6, special=False):
    return st.lists(moves(rank, special), max_size=max_moves).map(
        lambda ms: auto.Automorphism.from_moves(rank, ms))


@pytest.fixture
def rng():
    return random.Random(20261019)

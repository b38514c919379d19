"""Desk-scale verification of the constructive steps behind SL(n,2) as the
smallest non-cyclic quotient of SAut(F_n)."""

from .freewords import Word, parse_word, render_word
from .automorphisms import Automorphism, compose, inverse, commutator, transvection
from .hyperplanes import Indicator, lemma_a_change, verify_lemma_a
from .gf2group import GF2Matrix, enumerate_sl, pi

__all__ = [
    "Word", "parse_word", "render_word",
    "Automorphism", "compose", "inverse", "commutator", "transvection",
    "Indicator", "lemma_a_change", "verify_lemma_a",
    "GF2Matrix", "enumerate_sl", "pi",
]

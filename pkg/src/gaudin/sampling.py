"""Seeded random elements for the randomized exact checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraSignature, Letter, NCPoly


def random_letter(rng: random.Random, sig: AlgebraSignature) -> Letter:
    return (rng.randint(1, sig.sites), rng.randint(1, sig.rank), rng.randint(1, sig.rank))


def random_word(rng: random.Random, sig: AlgebraSignature, degree: int):
    word = tuple(sorted(random_letter(rng, sig) for _ in range(degree)))
    return word


def random_ncpoly(rng: random.Random, sig: AlgebraSignature,
                  max_degree: int = 2, terms: int = 3,
                  coeff_lo: int = -4, coeff_hi: int = 4) -> NCPoly:
    items = []
    for _ in range(terms):
        deg = rng.randint(1, max_degree)
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(coeff_lo, coeff_hi)
        items.append((random_word(rng, sig, deg), Fraction(coeff)))
    return NCPoly.from_terms(sig, items)


def random_point(rng: random.Random, sig: AlgebraSignature,
                 lo: int = -9, hi: int = 9) -> dict[Letter, Fraction]:
    return {letter: Fraction(rng.randint(lo, hi)) for letter in sig.letters()}

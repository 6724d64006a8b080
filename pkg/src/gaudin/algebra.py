"""Exact kernel for the site-wise gl(r) algebras.

Both the quantum algebra U(gl_r)^{tensor N} and its classical counterpart,
the symmetric algebra carrying the product Lie-Poisson structure, share one
sparse representation: a rational linear combination of PBW-ordered words in
the matrix-unit generators.  A generator is the triple ``(site, row, col)``
standing for e[row,col] acting at the given tensor site; words are kept
non-decreasing in the lexicographic order on these triples, which is the PBW
straightening order (different-site letters sort by site, so cross-site
products never need correction terms).

Coefficients are exact ``fractions.Fraction`` values throughout.  An exact
zero is the only accepted "commutes" verdict anywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping

Letter = tuple[int, int, int]
Word = tuple[Letter, ...]


class Mode(Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


class SignatureMismatchError(ValueError):
    """Two operands live over different algebra signatures."""


class ModeError(ValueError):
    """Operation not defined for the signature's mode."""


@dataclass(frozen=True)
class AlgebraSignature:
    """Shape of the ambient algebra: one copy of gl(rank) per tensor site."""

    rank: int
    sites: int
    mode: Mode

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.sites < 1:
            raise ValueError(f"sites must be >= 1, got {self.sites}")

    @property
    def is_quantum(self) -> bool:
        return self.mode is Mode.QUANTUM

    def as_mode(self, mode: Mode) -> "AlgebraSignature":
        return AlgebraSignature(self.rank, self.sites, mode)

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): Fraction(1)})

    def gen(self, site: int, row: int, col: int) -> "NCPoly":
        self.check_letter((site, row, col))
        return NCPoly(self, {((site, row, col),): Fraction(1)})

    def letters(self) -> Iterator[Letter]:
        for i in range(1, self.sites + 1):
            for a in range(1, self.rank + 1):
                for b in range(1, self.rank + 1):
                    yield (i, a, b)

    def check_letter(self, letter: Letter) -> None:
        i, a, b = letter
        if not (1 <= i <= self.sites):
            raise ValueError(f"site {i} out of range 1..{self.sites}")
        if not (1 <= a <= self.rank and 1 <= b <= self.rank):
            raise ValueError(f"indices ({a},{b}) out of range 1..{self.rank}")


def _letter_bracket(g: Letter, h: Letter) -> list[tuple[Letter, int]]:
    # [e_ab@i, e_cd@j] = delta_ij (delta_bc e_ad - delta_da e_cb)
    i, a, b = g
    j, c, d = h
    if i != j:
        return []
    out = []
    if b == c:
        out.append(((i, a, d), 1))
    if d == a:
        out.append(((i, c, b), -1))
    return out


# Straightened two-letter products recur constantly while normal-ordering, so
# results are memoized per word.  Structure constants are integers, so cached
# coefficients stay int.  CPython's GIL makes the shared dict safe; workers in
# separate processes each grow their own table.
_STRAIGHTEN: dict[Word, dict[Word, int]] = {}


def straighten_word(word: Word) -> Mapping[Word, int]:
    """Normal-order a word of generators by adjacent-transposition rewriting.

    Returns the expansion of the product in the PBW basis as a map from
    non-decreasing words to integer coefficients.
    """
    cached = _STRAIGHTEN.get(word)
    if cached is not None:
        return cached
    pos = -1
    for p in range(len(word) - 1):
        if word[p] > word[p + 1]:
            pos = p
            break
    if pos < 0:
        result = {word: 1}
    else:
        g, h = word[pos], word[pos + 1]
        head, tail = word[:pos], word[pos + 2:]
        result = dict(straighten_word(head + (h, g) + tail))
        for letter, sign in _letter_bracket(g, h):
            for w, c in straighten_word(head + (letter,) + tail).items():
                acc = result.get(w, 0) + sign * c
                if acc:
                    result[w] = acc
                else:
                    result.pop(w, None)
    _STRAIGHTEN[word] = result
    return result


def _acc(terms: dict, key, val) -> None:
    cur = terms.get(key)
    if cur is None:
        if val:
            terms[key] = val
        return
    cur = cur + val
    if cur:
        terms[key] = cur
    else:
        del terms[key]


class NCPoly:
    """Sparse exact-rational combination of PBW-normal-form words.

    Values are immutable by convention: operations always build new objects,
    so independent brackets can be evaluated in parallel.
    """

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: dict[Word, Fraction]):
        self.sig = sig
        self.terms = terms

    @staticmethod
    def zero(sig: AlgebraSignature) -> "NCPoly":
        return NCPoly(sig, {})

    @staticmethod
    def from_terms(sig: AlgebraSignature, items) -> "NCPoly":
        """Build from (word, coefficient) pairs, accumulating duplicates."""
        terms: dict[Word, Fraction] = {}
        for word, coeff in items:
            _acc(terms, word, Fraction(coeff))
        return NCPoly(sig, terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Word-length degree; the zero polynomial reports -inf."""
        if not self.terms:
            return float("-inf")
        return max(len(w) for w in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            if other.sig != self.sig:
                raise SignatureMismatchError(
                    f"operands over different signatures: {self.sig} vs {other.sig}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return NCPoly(self.sig, {(): c} if c else {})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _acc(terms, w, c)
        return NCPoly(self.sig, terms)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.sig, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return NCPoly(self.sig, {})
            return NCPoly(self.sig, {w: c * q for w, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        quantum = self.sig.is_quantum
        terms: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = c1 * c2
                if quantum:
                    for w, k in straighten_word(w1 + w2).items():
                        _acc(terms, w, c * k)
                else:
                    _acc(terms, tuple(sorted(w1 + w2)), c)
        return NCPoly(self.sig, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = self.sig.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        """Terms in the stable output order: graded, then PBW-lexicographic."""
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        sym = "e" if self.sig.is_quantum else "x"
        parts: list[str] = []
        for word, coeff in self.sorted_terms():
            factors = [f"{sym}[{a},{b}]@{i}" for (i, a, b) in word]
            mag = coeff if coeff > 0 else -coeff
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = " * ".join(factors)
            else:
                body = " * ".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"<NCPoly {self.render()}>"


def multiply(p: NCPoly, q: NCPoly) -> NCPoly:
    """Algebra product: PBW-straightened in quantum mode, plain in classical."""
    return p * q


def commutator(p: NCPoly, q: NCPoly) -> NCPoly:
    """pq - qp in normal form.  Quantum mode only."""
    if not p.sig.is_quantum:
        raise ModeError("commutator requires Quantum mode; use poisson_bracket")
    return p * q - q * p


def poisson_bracket(p: NCPoly, q: NCPoly) -> NCPoly:
    """Site-wise Lie-Poisson bracket extended by Leibniz.  Classical mode only."""
    if p.sig.is_quantum:
        raise ModeError("poisson_bracket requires Classical mode; use commutator")
    if p.sig != q.sig:
        raise SignatureMismatchError(f"{p.sig} vs {q.sig}")
    terms: dict[Word, Fraction] = {}
    for w1, c1 in p.terms.items():
        for s, g in enumerate(w1):
            rest1 = w1[:s] + w1[s + 1:]
            for w2, c2 in q.terms.items():
                c12 = c1 * c2
                for t, h in enumerate(w2):
                    br = _letter_bracket(g, h)
                    if not br:
                        continue
                    rest = rest1 + w2[:t] + w2[t + 1:]
                    for letter, sign in br:
                        _acc(terms, tuple(sorted(rest + (letter,))), c12 * sign)
    return NCPoly(p.sig, terms)


def classical_limit(p: NCPoly) -> NCPoly:
    """Top-filtration-degree symbol of an enveloping-algebra element.

    PBW basis words of maximal length survive with the same coefficients,
    reinterpreted as commutative monomials; lower-order terms are discarded.
    """
    if not p.sig.is_quantum:
        raise ModeError("classical_limit expects a Quantum-mode element")
    csig = p.sig.as_mode(Mode.CLASSICAL)
    if p.is_zero():
        return NCPoly(csig, {})
    top = p.degree
    return NCPoly(csig, {w: c for w, c in p.terms.items() if len(w) == top})


def diagonal_generators(sig: AlgebraSignature) -> list[NCPoly]:
    """The Cartan part of the diagonal action: sum_i e[a,a]@i for each a."""
    out = []
    for a in range(1, sig.rank + 1):
        p = sig.zero()
        for i in range(1, sig.sites + 1):
            p = p + sig.gen(i, a, a)
        out.append(p)
    return out


def bracket(p: NCPoly, q: NCPoly) -> NCPoly:
    """Mode-appropriate bracket: commutator or Poisson bracket."""
    if p.sig.is_quantum:
        return commutator(p, q)
    return poisson_bracket(p, q)


def partial(p: NCPoly, letter: Letter) -> NCPoly:
    """Formal partial derivative with respect to one coordinate generator."""
    if p.sig.is_quantum:
        raise ModeError("partial derivatives are defined in Classical mode only")
    p.sig.check_letter(letter)
    terms: dict[Word, Fraction] = {}
    for w, c in p.terms.items():
        count = w.count(letter)
        if count:
            idx = w.index(letter)
            _acc(terms, w[:idx] + w[idx + 1:], c * count)
    return NCPoly(p.sig, terms)


def evaluate(p: NCPoly, point: Mapping[Letter, Fraction]) -> Fraction:
    """Value of a classical polynomial at an assignment of the coordinates."""
    if p.sig.is_quantum:
        raise ModeError("evaluation is defined in Classical mode only")
    total = Fraction(0)
    for w, c in p.terms.items():
        val = c
        for g in w:
            val *= point[g]
        total += val
    return total

"""Exact arithmetic in the spectral parameter z, and the coefficient objects
layered on it.

``Poly`` and ``RatFun`` are univariate polynomials / rational functions over
the rationals in canonical form (monic denominator, gcd removed).  ``LaxEntry``
is a noncommutative polynomial whose coefficients are rational functions: one
matrix entry of a Lax matrix.  ``DiffOpEntry`` is a polynomial in d/dz with
LaxEntry coefficients, multiplying by the exact Leibniz rule
``d/dz . f = f . d/dz + f'``.

Pole locations are restricted to rational points; residues are computed by
exact local power-series division, never by numeric limits.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable

from .algebra import (
    AlgebraSignature,
    NCPoly,
    SignatureMismatchError,
    Word,
    straighten_word,
)


class PoleEvaluationError(ValueError):
    """Raised when a rational function is evaluated at one of its poles."""

    def __init__(self, point: Fraction):
        self.point = point
        super().__init__(f"evaluation at pole z = {point}")


class Poly:
    """Dense univariate polynomial in z with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def z() -> "Poly":
        return Poly([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Poly([c * q for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.lead()
        dn = other.degree
        for k in range(len(rem) - 1, dn - 1, -1):
            c = rem[k] / dlead
            if not c:
                continue
            quo[k - dn] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dn + j] -= c * b
        return Poly(quo), Poly(rem)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = 1 / self.lead()
        return Poly([c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly([c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, point) -> Fraction:
        point = Fraction(point)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * point + c
        return total

    def shift(self, c) -> "Poly":
        """The polynomial w -> p(w + c)."""
        c = Fraction(c)
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for j, pj in enumerate(self.coeffs):
            if not pj:
                continue
            power = Fraction(1)
            for k in range(j, -1, -1):
                out[k] += pj * comb(j, k) * power
                power *= c
        return Poly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = c if c > 0 else -c
            if k == 0:
                body = str(mag)
            else:
                zpow = "z" if k == 1 else f"z^{k}"
                body = zpow if mag == 1 else f"{mag}*{zpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"<Poly {self.render()}>"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r.monic() if not r.is_zero() else r
    return a.monic() if not a.is_zero() else a


class RatFun:
    """Rational function of z in canonical form: monic denominator, gcd 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly([1])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        inv = 1 / den.lead()
        self.num = num * inv
        self.den = den * inv

    @staticmethod
    def const(c) -> "RatFun":
        return RatFun(Poly.const(c))

    @staticmethod
    def z() -> "RatFun":
        return RatFun(Poly.z())

    @staticmethod
    def one_over_z_minus(point) -> "RatFun":
        return RatFun(Poly([1]), Poly([-Fraction(point), 1]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def as_constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num(0)

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other / self

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, point) -> Fraction:
        point = Fraction(point)
        dval = self.den(point)
        if not dval:
            raise PoleEvaluationError(point)
        return self.num(point) / dval

    def residue(self, pole, order: int = 0) -> Fraction:
        """Coefficient of (z-pole)^(-1) in (z-pole)^order * self."""
        if order < 0:
            raise ValueError("residue order must be non-negative")
        pole = Fraction(pole)
        num = self.num.shift(pole)
        den = self.den.shift(pole)
        mult = 0
        while not den.is_zero() and not den.coeffs[0]:
            den = Poly(den.coeffs[1:])
            mult += 1
        want = mult - order - 1  # series coefficient of num/den at that index
        if want < 0:
            return Fraction(0)
        series = [Fraction(0)] * (want + 1)
        d0 = den.coeffs[0]
        for k in range(want + 1):
            acc = num.coeffs[k] if k < len(num.coeffs) else Fraction(0)
            for j in range(k):
                dj = den.coeffs[k - j] if k - j < len(den.coeffs) else Fraction(0)
                acc -= series[j] * dj
            series[k] = acc / d0
        return series[want]

    def __eq__(self, other) -> bool:
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def render(self) -> str:
        if self.den.degree == 0:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    __str__ = render

    def __repr__(self) -> str:
        return f"<RatFun {self.render()}>"


def _as_ratfun(value) -> RatFun | None:
    if isinstance(value, RatFun):
        return value
    if isinstance(value, (int, Fraction)):
        return RatFun.const(value)
    if isinstance(value, Poly):
        return RatFun(value)
    return None


def ratfun_arith(f: RatFun, g: RatFun, op: str) -> RatFun:
    """Dispatch helper mirroring the four-function contract."""
    if op == "+":
        return f + g
    if op == "-":
        return f - g
    if op == "*":
        return f * g
    if op == "/":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def residue(f: RatFun, pole, order: int = 0) -> Fraction:
    return f.residue(pole, order)


class LaxEntry:
    """Noncommutative polynomial with RatFun coefficients: one Lax-matrix entry."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: dict[Word, RatFun]):
        self.sig = sig
        self.terms = terms

    @staticmethod
    def zero(sig: AlgebraSignature) -> "LaxEntry":
        return LaxEntry(sig, {})

    @staticmethod
    def one(sig: AlgebraSignature) -> "LaxEntry":
        return LaxEntry(sig, {(): RatFun.const(1)})

    @staticmethod
    def scalar(sig: AlgebraSignature, f) -> "LaxEntry":
        f = _as_ratfun(f)
        return LaxEntry(sig, {} if f.is_zero() else {(): f})

    @staticmethod
    def from_terms(sig: AlgebraSignature, items) -> "LaxEntry":
        terms: dict[Word, RatFun] = {}
        for word, coeff in items:
            _acc_rf(terms, word, _as_ratfun(coeff))
        return LaxEntry(sig, terms)

    @staticmethod
    def from_ncpoly(p: NCPoly) -> "LaxEntry":
        return LaxEntry(p.sig, {w: RatFun.const(c) for w, c in p.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_same(self, other: "LaxEntry") -> None:
        if self.sig != other.sig:
            raise SignatureMismatchError(f"{self.sig} vs {other.sig}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            other = LaxEntry.scalar(self.sig, other)
        if not isinstance(other, LaxEntry):
            return NotImplemented
        self._require_same(other)
        terms = dict(self.terms)
        for w, f in other.terms.items():
            _acc_rf(terms, w, f)
        return LaxEntry(self.sig, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaxEntry(self.sig, {w: -f for w, f in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            other = LaxEntry.scalar(self.sig, other)
        if not isinstance(other, LaxEntry):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            return self.scale(other)
        if not isinstance(other, LaxEntry):
            return NotImplemented
        self._require_same(other)
        quantum = self.sig.is_quantum
        terms: dict[Word, RatFun] = {}
        for w1, f1 in self.terms.items():
            for w2, f2 in other.terms.items():
                f = f1 * f2
                if quantum:
                    for w, k in straighten_word(w1 + w2).items():
                        _acc_rf(terms, w, f * k)
                else:
                    _acc_rf(terms, tuple(sorted(w1 + w2)), f)
        return LaxEntry(self.sig, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            return self.scale(other)
        return NotImplemented

    def scale(self, f) -> "LaxEntry":
        f = _as_ratfun(f)
        if f.is_zero():
            return LaxEntry.zero(self.sig)
        return LaxEntry(self.sig, {w: g * f for w, g in self.terms.items()})

    def derivative(self) -> "LaxEntry":
        terms = {}
        for w, f in self.terms.items():
            df = f.derivative()
            if not df.is_zero():
                terms[w] = df
        return LaxEntry(self.sig, terms)

    def eval_z(self, point) -> NCPoly:
        """Substitute z = point in every coefficient (errors name the pole)."""
        terms: dict[Word, Fraction] = {}
        for w, f in self.terms.items():
            c = f(point)
            if c:
                terms[w] = c
        return NCPoly(self.sig, terms)

    def residue(self, pole, order: int = 0) -> NCPoly:
        terms: dict[Word, Fraction] = {}
        for w, f in self.terms.items():
            c = f.residue(pole, order)
            if c:
                terms[w] = c
        return NCPoly(self.sig, terms)

    def z_coefficient(self, power: int) -> NCPoly:
        """Coefficient of z^power; entry must be polynomial in z."""
        terms: dict[Word, Fraction] = {}
        for w, f in self.terms.items():
            if not f.is_polynomial():
                raise ValueError("entry is not polynomial in z")
            if power <= f.num.degree:
                c = f.num.coeffs[power]
                if c:
                    terms[w] = c
        return NCPoly(self.sig, terms)

    def proportionality(self, other: "LaxEntry") -> Fraction | None:
        """The constant c with self == c * other, if one exists."""
        if other.is_zero():
            return None
        if self.is_zero():
            return Fraction(0)
        if set(self.terms) != set(other.terms):
            return None
        ratio: Fraction | None = None
        for w, f in self.terms.items():
            q = f / other.terms[w]
            if not q.is_constant():
                return None
            c = q.as_constant()
            if ratio is None:
                ratio = c
            elif ratio != c:
                return None
        return ratio

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaxEntry):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        sym = "e" if self.sig.is_quantum else "x"
        parts = []
        for word, f in self.sorted_terms():
            factors = [f"{sym}[{a},{b}]@{i}" for (i, a, b) in word]
            body = " * ".join([f"({f.render()})"] + factors) if factors else f"({f.render()})"
            parts.append(body if not parts else f"+ {body}")
        return " ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"<LaxEntry {self.render()}>"


def _acc_rf(terms: dict[Word, RatFun], word: Word, f: RatFun) -> None:
    cur = terms.get(word)
    if cur is None:
        if not f.is_zero():
            terms[word] = f
        return
    cur = cur + f
    if cur.is_zero():
        del terms[word]
    else:
        terms[word] = cur


class DiffOpEntry:
    """Polynomial in d/dz with LaxEntry coefficients.

    Multiplication implements the exact commutation  d/dz . f = f . d/dz + f',
    so products of differential-operator matrices expand correctly.
    """

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: AlgebraSignature, coeffs: dict[int, LaxEntry]):
        self.sig = sig
        self.coeffs = coeffs

    @staticmethod
    def zero(sig: AlgebraSignature) -> "DiffOpEntry":
        return DiffOpEntry(sig, {})

    @staticmethod
    def one(sig: AlgebraSignature) -> "DiffOpEntry":
        return DiffOpEntry(sig, {0: LaxEntry.one(sig)})

    @staticmethod
    def partial(sig: AlgebraSignature, power: int = 1) -> "DiffOpEntry":
        return DiffOpEntry(sig, {power: LaxEntry.one(sig)})

    @staticmethod
    def from_entry(entry: LaxEntry) -> "DiffOpEntry":
        return DiffOpEntry(entry.sig, {} if entry.is_zero() else {0: entry})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def entry(self, power: int) -> LaxEntry:
        return self.coeffs.get(power, LaxEntry.zero(self.sig))

    def _coerce(self, other):
        if isinstance(other, DiffOpEntry):
            if other.sig != self.sig:
                raise SignatureMismatchError(f"{self.sig} vs {other.sig}")
            return other
        if isinstance(other, LaxEntry):
            return DiffOpEntry.from_entry(other)
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            return DiffOpEntry.from_entry(LaxEntry.scalar(self.sig, other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        coeffs = dict(self.coeffs)
        for k, e in other.coeffs.items():
            cur = coeffs.get(k)
            s = e if cur is None else cur + e
            if s.is_zero():
                coeffs.pop(k, None)
            else:
                coeffs[k] = s
        return DiffOpEntry(self.sig, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return DiffOpEntry(self.sig, {k: -e for k, e in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, LaxEntry] = {}
        for m, a in self.coeffs.items():
            for n, b in other.coeffs.items():
                db = b
                for t in range(m + 1):
                    contrib = (a * db).scale(comb(m, t))
                    if not contrib.is_zero():
                        k = m + n - t
                        cur = out.get(k)
                        s = contrib if cur is None else cur + contrib
                        if s.is_zero():
                            out.pop(k, None)
                        else:
                            out[k] = s
                    if t < m:
                        db = db.derivative()
        return DiffOpEntry(self.sig, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFun, Poly)):
            return self.scale(other)
        if isinstance(other, LaxEntry):
            return DiffOpEntry.from_entry(other) * self
        return NotImplemented

    def scale(self, f) -> "DiffOpEntry":
        out = {}
        for k, e in self.coeffs.items():
            s = e.scale(f)
            if not s.is_zero():
                out[k] = s
        return DiffOpEntry(self.sig, out)

    def z_derivative(self) -> "DiffOpEntry":
        """Coefficient-wise d/dz (the commutator [d/dz, A])."""
        out = {}
        for k, e in self.coeffs.items():
            de = e.derivative()
            if not de.is_zero():
                out[k] = de
        return DiffOpEntry(self.sig, out)

    def eval_z(self, point) -> list[NCPoly]:
        """Evaluated coefficients listed by d/dz power, constant term first."""
        top = self.order
        return [self.entry(k).eval_z(point) for k in range(top + 1)]

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            head = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            body = self.coeffs[k].render()
            parts.append(f"({body}){head}" if head else f"({body})")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"<DiffOpEntry {self.render()}>"


def diffop_multiply(a: DiffOpEntry, b: DiffOpEntry) -> DiffOpEntry:
    return a * b


def eval_z(obj, point):
    """Evaluate the z-dependence of a LaxEntry or DiffOpEntry."""
    return obj.eval_z(point)

"""Lax matrices of Gaudin type and their spectral-invariant families.

The rational constructors all produce matrices of the shape
``sum over pole groups of (group generator block)/(z - pole)`` whose residue
at each pole is the site-group block itself.  Entry (a,b) carries e[a,b]: with
this orientation the trace invariants reproduce the quadratic Hamiltonians
literally, and d/dz - L satisfies the column-Manin property needed by the
quantum machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import AlgebraSignature, ModeError, NCPoly
from .ratfun import LaxEntry, RatFun


@dataclass
class LaxMatrix:
    """Square matrix of LaxEntry values with its declared pole set."""

    sig: AlgebraSignature
    entries: list[list[LaxEntry]]
    poles: list[tuple[Fraction, int]]
    label: str = "L"

    @property
    def size(self) -> int:
        return self.sig.rank

    def entry(self, a: int, b: int) -> LaxEntry:
        """1-based entry access."""
        return self.entries[a - 1][b - 1]

    def is_polynomial(self) -> bool:
        return not self.poles

    def residue_matrix(self, pole, order: int = 0) -> list[list[NCPoly]]:
        return [[e.residue(pole, order) for e in row] for row in self.entries]

    def eval_z(self, point) -> list[list[NCPoly]]:
        return [[e.eval_z(point) for e in row] for row in self.entries]

    def trace(self) -> LaxEntry:
        out = LaxEntry.zero(self.sig)
        for i in range(self.size):
            out = out + self.entries[i][i]
        return out

    def matmul(self, other: "LaxMatrix") -> list[list[LaxEntry]]:
        return _matmul(self.entries, other.entries, self.sig)

    def trace_of_power(self, m: int) -> LaxEntry:
        """Tr L^m as a rational function of z with algebra coefficients."""
        if m < 1:
            raise ValueError("power must be >= 1")
        power = self.entries
        for _ in range(m - 1):
            power = _matmul(power, self.entries, self.sig)
        out = LaxEntry.zero(self.sig)
        for i in range(self.size):
            out = out + power[i][i]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaxMatrix):
            return NotImplemented
        return self.sig == other.sig and self.entries == other.entries

    def render(self) -> str:
        rows = []
        for row in self.entries:
            rows.append("[" + ", ".join(e.render() for e in row) + "]")
        return "[" + ", ".join(rows) + "]"

    __str__ = render


def _matmul(a, b, sig) -> list[list[LaxEntry]]:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = LaxEntry.zero(sig)
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass
class InvariantMember:
    expr: NCPoly
    provenance: dict

    def to_json_dict(self) -> dict:
        out = dict(self.provenance)
        out["expr"] = self.expr.render()
        return out


@dataclass
class InvariantFamily:
    """Spectral invariants tagged with where they came from."""

    members: list[InvariantMember] = field(default_factory=list)
    label: str = ""

    def exprs(self) -> list[NCPoly]:
        return [m.expr for m in self.members]

    def of_degree(self, degree: int) -> list[InvariantMember]:
        return [m for m in self.members if m.expr.degree == degree]

    def extend(self, other: "InvariantFamily") -> "InvariantFamily":
        return InvariantFamily(self.members + other.members, self.label or other.label)

    def __len__(self) -> int:
        return len(self.members)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "members": [m.to_json_dict() for m in self.members],
        }


def _check_distinct(points: Iterable[Fraction], what: str) -> list[Fraction]:
    pts = [Fraction(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError(f"repeated {what}: {[str(p) for p in pts]}")
    return pts


def gaudin_lax(sig: AlgebraSignature, poles: Sequence) -> LaxMatrix:
    """The N-site Lax matrix with simple poles: entry (a,b) is
    sum_i e[a,b]@i / (z - z_i)."""
    pts = _check_distinct(poles, "poles")
    if len(pts) != sig.sites:
        raise ValueError(f"need {sig.sites} poles, got {len(pts)}")
    entries = []
    for a in range(1, sig.rank + 1):
        row = []
        for b in range(1, sig.rank + 1):
            row.append(LaxEntry.from_terms(
                sig,
                [(((i, a, b),), RatFun.one_over_z_minus(p))
                 for i, p in enumerate(pts, start=1)],
            ))
        entries.append(row)
    return LaxMatrix(sig, entries, [(p, 1) for p in pts], label="gaudin")


def bending_lax(sig: AlgebraSignature, k: int) -> LaxMatrix:
    """Polynomial cluster Lax matrix  z*X_k + sum_{i>k} X_i,  1 <= k <= N-1."""
    if not 1 <= k <= sig.sites - 1:
        raise ValueError(f"k must lie in 1..{sig.sites - 1}, got {k}")
    zpoly = RatFun.z()
    entries = []
    for a in range(1, sig.rank + 1):
        row = []
        for b in range(1, sig.rank + 1):
            items = [(((k, a, b),), zpoly)]
            items += [(((i, a, b),), RatFun.const(1)) for i in range(k + 1, sig.sites + 1)]
            row.append(LaxEntry.from_terms(sig, items))
        entries.append(row)
    return LaxMatrix(sig, entries, [], label=f"bending(k={k})")


def bending_lax_rational(sig: AlgebraSignature, k: int, z1=0, z2=1) -> LaxMatrix:
    """Rational cluster Lax matrix  X_{k+1}/(z-z2) + (X_1+...+X_k)/(z-z1)."""
    if not 1 <= k <= sig.sites - 1:
        raise ValueError(f"k must lie in 1..{sig.sites - 1}, got {k}")
    z1, z2 = Fraction(z1), Fraction(z2)
    if z1 == z2:
        raise ValueError("the two pole locations must differ")
    f1 = RatFun.one_over_z_minus(z1)
    f2 = RatFun.one_over_z_minus(z2)
    entries = []
    for a in range(1, sig.rank + 1):
        row = []
        for b in range(1, sig.rank + 1):
            items = [(((k + 1, a, b),), f2)]
            items += [(((i, a, b),), f1) for i in range(1, k + 1)]
            row.append(LaxEntry.from_terms(sig, items))
        entries.append(row)
    return LaxMatrix(sig, entries, [(z1, 1), (z2, 1)], label=f"bending_rational(k={k})")


def spectral_invariants(matrix: LaxMatrix, max_power: int | None = None) -> InvariantFamily:
    """Residues (or z-coefficients, for polynomial matrices) of Tr L^m.

    Residue orders are enumerated exhaustively up to the pole order of
    Tr L^m; members that vanish are dropped rather than predicting the
    exponent set in advance.  Classical mode only: quantum invariants go
    through the Manin-matrix machinery instead.
    """
    sig = matrix.sig
    if sig.is_quantum:
        raise ModeError("spectral invariants are classical; quantum families "
                        "come from the column-determinant generators")
    if max_power is None:
        max_power = sig.rank
    members: list[InvariantMember] = []
    for m in range(1, max_power + 1):
        tr = matrix.trace_of_power(m)
        if matrix.is_polynomial():
            top = max((f.num.degree for f in tr.terms.values()), default=-1)
            for a in range(top + 1):
                expr = tr.z_coefficient(a)
                if expr.is_zero():
                    continue
                members.append(InvariantMember(expr, {
                    "matrix": matrix.label, "power": m, "zpower": a,
                }))
        else:
            for pole, order in matrix.poles:
                for j in range(m * order):
                    expr = tr.residue(pole, j)
                    if expr.is_zero():
                        continue
                    members.append(InvariantMember(expr, {
                        "matrix": matrix.label, "power": m,
                        "pole": str(pole), "order": j,
                    }))
    return InvariantFamily(members, label=matrix.label)


def quadratic_hamiltonians(sig: AlgebraSignature, poles: Sequence) -> list[NCPoly]:
    """H_i = sum_{k != i} Tr(X_i X_k)/(z_i - z_k); their sum vanishes."""
    pts = _check_distinct(poles, "poles")
    if len(pts) != sig.sites:
        raise ValueError(f"need {sig.sites} poles, got {len(pts)}")
    out = []
    for i in range(1, sig.sites + 1):
        items = []
        for k in range(1, sig.sites + 1):
            if k == i:
                continue
            weight = 1 / (pts[i - 1] - pts[k - 1])
            for a in range(1, sig.rank + 1):
                for b in range(1, sig.rank + 1):
                    word = tuple(sorted(((i, a, b), (k, b, a))))
                    items.append((word, weight))
        out.append(NCPoly.from_terms(sig, items))
    return out


def physical_hamiltonian(sig: AlgebraSignature) -> NCPoly:
    """The mean-field spin-spin Hamiltonian sum_{i != j} Tr(X_i X_j)."""
    if sig.sites < 2:
        raise ValueError("need at least two sites")
    items = []
    for i in range(1, sig.sites + 1):
        for j in range(i + 1, sig.sites + 1):
            for a in range(1, sig.rank + 1):
                for b in range(1, sig.rank + 1):
                    items.append((((i, a, b), (j, b, a)), Fraction(2)))
    return NCPoly.from_terms(sig, items)


def generator_matrix(sig: AlgebraSignature, site: int) -> list[list[NCPoly]]:
    """The matrix X_site with (a,b) entry e[a,b]@site."""
    return [[sig.gen(site, a, b) for b in range(1, sig.rank + 1)]
            for a in range(1, sig.rank + 1)]


def group_matrix(sig: AlgebraSignature, sites: Iterable[int]) -> list[list[NCPoly]]:
    """Sum of generator matrices over a group of sites."""
    sites = list(sites)
    out = []
    for a in range(1, sig.rank + 1):
        row = []
        for b in range(1, sig.rank + 1):
            p = sig.zero()
            for i in sites:
                p = p + sig.gen(i, a, b)
            row.append(p)
        out.append(row)
    return out


def lax_from_groups(sig: AlgebraSignature,
                    groups: Sequence[tuple[Sequence[int], Fraction]],
                    label: str = "L") -> LaxMatrix:
    """Gaudin-type matrix  sum over (site group, pole) of (group block)/(z-pole)."""
    locs = _check_distinct([loc for _, loc in groups], "pole locations")
    entries = []
    for a in range(1, sig.rank + 1):
        row = []
        for b in range(1, sig.rank + 1):
            items = []
            for (sites, _), loc in zip(groups, locs):
                f = RatFun.one_over_z_minus(loc)
                for i in sites:
                    items.append((((i, a, b),), f))
            row.append(LaxEntry.from_terms(sig, items))
        entries.append(row)
    return LaxMatrix(sig, entries, [(loc, 1) for loc in locs], label=label)


def pole_site_groups(matrix: LaxMatrix) -> dict[Fraction, list[int]] | None:
    """Site groups read off the residues, or None if the matrix is not of
    Gaudin type (simple poles whose residues are disjoint site-group blocks)."""
    if matrix.is_polynomial():
        return None
    groups: dict[Fraction, list[int]] = {}
    seen: set[int] = set()
    for pole, order in matrix.poles:
        if order != 1:
            return None
        res = matrix.residue_matrix(pole)
        sites: set[int] = set()
        for a in range(1, matrix.size + 1):
            for b in range(1, matrix.size + 1):
                expected_sites = {
                    w[0][0] for w in res[a - 1][b - 1].terms
                }
                for word, coeff in res[a - 1][b - 1].terms.items():
                    if len(word) != 1 or coeff != 1:
                        return None
                    site, r, c = word[0]
                    if (r, c) != (a, b):
                        return None
                if (a, b) == (1, 1):
                    sites = expected_sites
                elif expected_sites != sites:
                    return None
        if sites & seen:
            return None
        seen |= sites
        groups[pole] = sorted(sites)
    return groups

"""Alternative Poisson structures for collided-pole systems.

A bracket is presented as a block operator: block (i,j) sends the j-th
gradient to a commutator with a fixed linear combination of the site
variables, and

    {F, G} = sum_{i,j} Tr( grad_i F [P_ij, grad_j G] ).

The diagonal operator with P_ii = X_i reproduces the standard product
Lie-Poisson bracket.  The parameter-free limit bracket arising from the total
collision has coefficients

    r_ijk = (k-1) d_ij d_jk - theta(i-k) d_ij + theta(j-i) d_ik + theta(i-j) d_jk

with theta(n) = 1 for n > 0 and 0 otherwise; this is the unique theta
convention reproducing the tabulated four-site operator block by block.  The
five-site operator for the partial collision is implemented verbatim and its
checks are diagnostics only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    AlgebraSignature,
    ModeError,
    NCPoly,
    partial,
    poisson_bracket,
)
from .lax import InvariantFamily
from .reports import CheckReport
from .sampling import random_ncpoly
import random

Block = dict[int, Fraction]


@dataclass(frozen=True)
class PoissonOperator:
    """N x N block operator; block (i,j) is a combination sum_k c_k ad(X_k)."""

    sites: int
    blocks: Mapping[tuple[int, int], Block]

    def block(self, i: int, j: int) -> Block:
        return self.blocks.get((i, j), {})

    def with_block(self, i: int, j: int, block: Block) -> "PoissonOperator":
        blocks = {k: dict(v) for k, v in self.blocks.items()}
        blocks[(i, j)] = dict(block)
        return PoissonOperator(self.sites, blocks)

    def to_json_dict(self) -> dict:
        return {
            "sites": self.sites,
            "blocks": {
                f"{i},{j}": {str(k): str(c) for k, c in sorted(combo.items())}
                for (i, j), combo in sorted(self.blocks.items())
            },
        }


def standard_operator(sites: int) -> PoissonOperator:
    return PoissonOperator(sites, {(i, i): {i: Fraction(1)} for i in range(1, sites + 1)})


def theta(n: int) -> int:
    return 1 if n > 0 else 0


def limit_coefficient(i: int, j: int, k: int) -> Fraction:
    d_ij = i == j
    d_jk = j == k
    d_ik = i == k
    return Fraction((k - 1) * (d_ij and d_jk)
                    - theta(i - k) * d_ij
                    + theta(j - i) * d_ik
                    + theta(i - j) * d_jk)


def limit_rijk_operator(sites: int) -> PoissonOperator:
    blocks: dict[tuple[int, int], Block] = {}
    for i in range(1, sites + 1):
        for j in range(1, sites + 1):
            combo = {}
            for k in range(1, sites + 1):
                c = limit_coefficient(i, j, k)
                if c:
                    combo[k] = c
            if combo:
                blocks[(i, j)] = combo
    return PoissonOperator(sites, blocks)


def fivesite_operator(z: Sequence) -> PoissonOperator:
    """The five-site operator for the pattern collapsing sites 3..5, with the
    new pole placed at z_3.  Implemented exactly as tabulated; its checks are
    diagnostics only."""
    pts = [Fraction(p) for p in z]
    if len(pts) != 5:
        raise ValueError("need exactly 5 pole parameters")
    if len(set(pts)) != 5:
        raise ValueError("pole parameters must be pairwise distinct")

    def zd(i: int, j: int) -> Fraction:
        return pts[i - 1] - pts[j - 1]

    blocks: dict[tuple[int, int], Block] = {}

    def put(i, j, combo: dict[int, Fraction]):
        combo = {k: c for k, c in combo.items() if c}
        if combo:
            blocks[(i, j)] = combo

    z12, z13, z23 = zd(1, 2), zd(1, 3), zd(2, 3)
    z34, z35, z45 = zd(3, 4), zd(3, 5), zd(4, 5)

    put(1, 2, {1: z23})
    put(2, 1, {1: z23})
    put(2, 2, {2: z23, 1: -z23, 3: z12, 4: z12, 5: z12})
    put(2, 3, {3: -z12})
    put(3, 2, {3: -z12})
    put(2, 4, {4: -z12})
    put(4, 2, {4: -z12})
    put(2, 5, {5: -z12})
    put(5, 2, {5: -z12})
    put(3, 4, {3: -z13 * z34 / z45})
    put(4, 3, {3: -z13 * z34 / z45})
    put(3, 5, {3: z13 * z35 / z45})
    put(5, 3, {3: z13 * z35 / z45})
    c44 = z13 * z34 / z45
    put(4, 4, {3: c44, 4: -c44 * (z35 - z45) / z45, 5: -c44 * z13 * z34 / z45})
    p45 = z13 / (z45 * z45)
    put(4, 5, {4: p45 * z35 * z35, 5: p45 * z34 * z34})
    put(5, 4, {4: p45 * z35 * z35, 5: p45 * z34 * z34})
    c55 = -z13 * z35 / z45
    put(5, 5, {3: c55, 4: c55 * z35 / z45, 5: c55 * (z34 - z45) / z45})
    return PoissonOperator(5, blocks)


class BracketSpec:
    """Marker base class for bracket descriptions."""


@dataclass(frozen=True)
class StandardBracket(BracketSpec):
    pass


@dataclass(frozen=True)
class LimitBracket(BracketSpec):
    """The parameter-free total-collision bracket from the r_ijk formula."""


@dataclass(frozen=True)
class OperatorBracket(BracketSpec):
    operator: PoissonOperator

    def __hash__(self):  # operators hold dicts; identity hash is enough here
        return id(self.operator)


@dataclass(frozen=True)
class PencilBracket(BracketSpec):
    lam: Fraction
    first: BracketSpec
    mu: Fraction
    second: BracketSpec


def describe(spec: BracketSpec) -> str:
    if isinstance(spec, StandardBracket):
        return "standard"
    if isinstance(spec, LimitBracket):
        return "limit_rijk"
    if isinstance(spec, OperatorBracket):
        return "operator"
    if isinstance(spec, PencilBracket):
        return (f"pencil({spec.lam}*{describe(spec.first)} "
                f"+ {spec.mu}*{describe(spec.second)})")
    return spec.__class__.__name__


def gradient_matrix(F: NCPoly, site: int) -> list[list[NCPoly]]:
    """Trace-pairing gradient: entry (u,v) is dF / dx[v,u]@site."""
    r = F.sig.rank
    return [[partial(F, (site, v, u)) for v in range(1, r + 1)]
            for u in range(1, r + 1)]


def _combo_matrix(sig: AlgebraSignature, combo: Block) -> list[list[NCPoly]]:
    r = sig.rank
    out = []
    for a in range(1, r + 1):
        row = []
        for b in range(1, r + 1):
            p = sig.zero()
            for k, c in combo.items():
                p = p + sig.gen(k, a, b) * c
            row.append(p)
        out.append(row)
    return out


def _mat_mul(a, b, sig):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), sig.zero())
             for j in range(n)] for i in range(n)]


def _operator_bracket(op: PoissonOperator, F: NCPoly, G: NCPoly) -> NCPoly:
    sig = F.sig
    if op.sites != sig.sites:
        raise ValueError(f"operator is for {op.sites} sites, signature has {sig.sites}")
    grads_F: dict[int, list[list[NCPoly]]] = {}
    grads_G: dict[int, list[list[NCPoly]]] = {}
    total = sig.zero()
    r = sig.rank
    for (i, j), combo in op.blocks.items():
        gF = grads_F.get(i)
        if gF is None:
            gF = grads_F[i] = gradient_matrix(F, i)
        gG = grads_G.get(j)
        if gG is None:
            gG = grads_G[j] = gradient_matrix(G, j)
        P = _combo_matrix(sig, combo)
        C = [[_mat_entry_sub(_mat_mul(P, gG, sig), _mat_mul(gG, P, sig), u, v)
              for v in range(r)] for u in range(r)]
        for u in range(r):
            for v in range(r):
                total = total + gF[u][v] * C[v][u]
    return total


def _mat_entry_sub(A, B, u, v):
    return A[u][v] - B[u][v]


def bracket_eval(spec: BracketSpec, F: NCPoly, G: NCPoly) -> NCPoly:
    """Evaluate the described bracket on two classical polynomials."""
    if F.sig.is_quantum:
        raise ModeError("bracket_eval works on Classical-mode elements")
    if isinstance(spec, StandardBracket):
        return poisson_bracket(F, G)
    if isinstance(spec, LimitBracket):
        return _operator_bracket(limit_rijk_operator(F.sig.sites), F, G)
    if isinstance(spec, OperatorBracket):
        return _operator_bracket(spec.operator, F, G)
    if isinstance(spec, PencilBracket):
        return (bracket_eval(spec.first, F, G) * Fraction(spec.lam)
                + bracket_eval(spec.second, F, G) * Fraction(spec.mu))
    raise TypeError(f"unknown bracket spec {spec!r}")


def _jacobi_sum(spec: BracketSpec, F: NCPoly, G: NCPoly, H: NCPoly) -> NCPoly:
    return (bracket_eval(spec, F, bracket_eval(spec, G, H))
            + bracket_eval(spec, G, bracket_eval(spec, H, F))
            + bracket_eval(spec, H, bracket_eval(spec, F, G)))


def jacobi_check(spec: BracketSpec, sig: AlgebraSignature,
                 trials: int = 20, seed: int = 0) -> CheckReport:
    """Jacobi cyclic sum on random coordinate triples and random quadratics."""
    if sig.is_quantum:
        raise ModeError("jacobi_check runs in Classical mode")
    rng = random.Random(seed)
    letters = list(sig.letters())
    witnesses = []
    for trial in range(trials):
        if trial % 2 == 0:
            triple = [sig.gen(*rng.choice(letters)) for _ in range(3)]
            kind = "coordinates"
        else:
            triple = [random_ncpoly(rng, sig, max_degree=2, terms=3) for _ in range(3)]
            kind = "degree<=2"
        res = _jacobi_sum(spec, *triple)
        if not res.is_zero():
            witnesses.append({
                "trial": trial,
                "kind": kind,
                "triple": [t.render() for t in triple],
                "jacobiator": res.render(),
            })
    return CheckReport(
        check="jacobi",
        passed=not witnesses,
        params={"spec": describe(spec), "seed": seed},
        trials=trials,
        witnesses=witnesses,
    )


def compatibility_check(first: BracketSpec, second: BracketSpec,
                        sig: AlgebraSignature, trials: int = 20,
                        seed: int = 0) -> CheckReport:
    """Two brackets are compatible iff the sum and difference both satisfy
    Jacobi (with bilinearity this covers the whole pencil)."""
    plus = jacobi_check(PencilBracket(Fraction(1), first, Fraction(1), second),
                        sig, trials, seed)
    minus = jacobi_check(PencilBracket(Fraction(1), first, Fraction(-1), second),
                         sig, trials, seed)
    return CheckReport(
        check="compatibility",
        passed=bool(plus.passed and minus.passed),
        params={"first": describe(first), "second": describe(second), "seed": seed},
        trials=trials,
        witnesses=plus.witnesses + minus.witnesses,
    )


def family_commutes_under(spec: BracketSpec, family: InvariantFamily) -> CheckReport:
    """All pairwise brackets of the family members under the given spec."""
    members = family.members
    witnesses = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            res = bracket_eval(spec, members[i].expr, members[j].expr)
            if not res.is_zero():
                witnesses.append({
                    "pair": [members[i].provenance, members[j].provenance],
                    "bracket": res.render(),
                })
    return CheckReport(
        check="family_commutes",
        passed=not witnesses,
        params={"spec": describe(spec), "family": family.label,
                "members": len(members)},
        witnesses=witnesses,
    )


def antisymmetry_check(spec: BracketSpec, sig: AlgebraSignature,
                       trials: int = 20, seed: int = 0) -> CheckReport:
    if sig.is_quantum:
        raise ModeError("antisymmetry_check runs in Classical mode")
    rng = random.Random(seed)
    witnesses = []
    for trial in range(trials):
        F = random_ncpoly(rng, sig, max_degree=2, terms=3)
        G = random_ncpoly(rng, sig, max_degree=2, terms=3)
        res = bracket_eval(spec, F, G) + bracket_eval(spec, G, F)
        if not res.is_zero():
            witnesses.append({"trial": trial, "residual": res.render()})
    return CheckReport(
        check="antisymmetry",
        passed=not witnesses,
        params={"spec": describe(spec), "seed": seed},
        trials=trials,
        witnesses=witnesses,
    )


def leibniz_check(spec: BracketSpec, sig: AlgebraSignature,
                  trials: int = 20, seed: int = 0) -> CheckReport:
    if sig.is_quantum:
        raise ModeError("leibniz_check runs in Classical mode")
    rng = random.Random(seed)
    witnesses = []
    for trial in range(trials):
        F = random_ncpoly(rng, sig, max_degree=2, terms=2)
        G = random_ncpoly(rng, sig, max_degree=1, terms=2)
        H = random_ncpoly(rng, sig, max_degree=1, terms=2)
        res = (bracket_eval(spec, F, G * H)
               - bracket_eval(spec, F, G) * H
               - G * bracket_eval(spec, F, H))
        if not res.is_zero():
            witnesses.append({"trial": trial, "residual": res.render()})
    return CheckReport(
        check="leibniz",
        passed=not witnesses,
        params={"spec": describe(spec), "seed": seed},
        trials=trials,
        witnesses=witnesses,
    )

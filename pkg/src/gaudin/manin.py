"""Manin-matrix machinery over the differential-operator algebra.

A (column) Manin matrix has commuting entries within each column and equal
cross commutators in every 2x2 submatrix.  For such matrices the column
determinant is well behaved: it ignores the column order, satisfies the left
Cramer formula, Cayley-Hamilton, and the Newton identities.  The matrix
d/dz - L(z) of a Gaudin-type Lax matrix is the motivating example; the
coefficients of its column determinant are the commuting quantum
Hamiltonians, and traces of its powers give the quantum trace family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .algebra import (
    AlgebraSignature,
    ModeError,
    NCPoly,
    SignatureMismatchError,
    bracket,
)
from .lax import LaxMatrix, pole_site_groups
from .ratfun import DiffOpEntry, LaxEntry, RatFun
from .reports import CheckReport


@dataclass
class DiffOpMatrix:
    """Square matrix of DiffOpEntry values; the Manin-candidate container."""

    sig: AlgebraSignature
    entries: list[list[DiffOpEntry]]

    @property
    def size(self) -> int:
        return len(self.entries)

    @staticmethod
    def identity(sig: AlgebraSignature, n: int) -> "DiffOpMatrix":
        return DiffOpMatrix(sig, [
            [DiffOpEntry.one(sig) if i == j else DiffOpEntry.zero(sig)
             for j in range(n)]
            for i in range(n)
        ])

    @staticmethod
    def from_lax_entries(entries: list[list[LaxEntry]], sig: AlgebraSignature) -> "DiffOpMatrix":
        return DiffOpMatrix(sig, [[DiffOpEntry.from_entry(e) for e in row] for row in entries])

    def __mul__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = DiffOpEntry.zero(self.sig)
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return DiffOpMatrix(self.sig, out)

    def __add__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        return DiffOpMatrix(self.sig, [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.entries, other.entries)
        ])

    def __sub__(self, other: "DiffOpMatrix") -> "DiffOpMatrix":
        return DiffOpMatrix(self.sig, [
            [a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.entries, other.entries)
        ])

    def scale(self, c) -> "DiffOpMatrix":
        return DiffOpMatrix(self.sig, [[e.scale(c) for e in row] for row in self.entries])

    def power(self, m: int) -> "DiffOpMatrix":
        out = DiffOpMatrix.identity(self.sig, self.size)
        for _ in range(m):
            out = out * self
        return out

    def trace(self) -> DiffOpEntry:
        acc = DiffOpEntry.zero(self.sig)
        for i in range(self.size):
            acc = acc + self.entries[i][i]
        return acc

    def z_derivative(self) -> "DiffOpMatrix":
        return DiffOpMatrix(self.sig, [[e.z_derivative() for e in row] for row in self.entries])

    def is_diff_free(self) -> bool:
        return all(e.order <= 0 for row in self.entries for e in row)

    def minor(self, drop_row: int, drop_col: int) -> "DiffOpMatrix":
        ents = [
            [e for j, e in enumerate(row) if j != drop_col]
            for i, row in enumerate(self.entries) if i != drop_row
        ]
        return DiffOpMatrix(self.sig, ents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOpMatrix):
            return NotImplemented
        return self.sig == other.sig and self.entries == other.entries


def partial_minus(L: LaxMatrix) -> DiffOpMatrix:
    """The differential-operator matrix d/dz - L(z)."""
    sig = L.sig
    out = []
    for a in range(L.size):
        row = []
        for b in range(L.size):
            e = DiffOpEntry.from_entry(-L.entries[a][b])
            if a == b:
                e = e + DiffOpEntry.partial(sig)
            row.append(e)
        out.append(row)
    return DiffOpMatrix(sig, out)


def _entry_commutator(a: DiffOpEntry, b: DiffOpEntry) -> DiffOpEntry:
    return a * b - b * a


def is_manin(M: DiffOpMatrix) -> CheckReport:
    """Both defining conditions, checked over all index pairs.

    The witness names the violating pair of positions (1-based) and renders
    the nonzero residual.
    """
    n = M.size
    witnesses = []
    for j in range(n):
        for i in range(n):
            for k in range(i + 1, n):
                res = _entry_commutator(M.entries[i][j], M.entries[k][j])
                if not res.is_zero():
                    witnesses.append({
                        "kind": "column",
                        "positions": [[i + 1, j + 1], [k + 1, j + 1]],
                        "residual": res.render(),
                    })
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    if (i, j) >= (k, l):
                        continue
                    res = (_entry_commutator(M.entries[i][j], M.entries[k][l])
                           - _entry_commutator(M.entries[k][j], M.entries[i][l]))
                    if not res.is_zero():
                        witnesses.append({
                            "kind": "cross",
                            "positions": [[i + 1, j + 1], [k + 1, l + 1]],
                            "residual": res.render(),
                        })
    return CheckReport(
        check="is_manin",
        passed=not witnesses,
        params={"size": n},
        witnesses=witnesses,
    )


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def col_det(M: DiffOpMatrix, column_order: tuple[int, ...] | None = None) -> DiffOpEntry:
    """Column determinant: signed sum over permutations with factors taken
    column by column, the first column's factor written first."""
    n = M.size
    cols = tuple(range(n)) if column_order is None else tuple(column_order)
    if sorted(cols) != list(range(n)):
        raise ValueError(f"column order must be a permutation of 0..{n - 1}")
    acc = DiffOpEntry.zero(M.sig)
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        prod = DiffOpEntry.one(M.sig)
        for c in cols:
            prod = prod * M.entries[perm[c]][c]
        acc = acc + prod.scale(sign)
    return acc


def column_order_invariance(M: DiffOpMatrix) -> CheckReport:
    """Evaluate the column expansion in every column order and compare."""
    n = M.size
    if n > 4:
        raise ValueError("column-order sweep is limited to n <= 4")
    reference = col_det(M)
    witnesses = []
    for order in permutations(range(n)):
        other = col_det(M, order)
        if other != reference:
            witnesses.append({
                "order": [c + 1 for c in order],
                "difference": (other - reference).render(),
            })
    return CheckReport(
        check="column_order_invariance",
        passed=not witnesses,
        params={"size": n, "orders": _factorial(n)},
        witnesses=witnesses,
    )


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def adjugate(M: DiffOpMatrix) -> DiffOpMatrix:
    """Adjugate via column determinants of minors, as in the commutative case."""
    n = M.size
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            cof = col_det(M.minor(j, i))
            row.append(cof.scale((-1) ** (i + j)))
        out.append(row)
    return DiffOpMatrix(M.sig, out)


class TPoly:
    """Polynomial in a central variable t with DiffOpEntry coefficients.

    Used for characteristic polynomials det_col(t +/- M); t commutes with
    everything, so multiplication is an ordinary convolution.
    """

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: AlgebraSignature, coeffs: dict[int, DiffOpEntry]):
        self.sig = sig
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @staticmethod
    def zero(sig: AlgebraSignature) -> "TPoly":
        return TPoly(sig, {})

    @staticmethod
    def one(sig: AlgebraSignature) -> "TPoly":
        return TPoly(sig, {0: DiffOpEntry.one(sig)})

    @staticmethod
    def t(sig: AlgebraSignature) -> "TPoly":
        return TPoly(sig, {1: DiffOpEntry.one(sig)})

    @staticmethod
    def const(entry: DiffOpEntry) -> "TPoly":
        return TPoly(entry.sig, {0: entry})

    def entry(self, k: int) -> DiffOpEntry:
        return self.coeffs.get(k, DiffOpEntry.zero(self.sig))

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TPoly") -> "TPoly":
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            cur = coeffs.get(k)
            s = v if cur is None else cur + v
            if s.is_zero():
                coeffs.pop(k, None)
            else:
                coeffs[k] = s
        return TPoly(self.sig, coeffs)

    def __neg__(self) -> "TPoly":
        return TPoly(self.sig, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        out: dict[int, DiffOpEntry] = {}
        for m, a in self.coeffs.items():
            for n, b in other.coeffs.items():
                prod = a * b
                if prod.is_zero():
                    continue
                cur = out.get(m + n)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(m + n, None)
                else:
                    out[m + n] = s
        return TPoly(self.sig, out)

    def scale(self, c) -> "TPoly":
        return TPoly(self.sig, {k: v.scale(c) for k, v in self.coeffs.items()})

    def t_derivative(self) -> "TPoly":
        return TPoly(self.sig, {k - 1: v.scale(k) for k, v in self.coeffs.items() if k > 0})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.sig == other.sig and self.coeffs == other.coeffs


def _tpoly_col_det(entries: list[list[TPoly]], sig: AlgebraSignature) -> TPoly:
    n = len(entries)
    acc = TPoly.zero(sig)
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        prod = TPoly.one(sig)
        for c in range(n):
            prod = prod * entries[perm[c]][c]
        acc = acc + prod.scale(sign)
    return acc


def _t_shifted(M: DiffOpMatrix, sign: int) -> list[list[TPoly]]:
    """The matrix t*Id + sign*M as TPoly entries."""
    n = M.size
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            p = TPoly.const(M.entries[i][j].scale(sign))
            if i == j:
                p = p + TPoly.t(M.sig)
            row.append(p)
        out.append(row)
    return out


def char_tpoly(M: DiffOpMatrix, sign: int = 1) -> TPoly:
    """det_col(t + sign*M) as a polynomial in the central variable t."""
    return _tpoly_col_det(_t_shifted(M, sign), M.sig)


def manin_property_suite(M: DiffOpMatrix,
                         schur_split: int | None = None) -> list[CheckReport]:
    """Cramer, Cayley-Hamilton and Schur checks for a Manin candidate.

    Cayley-Hamilton needs d/dz-free entries (substituting the matrix for t is
    only meaningful in the scalar setting); Schur needs an invertible leading
    block, which at desk scale means scalar entries, and is reported as
    skipped otherwise.
    """
    reports = [is_manin(M)]
    n = M.size
    sig = M.sig

    # Left Cramer formula: adj(M) M = det_col(M) Id.
    det = col_det(M)
    prod = adjugate(M) * M
    witnesses = []
    for i in range(n):
        for j in range(n):
            want = det if i == j else DiffOpEntry.zero(sig)
            res = prod.entries[i][j] - want
            if not res.is_zero():
                witnesses.append({"position": [i + 1, j + 1], "residual": res.render()})
    reports.append(CheckReport(
        check="cramer", passed=not witnesses, params={"size": n}, witnesses=witnesses,
    ))

    # Cayley-Hamilton with coefficients substituted on the left.
    if M.is_diff_free():
        char = char_tpoly(M, sign=-1)
        acc = DiffOpMatrix(sig, [[DiffOpEntry.zero(sig)] * n for _ in range(n)])
        for k in range(char.degree + 1):
            coeff = char.entry(k)
            term = M.power(k)
            acc = acc + DiffOpMatrix(sig, [
                [coeff * e for e in row] for row in term.entries
            ])
        witnesses = [
            {"position": [i + 1, j + 1], "residual": acc.entries[i][j].render()}
            for i in range(n) for j in range(n)
            if not acc.entries[i][j].is_zero()
        ]
        reports.append(CheckReport(
            check="cayley_hamilton", passed=not witnesses,
            params={"size": n}, witnesses=witnesses,
        ))
    else:
        reports.append(CheckReport(
            check="cayley_hamilton", passed=None, params={"size": n},
            info={"skipped": "entries carry d/dz; substitution t -> M undefined"},
        ))

    reports.append(_schur_check(M, schur_split))
    return reports


def _scalar_matrix(M: DiffOpMatrix) -> list[list[RatFun]] | None:
    out = []
    for row in M.entries:
        r = []
        for e in row:
            if e.order > 0:
                return None
            lax = e.entry(0)
            if any(word for word in lax.terms):
                return None
            r.append(lax.terms.get((), RatFun.const(0)))
        out.append(r)
    return out


def _ratfun_inverse(mat: list[list[RatFun]]) -> list[list[RatFun]] | None:
    n = len(mat)
    aug = [[mat[i][j] for j in range(n)] +
           [RatFun.const(1 if i == j else 0) for j in range(n)] for i in range(n)]
    row = 0
    for col in range(n):
        pivot = next((i for i in range(row, n) if not aug[i][col].is_zero()), None)
        if pivot is None:
            return None
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = RatFun.const(1) / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(n):
            if i != row and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        row += 1
    return [r[n:] for r in aug]


def _schur_check(M: DiffOpMatrix, split: int | None) -> CheckReport:
    n = M.size
    if n < 2:
        return CheckReport(check="schur", passed=None, params={"size": n},
                           info={"skipped": "matrix too small to split"})
    k = split if split is not None else n // 2
    scal = _scalar_matrix(M)
    if scal is None:
        return CheckReport(check="schur", passed=None, params={"size": n},
                           info={"skipped": "blocks are not invertible in the "
                                            "entry ring (noncommutative or d/dz entries)"})
    A = [row[:k] for row in scal[:k]]
    B = [row[k:] for row in scal[:k]]
    C = [row[:k] for row in scal[k:]]
    D = [row[k:] for row in scal[k:]]
    Ainv = _ratfun_inverse(A)
    if Ainv is None:
        return CheckReport(check="schur", passed=None, params={"size": n, "split": k},
                           info={"skipped": "leading block is singular"})

    def mul(X, Y):
        return [[sum((X[i][t] * Y[t][j] for t in range(len(Y))), RatFun.const(0))
                 for j in range(len(Y[0]))] for i in range(len(X))]

    def sub(X, Y):
        return [[a - b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]

    def det(X):
        acc = RatFun.const(0)
        for perm in permutations(range(len(X))):
            prod = RatFun.const(1)
            for c in range(len(X)):
                prod = prod * X[perm[c]][c]
            acc = acc + prod * _perm_sign(perm)
        return acc

    lhs = det(scal)
    rhs = det(A) * det(sub(D, mul(mul(C, Ainv), B)))
    ok = lhs == rhs
    witnesses = [] if ok else [{"residual": (lhs - rhs).render()}]
    Dinv = _ratfun_inverse(D)
    if Dinv is not None:
        rhs2 = det(D) * det(sub(A, mul(mul(B, Dinv), C)))
        if lhs != rhs2:
            ok = False
            witnesses.append({"residual_second_form": (lhs - rhs2).render()})
    return CheckReport(check="schur", passed=ok, params={"size": n, "split": k},
                       witnesses=witnesses)


def newton_check(M: DiffOpMatrix) -> CheckReport:
    """Newton identities between det_col(t+M) coefficients and trace powers,
    plus the adjugate-trace identity  Tr (t+M)^adj = d/dt det_col(t+M)."""
    n = M.size
    sig = M.sig
    char = char_tpoly(M, sign=1)           # det_col(t + M)
    sigma = [char.entry(n - i) for i in range(n + 1)]   # sigma_0 = 1
    tau = [None] + [M.power(i).trace() for i in range(1, n + 1)]
    witnesses = []
    for k in range(1, n + 1):
        lhs = sigma[k].scale(Fraction((-1) ** (k + 1) * k))
        rhs = DiffOpEntry.zero(sig)
        for i in range(k):
            rhs = rhs + (sigma[i] * tau[k - i]).scale((-1) ** i)
        if lhs != rhs:
            witnesses.append({"k": k, "residual": (lhs - rhs).render()})

    # Adjugate-trace identity over the t-polynomial ring.
    shifted = _t_shifted(M, 1)
    adj_trace = TPoly.zero(sig)
    for i in range(n):
        minor = [[shifted[r][c] for c in range(n) if c != i]
                 for r in range(n) if r != i]
        adj_trace = adj_trace + _tpoly_col_det(minor, sig)
    deriv = char.t_derivative()
    if adj_trace != deriv:
        witnesses.append({"k": "adjugate-trace", "residual": "nonzero difference"})
    return CheckReport(
        check="newton_identities", passed=not witnesses,
        params={"size": n}, witnesses=witnesses,
    )


def quantum_powers(L: LaxMatrix, m: int) -> list[DiffOpMatrix]:
    """Iterated quantum powers  P_0 = Id,  P_i = P_{i-1} L - d/dz P_{i-1}."""
    if not L.sig.is_quantum:
        raise ModeError("quantum powers require a Quantum-mode Lax matrix")
    Lmat = DiffOpMatrix.from_lax_entries(L.entries, L.sig)
    out = [DiffOpMatrix.identity(L.sig, L.size)]
    for _ in range(m):
        prev = out[-1]
        out.append(prev * Lmat - prev.z_derivative())
    return out


@dataclass
class TalalaevOutput:
    """Coefficients of det_col(d/dz - L) and of the quantum trace powers."""

    lax: LaxMatrix
    qh: list[LaxEntry]                       # index = power of d/dz, 0..r
    qtr: dict[tuple[int, int], LaxEntry]     # (k, j) from Tr (d/dz - L)^k
    recursion_constants: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.lax.size

    def qh_eval(self, point) -> list[NCPoly]:
        return [e.eval_z(point) for e in self.qh]

    def qtr_diag_eval(self, point) -> list[NCPoly]:
        return [self.qtr[(k, k)].eval_z(point) for k in range(1, self.rank + 1)]

    def to_json_dict(self) -> dict:
        return {
            "matrix": self.lax.label,
            "qh": {str(i): e.render() for i, e in enumerate(self.qh)},
            "qtr": {f"{k},{j}": e.render() for (k, j), e in sorted(self.qtr.items())},
            "recursion_constants": {
                ",".join(str(part) for part in key): (str(c) if c is not None else None)
                for key, c in sorted(self.recursion_constants.items())
            },
        }


def talalaev_generators(L: LaxMatrix) -> TalalaevOutput:
    """Commuting quantum Hamiltonians from the column determinant of d/dz - L.

    Requires a quantum Gaudin-type matrix (simple poles with disjoint
    site-group residues), which guarantees the linear exchange relations and
    hence the Manin property of d/dz - L.
    """
    if not L.sig.is_quantum:
        raise ModeError("Talalaev generators require a Quantum-mode Lax matrix")
    if pole_site_groups(L) is None:
        raise ValueError("matrix is not of Gaudin type (simple poles with "
                         "disjoint site-group residues)")
    M = partial_minus(L)
    det = col_det(M)
    r = L.size
    qh = [det.entry(i) for i in range(r + 1)]
    qtr: dict[tuple[int, int], LaxEntry] = {}
    for k in range(1, r + 1):
        tr = M.power(k).trace()
        for j in range(k + 1):
            qtr[(k, j)] = tr.entry(k - j)

    constants: dict[tuple, Fraction | None] = {}
    # Observed relation between repeated trace coefficients: Tr powers of
    # different order reproduce each other's coefficients up to binomial
    # factors, so only the d/dz-free coefficients are independent.
    for k in range(1, r + 1):
        for j in range(1, k):
            ratio = qtr[(k, j)].proportionality(qtr[(j, j)])
            constants[("qtr", k, j)] = ratio
    powers = quantum_powers(L, r)
    for k in range(1, r + 1):
        trk = powers[k].trace().entry(0)
        constants[("faadibruno", k, k)] = qtr[(k, k)].proportionality(trk)
    return TalalaevOutput(lax=L, qh=qh, qtr=qtr, recursion_constants=constants)


def commutation_matrix(gens: list[NCPoly], labels: list[str] | None = None) -> CheckReport:
    """Full antisymmetric table of pairwise brackets; PASS iff all vanish."""
    if not gens:
        return CheckReport(check="commutation_matrix", passed=True, params={"count": 0})
    sig = gens[0].sig
    for g in gens[1:]:
        if g.sig != sig:
            raise SignatureMismatchError("generators live over mixed signatures")
    if labels is None:
        labels = [f"g{i}" for i in range(len(gens))]
    witnesses = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            res = bracket(gens[i], gens[j])
            if not res.is_zero():
                witnesses.append({
                    "pair": [labels[i], labels[j]],
                    "bracket": res.render(),
                })
    return CheckReport(
        check="commutation_matrix",
        passed=not witnesses,
        params={"count": len(gens), "mode": sig.mode.value},
        witnesses=witnesses,
    )

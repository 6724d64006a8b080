"""Exact linear algebra over the rationals: rank, span comparison, and
expressing a target vector as a combination of given sparse vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Row rank by fraction-exact Gaussian elimination."""
    mat = [list(map(Fraction, row)) for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def _to_dense(vectors: Sequence[Mapping[Hashable, Fraction]],
              keys: Sequence[Hashable]) -> list[list[Fraction]]:
    index = {k: i for i, k in enumerate(keys)}
    dense = []
    for vec in vectors:
        row = [Fraction(0)] * len(keys)
        for k, v in vec.items():
            row[index[k]] = v
        dense.append(row)
    return dense


def span_dimension(vectors: Sequence[Mapping[Hashable, Fraction]]) -> int:
    keys = sorted({k for vec in vectors for k in vec})
    return rank(_to_dense(vectors, keys))


def spans_equal(first: Sequence[Mapping[Hashable, Fraction]],
                second: Sequence[Mapping[Hashable, Fraction]]) -> bool:
    keys = sorted({k for vec in list(first) + list(second) for k in vec})
    a = _to_dense(first, keys)
    b = _to_dense(second, keys)
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(a + b)


def solve_combination(vectors: Sequence[Mapping[Hashable, Fraction]],
                      target: Mapping[Hashable, Fraction]) -> list[Fraction] | None:
    """Coefficients x with sum_j x_j * vectors[j] == target, or None.

    Free variables are set to zero, so the reported combination is unique to
    the elimination order.
    """
    keys = sorted({k for vec in vectors for k in vec} | set(target))
    nrows, ncols = len(keys), len(vectors)
    aug = []
    kindex = {k: i for i, k in enumerate(keys)}
    cols = [[Fraction(0)] * nrows for _ in range(ncols)]
    for j, vec in enumerate(vectors):
        for k, v in vec.items():
            cols[j][kindex[k]] = v
    rhs = [Fraction(0)] * nrows
    for k, v in target.items():
        rhs[kindex[k]] = v
    aug = [[cols[j][i] for j in range(ncols)] + [rhs[i]] for i in range(nrows)]

    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col]:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, col))
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None
    solution = [Fraction(0)] * ncols
    for row, col in pivots:
        solution[col] = aug[row][ncols]
    return solution

"""Linear algebra over the small fields of :mod:`.fields`.

Matrices are tuples of row tuples of field codes.  The batched routines work
on numpy arrays of residues and are only available over prime fields.
"""

from __future__ import annotations

import numpy as np

from ..partitions import Partition
from .fields import FiniteField

Matrix = tuple[tuple[int, ...], ...]


def identity(d: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_mul(A: Matrix, B: Matrix, F: FiniteField) -> Matrix:
    add, mul = F.add, F.mul
    cols = list(zip(*B))
    out = []
    for row in A:
        r = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add[acc][mul[x][y]]
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def conj(A: Matrix, F: FiniteField) -> Matrix:
    c = F.conj
    return tuple(tuple(c[x] for x in row) for row in A)


def minus_identity(A: Matrix, F: FiniteField) -> Matrix:
    return tuple(
        tuple(F.sub(x, 1) if i == j else x for j, x in enumerate(row)) for i, row in enumerate(A)
    )


def row_reduce(A, F: FiniteField) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = inv[M[r][c]]
        M[r] = [mul[s][x] for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = neg[M[i][c]]
                M[i] = [add[x][mul[f][y]] for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A, F: FiniteField) -> int:
    if not A:
        return 0
    return len(row_reduce(A, F)[1])


def null_space(A, F: FiniteField) -> list[tuple[int, ...]]:
    """Basis of {x : A x = 0} as a list of column vectors."""
    n = len(A[0])
    R, pivots = row_reduce(A, F)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg[R[r][f]]
        basis.append(tuple(v))
    return basis


def columns_from_ranks(ranks: list[int]) -> list[int]:
    cols = []
    for a, b in zip(ranks, ranks[1:]):
        if a == b:
            break
        cols.append(a - b)
    return cols


def jordan_type_at_one(g: Matrix, F: FiniteField) -> Partition:
    """Jordan block sizes of ``g`` at eigenvalue 1.

    Column j of the partition is rank((g-I)^{j-1}) - rank((g-I)^j).
    """
    d = len(g)
    N = minus_identity(g, F)
    ranks = [d]
    P = N
    while True:
        r = rank(P, F)
        ranks.append(r)
        if r == ranks[-2] or r == 0:
            break
        P = mat_mul(P, N, F)
    return Partition.from_columns(columns_from_ranks(ranks))


# ---------------------------------------------------------------------------
# batched, prime fields only


def batch_rank(A: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of square matrices (shape (N, d, d)) over F_p."""
    A = np.array(A, dtype=np.int64) % p
    N, d, _ = A.shape
    inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
    rk = np.zeros(N, dtype=np.int64)
    rows = np.arange(d)
    for c in range(d):
        mask = (A[:, :, c] != 0) & (rows[None, :] >= rk[:, None])
        idx = np.nonzero(mask.any(axis=1))[0]
        if idx.size == 0:
            continue
        piv = mask[idx].argmax(axis=1)
        r = rk[idx]
        top = A[idx, r].copy()
        A[idx, r] = A[idx, piv]
        A[idx, piv] = top
        scale = inv[A[idx, r, c]]
        A[idx, r] = (A[idx, r] * scale[:, None]) % p
        pivot_rows = A[idx, r]
        factors = A[idx, :, c].copy()
        factors[np.arange(idx.size), r] = 0
        A[idx] = (A[idx] - factors[:, :, None] * pivot_rows[:, None, :]) % p
        rk[idx] += 1
    return rk


def batch_jordan_columns(G: np.ndarray, p: int) -> list[tuple[int, ...]]:
    """Eigenvalue-1 column lengths for a stack of matrices over F_p."""
    G = np.asarray(G, dtype=np.int64)
    N_, d, _ = G.shape
    Nm = (G - np.eye(d, dtype=np.int64)[None]) % p
    ranks = [np.full(N_, d, dtype=np.int64)]
    P = Nm
    for _ in range(d):
        ranks.append(batch_rank(P, p))
        P = np.matmul(P, Nm) % p
    R = np.stack(ranks, axis=1)
    out = []
    for row in R.tolist():
        out.append(tuple(columns_from_ranks(row)))
    return out

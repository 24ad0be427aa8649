"""Total unimodularity at desk scale.

The verdict comes from Ghouila-Houri's characterisation (every row subset
has a signing whose sum is a 0/+-1 vector), enumerated over all sign
vectors of the shorter side.  When the verdict is negative a square
submatrix with determinant outside {-1, 0, 1} is searched for as the
witness.
"""

from itertools import combinations, product

import numpy as np

from .errors import CapacityError, InputError

SIGNING_CAP = 10
MINOR_CAP = 6


def check_matrix(M):
    rows = [tuple(int(v) for v in r) for r in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise InputError("ragged matrix")
    if any(v not in (-1, 0, 1) for r in rows for v in r):
        raise InputError("matrix entries must lie in {-1, 0, 1}")
    return rows


def incidence_matrix(d):
    """Node-arc incidence: +1 at the tail, -1 at the head."""
    M = [[0] * d.m for _ in range(d.n)]
    for a, (t, h) in enumerate(d.arcs):
        M[t][a] = 1
        M[h][a] = -1
    return tuple(tuple(r) for r in M)


def det(rows):
    """Integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in rows]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k]), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


def bad_minor(M, cap=MINOR_CAP):
    """``(rows, cols, det)`` of a square submatrix with |det| > 1, or None."""
    rows = check_matrix(M)
    n = len(rows)
    m = len(rows[0]) if rows else 0
    for size in range(2, min(n, m, cap) + 1):
        for R in combinations(range(n), size):
            for C in combinations(range(m), size):
                D = det([[rows[r][c] for c in C] for r in R])
                if abs(D) > 1:
                    return R, C, D
    return None


def ghouila_houri_failure(M, cap=SIGNING_CAP):
    """A row subset (of ``M`` or its transpose) with no admissible signing,
    as ``("rows" | "cols", indices)``; ``None`` means totally unimodular."""
    rows = check_matrix(M)
    if not rows or not rows[0]:
        return None
    A = np.array(rows, dtype=np.int64)
    side = "rows"
    if A.shape[0] > A.shape[1]:
        A, side = A.T, "cols"
    k = A.shape[0]
    if k > cap:
        raise CapacityError(f"TU check needs {k} <= {cap} on the shorter side")
    signs = np.array(list(product((-1, 0, 1), repeat=k)), dtype=np.int64)
    ok = np.all(np.abs(signs @ A) <= 1, axis=1)
    support = (signs != 0).astype(np.int64) @ (1 << np.arange(k, dtype=np.int64))
    good = np.zeros(1 << k, dtype=bool)
    good[support[ok]] = True
    if good.all():
        return None
    R = int(np.flatnonzero(~good)[0])
    return side, tuple(i for i in range(k) if R >> i & 1)


def is_totally_unimodular(M, cap=SIGNING_CAP):
    return ghouila_houri_failure(M, cap) is None

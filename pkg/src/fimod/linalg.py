"""Exact matrix algorithms: row reduction over fields, Smith normal form over Z."""

from __future__ import annotations

import numpy as np

from .rings import Ring, Integers


def rref(ring: Ring, a):
    """Reduced row echelon form.  Returns (R, pivot columns)."""
    a = np.array(a, dtype=ring.dtype, copy=True)
    m, n = a.shape
    piv = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        x = a[r, c]
        if x != 1:
            a[r] = ring.reduce(a[r] * ring.inv(x))
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col != 0)
        if rows.size:
            a[rows] = ring.reduce(a[rows] - np.outer(col[rows], a[r]))
        piv.append(c)
        r += 1
    return a, piv


def rank(ring: Ring, a) -> int:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return len(rref(ring, a)[1])


def nullspace(ring: Ring, a):
    """Columns spanning {x : a x = 0}."""
    m, n = a.shape
    r, piv = rref(ring, a)
    free = [c for c in range(n) if c not in set(piv)]
    out = ring.zeros(n, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, c in enumerate(piv):
            out[c, k] = ring.reduce(-r[i, f])
    return out


def solve(ring: Ring, a, b):
    """Some X with a X = b, or None."""
    m, n = a.shape
    k = b.shape[1]
    if m == 0:
        return ring.zeros(n, k)
    r, piv = rref(ring, np.hstack([a, b]))
    if piv and piv[-1] >= n:
        return None
    x = ring.zeros(n, k)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x


# ---------------------------------------------------------------- integers

def _snf(M, nrows, ncols, track_v=True):
    A = [[int(x) for x in row] for row in M]
    m, n = nrows, ncols
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track_v else []

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for row in Ui:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def row_sub(i, t, q):
        # row_i -= q row_t
        Ai, At = A[i], A[t]
        for j in range(n):
            if At[j]:
                Ai[j] -= q * At[j]
        Ui_, Ut = U[i], U[t]
        for j in range(m):
            if Ut[j]:
                Ui_[j] -= q * Ut[j]
        for row in Ui:
            if row[i]:
                row[t] += q * row[i]

    def col_sub(j, t, q):
        # col_j -= q col_t
        for row in A:
            if row[t]:
                row[j] -= q * row[t]
        for row in V:
            if row[t]:
                row[j] -= q * row[t]

    def row_add(t, b):
        At, Ab = A[t], A[b]
        for j in range(n):
            if Ab[j]:
                At[j] += Ab[j]
        Ut, Ub = U[t], U[b]
        for j in range(m):
            if Ub[j]:
                Ut[j] += Ub[j]
        for row in Ui:
            if row[t]:
                row[b] -= row[t]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_sub(i, t, A[i][t] // p)
                    if A[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    col_sub(j, t, A[t][j] // p)
                    if A[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    return U, Ui, A, V


def _obj(rows, r, c):
    out = np.empty((r, c), dtype=object)
    for i in range(r):
        for j in range(c):
            out[i, j] = rows[i][j]
    return out


def smith_full(M, track_v=True):
    """Smith normal form with the inverse of the row transform.

    Returns (U, Uinv, D, V) with U M V = D; V is None unless tracked."""
    M = np.asarray(M, dtype=object)
    m, n = M.shape
    U, Ui, D, V = _snf(M.tolist(), m, n, track_v)
    return _obj(U, m, m), _obj(Ui, m, m), _obj(D, m, n), _obj(V, n, n) if track_v else None


def distinct_columns(M):
    """M without zero columns and without repeats up to sign (same column span)."""
    M = np.asarray(M, dtype=object)
    seen, keep = set(), []
    for j in range(M.shape[1]):
        col = tuple(M[:, j].tolist())
        if not any(col):
            continue
        first = next(x for x in col if x)
        key = col if first > 0 else tuple(-x for x in col)
        if key not in seen:
            seen.add(key)
            keep.append(j)
    return M[:, keep]


def smith_normal_form(M):
    """Return (U, D, V): U, V unimodular, U M V = D diagonal, d1 | d2 | ..."""
    U, _, D, V = smith_full(M)
    return U, D, V


def diagonal(D):
    return [D[i, i] for i in range(min(D.shape))]


def int_rank(D) -> int:
    return sum(1 for d in diagonal(D) if d != 0)


def int_kernel(M):
    """Columns forming a Z-basis of {x in Z^n : M x = 0}."""
    M = np.asarray(M, dtype=object)
    m, n = M.shape
    if m == 0:
        return Integers().eye(n)
    _, _, D, V = smith_full(M)
    r = int_rank(D)
    return V[:, r:].copy()


def int_solve(M, Y):
    """Integer X with M X = Y, or None."""
    M = np.asarray(M, dtype=object)
    Y = np.asarray(Y, dtype=object)
    m, n = M.shape
    k = Y.shape[1]
    X = Integers().zeros(n, k)
    if m == 0:
        return X
    U, _, D, V = smith_full(M)
    d = diagonal(D)
    r = int_rank(D)
    UY = U @ Y
    Yp = Integers().zeros(n, k)
    for i in range(m):
        for c in range(k):
            v = UY[i, c]
            if i < r:
                if v % d[i]:
                    return None
                Yp[i, c] = v // d[i]
            elif v != 0:
                return None
    return V @ Yp

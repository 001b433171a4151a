"""Dense linear algebra written out in full, plus exact integer rank.

Everything here operates on plain numpy arrays at desk scale; the point
is auditability, not speed. Tolerances are relative to input magnitude.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotPositiveDefinite, RankDeficient

#: Pivot-column tolerance for lu_det, relative to maxabs of the input.
LU_ZERO_TOL = 1e-13

#: Rank threshold for lstsq, relative to the largest |R| diagonal.
LSTSQ_PIVOT_TOL = 1e-10


def lu_det(m) -> float:
    """Signed determinant via LU with partial pivoting.

    Returns exact 0.0 when a pivot column is entirely below
    LU_ZERO_TOL * maxabs(input).
    """
    a = np.array(m, dtype=float)
    if a.size == 0:
        return 1.0  # 0x0 determinant convention
    n, nc = a.shape
    if n != nc:
        raise ValueError(f"lu_det needs a square matrix, got {n}x{nc}")
    tol = LU_ZERO_TOL * np.max(np.abs(a))
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tol:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= a[k, k]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
    return det


def cholesky(m) -> np.ndarray:
    """Lower-triangular Cholesky factor; raises NotPositiveDefinite on
    a non-positive pivot."""
    a = np.array(m, dtype=float)
    n = a.shape[0]
    l = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - l[j, :j] @ l[j, :j]
        if d <= 0:
            raise NotPositiveDefinite(f"non-positive pivot {d} at index {j}")
        l[j, j] = math.sqrt(d)
        if j + 1 < n:
            l[j + 1:, j] = (a[j + 1:, j] - l[j + 1:, :j] @ l[j, :j]) / l[j, j]
    return l


def solve_spd(m, b) -> np.ndarray:
    """Solve M X = B for symmetric positive definite M via Cholesky."""
    l = cholesky(m)
    b = np.array(b, dtype=float)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    n, k = b.shape
    # forward then back substitution
    y = np.empty_like(b)
    for i in range(n):
        y[i] = (b[i] - l[i, :i] @ y[:i]) / l[i, i]
    x = np.empty_like(b)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - l[i + 1:, i] @ x[i + 1:]) / l[i, i]
    return x[:, 0] if squeeze else x


def lstsq(m, b) -> tuple[np.ndarray, float]:
    """Least squares min ||M x - b|| via Householder QR with column
    pivoting.

    Raises RankDeficient(rank, free_columns) when the numerical rank
    falls short of the column count; free_columns are the original
    column indices (0-based) beyond the detected rank.
    """
    a = np.array(m, dtype=float)
    rhs = np.array(b, dtype=float)
    nrows, ncols = a.shape
    if nrows < ncols:
        raise ValueError(f"lstsq needs rows >= cols, got {nrows}x{ncols}")
    piv = list(range(ncols))
    diag = np.empty(ncols)
    for k in range(ncols):
        norms = np.sqrt(np.sum(a[k:, k:] ** 2, axis=0))
        j = k + int(np.argmax(norms))
        if j != k:
            a[:, [k, j]] = a[:, [j, k]]
            piv[k], piv[j] = piv[j], piv[k]
        # Householder reflector annihilating a[k+1:, k]
        x = a[k:, k]
        alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn > 0:
            v /= vn
            a[k:, k:] -= 2.0 * np.outer(v, v @ a[k:, k:])
            rhs[k:] -= 2.0 * v * (v @ rhs[k:])
        diag[k] = a[k, k]
    threshold = LSTSQ_PIVOT_TOL * np.max(np.abs(diag)) if ncols else 0.0
    rank = 0
    while rank < ncols and abs(diag[rank]) > threshold:
        rank += 1
    if rank < ncols:
        raise RankDeficient(rank, piv[rank:])
    # back substitution on the permuted system
    xp = np.empty(ncols)
    for i in range(ncols - 1, -1, -1):
        xp[i] = (rhs[i] - a[i, i + 1:ncols] @ xp[i + 1:]) / a[i, i]
    x = np.empty(ncols)
    for k, col in enumerate(piv):
        x[col] = xp[k]
    residual_norm = float(np.linalg.norm(rhs[ncols:])) if nrows > ncols else 0.0
    return x, residual_norm


def integer_rank(m) -> int:
    """Exact rank over the rationals via fraction-free (Bareiss)
    elimination in Python integers. No floating point."""
    a = [[int(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rank = 0
    prev = 1
    col = 0
    while rank < nrows and col < ncols:
        piv_row = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv_row is None:
            col += 1
            continue
        if piv_row != rank:
            a[rank], a[piv_row] = a[piv_row], a[rank]
        pivot = a[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                a[i][j] = (pivot * a[i][j] - a[i][col] * a[rank][j]) // prev
            a[i][col] = 0
        prev = pivot
        rank += 1
        col += 1
    return rank


def format_matrix_text(m) -> str:
    """Matrix text format: `rows cols` header, then one row per line,
    17 significant digits."""
    a = np.atleast_2d(np.asarray(m, dtype=float))
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for row in a:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> np.ndarray:
    """Inverse of format_matrix_text."""
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix text needs a 'rows cols' header")
    try:
        nrows, ncols = int(tokens[0]), int(tokens[1])
        values = [float(t) for t in tokens[2:]]
    except ValueError as exc:
        raise ValueError(f"malformed matrix text: {exc}") from None
    if len(values) != nrows * ncols:
        raise ValueError(
            f"matrix text declares {nrows}x{ncols} but carries {len(values)} values"
        )
    return np.array(values).reshape(nrows, ncols)

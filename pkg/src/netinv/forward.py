"""Forward problem: DtN map via Schur complement, harmonic extension,
and signed subdeterminants of the DtN and Kirchhoff matrices.

Submatrix rows/columns are always taken in ascending index order; every
determinant sign in the package is relative to that one convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InteriorNotGrounded, NotPositiveDefinite
from .network import KirchhoffMatrix, Network, kirchhoff
from .numerics import lu_det, solve_spd

#: Floor for relative discrepancies, keeping exact analytic zeros from
#: dividing by zero.
TINY = 1e-300


@dataclass(frozen=True)
class DtNMap:
    """Boundary response matrix Lambda = A - B C^-1 B^T."""

    entries: np.ndarray

    @property
    def n_boundary(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BoundaryPair:
    """Equal-size boundary index subsets (P, Q), each strictly ascending.

    P and Q may intersect; shared vertices participate through the
    residual-set machinery of the path expansion.
    """

    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(i) for i in self.p))
        object.__setattr__(self, "q", tuple(int(i) for i in self.q))
        if len(self.p) != len(self.q):
            raise ValueError(f"|P| = {len(self.p)} != |Q| = {len(self.q)}")
        for name, idx in (("P", self.p), ("Q", self.q)):
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"{name} must be strictly ascending, got {idx}")
            if any(i < 1 for i in idx):
                raise ValueError(f"{name} indices must be >= 1, got {idx}")

    def validate_for(self, n_boundary: int):
        for name, idx in (("P", self.p), ("Q", self.q)):
            if any(i > n_boundary for i in idx):
                raise ValueError(f"{name} index out of boundary range 1..{n_boundary}: {idx}")


def dtn(net: Network) -> DtNMap:
    """DtN map of a network: the Schur complement of K onto the
    boundary block. With no interior vertices Lambda is K itself."""
    k = kirchhoff(net)
    if net.n_interior == 0:
        return DtNMap(k.entries.copy())
    a, b, c = k.block_a, k.block_b, k.block_c
    try:
        x = solve_spd(c, b.T)
    except NotPositiveDefinite as exc:
        raise InteriorNotGrounded(str(exc)) from exc
    lam = a - b @ x
    return DtNMap(lam)


def harmonic_extension(net: Network, u_boundary) -> np.ndarray:
    """Extend boundary potentials to the unique harmonic vector.

    Interior values solve C u_int = -B^T u_boundary, i.e. every
    interior vertex takes the conductivity-weighted average of its
    neighbors.
    """
    u_b = np.asarray(u_boundary, dtype=float)
    if u_b.shape != (net.n_boundary,):
        raise ValueError(f"expected {net.n_boundary} boundary values, got {u_b.shape}")
    if net.n_interior == 0:
        return u_b.copy()
    k = kirchhoff(net)
    try:
        u_int = solve_spd(k.block_c, -k.block_b.T @ u_b)
    except NotPositiveDefinite as exc:
        raise InteriorNotGrounded(str(exc)) from exc
    return np.concatenate([u_b, u_int])


def submatrix(m: np.ndarray, rows, cols) -> np.ndarray:
    """Submatrix on 1-based index sets, rows and columns ascending."""
    r = sorted(rows)
    c = sorted(cols)
    idx_r = [i - 1 for i in r]
    idx_c = [j - 1 for j in c]
    return m[np.ix_(idx_r, idx_c)] if idx_r and idx_c else np.zeros((len(idx_r), len(idx_c)))


def dtn_subdet(lam: DtNMap, pair: BoundaryPair) -> float:
    """Signed det Lambda(P, Q), ascending row/column convention."""
    pair.validate_for(lam.n_boundary)
    return lu_det(submatrix(lam.entries, pair.p, pair.q))


def kirchhoff_subdet(k: KirchhoffMatrix, rows, cols) -> float:
    """Signed det K(rows, cols); the empty submatrix has determinant 1."""
    if len(rows) != len(cols):
        raise ValueError(f"|rows| = {len(rows)} != |cols| = {len(cols)}")
    return lu_det(submatrix(k.entries, rows, cols))


def schur_identity_check(net: Network, pair: BoundaryPair) -> float:
    """Relative discrepancy of det Lambda(P,Q) * det K(I,I) against
    det K(P+I, Q+I). An exactly-zero reference with a nonzero test
    value reports 1.0."""
    k = kirchhoff(net)
    lam = dtn(net)
    interior = net.interior_vertices
    test = dtn_subdet(lam, pair) * kirchhoff_subdet(k, interior, interior)
    ref = kirchhoff_subdet(k, sorted(set(pair.p) | set(interior)), sorted(set(pair.q) | set(interior)))
    if ref == 0.0:
        return 0.0 if test == 0.0 else 1.0
    return abs(test - ref) / max(abs(ref), TINY)

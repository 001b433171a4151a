"""Log-linear inverse solver: collect admissible boundary pairs, build
the {1,0,-1} system in (log gamma_1..log gamma_m, log det K(I,I)),
certify its exact rank, and recover conductivities from a DtN map.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .errors import (
    AllRowsDegenerate,
    InconsistentDataWarning,
    NotSparseDifference,
    RankDeficient,
    RoundTripFailure,
)
from .forward import BoundaryPair, DtNMap, dtn, dtn_subdet
from .network import Network
from .numerics import integer_rank, lstsq
from .paths import AdmissibleRow, is_log_linear_admissible

#: Least-squares residual beyond this multiple of ||rhs|| flags the
#: input as not an exact DtN map of the topology.
INCONSISTENT_RTOL = 1e-6

#: Round-trip acceptance threshold, relative to maxabs of the given map.
ROUNDTRIP_RTOL = 1e-6


@dataclass(frozen=True)
class LogLinearSystem:
    """Integer-coefficient system over (log gamma_1..log gamma_m
    [, log det K(I,I)]) with rhs log|det Lambda(P,Q)|.

    The log-det column is present only when the network has interior
    vertices (det of the empty interior block is 1, so its log is 0 and
    the column is dropped).
    """

    coeffs: tuple[tuple[int, ...], ...]
    rhs: tuple[float, ...]
    provenance: tuple[BoundaryPair, ...]
    n_edges: int
    has_logdet_column: bool
    dropped: tuple[str, ...] = ()

    @property
    def n_unknowns(self) -> int:
        return self.n_edges + (1 if self.has_logdet_column else 0)

    @property
    def n_rows(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class RecoveryReport:
    recovered_gammas: tuple[float, ...]
    logdet_interior: float
    residual_norm: float
    rank: int
    unresolved_edges: tuple[int, ...]
    roundtrip_error: float


def _candidate_pairs(n_boundary: int, max_pair_size: int) -> Iterator[BoundaryPair]:
    """Pairs in order of increasing |P| then lexicographic, with the
    symmetric duplicate (Q,P) of each (P,Q) skipped (Lambda is
    symmetric, so both give the same determinant)."""
    indices = range(1, n_boundary + 1)
    for size in range(1, max_pair_size + 1):
        subsets = list(combinations(indices, size))
        for p in subsets:
            for q in subsets:
                if q < p:
                    continue  # (q, p) already visited as (p, q)
                yield BoundaryPair(p, q)


def enumerate_admissible_pairs(
    net: Network,
    max_pair_size: Optional[int] = None,
    stop_at_full_rank: bool = False,
) -> list[AdmissibleRow]:
    """Scan boundary pairs for log-linear admissibility.

    Admissibility depends only on the topology, never on the gamma
    values. With stop_at_full_rank the scan halts as soon as the
    collected rows reach exact rank m (+1 with interior vertices).
    """
    if max_pair_size is None:
        max_pair_size = net.n_boundary
    max_pair_size = min(max_pair_size, net.n_boundary)
    target = net.n_edges + (1 if net.n_interior else 0)
    rows: list[AdmissibleRow] = []
    for pair in _candidate_pairs(net.n_boundary, max_pair_size):
        row = is_log_linear_admissible(net, pair)
        if row is None:
            continue
        rows.append(row)
        if stop_at_full_rank:
            coeffs = [_coefficient_row(r, net.n_edges, net.n_interior > 0) for r in rows]
            if integer_rank(coeffs) >= target:
                break
    return rows


def _coefficient_row(row: AdmissibleRow, n_edges: int, has_logdet: bool) -> list[int]:
    coeffs = [0] * (n_edges + (1 if has_logdet else 0))
    for eid in row.edge_ids:
        coeffs[eid - 1] = 1
    if has_logdet:
        coeffs[-1] = -1
    return coeffs


def build_system(
    rows: list[AdmissibleRow], lam: DtNMap, n_edges: int, n_interior: int
) -> LogLinearSystem:
    """Evaluate rhs values log|det Lambda(P,Q)| for admissible rows.

    Rows whose determinant underflows to zero, or whose observed sign
    contradicts the sign predicted by the path system (a near-zero
    determinant flipped by roundoff), are dropped with a warning
    record.
    """
    has_logdet = n_interior > 0
    coeffs: list[tuple[int, ...]] = []
    rhs: list[float] = []
    provenance: list[BoundaryPair] = []
    dropped: list[str] = []
    for row in rows:
        det = dtn_subdet(lam, row.pair)
        if det == 0.0:
            dropped.append(f"pair {row.pair.p}->{row.pair.q}: zero determinant")
            continue
        if (det > 0) != (row.sign > 0):
            dropped.append(
                f"pair {row.pair.p}->{row.pair.q}: sign {'+' if det > 0 else '-'} "
                f"contradicts predicted {'+' if row.sign > 0 else '-'}"
            )
            continue
        coeffs.append(tuple(_coefficient_row(row, n_edges, has_logdet)))
        rhs.append(math.log(abs(det)))
        provenance.append(row.pair)
    if rows and not coeffs:
        raise AllRowsDegenerate("; ".join(dropped))
    return LogLinearSystem(
        tuple(coeffs), tuple(rhs), tuple(provenance), n_edges, has_logdet, tuple(dropped)
    )


def system_rank(sys: LogLinearSystem) -> int:
    """Exact rank of the coefficient matrix over the rationals."""
    if not sys.coeffs:
        return 0
    return integer_rank(sys.coeffs)


def _exact_nullspace(coeffs, n_cols) -> list[list[Fraction]]:
    """Null-space basis of an integer matrix by rational RREF."""
    m = [[Fraction(x) for x in row] for row in coeffs]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -m[row_idx][fc]
        basis.append(vec)
    return basis


def unresolved_edges(sys: LogLinearSystem) -> tuple[int, ...]:
    """Edge ids whose unit directions meet the coefficient null space:
    exactly the conductivities the system cannot pin down."""
    if not sys.coeffs:
        return tuple(range(1, sys.n_edges + 1))
    basis = _exact_nullspace(sys.coeffs, sys.n_unknowns)
    bad = {
        j + 1
        for vec in basis
        for j in range(sys.n_edges)
        if vec[j] != 0
    }
    return tuple(sorted(bad))


def solve_system(sys: LogLinearSystem) -> tuple[np.ndarray, float, float]:
    """Least-squares solve; returns (log gammas, log det K(I,I),
    residual norm). Raises RankDeficient with the unresolved edge ids
    when the exact rank is below the unknown count."""
    if sys.n_rows == 0:
        raise AllRowsDegenerate("no rows to solve")
    rank = system_rank(sys)
    if rank < sys.n_unknowns:
        raise RankDeficient(rank, unresolved_edges(sys))
    a = np.array(sys.coeffs, dtype=float)
    b = np.array(sys.rhs)
    if a.shape[0] < a.shape[1]:  # full rank yet fewer rows cannot happen
        raise RankDeficient(rank, ())
    x, residual_norm = lstsq(a, b)
    rhs_norm = float(np.linalg.norm(b))
    if residual_norm > INCONSISTENT_RTOL * max(rhs_norm, 1.0):
        warnings.warn(
            f"least-squares residual {residual_norm:.3e} vs ||rhs|| {rhs_norm:.3e}: "
            "data is not an exact DtN map of this topology",
            InconsistentDataWarning,
            stacklevel=2,
        )
    loggammas = x[: sys.n_edges]
    logdet = float(x[sys.n_edges]) if sys.has_logdet_column else 0.0
    return loggammas, logdet, residual_norm


def recover(
    topology: Network,
    lam: DtNMap,
    max_pair_size: Optional[int] = None,
    stop_at_full_rank: bool = True,
) -> RecoveryReport:
    """Full pipeline: admissible pairs on the topology (placeholder
    gammas ignored), log-linear system from the given DtN map, solve,
    exponentiate, verify by recomputing the forward map."""
    if lam.n_boundary != topology.n_boundary:
        raise ValueError(
            f"DtN map is {lam.n_boundary}x{lam.n_boundary} but the topology has "
            f"{topology.n_boundary} boundary vertices"
        )
    template = topology.with_gammas([1.0] * topology.n_edges)
    rows = enumerate_admissible_pairs(template, max_pair_size, stop_at_full_rank)
    sys = build_system(rows, lam, template.n_edges, template.n_interior)
    loggammas, logdet, residual_norm = solve_system(sys)
    gammas = tuple(math.exp(g) for g in loggammas)
    recovered = topology.with_gammas(gammas)
    lam_back = dtn(recovered)
    roundtrip_error = float(np.max(np.abs(lam_back.entries - lam.entries)))
    threshold = ROUNDTRIP_RTOL * float(np.max(np.abs(lam.entries)))
    if roundtrip_error > threshold:
        raise RoundTripFailure(roundtrip_error, threshold)
    return RecoveryReport(
        recovered_gammas=gammas,
        logdet_interior=logdet,
        residual_norm=residual_norm,
        rank=system_rank(sys),
        unresolved_edges=(),
        roundtrip_error=roundtrip_error,
    )


def difference_rows(sys: LogLinearSystem, i: int, j: int) -> tuple[tuple[int, ...], float]:
    """Coefficient-wise difference of rows i and j with rhs difference;
    the log-det columns cancel. Raises NotSparseDifference if any
    coefficient leaves {-1, 0, 1}."""
    row = tuple(a - b for a, b in zip(sys.coeffs[i], sys.coeffs[j]))
    if any(c not in (-1, 0, 1) for c in row):
        raise NotSparseDifference(f"difference of rows {i} and {j} leaves {{-1,0,1}}: {row}")
    return row, sys.rhs[i] - sys.rhs[j]

"""Brute-force reference implementations for the test suite only:
permutation-expansion determinants, exhaustive path-system search, and
seeded random network generation.

Nothing here shares determinant or path-walking code with the modules
it checks; independence is the point. Factorial cost is fine, size caps
are hard errors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

import networkx as nx

from .errors import NetworkError
from .network import Edge, Network
from .paths import PathSystem


def perm_det(m) -> float:
    """Determinant by summing over all n! permutations in lexicographic
    order. n <= 8 only."""
    rows = [list(map(float, row)) for row in m]
    n = len(rows)
    if n == 0:
        return 1.0
    if any(len(row) != n for row in rows):
        raise ValueError("perm_det needs a square matrix")
    if n > 8:
        raise ValueError(f"perm_det capped at 8x8, got {n}x{n}")
    total = 0.0
    for perm, sign in _signed_permutations(n):
        prod = sign
        for i, j in enumerate(perm):
            prod *= rows[i][j]
        total += prod
    return total


@lru_cache(maxsize=None)
def _signed_permutations(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((perm, _parity(perm)) for perm in permutations(range(n)))


def _parity(perm) -> int:
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def exhaustive_path_systems(net: Network, pair) -> list[PathSystem]:
    """All vertex-disjoint path systems for a pair, found by crossing
    per-endpoint simple-path lists (networkx) over every endpoint
    bijection and filtering for disjointness. Capped at 14 vertices."""
    if net.n_vertices > 14:
        raise ValueError(f"exhaustive search capped at 14 vertices, got {net.n_vertices}")
    pair.validate_for(net.n_boundary)
    p_set, q_set = set(pair.p), set(pair.q)
    sources = sorted(p_set - q_set)
    sinks = sorted(q_set - p_set)
    allowed = set(net.interior_vertices) | (p_set & q_set)
    if not sources:
        return [PathSystem((), tuple(sorted(allowed)))]
    g = nx.Graph()
    g.add_nodes_from(range(1, net.n_vertices + 1))
    g.add_edges_from((e.u, e.v) for e in net.edges)
    systems: list[PathSystem] = []
    for assignment in permutations(sinks):
        choices = []
        for s, t in zip(sources, assignment):
            sub = g.subgraph(allowed | {s, t})
            choices.append([tuple(p) for p in nx.all_simple_paths(sub, s, t)])
        for combo in product(*choices):
            seen: set[int] = set()
            ok = True
            for path in combo:
                if seen.intersection(path):
                    ok = False
                    break
                seen.update(path)
            if ok:
                residual = tuple(sorted(allowed - seen))
                systems.append(PathSystem(tuple(combo), residual))
    systems.sort(key=lambda s: s.paths)
    return systems


@dataclass(frozen=True)
class RandomNetSpec:
    """Parameters for seeded random network generation; gamma is drawn
    log-uniformly so conditioning varies across trials."""

    n_boundary: tuple[int, int] = (3, 6)
    n_interior: tuple[int, int] = (1, 4)
    edge_prob: float = 0.5
    gamma_range: tuple[float, float] = (0.1, 10.0)
    seed: int = 0
    require_connected: bool = False

    def __post_init__(self):
        if self.gamma_range[0] <= 0:
            raise ValueError("gamma range must be positive")


MAX_RETRIES = 1000


def random_network(spec: RandomNetSpec) -> Network:
    """Deterministic-for-seed random network satisfying all Network
    invariants (resampled on violation, bounded retries)."""
    rng = random.Random(spec.seed)
    log_lo, log_hi = math.log(spec.gamma_range[0]), math.log(spec.gamma_range[1])
    for _ in range(MAX_RETRIES):
        nb = rng.randint(*spec.n_boundary)
        ni = rng.randint(*spec.n_interior)
        n = nb + ni
        edges = []
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                if rng.random() < spec.edge_prob:
                    gamma = math.exp(rng.uniform(log_lo, log_hi))
                    edges.append(Edge(len(edges) + 1, u, v, gamma))
        try:
            net = Network(nb, ni, tuple(edges))
        except NetworkError:
            continue
        if spec.require_connected and not _is_connected(net):
            continue
        return net
    raise NetworkError(f"no valid network after {MAX_RETRIES} draws for spec {spec}")


def _is_connected(net: Network) -> bool:
    if net.n_vertices == 0:
        return True
    adj = net.adjacency()
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == net.n_vertices

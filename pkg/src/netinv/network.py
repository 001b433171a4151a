"""Resistor network data model, Kirchhoff matrix assembly, the 8+4
lattice fixture, and the line-based text format.

Vertices are 1-based: boundary vertices are 1..n_boundary, interior
vertices follow. Edge identity is the input ordering (edge_id 1..m), so
recovered conductivities align positionally with the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NetworkError, NetworkFormatError


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    gamma: float

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


@dataclass(frozen=True)
class Network:
    """Vertex-partitioned weighted graph with positive conductivities.

    Immutable after construction; all invariants are enforced here so
    downstream operations never re-validate.
    """

    n_boundary: int
    n_interior: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        n = self.n_boundary + self.n_interior
        if self.n_boundary < 0 or self.n_interior < 0:
            raise NetworkError("vertex counts must be non-negative")
        seen_pairs = set()
        for k, e in enumerate(self.edges, start=1):
            if e.id != k:
                raise NetworkError(f"edge ids must be 1..m consecutive, got {e.id} at position {k}")
            if not (1 <= e.u <= n and 1 <= e.v <= n):
                raise NetworkError(f"edge {e.id}: vertex out of range 1..{n}")
            if e.u == e.v:
                raise NetworkError(f"edge {e.id}: self-loop at vertex {e.u}")
            if not (math.isfinite(e.gamma) and e.gamma > 0):
                raise NetworkError(f"edge {e.id}: conductivity must be finite and positive, got {e.gamma}")
            if e.pair in seen_pairs:
                raise NetworkError(f"edge {e.id}: parallel edge on vertex pair {e.pair}")
            seen_pairs.add(e.pair)
        self._check_interior_grounded()

    def _check_interior_grounded(self):
        # every connected component with an interior vertex needs a boundary vertex
        n = self.n_vertices
        adj = self.adjacency()
        seen = [False] * (n + 1)
        for start in range(self.n_boundary + 1, n + 1):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            component = []
            while stack:
                v = stack.pop()
                component.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            if all(v > self.n_boundary for v in component):
                raise NetworkError(
                    f"interior vertex {start} lies in a component with no boundary vertex"
                )

    @property
    def n_vertices(self) -> int:
        return self.n_boundary + self.n_interior

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.n_boundary + 1, self.n_vertices + 1))

    def adjacency(self) -> dict[int, list[int]]:
        """Neighbor lists keyed by vertex, neighbors ascending."""
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n_vertices + 1)}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        for v in adj:
            adj[v].sort()
        return adj

    def edge_lookup(self) -> dict[tuple[int, int], Edge]:
        return {e.pair: e for e in self.edges}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in (e.u, e.v))

    def with_gammas(self, gammas) -> "Network":
        """Same topology with replaced conductivities (by edge id order)."""
        if len(gammas) != self.n_edges:
            raise NetworkError(f"expected {self.n_edges} conductivities, got {len(gammas)}")
        new_edges = tuple(
            Edge(e.id, e.u, e.v, float(g)) for e, g in zip(self.edges, gammas)
        )
        return Network(self.n_boundary, self.n_interior, new_edges)


@dataclass(frozen=True)
class KirchhoffMatrix:
    """Weighted graph Laplacian with the boundary/interior block split.

    Off-diagonal (i,j) is -gamma_ij when edge {i,j} exists, diagonals
    make every row sum exactly zero.
    """

    entries: np.ndarray
    n_boundary: int

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def block_a(self) -> np.ndarray:
        b = self.n_boundary
        return self.entries[:b, :b]

    @property
    def block_b(self) -> np.ndarray:
        b = self.n_boundary
        return self.entries[:b, b:]

    @property
    def block_c(self) -> np.ndarray:
        b = self.n_boundary
        return self.entries[b:, b:]


def kirchhoff(net: Network) -> KirchhoffMatrix:
    """Assemble the Kirchhoff matrix of a network."""
    n = net.n_vertices
    k = np.zeros((n, n))
    for e in net.edges:
        i, j = e.u - 1, e.v - 1
        k[i, j] -= e.gamma
        k[j, i] -= e.gamma
        k[i, i] += e.gamma
        k[j, j] += e.gamma
    k.flags.writeable = False
    return KirchhoffMatrix(k, net.n_boundary)


# Lattice with 8 boundary and 4 interior vertices; edge order matches
# the conductivity numbering gamma_1..gamma_12.
LATTICE_EDGE_PAIRS: tuple[tuple[int, int], ...] = (
    (1, 9),
    (9, 12),
    (6, 12),
    (2, 10),
    (10, 11),
    (5, 11),
    (8, 9),
    (9, 10),
    (3, 10),
    (7, 12),
    (11, 12),
    (4, 11),
)


def lattice_fixture(gammas) -> Network:
    """The 8-boundary / 4-interior / 12-edge lattice used throughout
    the test fixtures. `gammas` supplies gamma_1..gamma_12 in order."""
    gammas = [float(g) for g in gammas]
    if len(gammas) != 12:
        raise NetworkError(f"lattice fixture needs 12 conductivities, got {len(gammas)}")
    for i, g in enumerate(gammas, start=1):
        if not (math.isfinite(g) and g > 0):
            raise NetworkError(f"conductivity {i} must be finite and positive, got {g}")
    edges = tuple(
        Edge(i, u, v, g)
        for i, ((u, v), g) in enumerate(zip(LATTICE_EDGE_PAIRS, gammas), start=1)
    )
    return Network(n_boundary=8, n_interior=4, edges=edges)


def parse_network(text: str) -> Network:
    """Parse the line-based network format.

    Format: optional `# comment` and blank lines anywhere; `boundary <n>`
    then `interior <n>` (each exactly once, in that order); then one
    `edge <u> <v> <gamma>` per edge.
    """
    n_boundary = None
    n_interior = None
    edges: list[Edge] = []
    seen_pairs: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        keyword = fields[0]
        if keyword == "boundary":
            if n_boundary is not None:
                raise NetworkFormatError("duplicate 'boundary' line", line_no)
            n_boundary = _parse_count(fields, line_no)
        elif keyword == "interior":
            if n_boundary is None:
                raise NetworkFormatError("'interior' before 'boundary'", line_no)
            if n_interior is not None:
                raise NetworkFormatError("duplicate 'interior' line", line_no)
            n_interior = _parse_count(fields, line_no)
        elif keyword == "edge":
            if n_boundary is None or n_interior is None:
                raise NetworkFormatError("'edge' before 'boundary'/'interior' header", line_no)
            if len(fields) != 4:
                raise NetworkFormatError("expected 'edge <u> <v> <gamma>'", line_no)
            try:
                u, v = int(fields[1]), int(fields[2])
                gamma = float(fields[3])
            except ValueError:
                raise NetworkFormatError(f"cannot parse edge fields {fields[1:]!r}", line_no) from None
            n = n_boundary + n_interior
            if not (1 <= u <= n and 1 <= v <= n):
                raise NetworkFormatError(f"vertex out of range 1..{n}", line_no)
            if u == v:
                raise NetworkFormatError(f"self-loop at vertex {u}", line_no)
            if not (math.isfinite(gamma) and gamma > 0):
                raise NetworkFormatError(f"conductivity must be finite and positive, got {gamma}", line_no)
            pair = (u, v) if u < v else (v, u)
            if pair in seen_pairs:
                raise NetworkFormatError(f"parallel edge on vertex pair {pair}", line_no)
            seen_pairs.add(pair)
            edges.append(Edge(len(edges) + 1, u, v, gamma))
        else:
            raise NetworkFormatError(f"unknown keyword {keyword!r}", line_no)
    if n_boundary is None or n_interior is None:
        raise NetworkFormatError("missing 'boundary'/'interior' header")
    return Network(n_boundary, n_interior, tuple(edges))


def _parse_count(fields, line_no):
    if len(fields) != 2:
        raise NetworkFormatError(f"expected '{fields[0]} <n>'", line_no)
    try:
        n = int(fields[1])
    except ValueError:
        raise NetworkFormatError(f"cannot parse count {fields[1]!r}", line_no) from None
    if n < 0:
        raise NetworkFormatError("count must be non-negative", line_no)
    return n


def serialize_network(net: Network) -> str:
    """Render a network in the text format; parse(serialize(net)) == net."""
    lines = [f"boundary {net.n_boundary}", f"interior {net.n_interior}"]
    for e in net.edges:
        lines.append(f"edge {e.u} {e.v} {e.gamma:.17g}")
    return "\n".join(lines) + "\n"

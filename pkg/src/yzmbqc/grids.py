"""Deterministic grid and cluster generators.

All generators number nodes row-major starting at 0, inputs first where the
construction has inputs; each docstring records the numbering so drawings map
to ids reproducibly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph, GraphError, OpenGraph


def _require_positive(**dims: int) -> None:
    for name, value in dims.items():
        if value < 1:
            raise GraphError(f"dimension {name} must be positive, got {value}")


def rectangular_grid(rows: int, cols: int) -> OpenGraph:
    """Square-lattice cluster; node (r,c) has id r*cols + c; O = all nodes."""
    _require_positive(rows=rows, cols=cols)
    nodes = range(rows * cols)
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((r * cols + c, r * cols + c + 1))
            if r + 1 < rows:
                edges.append((r * cols + c, (r + 1) * cols + c))
    return OpenGraph.make(Graph.from_iterables(nodes, edges), (), nodes)


def hexagonal_grid(rows: int, cols: int) -> OpenGraph:
    """Brick-wall hexagonal lattice: all horizontal edges, verticals where
    r+c is even. Bipartite with color classes given by the parity of r+c.
    Node (r,c) has id r*cols + c; O = all nodes."""
    _require_positive(rows=rows, cols=cols)
    nodes = range(rows * cols)
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((r * cols + c, r * cols + c + 1))
            if r + 1 < rows and (r + c) % 2 == 0:
                edges.append((r * cols + c, (r + 1) * cols + c))
    return OpenGraph.make(Graph.from_iterables(nodes, edges), (), nodes)


def triangular_grid(rows: int, cols: int) -> OpenGraph:
    """Staggered triangular lattice; node (r,k) has id r*cols + k.

    Row edges (r,k)-(r,k+1); between rows, even r connects k -> {k, k+1} and
    odd r connects k -> {k-1, k}. This is exactly the survivor graph of a
    hexagonal grid after one sublattice is measured in the Y basis."""
    _require_positive(rows=rows, cols=cols)
    nodes = range(rows * cols)
    edges = []
    for r in range(rows):
        for k in range(cols):
            if k + 1 < cols:
                edges.append((r * cols + k, r * cols + k + 1))
            if r + 1 < rows:
                targets = (k, k + 1) if r % 2 == 0 else (k - 1, k)
                for k2 in targets:
                    if 0 <= k2 < cols:
                        edges.append((r * cols + k, (r + 1) * cols + k2))
    return OpenGraph.make(Graph.from_iterables(nodes, edges), (), nodes)


@dataclass(frozen=True)
class TriangularPatch:
    """Triangular segment of a cluster state that reduces to the pairwise-
    parity (LHZ) triangle when its sublattice is measured in the X basis.

    Row r (r = 0 bottom) spans grid columns r .. 2(n-1)-r. Ids are row-major
    from the bottom row. Base qubits sit at (0, even c); the measured
    sublattice is every node with r+c odd; all other r+c even nodes are the
    parity qubits. Vertical edges exist everywhere except between the two
    bottom rows at even columns ("every other vertical edge in the last row
    missing"), which gives every sublattice node a north neighbor.
    """

    n: int
    open_graph: OpenGraph
    position: dict[int, tuple[int, int]] = field(repr=False)
    node_at: dict[tuple[int, int], int] = field(repr=False)

    @property
    def base_nodes(self) -> tuple[int, ...]:
        return tuple(self.node_at[(0, 2 * k)] for k in range(self.n))

    @property
    def sublattice(self) -> tuple[int, ...]:
        return tuple(
            sorted(node for node, (r, c) in self.position.items() if (r + c) % 2 == 1)
        )

    @property
    def parity_nodes(self) -> tuple[int, ...]:
        bases = set(self.base_nodes)
        return tuple(
            sorted(
                node
                for node, (r, c) in self.position.items()
                if (r + c) % 2 == 0 and node not in bases
            )
        )

    def north(self, node: int) -> int:
        r, c = self.position[node]
        return self.node_at[(r + 1, c)]

    def parity_pair(self, node: int) -> tuple[int, int]:
        """Which two base indices (0-based) a parity node addresses."""
        r, c = self.position[node]
        return ((c - r) // 2, (c + r) // 2)


def triangular_patch(n: int) -> TriangularPatch:
    """Build the n-base triangular cluster segment (n*n qubits, I = O = bases)."""
    if n < 1:
        raise GraphError(f"need n >= 1 bases, got {n}")
    position: dict[int, tuple[int, int]] = {}
    node_at: dict[tuple[int, int], int] = {}
    next_id = 0
    for r in range(n):
        for c in range(r, 2 * (n - 1) - r + 1):
            position[next_id] = (r, c)
            node_at[(r, c)] = next_id
            next_id += 1
    edges = []
    for (r, c), node in node_at.items():
        if (r, c + 1) in node_at:
            edges.append((node, node_at[(r, c + 1)]))
        if (r + 1, c) in node_at:
            if r == 0 and c % 2 == 0:
                continue  # the intentionally missing verticals in the last row
            edges.append((node, node_at[(r + 1, c)]))
    graph = Graph.from_iterables(range(next_id), edges)
    bases = tuple(node_at[(0, 2 * k)] for k in range(n))
    og = OpenGraph.make(graph, bases, bases)
    return TriangularPatch(n, og, position, node_at)


def lhz_triangle(n: int) -> tuple[OpenGraph, dict[tuple[int, int], int]]:
    """Pairwise-parity triangle: bases 0..n-1 (I = O), one parity qubit per
    base pair (i, j), i < j, ordered lexicographically, adjacent to exactly
    its two bases. Returns (open graph, pair -> parity node id)."""
    if n < 1:
        raise GraphError(f"need n >= 1 bases, got {n}")
    bases = list(range(n))
    parity_of: dict[tuple[int, int], int] = {}
    edges = []
    next_id = n
    for i in range(n):
        for j in range(i + 1, n):
            parity_of[(i, j)] = next_id
            edges.append((next_id, i))
            edges.append((next_id, j))
            next_id += 1
    graph = Graph.from_iterables(range(next_id), edges)
    return OpenGraph.make(graph, bases, bases), parity_of


@dataclass(frozen=True)
class BeveledCluster:
    """Beveled cluster: the triangular patch (its base qubits are the
    inputs) plus, under every base, a two-qubit chain base - constraint -
    output. The constraint qubits join the X sublattice; X-measuring the
    sublattice contracts each chain into a base-output edge and reduces the
    patch to the pairwise-parity triangle, so "each input has an extra
    neighbor, the corresponding output".

    Ids: patch nodes 0..n^2-1 row-major (bases at row 0, even columns),
    constraints n^2..n^2+n-1, outputs last. n^2 + 2n qubits in total.
    """

    n: int
    open_graph: OpenGraph
    patch: TriangularPatch
    inputs: tuple[int, ...]
    constraints: tuple[int, ...]
    outputs: tuple[int, ...]

    @property
    def sublattice(self) -> tuple[int, ...]:
        """The X-measured set: the patch sublattice plus the constraints."""
        return tuple(sorted(self.patch.sublattice + self.constraints))

    @property
    def parity_nodes(self) -> tuple[int, ...]:
        return self.patch.parity_nodes


def beveled_cluster(n: int) -> BeveledCluster:
    if n < 1:
        raise GraphError(f"need n >= 1 inputs, got {n}")
    patch = triangular_patch(n)
    bases = patch.base_nodes
    constraints = tuple(range(n * n, n * n + n))
    outputs = tuple(range(n * n + n, n * n + 2 * n))
    edges = list(patch.open_graph.graph.edges)
    for k in range(n):
        edges.append((bases[k], constraints[k]))
        edges.append((constraints[k], outputs[k]))
    graph = Graph.from_iterables(range(n * n + 2 * n), edges)
    og = OpenGraph.make(graph, bases, outputs)
    return BeveledCluster(n, og, patch, bases, constraints, outputs)


@dataclass(frozen=True)
class UnitCellSheet:
    """Tessellation of the universal YZ unit cell.

    ``wires`` logical rows by ``steps`` columns of cells. Carrier qubits
    c(r,t), t = 0..steps, thread each wire: c(r,0) are the inputs, c(r,steps)
    the outputs, and cell (r,t) has q1 = c(r,t), q6 = c(r,t+1),
    q7 = c(r+1,t+1). Per cell there are fresh q2, q3, q4, and (except on the
    bottom wire) the bond qubit q5 joining q6 to q7. In-cell edges:
    q1-q3, q2-q3, q3-q6, q4-q6, q5-q6, q5-q7.
    """

    wires: int
    steps: int
    open_graph: OpenGraph
    carrier: dict[tuple[int, int], int]
    q2: dict[tuple[int, int], int]
    q3: dict[tuple[int, int], int]
    q4: dict[tuple[int, int], int]
    q5: dict[tuple[int, int], int]


def unit_cell_sheet(wires: int, steps: int) -> UnitCellSheet:
    _require_positive(wires=wires, steps=steps)
    carrier: dict[tuple[int, int], int] = {}
    q2: dict[tuple[int, int], int] = {}
    q3: dict[tuple[int, int], int] = {}
    q4: dict[tuple[int, int], int] = {}
    q5: dict[tuple[int, int], int] = {}
    next_id = 0
    for r in range(wires):
        carrier[(r, 0)] = next_id
        next_id += 1
    edges: list[tuple[int, int]] = []
    for t in range(steps):
        for r in range(wires):
            q2[(r, t)] = next_id
            q3[(r, t)] = next_id + 1
            q4[(r, t)] = next_id + 2
            next_id += 3
        for r in range(wires):
            carrier[(r, t + 1)] = next_id
            next_id += 1
        for r in range(wires - 1):
            q5[(r, t)] = next_id
            next_id += 1
        for r in range(wires):
            c_in, c_out = carrier[(r, t)], carrier[(r, t + 1)]
            edges.append((c_in, q3[(r, t)]))
            edges.append((q2[(r, t)], q3[(r, t)]))
            edges.append((q3[(r, t)], c_out))
            edges.append((q4[(r, t)], c_out))
            if r < wires - 1:
                edges.append((q5[(r, t)], c_out))
                edges.append((q5[(r, t)], carrier[(r + 1, t + 1)]))
    graph = Graph.from_iterables(range(next_id), edges)
    og = OpenGraph.make(
        graph,
        tuple(carrier[(r, 0)] for r in range(wires)),
        tuple(carrier[(r, steps)] for r in range(wires)),
    )
    return UnitCellSheet(wires, steps, og, carrier, q2, q3, q4, q5)


def generate_grid(kind: str, *dims: int) -> OpenGraph:
    """Uniform entry point used by the CLI.

    kinds: rectangular(rows, cols), triangular(rows, cols),
    hexagonal(rows, cols), beveled_cluster(n), lhz_triangle_patch(n),
    unit_cell_sheet(wires, steps).
    """
    builders = {
        "rectangular": lambda: rectangular_grid(*dims),
        "triangular": lambda: triangular_grid(*dims),
        "hexagonal": lambda: hexagonal_grid(*dims),
        "beveled_cluster": lambda: beveled_cluster(*dims).open_graph,
        "lhz_triangle_patch": lambda: triangular_patch(*dims).open_graph,
        "unit_cell_sheet": lambda: unit_cell_sheet(*dims).open_graph,
    }
    if kind not in builders:
        raise GraphError(f"unknown grid kind {kind!r}; choose from {sorted(builders)}")
    return builders[kind]()

"""Graphs, open graphs and measurement labels.

Node ids are small non-negative integers. Graphs are simple (no loops, no
multi-edges) and immutable; all operations return new values. An open graph
additionally designates input and output node sets, and a labeled open graph
assigns a measurement plane or Pauli axis to every non-output node.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

TWO_PI = 2.0 * math.pi


class GraphError(ValueError):
    """Raised for malformed graphs, labels or node references."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on integer node ids."""

    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]
    _adj: dict[int, frozenset[int]] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    @staticmethod
    def from_iterables(nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> Graph:
        node_set = frozenset(int(n) for n in nodes)
        edge_set = frozenset(_norm_edge(int(u), int(v)) for u, v in edges)
        for u, v in edge_set:
            if u not in node_set or v not in node_set:
                raise GraphError(f"edge ({u},{v}) references unknown node")
        if any(n < 0 for n in node_set):
            raise GraphError("node ids must be non-negative")
        return Graph(node_set, edge_set)

    def __post_init__(self) -> None:
        adj: dict[int, set[int]] = {n: set() for n in self.nodes}
        for u, v in self.edges:
            if u not in adj or v not in adj:
                raise GraphError(f"edge ({u},{v}) references unknown node")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {n: frozenset(s) for n, s in adj.items()})

    @property
    def sorted_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.nodes))

    def neighbors(self, u: int) -> frozenset[int]:
        try:
            return self._adj[u]
        except KeyError:
            raise GraphError(f"unknown node {u}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def without_node(self, u: int) -> Graph:
        if u not in self.nodes:
            raise GraphError(f"unknown node {u}")
        return Graph(
            self.nodes - {u},
            frozenset(e for e in self.edges if u not in e),
        )

    def induced_subgraph(self, keep: Iterable[int]) -> Graph:
        keep_set = frozenset(keep)
        if not keep_set <= self.nodes:
            raise GraphError("induced_subgraph: nodes not in graph")
        return Graph(
            keep_set,
            frozenset(e for e in self.edges if e[0] in keep_set and e[1] in keep_set),
        )

    def connected_components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps: list[frozenset[int]] = []
        for start in self.sorted_nodes:
            if start in seen:
                continue
            stack = [start]
            comp: set[int] = set()
            while stack:
                n = stack.pop()
                if n in comp:
                    continue
                comp.add(n)
                stack.extend(self._adj[n] - comp)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def bitmask_adjacency(self) -> tuple[tuple[int, ...], dict[int, int]]:
        """Return (sorted nodes, node -> neighbor bitmask over sorted positions)."""
        order = self.sorted_nodes
        pos = {n: i for i, n in enumerate(order)}
        masks = {}
        for n in order:
            m = 0
            for w in self._adj[n]:
                m |= 1 << pos[w]
            masks[n] = m
        return order, masks


def odd_neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Nodes with an odd number of neighbors inside ``s``.

    The result may intersect ``s`` and satisfies
    Odd(A Δ B) = Odd(A) Δ Odd(B) for all A, B.
    """
    s_set = frozenset(s)
    if not s_set <= g.nodes:
        raise GraphError(f"odd_neighborhood: unknown nodes {sorted(s_set - g.nodes)}")
    return frozenset(v for v in g.nodes if len(g.neighbors(v) & s_set) % 2 == 1)


def odd_symmetric_difference_law_check(g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    """Check Odd(AΔB) == Odd(A)ΔOdd(B); property-test helper, always True."""
    a_set, b_set = frozenset(a), frozenset(b)
    lhs = odd_neighborhood(g, a_set ^ b_set)
    rhs = odd_neighborhood(g, a_set) ^ odd_neighborhood(g, b_set)
    return lhs == rhs


def local_complement(g: Graph, u: int) -> Graph:
    """Toggle every edge between two neighbors of ``u``; an involution."""
    nb = sorted(g.neighbors(u))
    edges = set(g.edges)
    for i, a in enumerate(nb):
        for b in nb[i + 1 :]:
            e = _norm_edge(a, b)
            if e in edges:
                edges.remove(e)
            else:
                edges.add(e)
    return Graph(g.nodes, frozenset(edges))


def is_bipartite_with_part(g: Graph, part: Iterable[int]) -> bool:
    """True iff every edge joins ``part`` to its complement."""
    part_set = frozenset(part)
    return all((u in part_set) != (v in part_set) for u, v in g.edges)


def is_bipartite(g: Graph) -> bool:
    """Two-colorability check by BFS."""
    color: dict[int, int] = {}
    for start in g.sorted_nodes:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            n = stack.pop()
            for w in g.neighbors(n):
                if w not in color:
                    color[w] = 1 - color[n]
                    stack.append(w)
                elif color[w] == color[n]:
                    return False
    return True


class LabelKind(str, Enum):
    """Measurement plane or Pauli axis of a measured qubit."""

    XY = "XY"
    XZ = "XZ"
    YZ = "YZ"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def is_plane(self) -> bool:
        return self in (LabelKind.XY, LabelKind.XZ, LabelKind.YZ)

    @property
    def is_axis(self) -> bool:
        return not self.is_plane


@dataclass(frozen=True)
class MeasurementLabel:
    """A measurement plane with an angle, or a bare Pauli axis.

    The angle is required for plane kinds, forbidden for axis kinds, and
    normalized to [0, 2π).
    """

    kind: LabelKind
    angle: float | None = None

    def __post_init__(self) -> None:
        kind = LabelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.is_plane:
            if self.angle is None:
                raise GraphError(f"plane label {kind.value} requires an angle")
            object.__setattr__(self, "angle", float(self.angle) % TWO_PI)
        elif self.angle is not None:
            raise GraphError(f"axis label {kind.value} forbids an angle")

    def __str__(self) -> str:
        if self.kind.is_plane:
            return f"{self.kind.value}({self.angle:.6g})"
        return self.kind.value


def xy(angle: float) -> MeasurementLabel:
    return MeasurementLabel(LabelKind.XY, angle)


def xz(angle: float) -> MeasurementLabel:
    return MeasurementLabel(LabelKind.XZ, angle)


def yz(angle: float) -> MeasurementLabel:
    return MeasurementLabel(LabelKind.YZ, angle)


PAULI_X = MeasurementLabel(LabelKind.X)
PAULI_Y = MeasurementLabel(LabelKind.Y)
PAULI_Z = MeasurementLabel(LabelKind.Z)


@dataclass(frozen=True)
class OpenGraph:
    """Graph with designated input and output node sets.

    Every connected component must contain at least one input or output
    (components without either only contribute a scalar factor).
    """

    graph: Graph
    inputs: frozenset[int]
    outputs: frozenset[int]

    @staticmethod
    def make(
        graph: Graph, inputs: Iterable[int] = (), outputs: Iterable[int] = ()
    ) -> OpenGraph:
        return OpenGraph(graph, frozenset(inputs), frozenset(outputs))

    def __post_init__(self) -> None:
        if not self.inputs <= self.graph.nodes:
            raise GraphError("inputs must be graph nodes")
        if not self.outputs <= self.graph.nodes:
            raise GraphError("outputs must be graph nodes")
        io = self.inputs | self.outputs
        for comp in self.graph.connected_components():
            if not comp & io:
                raise GraphError(
                    f"component {sorted(comp)} has neither inputs nor outputs"
                )

    @property
    def non_inputs(self) -> frozenset[int]:
        return self.graph.nodes - self.inputs

    @property
    def non_outputs(self) -> frozenset[int]:
        return self.graph.nodes - self.outputs


def is_register_logic(og: OpenGraph) -> bool:
    """True iff the subgraph induced by the non-outputs has no edges."""
    non_out = og.non_outputs
    return not any(u in non_out and v in non_out for u, v in og.graph.edges)


def is_bipartite_register_logic(og: OpenGraph) -> bool:
    """RL form with, additionally, no edges among the outputs."""
    if not is_register_logic(og):
        return False
    out = og.outputs
    return not any(u in out and v in out for u, v in og.graph.edges)


def rl_closed_under_non_output_lc(og: OpenGraph, u: int) -> bool:
    """Local complementation at a non-output preserves the RL form.

    Property-test helper; must always return True when the preconditions
    (``og`` is RL, ``u`` a non-output) hold.
    """
    if not is_register_logic(og):
        raise GraphError("precondition: open graph must be register-logic")
    if u not in og.non_outputs:
        raise GraphError(f"precondition: node {u} is not a non-output")
    return is_register_logic(OpenGraph(local_complement(og.graph, u), og.inputs, og.outputs))


@dataclass(frozen=True)
class LabeledOpenGraph:
    """Open graph plus a measurement label for exactly the non-outputs."""

    open_graph: OpenGraph
    labels: Mapping[int, MeasurementLabel]

    @staticmethod
    def make(
        graph: Graph,
        inputs: Iterable[int],
        outputs: Iterable[int],
        labels: Mapping[int, MeasurementLabel],
    ) -> LabeledOpenGraph:
        return LabeledOpenGraph(OpenGraph.make(graph, inputs, outputs), dict(labels))

    def __post_init__(self) -> None:
        expected = self.open_graph.non_outputs
        got = frozenset(self.labels)
        if got != expected:
            raise GraphError(
                f"labels must cover exactly the non-outputs; "
                f"missing {sorted(expected - got)}, extra {sorted(got - expected)}"
            )
        object.__setattr__(self, "labels", dict(self.labels))

    @property
    def graph(self) -> Graph:
        return self.open_graph.graph

    @property
    def inputs(self) -> frozenset[int]:
        return self.open_graph.inputs

    @property
    def outputs(self) -> frozenset[int]:
        return self.open_graph.outputs

    def label(self, u: int) -> MeasurementLabel:
        return self.labels[u]

    def relabel(self, new_labels: Mapping[int, MeasurementLabel]) -> LabeledOpenGraph:
        merged = dict(self.labels)
        merged.update(new_labels)
        return LabeledOpenGraph(self.open_graph, merged)


def all_labels_rotated_yz(log: LabeledOpenGraph) -> bool:
    """λ ≡ YZ: every non-output carries the rotated YZ-plane label."""
    return all(lab.kind is LabelKind.YZ for lab in log.labels.values())


def all_labels_in_yz(log: LabeledOpenGraph) -> bool:
    """λ ⊆ YZ: every non-output is YZ-plane, Y-axis or Z-axis labeled."""
    return all(
        lab.kind in (LabelKind.YZ, LabelKind.Y, LabelKind.Z)
        for lab in log.labels.values()
    )


# ---------------------------------------------------------------------------
# JSON + DOT serialization


def labeled_graph_to_dict(log: LabeledOpenGraph) -> dict:
    """JSON-ready dict: {nodes, edges, inputs, outputs, labels}."""
    labels = {}
    for node in sorted(log.labels):
        lab = log.labels[node]
        entry: dict = {"kind": lab.kind.value}
        if lab.angle is not None:
            entry["angle"] = lab.angle
        labels[str(node)] = entry
    return {
        "nodes": list(log.graph.sorted_nodes),
        "edges": sorted([list(e) for e in log.graph.edges]),
        "inputs": sorted(log.inputs),
        "outputs": sorted(log.outputs),
        "labels": labels,
    }


def labeled_graph_from_dict(data: Mapping) -> LabeledOpenGraph:
    graph = Graph.from_iterables(data["nodes"], [tuple(e) for e in data.get("edges", [])])
    labels = {
        int(node): MeasurementLabel(LabelKind(entry["kind"]), entry.get("angle"))
        for node, entry in data.get("labels", {}).items()
    }
    return LabeledOpenGraph.make(
        graph, data.get("inputs", []), data.get("outputs", []), labels
    )


def labeled_graph_to_json(log: LabeledOpenGraph, indent: int | None = None) -> str:
    return json.dumps(labeled_graph_to_dict(log), indent=indent, sort_keys=True)


def labeled_graph_from_json(text: str) -> LabeledOpenGraph:
    return labeled_graph_from_dict(json.loads(text))


_KIND_COLORS = {
    LabelKind.XY: "orange",
    LabelKind.XZ: "skyblue",
    LabelKind.YZ: "orchid",
    LabelKind.X: "palegreen",
    LabelKind.Y: "gold",
    LabelKind.Z: "gray80",
}


def labeled_graph_to_dot(log: LabeledOpenGraph, name: str = "g") -> str:
    """DOT text: inputs double-circled, outputs dashed, label kind as color."""
    lines = [f"graph {name} {{"]
    for node in log.graph.sorted_nodes:
        attrs = []
        if node in log.inputs:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        styles = ["filled"]
        if node in log.outputs:
            styles.append("dashed")
        attrs.append(f'style="{",".join(styles)}"')
        lab = log.labels.get(node)
        if lab is not None:
            attrs.append(f'fillcolor="{_KIND_COLORS[lab.kind]}"')
            attrs.append(f'xlabel="{lab}"')
        else:
            attrs.append('fillcolor="white"')
        lines.append(f"  {node} [{', '.join(attrs)}];")
    for u, v in sorted(log.graph.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"

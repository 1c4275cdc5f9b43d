"""Measurement patterns: ordered command lists over a labeled open graph.

Commands are the usual prepare / entangle / measure / correct set. A measure
command may carry an adaptive sign, (-1)^(offset + sum of earlier outcome
bits) times its base angle; a correct command applies a Pauli conditioned on
the parity of earlier outcome bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .graphs import (
    GraphError,
    LabeledOpenGraph,
    LabelKind,
    MeasurementLabel,
    labeled_graph_from_dict,
    labeled_graph_to_dict,
)


@dataclass(frozen=True)
class ParityLabel:
    """Which base qubits a measured qubit addresses, and in which flavor.

    ``flavor`` is "Z" for plain products of Z (labels like "ij") and "X" for
    the conjugated variant (labels like "<ij>").
    """

    support: frozenset[int]
    flavor: str = "Z"

    def __post_init__(self) -> None:
        if not self.support:
            raise ValueError("parity label needs a nonempty support")
        if self.flavor not in ("Z", "X"):
            raise ValueError(f"invalid parity flavor {self.flavor!r}")

    def __str__(self) -> str:
        body = "".join(str(q) for q in sorted(self.support))
        return f"<{body}>" if self.flavor == "X" else body


@dataclass(frozen=True)
class Prepare:
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class Entangle:
    u: int
    v: int


@dataclass(frozen=True)
class Measure:
    node: int
    label: MeasurementLabel
    sign_bits: tuple[int, ...] = ()
    sign_offset: int = 0


@dataclass(frozen=True)
class Correct:
    node: int
    pauli: str
    bits: tuple[int, ...]
    offset: int = 0

    def __post_init__(self) -> None:
        if self.pauli not in ("X", "Y", "Z"):
            raise ValueError(f"invalid correction Pauli {self.pauli!r}")


Command = Prepare | Entangle | Measure | Correct


@dataclass(frozen=True)
class Pattern:
    """Executable measurement pattern.

    The command list must touch only graph nodes, measure exactly the
    non-outputs, and reference only already-measured bits in adaptive signs
    and corrections.
    """

    graph: LabeledOpenGraph
    commands: tuple[Command, ...]
    parity_labels: Mapping[int, ParityLabel] = field(default_factory=dict)
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "commands", tuple(self.commands))
        object.__setattr__(self, "parity_labels", dict(self.parity_labels))
        object.__setattr__(self, "metadata", dict(self.metadata))
        self._validate()

    def _validate(self) -> None:
        nodes = self.graph.graph.nodes
        measured: set[int] = set()
        for cmd in self.commands:
            if isinstance(cmd, Prepare):
                unknown = set(cmd.nodes) - nodes
                if unknown:
                    raise GraphError(f"prepare of unknown nodes {sorted(unknown)}")
            elif isinstance(cmd, Entangle):
                if not self.graph.graph.has_edge(cmd.u, cmd.v):
                    raise GraphError(f"entangle ({cmd.u},{cmd.v}) is not a graph edge")
            elif isinstance(cmd, Measure):
                if cmd.node not in nodes:
                    raise GraphError(f"measure of unknown node {cmd.node}")
                if cmd.node in measured:
                    raise GraphError(f"node {cmd.node} measured twice")
                missing = set(cmd.sign_bits) - measured
                if missing:
                    raise GraphError(
                        f"measure({cmd.node}) sign depends on unmeasured {sorted(missing)}"
                    )
                measured.add(cmd.node)
            elif isinstance(cmd, Correct):
                if cmd.node not in nodes:
                    raise GraphError(f"correction on unknown node {cmd.node}")
                if cmd.node in measured:
                    raise GraphError(f"correction on already measured node {cmd.node}")
                missing = set(cmd.bits) - measured
                if missing:
                    raise GraphError(
                        f"correct({cmd.node}) depends on unmeasured {sorted(missing)}"
                    )
        if measured != self.graph.open_graph.non_outputs:
            raise GraphError(
                "commands must measure exactly the non-outputs; "
                f"missing {sorted(self.graph.open_graph.non_outputs - measured)}"
            )

    @property
    def measured_nodes(self) -> tuple[int, ...]:
        return tuple(c.node for c in self.commands if isinstance(c, Measure))

    def measure_command(self, node: int) -> Measure:
        for cmd in self.commands:
            if isinstance(cmd, Measure) and cmd.node == node:
                return cmd
        raise KeyError(node)

    def with_angles(self, angles: Mapping[int, float]) -> Pattern:
        """Copy with new base angles on the given plane-labeled nodes."""
        new_labels = {}
        new_cmds: list[Command] = []
        for cmd in self.commands:
            if isinstance(cmd, Measure) and cmd.node in angles:
                if not cmd.label.kind.is_plane:
                    raise GraphError(f"node {cmd.node} has an axis label; no angle to set")
                lab = MeasurementLabel(cmd.label.kind, angles[cmd.node])
                new_labels[cmd.node] = lab
                new_cmds.append(replace(cmd, label=lab))
            else:
                new_cmds.append(cmd)
        return Pattern(
            self.graph.relabel(new_labels),
            tuple(new_cmds),
            self.parity_labels,
            self.metadata,
        )


def standard_commands(
    log: LabeledOpenGraph,
    order: Iterable[int],
    sign_specs: Mapping[int, tuple[tuple[int, ...], int]] | None = None,
    corrections: Mapping[int, Iterable[tuple[int, str]]] | None = None,
) -> tuple[Command, ...]:
    """Prepare + entangle + measure-in-order with per-node conditional Paulis.

    ``corrections[u]`` lists (target, pauli) applied when u's outcome is 1,
    emitted immediately after u's measurement.
    """
    sign_specs = dict(sign_specs or {})
    corrections = {u: list(v) for u, v in (corrections or {}).items()}
    cmds: list[Command] = []
    non_inputs = tuple(sorted(log.open_graph.non_inputs))
    if non_inputs:
        cmds.append(Prepare(non_inputs))
    for u, v in sorted(log.graph.edges):
        cmds.append(Entangle(u, v))
    for node in order:
        bits, offset = sign_specs.get(node, ((), 0))
        cmds.append(Measure(node, log.labels[node], tuple(bits), offset))
        for target, pauli in corrections.get(node, []):
            cmds.append(Correct(target, pauli, (node,)))
    return tuple(cmds)


# ---------------------------------------------------------------------------
# JSON round trip


def _command_to_dict(cmd: Command) -> dict:
    if isinstance(cmd, Prepare):
        return {"op": "prepare", "nodes": list(cmd.nodes)}
    if isinstance(cmd, Entangle):
        return {"op": "entangle", "edge": [cmd.u, cmd.v]}
    if isinstance(cmd, Measure):
        out: dict = {"op": "measure", "node": cmd.node, "kind": cmd.label.kind.value}
        if cmd.label.kind.is_plane:
            out["angle"] = {
                "base_angle": cmd.label.angle,
                "sign_bits": list(cmd.sign_bits),
                "offset_bit": cmd.sign_offset,
            }
        return out
    if isinstance(cmd, Correct):
        return {
            "op": "correct",
            "node": cmd.node,
            "pauli": cmd.pauli,
            "bits": list(cmd.bits),
            "offset_bit": cmd.offset,
        }
    raise TypeError(f"unknown command {cmd!r}")


def _command_from_dict(data: Mapping) -> Command:
    op = data["op"]
    if op == "prepare":
        return Prepare(tuple(data["nodes"]))
    if op == "entangle":
        u, v = data["edge"]
        return Entangle(u, v)
    if op == "measure":
        kind = LabelKind(data["kind"])
        if kind.is_plane:
            spec = data["angle"]
            return Measure(
                data["node"],
                MeasurementLabel(kind, spec["base_angle"]),
                tuple(spec.get("sign_bits", [])),
                spec.get("offset_bit", 0),
            )
        return Measure(data["node"], MeasurementLabel(kind))
    if op == "correct":
        return Correct(
            data["node"], data["pauli"], tuple(data["bits"]), data.get("offset_bit", 0)
        )
    raise ValueError(f"unknown command op {op!r}")


def pattern_to_dict(pattern: Pattern) -> dict:
    return {
        "graph": labeled_graph_to_dict(pattern.graph),
        "commands": [_command_to_dict(c) for c in pattern.commands],
        "parity_labels": {
            str(n): {"support": sorted(p.support), "flavor": p.flavor}
            for n, p in sorted(pattern.parity_labels.items())
        },
        "metadata": dict(pattern.metadata),
    }


def pattern_from_dict(data: Mapping) -> Pattern:
    parity = {
        int(n): ParityLabel(frozenset(entry["support"]), entry.get("flavor", "Z"))
        for n, entry in data.get("parity_labels", {}).items()
    }
    return Pattern(
        labeled_graph_from_dict(data["graph"]),
        tuple(_command_from_dict(c) for c in data["commands"]),
        parity,
        data.get("metadata", {}),
    )


def pattern_to_json(pattern: Pattern, indent: int | None = None) -> str:
    return json.dumps(pattern_to_dict(pattern), indent=indent, sort_keys=True)


def pattern_from_json(text: str) -> Pattern:
    return pattern_from_dict(json.loads(text))

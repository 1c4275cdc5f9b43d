"""Reduction from the hexagonal grid to XZ-plane patterns, and the
triangular-grid gadgets.

Y-measuring one sublattice of the brick-wall hexagonal grid leaves a
triangular grid whose qubits carry diagonal byproducts from {Z, S, SZ};
Z-measuring the first row and column merely deletes those qubits. The
leftover tags merge with YZ-plane measurements into XZ-plane ones via
M_YZ(t).S = M_XZ(t) and M_YZ(t).S.Z = M_XZ(-t).

On the triangular grid, the thorn subgraph (a 3-4-5 triangle with tails
1-2-3 and 5-6) measured all-X except the apex, measured in XZ at angle t,
applies R_Y(t - pi/2).H to the input, up to Pauli corrections; a vertical
bridge whose middle pair is X-measured acts as CZ.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from ..graphs import (
    Graph,
    GraphError,
    LabeledOpenGraph,
    LabelKind,
    MeasurementLabel,
    xz,
    yz,
)
from ..grids import hexagonal_grid
from ..pattern import Entangle, Measure, Pattern, Prepare
from ..rewrite import GraphStateWithFrame, effective_label

_S = np.diag([1, 1j]).astype(complex)
_Z = np.diag([1, -1]).astype(complex)
DIAGONAL_TAGS = {"Z": _Z, "S": _S, "SZ": _S @ _Z}


def reduce_hexagonal_to_xz(
    rows: int,
    cols: int,
    angles: Mapping[int, float] | None = None,
    default_angle: float = 0.4,
) -> tuple[Pattern, dict[int, int]]:
    """Build the two-step reduction pattern and its angle-sign map.

    Returns (pattern, sign_map). The pattern lives on the hexagonal grid:
    the r+c-even sublattice is Y-measured, surviving first-row/first-column
    qubits are Z-measured, and the remaining qubits, YZ-labeled at their
    requested angles, are effectively XZ-measured at sign_map[node] times
    that angle (their byproduct tags are S or SZ). Outputs are the surviving
    qubits of the last column.
    """
    if rows < 2 or cols < 3:
        raise GraphError("grid too small; need rows >= 2 and cols >= 3")
    og = hexagonal_grid(rows, cols)
    graph = og.graph

    def pos(node: int) -> tuple[int, int]:
        return divmod(node, cols)

    y_nodes = sorted(n for n in graph.nodes if sum(pos(n)) % 2 == 0)
    survivors = [n for n in graph.nodes if sum(pos(n)) % 2 == 1]
    z_nodes = sorted(
        n for n in survivors if pos(n)[0] == 0 or pos(n)[1] == 0
    )
    remaining = [n for n in survivors if n not in set(z_nodes)]
    out_col = max(pos(n)[1] for n in remaining)
    outputs = [n for n in remaining if pos(n)[1] == out_col]
    course = [n for n in remaining if n not in set(outputs)]

    state = GraphStateWithFrame(graph)
    for n in y_nodes:
        state.measure_pauli(n, "Y", outcome=0)
    for n in z_nodes:
        state.measure_pauli(n, "Z", outcome=0)

    sign_map: dict[int, int] = {}
    labels: dict[int, MeasurementLabel] = {}
    angles = dict(angles or {})
    for n in sorted(graph.nodes):
        if n in set(y_nodes):
            labels[n] = MeasurementLabel(LabelKind.Y)
        elif n in set(z_nodes):
            labels[n] = MeasurementLabel(LabelKind.Z)
    for n in course:
        theta = angles.get(n, default_angle)
        labels[n] = yz(theta)
        eff, flip = effective_label(state.frame.tag(n), labels[n])
        if eff.kind is not LabelKind.XZ or flip:
            raise AssertionError(f"merged label at {n} is {eff.kind.value}, not XZ")
        ratio = 1 if _close_angle(eff.angle, theta) else -1
        if ratio < 0 and not _close_angle(eff.angle, -theta):
            raise AssertionError(f"merged angle at {n} is not +-{theta}")
        sign_map[n] = ratio

    log = LabeledOpenGraph.make(graph, (), outputs, labels)
    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(graph.edges):
        commands.append(Entangle(u, v))
    for n in y_nodes + z_nodes + sorted(course):
        commands.append(Measure(n, labels[n]))
    pattern = Pattern(
        log,
        tuple(commands),
        {},
        {"target": "hexagonal-to-xz", "sign_map": {str(k): v for k, v in sign_map.items()}},
    )
    return pattern, sign_map


def _close_angle(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi) < tol


def reduced_hexagonal_state(rows: int, cols: int) -> GraphStateWithFrame:
    """Just the first reduction step: Y-measure the r+c-even sublattice
    (all +1 projections). The survivors form the staggered triangular grid
    and every tag is one of Z, S, SZ up to a global phase."""
    og = hexagonal_grid(rows, cols)
    state = GraphStateWithFrame(og.graph)
    for n in sorted(og.graph.nodes):
        r, c = divmod(n, cols)
        if (r + c) % 2 == 0:
            state.measure_pauli(n, "Y", outcome=0)
    return state


def triangular_from_hexagonal_ids(rows: int, cols: int) -> dict[int, int]:
    """Survivor node -> triangular_grid(rows, cols//2) node id mapping."""
    mapping = {}
    new_cols = cols // 2
    for n in range(rows * cols):
        r, c = divmod(n, cols)
        if (r + c) % 2 == 1:
            k = (c - ((r + 1) % 2)) // 2
            if 0 <= k < new_cols:
                mapping[n] = r * new_cols + k
    return mapping


# ---------------------------------------------------------------------------
# Triangular-grid gadgets


def thorn_graph(base: int = 0) -> tuple[Graph, dict[str, int]]:
    """The thorn: path 1-2-3, triangle (3,4,5), tail 5-6; ids offset by base."""
    ids = {name: base + k for k, name in enumerate(["q1", "q2", "q3", "q4", "q5", "q6"], start=1)}
    g = Graph.from_iterables(
        ids.values(),
        [
            (ids["q1"], ids["q2"]),
            (ids["q2"], ids["q3"]),
            (ids["q3"], ids["q4"]),
            (ids["q3"], ids["q5"]),
            (ids["q4"], ids["q5"]),
            (ids["q5"], ids["q6"]),
        ],
    )
    return g, ids


def thorn_pattern(theta: float) -> Pattern:
    """Thorn with apex angle ``theta`` in the XZ plane; everything else X.

    The apex is measured adaptively at (-1)^(b1+b2+b3) theta, after which
    every branch implements R_Y(theta - pi/2).H up to a Pauli: the identity
    class at theta = 0 and the Hadamard class at theta = pi/2.
    """
    g, ids = thorn_graph()
    labels = {
        ids["q1"]: MeasurementLabel(LabelKind.X),
        ids["q2"]: MeasurementLabel(LabelKind.X),
        ids["q3"]: MeasurementLabel(LabelKind.X),
        ids["q4"]: xz(theta),
        ids["q5"]: MeasurementLabel(LabelKind.X),
    }
    log = LabeledOpenGraph.make(g, [ids["q1"]], [ids["q6"]], labels)
    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(g.edges):
        commands.append(Entangle(u, v))
    for name in ("q1", "q2", "q3", "q5"):
        commands.append(Measure(ids[name], labels[ids[name]]))
        if name == "q3":
            commands.append(
                Measure(ids["q4"], labels[ids["q4"]], (ids["q1"], ids["q2"], ids["q3"]), 0)
            )
    return Pattern(log, tuple(commands), {}, {"target": "thorn", "theta": theta})


def thorn_gate(theta: float) -> np.ndarray:
    """R_Y(theta - pi/2).H with R_Y(a) = exp(+i a Y / 2)."""
    a = theta - math.pi / 2
    ry = np.array(
        [[math.cos(a / 2), math.sin(a / 2)], [-math.sin(a / 2), math.cos(a / 2)]],
        dtype=complex,
    )
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    return ry @ h


def cz_patch_pattern() -> Pattern:
    """Four-segment patch implementing CZ up to Paulis.

    Wires t_in-t_m-t_out and b_in-b_m-b_out, all four wire qubits X-measured
    (two teleport hops per wire), plus the vertical bridge
    t_out - v1 - v2 - b_out with v1, v2 X-measured.
    """
    names = ["t_in", "t_m", "t_out", "b_in", "b_m", "b_out", "v1", "v2"]
    ids = {name: k for k, name in enumerate(names)}
    g = Graph.from_iterables(
        ids.values(),
        [
            (ids["t_in"], ids["t_m"]),
            (ids["t_m"], ids["t_out"]),
            (ids["b_in"], ids["b_m"]),
            (ids["b_m"], ids["b_out"]),
            (ids["t_out"], ids["v1"]),
            (ids["v1"], ids["v2"]),
            (ids["v2"], ids["b_out"]),
        ],
    )
    measured = ["t_in", "t_m", "b_in", "b_m", "v1", "v2"]
    labels = {ids[n]: MeasurementLabel(LabelKind.X) for n in measured}
    log = LabeledOpenGraph.make(
        g, [ids["t_in"], ids["b_in"]], [ids["t_out"], ids["b_out"]], labels
    )
    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(g.edges):
        commands.append(Entangle(u, v))
    for n in measured:
        commands.append(Measure(ids[n], labels[ids[n]]))
    return Pattern(log, tuple(commands), {}, {"target": "cz-patch"})


def _flow_corrected_pattern(
    log: LabeledOpenGraph,
    metadata: dict,
    sign_specs: Mapping[int, tuple[tuple[int, ...], int]] | None = None,
) -> Pattern:
    """Pattern with eager corrections from a strict-order Pauli flow.

    After each unwanted outcome the product of elementary stabilizers over
    the correction set is applied to the not-yet-measured qubits, pinning
    every branch to the all-zero reference branch.
    """
    from ..flow import brute_force_pauli_flow
    from ..pauli import elementary_stabilizer, multiply_all

    cand = brute_force_pauli_flow(log, cap=8, strict_order=True)
    if cand is None:
        raise GraphError("gadget graph has no strictly ordered Pauli flow")
    sign_specs = dict(sign_specs or {})
    order = sorted(log.labels, key=lambda u: (-cand.layers[u], u))
    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(log.graph.edges):
        commands.append(Entangle(u, v))
    measured: set[int] = set()
    for u in order:
        bits, offset = sign_specs.get(u, ((), 0))
        commands.append(Measure(u, log.labels[u], bits, offset))
        measured.add(u)
        stab = multiply_all(
            elementary_stabilizer(log.open_graph, v) for v in cand.correction[u]
        )
        for w, letter in stab.letters:
            if w == u or w in measured:
                continue
            commands.append(Correct(w, letter, (u,)))
    return Pattern(log, tuple(commands), {}, metadata)


def _exactified(pattern: Pattern, target: np.ndarray) -> Pattern:
    """Append the constant output Pauli making the pattern implement
    ``target`` exactly (all branches already agree thanks to the flow
    corrections)."""
    from ..pauli import PauliString
    from ..sim import equal_up_to_pauli, extract_unitary

    forced = {n: 0 for n in pattern.measured_nodes}
    u0 = extract_unitary(pattern, forced=forced)
    outputs = tuple(sorted(pattern.graph.outputs))
    residue = equal_up_to_pauli(u0, target, qubits=outputs)
    if residue is None:
        raise AssertionError("gadget does not implement its target up to a Pauli")
    commands = list(pattern.commands)
    for node, letter in residue.letters:
        commands.append(Correct(node, letter, (), 1))
    return Pattern(pattern.graph, tuple(commands), pattern.parity_labels, pattern.metadata)


def _chain_patterns(first: Pattern, second: Pattern, joints: dict[int, int]) -> Pattern:
    """Glue ``second`` onto ``first`` by identifying first-outputs with
    second-inputs per ``joints`` (second's node ids are shifted); measure and
    correction commands are replayed in order."""
    shift = max(first.graph.graph.nodes) + 1
    inverse = {inp: out for out, inp in joints.items()}

    def ren(v: int) -> int:
        return inverse.get(v, v + shift)

    g1, g2 = first.graph.graph, second.graph.graph
    nodes = set(g1.nodes) | {ren(v) for v in g2.nodes}
    edges = set(g1.edges) | {tuple(sorted((ren(u), ren(v)))) for u, v in g2.edges}
    labels = dict(first.graph.labels)
    labels.update({ren(u): lab for u, lab in second.graph.labels.items()})
    inputs = set(first.graph.inputs) | {
        ren(v) for v in second.graph.inputs if v not in joints.values()
    }
    outputs = (set(first.graph.outputs) - set(joints)) | {
        ren(v) for v in second.graph.outputs
    }
    log = LabeledOpenGraph.make(
        Graph.from_iterables(nodes, edges), inputs, outputs, labels
    )
    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(log.graph.edges):
        commands.append(Entangle(u, v))
    for cmd in first.commands:
        if isinstance(cmd, (Measure, Correct)):
            commands.append(cmd)
    for cmd in second.commands:
        if isinstance(cmd, Measure):
            commands.append(
                Measure(ren(cmd.node), cmd.label, tuple(ren(b) for b in cmd.sign_bits), cmd.sign_offset)
            )
        elif isinstance(cmd, Correct):
            commands.append(
                Correct(ren(cmd.node), cmd.pauli, tuple(ren(b) for b in cmd.bits), cmd.offset)
            )
    return Pattern(log, tuple(commands), {}, {"target": "chained"})


def build_xz_triangular_gadgets(gate: str, theta: float = 0.0) -> Pattern:
    """Gadget patterns for the real-valued universal set, with flow-based
    eager corrections so each gadget implements its gate exactly.

    - "identity": thorn at apex angle 0;
    - "H": thorn at pi/2;
    - "RY": two chained thorns, pi/2 then theta + pi/2, giving R_Y(theta);
    - "CZ": the bridge patch;
    - "CNOT": the bridge patch with a Hadamard thorn before and after on the
      target wire, (I x H).CZ.(I x H).
    """
    gate = gate.upper()
    cz = np.eye(4, dtype=complex)
    cz[3, 3] = -1
    if gate in ("I", "IDENTITY"):
        return _exact_thorn(0.0)
    if gate == "H":
        return _exact_thorn(math.pi / 2)
    if gate == "RY":
        first = _exact_thorn(math.pi / 2)
        second = _exact_thorn(theta + math.pi / 2)
        out = next(iter(first.graph.outputs))
        inp = next(iter(second.graph.inputs))
        return _chain_patterns(first, second, {out: inp})
    if gate == "CZ":
        return _exact_cz_patch()
    if gate == "CNOT":
        patch = _exact_cz_patch()
        pre = _exact_thorn(math.pi / 2)
        post = _exact_thorn(math.pi / 2)
        b_in = sorted(patch.graph.inputs)[1]
        b_out = sorted(patch.graph.outputs)[1]
        pre_out = next(iter(pre.graph.outputs))
        combined = _chain_patterns(pre, patch, {pre_out: b_in})
        new_b_out = b_out + max(pre.graph.graph.nodes) + 1
        post_in = next(iter(post.graph.inputs))
        return _chain_patterns(combined, post, {new_b_out: post_in})
    raise GraphError(f"unsupported gadget gate {gate!r}")


def _exact_thorn(theta: float) -> Pattern:
    bare = thorn_pattern(theta)
    ids = {f"q{k}": k for k in range(1, 7)}
    corrected = _flow_corrected_pattern(
        bare.graph,
        {"target": "thorn", "theta": theta},
        sign_specs={ids["q4"]: ((ids["q1"], ids["q2"], ids["q3"]), 0)},
    )
    return _exactified(corrected, thorn_gate(theta))


def _exact_cz_patch() -> Pattern:
    bare = cz_patch_pattern()
    cz = np.eye(4, dtype=complex)
    cz[3, 3] = -1
    corrected = _flow_corrected_pattern(bare.graph, {"target": "cz-patch"})
    return _exactified(corrected, cz)

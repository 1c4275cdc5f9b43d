"""Parity-architecture patterns: the pairwise-parity triangle obtained from a
triangular cluster patch, the beveled cluster, and alternating series of
beveled clusters.

All constructions start from local-interaction cluster graphs whose X
sublattice is measured first. The reductions are computed symbolically
(graph rewrites with byproduct frames); the byproduct tags then fix the
physical course-measurement angles, and the per-outcome Pauli deltas of the
premeasurements become conditional corrections, so the emitted patterns are
deterministic branch by branch.

A beveled cluster's reduced wire runs base -> output through a contracted
constraint qubit whose byproduct Hadamard cancels the teleport Hadamard, so
a single cluster implements its diagonal exactly. In a series, neighboring
clusters are joined by output-input edges; each interface crossing is one
bare teleport, which conjugates every second stage into the X basis (parity
labels <ij>) and leaves a per-wire Hadamard on the outputs of even-length
series (declared in the pattern metadata).
"""

from __future__ import annotations

import cmath
from typing import Mapping, Sequence

from ..cliffords import HADAMARD, LocalCliffordFrame
from ..graphs import (
    Graph,
    GraphError,
    LabeledOpenGraph,
    LabelKind,
    MeasurementLabel,
    OpenGraph,
    yz,
)
from ..grids import BeveledCluster, TriangularPatch, beveled_cluster, triangular_patch
from ..pattern import (
    Correct,
    Entangle,
    Measure,
    ParityLabel,
    Pattern,
    Prepare,
    standard_commands,
)
from ..pauli import elementary_stabilizer
from ..rewrite import GraphStateWithFrame, physical_angle_for
from .diagonal import DiagonalSpec

Bits = tuple[int, ...]


def _patch_reduction_plan(patch: TriangularPatch, offset: int = 0) -> list[tuple[int, int]]:
    """X-measurement order (row-major, bottom row first) with north b0."""
    return [
        (node + offset, patch.north(node) + offset)
        for node in sorted(patch.sublattice, key=lambda v: patch.position[v])
    ]


def _apply_reduction(
    graph: Graph, plan: Sequence[tuple[int, int]], outcomes: Mapping[int, int] | None = None
) -> GraphStateWithFrame:
    state = GraphStateWithFrame(graph)
    outcomes = outcomes or {}
    for node, b0 in plan:
        state.measure_pauli(node, "X", b0=b0, outcome=outcomes.get(node, 0))
    return state


def _expected_lhz_edges(
    patch: TriangularPatch, offset: int = 0
) -> tuple[frozenset, dict[tuple[int, int], int]]:
    bases = patch.base_nodes
    pair_to_node: dict[tuple[int, int], int] = {}
    edges = set()
    for p in patch.parity_nodes:
        i, j = patch.parity_pair(p)
        pair_to_node[(i, j)] = p + offset
        edges.add(tuple(sorted((p + offset, bases[i] + offset))))
        edges.add(tuple(sorted((p + offset, bases[j] + offset))))
    return frozenset(edges), pair_to_node


def reduce_triangular_to_lhz(
    n: int, pair_coefficients: Mapping[tuple[int, int], float] | None = None
) -> tuple[Pattern, LocalCliffordFrame]:
    """Measure the patch sublattice in X (north b0 choices, +1 projections)
    and return the resulting pairwise-parity pattern plus its byproduct frame.

    The reduced graph is the pairwise-parity triangle with the patch's base
    qubits as I = O. The byproduct tags on the parity qubits are
    Hadamard-like: they turn XY-plane measurements into YZ-plane ones, so the
    returned pattern measures every parity qubit in YZ (the angle for pair
    (i, j) set from ``pair_coefficients``, default 0). A final stabilizer of
    the top-most (apex) parity qubit is multiplied into the frame, leaving
    only Pauli tags on the base qubits.
    """
    if n < 2:
        raise GraphError(f"need n >= 2 bases, got {n}")
    patch = triangular_patch(n)
    state = _apply_reduction(patch.open_graph.graph, _patch_reduction_plan(patch))

    expected, pair_to_node = _expected_lhz_edges(patch)
    if state.graph.edges != expected:
        raise AssertionError("patch reduction did not produce the pairwise-parity triangle")

    apex = patch.node_at[(n - 1, n - 1)]
    letters = {apex: "X"}
    for w in state.graph.neighbors(apex):
        letters[w] = "Z"
    state.absorb_stabilizer(letters)

    coeffs = dict(pair_coefficients or {})
    bases = patch.base_nodes
    labels: dict[int, MeasurementLabel] = {}
    parity_meta: dict[int, ParityLabel] = {}
    for (i, j), node in pair_to_node.items():
        beta = coeffs.get((i, j), 0.0)
        labels[node] = yz(-2.0 * beta)
        parity_meta[node] = ParityLabel(frozenset({bases[i], bases[j]}), "Z")
    log = LabeledOpenGraph.make(state.graph, bases, bases, labels)
    corrections = {
        u: [(v, "Z") for v in sorted(state.graph.neighbors(u))] for u in labels
    }
    commands = standard_commands(log, sorted(labels), corrections=corrections)
    pattern = Pattern(log, commands, parity_meta, {"target": "pairwise-diagonal"})
    return pattern, state.frame


# ---------------------------------------------------------------------------
# Beveled clusters


def _beveled_plan(bc: BeveledCluster, offset: int = 0) -> list[tuple[int, int]]:
    """Patch interior with north b0, then each constraint with its output."""
    plan = _patch_reduction_plan(bc.patch, offset)
    for k in range(bc.n):
        plan.append((bc.constraints[k] + offset, bc.outputs[k] + offset))
    return plan


def _expected_beveled_edges(
    bc: BeveledCluster, offset: int = 0
) -> tuple[set, dict[tuple[int, int], int]]:
    """Pairwise-parity triangle on the bases, outputs pendant on the bases."""
    edges, pair_to_node = _expected_lhz_edges(bc.patch, offset)
    edges = set(edges)
    for k in range(bc.n):
        edges.add(tuple(sorted((bc.inputs[k] + offset, bc.outputs[k] + offset))))
    return edges, pair_to_node


def _premeasure_deltas(
    graph: Graph,
    plan: Sequence[tuple[int, int]],
    base_frame: LocalCliffordFrame,
) -> dict[int, dict[int, str]]:
    """Per-premeasured-node physical Pauli fixups.

    Flipping outcome j injects a Pauli past the fixed Clifford word, so the
    branch frame is F_j = F_0 . P_j with P_j a Pauli on the survivors; the
    physical correction undoing it is Q_j = F_j . F_0^{-1}, again a Pauli.
    """
    deltas: dict[int, dict[int, str]] = {}
    for node, _ in plan:
        flipped = _apply_reduction(graph, plan, {node: 1})
        letters: dict[int, str] = {}
        for v in flipped.graph.nodes:
            q = flipped.frame.tag(v).compose(base_frame.tag(v).inverse())
            if not q.is_pauli:
                raise AssertionError(f"outcome delta at {v} is not a Pauli")
            letter = q.pauli_letter()
            if letter != "I":
                letters[v] = letter
        deltas[node] = letters
    return deltas


def _course_label(tag, physical_kind: LabelKind, target: MeasurementLabel) -> MeasurementLabel:
    angle = physical_angle_for(tag, physical_kind, target)
    return MeasurementLabel(physical_kind, angle)


def _physical_letter(tag, bare_letter: str) -> str:
    letter, _sign = tag.conj_pauli(bare_letter)
    return letter


def _wire_angle(tag, beta: float) -> float:
    """Effective XY angle for a wire qubit teleporting onto a tagged node.

    The bare hop applies H.diag(1, e^{-i phi}); with the target's tag the
    net is tag.H.diag(1, e^{-i phi}), which must be diagonal, and
    phi = 2*beta + arg(M11/M00) with M = tag.H makes it R_Z(2*beta) exactly.
    """
    m = tag.matrix() @ HADAMARD.matrix()
    if abs(m[0, 1]) > 1e-9 or abs(m[1, 0]) > 1e-9:
        raise AssertionError("wire residual is not diagonal; cannot calibrate the hop")
    return 2.0 * beta + cmath.phase(m[1, 1] / m[0, 0])


def _single_bits(n: int, k: int) -> Bits:
    return tuple(1 if j == k else 0 for j in range(n))


def _pair_bits(n: int, i: int, j: int) -> Bits:
    return tuple(1 if t in (i, j) else 0 for t in range(n))


def build_beveled_cluster(spec_or_n: DiagonalSpec | int) -> Pattern:
    """Beveled-cluster pattern for a diagonal target with single- and
    two-qubit coefficients only.

    The base qubits of the triangular patch are the inputs; each hangs a
    constraint-output chain. The X sublattice (patch interior plus the
    constraints) is premeasured, leaving the pairwise-parity triangle with
    every output pendant on its base. Parity qubits are physically measured
    in the XY plane at angles folded through their Hadamard-like tags (so
    they act as YZ measurements applying exp(i*beta Z.Z)); each base is then
    measured in the XY plane, teleporting its state onto its output, where
    the contraction byproduct cancels the teleport Hadamard. The pattern
    implements the diagonal exactly, branch by branch.
    """
    if isinstance(spec_or_n, int):
        spec = DiagonalSpec.from_beta(spec_or_n, {})
    else:
        spec = spec_or_n
    n = spec.n
    if n < 1:
        raise GraphError("need n >= 1")
    for bits, beta in spec.beta.items():
        if sum(bits) > 2 and abs(beta) > 1e-12:
            raise GraphError(
                "beveled clusters carry pairwise parities only; "
                f"coefficient on {bits} is not realizable"
            )
    bc = beveled_cluster(n)
    graph = bc.open_graph.graph
    plan = _beveled_plan(bc)
    reduced = _apply_reduction(graph, plan)
    expected_edges, pair_to_node = _expected_beveled_edges(bc)
    if reduced.graph.edges != frozenset(expected_edges):
        raise AssertionError("beveled reduction did not produce the expected topology")
    frame = reduced.frame
    deltas = _premeasure_deltas(graph, plan, frame)

    labels: dict[int, MeasurementLabel] = {}
    parity_meta: dict[int, ParityLabel] = {}
    for node, _ in plan:
        labels[node] = MeasurementLabel(LabelKind.X)
    for (i, j), node in pair_to_node.items():
        beta = spec.beta.get(_pair_bits(n, i, j), 0.0)
        labels[node] = _course_label(frame.tag(node), LabelKind.XY, yz(-2.0 * beta))
        parity_meta[node] = ParityLabel(frozenset({i, j}), "Z")
    for k in range(n):
        beta = spec.beta.get(_single_bits(n, k), 0.0)
        base = bc.inputs[k]
        phi = _wire_angle(frame.tag(bc.outputs[k]), beta)
        labels[base] = _course_label(
            frame.tag(base), LabelKind.XY, MeasurementLabel(LabelKind.XY, phi)
        )

    log = LabeledOpenGraph.make(graph, bc.inputs, bc.outputs, labels)

    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(graph.edges):
        commands.append(Entangle(u, v))
    for node, _ in plan:
        commands.append(Measure(node, labels[node]))
        for v, letter in sorted(deltas[node].items()):
            commands.append(Correct(v, letter, (node,)))
    # Parity qubits first (their corrections land on the bases), bases last.
    for (i, j), node in sorted(pair_to_node.items(), key=lambda kv: kv[1]):
        commands.append(Measure(node, labels[node]))
        for base in sorted(reduced.graph.neighbors(node)):
            commands.append(Correct(base, _physical_letter(frame.tag(base), "Z"), (node,)))
    for k in range(n):
        base = bc.inputs[k]
        out = bc.outputs[k]
        commands.append(Measure(base, labels[base]))
        commands.append(Correct(out, _physical_letter(frame.tag(out), "X"), (base,)))

    return Pattern(
        log,
        tuple(commands),
        parity_meta,
        {"target": "diagonal", "global_phase": spec.global_phase},
    )


# ---------------------------------------------------------------------------
# Alternating series


def build_alternating_series(
    n: int, stage_coefficients: Sequence[Mapping[Bits, float]]
) -> Pattern:
    """Chain of beveled clusters joined by output-input interface edges.

    Stage s (0-based) acts in the Z basis for even s (parity labels "ij")
    and in the X basis for odd s (labels "<ij>", realizing exp(i a X.X) and
    X rotations). A series of even length leaves one Hadamard per output,
    declared in metadata["output_frame"]; odd lengths implement the stage
    product exactly.
    """
    depth = len(stage_coefficients)
    if n < 1 or depth < 1:
        raise GraphError("need n >= 1 and at least one stage")
    specs = [DiagonalSpec.from_beta(n, dict(c)) for c in stage_coefficients]
    for spec in specs:
        for bits, beta in spec.beta.items():
            if sum(bits) > 2 and abs(beta) > 1e-12:
                raise GraphError("series stages carry pairwise parities only")
    if depth == 1:
        return build_beveled_cluster(specs[0])

    stage_bc = [beveled_cluster(n) for _ in range(depth)]
    size = n * n + 2 * n
    offsets = [s * size for s in range(depth)]

    def base(s: int, k: int) -> int:
        return stage_bc[s].inputs[k] + offsets[s]

    def out(s: int, k: int) -> int:
        return stage_bc[s].outputs[k] + offsets[s]

    edges: list[tuple[int, int]] = []
    for s, bc in enumerate(stage_bc):
        off = offsets[s]
        edges.extend((u + off, v + off) for u, v in bc.open_graph.graph.edges)
        if s + 1 < depth:
            for k in range(n):
                edges.append((out(s, k), base(s + 1, k)))
    graph = Graph.from_iterables(range(depth * size), edges)
    inputs = tuple(base(0, k) for k in range(n))
    final_outputs = tuple(out(depth - 1, k) for k in range(n))

    plan: list[tuple[int, int]] = []
    for s, bc in enumerate(stage_bc):
        plan.extend(_beveled_plan(bc, offsets[s]))
    reduced = _apply_reduction(graph, plan)
    frame = reduced.frame

    # Reduced shape: per stage the parity triangle on its bases with the
    # output pendant, plus direct base-to-base edges across each interface.
    expected: set[tuple[int, int]] = set()
    pair_nodes: list[dict[tuple[int, int], int]] = []
    for s, bc in enumerate(stage_bc):
        stage_edges, pair_to_node = _expected_beveled_edges(bc, offsets[s])
        expected |= stage_edges
        pair_nodes.append(pair_to_node)
        if s + 1 < depth:
            for k in range(n):
                expected.add(tuple(sorted((base(s, k), base(s + 1, k)))))
    if reduced.graph.edges != frozenset(expected):
        raise AssertionError("series reduction did not produce the expected chain")

    deltas = _premeasure_deltas(graph, plan, frame)
    reduced_og = OpenGraph.make(reduced.graph, inputs, final_outputs)

    labels: dict[int, MeasurementLabel] = {}
    parity_meta: dict[int, ParityLabel] = {}
    for node, _ in plan:
        labels[node] = MeasurementLabel(LabelKind.X)
    for s, spec in enumerate(specs):
        flavor = "Z" if s % 2 == 0 else "X"
        for (i, j), node in pair_nodes[s].items():
            beta = spec.beta.get(_pair_bits(n, i, j), 0.0)
            labels[node] = _course_label(frame.tag(node), LabelKind.XY, yz(-2.0 * beta))
            parity_meta[node] = ParityLabel(frozenset({i, j}), flavor)
        for k in range(n):
            node = base(s, k)
            beta = spec.beta.get(_single_bits(n, k), 0.0)
            if s + 1 < depth:
                phi = 2.0 * beta  # bare interface hop onto the next base
            else:
                phi = _wire_angle(frame.tag(out(s, k)), beta)
            labels[node] = _course_label(
                frame.tag(node), LabelKind.XY, MeasurementLabel(LabelKind.XY, phi)
            )
        if s + 1 < depth:
            for k in range(n):
                # This stage's output is a pendant rotation station on its
                # base; keep it neutral (effective YZ at angle 0).
                node = out(s, k)
                labels[node] = _course_label(frame.tag(node), LabelKind.XY, yz(0.0))
                parity_meta[node] = ParityLabel(frozenset({k}), flavor)

    log = LabeledOpenGraph.make(graph, inputs, final_outputs, labels)

    commands: list = [Prepare(tuple(sorted(log.open_graph.non_inputs)))]
    for u, v in sorted(graph.edges):
        commands.append(Entangle(u, v))
    for node, _ in plan:
        commands.append(Measure(node, labels[node]))
        for v, letter in sorted(deltas[node].items()):
            commands.append(Correct(v, letter, (node,)))
    for s in range(depth):
        # Diagonal stations first (parities and this stage's pendant
        # outputs), then the stage's wire qubits.
        station_nodes = sorted(pair_nodes[s].values())
        if s + 1 < depth:
            station_nodes += [out(s, k) for k in range(n)]
        for node in station_nodes:
            commands.append(Measure(node, labels[node]))
            for w in sorted(reduced.graph.neighbors(node)):
                commands.append(Correct(w, _physical_letter(frame.tag(w), "Z"), (node,)))
        for k in range(n):
            node = base(s, k)
            nxt = base(s + 1, k) if s + 1 < depth else out(s, k)
            commands.append(Measure(node, labels[node]))
            stab = elementary_stabilizer(reduced_og, nxt)
            for w, letter in stab.letters:
                if w == node:
                    continue
                commands.append(Correct(w, _physical_letter(frame.tag(w), letter), (node,)))

    metadata: dict = {"target": "alternating-series", "stages": depth}
    if depth % 2 == 0:
        metadata["output_frame"] = {str(v): "H" for v in final_outputs}
    return Pattern(log, tuple(commands), parity_meta, metadata)

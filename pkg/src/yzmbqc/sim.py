"""Dense statevector simulation of graph states and measurement patterns.

Qubit order is big-endian by ascending node id: the smallest node id is the
most significant bit of the amplitude index. Measurement outcome 0 always
denotes the +1 eigenstate of the measured observable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import product as iter_product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .cliffords import PAULI_MATS
from .graphs import LabeledOpenGraph, LabelKind, MeasurementLabel, OpenGraph
from .pattern import Correct, Entangle, Measure, Pattern, Prepare
from .pauli import PauliString

ATOL = 1e-9
DEFAULT_MAX_QUBITS = 20


class SimulationError(RuntimeError):
    """Raised on qubit-cap overflow, zero-probability forcing, and the like."""


def max_qubits() -> int:
    """Simulator width cap; override with the MBQC_MAX_QUBITS env var."""
    try:
        return int(os.environ.get("MBQC_MAX_QUBITS", DEFAULT_MAX_QUBITS))
    except ValueError:
        return DEFAULT_MAX_QUBITS


@dataclass
class StateVector:
    """Complex amplitudes over named qubits (ascending ids, big-endian)."""

    qubits: tuple[int, ...]
    amps: np.ndarray

    @staticmethod
    def make(qubits: Iterable[int], amps: Sequence[complex] | np.ndarray) -> StateVector:
        qs = tuple(sorted(set(int(q) for q in qubits)))
        arr = np.asarray(amps, dtype=complex).reshape(-1)
        if arr.size != 1 << len(qs):
            raise SimulationError(
                f"amplitude count {arr.size} does not match {len(qs)} qubits"
            )
        return StateVector(qs, arr.copy())

    @staticmethod
    def plus_state(qubits: Iterable[int]) -> StateVector:
        qs = tuple(sorted(set(qubits)))
        n = len(qs)
        return StateVector(qs, np.full(1 << n, 2 ** (-n / 2), dtype=complex))

    @staticmethod
    def computational(qubits: Iterable[int], bits: Mapping[int, int]) -> StateVector:
        qs = tuple(sorted(set(qubits)))
        idx = 0
        for q in qs:
            idx = (idx << 1) | (bits.get(q, 0) & 1)
        amps = np.zeros(1 << len(qs), dtype=complex)
        amps[idx] = 1.0
        return StateVector(qs, amps)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def axis(self, node: int) -> int:
        try:
            return self.qubits.index(node)
        except ValueError:
            raise SimulationError(f"qubit {node} not in state") from None

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> StateVector:
        return StateVector(self.qubits, self.amps.copy())

    def tensor(self, other: StateVector) -> StateVector:
        if set(self.qubits) & set(other.qubits):
            raise SimulationError("tensor of overlapping qubit sets")
        combined = np.kron(self.amps, other.amps)
        qs = self.qubits + other.qubits
        order = tuple(sorted(range(len(qs)), key=lambda i: qs[i]))
        arr = combined.reshape([2] * len(qs)).transpose(order).reshape(-1)
        return StateVector(tuple(sorted(qs)), arr)

    def apply_1q(self, node: int, mat: np.ndarray) -> None:
        ax = self.axis(node)
        t = np.moveaxis(self.amps.reshape([2] * self.n_qubits), ax, 0)
        res = np.tensordot(np.asarray(mat, dtype=complex), t, axes=([1], [0]))
        self.amps = np.ascontiguousarray(np.moveaxis(res, 0, ax)).reshape(-1)

    def apply_cz(self, u: int, v: int) -> None:
        au, av = self.axis(u), self.axis(v)
        t = self.amps.reshape([2] * self.n_qubits)
        sl: list[object] = [slice(None)] * self.n_qubits
        sl[au] = 1
        sl[av] = 1
        t[tuple(sl)] *= -1
        self.amps = t.reshape(-1)

    def apply_pauli(self, p: PauliString) -> None:
        for node, letter in p.letters:
            self.apply_1q(node, PAULI_MATS[letter])
        if p.phase:
            self.amps = self.amps * (1j**p.phase)

    def expectation(self, p: PauliString) -> complex:
        work = self.copy()
        work.apply_pauli(p)
        return complex(np.vdot(self.amps, work.amps))

    def project(self, node: int, vector: np.ndarray) -> tuple[float, StateVector]:
        """Project qubit ``node`` on ``vector`` and drop it (unnormalized prob)."""
        ax = self.axis(node)
        t = self.amps.reshape([2] * self.n_qubits)
        t = np.moveaxis(t, ax, 0)
        reduced = np.tensordot(np.asarray(vector, dtype=complex).conj(), t, axes=([0], [0]))
        rest = tuple(q for q in self.qubits if q != node)
        new = StateVector(rest, reduced.reshape(-1))
        prob = float(np.vdot(new.amps, new.amps).real)
        return prob, new

    def measure(
        self,
        node: int,
        basis: np.ndarray,
        forced: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> tuple[int, float, StateVector]:
        """Projective measurement in a 2x2 basis (columns = outcome 0, 1).

        Returns (outcome, probability, renormalized post-state without node).
        """
        p0, post0 = self.project(node, basis[:, 0])
        if forced == 0:
            bit, prob, post = 0, p0, post0
        elif forced == 1:
            prob1, post1 = self.project(node, basis[:, 1])
            bit, prob, post = 1, prob1, post1
        else:
            r = (rng or np.random.default_rng()).random()
            if r < p0:
                bit, prob, post = 0, p0, post0
            else:
                prob1, post1 = self.project(node, basis[:, 1])
                bit, prob, post = 1, prob1, post1
        if prob < 1e-14:
            raise SimulationError(
                f"measurement branch {bit} on qubit {node} has zero probability"
            )
        post.amps = post.amps / math.sqrt(prob)
        return bit, prob, post

    def fidelity_up_to_phase(self, other: StateVector) -> float:
        if self.qubits != other.qubits:
            raise SimulationError("fidelity between different qubit sets")
        na, nb = self.norm(), other.norm()
        return float(abs(np.vdot(self.amps, other.amps)) / (na * nb))


def measurement_basis(label: MeasurementLabel, angle: float | None = None) -> np.ndarray:
    """Columns are the outcome-0 (+1 eigenstate) and outcome-1 vectors.

    - XY(t): axis cos t X + sin t Y, outcome 0 = (|0> + e^{it}|1>)/sqrt2
    - XZ(t): axis cos t Z + sin t X, outcome 0 = cos(t/2)|0> + sin(t/2)|1>
    - YZ(t): axis cos t Z + sin t Y, outcome 0 = cos(t/2)|0> + i sin(t/2)|1>

    so YZ(0) is the Z basis and YZ(pi/2) the Y basis.
    """
    kind = label.kind
    theta = label.angle if angle is None else angle
    if kind is LabelKind.X:
        kind, theta = LabelKind.XY, 0.0
    elif kind is LabelKind.Y:
        kind, theta = LabelKind.YZ, math.pi / 2
    elif kind is LabelKind.Z:
        kind, theta = LabelKind.YZ, 0.0
    if theta is None:
        raise SimulationError("plane measurement needs an angle")
    if kind is LabelKind.XY:
        phase = np.exp(1j * theta)
        v0 = np.array([1.0, phase]) / math.sqrt(2)
        v1 = np.array([1.0, -phase]) / math.sqrt(2)
    elif kind is LabelKind.XZ:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        v0 = np.array([c, s], dtype=complex)
        v1 = np.array([-s, c], dtype=complex)
    elif kind is LabelKind.YZ:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        v0 = np.array([c, 1j * s])
        v1 = np.array([1j * s, c])
    else:  # pragma: no cover
        raise SimulationError(f"unhandled label kind {kind}")
    return np.column_stack([v0, v1])


def graph_state(graph_nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> StateVector:
    """Bare graph state: |+> everywhere, CZ on every edge."""
    nodes = tuple(sorted(set(graph_nodes)))
    if len(nodes) > max_qubits():
        raise SimulationError(f"{len(nodes)} qubits exceed cap {max_qubits()}")
    state = StateVector.plus_state(nodes)
    for u, v in edges:
        state.apply_cz(u, v)
    return state


def prepare_graph_state(
    og: OpenGraph | LabeledOpenGraph, input_state: StateVector | None = None
) -> StateVector:
    """Open-graph state: inputs in ``input_state``, non-inputs in |+>, CZ edges."""
    if isinstance(og, LabeledOpenGraph):
        og = og.open_graph
    inputs = tuple(sorted(og.inputs))
    rest = tuple(sorted(og.graph.nodes - og.inputs))
    if len(og.graph.nodes) > max_qubits():
        raise SimulationError(f"{len(og.graph.nodes)} qubits exceed cap {max_qubits()}")
    if input_state is None:
        state = StateVector.plus_state(og.graph.nodes)
    else:
        if tuple(input_state.qubits) != inputs:
            raise SimulationError(
                f"input state must live on the inputs {inputs}, got {input_state.qubits}"
            )
        state = input_state.copy() if not rest else input_state.tensor(StateVector.plus_state(rest))
    for u, v in og.graph.edges:
        state.apply_cz(u, v)
    return state


def stabilizer_fixes_state(state: StateVector, stabilizer: PauliString, tol: float = ATOL) -> bool:
    """Check K|psi> = |psi> within tolerance."""
    work = state.copy()
    work.apply_pauli(stabilizer)
    return bool(np.linalg.norm(work.amps - state.amps) < tol * max(1.0, state.norm()))


# ---------------------------------------------------------------------------
# Pattern execution


@dataclass
class BranchResult:
    """One measurement branch: outcome bits, output state, its probability."""

    outcomes: dict[int, int]
    final_state: StateVector
    probability: float


def _resolved_angle(cmd: Measure, outcomes: Mapping[int, int]) -> float | None:
    if not cmd.label.kind.is_plane:
        return None
    sign = (-1) ** ((cmd.sign_offset + sum(outcomes[b] for b in cmd.sign_bits)) % 2)
    return sign * cmd.label.angle


def run_pattern(
    pattern: Pattern,
    input_state: StateVector | None = None,
    branch_policy: str = "all",
    forced: Mapping[int, int] | Sequence[int] | None = None,
    seed: int | None = None,
    max_branches: int = 4096,
) -> list[BranchResult]:
    """Execute a pattern.

    branch_policy:
      - "all": enumerate every branch with nonzero probability (lexicographic
        in measurement order, outcome 0 first); nodes present in ``forced``
        are pinned to the given bit instead of branching;
      - "forced": follow the outcome bits given in ``forced`` (by node id, or
        as a sequence in measurement order; unnamed nodes default to 0);
      - "random": sample one branch using ``seed``.
    """
    measured = pattern.measured_nodes
    free = len(measured) - (len(forced) if forced is not None else 0)
    if branch_policy == "all" and 1 << max(free, 0) > max_branches:
        raise SimulationError(
            f"{free} free measurements exceed the exhaustive cap of {max_branches} branches"
        )
    forced_map: dict[int, int] = {}
    if forced is not None:
        if isinstance(forced, Mapping):
            forced_map = {int(k): int(v) & 1 for k, v in forced.items()}
        else:
            forced_map = {node: int(b) & 1 for node, b in zip(measured, forced)}
    rng = np.random.default_rng(seed)

    init = prepare_graph_state(pattern.graph.open_graph, input_state)

    results: list[BranchResult] = []

    def walk(state: StateVector, idx: int, outcomes: dict[int, int], prob: float) -> None:
        if prob < 1e-13:
            return
        for j in range(idx, len(pattern.commands)):
            cmd = pattern.commands[j]
            if isinstance(cmd, (Prepare, Entangle)):
                # Preparation and entangling are folded into the initial state;
                # commands are kept for serialization and order checking.
                continue
            if isinstance(cmd, Correct):
                if (cmd.offset + sum(outcomes[b] for b in cmd.bits)) % 2:
                    state.apply_1q(cmd.node, PAULI_MATS[cmd.pauli])
                continue
            if isinstance(cmd, Measure):
                basis = measurement_basis(cmd.label, _resolved_angle(cmd, outcomes))
                if branch_policy == "all" and cmd.node not in forced_map:
                    p0, post0 = state.project(cmd.node, basis[:, 0])
                    p1, post1 = state.project(cmd.node, basis[:, 1])
                    for bit, p_raw, post in ((0, p0, post0), (1, p1, post1)):
                        if p_raw < 1e-13:
                            continue
                        post.amps = post.amps / math.sqrt(p_raw)
                        walk(post, j + 1, {**outcomes, cmd.node: bit}, prob * p_raw)
                    return
                if branch_policy == "forced" or cmd.node in forced_map:
                    bit, p_raw, state = state.measure(cmd.node, basis, forced=forced_map.get(cmd.node, 0))
                else:
                    bit, p_raw, state = state.measure(cmd.node, basis, rng=rng)
                outcomes = {**outcomes, cmd.node: bit}
                prob *= p_raw
                continue
        results.append(BranchResult(outcomes, state, prob))

    walk(init, 0, {}, 1.0)
    return results


@dataclass
class DeterminismReport:
    deterministic: bool
    min_fidelity: float
    branch_count: int
    trials: list[float]

    def __bool__(self) -> bool:
        return self.deterministic


def check_determinism(
    pattern: Pattern,
    trials: int = 0,
    seed: int = 0,
    input_state: StateVector | None = None,
    tol: float = ATOL,
    forced: Mapping[int, int] | None = None,
) -> DeterminismReport:
    """All branches must coincide up to a global phase.

    With ``trials`` > 0, every plane-labeled base angle is additionally
    resampled uniformly that many times (the uniform-determinism test).
    """

    def one_run(pat: Pattern) -> float:
        branches = run_pattern(pat, input_state=input_state, branch_policy="all", forced=forced)
        ref = branches[0].final_state
        return min(b.final_state.fidelity_up_to_phase(ref) for b in branches)

    base = run_pattern(pattern, input_state=input_state, branch_policy="all", forced=forced)
    ref = base[0].final_state
    min_fid = min(b.final_state.fidelity_up_to_phase(ref) for b in base)
    trial_fids: list[float] = []
    rng = np.random.default_rng(seed)
    plane_nodes = [
        c.node for c in pattern.commands if isinstance(c, Measure) and c.label.kind.is_plane
    ]
    for _ in range(trials):
        angles = {n: float(rng.uniform(0, 2 * math.pi)) for n in plane_nodes}
        trial_fids.append(one_run(pattern.with_angles(angles)))
    worst = min([min_fid, *trial_fids])
    return DeterminismReport(worst >= 1 - tol, worst, len(base), trial_fids)


def extract_branch_operators(
    pattern: Pattern,
    input_nodes: Sequence[int] | None = None,
    output_nodes: Sequence[int] | None = None,
    forced: Mapping[int, int] | None = None,
) -> dict[tuple[int, ...], np.ndarray]:
    """Per-branch linear operators from inputs to outputs.

    For each branch bitstring b (in measurement order) present for every
    computational-basis input, the unnormalized Kraus operator is assembled
    column by column and rescaled to a unitary. Raises if a branch is not
    proportional to a unitary (pattern not deterministic-up-to-Pauli).
    """
    inputs = tuple(sorted(input_nodes if input_nodes is not None else pattern.graph.inputs))
    outputs = tuple(sorted(output_nodes if output_nodes is not None else pattern.graph.outputs))
    measured = pattern.measured_nodes
    dim = 1 << len(inputs)
    per_input: list[dict[tuple[int, ...], tuple[float, StateVector]]] = []
    for idx in range(dim):
        bits = {q: (idx >> (len(inputs) - 1 - k)) & 1 for k, q in enumerate(inputs)}
        st = StateVector.computational(inputs, bits) if inputs else None
        branches = run_pattern(pattern, input_state=st, branch_policy="all", forced=forced)
        table: dict[tuple[int, ...], tuple[float, StateVector]] = {}
        for br in branches:
            key = tuple(br.outcomes[n] for n in measured)
            table[key] = (br.probability, br.final_state)
        per_input.append(table)
    common = set(per_input[0])
    for table in per_input[1:]:
        common &= set(table)
    out: dict[tuple[int, ...], np.ndarray] = {}
    for key in sorted(common):
        cols = []
        for idx in range(dim):
            prob, state = per_input[idx][key]
            if tuple(state.qubits) != outputs:
                raise SimulationError(
                    f"final state lives on {state.qubits}, expected outputs {outputs}"
                )
            cols.append(math.sqrt(prob) * state.amps)
        mat = np.column_stack(cols)
        scale = np.linalg.norm(mat) / math.sqrt(dim)
        if scale < 1e-12:
            continue
        mat = mat / scale
        if np.linalg.norm(mat @ mat.conj().T - np.eye(dim)) > 1e-6:
            raise SimulationError(
                f"branch {key} is not proportional to a unitary; "
                "pattern is not deterministic up to Pauli on this branch"
            )
        out[key] = _fix_global_phase(mat)
    return out


def _fix_global_phase(mat: np.ndarray) -> np.ndarray:
    """Make the first nonzero entry of the first nonzero column positive-real."""
    for j in range(mat.shape[1]):
        col = mat[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-9)
        if nz.size:
            ref = col[nz[0]]
            return mat * (abs(ref) / ref)
    return mat


def extract_unitary(
    pattern: Pattern,
    input_nodes: Sequence[int] | None = None,
    output_nodes: Sequence[int] | None = None,
    tol: float = ATOL,
    forced: Mapping[int, int] | None = None,
) -> np.ndarray:
    """The single unitary a deterministic pattern implements.

    All branches must agree up to global phase; the returned matrix has its
    global phase fixed by making the first nonzero column entry positive-real.
    """
    ops = extract_branch_operators(pattern, input_nodes, output_nodes, forced=forced)
    if not ops:
        raise SimulationError("no common branches; cannot extract a unitary")
    mats = list(ops.values())
    ref = mats[0]
    dim = ref.shape[0]
    for m in mats[1:]:
        if abs(abs(np.trace(ref.conj().T @ m)) / dim - 1.0) > tol:
            raise SimulationError("pattern is not deterministic; branch unitaries differ")
    return ref


def matrices_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = ATOL) -> bool:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    return bool(abs(abs(np.vdot(a, b)) / (na * nb) - 1.0) < tol)


def equal_up_to_pauli(
    a: np.ndarray,
    b: np.ndarray,
    allowed: Iterable[PauliString] | None = None,
    qubits: Sequence[int] | None = None,
    tol: float = ATOL,
) -> PauliString | None:
    """The Pauli P with a ≈ P·b up to global phase, if one exists.

    ``allowed`` defaults to every letter combination over ``qubits`` (which
    default to 0..k-1 for k = log2(dim)).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return None
    n = int(round(math.log2(a.shape[0])))
    if qubits is None:
        qubits = tuple(range(n))
    if allowed is None:
        allowed = [
            PauliString.make(dict(zip(qubits, letters)))
            for letters in iter_product("IXYZ", repeat=n)
        ]
    for p in allowed:
        if matrices_equal_up_to_phase(a, p.to_matrix(qubits) @ b, tol):
            return p
    return None

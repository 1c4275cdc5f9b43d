"""Diagonal unitaries on the register graph.

Any U = diag(exp(i*alpha_k)) decomposes as exp(i sum_s beta_s Z^s1 x...x Z^sn)
with the beta given by the Sylvester-ordered Hadamard transform of the phase
vector. Each nonzero beta with s != 0 becomes one YZ-measured parity qubit
attached to the base qubits its bitstring selects; measuring it at angle
-2*beta applies exp(i*beta Z...Z) exactly, with a Z correction on its
neighborhood for the unwanted outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product
from typing import Mapping, Sequence

import numpy as np

from ..flow import FlowCandidate, construct_rl_gflow
from ..graphs import (
    Graph,
    GraphError,
    LabeledOpenGraph,
    MeasurementLabel,
    LabelKind,
    odd_neighborhood,
    yz,
)
from ..pattern import Correct, Measure, ParityLabel, Pattern, standard_commands

Bits = tuple[int, ...]


def walsh_coefficients(alpha: Sequence[float]) -> dict[Bits, float]:
    """beta = H_{2^n} alpha / 2^n with Sylvester row order.

    Row s = (s_1..s_n) of the Hadamard matrix is the diagonal of
    Z^{s_1} x ... x Z^{s_n}, s_1 the most significant bit, so
    alpha_k = sum_s beta_s (-1)^{s.k}.
    """
    size = len(alpha)
    n = size.bit_length() - 1
    if size != 1 << n or size == 0:
        raise ValueError(f"need a power-of-two phase vector, got length {size}")
    beta: dict[Bits, float] = {}
    for row in range(size):
        acc = 0.0
        for k in range(size):
            sign = -1.0 if (row & k).bit_count() % 2 else 1.0
            acc += sign * alpha[k]
        bits = tuple((row >> (n - 1 - j)) & 1 for j in range(n))
        beta[bits] = acc / size
    return beta


def phases_from_walsh(beta: Mapping[Bits, float], n: int) -> list[float]:
    """Inverse transform: alpha_k = sum_s beta_s (-1)^{s.k}."""
    out = []
    for k in range(1 << n):
        acc = 0.0
        for bits, value in beta.items():
            s = 0
            for b in bits:
                s = (s << 1) | b
            sign = -1.0 if (s & k).bit_count() % 2 else 1.0
            acc += sign * value
        out.append(acc)
    return out


def diagonal_matrix(alpha: Sequence[float]) -> np.ndarray:
    return np.diag(np.exp(1j * np.asarray(alpha, dtype=float)))


@dataclass(frozen=True)
class DiagonalSpec:
    """A diagonal target, as phases alpha or transform coefficients beta."""

    n: int
    beta: dict[Bits, float]

    @staticmethod
    def from_phases(alpha: Sequence[float]) -> DiagonalSpec:
        n = len(alpha).bit_length() - 1
        return DiagonalSpec(n, walsh_coefficients(alpha))

    @staticmethod
    def from_beta(n: int, beta: Mapping[Bits, float]) -> DiagonalSpec:
        clean = {}
        for bits, value in beta.items():
            bits = tuple(int(b) & 1 for b in bits)
            if len(bits) != n:
                raise ValueError(f"bitstring {bits} is not length {n}")
            clean[bits] = float(value)
        return DiagonalSpec(n, clean)

    def phases(self) -> list[float]:
        return phases_from_walsh(self.beta, self.n)

    def matrix(self) -> np.ndarray:
        return diagonal_matrix(self.phases())

    def nonzero_terms(self, tol: float = 1e-12) -> list[tuple[Bits, float]]:
        """(bits, beta) with bits != 0...0 and beta != 0, in Sylvester order."""
        out = []
        for bits in sorted(self.beta, key=lambda b: (sum(b), b)):
            if any(bits) and abs(self.beta[bits]) > tol:
                out.append((bits, self.beta[bits]))
        return out

    @property
    def global_phase(self) -> float:
        return self.beta.get((0,) * self.n, 0.0)


def build_brl_pattern(spec: DiagonalSpec, angle_tol: float = 1e-12) -> Pattern:
    """Register pattern for a diagonal target: one parity qubit per nonzero
    coefficient, base qubits both inputs and outputs.

    Base qubits are 0..n-1; parity qubits follow, ordered by (support size,
    bitstring). The parity for bits s is measured in YZ at angle -2*beta_s
    (exact: the outcome-0 projection applies exp(i*beta Z...Z)); the unwanted
    outcome is repaired by Z on the parity's neighborhood, which is the
    canonical register-logic gflow g(v) = {v}. The all-zero coefficient is
    recorded as global-phase metadata.
    """
    if spec.n < 1:
        raise GraphError("need at least one base qubit")
    bases = tuple(range(spec.n))
    edges: list[tuple[int, int]] = []
    labels: dict[int, MeasurementLabel] = {}
    parity_meta: dict[int, ParityLabel] = {}
    next_id = spec.n
    for bits, beta in spec.nonzero_terms(angle_tol):
        support = tuple(bases[j] for j, b in enumerate(bits) if b)
        for b in support:
            edges.append((next_id, b))
        labels[next_id] = yz(-2.0 * beta)
        parity_meta[next_id] = ParityLabel(frozenset(support), "Z")
        next_id += 1
    graph = Graph.from_iterables(range(next_id), edges)
    log = LabeledOpenGraph.make(graph, bases, bases, labels)
    corrections = {
        u: [(v, "Z") for v in sorted(graph.neighbors(u))] for u in labels
    }
    commands = standard_commands(log, sorted(labels), corrections=corrections)
    return Pattern(
        log,
        commands,
        parity_meta,
        {"global_phase": spec.global_phase, "target": "diagonal"},
    )


def pattern_from_gflow(
    log: LabeledOpenGraph, cand: FlowCandidate, drop_unusable: bool = False
) -> Pattern:
    """Executable pattern from a flow candidate.

    Nodes are measured by descending layer; after each measurement of u with
    outcome 1 the product of elementary stabilizers over the correction set
    is applied to the not-yet-measured qubits (X on the set, Z on its odd
    neighborhood, Y on the intersection). With ``drop_unusable`` corrections
    aimed at already-measured nodes are silently dropped instead of raising,
    which deliberately reproduces naive (invalid) strategies.
    """
    order = sorted(log.labels, key=lambda u: (-cand.layers[u], u))
    measured_before: set[int] = set()
    corrections: dict[int, list[tuple[int, str]]] = {}
    for u in order:
        targets: list[tuple[int, str]] = []
        gu = cand.correction[u]
        odd = odd_neighborhood(log.graph, gu)
        for v in sorted((gu | odd) - {u}):
            letter = "Y" if (v in gu and v in odd) else ("X" if v in gu else "Z")
            if v in measured_before or v == u:
                if drop_unusable:
                    continue
                raise GraphError(
                    f"correction for {u} targets already measured node {v}"
                )
            targets.append((v, letter))
        corrections[u] = targets
        measured_before.add(u)
    commands = standard_commands(log, order, corrections=corrections)
    return Pattern(log, commands, {}, {"target": "gflow-corrected"})

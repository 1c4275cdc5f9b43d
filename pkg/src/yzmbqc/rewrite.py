"""Pauli measurements on graph states as graph rewrites with byproduct frames.

A state is a pair (graph, frame) representing prod_v frame(v) |graph>. The
rewrite rules follow the standard local-complementation calculus (Hein et al.,
PRA 69, 062311):

  Z: delete the node, Z byproducts on its neighborhood for outcome 1;
  Y: locally complement at the node, delete it, e^{-i pi/4 Z}-type byproducts
     on its neighborhood (times the outcome-1 Z's);
  X: with a chosen neighbor b0: tau_b0 . tau_node . tau_b0 and delete, with
     the byproducts assembled from the two identities
     <x_s| e^{-i pi/4 Z} ∝ <y_{1-s}|  and  <y_t| e^{+i pi/4 X} ∝ <t|.

Correctness is defined operationally: the frame-dressed rewritten state must
equal the true projected state (tested against the dense simulator). Rules
apply verbatim on dressed states by first conjugating the measured axis
through the node's frame tag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cliffords as cl
from .cliffords import CliffordTag, LocalCliffordFrame
from .graphs import Graph, GraphError, local_complement


class RewriteError(ValueError):
    """Raised for invalid rewrite requests (bad node, missing b0, dead branch)."""


@dataclass
class GraphStateWithFrame:
    """Mutable working pair (graph, local-Clifford frame)."""

    graph: Graph
    frame: LocalCliffordFrame = field(default_factory=LocalCliffordFrame)

    def copy(self) -> GraphStateWithFrame:
        return GraphStateWithFrame(self.graph, self.frame.copy())

    def local_complement(self, v: int) -> None:
        """Rewrite G -> tau_v(G), absorbing the byproducts into the frame.

        Uses |G> = prod_{b in N(v)} e^{-i pi/4 Z_b} . e^{+i pi/4 X_v} |tau_v G>.
        """
        if v not in self.graph.nodes:
            raise RewriteError(f"unknown node {v}")
        for b in self.graph.neighbors(v):
            self.frame.compose_right(b, cl.SQRT_IZ_DAG)
        self.frame.compose_right(v, cl.SQRT_IX)
        self.graph = local_complement(self.graph, v)

    def apply_pauli(self, letters: dict[int, str]) -> None:
        """Left-multiply physical Paulis onto the dressed state."""
        for node, letter in letters.items():
            if letter != "I":
                self.frame.compose_left(node, cl.PAULI_TAGS[letter])

    def absorb_stabilizer(self, letters: dict[int, str]) -> None:
        """Multiply a bare-graph stabilizer into the frame.

        The operator acts first on the bare graph state, which it fixes, so
        the dressed state is unchanged while the tags are renormalized.
        """
        for node, letter in letters.items():
            if letter != "I":
                self.frame.compose_right(node, cl.PAULI_TAGS[letter])

    def _delete_measured(self, u: int, byproduct_z: bool) -> None:
        if byproduct_z:
            for b in self.graph.neighbors(u):
                self.frame.compose_right(b, cl.Z_GATE)
        self.graph = self.graph.without_node(u)
        self.frame.tags.pop(u, None)

    def _measure_bare(self, u: int, axis: str, outcome: int, b0: int | None) -> None:
        """Measure a bare-graph Pauli axis on the dressed node u."""
        if axis == "Z":
            self._delete_measured(u, byproduct_z=bool(outcome))
            return
        if axis == "Y":
            # <y_t| e^{+i pi/4 X} ∝ <t|, so LC at u turns Y into a Z measurement
            # with the same outcome bit.
            self.local_complement(u)
            self.frame.tags.pop(u, None)  # consumed by the projection
            self._delete_measured(u, byproduct_z=bool(outcome))
            return
        if axis == "X":
            nb = self.graph.neighbors(u)
            if not nb:
                # Isolated bare node is |+>; only outcome 0 has support.
                if outcome:
                    raise RewriteError(
                        f"X outcome 1 on isolated node {u} has zero probability"
                    )
                self._delete_measured(u, byproduct_z=False)
                return
            if b0 is None:
                b0 = min(nb)
            if b0 not in nb:
                raise RewriteError(f"b0={b0} is not a neighbor of {u}")
            # <x_s| e^{-i pi/4 Z} ∝ <y_{1+s}|: LC at b0 leaves u with an
            # e^{-i pi/4 Z} tag, flipping the measurement to Y with 1-outcome.
            self.local_complement(b0)
            self.frame.tags.pop(u, None)
            self._measure_bare(u, "Y", outcome ^ 1, None)
            # Final complementation at b0 restores the conventional graph form.
            self.local_complement(b0)
            return
        raise RewriteError(f"invalid Pauli axis {axis!r}")

    def measure_pauli(self, u: int, axis: str, b0: int | None = None, outcome: int = 0) -> None:
        """Measure qubit ``u`` of the dressed state in a Pauli basis.

        Outcome 0 is the +1 eigenstate. The node's frame tag is conjugated
        into an equivalent bare-graph measurement first, so tagged states are
        handled uniformly.
        """
        if u not in self.graph.nodes:
            raise RewriteError(f"unknown node {u}")
        if axis not in ("X", "Y", "Z"):
            raise RewriteError(f"invalid Pauli axis {axis!r}")
        tag = self.frame.tag(u)
        bare_axis, sign = tag.conj_pauli_inv(axis)
        bare_outcome = outcome ^ (1 if sign < 0 else 0)
        self._measure_bare(u, bare_axis, bare_outcome, b0)


def effective_label(tag: CliffordTag, label: "MeasurementLabel") -> tuple["MeasurementLabel", int]:
    """The bare-state measurement equivalent to measuring ``label`` on a
    tag-dressed qubit.

    Measuring observable O on F|psi> is measuring F^dag O F on |psi>; the
    conjugated observable is classified back into a plane-with-angle or an
    axis. Returns (label, outcome_flip); the flip is nonzero only for axis
    labels whose conjugate picks up a minus sign (planes absorb signs into
    the angle).
    """
    import math

    from .graphs import LabelKind, MeasurementLabel

    _PLANE_AXES = {
        LabelKind.XY: ("X", "Y"),
        LabelKind.XZ: ("Z", "X"),
        LabelKind.YZ: ("Z", "Y"),
    }
    if label.kind.is_axis:
        letter, sign = tag.conj_pauli_inv(label.kind.value)
        return MeasurementLabel(LabelKind(letter)), 1 if sign < 0 else 0
    first, second = _PLANE_AXES[label.kind]
    coef = {"X": 0.0, "Y": 0.0, "Z": 0.0}
    l1, s1 = tag.conj_pauli_inv(first)
    l2, s2 = tag.conj_pauli_inv(second)
    coef[l1] += s1 * math.cos(label.angle)
    coef[l2] += s2 * math.sin(label.angle)
    pair = {l1, l2}
    if pair == {"X", "Y"}:
        return MeasurementLabel(LabelKind.XY, math.atan2(coef["Y"], coef["X"])), 0
    if pair == {"X", "Z"}:
        return MeasurementLabel(LabelKind.XZ, math.atan2(coef["X"], coef["Z"])), 0
    return MeasurementLabel(LabelKind.YZ, math.atan2(coef["Y"], coef["Z"])), 0


def physical_angle_for(tag: CliffordTag, physical_kind: "LabelKind", target: "MeasurementLabel") -> float:
    """The physical angle t such that measuring ``physical_kind``(t) on a
    tag-dressed qubit equals the bare ``target`` measurement.

    The effective angle is an affine map sigma*t + delta with sigma = +-1 and
    delta a multiple of pi/2; both are recovered from two probe angles.
    """
    import math

    from .graphs import MeasurementLabel

    probe0, flip0 = effective_label(tag, MeasurementLabel(physical_kind, 0.0))
    probe1, _ = effective_label(tag, MeasurementLabel(physical_kind, math.pi / 2))
    if probe0.kind is not target.kind or flip0:
        raise RewriteError(
            f"tag maps {physical_kind.value} to {probe0.kind.value}; cannot reach {target.kind.value}"
        )
    delta = probe0.angle
    sigma_angle = (probe1.angle - delta) % (2 * math.pi)
    sigma = 1.0 if abs(sigma_angle - math.pi / 2) < 1e-9 else -1.0
    return sigma * (target.angle - delta)


def measure_pauli_rewrite(
    state: tuple[Graph, LocalCliffordFrame],
    u: int,
    axis: str,
    b0: int | None = None,
    outcome: int = 0,
) -> tuple[Graph, LocalCliffordFrame]:
    """Functional wrapper over :class:`GraphStateWithFrame`.

    Returns the post-measurement (graph, frame) such that the frame-dressed
    graph state equals the normalized projected state up to global phase.
    ``b0`` is only consulted when an X-type bare measurement arises; when
    omitted, the smallest-id neighbor is used.
    """
    graph, frame = state
    work = GraphStateWithFrame(graph, frame.copy())
    try:
        work.measure_pauli(u, axis, b0=b0, outcome=outcome)
    except GraphError as exc:
        raise RewriteError(str(exc)) from exc
    return work.graph, work.frame

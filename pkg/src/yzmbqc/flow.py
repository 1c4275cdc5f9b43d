"""Gflow and Pauli flow: verification, polynomial finding, brute-force search.

The partial order is represented by layer indices: layer 0 holds the maximal
elements (the outputs, for a maximally delayed flow) and u < v in the order
iff layer(v) < layer(u), i.e. v is measured later. Same-layer nodes are
incomparable.

The polynomial gflow finder is the maximally delayed construction of
Mhalla-Perdrix (extended to all three planes as in Backens et al., Quantum 5,
421), peeling layers from the outputs inward by solving GF(2) systems. The
brute forces are independent oracles: memoized searches over single-node
peels with exhaustive correction-set enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .gf2 import BitMatrix, solve
from .graphs import (
    Graph,
    GraphError,
    LabeledOpenGraph,
    LabelKind,
    MeasurementLabel,
    OpenGraph,
    all_labels_in_yz,
    all_labels_rotated_yz,
    is_bipartite_with_part,
    is_register_logic,
    odd_neighborhood,
)

PLANES = (LabelKind.XY, LabelKind.XZ, LabelKind.YZ)
AXES = (LabelKind.X, LabelKind.Y, LabelKind.Z)


class FlowSearchCapExceeded(RuntimeError):
    """Brute-force search refused: too many non-outputs for the configured cap."""


@dataclass(frozen=True)
class FlowCandidate:
    """Correction-set function plus a layered order.

    ``correction`` maps every non-output to its correction set (a subset of
    the non-inputs); ``layers`` maps every node to a layer index, layer 0
    being the latest (the outputs for maximally delayed flows).
    """

    correction: dict[int, frozenset[int]]
    layers: dict[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "correction", {u: frozenset(s) for u, s in self.correction.items()}
        )
        object.__setattr__(self, "layers", dict(self.layers))

    def precedes(self, u: int, v: int) -> bool:
        """u < v in the measurement order (v is measured later)."""
        return self.layers[v] < self.layers[u]

    def layer_sets(self) -> list[frozenset[int]]:
        depth = max(self.layers.values(), default=0)
        return [
            frozenset(n for n, k in self.layers.items() if k == d)
            for d in range(depth + 1)
        ]

    def to_dict(self) -> dict:
        return {
            "correction": {str(u): sorted(s) for u, s in sorted(self.correction.items())},
            "layers": {str(n): k for n, k in sorted(self.layers.items())},
        }

    @staticmethod
    def from_dict(data: Mapping) -> FlowCandidate:
        return FlowCandidate(
            {int(u): frozenset(v) for u, v in data["correction"].items()},
            {int(n): int(k) for n, k in data["layers"].items()},
        )


@dataclass(frozen=True)
class Violation:
    condition: str
    node: int
    detail: str

    def __str__(self) -> str:
        return f"condition {self.condition} at node {self.node}: {self.detail}"


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None


def _check_candidate_domain(log: LabeledOpenGraph, cand: FlowCandidate) -> list[Violation]:
    bad = []
    non_outputs = log.open_graph.non_outputs
    if set(cand.correction) != set(non_outputs):
        bad.append(
            Violation(
                "domain",
                -1,
                f"correction must map exactly the non-outputs {sorted(non_outputs)}",
            )
        )
    if set(cand.layers) != set(log.graph.nodes):
        bad.append(Violation("domain", -1, "layers must cover every node"))
    for u, s in cand.correction.items():
        if s & log.inputs:
            bad.append(
                Violation("domain", u, f"correction set contains inputs {sorted(s & log.inputs)}")
            )
    return bad


def verify_gflow(log: LabeledOpenGraph, cand: FlowCandidate) -> VerificationReport:
    """Literal check of the five gflow conditions.

    (a) corrections are measured later; (b) so is the odd neighborhood;
    (c) XY: u not in g(u) and u in Odd(g(u));
    (d) XZ: u in g(u) and u in Odd(g(u));
    (e) YZ: u in g(u) and u not in Odd(g(u)).
    Pauli-axis labels carry no plane condition.
    """
    violations = _check_candidate_domain(log, cand)
    if violations:
        return VerificationReport(False, tuple(violations))
    g = log.graph
    for u in sorted(log.labels):
        gu = cand.correction[u]
        odd = odd_neighborhood(g, gu)
        for v in sorted(gu - {u}):
            if not cand.precedes(u, v):
                violations.append(Violation("a", u, f"{v} in g({u}) but not after {u}"))
        for v in sorted(odd - {u}):
            if not cand.precedes(u, v):
                violations.append(Violation("b", u, f"{v} in Odd(g({u})) but not after {u}"))
        kind = log.labels[u].kind
        if kind is LabelKind.XY and not (u not in gu and u in odd):
            violations.append(Violation("c", u, "XY needs u not in g(u) and u in Odd(g(u))"))
        elif kind is LabelKind.XZ and not (u in gu and u in odd):
            violations.append(Violation("d", u, "XZ needs u in g(u) and u in Odd(g(u))"))
        elif kind is LabelKind.YZ and not (u in gu and u not in odd):
            violations.append(Violation("e", u, "YZ needs u in g(u) and u not in Odd(g(u))"))
    return VerificationReport(not violations, tuple(violations))


def verify_pauli_flow(log: LabeledOpenGraph, cand: FlowCandidate) -> VerificationReport:
    """Literal check of the nine Pauli-flow conditions.

    Unmeasured (output) nodes have no label; for them the exemption premises
    "lambda(v) not in {X,Y}" / "{Y,Z}" hold, so order is always required.
    """
    violations = _check_candidate_domain(log, cand)
    if violations:
        return VerificationReport(False, tuple(violations))
    g = log.graph

    def lam(v: int) -> LabelKind | None:
        label = log.labels.get(v)
        return label.kind if label is not None else None

    for u in sorted(log.labels):
        pu = cand.correction[u]
        odd = odd_neighborhood(g, pu)
        for v in sorted(pu - {u}):
            if lam(v) not in (LabelKind.X, LabelKind.Y) and not cand.precedes(u, v):
                violations.append(Violation("a", u, f"{v} in p({u}) but not after {u}"))
        for v in sorted(odd - {u}):
            if lam(v) not in (LabelKind.Y, LabelKind.Z) and not cand.precedes(u, v):
                violations.append(Violation("b", u, f"{v} in Odd(p({u})) but not after {u}"))
        for v in sorted(log.graph.nodes - {u}):
            if lam(v) is LabelKind.Y and not cand.precedes(u, v):
                if (v in pu) != (v in odd):
                    violations.append(
                        Violation("c", u, f"Y-node {v} not after {u} needs v in p(u) iff v in Odd(p(u))")
                    )
        kind = lam(u)
        ok = True
        if kind is LabelKind.XY:
            ok = u not in pu and u in odd
        elif kind is LabelKind.XZ:
            ok = u in pu and u in odd
        elif kind is LabelKind.YZ:
            ok = u in pu and u not in odd
        elif kind is LabelKind.X:
            ok = u in odd
        elif kind is LabelKind.Y:
            ok = (u in pu) != (u in odd)
        elif kind is LabelKind.Z:
            ok = u in pu
        if not ok:
            violations.append(Violation(kind.value.lower(), u, f"{kind.value} condition fails"))
    return VerificationReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Maximally delayed gflow (polynomial)


def _require_plane_labels(log: LabeledOpenGraph, what: str) -> None:
    for u, lab in log.labels.items():
        if not lab.kind.is_plane:
            raise GraphError(
                f"{what} is defined for plane labels only; node {u} is {lab.kind.value}"
            )


def find_maximally_delayed_gflow(log: LabeledOpenGraph) -> FlowCandidate | None:
    """Layer-by-layer maximally delayed gflow, or None when no gflow exists.

    Each stage solves, for every unprocessed u, a GF(2) system in the
    membership bits of K over the processed non-inputs:

      XY: Odd(K) outside the processed set = {u}
      XZ: Odd(K + u) outside the processed set = {u}
      YZ: Odd(K + u) outside the processed set = empty

    and adds every solvable u to the next layer, which makes each layer as
    large as possible. Layer 0 is exactly the output set.
    """
    _require_plane_labels(log, "gflow finding")
    g = log.graph
    nodes = g.sorted_nodes
    processed: set[int] = set(log.outputs)
    layers = {v: 0 for v in log.outputs}
    correction: dict[int, frozenset[int]] = {}
    k = 0
    while len(processed) < len(nodes):
        k += 1
        pool = sorted(set(processed) - log.inputs)
        rows = sorted(set(nodes) - processed)
        row_pos = {v: i for i, v in enumerate(rows)}
        a = BitMatrix.zeros(len(rows), len(pool))
        for j, w in enumerate(pool):
            for v in g.neighbors(w):
                if v in row_pos:
                    a.set(row_pos[v], j, 1)
        found: dict[int, frozenset[int]] = {}
        for u in rows:
            kind = log.labels[u].kind
            if kind in (LabelKind.XZ, LabelKind.YZ) and u in log.inputs:
                continue  # u would need to lie in its own correction set
            rhs = 0
            if kind in (LabelKind.XY, LabelKind.XZ):
                rhs |= 1 << row_pos[u]
            if kind in (LabelKind.XZ, LabelKind.YZ):
                for v in g.neighbors(u):
                    if v in row_pos:
                        rhs ^= 1 << row_pos[v]
            x = solve(a, rhs)
            if x is None:
                continue
            k_set = {pool[j] for j in range(len(pool)) if (x >> j) & 1}
            if kind in (LabelKind.XZ, LabelKind.YZ):
                k_set.add(u)
            found[u] = frozenset(k_set)
        if not found:
            return None
        for u, k_set in found.items():
            correction[u] = k_set
            layers[u] = k
            processed.add(u)
    return FlowCandidate(correction, layers)


# ---------------------------------------------------------------------------
# Brute-force searches (oracles)


def _bit_context(log: LabeledOpenGraph):
    order, masks = log.graph.bitmask_adjacency()
    pos = {n: i for i, n in enumerate(order)}
    adj = [masks[n] for n in order]
    full = (1 << len(order)) - 1

    def set_to_mask(s: Iterable[int]) -> int:
        m = 0
        for n in s:
            m |= 1 << pos[n]
        return m

    def mask_to_set(m: int) -> frozenset[int]:
        return frozenset(order[i] for i in range(len(order)) if (m >> i) & 1)

    def odd_mask(m: int) -> int:
        out = 0
        while m:
            low = m & -m
            out ^= adj[low.bit_length() - 1]
            m ^= low
        return out

    return order, pos, full, set_to_mask, mask_to_set, odd_mask


def _subsets(pool: int):
    """All subsets of a bitmask, empty set first."""
    sub = 0
    while True:
        yield sub
        if sub == pool:
            return
        sub = (sub - pool) & pool


def _peel_search(
    log: LabeledOpenGraph,
    candidate_sets: Callable[[int, int], Iterable[int]],
    accepts: Callable[[int, int, int], bool],
) -> FlowCandidate | None:
    """Memoized search over single-node peels from the outputs inward.

    ``candidate_sets(u_bit_index, processed_mask)`` yields correction masks to
    try for node index u; ``accepts(u_index, p_mask, processed_mask)`` applies
    the flow conditions. Returns a candidate with one node per layer (a linear
    refinement of the order), or None.
    """
    order, pos, full, set_to_mask, mask_to_set, _ = _bit_context(log)
    start = set_to_mask(log.outputs)
    memo: dict[int, list[tuple[int, int]] | None] = {}

    def search(processed: int) -> list[tuple[int, int]] | None:
        if processed == full:
            return []
        if processed in memo:
            return memo[processed]
        memo[processed] = None  # cut cycles (none arise, but cheap insurance)
        result = None
        for i in range(len(order)):
            if (processed >> i) & 1:
                continue
            for p_mask in candidate_sets(i, processed):
                if not accepts(i, p_mask, processed):
                    continue
                rest = search(processed | (1 << i))
                if rest is not None:
                    result = [(i, p_mask)] + rest
                    break
            if result is not None:
                break
        memo[processed] = result
        return result

    path = search(start)
    if path is None:
        return None
    layers = {v: 0 for v in log.outputs}
    correction: dict[int, frozenset[int]] = {}
    # The k-th peeled node is measured after everything peeled later, so the
    # peel depth is its layer index directly (layer 0 = outputs).
    for depth, (i, p_mask) in enumerate(path, start=1):
        layers[order[i]] = depth
        correction[order[i]] = mask_to_set(p_mask)
    return FlowCandidate(correction, layers)


def brute_force_gflow(log: LabeledOpenGraph, cap: int = 8) -> FlowCandidate | None:
    """Exhaustive gflow search over correction sets and peel orders.

    Completeness rests on the maximally delayed layer characterization: if a
    gflow exists, some node can be corrected using processed non-inputs only,
    and peeling it preserves existence. Every returned candidate passes
    :func:`verify_gflow`.
    """
    _require_plane_labels(log, "gflow search")
    non_outputs = log.open_graph.non_outputs
    if len(non_outputs) > cap:
        raise FlowSearchCapExceeded(
            f"{len(non_outputs)} non-outputs exceed the gflow brute-force cap {cap}"
        )
    order, pos, full, set_to_mask, _, odd_mask = _bit_context(log)
    in_mask = set_to_mask(log.inputs)
    kinds = {pos[u]: log.labels[u].kind for u in log.labels}

    def candidate_sets(i: int, processed: int):
        kind = kinds[i]
        pool = processed & ~in_mask
        u_bit = 1 << i
        if kind is LabelKind.XY:
            for sub in _subsets(pool):
                yield sub
        else:
            if u_bit & in_mask:
                return
            for sub in _subsets(pool):
                yield sub | u_bit

    def accepts(i: int, p_mask: int, processed: int) -> bool:
        u_bit = 1 << i
        odd = odd_mask(p_mask)
        if odd & ~processed & ~u_bit:
            return False  # condition (b): Odd(g(u)) must be measured later
        kind = kinds[i]
        u_in_p = bool(p_mask & u_bit)
        u_in_odd = bool(odd & u_bit)
        if kind is LabelKind.XY:
            return (not u_in_p) and u_in_odd
        if kind is LabelKind.XZ:
            return u_in_p and u_in_odd
        return u_in_p and not u_in_odd  # YZ

    cand = _peel_search(log, candidate_sets, accepts)
    if cand is not None:
        report = verify_gflow(log, cand)
        if not report:
            raise AssertionError(f"brute-force gflow failed verification: {report.first}")
    return cand


def brute_force_pauli_flow(
    log: LabeledOpenGraph, cap: int = 6, strict_order: bool = False
) -> FlowCandidate | None:
    """Exhaustive Pauli-flow search (Pauli-axis labels allowed).

    Any Pauli flow stays valid under linearization of its order, so searching
    over single-node peels with memoization is complete. Every returned
    candidate passes :func:`verify_pauli_flow`.

    With ``strict_order`` the Pauli-label exemptions are dropped: correction
    sets and their odd neighborhoods must lie strictly later in the order.
    Such flows are directly executable by applying the correction stabilizer
    to the not-yet-measured qubits after each unwanted outcome.
    """
    non_outputs = log.open_graph.non_outputs
    if len(non_outputs) > cap:
        raise FlowSearchCapExceeded(
            f"{len(non_outputs)} non-outputs exceed the Pauli-flow brute-force cap {cap}"
        )
    order, pos, full, set_to_mask, _, odd_mask = _bit_context(log)
    in_mask = set_to_mask(log.inputs)
    kinds: dict[int, LabelKind | None] = {i: None for i in range(len(order))}
    for u in log.labels:
        kinds[pos[u]] = log.labels[u].kind
    ax_x_or_y = 0
    ax_y_or_z = 0
    ax_y = 0
    for i, kind in kinds.items():
        if kind in (LabelKind.X, LabelKind.Y):
            ax_x_or_y |= 1 << i
        if kind in (LabelKind.Y, LabelKind.Z):
            ax_y_or_z |= 1 << i
        if kind is LabelKind.Y:
            ax_y |= 1 << i

    def candidate_sets(i: int, processed: int):
        u_bit = 1 << i
        exempt = 0 if strict_order else ax_x_or_y
        pool = (~in_mask) & (processed | u_bit | exempt) & full
        for sub in _subsets(pool):
            yield sub

    def accepts(i: int, p_mask: int, processed: int) -> bool:
        u_bit = 1 << i
        odd = odd_mask(p_mask)
        exempt_a = 0 if strict_order else ax_x_or_y
        exempt_b = 0 if strict_order else ax_y_or_z
        # (a): non-{X,Y} corrections must be measured later.
        if p_mask & ~u_bit & ~processed & ~exempt_a:
            return False
        # (b): non-{Y,Z} odd neighbors must be measured later.
        if odd & ~u_bit & ~processed & ~exempt_b:
            return False
        # (c): Y-labeled nodes not measured later need p/Odd membership to agree.
        if (p_mask ^ odd) & ax_y & ~processed & ~u_bit:
            return False
        kind = kinds[i]
        u_in_p = bool(p_mask & u_bit)
        u_in_odd = bool(odd & u_bit)
        if kind is LabelKind.XY:
            return (not u_in_p) and u_in_odd
        if kind is LabelKind.XZ:
            return u_in_p and u_in_odd
        if kind is LabelKind.YZ:
            return u_in_p and not u_in_odd
        if kind is LabelKind.X:
            return u_in_odd
        if kind is LabelKind.Y:
            return u_in_p != u_in_odd
        if kind is LabelKind.Z:
            return u_in_p
        raise AssertionError(f"unlabeled non-output index {i}")

    cand = _peel_search(log, candidate_sets, accepts)
    if cand is not None:
        report = verify_pauli_flow(log, cand)
        if not report:
            raise AssertionError(f"brute-force Pauli flow failed verification: {report.first}")
    return cand


def construct_rl_gflow(log: LabeledOpenGraph) -> FlowCandidate:
    """The canonical two-layer gflow g(v) = {v} of a register-logic graph.

    Preconditions: I is contained in O, every label is the rotated YZ plane,
    and the open graph is register-logic. All non-outputs share layer 1, so
    they are measured simultaneously in a single round.
    """
    if not log.inputs <= log.outputs:
        raise GraphError("precondition: inputs must be outputs")
    if not all_labels_rotated_yz(log):
        raise GraphError("precondition: all labels must be rotated YZ")
    if not is_register_logic(log.open_graph):
        raise GraphError("precondition: open graph must be register-logic")
    layers = {v: 0 for v in log.outputs}
    layers.update({u: 1 for u in log.open_graph.non_outputs})
    return FlowCandidate({u: frozenset({u}) for u in log.open_graph.non_outputs}, layers)


# ---------------------------------------------------------------------------
# Feature profiles and the theorem suite


@dataclass(frozen=True)
class FeatureProfile:
    """The feature flags relevant to YZ-only patterns (None = not computed)."""

    i_subset_o: bool
    i_equals_o: bool
    lambda_all_yz: bool
    lambda_subset_yz: bool
    is_rl: bool
    bipartite_wrt_inputs: bool
    has_gflow: bool | None
    has_pauli_flow: bool | None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "i_subset_o": self.i_subset_o,
            "i_equals_o": self.i_equals_o,
            "lambda_all_yz": self.lambda_all_yz,
            "lambda_subset_yz": self.lambda_subset_yz,
            "is_rl": self.is_rl,
            "bipartite_wrt_inputs": self.bipartite_wrt_inputs,
            "has_gflow": self.has_gflow,
            "has_pauli_flow": self.has_pauli_flow,
            "notes": list(self.notes),
        }


def feature_profile(
    log: LabeledOpenGraph, gflow_cap: int = 8, pauli_cap: int = 6
) -> FeatureProfile:
    """Compute all flags; flow flags become None past the configured caps."""
    notes: list[str] = []
    plane_only = all(lab.kind.is_plane for lab in log.labels.values())
    has_gflow: bool | None = None
    if plane_only:
        has_gflow = find_maximally_delayed_gflow(log) is not None
    else:
        notes.append("gflow flag skipped: Pauli-axis labels present")
    try:
        has_pauli_flow: bool | None = brute_force_pauli_flow(log, cap=pauli_cap) is not None
    except FlowSearchCapExceeded:
        has_pauli_flow = None
        notes.append(f"Pauli-flow flag unknown: over brute-force cap {pauli_cap}")
    return FeatureProfile(
        i_subset_o=log.inputs <= log.outputs,
        i_equals_o=log.inputs == log.outputs,
        lambda_all_yz=all_labels_rotated_yz(log),
        lambda_subset_yz=all_labels_in_yz(log),
        is_rl=is_register_logic(log.open_graph),
        bipartite_wrt_inputs=is_bipartite_with_part(log.graph, log.inputs),
        has_gflow=has_gflow,
        has_pauli_flow=has_pauli_flow,
        notes=tuple(notes),
    )


_IMPLICATIONS = (
    "gflow_and_yz_implies_inputs_in_outputs",
    "io_equal_and_gflow_implies_yz_and_rl",
    "subset_yz_rl_implies_gflow",
    "io_equal_yz_gflow_iff_rl",
    "pauli_flow_yz_inputs_are_outputs_or_y",
)


@dataclass
class TheoremSuiteReport:
    checked: dict[str, int] = field(default_factory=lambda: {k: 0 for k in _IMPLICATIONS})
    violations: list[tuple[int, str]] = field(default_factory=list)
    samples: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "checked": dict(self.checked),
            "violations": [list(v) for v in self.violations],
            "ok": self.ok,
        }


def check_theorem_suite(
    samples: Sequence[LabeledOpenGraph],
    gflow_cap: int = 8,
    pauli_cap: int = 7,
) -> TheoremSuiteReport:
    """Assert the implication lattice on every sample.

    1. gflow and all-YZ labels force the inputs to be outputs;
    2. I = O with gflow forces all-YZ labels and the RL form;
    3. inputs-in-outputs, all-YZ and RL force gflow;
    4. for I = O with all-YZ labels, gflow holds iff the RL form does;
    5. with a Pauli flow and labels within {YZ, Y, Z}, every input is an
       output or is Y-labeled.

    Any violation is a build-failing bug; the report lists them all.
    """
    report = TheoremSuiteReport()
    for idx, log in enumerate(samples):
        report.samples += 1
        plane_only = all(lab.kind.is_plane for lab in log.labels.values())
        i_sub = log.inputs <= log.outputs
        i_eq = log.inputs == log.outputs
        yz_all = all_labels_rotated_yz(log)
        yz_sub = all_labels_in_yz(log)
        rl = is_register_logic(log.open_graph)
        has_gflow = (
            find_maximally_delayed_gflow(log) is not None if plane_only else None
        )

        if has_gflow is not None:
            if has_gflow and yz_all:
                report.checked[_IMPLICATIONS[0]] += 1
                if not i_sub:
                    report.violations.append((idx, _IMPLICATIONS[0]))
            if i_eq and has_gflow:
                report.checked[_IMPLICATIONS[1]] += 1
                if not (yz_all and rl):
                    report.violations.append((idx, _IMPLICATIONS[1]))
            if i_sub and yz_all and rl:
                report.checked[_IMPLICATIONS[2]] += 1
                if not has_gflow:
                    report.violations.append((idx, _IMPLICATIONS[2]))
            if i_eq and yz_all:
                report.checked[_IMPLICATIONS[3]] += 1
                if has_gflow != rl:
                    report.violations.append((idx, _IMPLICATIONS[3]))

        if yz_sub:
            try:
                has_pf = brute_force_pauli_flow(log, cap=pauli_cap) is not None
            except FlowSearchCapExceeded:
                has_pf = None
            if has_pf:
                report.checked[_IMPLICATIONS[4]] += 1
                good = all(
                    u in log.outputs or log.labels[u].kind is LabelKind.Y
                    for u in log.inputs
                )
                if not good:
                    report.violations.append((idx, _IMPLICATIONS[4]))
    return report


# ---------------------------------------------------------------------------
# Samplers used by the suite, tests and CLI


def random_labeled_open_graph(
    rng,
    max_nodes: int,
    kinds: Sequence[LabelKind] = PLANES,
    edge_prob: float = 0.4,
) -> LabeledOpenGraph:
    """Random labeled open graph with valid component/input/output structure."""
    import math

    n = int(rng.integers(1, max_nodes + 1))
    while True:
        edges = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob
        ]
        graph = Graph.from_iterables(range(n), edges)
        inputs = frozenset(i for i in range(n) if rng.random() < 0.3)
        outputs = frozenset(i for i in range(n) if rng.random() < 0.4)
        # Patch up the at-least-one-terminal rule instead of rejecting.
        for comp in graph.connected_components():
            if not comp & (inputs | outputs):
                outputs |= {min(comp)}
        labels = {}
        for u in range(n):
            if u in outputs:
                continue
            kind = kinds[int(rng.integers(0, len(kinds)))]
            if kind.is_plane:
                labels[u] = MeasurementLabel(kind, float(rng.uniform(0, 2 * math.pi)))
            else:
                labels[u] = MeasurementLabel(kind)
        return LabeledOpenGraph.make(graph, inputs, outputs, labels)


def enumerate_labeled_open_graphs(
    max_nodes: int, kinds: Sequence[LabelKind] = PLANES, angle: float = 0.7
):
    """Every labeled open graph on up to ``max_nodes`` nodes.

    All edge sets, all input/output subsets, all labelings of the non-outputs
    over ``kinds`` (plane kinds get the fixed representative ``angle``), with
    open graphs violating the component rule skipped.
    """
    from itertools import combinations, product

    def label_of(kind: LabelKind) -> MeasurementLabel:
        return MeasurementLabel(kind, angle) if kind.is_plane else MeasurementLabel(kind)

    for n in range(1, max_nodes + 1):
        nodes = list(range(n))
        all_pairs = list(combinations(nodes, 2))
        for edge_bits in range(1 << len(all_pairs)):
            edges = [all_pairs[i] for i in range(len(all_pairs)) if (edge_bits >> i) & 1]
            graph = Graph.from_iterables(nodes, edges)
            comps = graph.connected_components()
            for i_bits in range(1 << n):
                inputs = frozenset(i for i in range(n) if (i_bits >> i) & 1)
                for o_bits in range(1 << n):
                    outputs = frozenset(i for i in range(n) if (o_bits >> i) & 1)
                    if any(not (c & (inputs | outputs)) for c in comps):
                        continue
                    non_outputs = sorted(set(nodes) - outputs)
                    for combo in product(kinds, repeat=len(non_outputs)):
                        labels = {u: label_of(k) for u, k in zip(non_outputs, combo)}
                        yield LabeledOpenGraph.make(graph, inputs, outputs, labels)

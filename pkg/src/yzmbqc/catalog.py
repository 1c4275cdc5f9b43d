"""Bundled example catalog: the gflow/Pauli-flow example and counterexample
graphs with their expected verdicts, shipped as JSON data files.

Each entry records the labeled open graph, the expected feature flags, and,
where one exists, the explicit flow candidate; regression tests verify the
explicit flows, confirm every stated non-existence by brute force, and check
the flags against :func:`yzmbqc.flow.feature_profile`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .flow import FlowCandidate
from .graphs import LabeledOpenGraph, labeled_graph_from_dict


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    graph: LabeledOpenGraph
    expect: dict
    gflow: FlowCandidate | None = None
    pauli_flow: FlowCandidate | None = None


def _load(name: str) -> CatalogEntry:
    text = resources.files("yzmbqc.catalog").joinpath(f"{name}.json").read_text()
    data = json.loads(text)
    return CatalogEntry(
        name=data["name"],
        description=data["description"],
        graph=labeled_graph_from_dict(data["graph"]),
        expect=data["expect"],
        gflow=FlowCandidate.from_dict(data["gflow"]) if data.get("gflow") else None,
        pauli_flow=(
            FlowCandidate.from_dict(data["pauli_flow"]) if data.get("pauli_flow") else None
        ),
    )


GFLOW_EXAMPLE_NAMES = (
    "rl_single_yz_parity",
    "non_rl_chain_no_gflow",
    "rl_blocked_input_no_gflow",
    "mixed_planes_gflow",
    "non_rl_yz_gflow",
    "disjoint_io_xy_gflow",
    "rl_mixed_planes_gflow",
    "non_bipartite_io_yz_gflow",
    "bipartite_io_yz_no_gflow",
)

PAULI_EXAMPLE_NAMES = (
    "pauli_x_pair_flow",
    "pauli_y_z_chain_flow",
)

VARIANT_NAMES = (
    "non_rl_chain_no_gflow_io",
    "rl_blocked_input_no_gflow_io",
)

REGISTER_NAMES = (
    "rl_general_example",
    "brl_diagonal_four",
)

ALL_NAMES = GFLOW_EXAMPLE_NAMES + PAULI_EXAMPLE_NAMES + VARIANT_NAMES + REGISTER_NAMES


def load_entry(name: str) -> CatalogEntry:
    if name not in ALL_NAMES:
        raise KeyError(f"unknown catalog entry {name!r}; known: {sorted(ALL_NAMES)}")
    return _load(name)


def load_all() -> list[CatalogEntry]:
    return [_load(name) for name in ALL_NAMES]

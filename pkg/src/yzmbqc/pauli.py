"""Signed Pauli strings and elementary graph-state stabilizers.

A string is i^phase times a tensor product of single-qubit letters over named
qubits; identity letters are omitted. Multiplication tracks the exact i-power
so products like X·Y = iZ come out right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .cliffords import PAULI_MATS, CliffordTag
from .graphs import GraphError, OpenGraph

_SITE_PRODUCT = {
    ("X", "X"): ("I", 0),
    ("Y", "Y"): ("I", 0),
    ("Z", "Z"): ("I", 0),
    ("X", "Y"): ("Z", 1),
    ("Y", "X"): ("Z", 3),
    ("Y", "Z"): ("X", 1),
    ("Z", "Y"): ("X", 3),
    ("Z", "X"): ("Y", 1),
    ("X", "Z"): ("Y", 3),
}


@dataclass(frozen=True)
class PauliString:
    """i^phase · tensor product of non-identity letters keyed by qubit id."""

    letters: tuple[tuple[int, str], ...]
    phase: int = 0

    @staticmethod
    def make(letters: Mapping[int, str], phase: int = 0) -> PauliString:
        cleaned = []
        for node, letter in letters.items():
            if letter == "I":
                continue
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"invalid Pauli letter {letter!r}")
            cleaned.append((int(node), letter))
        return PauliString(tuple(sorted(cleaned)), phase % 4)

    @staticmethod
    def identity() -> PauliString:
        return PauliString((), 0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", self.phase % 4)

    def as_dict(self) -> dict[int, str]:
        return dict(self.letters)

    def letter(self, node: int) -> str:
        return self.as_dict().get(node, "I")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(n for n, _ in self.letters)

    def same_letters(self, other: PauliString) -> bool:
        """Letter-wise equality, phase ignored."""
        return self.letters == other.letters

    def restrict(self, nodes: Iterable[int]) -> PauliString:
        keep = set(nodes)
        return PauliString(tuple((n, p) for n, p in self.letters if n in keep), self.phase)

    def to_matrix(self, qubit_order: Iterable[int]) -> np.ndarray:
        """Dense matrix; first qubit in ``qubit_order`` is the most significant."""
        d = self.as_dict()
        mats = [PAULI_MATS[d.get(q, "I")] for q in qubit_order]
        full = reduce(np.kron, mats) if mats else np.eye(1, dtype=complex)
        return (1j**self.phase) * full

    def __str__(self) -> str:
        prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[self.phase]
        if not self.letters:
            return prefix + "I"
        return prefix + " ".join(f"{p}{n}" for n, p in self.letters)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product a·b with the exact i-power."""
    phase = a.phase + b.phase
    da, db = a.as_dict(), b.as_dict()
    out: dict[int, str] = {}
    for node in set(da) | set(db):
        pa, pb = da.get(node, "I"), db.get(node, "I")
        if pa == "I":
            res, k = pb, 0
        elif pb == "I":
            res, k = pa, 0
        else:
            res, k = _SITE_PRODUCT[(pa, pb)]
        phase += k
        if res != "I":
            out[node] = res
    return PauliString.make(out, phase)


def multiply_all(strings: Iterable[PauliString]) -> PauliString:
    return reduce(multiply, strings, PauliString.identity())


def conjugate_by_tags(p: PauliString, tags: Mapping[int, CliffordTag]) -> PauliString:
    """(⊗U) P (⊗U)† with per-qubit Cliffords; signs fold into the i-power."""
    out: dict[int, str] = {}
    phase = p.phase
    for node, letter in p.letters:
        tag = tags.get(node)
        if tag is None:
            out[node] = letter
            continue
        new_letter, sign = tag.conj_pauli(letter)
        out[node] = new_letter
        if sign < 0:
            phase += 2
    return PauliString.make(out, phase)


def elementary_stabilizer(og: OpenGraph, u: int) -> PauliString:
    """K_u = X_u · prod_{w in N(u)} Z_w for a non-input node u."""
    if u in og.inputs:
        raise GraphError(f"node {u} is an input; it carries no elementary stabilizer")
    if u not in og.graph.nodes:
        raise GraphError(f"unknown node {u}")
    letters = {u: "X"}
    for w in og.graph.neighbors(u):
        letters[w] = "Z"
    return PauliString.make(letters)

"""The 24-element single-qubit Clifford group and per-node Clifford frames.

A group element is stored by its conjugation action on the Pauli frame
(images of X and Z as signed Paulis); a dressed operator additionally carries
a global phase exponent in units of pi/4, so a tag reproduces its 2x2 matrix
exactly: matrix = exp(i*pi*phase/4) * canonical_matrix(elem).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_LETTERS = ("X", "Y", "Z")


def _conj_action(mat: np.ndarray) -> tuple[tuple[str, int], tuple[str, int]]:
    """Images of X and Z under conjugation by ``mat`` as (letter, sign)."""
    out = []
    for letter in ("X", "Z"):
        img = mat @ PAULI_MATS[letter] @ mat.conj().T
        for target in _LETTERS:
            for sign in (1, -1):
                if np.allclose(img, sign * PAULI_MATS[target], atol=1e-9):
                    out.append((target, sign))
                    break
            else:
                continue
            break
        else:
            raise ValueError("matrix is not Clifford")
    return out[0], out[1]


def _build_tables():
    """Enumerate C24 by BFS over words in {H, S}; canonical matrix per element."""
    reps: dict[tuple, np.ndarray] = {}
    order: list[tuple] = []
    queue = [np.eye(2, dtype=complex)]
    while queue:
        mat = queue.pop(0)
        key = _conj_action(mat)
        if key in reps:
            continue
        reps[key] = mat
        order.append(key)
        queue.append(mat @ _H)
        queue.append(mat @ _S)
    assert len(order) == 24
    index = {key: i for i, key in enumerate(order)}
    mats = [reps[key] for key in order]
    return order, index, mats


_ACTIONS, _INDEX, _MATS = _build_tables()


def _phase_exponent(ratio: complex) -> int:
    """k with ratio == exp(i*pi*k/4), or raise."""
    k = round(cmath.phase(ratio) / (math.pi / 4)) % 8
    if not cmath.isclose(ratio, cmath.exp(1j * math.pi * k / 4), abs_tol=1e-9):
        raise ValueError(f"phase {ratio} is not a multiple of pi/4")
    return k


def _compose_elems(a: int, b: int) -> tuple[int, int]:
    """(elem, phase) of MATS[a] @ MATS[b]."""
    prod = _MATS[a] @ _MATS[b]
    key = _conj_action(prod)
    c = _INDEX[key]
    ref = _MATS[c]
    i, j = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    return c, _phase_exponent(prod[i, j] / ref[i, j])


_COMPOSE = [[_compose_elems(a, b) for b in range(24)] for a in range(24)]
_INVERSE: list[tuple[int, int]] = []
for _a in range(24):
    _inv_mat = _MATS[_a].conj().T
    _key = _conj_action(_inv_mat)
    _c = _INDEX[_key]
    _i, _j = np.unravel_index(np.argmax(np.abs(_MATS[_c])), (2, 2))
    _INVERSE.append((_c, _phase_exponent(_inv_mat[_i, _j] / _MATS[_c][_i, _j])))


@dataclass(frozen=True)
class CliffordTag:
    """A single-qubit Clifford with tracked global phase (pi/4 units)."""

    elem: int
    phase: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", self.phase % 8)

    @staticmethod
    def from_matrix(mat: np.ndarray) -> CliffordTag:
        key = _conj_action(np.asarray(mat, dtype=complex))
        elem = _INDEX[key]
        ref = _MATS[elem]
        i, j = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
        return CliffordTag(elem, _phase_exponent(mat[i, j] / ref[i, j]))

    def matrix(self) -> np.ndarray:
        return cmath.exp(1j * math.pi * self.phase / 4) * _MATS[self.elem]

    def compose(self, other: CliffordTag) -> CliffordTag:
        """self . other: apply ``other`` first, then ``self``."""
        elem, k = _COMPOSE[self.elem][other.elem]
        return CliffordTag(elem, self.phase + other.phase + k)

    def inverse(self) -> CliffordTag:
        elem, k = _INVERSE[self.elem]
        return CliffordTag(elem, k - self.phase)

    def conj_pauli(self, letter: str) -> tuple[str, int]:
        """U P U-dagger as (letter, sign); phase-independent."""
        (px, sx), (pz, sz) = _ACTIONS[self.elem]
        if letter == "X":
            return px, sx
        if letter == "Z":
            return pz, sz
        if letter == "Y":
            # Y = i X Z, so U Y U* = i (sx px)(sz pz).
            prod = PAULI_MATS[px] @ PAULI_MATS[pz]
            for target in _LETTERS:
                for sign in (1, -1):
                    if np.allclose(1j * sx * sz * prod, sign * PAULI_MATS[target], atol=1e-9):
                        return target, sign
        raise ValueError(f"unknown Pauli letter {letter!r}")

    def conj_pauli_inv(self, letter: str) -> tuple[str, int]:
        """U-dagger P U as (letter, sign)."""
        return self.inverse().conj_pauli(letter)

    @property
    def is_identity(self) -> bool:
        return self.elem == IDENTITY.elem

    @property
    def is_pauli(self) -> bool:
        """True iff the action fixes X and Z up to sign (element of {I,X,Y,Z})."""
        (px, _), (pz, _) = _ACTIONS[self.elem]
        return px == "X" and pz == "Z"

    def pauli_letter(self) -> str:
        """For Pauli-class tags: which Pauli the element is (mod phase)."""
        (_, sx), (_, sz) = _ACTIONS[self.elem]
        if not self.is_pauli:
            raise ValueError("tag is not Pauli-class")
        return {(1, 1): "I", (1, -1): "X", (-1, -1): "Y", (-1, 1): "Z"}[(sx, sz)]

    def __str__(self) -> str:
        return f"C24[{self.elem}]·e^(iπ{self.phase}/4)"


def _tag(mat: np.ndarray) -> CliffordTag:
    return CliffordTag.from_matrix(mat)


IDENTITY = _tag(np.eye(2, dtype=complex))
HADAMARD = _tag(_H)
S_GATE = _tag(_S)
S_DAGGER = _tag(_S.conj().T)
X_GATE = _tag(PAULI_MATS["X"])
Y_GATE = _tag(PAULI_MATS["Y"])
Z_GATE = _tag(PAULI_MATS["Z"])
PAULI_TAGS = {"I": IDENTITY, "X": X_GATE, "Y": Y_GATE, "Z": Z_GATE}

# Local-complementation byproduct factors.
SQRT_IZ = _tag(np.diag([cmath.exp(1j * math.pi / 4), cmath.exp(-1j * math.pi / 4)]))  # e^{+i pi/4 Z}
SQRT_IZ_DAG = SQRT_IZ.inverse()  # e^{-i pi/4 Z}
SQRT_IX = _tag(_H @ SQRT_IZ.matrix() @ _H)  # e^{+i pi/4 X}
SQRT_IX_DAG = SQRT_IX.inverse()  # e^{-i pi/4 X}


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Matrix equality modulo a global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    inner = np.vdot(a, b)
    return abs(abs(inner) / (na * nb) - 1.0) < tol


@dataclass
class LocalCliffordFrame:
    """Per-node Clifford tags plus one tracked global phase exponent.

    The frame represents prod_v tag(v) applied on top of a bare graph state;
    nodes without an entry carry the identity.
    """

    tags: dict[int, CliffordTag] = field(default_factory=dict)
    phase: int = 0

    def tag(self, node: int) -> CliffordTag:
        return self.tags.get(node, IDENTITY)

    def compose_right(self, node: int, factor: CliffordTag) -> None:
        """tag(node) <- tag(node) . factor (``factor`` acts first)."""
        new = self.tag(node).compose(factor)
        self._store(node, new)

    def compose_left(self, node: int, factor: CliffordTag) -> None:
        """tag(node) <- factor . tag(node) (``factor`` acts last)."""
        new = factor.compose(self.tag(node))
        self._store(node, new)

    def _store(self, node: int, new: CliffordTag) -> None:
        if new.is_identity:
            self.phase = (self.phase + new.phase) % 8
            self.tags.pop(node, None)
        else:
            self.tags[node] = new

    def drop(self, node: int) -> None:
        gone = self.tags.pop(node, None)
        if gone is not None:
            # Only the phase convention survives removal of a measured node.
            self.phase = (self.phase + gone.phase) % 8
            # The non-phase part acted on a projected qubit; its effect on the
            # retained state was already accounted for by the rewrite rules.

    def copy(self) -> LocalCliffordFrame:
        return LocalCliffordFrame(dict(self.tags), self.phase)

    def unitaries(self) -> dict[int, np.ndarray]:
        return {node: tag.matrix() for node, tag in self.tags.items()}

    def restricted(self, nodes: Iterable[int]) -> LocalCliffordFrame:
        keep = set(nodes)
        return LocalCliffordFrame(
            {n: t for n, t in self.tags.items() if n in keep}, self.phase
        )


def frame_from_unitaries(mats: Mapping[int, np.ndarray]) -> LocalCliffordFrame:
    return LocalCliffordFrame({n: _tag(m) for n, m in mats.items()})

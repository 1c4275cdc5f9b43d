"""Dense GF(2) linear algebra on int-bitset rows.

Rows are Python ints; bit j of a row is column j. Elimination uses the first
available pivot in ascending column order so solutions are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class BitMatrix:
    """Row-major bit matrix over GF(2)."""

    rows: int
    cols: int
    data: list[int]

    @staticmethod
    def zeros(rows: int, cols: int) -> BitMatrix:
        return BitMatrix(rows, cols, [0] * rows)

    @staticmethod
    def identity(n: int) -> BitMatrix:
        return BitMatrix(n, n, [1 << i for i in range(n)])

    @staticmethod
    def from_rows(rows: list[list[int]]) -> BitMatrix:
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            acc = 0
            for j, bit in enumerate(row):
                if bit & 1:
                    acc |= 1 << j
            data.append(acc)
        return BitMatrix(n_rows, n_cols, data)

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"bit ({i},{j}) out of range")
        return (self.data[i] >> j) & 1

    def set(self, i: int, j: int, bit: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"bit ({i},{j}) out of range")
        if bit & 1:
            self.data[i] |= 1 << j
        else:
            self.data[i] &= ~(1 << j)

    def row_list(self, i: int) -> list[int]:
        return [(self.data[i] >> j) & 1 for j in range(self.cols)]

    def mul_vec(self, x: int) -> int:
        """Matrix-vector product; x and result are bit-vectors as ints."""
        out = 0
        for i in range(self.rows):
            if (self.data[i] & x).bit_count() & 1:
                out |= 1 << i
        return out

    def copy(self) -> BitMatrix:
        return BitMatrix(self.rows, self.cols, list(self.data))


def _eliminate(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place RREF; returns (pivot column per pivot row, reduced rows)."""
    work = list(rows)
    pivots: list[int] = []
    row_idx = 0
    for col in range(cols):
        pivot = None
        for r in range(row_idx, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and ((work[r] >> col) & 1):
                work[r] ^= work[row_idx]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break
    return pivots, work


def rank(a: BitMatrix) -> int:
    pivots, _ = _eliminate(a.data, a.cols)
    return len(pivots)


def solve(a: BitMatrix, b: int | list[int]) -> int | None:
    """Some x with a·x = b over GF(2), or None if inconsistent.

    ``b`` may be an int bit-vector or a 0/1 list of length a.rows. The
    returned x is an int bit-vector; free variables are set to 0, so the
    answer is deterministic.
    """
    if isinstance(b, list):
        if len(b) != a.rows:
            raise ValueError(f"rhs length {len(b)} != rows {a.rows}")
        b_int = 0
        for i, bit in enumerate(b):
            if bit & 1:
                b_int |= 1 << i
    else:
        b_int = b
    # Augment with the rhs as an extra column.
    aug = [a.data[i] | (((b_int >> i) & 1) << a.cols) for i in range(a.rows)]
    pivots, work = _eliminate(aug, a.cols)
    # Inconsistent iff some reduced row is 0...0|1.
    for r in range(len(pivots), a.rows):
        if work[r] >> a.cols:
            return None
    x = 0
    for r, col in enumerate(pivots):
        if (work[r] >> a.cols) & 1:
            x |= 1 << col
    return x


def kernel_basis(a: BitMatrix) -> list[int]:
    """Basis of the null space; len == cols - rank."""
    pivots, work = _eliminate(a.data, a.cols)
    pivot_set = set(pivots)
    basis: list[int] = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for r, col in enumerate(pivots):
            if (work[r] >> free) & 1:
                vec |= 1 << col
        basis.append(vec)
    return basis

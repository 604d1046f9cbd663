"""Boolean matrices over the two-element field.

Rows are bitsets packed into uint64 words; Gaussian elimination is handed
to the kernel layer (numba or numpy, see _kernels).  All mutating work
happens on copies, so BooleanMatrix values can be shared freely.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


def pack_rows(rows: list[int], ncols: int) -> np.ndarray:
    """Pack python-int bitmask rows into a (n, words) uint64 array."""
    words = max(1, (ncols + 63) >> 6)
    out = np.zeros((len(rows), words), dtype=np.uint64)
    mask = (1 << 64) - 1
    for r, bits in enumerate(rows):
        w = 0
        while bits:
            out[r, w] = bits & mask
            bits >>= 64
            w += 1
    return out


def unpack_row(row: np.ndarray) -> int:
    bits = 0
    for w in range(row.shape[0] - 1, -1, -1):
        bits = (bits << 64) | int(row[w])
    return bits


class BooleanMatrix:
    """An immutable rows x cols matrix over GF(2).

    Construct with ``BooleanMatrix(nrows, ncols, rows)`` where ``rows`` is a
    list of python ints, bit j of rows[i] being entry (i, j).
    """

    __slots__ = ("nrows", "ncols", "rows", "_rank")

    def __init__(self, nrows: int, ncols: int, rows: list[int]):
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(rows)
        self._rank: int | None = None

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "BooleanMatrix":
        return cls(nrows, ncols, [0] * nrows)

    @classmethod
    def identity(cls, n: int) -> "BooleanMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries) -> "BooleanMatrix":
        rows = [0] * nrows
        for i, j in entries:
            rows[i] ^= 1 << j
        return cls(nrows, ncols, rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row_support(self, i: int) -> list[int]:
        bits = self.rows[i]
        out = []
        j = 0
        while bits:
            if bits & 1:
                out.append(j)
            bits >>= 1
            j += 1
        return out

    def transpose(self) -> "BooleanMatrix":
        cols = [0] * self.ncols
        for i, bits in enumerate(self.rows):
            j = 0
            while bits:
                if bits & 1:
                    cols[j] |= 1 << i
                bits >>= 1
                j += 1
        return BooleanMatrix(self.ncols, self.nrows, cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BooleanMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __matmul__(self, other: "BooleanMatrix") -> "BooleanMatrix":
        """Row-vector convention: (A @ B)[i] = sum_j A[i,j] B[j]."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for bits in self.rows:
            acc = 0
            j = 0
            while bits:
                if bits & 1:
                    acc ^= other.rows[j]
                bits >>= 1
                j += 1
            out.append(acc)
        return BooleanMatrix(self.nrows, other.ncols, out)

    def __add__(self, other: "BooleanMatrix") -> "BooleanMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return BooleanMatrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    def is_zero(self) -> bool:
        return not any(self.rows)

    def apply(self, vector: int) -> int:
        """Image of a row vector (bitmask over nrows) under the matrix."""
        acc = 0
        i = 0
        while vector:
            if vector & 1:
                acc ^= self.rows[i]
            vector >>= 1
            i += 1
        return acc

    def rank(self) -> int:
        if self._rank is None:
            self._rank, _ = self.rref()
        return self._rank

    def rref(self) -> tuple[int, list[int]]:
        """Rank and pivot columns of the reduced row echelon form."""
        packed = pack_rows(list(self.rows), self.ncols)
        rank, pivots = _kernels.gf2_eliminate(packed, self.ncols)
        self._rank = rank
        return rank, pivots

    def nullspace(self) -> list[int]:
        """Basis of the right kernel {x : A x = 0}.

        Vectors are bitmasks over the columns.  The basis is the standard
        one read off the reduced echelon form: one vector per free column,
        deterministic in column order.
        """
        packed = pack_rows(list(self.rows), self.ncols)
        rank, pivots = _kernels.gf2_eliminate(packed, self.ncols)
        self._rank = rank
        pivot_set = set(pivots)
        free_cols = [c for c in range(self.ncols) if c not in pivot_set]
        reduced = [unpack_row(packed[r]) for r in range(rank)]
        basis = []
        for fc in free_cols:
            vec = 1 << fc
            for r, pc in enumerate(pivots):
                if (reduced[r] >> fc) & 1:
                    vec |= 1 << pc
            basis.append(vec)
        return basis


def eliminate_packed(rows: np.ndarray, ncols: int) -> tuple[int, list[int]]:
    """Thin passthrough to the active kernel for pre-packed matrices."""
    return _kernels.gf2_eliminate(rows, ncols)


class IncrementalBasis:
    """Grow a row space one vector at a time over GF(2).

    Rows are python-int bitmasks.  ``add`` reduces the incoming row against
    the current pivots and keeps it when independent; returns True when the
    row enlarged the space.
    """

    __slots__ = ("ncols", "pivot_rows", "pivot_cols")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: list[int] = []
        self.pivot_cols: list[int] = []

    def reduce(self, row: int) -> int:
        for col, prow in zip(self.pivot_cols, self.pivot_rows):
            if (row >> col) & 1:
                row ^= prow
        return row

    def add(self, row: int) -> bool:
        row = self.reduce(row)
        if row == 0:
            return False
        col = row.bit_length() - 1
        # keep earlier pivots reduced so membership tests stay one pass
        for i, prow in enumerate(self.pivot_rows):
            if (prow >> col) & 1:
                self.pivot_rows[i] = prow ^ row
        self.pivot_rows.append(row)
        self.pivot_cols.append(col)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def contains(self, row: int) -> bool:
        return self.reduce(row) == 0

"""Packed boolean matrices: rank, rref, nullspace, multiplication.

The independent rank oracle enumerates the whole row span (all XOR
combinations of rows) and takes log2 of its size; feasible up to a
dozen rows, which is plenty to catch elimination bugs.
"""

from __future__ import annotations

import random

import pytest

from strandfloer.gf2 import BooleanMatrix, IncrementalBasis, pack_rows, unpack_row


def _span_rank(rows: list[int]) -> int:
    span = {0}
    for r in rows:
        span |= {v ^ r for v in span}
    size = len(span)
    assert size & (size - 1) == 0
    return size.bit_length() - 1


def _random_rows(rng: random.Random, nrows: int, ncols: int) -> list[int]:
    return [rng.getrandbits(ncols) for _ in range(nrows)]


def test_pack_unpack_roundtrip():
    rows = [0b1011, 0b0100, 0, (1 << 130) | 1]
    packed = pack_rows(rows, 131)
    assert packed.shape == (4, 3)
    assert [unpack_row(packed[i]) for i in range(4)] == rows


def test_identity_and_zero():
    eye = BooleanMatrix.identity(5)
    assert eye.rank() == 5
    assert eye.nullspace() == []
    z = BooleanMatrix.zero(3, 4)
    assert z.rank() == 0
    assert z.is_zero()
    assert len(z.nullspace()) == 4


def test_entry_and_row_support():
    m = BooleanMatrix.from_entries(2, 3, [(0, 0), (0, 2), (1, 1)])
    assert m.entry(0, 2) == 1
    assert m.entry(1, 2) == 0
    assert m.row_support(0) == [0, 2]


def test_bad_rows_rejected():
    with pytest.raises(ValueError):
        BooleanMatrix(2, 3, [0b111])
    with pytest.raises(ValueError):
        BooleanMatrix(1, 3, [0b1000])


def test_rank_matches_span_oracle():
    rng = random.Random(7)
    for _ in range(40):
        nrows = rng.randrange(1, 11)
        ncols = rng.randrange(1, 13)
        rows = _random_rows(rng, nrows, ncols)
        m = BooleanMatrix(nrows, ncols, rows)
        assert m.rank() == _span_rank(rows)


def test_rref_pivots_are_consistent():
    rng = random.Random(11)
    for _ in range(20):
        rows = _random_rows(rng, 8, 10)
        m = BooleanMatrix(8, 10, rows)
        rank, pivots = m.rref()
        assert rank == len(pivots)
        assert pivots == sorted(pivots)
        assert rank == m.rank()


def test_nullspace_contract():
    # One vector per free column, in ascending free-column order; vector j
    # has bit free_cols[j] set, possibly pivot-column bits, nothing else.
    rng = random.Random(3)
    for _ in range(30):
        nrows = rng.randrange(1, 9)
        ncols = rng.randrange(1, 12)
        rows = _random_rows(rng, nrows, ncols)
        m = BooleanMatrix(nrows, ncols, rows)
        rank, pivots = m.rref()
        free = [c for c in range(ncols) if c not in set(pivots)]
        basis = m.nullspace()
        assert len(basis) == ncols - rank == len(free)
        pivot_mask = sum(1 << p for p in pivots)
        for j, v in enumerate(basis):
            for row in rows:
                assert bin(row & v).count("1") % 2 == 0
            for i, fc in enumerate(free):
                assert (v >> fc) & 1 == (1 if i == j else 0)
            assert v & ~(pivot_mask | (1 << free[j])) == 0


def test_matmul_against_direct_sum():
    rng = random.Random(19)
    a_rows = _random_rows(rng, 6, 7)
    b_rows = _random_rows(rng, 7, 9)
    a = BooleanMatrix(6, 7, a_rows)
    b = BooleanMatrix(7, 9, b_rows)
    c = a @ b
    assert (c.nrows, c.ncols) == (6, 9)
    for i in range(6):
        acc = 0
        for j in range(7):
            if (a_rows[i] >> j) & 1:
                acc ^= b_rows[j]
        assert c.rows[i] == acc


def test_apply_is_row_vector_action():
    rng = random.Random(29)
    rows = _random_rows(rng, 6, 7)
    m = BooleanMatrix(6, 7, rows)
    v = rng.getrandbits(6)
    acc = 0
    for i in range(6):
        if (v >> i) & 1:
            acc ^= rows[i]
    assert m.apply(v) == acc


def test_add_is_entrywise_xor():
    a = BooleanMatrix(2, 3, [0b101, 0b010])
    b = BooleanMatrix(2, 3, [0b011, 0b010])
    assert (a + b).rows == (0b110, 0)


def test_transpose_involution():
    rng = random.Random(23)
    rows = _random_rows(rng, 5, 8)
    m = BooleanMatrix(5, 8, rows)
    t = m.transpose()
    assert (t.nrows, t.ncols) == (8, 5)
    assert t.transpose().rows == tuple(rows)
    assert t.rank() == m.rank()
    for i in range(5):
        for j in range(8):
            assert m.entry(i, j) == t.entry(j, i)


def test_incremental_basis():
    basis = IncrementalBasis(3)
    assert basis.add(0b101)
    assert basis.add(0b011)
    assert not basis.add(0b110)  # dependent: xor of the first two
    assert basis.rank == 2
    assert basis.contains(0b110)
    assert not basis.contains(0b100)
    assert basis.reduce(0b101) == 0


def test_incremental_basis_matches_matrix_rank():
    rng = random.Random(31)
    for _ in range(15):
        rows = _random_rows(rng, 9, 9)
        basis = IncrementalBasis(9)
        for r in rows:
            basis.add(r)
        assert basis.rank == BooleanMatrix(9, 9, rows).rank()


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        BooleanMatrix.identity(3) @ BooleanMatrix.identity(4)
    with pytest.raises(ValueError):
        BooleanMatrix.zero(2, 3) + BooleanMatrix.zero(3, 2)

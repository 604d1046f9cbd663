"""Chain complexes over GF(2), strict right dg-modules over a strands
algebra table, morphism complexes and homology ranks.

The morphism space Mor(M, N) is computed the long way around: module
maps are unknown matrices, every algebra generator contributes the
linearity constraints f(m(x,a)) = m(f(x),a), and the solution space is
the kernel of that homogeneous system.  The solver is generic sparse
GF(2) reduction: weight-one rows zero a variable, weight-two rows
identify two variables, and whatever remains goes through packed
elimination.  Nothing here assumes the modules are projective; the
yoneda_check comparison against e_t A e_s is meaningful precisely
because the two sides are computed by unrelated routes.

Unknowns are allocated for the in-block matrix entries only (row and
column carrying the same idempotent block): the action rows of the
idempotent generators are weight-one constraints zeroing every off-block
entry, so restricting the unknown set is the presolved form of exactly
those rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import BooleanMatrix
from .strands import AlgebraTable


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ChainComplex:
    """Basis labels plus a GF(2) differential with d.d = 0 enforced."""

    def __init__(self, labels: tuple, d: BooleanMatrix):
        n = len(labels)
        if d.nrows != n or d.ncols != n:
            raise ValueError("differential shape does not match the basis")
        square = d @ d
        if any(square.rows):
            raise ValueError("differential does not square to zero")
        self.labels = tuple(labels)
        self.d = d

    @property
    def dim(self) -> int:
        return len(self.labels)

    def homology_rank(self) -> int:
        """dim ker d - rank d, which over a field is dim - 2 rank."""
        return self.dim - 2 * self.d.rank()


def homology_rank(c: ChainComplex) -> int:
    return c.homology_rank()


def hom_complex(table: AlgebraTable, s, t) -> ChainComplex:
    """The summand hom(s, t) of the algebra with the restricted differential."""
    idx = table.hom_indices(s, t)
    pos = {gi: p for p, gi in enumerate(idx)}
    rows = []
    for gi in idx:
        mask = 0
        for gj in table.diff[gi]:
            mask |= 1 << pos[gj]
        rows.append(mask)
    labels = tuple(table.gens[gi] for gi in idx)
    return ChainComplex(labels, BooleanMatrix(len(idx), len(idx), rows))


@dataclass
class RightDGModule:
    """A strict right module over an algebra table.

    The basis is adapted to the idempotent decomposition: basis element
    x is fixed by exactly one idempotent action, recorded in blocks[x].
    actions maps an algebra generator index to the matrix of its right
    action (row convention: row x is the image of x); generators acting
    by zero may be omitted.
    """

    table: AlgebraTable
    complex: ChainComplex
    blocks: tuple[int, ...]
    actions: dict[int, BooleanMatrix]

    @property
    def dim(self) -> int:
        return self.complex.dim

    def action_row(self, x: int, a: int) -> int:
        mat = self.actions.get(a)
        return mat.rows[x] if mat is not None else 0


def projective_module(table: AlgebraTable, s) -> RightDGModule:
    """e_s A with right multiplication: basis is every generator with
    source s, graded into blocks by target idempotent."""
    sid = table.idem_id[tuple(sorted(s))]
    basis = table.by_source[sid]
    pos = {gi: p for p, gi in enumerate(basis)}
    n = len(basis)

    d_rows = []
    for gi in basis:
        mask = 0
        for gj in table.diff[gi]:
            mask |= 1 << pos[gj]
        d_rows.append(mask)
    labels = tuple(table.gens[gi] for gi in basis)
    cx = ChainComplex(labels, BooleanMatrix(n, n, d_rows))

    raw: dict[int, list[int]] = {}
    for p, gi in enumerate(basis):
        for a in table.by_source[table.tgt[gi]]:
            prod = table.prod.get((gi, a))
            if prod is None:
                continue
            rows = raw.get(a)
            if rows is None:
                rows = raw[a] = [0] * n
            rows[p] |= 1 << pos[prod]
    actions = {a: BooleanMatrix(n, n, rows) for a, rows in raw.items()}
    return RightDGModule(table, cx, tuple(table.tgt[gi] for gi in basis), actions)


def verify_module_axioms(mod: RightDGModule) -> list[str]:
    """Returns a list of axiom failures (empty means the module passes).

    Checked: idempotent actions are the block projections summing to the
    identity; every action respects the source and target blocks;
    Leibniz d(xa) = (dx)a + x(da); associativity (xa)b = x(ab),
    vanishing products included.
    """
    table = mod.table
    n = mod.dim
    failures = []

    total = [0] * n
    for r, gi in enumerate(table.idem_gen):
        mat = mod.actions.get(gi)
        for x in range(n):
            expect = (1 << x) if mod.blocks[x] == r else 0
            got = mat.rows[x] if mat is not None else 0
            if got != expect:
                failures.append(f"idempotent {r} acts wrongly on basis {x}")
            total[x] ^= got
    for x in range(n):
        if total[x] != 1 << x:
            failures.append(f"idempotent actions do not sum to identity at {x}")

    block_mask = {}
    for y in range(n):
        block_mask[mod.blocks[y]] = block_mask.get(mod.blocks[y], 0) | (1 << y)
    for a, mat in mod.actions.items():
        sa, ta = table.src[a], table.tgt[a]
        for x in range(n):
            if mod.blocks[x] != sa and mat.rows[x]:
                failures.append(f"generator {a} acts outside its source block")
                break
            if mat.rows[x] & ~block_mask.get(ta, 0):
                failures.append(f"generator {a} lands outside its target block")
                break

    d = mod.complex.d
    for a in range(len(table.gens)):
        for x in range(n):
            acc = 0
            for x2 in _bits(d.rows[x]):
                acc ^= mod.action_row(x2, a)
            for y in _bits(mod.action_row(x, a)):
                acc ^= d.rows[y]
            for b in table.diff[a]:
                acc ^= mod.action_row(x, b)
            if acc:
                failures.append(f"Leibniz fails at basis {x}, generator {a}")

    for x in range(n):
        for a in table.by_source[mod.blocks[x]]:
            row_xa = mod.action_row(x, a)
            for b in table.by_source[table.tgt[a]]:
                acc = 0
                for y in _bits(row_xa):
                    acc ^= mod.action_row(y, b)
                ab = table.prod.get((a, b))
                if ab is not None:
                    acc ^= mod.action_row(x, ab)
                if acc:
                    failures.append(f"associativity fails at ({x}, {a}, {b})")
    return failures


# ---------------------------------------------------------------------------
# Morphism complexes.


class _LinearSystem:
    """Accumulates homogeneous GF(2) rows over integer variable ids and
    reduces them: a weight-one row zeroes its variable, a weight-two row
    merges the pair (union-find), heavier rows wait for elimination."""

    def __init__(self, n: int):
        self.n = n
        self.parent = list(range(n))
        self.zero = bytearray(n)
        self.rows: list[frozenset[int]] = []
        self._seen: set[frozenset[int]] = set()

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def _normalize(self, ids) -> frozenset[int]:
        out: set[int] = set()
        for i in ids:
            r = self.find(i)
            if not self.zero[r]:
                out.symmetric_difference_update((r,))
        return frozenset(out)

    def add(self, ids) -> bool:
        """Feed one row in; True when it changed a variable's fate."""
        row = self._normalize(ids)
        if not row:
            return False
        if len(row) == 1:
            (r,) = row
            self.zero[r] = 1
            return True
        if len(row) == 2:
            a, b = row
            self.parent[b] = a
            if self.zero[a] or self.zero[b]:
                self.zero[a] = 1
            return True
        if row not in self._seen:
            self._seen.add(row)
            self.rows.append(row)
        return False

    def settle(self):
        """Re-feed stored rows until a full pass changes nothing."""
        while self.rows:
            pending, self.rows, self._seen = self.rows, [], set()
            changed = False
            for row in pending:
                changed |= self.add(row)
            if not changed:
                return

    def solve(self) -> "_Solution":
        self.settle()
        root_col: dict[int, int] = {}
        reps: list[int] = []
        members: list[list[int]] = []
        for u in range(self.n):
            r = self.find(u)
            if self.zero[r]:
                continue
            col = root_col.get(r)
            if col is None:
                col = root_col[r] = len(reps)
                reps.append(u)
                members.append([])
            members[col].append(u)
        masks = []
        for row in self.rows:
            mask = 0
            for r in row:
                mask |= 1 << root_col[r]
            masks.append(mask)
        residual = BooleanMatrix(len(masks), len(reps), masks)
        _, pivots = residual.rref()
        pivot_set = set(pivots)
        free_cols = [c for c in range(len(reps)) if c not in pivot_set]
        basis = residual.nullspace()
        assert len(basis) == len(free_cols)
        return _Solution(members, reps, basis, free_cols)


@dataclass
class _Solution:
    members: list[list[int]]  # variables of each surviving class, per column
    reps: list[int]  # one representative variable per column
    basis: list[int]  # nullspace vectors over columns
    free_cols: list[int]  # defining column of each basis vector


@dataclass
class MorComplex:
    """Basis of module maps M -> N with the commutator differential."""

    source: RightDGModule
    target: RightDGModule
    maps: list[list[int]]  # each basis map as per-source-row bitmasks
    complex: ChainComplex

    @property
    def dim(self) -> int:
        return self.complex.dim

    def homology_rank(self) -> int:
        return self.complex.homology_rank()


def mor_complex(M: RightDGModule, N: RightDGModule) -> MorComplex:
    """Solve the A-linearity constraints and carry D(f) = d f + f d.

    One constraint row is written for every (generator, source basis,
    target basis) triple with a nonzero term.  The differential of each
    solution is re-expressed in the solution basis and the expansion is
    required to reproduce it exactly: the honest check that D preserves
    the space.
    """
    if M.table is not N.table:
        raise ValueError("modules live over different algebras")
    table = M.table
    nm, nn = M.dim, N.dim

    uid: dict[tuple[int, int], int] = {}
    uid_xy: list[tuple[int, int]] = []
    for x in range(nm):
        for y in range(nn):
            if M.blocks[x] == N.blocks[y]:
                uid[(x, y)] = len(uid_xy)
                uid_xy.append((x, y))
    m_blocks: dict[int, list[int]] = {}
    for x in range(nm):
        m_blocks.setdefault(M.blocks[x], []).append(x)
    n_blocks: dict[int, list[int]] = {}
    for y in range(nn):
        n_blocks.setdefault(N.blocks[y], []).append(y)

    system = _LinearSystem(len(uid_xy))
    idem_gens = set(table.idem_gen)
    for a in sorted((set(M.actions) | set(N.actions)) - idem_gens):
        rows: dict[tuple[int, int], set[int]] = {}
        mat_m = M.actions.get(a)
        if mat_m is not None:
            for x in range(nm):
                for x2 in _bits(mat_m.rows[x]):
                    for yp in n_blocks.get(M.blocks[x2], ()):
                        rows.setdefault((x, yp), set()).symmetric_difference_update(
                            (uid[(x2, yp)],)
                        )
        mat_n = N.actions.get(a)
        if mat_n is not None:
            for y in range(nn):
                for yp in _bits(mat_n.rows[y]):
                    for x in m_blocks.get(N.blocks[y], ()):
                        rows.setdefault((x, yp), set()).symmetric_difference_update(
                            (uid[(x, y)],)
                        )
        for row in rows.values():
            system.add(row)

    sol = system.solve()

    maps: list[list[int]] = []
    for vec in sol.basis:
        f_rows = [0] * nm
        for col in _bits(vec):
            for u in sol.members[col]:
                x, y = uid_xy[u]
                f_rows[x] |= 1 << y
        maps.append(f_rows)
    read_at = [uid_xy[sol.reps[c]] for c in sol.free_cols]

    dm, dn = M.complex.d, N.complex.d
    d_rows = []
    for f_rows in maps:
        g_rows = [0] * nm
        for x in range(nm):
            acc = 0
            for x2 in _bits(dm.rows[x]):
                acc ^= f_rows[x2]
            for y in _bits(f_rows[x]):
                acc ^= dn.rows[y]
            g_rows[x] = acc
        coords = 0
        for j, (xr, yr) in enumerate(read_at):
            if (g_rows[xr] >> yr) & 1:
                coords |= 1 << j
        check = [0] * nm
        for j in _bits(coords):
            for x in range(nm):
                check[x] ^= maps[j][x]
        if check != g_rows:
            raise ValueError("differential leaves the morphism space")
        d_rows.append(coords)

    dim = len(maps)
    cx = ChainComplex(tuple(range(dim)), BooleanMatrix(dim, dim, d_rows))
    return MorComplex(M, N, maps, cx)


def yoneda_ranks(table: AlgebraTable, s, t) -> tuple[int, int]:
    """H* rank of Mor(e_s A, e_t A) next to H* rank of e_t A e_s."""
    mc = mor_complex(projective_module(table, s), projective_module(table, t))
    return mc.homology_rank(), hom_complex(table, t, s).homology_rank()


def yoneda_check(table: AlgebraTable, s, t) -> bool:
    a, b = yoneda_ranks(table, s, t)
    return a == b

"""Euler measure, diagonal intersection number and Maslov index for
counted domains.

Every quantity lives in quarter-integer units, so the arithmetic is pure
int; callers see exact ``Fraction`` values.  A domain is a multiset of
elementary pieces (rectangles, triangles, abstract convex m-gons) plus
the number of incoming ends.  For the composite domains built by gluing
product domains end to end, the index formula

    mu = i + 2e - (l - 1) k / 2

collapses to mu = i, which is why chains of length three or more can
never carry a rigid count: rigidity would need mu = 2 - l < 0 while i is
a count of forbidden crossings and cannot be negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .grid import (
    FloerGenerator,
    GridSpec,
    Rectangle,
    Triangle,
    all_floer_generators,
    floer_product,
    overlap_class,
    product_triangles,
    source_labels,
    target_labels,
)


@dataclass(frozen=True)
class Piece:
    kind: str  # "rectangle" | "triangle" | "polygon"
    corners: int
    triangle: Triangle | None = None

    def __post_init__(self):
        expected = {"rectangle": 4, "triangle": 3}.get(self.kind)
        if expected is not None and self.corners != expected:
            raise ValueError(f"{self.kind} piece with {self.corners} corners")
        if self.corners < 3:
            raise ValueError("a convex piece needs at least three corners")

    @property
    def euler_quarters(self) -> int:
        """4 * (1 - m/4) for an embedded convex m-gon."""
        return 4 - self.corners


@dataclass(frozen=True)
class Domain:
    """A formal union of elementary pieces with inputs-end bookkeeping.

    euler_quarters and diag_intersections are stored, and revalidated
    against the pieces on construction.
    """

    spec: GridSpec
    k: int
    inputs: int
    pieces: tuple[Piece, ...]
    euler_quarters: int = field(default=None)  # type: ignore[assignment]
    diag_intersections: int = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.inputs < 1:
            raise ValueError("a domain has at least one incoming end")
        e = sum(p.euler_quarters for p in self.pieces)
        tris = [p.triangle for p in self.pieces if p.triangle is not None]
        i = sum(
            1
            for t1, t2 in itertools.combinations(tris, 2)
            if overlap_class(self.spec, t1, t2) == "forbidden"
        )
        if self.euler_quarters is None:
            object.__setattr__(self, "euler_quarters", e)
        elif self.euler_quarters != e:
            raise ValueError("stored Euler measure disagrees with the pieces")
        if self.diag_intersections is None:
            object.__setattr__(self, "diag_intersections", i)
        elif self.diag_intersections != i:
            raise ValueError("stored intersection number disagrees with the pieces")

    @property
    def euler_measure(self) -> Fraction:
        return Fraction(self.euler_quarters, 4)

    def maslov(self) -> Fraction:
        quarters = (
            4 * self.diag_intersections
            + 2 * self.euler_quarters
            - 2 * (self.inputs - 1) * self.k
        )
        return Fraction(quarters, 4)


def euler_measure(domain: Domain) -> Fraction:
    return domain.euler_measure


def maslov(domain: Domain) -> Fraction:
    return domain.maslov()


def rectangle_domain(spec: GridSpec, rect: Rectangle, k: int) -> Domain:
    return Domain(spec, k, inputs=1, pieces=(Piece("rectangle", 4),))


def product_domain(spec: GridSpec, tris: list[Triangle]) -> Domain:
    pieces = tuple(Piece("triangle", 3, triangle=t) for t in tris)
    return Domain(spec, k=len(tris), inputs=2, pieces=pieces)


def glue(d1: Domain, d2: Domain) -> Domain:
    """Feed the outgoing end of d1 into one incoming slot of d2."""
    if d1.spec != d2.spec or d1.k != d2.k:
        raise ValueError("domains live on different diagrams")
    return Domain(
        d1.spec,
        d1.k,
        inputs=d1.inputs + d2.inputs - 1,
        pieces=d1.pieces + d2.pieces,
    )


# ---------------------------------------------------------------------------
# Counted-domain streams for the verification suites.


def counted_rectangle_domains(spec: GridSpec, k: int):
    """One Domain per empty rectangle over every generator."""
    from .grid import empty_rectangles

    for x in all_floer_generators(spec, k):
        for rect, _ in empty_rectangles(spec, x):
            yield rectangle_domain(spec, rect, k)


class _Edges:
    """Every counted product of a diagram, as a gluing graph.

    An edge is a composable pair (x, y) whose triangle tuple exists and
    has no forbidden overlap; its product generator is where later
    factors attach.
    """

    def __init__(self, spec: GridSpec, k: int):
        self.spec = spec
        self.k = k
        self.gens = all_floer_generators(spec, k)
        index = {x: i for i, x in enumerate(self.gens)}
        by_source: dict[tuple[int, ...], list[int]] = {}
        for j, y in enumerate(self.gens):
            by_source.setdefault(source_labels(spec, y), []).append(j)
        self.left: list[int] = []
        self.right: list[int] = []
        self.prod: list[int] = []
        self.tris: list[list[Triangle]] = []
        for i, x in enumerate(self.gens):
            for j in by_source.get(target_labels(spec, x), ()):
                tris = product_triangles(spec, x, self.gens[j])
                if tris is None:
                    continue
                if any(
                    overlap_class(spec, t1, t2) == "forbidden"
                    for t1, t2 in itertools.combinations(tris, 2)
                ):
                    continue
                (out,) = floer_product(spec, x, self.gens[j])
                self.left.append(i)
                self.right.append(j)
                self.prod.append(index[out])
                self.tris.append(tris)

    def domain(self, e: int) -> Domain:
        return product_domain(self.spec, self.tris[e])

    def kernel_arrays(self):
        n_edges = len(self.prod)
        ep = np.asarray(self.prod, dtype=np.int64)
        tris = np.zeros((n_edges * self.k, 4), dtype=np.int64)
        for e, ts in enumerate(self.tris):
            for a, t in enumerate(ts):
                tris[e * self.k + a] = (t.c, t.m, t.r, t.flex)
        adjacency = []
        for factors in (self.left, self.right):
            order = sorted(range(n_edges), key=lambda e: factors[e])
            eitems = np.asarray(order, dtype=np.int64)
            eoff = np.zeros(len(self.gens) + 1, dtype=np.int64)
            for e in range(n_edges):
                eoff[factors[e] + 1] += 1
            np.cumsum(eoff, out=eoff)
            adjacency.append((eoff, eitems))
        return ep, tris, adjacency


def counted_product_domains(spec: GridSpec, k: int):
    edges = _Edges(spec, k)
    for e in range(len(edges.prod)):
        yield edges.domain(e)


def verify_rigidity(spec: GridSpec, k: int, lmax: int = 3) -> dict:
    """Check e = (l-1)k/4 and mu >= 0 > 2 - l on every glued chain of
    counted product domains with 3 <= l <= lmax ends.

    The outgoing end of the running composite attaches to either input
    slot of the next product, so both association orders are scanned.
    Chains of length three go through the array kernel; longer chains
    (rarely requested) walk the gluing graph directly.
    """
    if lmax < 3:
        raise ValueError("composite chains need at least three ends")
    edges = _Edges(spec, k)
    report = {"checked": 0, "violations": [], "max_intersection": 0}
    ep, tris, adjacency = edges.kernel_arrays()
    for eoff, eitems in adjacency:
        chains, violations, max_cross = _kernels.rigidity_scan(ep, eoff, eitems, tris, k)
        report["checked"] += chains
        report["max_intersection"] = max(report["max_intersection"], max_cross)
        if violations:
            report["violations"].append({"length": 3, "count": violations})
    by_left: dict[int, list[int]] = {}
    by_right: dict[int, list[int]] = {}
    for e in range(len(edges.prod)):
        by_left.setdefault(edges.left[e], []).append(e)
        by_right.setdefault(edges.right[e], []).append(e)
    for length in range(4, lmax + 1):
        stack = [(edges.prod[e], edges.domain(e)) for e in range(len(edges.prod))]
        for _ in range(length - 3):
            stack = [
                (edges.prod[e], glue(dom, edges.domain(e)))
                for out, dom in stack
                for e in by_left.get(out, []) + by_right.get(out, [])
            ]
        for out, dom in stack:
            for e in by_left.get(out, []) + by_right.get(out, []):
                whole = glue(dom, edges.domain(e))
                report["checked"] += 1
                mu = whole.maslov()
                report["max_intersection"] = max(
                    report["max_intersection"], whole.diag_intersections
                )
                bad_euler = whole.euler_measure != Fraction((length - 1) * k, 4)
                if bad_euler or mu < 0 or not mu > 2 - length:
                    report["violations"].append(
                        {"length": length, "mu": str(mu), "euler": str(whole.euler_measure)}
                    )
    return report

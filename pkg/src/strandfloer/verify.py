"""Verification suites: every invariant the package promises, phrased as
a checked count plus a list of serializable counterexamples.

Each suite_* function takes prebuilt objects so callers can share one
algebra table across suites; run_suites is the driver the command line
uses.  A suite result is a dict {name, checked, failures} and passes
when failures is empty.  Suites that need the grid dictionary only make
sense for the standard matching; with a custom matching the driver
reports them as skipped instead of silently passing.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import _kernels, homalg, index
from .circle import PointedMatchedCircle, standard_matching
from .grid import (
    GridSpec,
    floer_differential,
    floer_product,
    from_algebra,
    intersection_pattern,
    make_spec,
    to_algebra,
)
from .strands import (
    AlgebraTable,
    ClosureError,
    MatchedGenerator,
    differential,
    product,
)

SUITE_NAMES = (
    "regression",
    "d2",
    "leibniz",
    "assoc",
    "closure",
    "dictionary-diff",
    "dictionary-prod",
    "euler",
    "rigidity",
    "yoneda",
)

GRID_SUITES = frozenset(
    {"regression", "dictionary-diff", "dictionary-prod", "euler", "rigidity"}
)


def _result(name: str, checked: int, failures: list) -> dict:
    return {"name": name, "checked": checked, "failures": failures}


def _gen_json(gen: MatchedGenerator) -> dict:
    return {"chords": [list(c) for c in gen.chords], "dotted": list(gen.dotted)}


def suite_regression() -> dict:
    """The pinned differential identity on the g=2, k=2 half diagram:
    d{chord (5,8), dotted 2} = {chords (5,6) and (6,8)}."""
    pmc = standard_matching(2)
    gen = MatchedGenerator(chords=((5, 8),), dotted=(2,))
    got = list(differential(pmc, gen))
    want = [MatchedGenerator(chords=((5, 6), (6, 8)), dotted=())]
    failures = []
    if got != want:
        failures.append({"got": [_gen_json(g) for g in got]})
    return _result("regression", 1, failures)


def suite_d2(table: AlgebraTable) -> dict:
    failures = []
    for i in range(len(table.gens)):
        acc: set[int] = set()
        for j in table.diff[i]:
            acc.symmetric_difference_update(table.diff[j])
        if acc:
            failures.append({"generator": _gen_json(table.gens[i])})
    return _result("d2", len(table.gens), failures)


def suite_leibniz(table: AlgebraTable, sample: int | None = None, seed: int = 0) -> dict:
    """d(ab) = (da)b + a(db) over composable pairs, exhaustively or on a
    seeded sample."""
    pairs = _composable_pairs(table, sample, seed)
    failures = []
    checked = 0
    for i, j in pairs:
        checked += 1
        acc: set[int] = set()
        m = table.prod.get((i, j))
        if m is not None:
            acc.symmetric_difference_update(table.diff[m])
        for x in table.diff[i]:
            p = table.prod.get((x, j))
            if p is not None:
                acc.symmetric_difference_update((p,))
        for y in table.diff[j]:
            p = table.prod.get((i, y))
            if p is not None:
                acc.symmetric_difference_update((p,))
        if acc:
            failures.append(
                {"left": _gen_json(table.gens[i]), "right": _gen_json(table.gens[j])}
            )
            if len(failures) >= 5:
                break
    return _result("leibniz", checked, failures)


def _composable_pairs(table: AlgebraTable, sample: int | None, seed: int):
    if sample is None:
        for u in range(len(table.idem_list)):
            for i in table.by_target[u]:
                for j in table.by_source[u]:
                    yield i, j
        return
    rng = random.Random(seed)
    n = len(table.gens)
    for _ in range(sample):
        i = rng.randrange(n)
        pool = table.by_source[table.tgt[i]]
        yield i, pool[rng.randrange(len(pool))]


def suite_assoc(table: AlgebraTable, sample: int | None = None, seed: int = 0) -> dict:
    """(ab)c = a(bc).  Exhaustive runs go through the array kernel; the
    sampled path draws composable triples from a seeded generator."""
    if sample is None:
        tgt, off, items, keys, vals, n = table.as_csr()
        checked, i, j, l = _kernels.assoc_scan(tgt, off, items, keys, vals, n)
        failures = []
        if i >= 0:
            failures.append(
                {
                    "a": _gen_json(table.gens[i]),
                    "b": _gen_json(table.gens[j]),
                    "c": _gen_json(table.gens[l]),
                }
            )
        return _result("assoc", int(checked), failures)
    rng = random.Random(seed)
    n = len(table.gens)
    failures = []
    for _ in range(sample):
        i = rng.randrange(n)
        pool = table.by_source[table.tgt[i]]
        j = pool[rng.randrange(len(pool))]
        pool2 = table.by_source[table.tgt[j]]
        l = pool2[rng.randrange(len(pool2))]
        ij = table.prod.get((i, j))
        jl = table.prod.get((j, l))
        left = None if ij is None else table.prod.get((ij, l))
        right = None if jl is None else table.prod.get((i, jl))
        if left != right:
            failures.append(
                {
                    "a": _gen_json(table.gens[i]),
                    "b": _gen_json(table.gens[j]),
                    "c": _gen_json(table.gens[l]),
                }
            )
            if len(failures) >= 5:
                break
    return _result("assoc", sample, failures)


def suite_closure(table: AlgebraTable, sample: int | None = None, seed: int = 0) -> dict:
    """Recompute every table row through the section route: each call
    must reassemble whole matched generators (no ClosureError) and agree
    with the stored row."""
    pmc = table.pmc
    failures = []
    checked = 0
    for i, gen in enumerate(table.gens):
        checked += 1
        try:
            got = sorted(table.index[t] for t in differential(pmc, gen))
        except ClosureError as err:
            failures.append({"generator": _gen_json(gen), "error": str(err)})
            continue
        if got != sorted(table.diff[i]):
            failures.append({"generator": _gen_json(gen)})
    for i, j in _composable_pairs(table, sample, seed):
        checked += 1
        try:
            got = [table.index[t] for t in product(pmc, table.gens[i], table.gens[j])]
        except ClosureError as err:
            failures.append(
                {
                    "left": _gen_json(table.gens[i]),
                    "right": _gen_json(table.gens[j]),
                    "error": str(err),
                }
            )
            continue
        want = table.prod.get((i, j))
        if got != ([] if want is None else [want]):
            failures.append(
                {"left": _gen_json(table.gens[i]), "right": _gen_json(table.gens[j])}
            )
        if len(failures) >= 5:
            break
    return _result("closure", checked, failures)


def _grid_spec_for(table: AlgebraTable) -> GridSpec:
    return make_spec(table.pmc.g, "half" if table.variant == "half" else "wrapped")


def suite_dictionary_diff(table: AlgebraTable) -> dict:
    """Empty-rectangle counts match the strands differential generator by
    generator under the dictionary, both directions of the translation."""
    spec = _grid_spec_for(table)
    failures = []
    for i, gen in enumerate(table.gens):
        x = from_algebra(spec, gen)
        assert to_algebra(spec, x) == gen
        got = sorted(table.index[to_algebra(spec, y)] for y in floer_differential(spec, x))
        if got != sorted(table.diff[i]):
            failures.append({"generator": _gen_json(gen)})
            if len(failures) >= 5:
                break
    return _result("dictionary-diff", len(table.gens), failures)


def suite_dictionary_prod(table: AlgebraTable) -> dict:
    """Triangle counts match the concatenation product pair by pair."""
    spec = _grid_spec_for(table)
    points = [from_algebra(spec, gen) for gen in table.gens]
    failures = []
    checked = 0
    for u in range(len(table.idem_list)):
        for i in table.by_target[u]:
            for j in table.by_source[u]:
                checked += 1
                got = [
                    table.index[to_algebra(spec, z)]
                    for z in floer_product(spec, points[i], points[j])
                ]
                want = table.prod.get((i, j))
                if got != ([] if want is None else [want]):
                    failures.append(
                        {
                            "left": _gen_json(table.gens[i]),
                            "right": _gen_json(table.gens[j]),
                        }
                    )
                    if len(failures) >= 5:
                        return _result("dictionary-prod", checked, failures)
    return _result("dictionary-prod", checked, failures)


def suite_euler(spec: GridSpec, k: int) -> dict:
    """Counted rectangles carry e = 0, i = 0; counted product tuples
    carry i = 0, e = k/4 and index zero."""
    failures = []
    checked = 0
    for dom in index.counted_rectangle_domains(spec, k):
        checked += 1
        if dom.euler_measure != 0 or dom.diag_intersections != 0:
            failures.append({"kind": "rectangle", "e": str(dom.euler_measure)})
    for dom in index.counted_product_domains(spec, k):
        checked += 1
        if (
            dom.euler_measure != Fraction(k, 4)
            or dom.diag_intersections != 0
            or dom.maslov() != 0
        ):
            failures.append(
                {
                    "kind": "product",
                    "e": str(dom.euler_measure),
                    "i": dom.diag_intersections,
                    "mu": str(dom.maslov()),
                }
            )
        if len(failures) >= 5:
            break
    return _result("euler", checked, failures)


def suite_rigidity(spec: GridSpec, k: int, lmax: int = 3) -> dict:
    report = index.verify_rigidity(spec, k, lmax)
    result = _result("rigidity", report["checked"], report["violations"])
    result["max_intersection"] = report["max_intersection"]
    return result


def suite_yoneda(table: AlgebraTable) -> dict:
    failures = []
    checked = 0
    for s in table.idem_list:
        for t in table.idem_list:
            checked += 1
            mor_rank, hom_rank = homalg.yoneda_ranks(table, s, t)
            if mor_rank != hom_rank:
                failures.append(
                    {"s": list(s), "t": list(t), "mor": mor_rank, "hom": hom_rank}
                )
    return _result("yoneda", checked, failures)


# ---------------------------------------------------------------------------
# Extra property checks used by the test suite (not part of cmd_verify).


def check_exceptional(table: AlgebraTable) -> dict:
    """Half variant: hom(s,s) is one-dimensional for every s."""
    failures = []
    for s in table.idem_list:
        d = table.hom_dim(s, s)
        if d != 1:
            failures.append({"s": list(s), "dim": d})
    return _result("exceptional", len(table.idem_list), failures)


def check_directed(table: AlgebraTable) -> dict:
    """Half variant: no two distinct objects support morphisms both ways."""
    failures = []
    checked = 0
    for s, t in itertools.combinations(table.idem_list, 2):
        checked += 1
        if table.hom_dim(s, t) > 0 and table.hom_dim(t, s) > 0:
            failures.append({"s": list(s), "t": list(t)})
    return _result("directed", checked, failures)


def check_module_axioms(table: AlgebraTable) -> dict:
    failures = []
    for s in table.idem_list:
        errs = homalg.verify_module_axioms(homalg.projective_module(table, s))
        if errs:
            failures.append({"s": list(s), "errors": errs[:3]})
    return _result("module-axioms", len(table.idem_list), failures)


def check_patterns(g: int) -> dict:
    """Intersection counts against the closed-form tables."""
    failures = []
    checked = 0
    wrapped = make_spec(g, "wrapped")
    half = make_spec(g, "half")
    for i in range(1, 2 * g + 1):
        for j in range(1, 2 * g + 1):
            checked += 2
            expect_w = 3 if i < j else (2 if i == j else 1)
            expect_h = 2 if i < j else (1 if i == j else 0)
            if intersection_pattern(wrapped, i, j) != expect_w:
                failures.append({"mode": "wrapped", "i": i, "j": j})
            if intersection_pattern(half, i, j) != expect_h:
                failures.append({"mode": "half", "i": i, "j": j})
    return _result("patterns", checked, failures)


# ---------------------------------------------------------------------------
# Driver.


def run_suites(
    pmc: PointedMatchedCircle,
    k: int,
    variant: str,
    suites=None,
    sample: int | None = None,
    seed: int = 0,
    threads: int = 1,
) -> dict:
    """Build once, run the requested suites, report one dict per suite.

    The overall report is {"suites": [...], "ok": bool, "skipped": [...]}.
    Grid-dependent suites require the standard matching and are skipped
    (with a reason) otherwise.
    """
    chosen = list(SUITE_NAMES) if suites is None else list(suites)
    unknown = [s for s in chosen if s not in SUITE_NAMES]
    if unknown:
        raise ValueError(f"unknown suites: {unknown}")
    table = AlgebraTable.build(pmc, k, variant, threads=threads)
    is_standard = pmc == standard_matching(pmc.g, mode=pmc.mode)
    spec = _grid_spec_for(table)

    results = []
    skipped = []
    for name in chosen:
        if name in GRID_SUITES and not is_standard:
            skipped.append({"name": name, "reason": "custom matching has no grid model"})
            continue
        if name in GRID_SUITES and name != "regression" and k == 0:
            skipped.append({"name": name, "reason": "grid model needs k >= 1"})
            continue
        if name == "regression":
            results.append(suite_regression())
        elif name == "d2":
            results.append(suite_d2(table))
        elif name == "leibniz":
            results.append(suite_leibniz(table, sample=sample, seed=seed))
        elif name == "assoc":
            results.append(suite_assoc(table, sample=sample, seed=seed))
        elif name == "closure":
            results.append(suite_closure(table, sample=sample, seed=seed))
        elif name == "dictionary-diff":
            results.append(suite_dictionary_diff(table))
        elif name == "dictionary-prod":
            results.append(suite_dictionary_prod(table))
        elif name == "euler":
            results.append(suite_euler(spec, k))
        elif name == "rigidity":
            results.append(suite_rigidity(spec, k))
        elif name == "yoneda":
            results.append(suite_yoneda(table))
    ok = all(not r["failures"] for r in results)
    return {"suites": results, "skipped": skipped, "ok": ok}

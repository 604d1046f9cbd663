"""Command-line front end: build tables, run verification suites,
export the quiver, benchmark the kernels.

All outputs are deterministic for a fixed (config, seed), with one
documented exception: the seconds columns of the benchmark CSV are wall
times.  Every count column is reproducible, and thread count never
changes any result.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels, verify
from .circle import (
    PointedMatchedCircle,
    idempotents,
    matching_from_pairs,
    standard_matching,
    validate_surface,
)
from .gf2 import pack_rows
from .grid import make_spec
from .index import _Edges
from .strands import AlgebraTable, enumerate_generators

SCHEMA = 1


@dataclass
class RunConfig:
    g: int
    k: int
    variant: str
    mode: str
    pmc: PointedMatchedCircle
    command: str
    out: str | None
    threads: int
    seed: int
    suites: list[str] | None = None
    sample: int | None = None


class ConfigError(Exception):
    pass


def _mode_for(variant: str) -> str:
    return "half" if variant == "half" else "wrapped"


def _parse_matching(text: str, g: int) -> PointedMatchedCircle:
    if not text.lstrip().startswith("{"):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise ConfigError(f"cannot read matching file: {err}") from err
    try:
        data = json.loads(text)
        pairs = [tuple(p) for p in data["pairs"]]
    except (json.JSONDecodeError, KeyError, TypeError) as err:
        raise ConfigError(f"bad matching JSON: {err}") from err
    mode = data.get("mode", "single")
    g = data.get("g", g)
    try:
        return matching_from_pairs(g, pairs, mode)
    except ValueError as err:
        raise ConfigError(f"bad matching: {err}") from err


def build_config(args: argparse.Namespace) -> RunConfig:
    g, k = args.genus, args.k
    if g < 1:
        raise ConfigError("genus must be at least 1")
    if not 0 <= k <= 2 * g:
        raise ConfigError(f"k must lie in 0..{2 * g}")
    variant = args.variant
    mode = args.mode or _mode_for(variant)
    if mode != _mode_for(variant):
        raise ConfigError(f"variant {variant} pairs with mode {_mode_for(variant)}")
    if args.matching:
        pmc = _parse_matching(args.matching, g)
        if pmc.g != g:
            raise ConfigError(f"matching has genus {pmc.g}, config says {g}")
    else:
        pmc = standard_matching(g)
    inv = validate_surface(pmc)
    if not inv.valid:
        raise ConfigError(
            f"matching does not close up to a genus-{g} one-boundary surface "
            f"(components={inv.boundary_components}, genus={inv.genus})"
        )
    threads = args.threads or int(os.environ.get("STRANDFLOER_THREADS", "1"))
    suites = None
    if getattr(args, "suites", None) is not None:
        suites = [s for s in args.suites.split(",") if s]
        unknown = [s for s in suites if s not in verify.SUITE_NAMES]
        if unknown:
            raise ConfigError(f"unknown suites: {','.join(unknown)}")
    return RunConfig(
        g=g,
        k=k,
        variant=variant,
        mode=mode,
        pmc=pmc,
        command=args.command,
        out=args.out,
        threads=max(1, threads),
        seed=args.seed,
        suites=suites,
        sample=getattr(args, "sample", None),
    )


def _meta(cfg: RunConfig) -> dict:
    return {
        "g": cfg.g,
        "k": cfg.k,
        "variant": cfg.variant,
        "mode": cfg.mode,
        "matching": {
            "g": cfg.pmc.g,
            "mode": cfg.pmc.mode,
            "pairs": [list(p) for p in cfg.pmc.pairs],
        },
        "standard": cfg.pmc == standard_matching(cfg.g, mode=cfg.pmc.mode),
    }


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(cfg: RunConfig) -> int:
    """Serialize the full algebra table.  Field order is fixed: meta,
    idempotents, generators, differential, product, dims; indices are
    the lexicographic generator ranks."""
    table = AlgebraTable.build(cfg.pmc, cfg.k, cfg.variant, threads=cfg.threads)
    gens = [
        {
            "chords": [list(c) for c in gen.chords],
            "dotted": list(gen.dotted),
            "source": table.src[i],
            "target": table.tgt[i],
        }
        for i, gen in enumerate(table.gens)
    ]
    diff = sorted([i, j] for i, row in enumerate(table.diff) for j in row)
    prod = sorted([i, j, m] for (i, j), m in table.prod.items())
    dims: dict[tuple[int, int], int] = {}
    for i in range(len(table.gens)):
        key = (table.src[i], table.tgt[i])
        dims[key] = dims.get(key, 0) + 1
    payload = {
        "schema": SCHEMA,
        "meta": _meta(cfg),
        "idempotents": [list(s) for s in table.idem_list],
        "generators": gens,
        "differential": diff,
        "product": prod,
        "dims": sorted([s, t, d] for (s, t), d in dims.items()),
    }
    _emit(cfg, json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    report = verify.run_suites(
        cfg.pmc,
        cfg.k,
        cfg.variant,
        suites=cfg.suites,
        sample=cfg.sample,
        seed=cfg.seed,
        threads=cfg.threads,
    )
    payload = {"schema": SCHEMA, "meta": _meta(cfg)}
    payload.update(report)
    _emit(cfg, json.dumps(payload, indent=2) + "\n")
    return 0 if report["ok"] else 1


def cmd_export(cfg: RunConfig) -> int:
    """DOT quiver: one node per idempotent, one edge per generator from
    its source to its target; generators hit by the differential of some
    other generator are drawn dotted."""
    table = AlgebraTable.build(cfg.pmc, cfg.k, cfg.variant, threads=cfg.threads)
    in_image = set()
    for row in table.diff:
        in_image.update(row)
    lines = ["digraph strands {", "  rankdir=LR;", "  node [shape=ellipse];"]
    for sid, s in enumerate(table.idem_list):
        label = "{" + ",".join(str(p) for p in s) + "}"
        lines.append(f'  s{sid} [label="{label}"];')
    for i, gen in enumerate(table.gens):
        bits = [f"({a},{b})" for a, b in gen.chords]
        bits += [f".{p}" for p in gen.dotted]
        label = " ".join(bits) if bits else "1"
        style = ' style=dotted' if i in in_image else ""
        lines.append(
            f'  s{table.src[i]} -> s{table.tgt[i]} [label="{label}"{style}];'
        )
    lines.append("}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _bench_build_rows(cfg: RunConfig) -> list[list]:
    rows = []
    for g in range(1, cfg.g + 1):
        pmc = standard_matching(g)
        counts = []
        for k in range(1, min(2 * g, max(cfg.k, g)) + 1):
            t0 = time.perf_counter()
            idems = idempotents(pmc, k)
            gens = []
            for s in idems:
                gens.extend(enumerate_generators(pmc, k, cfg.variant, source=s))
            t_enum = time.perf_counter() - t0
            t0 = time.perf_counter()
            table = AlgebraTable.build(pmc, k, cfg.variant, threads=cfg.threads)
            t_build = time.perf_counter() - t0
            n_diff = sum(len(r) for r in table.diff)
            rows.append(
                [
                    "build",
                    g,
                    k,
                    cfg.variant,
                    f"generators={len(gens)};diff={n_diff};prod={len(table.prod)}",
                    len(gens),
                    f"{t_enum:.6f}",
                    f"{t_build:.6f}",
                ]
            )
            counts.append(len(gens))
        for a, b in zip(counts, counts[1:g]):
            assert a <= b, "generator counts should grow up to the symmetry point"
    return rows


def _bench_kernel_rows(cfg: RunConfig) -> list[list]:
    """The same workload through every available backend; counts must
    agree across backends, seconds show the difference."""
    rows = []
    table = AlgebraTable.build(standard_matching(2), 2, cfg.variant, threads=cfg.threads)
    csr = table.as_csr()
    rng = np.random.default_rng(cfg.seed)
    dense = rng.integers(0, 2, size=(256, 256), dtype=np.uint8)
    packed_src = pack_rows([int("".join(map(str, r)), 2) for r in dense], 256)
    edges = _Edges(make_spec(2, _mode_for(cfg.variant)), 2)
    ep, tris, adjacency = edges.kernel_arrays()
    eoff, eitems = adjacency[0]
    for backend in _kernels.available_backends():
        impl = _kernels.implementation("gf2_eliminate", backend)
        work = packed_src.copy()
        t0 = time.perf_counter()
        rank, _ = impl(work, 256)
        dt = time.perf_counter() - t0
        rows.append(["kernel", 2, 2, cfg.variant, f"gf2_eliminate[{backend}]", rank, f"{dt:.6f}", ""])
        impl = _kernels.implementation("assoc_scan", backend)
        t0 = time.perf_counter()
        checked, i, _, _ = impl(*csr)
        dt = time.perf_counter() - t0
        assert i < 0
        rows.append(["kernel", 2, 2, cfg.variant, f"assoc_scan[{backend}]", int(checked), f"{dt:.6f}", ""])
        impl = _kernels.implementation("rigidity_scan", backend)
        t0 = time.perf_counter()
        chains, violations, _ = impl(ep, eoff, eitems, tris, 2)
        dt = time.perf_counter() - t0
        assert violations == 0
        rows.append(["kernel", 2, 2, cfg.variant, f"rigidity_scan[{backend}]", int(chains), f"{dt:.6f}", ""])
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "g", "k", "variant", "label", "count", "seconds", "seconds_build"])
    for row in _bench_build_rows(cfg):
        writer.writerow(row)
    for row in _bench_kernel_rows(cfg):
        writer.writerow(row)
    _emit(cfg, buf.getvalue())
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strandfloer",
        description="strands algebras and their grid models: build, verify, export, bench",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("build", cmd_build),
        ("verify", cmd_verify),
        ("export", cmd_export),
        ("bench", cmd_bench),
    ):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--genus", "-g", type=int, default=1)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--variant", choices=("full", "half"), default="full")
        p.add_argument("--mode", choices=("wrapped", "half"), default=None)
        p.add_argument("--matching", help="inline JSON or a path to a JSON file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=0,
                       help="worker threads (default: STRANDFLOER_THREADS or 1)")
        p.add_argument("--seed", type=int, default=0)
        if name == "verify":
            p.add_argument("--suites", help="comma-separated subset of: " + ",".join(verify.SUITE_NAMES))
            p.add_argument("--sample", type=int, default=None,
                           help="sample size for the randomized suites (default exhaustive)")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    try:
        return args.fn(cfg)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

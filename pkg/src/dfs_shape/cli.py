"""Command line front end: ``dfs-shape --n 1000000 --c 2 --seed 7 --emit svg``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import InvalidParameter
from .harness import ARTIFACTS, DEFAULT_EMIT, ExperimentConfig, run_experiment
from .numeric import limit_curve, write_curve_csv

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_REJECTED = 0, 2, 3, 4
SEED_ENV = "DFS_SHAPE_SEED"


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {v} does not fit in 64 unsigned bits")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def _emit(text: str) -> frozenset[str]:
    items = frozenset(t.strip() for t in text.split(",") if t.strip())
    bad = items - ARTIFACTS
    if bad:
        raise argparse.ArgumentTypeError(f"unknown artifacts {sorted(bad)}; choose from {sorted(ARTIFACTS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dfs-shape",
        description="Depth-first search contour of sparse Erdos-Renyi graphs against its limiting profile.",
    )
    p.add_argument("--n", type=_positive_int, help="number of vertices")
    p.add_argument("--c", type=float, required=True, help="mean degree; edge probability is c/n")
    p.add_argument("--seed", type=_u64, action="append", default=[], help="run seed (repeatable)")
    p.add_argument("--seeds-file", type=Path, help="file with one seed per line")
    p.add_argument("--runs", type=_positive_int, help="run this many consecutive seeds from the first one")
    p.add_argument("--policy", choices=("min-index", "uniform"), default="min-index")
    p.add_argument("--epsilon", type=float, default=0.02, help="pinning grid step")
    p.add_argument("--eta", type=float, default=0.05, help="supercritical margin")
    p.add_argument("--gamma", type=float, help="acceptance fraction for the start component (default rho_c/2)")
    p.add_argument("--max-resamples", type=_nonneg_int, default=100)
    p.add_argument("--emit", type=_emit, default=DEFAULT_EMIT, help=f"comma list from {','.join(sorted(ARTIFACTS))}")
    p.add_argument("--out-dir", default="dfs_shape_out")
    p.add_argument("--jobs", type=_positive_int, default=1, help="seeds processed concurrently")
    p.add_argument("--curve-only", action="store_true", help="write curve.csv and skip simulation")
    return p


def _read_seeds(path: Path, parser: argparse.ArgumentParser) -> list[int]:
    seeds = []
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        parser.error(f"cannot read seeds file: {exc}")
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                seeds.append(_u64(line))
            except argparse.ArgumentTypeError as exc:
                parser.error(f"{path}: {exc}")
    return seeds


def _default_seed(parser: argparse.ArgumentParser) -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _u64(raw)
    except argparse.ArgumentTypeError as exc:
        parser.error(f"{SEED_ENV}: {exc}")


def parse_cli(argv=None) -> tuple[ExperimentConfig, bool]:
    """Parse flags into a validated config plus the curve-only switch.

    Usage and range errors exit with status 2 through argparse.
    """
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)
    ns = parser.parse_args(argv)

    seeds = list(ns.seed)
    if ns.seeds_file is not None:
        seeds += _read_seeds(ns.seeds_file, parser)
    if ns.runs is not None:
        if len(seeds) > 1:
            parser.error("--runs takes at most one base seed")
        base = seeds[0] if seeds else _default_seed(parser)
        if base + ns.runs > 1 << 64:
            parser.error("--runs overflows the 64-bit seed range")
        seeds = [base + r for r in range(ns.runs)]
    elif not seeds:
        seeds = [_default_seed(parser)]

    if ns.n is None:
        if not ns.curve_only:
            parser.error("--n is required unless --curve-only is given")
        ns.n = 1
    try:
        config = ExperimentConfig(
            n=ns.n,
            c=ns.c,
            seeds=tuple(seeds),
            policy=ns.policy,
            epsilon=ns.epsilon,
            eta=ns.eta,
            gamma=ns.gamma,
            max_resamples=ns.max_resamples,
            emit=ns.emit,
            out_dir=ns.out_dir,
            jobs=ns.jobs,
        )
    except InvalidParameter as exc:
        parser.error(str(exc))
    return config, ns.curve_only


def main(argv=None) -> int:
    try:
        config, curve_only = parse_cli(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if curve_only:
            out = Path(config.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_curve_csv(limit_curve(config.c), out / "curve.csv")
            return EXIT_OK
        summaries = run_experiment(config)
    except OSError as exc:
        print(f"dfs-shape: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for s in summaries:
        flag = "" if s.accepted else "  REJECTED"
        print(
            f"seed={s.seed} size={s.component_size} sup={s.sup_distance:.5f} "
            f"peak={s.max_height_fraction:.5f} resamples={s.resamples_used}{flag}"
        )
    if summaries and not any(s.accepted for s in summaries):
        return EXIT_REJECTED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

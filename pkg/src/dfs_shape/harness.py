"""Monte Carlo experiments over seeds: conditioning on a giant start component,
analyses of the contour process, and on-disk artifacts."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dfs import DfsTrace, find_giant_run, run_dfs, write_trace_csv
from .errors import InvalidParameter
from .graphs import GraphSpec, SparseGraph, component_census, mesoscopic_check, sample_graph
from .numeric import limit_curve, solve_survival, write_curve_csv
from .svg import emit_svg
from .trajectory import (
    IncrementBin,
    PinningSet,
    ProfileComparison,
    RenewalSchedule,
    compute_alpha,
    detect_renewals,
    increment_stats,
    pinning_heights,
    sup_distance,
    way_down_check,
)

ARTIFACTS = frozenset({"trace", "curve", "renewals", "pins", "increments", "comparison", "svg"})
RENEWAL_ARTIFACTS = frozenset({"renewals", "pins", "increments"})
DEFAULT_EMIT = frozenset({"curve", "comparison"})


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    c: float
    seeds: tuple[int, ...] = (0,)
    policy: str = "min-index"
    epsilon: float = 0.02
    eta: float = 0.05
    gamma: float | None = None
    max_resamples: int = 100
    emit: frozenset[str] = DEFAULT_EMIT
    out_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "emit", frozenset(self.emit))
        GraphSpec(self.n, self.c)  # range checks on n and c
        for s in self.seeds:
            if not 0 <= s < 1 << 64:
                raise InvalidParameter(f"seed {s} does not fit in 64 unsigned bits")
        if self.policy not in ("min-index", "uniform"):
            raise InvalidParameter(f"unknown policy {self.policy!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidParameter(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if not self.eta > 0.0:
            raise InvalidParameter(f"eta must be positive, got {self.eta!r}")
        if self.gamma is not None and not 0.0 < self.gamma < 1.0:
            raise InvalidParameter(f"gamma must lie in (0, 1), got {self.gamma!r}")
        if self.max_resamples < 0:
            raise InvalidParameter("max_resamples must be non-negative")
        if self.jobs < 1:
            raise InvalidParameter("jobs must be at least 1")
        unknown = self.emit - ARTIFACTS
        if unknown:
            raise InvalidParameter(f"unknown artifacts {sorted(unknown)}; choose from {sorted(ARTIFACTS)}")
        if self.emit & RENEWAL_ARTIFACTS and not self.renewals_possible:
            raise InvalidParameter(
                f"renewal analyses need c > 1 + eta, got c = {self.c} and eta = {self.eta}"
            )

    @property
    def renewals_possible(self) -> bool:
        return self.c > 1.0 + self.eta

    @property
    def threshold(self) -> float | None:
        """Acceptance fraction for the start component, None when c <= 1
        (there is no giant to condition on)."""
        if self.gamma is not None:
            return self.gamma
        rho = solve_survival(self.c).rho
        return 0.5 * rho if rho > 0.0 else None


@dataclass(frozen=True)
class RunSummary:
    n: int
    c: float
    seed: int
    accepted: bool
    resamples_used: int
    component_size: int
    component_fraction: float
    max_height_fraction: float
    sup_distance: float
    degenerate_renewal_fraction: float | None
    mesoscopic_ok: bool | None
    max_degree: int
    wall_time_ms: float


@dataclass(eq=False)
class RunResult:
    """Everything one seed produced, kept in memory for callers that analyse
    further (the CLI drops it after writing artifacts)."""

    summary: RunSummary
    graph: SparseGraph
    trace: DfsTrace
    alpha: np.ndarray
    comparison: ProfileComparison
    schedule: RenewalSchedule | None = None
    pins: PinningSet | None = None
    increments: list[IncrementBin] = field(default_factory=list)
    censuses: list = field(default_factory=list)


def attempt_seeds(seed: int, attempt: int) -> tuple[int, int]:
    """Graph seed and walk seed for one rejection attempt, split off the run
    seed so that neither depends on scheduling."""
    state = np.random.SeedSequence([seed, attempt]).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def degenerate_fraction(schedule: RenewalSchedule, trace: DfsTrace) -> float:
    """Share of spine levels 1..max X left without a proper renewal."""
    top = int(trace.x.max())
    if top <= 0:
        return 0.0
    proper = (schedule.degenerate_from or len(schedule.tau)) - 1
    return max(0.0, 1.0 - proper / top)


def run_single(config: ExperimentConfig, seed: int) -> RunResult:
    start = time.perf_counter()
    threshold = config.threshold
    for attempt in range(config.max_resamples + 1):
        graph_seed, walk_seed = attempt_seeds(seed, attempt)
        g = sample_graph(GraphSpec(config.n, config.c, graph_seed))
        if threshold is None:
            trace, _ = run_dfs(g, 1, config.policy, walk_seed)
            accepted = True
        else:
            trace, _, accepted = find_giant_run(g, threshold, config.policy, walk_seed)
        if accepted:
            break

    N = config.n
    curve = limit_curve(config.c)
    alpha = compute_alpha(trace, N)
    comparison = sup_distance(trace, curve, N)
    result = RunResult(None, g, trace, alpha, comparison)  # summary filled below

    max_degree = int(g.degrees().max()) if g.n else 0
    degenerate = meso = None
    if config.renewals_possible:
        schedule = detect_renewals(trace, N)
        pins = pinning_heights(schedule, alpha, config.epsilon, config.eta, config.c, trace)
        visit = trace.first_visit(N)
        censuses = [component_census(g, visit > t) for t in pins.tau_h.tolist()]
        if censuses:
            max_degree = max(cs.max_degree for cs in censuses)
            meso = all(mesoscopic_check(cs, N) for cs in censuses) and max_degree <= math.log(N)
        result.schedule = schedule
        result.pins = pins
        result.censuses = censuses
        result.increments = increment_stats(schedule, alpha, config.epsilon, config.c, config.eta)
        degenerate = degenerate_fraction(schedule, trace)

    result.summary = RunSummary(
        n=N,
        c=float(config.c),
        seed=seed,
        accepted=bool(accepted),
        resamples_used=attempt,
        component_size=trace.component_size,
        component_fraction=trace.component_size / N,
        max_height_fraction=comparison.max_height_fraction,
        sup_distance=comparison.sup_distance,
        degenerate_renewal_fraction=degenerate,
        mesoscopic_ok=meso,
        max_degree=max_degree,
        wall_time_ms=1000.0 * (time.perf_counter() - start),
    )
    return result


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_renewals_csv(schedule: RenewalSchedule, alpha: np.ndarray, path) -> None:
    """One row per tau_i; the capped entry has an empty alpha."""
    rows = []
    for i, t in enumerate(schedule.tau.tolist()):
        a = repr(float(alpha[t])) if t < len(alpha) and i != schedule.degenerate_from else ""
        rows.append([i, t, a])
    _write_csv(Path(path), ["i", "tau", "alpha"], rows)


def read_renewals_csv(path) -> tuple[np.ndarray, np.ndarray]:
    tau, alpha = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            tau.append(int(row["tau"]))
            alpha.append(float(row["alpha"]) if row["alpha"] else math.nan)
    return np.array(tau, dtype=np.int64), np.array(alpha)


def write_pins_csv(pins: PinningSet, path) -> None:
    rows = [
        [k + 1, h, t, z] for k, (h, t, z) in enumerate(zip(pins.h.tolist(), pins.tau_h.tolist(), pins.zeta.tolist()))
    ]
    _write_csv(Path(path), ["k", "h", "tau_h", "zeta"], rows)


def read_pins_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    h, tau_h, zeta = [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            h.append(int(row["h"]))
            tau_h.append(int(row["tau_h"]))
            zeta.append(int(row["zeta"]))
    return np.array(h, dtype=np.int64), np.array(tau_h, dtype=np.int64), np.array(zeta, dtype=np.int64)


def write_increments_csv(bins: list[IncrementBin], path) -> None:
    rows = [[repr(float(b.alpha_bin)), repr(float(b.mean)), int(b.count), repr(float(b.predicted))] for b in bins]
    _write_csv(Path(path), list(IncrementBin._fields), rows)


def read_increments_csv(path) -> list[IncrementBin]:
    with open(path, newline="") as fh:
        return [
            IncrementBin(float(r["alpha_bin"]), float(r["mean"]), int(r["count"]), float(r["predicted"]))
            for r in csv.DictReader(fh)
        ]


def _dump_json(obj, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_summary_atomic(summaries: list[RunSummary], path) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=".summary-", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump([asdict(s) for s in summaries], fh, indent=2)
            fh.write("\n")
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def seed_dir(out_dir, seed: int) -> Path:
    return Path(out_dir) / f"seed_{seed}"


def write_artifacts(config: ExperimentConfig, result: RunResult) -> None:
    seed = result.summary.seed
    d = seed_dir(config.out_dir, seed)
    d.mkdir(parents=True, exist_ok=True)
    emit = config.emit
    if "trace" in emit:
        write_trace_csv(result.trace, d / "trace.csv", result.alpha)
    if "renewals" in emit:
        write_renewals_csv(result.schedule, result.alpha, d / "renewals.csv")
    if "pins" in emit:
        write_pins_csv(result.pins, d / "pins.csv")
    if "increments" in emit:
        write_increments_csv(result.increments, d / "increments.csv")
    if "comparison" in emit:
        curve = limit_curve(config.c)
        payload = {
            "seed": seed,
            "accepted": result.summary.accepted,
            **asdict(result.comparison),
            "rho_c": curve.rho_c,
            "peak_height": curve.peak_height,
            "peak_time": curve.peak_time,
        }
        if result.pins is not None:
            payload["way_down"] = [r._asdict() for r in way_down_check(result.pins, config.n, config.c)]
            payload["censuses"] = [
                {"tau_h": t, "components": len(cs.sizes), "largest": cs.largest, "max_degree": cs.max_degree,
                 "mesoscopic_free": mesoscopic_check(cs, config.n)}
                for t, cs in zip(result.pins.tau_h.tolist(), result.censuses)
            ]
        _dump_json(payload, d / "comparison.json")
    if "svg" in emit:
        emit_svg(result.trace, limit_curve(config.c), config.n, d / f"profile_{seed}.svg")


def run_experiment(config: ExperimentConfig, keep_results: bool = False):
    """Run every seed and write artifacts under ``config.out_dir`` if set.

    Returns the summaries in seed order, or the full RunResult objects when
    ``keep_results`` is True. Seeds run on ``config.jobs`` threads; each run
    owns its graph and files, so the output does not depend on scheduling.
    """
    if not config.seeds:
        return []
    out = Path(config.out_dir) if config.out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        if not os.access(out, os.W_OK):
            raise PermissionError(f"output directory {out} is not writable")
        if "curve" in config.emit:
            write_curve_csv(limit_curve(config.c), out / "curve.csv")

    def one(seed):
        res = run_single(config, seed)
        if out is not None:
            write_artifacts(config, res)
        return res if keep_results else res.summary

    if config.jobs == 1 or len(config.seeds) == 1:
        results = [one(s) for s in config.seeds]
    else:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(one, config.seeds))
    if out is not None:
        summaries = [r.summary if keep_results else r for r in results]
        write_summary_atomic(summaries, out / "summary.json")
    return results

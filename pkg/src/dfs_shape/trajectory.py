"""Objects read off a DFS contour process: explored fraction, pseudo renewal
times, pinning heights, return times, excursion decompositions and the
distance to the limiting profile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .dfs import DfsTrace
from .errors import DegenerateRenewalError, RenewalIdentityError
from .graphs import SparseGraph
from .numeric import LimitCurve, expected_renewal_increment, height_table, survival_at_density


def compute_alpha(trace: DfsTrace, n_vertices: int) -> np.ndarray:
    """Explored fraction alpha_n = (X_n + n) / (2N) at every step."""
    n = np.arange(len(trace.x), dtype=np.float64)
    return (trace.x.astype(np.float64) + n) / (2.0 * n_vertices)


@dataclass(frozen=True, eq=False)
class RenewalSchedule:
    """Pseudo renewal times. ``tau[0] == 0``; the last entry is the cap 2N,
    at index ``degenerate_from`` (every later tau equals the cap too)."""

    sqrt_threshold: int
    cap: int
    tau: np.ndarray
    degenerate_from: int | None

    @property
    def valid(self) -> np.ndarray:
        """The non-degenerate prefix tau_0 .. tau_{degenerate_from - 1}."""
        end = len(self.tau) if self.degenerate_from is None else self.degenerate_from
        return self.tau[:end]

    def increments(self) -> np.ndarray:
        return np.diff(self.valid)


@numba.njit(cache=True, nogil=True)
def _next_down(x):
    # next_down[n] = first m > n with x[m] == x[n] - 1
    L = x.shape[0]
    out = np.full(L, L, dtype=np.int64)
    last = np.full(L + 2, L, dtype=np.int64)  # indexed by level + 1
    for n in range(L - 1, -1, -1):
        lvl = x[n]
        out[n] = last[lvl]  # slot lvl holds level lvl - 1
        last[lvl + 1] = n
    return out


@numba.njit(cache=True, nogil=True)
def _scan_renewals(x, nxt, threshold):
    L = x.shape[0]
    tau = np.empty(L + 1, dtype=np.int64)
    tau[0] = 0
    i = 0
    for n in range(1, L):
        if x[n] == i + 1 and nxt[n] - n > threshold:
            i += 1
            tau[i] = n
    return tau[: i + 1].copy()


def detect_renewals(trace: DfsTrace, n_vertices: int) -> RenewalSchedule:
    """Pseudo renewal times, tau_{i+1} = first n > tau_i with X_n = i + 1
    whose return to level i takes more than ceil(sqrt N) steps, capped at 2N.

    The walk always comes back below every level before it ends at -1, so
    the return time is finite; one backward pass finds it for every step.
    """
    threshold = math.isqrt(n_vertices - 1) + 1 if n_vertices > 1 else 1
    cap = 2 * n_vertices
    x = trace.x.astype(np.int64)
    tau = _scan_renewals(x, _next_down(x), threshold)
    full = np.append(tau, cap)
    return RenewalSchedule(threshold, cap, full, len(tau))


@dataclass(frozen=True, eq=False)
class PinningSet:
    """Pinning heights h_k (k = 1..len(h)), their renewal times and the
    return times zeta_k (-1 where undefined)."""

    epsilon: float
    eta: float
    K: int
    h: np.ndarray
    tau_h: np.ndarray
    zeta: np.ndarray


def pinning_count(epsilon: float, eta: float, c: float) -> int:
    """K = floor((1 - (1 + eta)/c) / epsilon)."""
    return max(0, math.floor((1.0 - (1.0 + eta) / c) / epsilon + 1e-9))


def pinning_heights(
    schedule: RenewalSchedule,
    alpha: np.ndarray,
    epsilon: float,
    eta: float,
    c: float,
    trace: DfsTrace | None = None,
) -> PinningSet:
    """h_k = first renewal index whose explored fraction exceeds k epsilon.

    zeta_k is the first n >= tau_{h_k + 1} at which the walker stands again
    on the vertex it occupied at tau_{h_k}; it needs ``trace``.
    """
    K = pinning_count(epsilon, eta, c)
    valid = schedule.valid
    alpha_tau = alpha[valid]
    levels = epsilon * np.arange(1, K + 1)
    h = np.searchsorted(alpha_tau, levels, side="right")
    h = h[h < len(valid)].astype(np.int64)
    tau_h = valid[h]
    zeta = np.full(len(h), -1, dtype=np.int64)
    if trace is not None:
        walker = trace.walker
        for k, hk in enumerate(h):
            if hk + 1 >= len(valid):
                continue
            target = walker[tau_h[k]]
            frm = int(valid[hk + 1])
            hits = np.flatnonzero(walker[frm:] == target)
            if hits.size:
                zeta[k] = frm + int(hits[0])
    return PinningSet(epsilon, eta, K, h, tau_h, zeta)


@dataclass(frozen=True)
class RenewalDecomposition:
    index: int
    excursion_count: int
    excursion_sizes: tuple[int, ...]
    tested_degree: int


def decompose_increment(
    trace: DfsTrace, g: SparseGraph, schedule: RenewalSchedule, i: int
) -> RenewalDecomposition:
    """Split [tau_i, tau_{i+1}) into excursions above level i.

    Each excursion returns to level i after visiting W_j new vertices; the
    gap must equal 1 + 2 sum W_j exactly, otherwise RenewalIdentityError.
    tested_degree counts neighbours of the renewal vertex still sleeping at
    tau_i.
    """
    if schedule.degenerate_from is not None and i + 1 >= schedule.degenerate_from:
        raise DegenerateRenewalError(f"renewal {i} or {i + 1} is capped at {schedule.cap}")
    if i < 0:
        raise DegenerateRenewalError(f"renewal index {i} is negative")
    t0, t1 = int(schedule.tau[i]), int(schedule.tau[i + 1])
    seg = trace.x[t0 : t1 + 1].astype(np.int64)
    if seg.min() < i:
        raise RenewalIdentityError(f"walk drops below level {i} between tau_{i} and tau_{i + 1}")
    at_level = np.flatnonzero(seg[:-1] == i)
    sizes = tuple(int(s) for s in np.diff(at_level) // 2)
    if t1 - t0 != 1 + 2 * sum(sizes) or t1 - t0 - (at_level[-1]) != 1:
        raise RenewalIdentityError(f"gap {t1 - t0} != 1 + 2 * {sum(sizes)} at renewal {i}")
    visit = trace.first_visit(g.n)
    a = int(trace.walker[t0])
    nb = g.adj(a)
    tested = int(np.count_nonzero(visit[nb] > t0))
    return RenewalDecomposition(i, len(sizes), sizes, tested)


@numba.njit(cache=True, nogil=True)
def _excursion_table(x, tau, offsets, neighbors, walker, visit):
    m = tau.shape[0] - 1
    count = np.zeros(m, dtype=np.int64)
    total = np.zeros(m, dtype=np.int64)
    tested = np.zeros(m, dtype=np.int64)
    ok = np.ones(m, dtype=np.bool_)
    for i in range(m):
        t0 = tau[i]
        t1 = tau[i + 1]
        last = t0
        for n in range(t0 + 1, t1):
            if x[n] < i:
                ok[i] = False
            elif x[n] == i:
                count[i] += 1
                total[i] += (n - last) // 2
                last = n
        if t1 - last != 1 or t1 - t0 != 1 + 2 * total[i]:
            ok[i] = False
        a = walker[t0]
        for k in range(offsets[a], offsets[a + 1]):
            if visit[neighbors[k]] > t0:
                tested[i] += 1
    return count, total, tested, ok


class ExcursionTable(NamedTuple):
    excursion_count: np.ndarray
    visited_total: np.ndarray
    tested_degree: np.ndarray
    identity_holds: np.ndarray


def decompose_all(trace: DfsTrace, g: SparseGraph, schedule: RenewalSchedule) -> ExcursionTable:
    """decompose_increment for every consecutive non-degenerate pair, in one pass.

    Entry i describes [tau_i, tau_{i+1}); a False in ``identity_holds`` marks
    a gap that is not 1 + 2 sum W_j.
    """
    visit = trace.first_visit(g.n)
    valid = schedule.valid.astype(np.int64)
    return ExcursionTable(
        *_excursion_table(
            trace.x.astype(np.int64), valid, g.offsets, g.neighbors, trace.walker.astype(np.int64), visit
        )
    )


@dataclass(frozen=True)
class ProfileComparison:
    sup_distance: float
    max_height_fraction: float
    argmax_fraction: float
    component_fraction: float


def sup_distance(trace: DfsTrace, curve: LimitCurve, n_vertices: int) -> ProfileComparison:
    """Uniform distance between X_n / N and h(n / N).

    The maximum runs over the union of the walk's steps and the curve's
    support [0, 2 rho_c]; h is 0 outside its support and X is 0 past the end
    of the walk.
    """
    N = n_vertices
    L = len(trace.x)
    last = max(L - 1, math.ceil(curve.span * N))
    x = np.zeros(last + 1)
    x[:L] = trace.x
    t = np.arange(last + 1, dtype=np.float64) / N
    h = height_table(curve.c)(t)
    dist = float(np.max(np.abs(x / N - h)))
    top = int(np.argmax(trace.x))
    return ProfileComparison(
        sup_distance=dist,
        max_height_fraction=float(trace.x[top]) / N,
        argmax_fraction=top / N,
        component_fraction=trace.component_size / N,
    )


class IncrementBin(NamedTuple):
    alpha_bin: float
    mean: float
    count: int
    predicted: float


def increment_stats(
    schedule: RenewalSchedule, alpha: np.ndarray, bin_width: float, c: float, eta: float
) -> list[IncrementBin]:
    """Mean renewal gap tau_{i+1} - tau_i grouped by alpha at tau_i.

    Only bins lying entirely in the supercritical range (1 - alpha) c > 1 +
    eta are reported; ``predicted`` is 2/rho - 1 at the bin centre.
    """
    valid = schedule.valid
    if len(valid) < 2:
        return []
    gaps = np.diff(valid).astype(np.float64)
    a = alpha[valid[:-1]]
    bins = np.floor(a / bin_width).astype(np.int64)
    alpha_max = 1.0 - (1.0 + eta) / c
    rows = []
    for b in np.unique(bins):
        hi = (b + 1) * bin_width
        if hi > alpha_max:
            continue
        sel = bins == b
        centre = (b + 0.5) * bin_width
        centre = float(centre)
        rows.append(IncrementBin(centre, float(gaps[sel].mean()), int(sel.sum()), expected_renewal_increment(c, centre)))
    return rows


class WayDownRow(NamedTuple):
    k: int
    observed: float
    predicted: float


def way_down_check(pins: PinningSet, n_vertices: int, c: float) -> list[WayDownRow]:
    """(zeta_k - tau_{h_k}) / N against (1 - k eps) rho_{(1 - k eps) c}."""
    rows = []
    for j, (tau_h, zeta) in enumerate(zip(pins.tau_h.tolist(), pins.zeta.tolist())):
        if zeta < 0:
            continue
        k = j + 1
        frac = 1.0 - k * pins.epsilon
        if frac < 0:
            continue
        rows.append(WayDownRow(k, (zeta - tau_h) / n_vertices, frac * survival_at_density(c, k * pins.epsilon)))
    return rows

"""Depth-first exploration with active / sleeping / retired vertices.

At each step the walker at the top of the active stack moves to a sleeping
neighbour (the smallest one under the min-index policy) or, if it has none,
is retired and the walker backtracks. The height X_n = |A_n| - 1 is the
contour process of the resulting spanning tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidParameter
from .graphs import SparseGraph

POLICIES = ("min-index", "uniform")


@dataclass(frozen=True, eq=False)
class DfsTrace:
    """Step log of one exploration.

    ``x[n]`` is the height after n steps and ``walker[n]`` the current vertex
    a_n (0 once the active list is empty). ``x[0] == 0`` and the final entry
    is -1, after the root itself is popped.
    """

    x: np.ndarray
    walker: np.ndarray
    start: int
    component_size: int

    @property
    def length(self) -> int:
        """Number of steps, 2 |C(start)| - 1."""
        return len(self.x) - 1

    @property
    def forward(self) -> np.ndarray:
        """Boolean per step 1..length: True for a forward move."""
        return np.diff(self.x) > 0

    def steps(self):
        """Yield ``(kind, x_after, vertex_after)`` for every step."""
        fwd = self.forward
        for n in range(1, len(self.x)):
            v = int(self.walker[n])
            yield ("forward" if fwd[n - 1] else "backtrack", int(self.x[n]), v or None)

    def first_visit(self, n_vertices: int) -> np.ndarray:
        """Step at which each vertex left the sleeping set.

        Indexed by vertex id; vertices never visited get ``len(x)`` (later
        than every step), so ``first_visit > n`` is the sleeping set S_n.
        """
        out = np.full(n_vertices + 1, len(self.x), dtype=np.int64)
        idx = np.flatnonzero(np.diff(self.x) > 0) + 1
        out[self.walker[idx]] = idx
        out[self.start] = 0
        return out


@dataclass(frozen=True, eq=False)
class SpanningTree:
    """Parent pointers: ``parent[v]`` is v's parent, 0 for the root and -1
    for vertices outside the explored component."""

    parent: np.ndarray
    root: int

    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.parent >= 0)

    def edges(self) -> list[tuple[int, int]]:
        kids = np.flatnonzero(self.parent > 0)
        return [(int(self.parent[v]), int(v)) for v in kids]

    def as_dict(self) -> dict[int, int | None]:
        return {int(v): (int(self.parent[v]) or None) for v in self.vertices()}


@numba.njit(cache=True, nogil=True)
def _dfs_kernel(offsets, neighbors, n, start):
    sleeping = np.ones(n + 1, dtype=np.bool_)
    sleeping[0] = False
    cursor = offsets[:-1].copy()
    parent = np.full(n + 1, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    x = np.empty(2 * n, dtype=np.int32)
    walker = np.empty(2 * n, dtype=np.int32)

    top = 0
    stack[0] = start
    sleeping[start] = False
    parent[start] = 0
    x[0] = 0
    walker[0] = start
    step = 0
    while top >= 0:
        v = stack[top]
        k = cursor[v]
        end = offsets[v + 1]
        while k < end and not sleeping[neighbors[k]]:
            k += 1
        step += 1
        if k < end:
            w = neighbors[k]
            cursor[v] = k + 1
            sleeping[w] = False
            parent[w] = v
            top += 1
            stack[top] = w
            walker[step] = w
        else:
            cursor[v] = k
            top -= 1
            walker[step] = stack[top] if top >= 0 else 0
        x[step] = top
    return x[: step + 1].copy(), walker[: step + 1].copy(), parent


def _shuffled_neighbors(g: SparseGraph, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    owner = np.repeat(np.arange(g.n + 1, dtype=np.int64), g.degrees())
    keys = rng.random(g.neighbors.size)
    return g.neighbors[np.lexsort((keys, owner))]


def run_dfs(
    g: SparseGraph, start: int = 1, policy: str = "min-index", seed: int | None = None
) -> tuple[DfsTrace, SpanningTree]:
    """Explore the component of ``start``.

    ``policy="uniform"`` shuffles every adjacency list once (Philox keyed by
    ``seed``) and then takes the first sleeping neighbour in that order,
    which is a uniform choice among the sleeping neighbours.
    """
    if not 1 <= start <= g.n:
        raise InvalidParameter(f"start vertex {start} outside 1..{g.n}")
    if policy == "min-index":
        neighbors = g.neighbors
    elif policy == "uniform":
        neighbors = _shuffled_neighbors(g, 0 if seed is None else seed)
    else:
        raise InvalidParameter(f"unknown policy {policy!r}; expected one of {POLICIES}")
    x, walker, parent = _dfs_kernel(g.offsets, neighbors, g.n, start)
    size = (len(x)) // 2
    return DfsTrace(x, walker, start, size), SpanningTree(parent, start)


def find_giant_run(
    g: SparseGraph, threshold_fraction: float, policy: str = "min-index", seed: int | None = None
) -> tuple[DfsTrace, SpanningTree, bool]:
    """Explore from vertex 1 and accept when its component holds at least
    ``threshold_fraction`` of the vertices."""
    if not 0.0 < threshold_fraction < 1.0:
        raise InvalidParameter(f"threshold_fraction must lie in (0, 1), got {threshold_fraction!r}")
    trace, tree = run_dfs(g, 1, policy, seed)
    return trace, tree, trace.component_size >= threshold_fraction * g.n


def write_trace_csv(trace: DfsTrace, path, alpha: np.ndarray | None = None) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "x", "alpha", "vertex"])
        xs = trace.x.tolist()
        vs = trace.walker.tolist()
        al = alpha.tolist() if alpha is not None else [""] * len(xs)
        for n, (xv, a, v) in enumerate(zip(xs, al, vs)):
            w.writerow([n, xv, repr(a) if a != "" else "", v if v else ""])


def read_trace_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (x, alpha, walker) with walker 0 where the vertex column is empty."""
    import csv

    xs, al, vs = [], [], []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for row in r:
            xs.append(int(row[1]))
            al.append(float(row[2]) if row[2] else np.nan)
            vs.append(int(row[3]) if row[3] else 0)
    return np.array(xs), np.array(al), np.array(vs)

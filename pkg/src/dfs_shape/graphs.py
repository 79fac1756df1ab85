"""Sparse Erdos-Renyi graphs G(n, c/n) and structural censuses.

Vertices are 1-based. Adjacency is stored CSR-style with a leading dummy row
so the neighbours of ``v`` are ``neighbors[offsets[v]:offsets[v + 1]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import InvalidParameter

_U64 = 1 << 64


@dataclass(frozen=True)
class GraphSpec:
    n: int
    c: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameter(f"n must be a positive integer, got {self.n!r}")
        if not math.isfinite(self.c) or self.c < 0:
            raise InvalidParameter(f"c must be finite and non-negative, got {self.c!r}")
        if not 0 <= int(self.seed) < _U64:
            raise InvalidParameter(f"seed must fit in 64 unsigned bits, got {self.seed!r}")

    @property
    def p(self) -> float:
        return min(self.c / self.n, 1.0)


@dataclass(frozen=True, eq=False)
class SparseGraph:
    n: int
    offsets: np.ndarray
    neighbors: np.ndarray
    m: int = field(default=0)

    def __post_init__(self):
        self.offsets.setflags(write=False)
        self.neighbors.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges) -> "SparseGraph":
        """Build from an iterable of 1-based pairs; duplicates and loops are dropped."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 1 or arr.max() > n):
            raise InvalidParameter("edge endpoint outside 1..n")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keep = lo != hi
        pairs = np.unique(np.stack([lo[keep], hi[keep]], axis=1), axis=0)
        return _build_csr(n, pairs[:, 0], pairs[:, 1])

    def adj(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        """Degree of every vertex, indexed 1..n (entry 0 is unused and 0)."""
        return np.diff(self.offsets)

    def edges(self) -> np.ndarray:
        """(m, 2) array of pairs i < j, sorted lexicographically."""
        src = np.repeat(np.arange(self.n + 1, dtype=np.int64), self.degrees())
        dst = self.neighbors
        keep = src < dst
        return np.stack([src[keep], dst[keep]], axis=1)

    def tobytes(self) -> bytes:
        return self.offsets.tobytes() + self.neighbors.tobytes()


def _build_csr(n: int, lo: np.ndarray, hi: np.ndarray) -> SparseGraph:
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    neighbors = dst[order].astype(np.int64)
    counts = np.bincount(src, minlength=n + 1).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return SparseGraph(n, offsets, neighbors, int(lo.size))


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the colex pair index k = j (j - 1) / 2 + i, 0 <= i < j."""
    j = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float rounding can put j off by one either way
    j -= (j * (j - 1) // 2) > k
    j += ((j + 1) * j // 2) <= k
    i = k - j * (j - 1) // 2
    return i, j


def sample_graph(spec: GraphSpec) -> SparseGraph:
    """Sample G(n, p) by geometric skips over the linearized pair index.

    Expected work is O(p n^2) = O(c n). The generator is Philox keyed by the
    GraphSpec seed, so equal specs give byte-identical graphs.
    """
    n, p = spec.n, spec.p
    total = n * (n - 1) // 2
    empty = np.zeros(0, dtype=np.int64)
    if p <= 0.0 or total == 0:
        return _build_csr(n, empty, empty)
    if p >= 1.0:
        i, j = _pair_from_index(np.arange(total, dtype=np.int64))
        return _build_csr(n, i + 1, j + 1)

    rng = np.random.Generator(np.random.Philox(spec.seed))
    chunks = []
    pos = -1
    expected = total * p
    chunk = max(1024, int(expected + 6.0 * math.sqrt(expected) + 16))
    while True:
        skips = rng.geometric(p, size=chunk)
        idx = pos + np.cumsum(skips)
        hit = idx[idx < total]
        chunks.append(hit)
        if hit.size < chunk:
            break
        pos = int(idx[-1])
        chunk = max(1024, chunk // 4)
    k = np.concatenate(chunks)
    i, j = _pair_from_index(k)
    return _build_csr(n, i + 1, j + 1)


def degree_census(g: SparseGraph) -> tuple[dict[int, int], int]:
    deg = g.degrees()[1:]
    hist = np.bincount(deg) if deg.size else np.zeros(1, dtype=np.int64)
    table = {int(d): int(cnt) for d, cnt in enumerate(hist) if cnt}
    return table, int(deg.max()) if deg.size else 0


@dataclass(frozen=True)
class ComponentCensus:
    sizes: tuple[int, ...]
    largest: int
    max_degree: int

    def count(self, size: int) -> int:
        """Number of components with exactly ``size`` vertices."""
        return self.sizes.count(size)


@numba.njit(cache=True, nogil=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@numba.njit(cache=True, nogil=True)
def _census_kernel(offsets, neighbors, mask):
    n = mask.shape[0] - 1
    parent = np.arange(n + 1)
    size = np.ones(n + 1, dtype=np.int64)
    max_deg = 0
    for v in range(1, n + 1):
        if not mask[v]:
            continue
        d = 0
        for k in range(offsets[v], offsets[v + 1]):
            w = neighbors[k]
            if not mask[w]:
                continue
            d += 1
            if w < v:
                a = _find(parent, v)
                b = _find(parent, w)
                if a != b:
                    if size[a] < size[b]:
                        a, b = b, a
                    parent[b] = a
                    size[a] += size[b]
        if d > max_deg:
            max_deg = d
    count = 0
    for v in range(1, n + 1):
        if mask[v] and parent[v] == v:
            count += 1
    sizes = np.empty(count, dtype=np.int64)
    j = 0
    for v in range(1, n + 1):
        if mask[v] and parent[v] == v:
            sizes[j] = size[v]
            j += 1
    return sizes, max_deg


def _as_mask(g: SparseGraph, mask) -> np.ndarray:
    if mask is None:
        out = np.ones(g.n + 1, dtype=np.bool_)
    elif callable(mask):
        out = np.fromiter((bool(mask(v)) if v else False for v in range(g.n + 1)), dtype=np.bool_, count=g.n + 1)
    else:
        out = np.asarray(mask, dtype=np.bool_)
        if out.shape != (g.n + 1,):
            raise InvalidParameter("mask array must have length n + 1 (index 0 unused)")
        out = out.copy()
    out[0] = False
    return out


def component_census(g: SparseGraph, mask=None) -> ComponentCensus:
    """Component sizes of the subgraph induced on the masked vertices.

    ``mask`` is a boolean array indexed by vertex id (length n + 1), a
    predicate on vertex ids, or None for the whole graph. ``max_degree`` is
    the largest degree inside the induced subgraph.
    """
    m = _as_mask(g, mask)
    sizes, max_deg = _census_kernel(g.offsets, g.neighbors, m)
    sizes = tuple(int(s) for s in np.sort(sizes)[::-1])
    return ComponentCensus(sizes, sizes[0] if sizes else 0, int(max_deg))


def mesoscopic_check(census: ComponentCensus, n: int) -> bool:
    """True iff no component size s satisfies n^0.1 <= s <= n^0.9."""
    lo, hi = n**0.1, n**0.9
    return not any(lo <= s <= hi for s in census.sizes)


def write_edge_list(g: SparseGraph, path) -> None:
    with open(path, "w") as fh:
        for i, j in g.edges().tolist():
            fh.write(f"{i} {j}\n")


def read_edge_list(path, n: int) -> SparseGraph:
    with open(path) as fh:
        pairs = [tuple(int(t) for t in line.split()) for line in fh if line.strip()]
    return SparseGraph.from_edges(n, pairs)

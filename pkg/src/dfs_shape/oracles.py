"""Brute-force references for tests. Slow on purpose; never used at scale."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import OracleBudgetError
from .graphs import SparseGraph


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 12
    max_terms: int = 10**6
    max_trace: int = 10**4


DEFAULT_BUDGET = OracleBudget()


def longest_path_exhaustive(g: SparseGraph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Edge count of the longest simple path.

    Exhaustive over vertex subsets: ``ends[S]`` is the set (as a bitmask) of
    vertices at which some simple path covering exactly S can end. Cost is
    bounded by 2^n n^2 whatever the density, unlike path enumeration.
    """
    n = g.n
    if n > budget.max_vertices:
        raise OracleBudgetError(f"{n} vertices exceeds the exhaustive budget of {budget.max_vertices}")
    nbr = [0] * n
    for v in range(1, n + 1):
        for w in g.adj(v).tolist():
            nbr[v - 1] |= 1 << (w - 1)
    ends = [0] * (1 << n)
    for v in range(n):
        ends[1 << v] = 1 << v
    best = 0
    for S in range(1, 1 << n):
        e = ends[S]
        if not e:
            continue
        best = max(best, bin(S).count("1") - 1)
        while e:
            low = e & -e
            v = low.bit_length() - 1
            e ^= low
            free = nbr[v] & ~S
            while free:
                bit = free & -free
                free ^= bit
                ends[S | bit] |= bit
    return best


def components_bfs(g: SparseGraph) -> list[list[int]]:
    seen = [False] * (g.n + 1)
    comps = []
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in g.adj(v).tolist():
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def survival_bisection(c: float) -> float:
    """Root of 1 - r - exp(-c r) on [1e-14, 1 - 1e-14] by plain bisection."""
    if c <= 1.0:
        return 0.0
    lo, hi = 1e-14, 1.0 - 1e-14
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if 1.0 - mid - math.exp(-c * mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dilog_series(x: float, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    """Partial sum of x^k / k^2 with a tail correction.

    For x < 1 the neglected tail is below x^(M+1) / ((M+1)^2 (1-x)); at x = 1
    the tail sum_{k > M} 1/k^2 is added through its Euler-Maclaurin
    expansion 1/M - 1/(2 M^2) + 1/(6 M^3).
    """
    M = budget.max_terms
    k = np.arange(1, M + 1, dtype=np.float64)
    with np.errstate(under="ignore"):
        total = float(np.sum(np.power(x, k) / (k * k)))
    if x == 1.0:
        total += 1.0 / M - 1.0 / (2.0 * M * M) + 1.0 / (6.0 * M**3)
    return total


def renewal_scan_quadratic(x, n_vertices: int, budget: OracleBudget = DEFAULT_BUDGET) -> list[int]:
    """Literal transcription of the pseudo renewal definition, O(L^2).

    Returns tau_0, tau_1, ... up to and including the first capped value.
    """
    x = [int(v) for v in x]
    L = len(x)
    if L > budget.max_trace:
        raise OracleBudgetError(f"trace of length {L} exceeds oracle budget {budget.max_trace}")
    threshold = math.ceil(math.sqrt(n_vertices))
    cap = 2 * n_vertices
    tau = [0]
    while True:
        i = len(tau) - 1
        found = None
        for n in range(tau[-1] + 1, L):
            if x[n] != i + 1:
                continue
            ret = math.inf
            for k in range(1, L - n):
                if x[n + k] == i:
                    ret = k
                    break
            if ret > threshold:
                found = n
                break
        if found is None:
            tau.append(cap)
            return tau
        tau.append(found)

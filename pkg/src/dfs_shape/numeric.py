"""Closed-form quantities: survival probabilities, the dilogarithm and the
limiting DFS profile.

Everything here is a pure function of its arguments. Vertex-count fractions
(times and heights along the profile) are expressed in units of N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InvalidParameter, SingularityError

PI2_6 = math.pi**2 / 6.0

# Series length for Li2 on [0, 1/2]: 0.5**65 / 65**2 < 1e-22.
_LI2_TERMS = 64
# Below this, log(1 - r) / r is replaced by its limit -1.
_SMALL_RHO = 1e-12


@dataclass(frozen=True)
class SurvivalSolution:
    c: float
    rho: float
    residual: float


def _check_c(c: float) -> float:
    c = float(c)
    if not math.isfinite(c) or c <= 0:
        raise InvalidParameter(f"c must be finite and positive, got {c!r}")
    return c


def _fixed_point_defect(c: float, rho: float) -> float:
    return 1.0 - rho - math.exp(-c * rho)


def solve_survival(c: float, tol: float = 1e-12) -> SurvivalSolution:
    """Survival probability of a Poisson(c) Galton-Watson tree.

    Solves ``1 - rho = exp(-c rho)`` for its root in (0, 1) when c > 1 and
    returns 0 otherwise. Newton from ``1 - exp(-c)`` (the iterates then
    decrease monotonically onto the root since the defect is concave);
    bisection if Newton ever leaves (0, 1).
    """
    c = _check_c(c)
    if not tol > 0:
        raise InvalidParameter(f"tol must be positive, got {tol!r}")
    if c <= 1.0:
        return SurvivalSolution(c, 0.0, 0.0)

    rho = -math.expm1(-c)
    if rho == 1.0:
        # true root is within exp(-c) of 1, below half an ulp
        return SurvivalSolution(c, 1.0, math.exp(-c))
    ok = True
    for _ in range(200):
        e = math.exp(-c * rho)
        step = (1.0 - rho - e) / (c * e - 1.0)
        rho -= step
        if not 0.0 < rho < 1.0:
            ok = False
            break
        if abs(step) <= 4e-16 * rho:
            break
    if not ok or abs(_fixed_point_defect(c, rho)) > tol:
        rho = _bisect_survival(c, tol)
    return SurvivalSolution(c, rho, abs(_fixed_point_defect(c, rho)))


def _bisect_survival(c: float, tol: float) -> float:
    lo, hi = tol, 1.0 - tol
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if _fixed_point_defect(c, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def survival_vec(m) -> np.ndarray:
    """Vectorized ``solve_survival(m).rho`` for an array of mean offspring."""
    m = np.asarray(m, dtype=float)
    out = np.zeros_like(m)
    sup = m > 1.0
    if not sup.any():
        return out
    ms = m[sup]
    rho = -np.expm1(-ms)
    for _ in range(200):
        e = np.exp(-ms * rho)
        step = (1.0 - rho - e) / (ms * e - 1.0)
        rho = rho - step
        if np.all(np.abs(step) <= 4e-16 * rho):
            break
    out[sup] = rho
    return out


def survival_at_density(c: float, alpha: float) -> float:
    """Survival probability at the effective mean ``(1 - alpha) c``."""
    c = _check_c(c)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    m = (1.0 - alpha) * c
    if m <= 1.0:
        return 0.0
    return solve_survival(m).rho


def _li2_series(x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x)
    for k in range(_LI2_TERMS, 0, -1):
        acc = x * (1.0 / (k * k) + acc)
    return acc


def dilog(x):
    """Real dilogarithm Li2 on [0, 1]; accepts scalars or arrays.

    Power series up to 1/2, the reflection ``Li2(x) + Li2(1-x) =
    pi^2/6 - log(x) log(1-x)`` above.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError("dilog is only defined here on [0, 1]")
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    lo = flat <= 0.5
    out[lo] = _li2_series(flat[lo])
    hi = ~lo
    if hi.any():
        xh = flat[hi]
        y = 1.0 - xh  # exact for x in [1/2, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            cross = np.where(y > 0.0, np.log(xh) * np.log(y), 0.0)
        out[hi] = PI2_6 - cross - _li2_series(y)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True)
class LimitCurve:
    """Limiting profile of the normalized DFS contour process for one c.

    The increasing part is ``(f(r), g(r))`` and the decreasing part
    ``(f(r) + 2 r (1 - (f(r) + g(r)) / 2), g(r))``, both for r running over
    [0, rho_c]; r = 0 is the peak. For c <= 1 the curve is identically 0.
    """

    c: float
    rho_c: float
    li2_rho_c: float
    log1m_rho_c: float
    peak_time: float
    peak_height: float
    span: float

    @classmethod
    def for_c(cls, c: float) -> "LimitCurve":
        c = _check_c(c)
        rho_c = solve_survival(c).rho
        if rho_c == 0.0:
            return cls(c, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        li2 = dilog(rho_c)
        # rho_c rounds to 1.0 for c >~ 37; the fixed point still gives the log
        l1m = math.log1p(-rho_c) if rho_c < 1.0 else -c * rho_c
        peak_time = (li2 + l1m - 2.0 * (l1m / rho_c + 1.0)) / c
        peak_height = rho_c - li2 / c
        return cls(c, rho_c, li2, l1m, peak_time, peak_height, 2.0 * rho_c)

    def _log1m(self, rho: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            val = np.log1p(-rho)
        return np.where(rho == self.rho_c, self.log1m_rho_c, val)

    def _log1m_over(self, rho: np.ndarray) -> np.ndarray:
        # removable singularity at 0: log(1 - r) / r -> -1
        small = rho < _SMALL_RHO
        return np.where(small, -1.0, self._log1m(rho) / np.where(small, 1.0, rho))

    def f(self, rho):
        rho = np.asarray(rho, dtype=float)
        val = (
            self.li2_rho_c
            - dilog(rho)
            + self.log1m_rho_c
            - self._log1m(rho)
            - 2.0 * (self.log1m_rho_c / self.rho_c - self._log1m_over(rho))
        ) / self.c
        return float(val) if val.ndim == 0 else val

    def g(self, rho):
        rho = np.asarray(rho, dtype=float)
        val = (dilog(rho) - self.li2_rho_c + self._log1m(rho) - self.log1m_rho_c) / self.c
        return float(val) if val.ndim == 0 else val

    def down_time(self, rho):
        """Abscissa of the decreasing part; increases from peak_time to span."""
        rho = np.asarray(rho, dtype=float)
        val = self.f(rho) - 2.0 * self._log1m(rho) / self.c
        return float(val) if np.ndim(val) == 0 else val


def limit_curve(c: float) -> LimitCurve:
    return _cached_curve(float(c))


@lru_cache(maxsize=64)
def _cached_curve(c: float) -> LimitCurve:
    return LimitCurve.for_c(c)


def _check_branch_rho(curve: LimitCurve, rho: float) -> float:
    rho = float(rho)
    if not 0.0 <= rho <= curve.rho_c:
        raise DomainError(f"rho must lie in [0, {curve.rho_c}], got {rho!r}")
    return rho


def curve_up(curve: LimitCurve, rho: float) -> tuple[float, float]:
    rho = _check_branch_rho(curve, rho)
    if curve.rho_c == 0.0:
        return 0.0, 0.0
    return curve.f(rho), curve.g(rho)


def curve_down(curve: LimitCurve, rho: float) -> tuple[float, float]:
    # 2 r (1 - (f + g)/2) = -2 log(1 - r) / c since f + g = 2 (1 + log(1-r)/(c r)).
    rho = _check_branch_rho(curve, rho)
    if curve.rho_c == 0.0:
        return 0.0, 0.0
    return curve.down_time(rho), curve.g(rho)


def eval_height(curve: LimitCurve, t: float, tol: float = 1e-10) -> float:
    """h(t), by bisection in rho on the branch containing t.

    Returns 0 outside [0, 2 rho_c].
    """
    t = float(t)
    if curve.rho_c == 0.0 or not 0.0 < t < curve.span:
        return 0.0
    if t == curve.peak_time:
        return curve.peak_height
    if t <= curve.peak_time:
        branch, decreasing = curve.f, True
    else:
        branch, decreasing = curve.down_time, False
    lo, hi = 0.0, curve.rho_c
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        tm = branch(mid)
        if abs(tm - t) <= tol or not lo < mid < hi:
            break
        if (tm > t) == decreasing:
            lo = mid
        else:
            hi = mid
    return curve.g(mid)


class HeightTable:
    """Dense sampling of h for fast vectorized lookup.

    Built from the explored-fraction parametrization (trapezoid cumulative
    integral of rho over a uniform u-grid) rather than from the closed forms,
    which lose all resolution once rho is within an ulp of 1 (c above ~37).
    Abscissae are at most ~4/points apart, so linear interpolation is good to
    about 1e-9 for c <= 20.
    """

    def __init__(self, curve: LimitCurve, points: int = 1 << 17):
        self.curve = curve
        if curve.rho_c == 0.0:
            self.t = np.array([0.0])
            self.h = np.array([0.0])
            return
        c = curve.c
        u = np.linspace(0.0, 1.0 - 1.0 / c, points)
        rho = survival_vec((1.0 - u) * c)
        rho[0] = curve.rho_c
        rho[-1] = 0.0
        du = u[1] - u[0]
        integral = np.concatenate([[0.0], np.cumsum(0.5 * du * (rho[1:] + rho[:-1]))])
        up_t = 2.0 * u - integral
        down_t = up_t + 2.0 * rho * (1.0 - u)
        t = np.concatenate([up_t, down_t[::-1][1:]])
        h = np.concatenate([integral, integral[::-1][1:]])
        # guard against last-ulp non-monotonicity before np.interp
        self.t = np.maximum.accumulate(t)
        self.h = h

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, self.t, self.h, left=0.0, right=0.0)


@lru_cache(maxsize=16)
def height_table(c: float, points: int = 1 << 17) -> HeightTable:
    return HeightTable(limit_curve(c), points)


def sample_curve(curve: LimitCurve, points: int = 2000) -> tuple[np.ndarray, np.ndarray]:
    """(t, h) on a uniform t-grid over [0, 2 rho_c]."""
    t = np.linspace(0.0, curve.span, points)
    return t, height_table(curve.c)(t)


def adaptive_simpson(func, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) * (fa + 4.0 * fm + fb) / 6.0

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = func(lm), func(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
        )

    if b == a:
        return 0.0
    fa, fb, fm = func(a), func(b), func(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def _check_u(c: float, u: float) -> None:
    if c <= 1.0:
        raise DomainError(f"integral parametrization needs c > 1, got {c!r}")
    if not 0.0 <= u <= 1.0 - 1.0 / c + 1e-15:
        raise DomainError(f"u must lie in [0, 1 - 1/c], got {u!r}")


def integral_parametrization(c: float, u: float, tol: float = 1e-8) -> tuple[float, float]:
    """(2u - I(u), I(u)) with I(u) the integral of rho_{(1-x)c} over [0, u]."""
    c = _check_c(c)
    u = float(u)
    _check_u(c, u)
    integral = adaptive_simpson(lambda x: survival_at_density(c, min(x, 1.0)), 0.0, u, tol)
    return 2.0 * u - integral, integral


def integral_profile(c: float, u, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """integral_parametrization on a sorted grid, integrating piece by piece.

    The tolerance budget is split across pieces in proportion to length, so
    every point carries absolute error at most ``tol``.
    """
    c = _check_c(c)
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or np.any(np.diff(u) < 0):
        raise DomainError("u must be a sorted one-dimensional grid")
    if u.size == 0:
        return u.copy(), u.copy()
    _check_u(c, float(u[0]))
    _check_u(c, float(u[-1]))
    integrand = lambda x: survival_at_density(c, min(x, 1.0))  # noqa: E731
    total = max(float(u[-1]), 1e-300)
    out = np.empty_like(u)
    acc, prev = 0.0, 0.0
    for j, uj in enumerate(u):
        if uj > prev:
            acc += adaptive_simpson(integrand, prev, float(uj), tol * (uj - prev) / total)
        out[j] = acc
        prev = float(uj)
    return 2.0 * u - out, out


def subcritical_mean_size(c: float, alpha: float) -> float:
    """Expected total size of a Poisson GW tree conditioned on extinction,
    at effective mean ``(1 - alpha) c``."""
    c = _check_c(c)
    m = (1.0 - alpha) * c
    if m == 1.0:
        raise SingularityError("effective mean offspring exactly 1")
    rho = survival_at_density(c, alpha)
    return 1.0 / (1.0 - (1.0 - rho) * m)


def expected_renewal_increment(c: float, alpha: float) -> float:
    """Limit mean gap between successive pseudo renewal times: 2/rho - 1."""
    c = _check_c(c)
    rho = survival_at_density(c, alpha)
    if rho == 0.0:
        raise DomainError(f"effective mean (1 - alpha) c = {(1 - alpha) * c} is not supercritical")
    return 2.0 / rho - 1.0


def longest_path_bound(c: float) -> float:
    """rho_c - Li2(rho_c)/c, the peak height of the limiting profile."""
    c = _check_c(c)
    if c <= 1.0:
        raise DomainError(f"longest path bound needs c > 1, got {c!r}")
    return limit_curve(c).peak_height


def write_curve_csv(curve: LimitCurve, path, points: int = 2000) -> None:
    import csv

    t, h = sample_curve(curve, points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "h"])
        for ti, hi in zip(t.tolist(), h.tolist()):
            w.writerow([repr(ti), repr(hi)])

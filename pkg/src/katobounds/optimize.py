"""Derivative-free extremum search: box domains, the unit sphere, 1-D intervals.

Every search here is a dense grid scan followed by Nelder-Mead polishing
from the best few grid cells.  Objective functions are *vectorized*: they
take an array of points of shape ``(npts, dim)`` and return ``(npts,)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

__all__ = [
    "BoxDomain",
    "ExtremaReport",
    "SpherePoly",
    "extrema_box",
    "maximize_box",
    "minimize_box",
    "extrema_sphere",
    "sup_on_interval",
]

NM_OPTIONS = {"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000, "maxfev": 4000}
N_REFINE = 5

VectorFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoxDomain:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have equal length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("empty box: lo > hi in some coordinate")

    @classmethod
    def from_intervals(cls, *intervals: Sequence[float]) -> "BoxDomain":
        return cls(tuple(float(a) for a, _ in intervals), tuple(float(b) for _, b in intervals))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, x, slack: float = 0.0) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= np.asarray(self.lo) - slack) and np.all(x <= np.asarray(self.hi) + slack))

    def describe(self) -> str:
        return " x ".join(f"[{a:g}, {b:g}]" for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class ExtremaReport:
    """Minimum and maximum of a function with the points where they occur."""

    min: float
    max: float
    argmin: tuple[float, ...]
    argmax: tuple[float, ...]
    domain: str

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError("min exceeds max")


def _grid(domain: BoxDomain, grid_per_dim) -> np.ndarray:
    if isinstance(grid_per_dim, int):
        grid_per_dim = (grid_per_dim,) * domain.dim
    axes = [np.linspace(a, b, m) for a, b, m in zip(domain.lo, domain.hi, grid_per_dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _checked(f: VectorFn, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise FloatingPointError(f"objective is not finite at {tuple(bad)}")
    return vals


def _polish(g: VectorFn, pts: np.ndarray, vals: np.ndarray, bounds) -> tuple[float, np.ndarray]:
    """Minimize ``g`` by Nelder-Mead from the ``N_REFINE`` best grid points."""
    order = np.lexsort((*pts.T[::-1], vals))
    best_i = order[0]
    best_v, best_x = float(vals[best_i]), pts[best_i].copy()

    def scalar(x):
        v = g(np.asarray(x, dtype=float)[None, :])[0]
        return float(v) if np.isfinite(v) else math.inf

    for i in order[:N_REFINE]:
        res = minimize(scalar, pts[i], method="Nelder-Mead", bounds=bounds, options=NM_OPTIONS)
        if res.fun < best_v:
            best_v, best_x = float(res.fun), np.asarray(res.x, dtype=float)
    return best_v, best_x


def extrema_box(f: VectorFn, domain: BoxDomain, grid_per_dim=101) -> ExtremaReport:
    """Min and max of ``f`` over a closed box (grid scan + Nelder-Mead)."""
    pts = _grid(domain, grid_per_dim)
    vals = _checked(f, pts)
    bounds = list(zip(domain.lo, domain.hi))
    vmin, xmin = _polish(f, pts, vals, bounds)
    vmax, xmax = _polish(lambda x: -np.asarray(f(x)), pts, -vals, bounds)
    return ExtremaReport(vmin, -vmax, tuple(map(float, xmin)), tuple(map(float, xmax)), domain.describe())


def maximize_box(f: VectorFn, domain: BoxDomain, grid_per_dim=101) -> ExtremaReport:
    """Maximum of ``f`` over a box; the ``min`` fields carry the best grid minimum only."""
    pts = _grid(domain, grid_per_dim)
    vals = _checked(f, pts)
    vmax, xmax = _polish(lambda x: -np.asarray(f(x)), pts, -vals, list(zip(domain.lo, domain.hi)))
    i = int(np.argmin(vals))
    return ExtremaReport(float(vals[i]), -vmax, tuple(map(float, pts[i])), tuple(map(float, xmax)), domain.describe())


def minimize_box(f: VectorFn, domain: BoxDomain, grid_per_dim=101) -> ExtremaReport:
    rep = maximize_box(lambda x: -np.asarray(f(x)), domain, grid_per_dim)
    return ExtremaReport(-rep.max, -rep.min, rep.argmax, rep.argmin, rep.domain)


# --------------------------------------------------------------------------
# polynomials on the sphere


class SpherePoly:
    """Multivariate polynomial ``sum_a coeffs[a] * prod_i u_i**exps[a, i]``."""

    def __init__(self, exps, coeffs, d: int | None = None):
        exps = np.asarray(exps, dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=float)
        if exps.ndim != 2 or len(exps) != len(coeffs):
            raise ValueError("exps must be (nterms, d) matching coeffs")
        self.d = exps.shape[1] if d is None else d
        self.exps = exps
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value: float, d: int) -> "SpherePoly":
        return cls(np.zeros((1, d), dtype=np.int64), [value])

    def __call__(self, u) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        deg = int(self.exps.max()) if self.exps.size else 0
        pw = np.ones((deg + 1,) + u.shape)
        for e in range(1, deg + 1):
            pw[e] = pw[e - 1] * u
        mono = np.ones((u.shape[0], len(self.coeffs)))
        for i in range(self.d):
            mono *= pw[self.exps[:, i], :, i].T
        return mono @ self.coeffs

    def coefficient(self, exponent: Sequence[int]) -> float:
        hit = np.all(self.exps == np.asarray(exponent), axis=1)
        return float(self.coeffs[hit].sum())

    def is_even(self) -> bool:
        """True when every monomial with a nonzero coefficient has even total degree."""
        odd = (self.exps.sum(axis=1) % 2 == 1) & (self.coeffs != 0)
        return not bool(np.any(odd))

    def is_signed_permutation_symmetric(self) -> bool:
        if not self.is_even() or np.any((self.exps % 2 == 1) & (self.coeffs != 0)[:, None]):
            return False
        table = {}
        for e, a in zip(map(tuple, self.exps), self.coeffs):
            table[e] = table.get(e, 0.0) + a
        for e, a in table.items():
            for p in itertools.permutations(e):
                if not math.isclose(table.get(p, 0.0), a, rel_tol=1e-12, abs_tol=1e-12 * (1 + abs(a))):
                    return False
        return True


def _sphere_from_angles(ang: np.ndarray) -> np.ndarray:
    th, ph = ang[:, 0], ang[:, 1]
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)


def _normalized(x: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(x, axis=1, keepdims=True)
    nrm[nrm == 0] = 1.0
    return x / nrm


def extrema_sphere(poly: SpherePoly, d: int | None = None, grid: int = 181) -> ExtremaReport:
    """Min and max of an even polynomial over the unit sphere in R^d.

    In three dimensions a signed-permutation symmetric polynomial is scanned
    over the first octant only (which contains the fundamental domain
    ``u1 >= u2 >= u3 >= 0``); otherwise the full sphere is scanned.  The
    coordinate axes and the diagonals are always probed explicitly.
    """
    d = poly.d if d is None else d
    if d < 2:
        raise ValueError("d must be >= 2")
    if not poly.is_even():
        raise ValueError("polynomial is not even under u -> -u")
    probes = [np.eye(d)[i] for i in range(d)]
    probes += [np.ones(d) / math.sqrt(d)]
    probes += [np.r_[np.ones(m), np.zeros(d - m)] / math.sqrt(m) for m in range(2, d)]
    probes = np.array(probes)

    if d == 3:
        hi = math.pi / 2 if poly.is_signed_permutation_symmetric() else math.pi
        th = np.linspace(0.0, hi, grid)
        ph = np.linspace(0.0, hi if hi < math.pi else 2 * math.pi, grid if hi < math.pi else 2 * grid)
        T, P = np.meshgrid(th, ph, indexing="ij")
        ang = np.stack([T.ravel(), P.ravel()], axis=-1)
        to_u = _sphere_from_angles
        # probe points in angle coordinates
        pa = np.stack([np.arccos(np.clip(probes[:, 2], -1, 1)), np.arctan2(probes[:, 1], probes[:, 0])], axis=-1)
        ang = np.vstack([ang, pa])
    else:
        m = max(3, int(round(grid ** (2.0 / d))))
        axes = [np.linspace(-1.0, 1.0, m)] * d
        mesh = np.meshgrid(*axes, indexing="ij")
        ang = np.stack([x.ravel() for x in mesh], axis=-1)
        ang = ang[np.linalg.norm(ang, axis=1) > 1e-12]
        ang = np.vstack([ang, probes])
        to_u = _normalized

    def f(a):
        return poly(to_u(np.atleast_2d(a)))

    vals = f(ang)
    vmin, amin = _polish(f, ang, vals, None)
    vmax, amax = _polish(lambda a: -f(a), ang, -vals, None)
    umin = to_u(amin[None, :])[0]
    umax = to_u(amax[None, :])[0]
    return ExtremaReport(vmin, -vmax, tuple(map(float, umin)), tuple(map(float, umax)), f"unit sphere S^{d - 1} in R^{d}")


def sup_on_interval(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, grid: int = 4001) -> tuple[float, float]:
    """Supremum of a smooth scalar function on ``[lo, hi]``; returns ``(value, argmax)``.

    Grid scan including both endpoints, then bounded Brent refinement inside
    the bracketing cells of the three best grid points.
    """
    xs = np.linspace(lo, hi, grid)
    vals = np.asarray(f(xs), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("function not finite on the interval")
    i_best = int(np.argmax(vals))
    best_v, best_x = float(vals[i_best]), float(xs[i_best])
    for i in np.argsort(-vals, kind="stable")[:3]:
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
        if b <= a:
            continue
        res = minimize_scalar(lambda x: -float(f(np.array([x]))[0]), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-14 * max(1.0, abs(b))})
        if -res.fun > best_v:
            best_v, best_x = float(-res.fun), float(res.x)
    return best_v, best_x

"""The function G_n(k) through its cutoff decomposition.

``G_n(k)`` is an infinite lattice sum.  Splitting the summation variable at
a cutoff ``rho`` gives

* a finite part :func:`gamma` (``Gamma_n(k)``), summed exactly over the ball
  ``|h| < rho``;
* a uniform tail bound :func:`delta_g` so that ``Gamma <= G <= Gamma + delta``;
* for ``|k| >= 2 rho``, an explicit upper envelope :func:`tail_upper` in
  ``1/|k|`` built from Taylor data of the kernels, which shows that the
  largest ``Gamma`` sits inside the ball ``|k| < 2 rho``.

:func:`sup_bracket` combines the three into an enclosure of ``sup_k G_n(k)``
and :func:`upper_bound_g` turns it into the constant ``G+``.
"""

from __future__ import annotations

import csv
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import comb

from . import kernel
from .optimize import ExtremaReport, SpherePoly, extrema_sphere, sup_on_interval
from .rounding import outward_down, outward_up, round_up_sig

__all__ = [
    "CutoffConfig",
    "LatticeShell",
    "lattice_shell",
    "AsymptoticData",
    "GBracket",
    "TailDominatesError",
    "DEFAULT_CONFIGS",
    "QUICK",
    "default_config",
    "canonicalize",
    "canonical_wave_vectors",
    "gamma",
    "gamma_naive",
    "g_truncated",
    "tail_sum_bound",
    "delta_g",
    "quadratic_average",
    "asymptotic_data",
    "tail_upper",
    "tail_lower",
    "sup_tail",
    "sup_bracket",
    "upper_bound_g",
    "bracket_report",
    "write_gamma_csv",
]

# (rho, t) used for each n unless overridden
DEFAULT_CONFIGS = {3: (20.0, 8), 4: (10.0, 6), 5: (10.0, 6), 10: (10.0, 6)}
FALLBACK = (10.0, 6)
QUICK = (6.0, 4)
# n=3 peaks near |k| = 15.6, so the enumeration radius 2 rho must exceed it
QUICK_CONFIGS = {3: (12.0, 8)}


class TailDominatesError(RuntimeError):
    """The large-|k| envelope exceeds the enumerated maximum."""


@dataclass(frozen=True)
class CutoffConfig:
    n: float
    rho: float
    t: int
    d: int = 3

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise ValueError("d must be an integer >= 2")
        if not self.n > self.d / 2 + 1:
            raise ValueError(f"need n > d/2 + 1 = {self.d / 2 + 1:g}, got n = {self.n:g}")
        if not self.rho > 2 * math.sqrt(self.d):
            raise ValueError(f"need rho > 2 sqrt(d) = {2 * math.sqrt(self.d):.4g}, got {self.rho:g}")
        if not 2 * self.n - 3 - (self.d - 1) > 0:
            raise ValueError("need 2n - 3 - (d - 1) > 0 for the tail bound to converge")
        if not isinstance(self.t, int) or self.t < 2 or self.t % 2:
            raise ValueError(f"t must be an even integer >= 2, got {self.t!r}")

    def as_dict(self) -> dict:
        return asdict(self)


def default_config(n: float, d: int = 3, quick: bool = False, rho: float | None = None, t: int | None = None) -> CutoffConfig:
    r0, t0 = QUICK_CONFIGS.get(n, QUICK) if quick else DEFAULT_CONFIGS.get(n, FALLBACK)
    return CutoffConfig(n=float(n), rho=float(rho if rho is not None else r0), t=int(t if t is not None else t0), d=d)


# --------------------------------------------------------------------------
# lattice ball


@dataclass(frozen=True, eq=False)
class LatticeShell:
    """All ``h in Z^d``, ``0 < |h| < rho``, in lexicographic order."""

    d: int
    rho: float
    points: np.ndarray  # (N, d) int64
    norm2: np.ndarray  # int64
    norm: np.ndarray
    unit: np.ndarray

    def __len__(self):
        return len(self.points)

    @lru_cache(maxsize=8)
    def powers(self, n: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(|h|^n, |h|^(2n), |h|^(2n+2))``."""
        logh2 = np.log(self.norm2.astype(float))
        hn = np.exp(0.5 * n * logh2)
        h2n = hn * hn
        return hn, h2n, h2n * self.norm2

    def radial_sum(self, power: float) -> float:
        """``sum_h |h|^power`` with exact summation."""
        vals = np.exp(0.5 * power * np.log(self.norm2.astype(float)))
        return math.fsum(vals.tolist())


@lru_cache(maxsize=8)
def lattice_shell(d: int, rho: float) -> LatticeShell:
    r = int(math.ceil(rho))
    pts = np.array(list(itertools.product(range(-r, r + 1), repeat=d)), dtype=np.int64)
    n2 = np.einsum("ij,ij->i", pts, pts)
    keep = (n2 > 0) & (n2 < rho * rho)
    pts, n2 = pts[keep], n2[keep]
    nrm = np.sqrt(n2.astype(float))
    for a in (pts, n2, nrm):
        a.setflags(write=False)
    unit = pts / nrm[:, None]
    unit.setflags(write=False)
    return LatticeShell(d, float(rho), pts, n2, nrm, unit)


def canonicalize(k: Sequence[int]) -> tuple[int, ...]:
    """Absolute values sorted non-increasingly; a fundamental domain of the signed permutations."""
    return tuple(sorted((abs(int(x)) for x in k), reverse=True))


def canonical_wave_vectors(d: int, radius: float, full: bool = False) -> np.ndarray:
    """Canonical ``k`` (``k_1 >= ... >= k_d >= 0``) with ``0 < |k| < radius``, lexicographic.

    With ``full=True`` every nonzero ``k`` in the open ball is returned instead.
    """
    r = int(math.ceil(radius))
    rng = range(-r, r + 1) if full else range(0, r + 1)
    pts = np.array(list(itertools.product(rng, repeat=d)), dtype=np.int64)
    n2 = np.einsum("ij,ij->i", pts, pts)
    keep = (n2 > 0) & (n2 < radius * radius)
    if not full:
        keep &= np.all(pts[:, :-1] >= pts[:, 1:], axis=1)
    return pts[keep]


# --------------------------------------------------------------------------
# the finite part


def gamma(config: CutoffConfig, k: Sequence[int], shell: LatticeShell | None = None) -> float:
    """``Gamma_n(k)``: the part of ``G_n(k)`` resummed onto ``|h| < rho``."""
    k = np.asarray(k, dtype=np.int64)
    if k.shape != (config.d,):
        raise ValueError(f"k must have {config.d} components")
    k2 = int(k @ k)
    if k2 == 0:
        raise ValueError("k = 0 is excluded")
    sh = shell if shell is not None else lattice_shell(config.d, config.rho)
    n = config.n
    h, h2 = sh.points, sh.norm2
    hn, h2n, h2n2 = sh.powers(n)

    hk = h @ k
    wedge2 = h2 * k2 - hk * hk  # exact in int64
    kmh2 = k2 - 2 * hk + h2
    far = k2 >= 4 * config.rho**2
    if not far:
        sel = kmh2 > 0  # h = k
        hk, wedge2, kmh2 = hk[sel], wedge2[sel], kmh2[sel]
        hn, h2n, h2n2 = hn[sel], h2n[sel], h2n2[sel]
    kmh2f = kmh2.astype(float)
    p = np.exp(0.5 * n * np.log(kmh2f))  # |k-h|^n
    p2 = p * p
    kn = math.exp(0.5 * n * math.log(k2))
    w = wedge2.astype(float)
    term = w * (kn - p) ** 2 / (h2n2 * p2)
    second = w * (kn - hn) ** 2 / (h2n * p2 * kmh2f)
    if far:
        term += second  # theta(|k-h| - rho) = 1 throughout
    else:
        term += np.where(kmh2f >= config.rho**2, second, 0.0)
    return math.fsum(term.tolist())


def _summand(n: float, k: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Summand of the defining sum ``|h^k|^2 (|k|^n - |k-h|^n)^2 / (|h|^(2n+2) |k-h|^(2n))``."""
    k2 = float(k @ k)
    h2 = np.einsum("ij,ij->i", h, h).astype(float)
    hk = (h @ k).astype(float)
    kmh2 = k2 - 2 * hk + h2
    w = h2 * k2 - hk * hk
    kn = k2 ** (n / 2)
    return w * (kn - kmh2 ** (n / 2)) ** 2 / (h2 ** (n + 1) * kmh2**n)


def gamma_naive(config: CutoffConfig, k: Sequence[int]) -> float:
    """Reference value: the defining sum restricted to ``|h| < rho or |k - h| < rho``."""
    k = np.asarray(k, dtype=np.int64)
    rho = config.rho
    kn = math.sqrt(float(k @ k))
    r = int(math.ceil(rho + kn))
    pts = np.array(list(itertools.product(range(-r, r + 1), repeat=config.d)), dtype=np.int64)
    h2 = np.einsum("ij,ij->i", pts, pts)
    kmh = k - pts
    kmh2 = np.einsum("ij,ij->i", kmh, kmh)
    keep = (h2 > 0) & (kmh2 > 0) & ((h2 < rho * rho) | (kmh2 < rho * rho))
    return math.fsum(_summand(config.n, k, pts[keep]).tolist())


def g_truncated(n: float, k: Sequence[int], radius: float, d: int = 3) -> float:
    """``G_n(k)`` with the defining sum truncated to ``|h| <= radius`` (a lower estimate)."""
    k = np.asarray(k, dtype=np.int64)
    r = int(math.floor(radius))
    pts = np.array(list(itertools.product(range(-r, r + 1), repeat=d)), dtype=np.int64)
    h2 = np.einsum("ij,ij->i", pts, pts)
    kmh = k - pts
    keep = (h2 > 0) & (h2 <= radius * radius) & np.any(kmh != 0, axis=1)
    return math.fsum(_summand(n, k, pts[keep]).tolist())


# --------------------------------------------------------------------------
# tail bound


def tail_sum_bound(d: int, nu: float, rho: float) -> float:
    """Closed-form upper bound for ``sum_{h in Z^d, |h| >= rho} |h|^(-nu)``."""
    if not nu > d:
        raise ValueError(f"need nu > d, got nu={nu}, d={d}")
    if not rho > 2 * math.sqrt(d):
        raise ValueError(f"need rho > 2 sqrt(d), got rho={rho}")
    a = rho - 2 * math.sqrt(d)
    terms = [
        comb(d - 1, i, exact=True) * d ** ((d - 1 - i) / 2) / ((nu - i - 1) * a ** (nu - i - 1))
        for i in range(d)
    ]
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2) * math.fsum(terms)


def delta_g(config: CutoffConfig, c_n: float | None = None) -> float:
    """``delta G_n``: bound on ``G_n(k) - Gamma_n(k)`` valid for every ``k``.

    ``c_n`` defaults to the outward-rounded maximum from :func:`kernel.c_max`.
    """
    if c_n is None:
        c_n = outward_up(kernel.c_max(config.n).max)
    return float(c_n) * tail_sum_bound(config.d, 2 * config.n - 2, config.rho)


# --------------------------------------------------------------------------
# large-|k| envelope


def quadratic_average(shell: LatticeShell, phi: np.ndarray, u: Sequence[float]) -> tuple[float, float]:
    """Both sides of ``sum_h (h.u)^2 phi_h = (|u|^2/d) sum_h |h|^2 phi_h``."""
    u = np.asarray(u, dtype=float)
    lhs = math.fsum(((shell.points @ u) ** 2 * phi).tolist())
    rhs = float(u @ u) / shell.d * math.fsum((shell.norm2 * phi).tolist())
    return lhs, rhs


def _even_exponents(d: int, degree: int):
    """Exponent vectors with all entries even and total ``degree``."""
    half = degree // 2
    for c in itertools.product(range(half + 1), repeat=d):
        if sum(c) == half:
            yield tuple(2 * x for x in c)


def _multinomial(e: Sequence[int]) -> int:
    out = math.factorial(sum(e))
    for x in e:
        out //= math.factorial(x)
    return out


class _MomentTable:
    """``sum_h w_h prod_i uhat_i^e_i`` for a fixed weight vector, cached per exponent."""

    def __init__(self, shell: LatticeShell, weights: np.ndarray):
        self.shell = shell
        self.w = weights
        self._pw: dict[tuple[int, int], np.ndarray] = {}
        self._cache: dict[tuple[int, ...], float] = {}

    def _col(self, i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in self._pw:
            self._pw[key] = self.shell.unit[:, i] ** e
        return self._pw[key]

    def __call__(self, e: tuple[int, ...]) -> float:
        if e not in self._cache:
            term = self.w.copy()
            for i, x in enumerate(e):
                if x:
                    term = term * self._col(i, x)
            self._cache[e] = math.fsum(term.tolist())
        return self._cache[e]


def _sphere_poly(poly_c, moments: _MomentTable, d: int) -> SpherePoly:
    """``sum_h w_h poly(uhat_h . u)`` as a polynomial in ``u``.

    Only monomials with all-even exponents survive: the ball is invariant
    under each reflection ``h_i -> -h_i``, which kills every moment with an
    odd exponent.
    """
    exps, coeffs = [], []
    for j, a in enumerate(poly_c.coeffs):
        a = float(a)
        if a == 0 or j % 2:
            continue
        for e in _even_exponents(d, j):
            exps.append(e)
            coeffs.append(a * _multinomial(e) * moments(e))
    if not exps:
        exps, coeffs = [(0,) * d], [0.0]
    return SpherePoly(np.array(exps, dtype=np.int64), coeffs, d)


@dataclass
class SphereTerm:
    """An even polynomial on the sphere with its (outward-rounded) extrema."""

    poly: SpherePoly
    lo: float
    hi: float
    report: ExtremaReport

    def as_dict(self) -> dict:
        terms = {",".join(map(str, e)): float(c) for e, c in zip(map(tuple, self.poly.exps), self.poly.coeffs)}
        return {"min": self.lo, "max": self.hi, "argmin": self.report.argmin, "argmax": self.report.argmax, "monomials": terms}


@dataclass
class AsymptoticData:
    """Envelope data for ``Gamma_n(k)`` at ``|k| >= 2 rho``.

    ``P[l]``, ``P1[l]``, ``P2[l]`` are the unprimed, primed and double-primed
    polynomials for ``l = 0, 2, ..., t-2``; ``w``/``W`` the scalar remainder
    weights (lower/upper).
    """

    config: CutoffConfig
    P: dict[int, SphereTerm]
    P1: dict[int, SphereTerm]
    P2: dict[int, SphereTerm]
    w: tuple[float, float, float]
    W: tuple[float, float, float]
    extrema: kernel.RemainderExtrema
    identity_residual: float = 0.0

    def __post_init__(self):
        for tab in (self.P, self.P1, self.P2):
            for term in tab.values():
                if term.lo > term.hi:
                    raise ValueError("sphere minimum exceeds maximum")

    @property
    def orders(self) -> list[int]:
        return sorted(self.P)

    def as_dict(self) -> dict:
        ex = self.extrema
        return {
            "orders": self.orders,
            "P": {l: self.P[l].as_dict() for l in self.orders},
            "P_prime": {l: self.P1[l].as_dict() for l in self.orders},
            "P_second": {l: self.P2[l].as_dict() for l in self.orders},
            "w": list(self.w),
            "W": list(self.W),
            "remainder_extrema": {"lambda": ex.lam, "Lambda": ex.Lam, "mu": ex.mu, "M": ex.M},
            "identity_residual": self.identity_residual,
        }


def _sphere_term(poly: SpherePoly, d: int) -> SphereTerm:
    rep = extrema_sphere(poly, d)
    return SphereTerm(poly, outward_down(rep.min), outward_up(rep.max), rep)


@lru_cache(maxsize=None)
def asymptotic_data(config: CutoffConfig) -> AsymptoticData:
    """Polynomials, scalars and sphere extrema of the large-``|k|`` envelope."""
    n, t, d = config.n, config.t, config.d
    sh = lattice_shell(d, config.rho)
    hn = np.exp(0.5 * np.log(sh.norm2.astype(float)))  # |h|
    logh = np.log(hn)
    ex = kernel.remainder_extrema(n, t)
    lam, Lam = outward_down(ex.lam), outward_up(ex.Lam)
    mu, M = outward_down(ex.mu), outward_up(ex.M)

    dcoef = kernel.taylor_coeffs("D", n, t)
    ecoef = kernel.taylor_coeffs("E", n, t)
    P, P1, P2 = {}, {}, {}
    residual = 0.0
    unit_dirs = np.eye(d)
    for l in range(0, t, 2):
        dh = kernel.hatted(dcoef[l], d)
        eh = kernel.hatted(ecoef[l], d)
        weights = {
            "P": np.exp(-(2 * n - 2 - l) * logh),
            "P1": -2 * np.exp(-(n - 2 - l) * logh),
            "P2": np.exp((2 + l) * logh),
        }
        for name, wts in weights.items():
            # the hatted substitution rests on the quadratic average over the ball
            for u in unit_dirs:
                lhs, rhs = quadratic_average(sh, wts / sh.norm2, u)
                residual = max(residual, abs(lhs - rhs) / max(abs(rhs), 1e-300))
        mt = {name: _MomentTable(sh, wts) for name, wts in weights.items()}
        P[l] = _sphere_term(_sphere_poly(dh + eh, mt["P"], d), d)
        P1[l] = _sphere_term(_sphere_poly(eh, mt["P1"], d), d)
        P2[l] = _sphere_term(_sphere_poly(eh, mt["P2"], d), d)
    if residual > 1e-10:
        raise AssertionError(f"quadratic average identity fails on the lattice ball (residual {residual:.3g})")

    s1 = sh.radial_sum(-(2 * n - 2 - t))
    s2 = sh.radial_sum(-(n - 2 - t))
    s3 = sh.radial_sum(2 + t)
    w = ((lam + mu) * s1, -2 * M * s2, mu * s3)
    W = ((Lam + M) * s1, -2 * mu * s2, M * s3)
    return AsymptoticData(config, P, P1, P2, w, W, ex, residual)


def _envelope(data: AsymptoticData, x, upper: bool):
    x = np.asarray(x, dtype=float)
    n, t = data.config.n, data.config.t
    xn, x2n = x**n, x ** (2 * n)
    acc = np.zeros_like(x)
    for l in data.orders:
        pick = (lambda s: s.hi) if upper else (lambda s: s.lo)
        acc = acc + x**l * (pick(data.P[l]) + pick(data.P1[l]) * xn + pick(data.P2[l]) * x2n)
    a, b, c = data.W if upper else data.w
    return acc + x**t * (a + b * xn + c * x2n)


def _check_kmag(config: CutoffConfig, kmag):
    if np.any(np.asarray(kmag) < 2 * config.rho * (1 - 1e-12)):
        raise ValueError(f"the envelope holds for |k| >= 2 rho = {2 * config.rho:g}")


def tail_upper(config: CutoffConfig, data: AsymptoticData, kmag):
    """Upper envelope of ``Gamma_n(k)`` as a function of ``|k| >= 2 rho``."""
    _check_kmag(config, kmag)
    out = _envelope(data, 1.0 / np.asarray(kmag, dtype=float), upper=True)
    return out if out.ndim else float(out)


def tail_lower(config: CutoffConfig, data: AsymptoticData, kmag):
    """Lower envelope of ``Gamma_n(k)`` as a function of ``|k| >= 2 rho``."""
    _check_kmag(config, kmag)
    out = _envelope(data, 1.0 / np.asarray(kmag, dtype=float), upper=False)
    return out if out.ndim else float(out)


def sup_tail(config: CutoffConfig, data: AsymptoticData | None = None) -> tuple[float, float]:
    """``(sup_{|k| >= 2 rho} tail_upper, |k| at the sup)``; ``inf`` stands for ``|k| -> infinity``."""
    data = data if data is not None else asymptotic_data(config)
    val, x = sup_on_interval(lambda x: _envelope(data, x, upper=True), 0.0, 1.0 / (2 * config.rho))
    return float(val), (math.inf if x == 0 else 1.0 / float(x))


# --------------------------------------------------------------------------
# bracket


@dataclass
class GBracket:
    config: CutoffConfig
    sup_gamma: float
    argmax: tuple[int, ...]
    delta: float
    tail_sup: float
    tail_argmax: float
    c_n: float
    n_enumerated: int
    shell_size: int
    timing: dict = field(default_factory=dict)
    values: np.ndarray | None = field(default=None, repr=False)
    ks: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def lower(self) -> float:
        return self.sup_gamma

    @property
    def upper(self) -> float:
        return self.sup_gamma + self.delta


def _gamma_chunk(args):
    config, ks = args
    sh = lattice_shell(config.d, config.rho)
    return [gamma(config, k, sh) for k in ks]


def gamma_over(config: CutoffConfig, ks: np.ndarray, workers: int = 1) -> np.ndarray:
    """``Gamma_n`` at each row of ``ks``; optionally spread over processes."""
    if workers <= 1 or len(ks) < 2 * workers:
        return np.array(_gamma_chunk((config, ks)))
    chunks = np.array_split(ks, 4 * workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_gamma_chunk, [(config, c) for c in chunks]))
    return np.array([v for part in parts for v in part])


def sup_bracket(config: CutoffConfig, workers: int = 1, full: bool = False, keep_values: bool = False) -> GBracket:
    """Enclosure ``[sup Gamma, sup Gamma + delta]`` of ``sup_k G_n(k)``.

    Enumerates canonical ``k`` with ``0 < |k| < 2 rho`` (every ``k`` with
    ``full=True``) and checks that the large-``|k|`` envelope stays below
    the enumerated maximum.  Raises :class:`TailDominatesError` otherwise.
    """
    t0 = time.perf_counter()
    ks = canonical_wave_vectors(config.d, 2 * config.rho, full=full)
    sh = lattice_shell(config.d, config.rho)
    vals = gamma_over(config, ks, workers)
    t1 = time.perf_counter()
    # exact ties resolve to the first, i.e. lexicographically smallest, k
    i = int(np.argmax(vals))
    sup_g, arg = float(vals[i]), tuple(int(x) for x in ks[i])

    data = asymptotic_data(config)
    tail, tail_at = sup_tail(config, data)
    t2 = time.perf_counter()
    if tail >= sup_g:
        raise TailDominatesError(
            f"envelope sup {tail:.6g} at |k|={tail_at:.4g} is not below the enumerated max {sup_g:.6g} "
            f"(n={config.n:g}, rho={config.rho:g}, t={config.t}); raise rho or t"
        )
    c_n = outward_up(kernel.c_max(config.n).max)
    delta = delta_g(config, c_n)
    timing = {"gamma_s": t1 - t0, "envelope_s": t2 - t1}
    return GBracket(
        config, sup_g, arg, delta, tail, tail_at, c_n, len(ks), len(sh), timing,
        vals if keep_values else None, ks if keep_values else None,
    )


def upper_bound_g(config: CutoffConfig | GBracket, rounded: bool = True, **kw) -> float:
    """``G+ = (2 pi)^(-d/2) sqrt(upper end of the bracket)``, rounded up to 3 digits by default."""
    br = config if isinstance(config, GBracket) else sup_bracket(config, **kw)
    raw = (2 * math.pi) ** (-br.config.d / 2) * math.sqrt(br.upper)
    return round_up_sig(raw, 3) if rounded else raw


def bracket_report(br: GBracket) -> dict:
    return {
        "config": br.config.as_dict(),
        "sup_gamma": br.sup_gamma,
        "argmax": list(br.argmax),
        "delta_g": br.delta,
        "c_n": br.c_n,
        "bracket": [br.lower, br.upper],
        "tail_sup": br.tail_sup,
        "tail_argmax_kmag": br.tail_argmax if math.isfinite(br.tail_argmax) else "inf",
        "g_plus": upper_bound_g(br),
        "g_plus_raw": upper_bound_g(br, rounded=False),
        "timing": br.timing,
        "lattice_sizes": {"shell": br.shell_size, "enumerated_k": br.n_enumerated},
    }


def write_gamma_csv(br: GBracket, path) -> None:
    if br.values is None or br.ks is None:
        raise ValueError("bracket was computed without keep_values=True")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow([f"k{i + 1}" for i in range(br.config.d)] + ["kmag", "gamma"])
        for k, v in zip(br.ks, br.values):
            wr.writerow([*map(int, k), repr(math.sqrt(float(k @ k))), repr(float(v))])

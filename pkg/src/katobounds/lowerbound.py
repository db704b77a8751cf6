"""Lower bounds for the sharp constant from explicit trial fields.

For any pair of finitely supported real divergence-free fields ``v``, ``w``
the ratio

    G- = (2 pi)^(-d/2) |P_n(v, w)| / (N_n(v) N_n(w)^2)

is a lower bound for the sharp constant, where ``N_n`` is the Sobolev norm
and ``P_n`` the trilinear form without its ``(2 pi)^(-d/2)`` prefactor.
:func:`g_lower` evaluates it for arbitrary supports; :func:`twelve_mode_family`
builds the twelve-mode three-dimensional family used for the reference
numbers, and :func:`optimize_lower` searches its parameters.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .fields import SpectralField, canonical_key
from .rounding import round_down_sig

__all__ = [
    "TrialFamily",
    "TrialParams",
    "KAPPAS",
    "REFERENCE_PARAMS",
    "n_norm",
    "p_form",
    "g_lower",
    "twelve_mode_family",
    "closed_form_norms",
    "closed_form_p",
    "g_lower_closed",
    "optimize_lower",
    "OptimizeResult",
]

IMAG_RTOL = 1e-10
DIVFREE_RTOL = 1e-12

KAPPAS: tuple[tuple[int, int, int], ...] = ((0, 1, 0), (1, 1, 0), (1, -1, 0), (2, 1, 0), (2, -1, 0))


class TrialFamily:
    """Finite Hermitian divergence-free coefficient family ``{u_k : k in U}``.

    ``coeffs`` may list both ``k`` and ``-k`` (they must be conjugate) or
    only one of them; the other is implied.
    """

    def __init__(self, coeffs: Mapping[Sequence[int], Sequence[complex]], d: int | None = None):
        items = [(tuple(int(x) for x in k), np.asarray(c, dtype=complex)) for k, c in coeffs.items()]
        if d is None:
            if not items:
                raise ValueError("cannot infer the dimension of an empty family")
            d = len(items[0][0])
        self.d = d
        full: dict[tuple[int, ...], np.ndarray] = {}
        for k, c in items:
            if len(k) != d or c.shape != (d,):
                raise ValueError(f"entry at {k} has the wrong dimension")
            if not any(k):
                raise ValueError("k = 0 is not allowed in a trial family")
            mk = tuple(-x for x in k)
            for key, val in ((k, c), (mk, np.conj(c))):
                if key in full and not np.allclose(full[key], val, rtol=1e-13, atol=0):
                    raise ValueError(f"coefficients at {k} and {mk} are not conjugate")
                full[key] = val
        for k, c in full.items():
            kf = np.asarray(k, dtype=float)
            scale = np.linalg.norm(kf) * np.linalg.norm(c)
            if scale and abs(kf @ c) > DIVFREE_RTOL * scale:
                raise ValueError(f"k.u_k != 0 at k = {k}")
        self.coeffs = dict(sorted(full.items()))

    @property
    def support(self) -> list[tuple[int, ...]]:
        return list(self.coeffs)

    def is_zero(self) -> bool:
        return not any(np.any(c != 0) for c in self.coeffs.values())

    def scaled(self, a: float) -> "TrialFamily":
        return TrialFamily({k: a * c for k, c in self.coeffs.items()}, self.d)

    def to_field(self) -> SpectralField:
        return SpectralField(self.d, {k: c for k, c in self.coeffs.items() if not canonical_key(k)[1]})

    @classmethod
    def from_field(cls, v: SpectralField) -> "TrialFamily":
        return cls(dict(v), v.d)


def n_norm(family: TrialFamily, n: float) -> float:
    """``N_n(u) = (sum_k |k|^(2n) |u_k|^2)^(1/2)``."""
    terms = [
        math.exp(n * math.log(sum(x * x for x in k))) * float(np.vdot(c, c).real)
        for k, c in family.coeffs.items()
    ]
    return math.sqrt(math.fsum(terms))


def p_form(v: TrialFamily, w: TrialFamily, n: float) -> float:
    """``P_n = -i sum_{h in V, l in W, h+l in W} |h+l|^(2n) (conj(v_h).l)(conj(w_l).w_{h+l})``.

    The result is real for Hermitian families; the imaginary part is checked
    and dropped.
    """
    if v.d != w.d:
        raise ValueError("dimension mismatch")
    re, im = [], []
    for h, vh in v.coeffs.items():
        for l, wl in w.coeffs.items():
            hl = tuple(a + b for a, b in zip(h, l))
            whl = w.coeffs.get(hl)
            if whl is None:
                continue
            k2 = sum(x * x for x in hl)
            term = -1j * math.exp(n * math.log(k2)) * np.vdot(vh, np.asarray(l, dtype=float)) * np.vdot(wl, whl)
            re.append(term.real)
            im.append(term.imag)
    val, imag = math.fsum(re), math.fsum(im)
    scale = math.fsum(abs(x) for x in re) + math.fsum(abs(x) for x in im)
    if abs(imag) > IMAG_RTOL * max(scale, 1e-300):
        raise ValueError(f"P_n has a non-negligible imaginary part {imag:.3g}")
    return val


def g_lower(v: TrialFamily, w: TrialFamily, n: float, rounded: bool = False) -> float:
    """The lower bound ``(2 pi)^(-d/2) |P_n| / (N_n(v) N_n(w)^2)``."""
    nv, nw = n_norm(v, n), n_norm(w, n)
    if nv == 0 or nw == 0:
        raise ValueError("trial families must be nonzero")
    val = (2 * math.pi) ** (-v.d / 2) * abs(p_form(v, w, n)) / (nv * nw * nw)
    return round_down_sig(val, 3) if rounded else val


# --------------------------------------------------------------------------
# the twelve-mode family


def _kkey(k) -> str:
    return ",".join(str(x) for x in k)


@dataclass(frozen=True)
class TrialParams:
    """``v_{+-(1,0,0)} = (0, P +- iQ, 0)``, ``w_{+-kappa} = (0, 0, X_kappa +- i Y_kappa)``."""

    P: float
    Q: float
    X: Mapping[tuple[int, int, int], float]
    Y: Mapping[tuple[int, int, int], float]

    def __post_init__(self):
        for name, tab in (("X", self.X), ("Y", self.Y)):
            if set(tab) != set(KAPPAS):
                raise ValueError(f"{name} must have exactly the keys {KAPPAS}")
        if self.P == 0 and self.Q == 0:
            raise ValueError("(P, Q) must be nonzero")
        if all(self.X[k] == 0 and self.Y[k] == 0 for k in KAPPAS):
            raise ValueError("(X, Y) must be nonzero")

    # free coordinates: everything but P and X_(0,1,0), which are pinned to 1
    def free_vector(self) -> np.ndarray:
        out = [self.Q, self.Y[KAPPAS[0]]]
        for k in KAPPAS[1:]:
            out += [self.X[k], self.Y[k]]
        return np.array(out, dtype=float)

    @classmethod
    def from_free_vector(cls, x: Sequence[float]) -> "TrialParams":
        x = [float(a) for a in x]
        X = {KAPPAS[0]: 1.0}
        Y = {KAPPAS[0]: x[1]}
        for i, k in enumerate(KAPPAS[1:]):
            X[k], Y[k] = x[2 + 2 * i], x[3 + 2 * i]
        return cls(1.0, x[0], X, Y)

    def normalized(self) -> "TrialParams":
        """Rescale ``v`` and ``w`` so that ``P = X_(0,1,0) = 1`` when possible."""
        a = 1.0 / self.P if self.P else 1.0
        b = 1.0 / self.X[KAPPAS[0]] if self.X[KAPPAS[0]] else 1.0
        return TrialParams(self.P * a, self.Q * a, {k: v * b for k, v in self.X.items()}, {k: v * b for k, v in self.Y.items()})

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "Q": self.Q,
            "X": {_kkey(k): self.X[k] for k in KAPPAS},
            "Y": {_kkey(k): self.Y[k] for k in KAPPAS},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, obj: Mapping) -> "TrialParams":
        def table(name):
            raw = obj[name]
            out = {tuple(int(x) for x in key.split(",")): float(val) for key, val in raw.items()}
            if set(out) != set(KAPPAS):
                raise ValueError(f"{name} keys must be {[_kkey(k) for k in KAPPAS]}")
            return out

        return cls(float(obj["P"]), float(obj["Q"]), table("X"), table("Y"))

    @classmethod
    def from_json(cls, text: str) -> "TrialParams":
        return cls.from_dict(json.loads(text))


def _params(Q, Y010, X1m, Y1m, X11, Y11, X2m, Y2m, X21, Y21) -> TrialParams:
    X = {(0, 1, 0): 1.0, (1, -1, 0): X1m, (1, 1, 0): X11, (2, -1, 0): X2m, (2, 1, 0): X21}
    Y = {(0, 1, 0): Y010, (1, -1, 0): Y1m, (1, 1, 0): Y11, (2, -1, 0): Y2m, (2, 1, 0): Y21}
    return TrialParams(1.0, Q, X, Y)


# reference near-optimal parameters (only the quoted digits)
REFERENCE_PARAMS: dict[int, TrialParams] = {
    3: _params(-7.0796, -5.8246, -0.063853, -2.1489, 0.65657, -2.0472, -0.043617, 0.39270, 0.17210, -0.35566),
    4: _params(-7.0768, -2.7437, -0.16319, -0.76896, 0.36987, -0.69363, 0.0065160, 0.094627, 0.055900, -0.076628),
    5: _params(-7.0768, -2.7618, -0.12151, -0.57858, 0.27707, -0.52225, 0.0031227, 0.046786, 0.027554, -0.037939),
    10: _params(-7.0769, -2.8038, -0.031443, -0.15337, 0.072707, -0.13865, 8.9903e-5, 0.0014520, 8.4924e-4, -0.0011812),
}


def twelve_mode_family(params: TrialParams) -> tuple[TrialFamily, TrialFamily]:
    """The two-mode ``v`` and ten-mode ``w`` families for the given parameters."""
    v = TrialFamily({(1, 0, 0): (0.0, complex(params.P, params.Q), 0.0)}, 3)
    wc = {}
    for k in KAPPAS:
        z = complex(params.X[k], params.Y[k])
        if z != 0:
            wc[k] = (0.0, 0.0, z)
    return v, TrialFamily(wc, 3)


def closed_form_norms(p: TrialParams, n: float) -> tuple[float, float]:
    """``(N_n(v)^2, N_n(w)^2)`` for the twelve-mode family."""
    X, Y = p.X, p.Y

    def r2(k):
        return X[k] ** 2 + Y[k] ** 2

    nv2 = 2 * (p.P**2 + p.Q**2)
    nw2 = (
        2 * r2((0, 1, 0))
        + 2 ** (n + 1) * (r2((1, 1, 0)) + r2((1, -1, 0)))
        + 2 * 5**n * (r2((2, 1, 0)) + r2((2, -1, 0)))
    )
    return nv2, nw2


def closed_form_p(p: TrialParams, n: float) -> float:
    """``P_n`` for the twelve-mode family as an explicit polynomial in the parameters."""
    P, Q = p.P, p.Q
    X0, Y0 = p.X[(0, 1, 0)], p.Y[(0, 1, 0)]
    Xa, Ya = p.X[(1, 1, 0)], p.Y[(1, 1, 0)]
    Xb, Yb = p.X[(1, -1, 0)], p.Y[(1, -1, 0)]
    Xc, Yc = p.X[(2, 1, 0)], p.Y[(2, 1, 0)]
    Xd, Yd = p.X[(2, -1, 0)], p.Y[(2, -1, 0)]
    g1 = (-Q * X0 * Xb + Q * X0 * Xa + P * Xb * Y0 + P * Xa * Y0
          + P * X0 * Yb + Q * Y0 * Yb - P * X0 * Ya + Q * Y0 * Ya)
    g2 = (Q * X0 * Xb - Q * X0 * Xa - Q * Xb * Xd + Q * Xa * Xc
          - P * Xb * Y0 - P * Xa * Y0 - P * X0 * Yb - P * Xd * Yb
          - Q * Y0 * Yb + P * X0 * Ya + P * Xc * Ya - Q * Y0 * Ya
          + P * Xb * Yd - Q * Yb * Yd - P * Xa * Yc + Q * Ya * Yc)
    g5 = (Q * Xb * Xd - Q * Xa * Xc + P * Xd * Yb - P * Xc * Ya
          - P * Xb * Yd + Q * Yb * Yd + P * Xa * Yc - Q * Ya * Yc)
    return 2 * g1 + 2 ** (n + 1) * g2 + 2 * 5**n * g5


def g_lower_closed(p: TrialParams, n: float) -> float:
    nv2, nw2 = closed_form_norms(p, n)
    return (2 * math.pi) ** -1.5 * abs(closed_form_p(p, n)) / (math.sqrt(nv2) * nw2)


# --------------------------------------------------------------------------
# search

NM_STEP = 0.1
NM_OPTIONS = {"xatol": 1e-9, "fatol": 1e-15, "maxiter": 20000, "maxfev": 40000}
RESTARTS = 20
SIGMA = 0.5


@dataclass
class OptimizeResult:
    value: float
    params: TrialParams
    restart: int
    trace: list = field(default_factory=list, repr=False)

    @property
    def rounded(self) -> float:
        return round_down_sig(self.value, 3)

    def write_trace(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["restart", "evaluation", "value"])
            wr.writerows(self.trace)


def _objective(x: np.ndarray, n: float) -> float:
    p = TrialParams.from_free_vector(x)
    nv2, nw2 = closed_form_norms(p, n)
    if nv2 == 0 or nw2 == 0:
        return 0.0
    return -abs(closed_form_p(p, n)) / (math.sqrt(nv2) * nw2)


def _nelder_mead(x0: np.ndarray, n: float, trace: list, tag: int) -> np.ndarray:
    simplex = np.vstack([x0] + [x0 + NM_STEP * e for e in np.eye(len(x0))])
    count = [0]

    def f(x):
        val = _objective(x, n)
        count[0] += 1
        trace.append((tag, count[0], (2 * math.pi) ** -1.5 * -val))
        return val

    res = minimize(f, x0, method="Nelder-Mead", options={**NM_OPTIONS, "initial_simplex": simplex})
    return np.asarray(res.x, dtype=float)


def optimize_lower(
    n: float,
    seeds: Iterable[TrialParams],
    restarts: int = RESTARTS,
    seed: int = 0,
    sigma: float = SIGMA,
    keep_trace: bool = False,
) -> OptimizeResult:
    """Best lower bound found by multi-start Nelder-Mead over the free parameters.

    Each seed is first evaluated as given.  With ``restarts > 0`` every seed
    is then polished and ``restarts`` further runs start from Gaussian
    perturbations (std ``sigma``) of the best point so far; ``restarts=0``
    only scores the seeds.  Every candidate is re-scored with the generic
    :func:`g_lower`; ties keep the earliest restart.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("at least one seed is required")
    rng = np.random.default_rng(seed)
    trace: list = []
    best: OptimizeResult | None = None

    def consider(p: TrialParams, tag: int):
        nonlocal best
        try:
            val = g_lower(*twelve_mode_family(p), n)
        except ValueError:
            return
        if best is None or val > best.value:
            best = OptimizeResult(val, p, tag)

    for tag, s in enumerate(seeds):
        consider(s, tag)
    if restarts <= 0:
        if best is None:
            raise ValueError("no seed produced a valid trial family")
        return best
    tag = 0
    for s in seeds:
        x = _nelder_mead(s.normalized().free_vector(), n, trace, tag)
        consider(TrialParams.from_free_vector(x), tag)
        tag += 1
    for _ in range(restarts):
        centre = best.params.normalized().free_vector() if best is not None else seeds[0].normalized().free_vector()
        x0 = centre + sigma * rng.standard_normal(len(centre))
        x = _nelder_mead(x0, n, trace, tag)
        consider(TrialParams.from_free_vector(x), tag)
        tag += 1
    if best is None:
        raise ValueError("no seed produced a valid trial family")
    if keep_trace:
        best.trace = trace
    return best

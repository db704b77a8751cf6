"""Seeded property suites shared by the test-suite and the ``verify`` command.

Each check samples inputs from a ``numpy`` generator seeded by the caller and
returns a :class:`Check` holding the worst observed defect and, on failure,
the first counterexample in JSON-friendly form.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import fields, gfunction, kernel, lowerbound
from .rounding import outward_up

__all__ = ["Check", "SUITES", "run_suite", "G_PLUS_TABLE"]

# the build's own rounded-up upper bounds (reproduced by `katobounds table`)
G_PLUS_TABLE = {3: 0.438, 4: 0.484, 5: 0.749, 10: 7.56}

IDENTITY_RTOL = 1e-12
SMALL = gfunction.CutoffConfig(n=3.0, rho=6.0, t=4)


@dataclass
class Check:
    name: str
    passed: bool
    samples: int
    worst: float
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(y) for y in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    return x


def _run(name: str, count: int, sample: Callable[[int], tuple[float, dict]], tol: float) -> Check:
    """``sample(i) -> (defect, witness)``; a sample fails when ``defect > tol``."""
    worst, bad = 0.0, None
    for i in range(count):
        defect, witness = sample(i)
        defect = float(defect)
        if not defect <= tol:  # also catches nan
            if bad is None:
                bad = {k: _jsonable(v) for k, v in witness.items()} | {"defect": defect}
        worst = max(worst, defect) if math.isfinite(defect) else math.inf
    return Check(name, bad is None, count, worst, bad)


def _random_k(rng, d: int, radius: int) -> np.ndarray:
    while True:
        k = rng.integers(-radius, radius + 1, size=d)
        if np.any(k):
            return k


# --------------------------------------------------------------------------
# identities


def check_resummation(rng, samples: int, config=SMALL) -> Check:
    def one(_):
        k = _random_k(rng, config.d, int(3 * config.rho))
        a, b = gfunction.gamma(config, k), gfunction.gamma_naive(config, k)
        return _rel(a, b), {"k": k, "gamma": a, "naive": b}

    return _run("resummation", samples, one, IDENTITY_RTOL)


def check_quadratic_average(rng, samples: int, config=SMALL) -> Check:
    sh = gfunction.lattice_shell(config.d, config.rho)

    def one(_):
        u = rng.standard_normal(config.d)
        u /= np.linalg.norm(u)
        a = rng.uniform(-4, 4)
        phi = np.exp(0.5 * a * np.log(sh.norm2.astype(float)))
        lhs, rhs = gfunction.quadratic_average(sh, phi, u)
        return _rel(lhs, rhs), {"u": u, "power": a}

    return _run("quadratic_average", samples, one, IDENTITY_RTOL)


def check_leray(rng, samples: int) -> Check:
    def one(i):
        d = int(rng.integers(2, 5))
        raw = {tuple(_random_k(rng, d, 3)): rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(6)}
        try:
            v = fields.SpectralField(d, raw)
        except ValueError:  # a k and -k drawn with unrelated values
            return 0.0, {}
        n = float(rng.uniform(0, 5))
        pv = fields.leray_project(v)
        ppv = fields.leray_project(pv)
        idem = max((np.abs(ppv.coefficient(k) - pv.coefficient(k)).max() for k in pv.support()), default=0.0)
        idem /= max(fields.sobolev_norm(pv, 0), 1e-300)
        total = fields.sobolev_inner(v, v, n)
        split = fields.sobolev_inner(pv, pv, n) + fields.sobolev_inner(v - pv, v - pv, n)
        return max(idem, _rel(total, split)), {"field": v.to_records(), "n": n}

    return _run("leray_idempotent_orthogonal", samples, one, IDENTITY_RTOL)


def _random_params(rng) -> lowerbound.TrialParams:
    return lowerbound.TrialParams.from_free_vector(rng.standard_normal(10) * 2)


def check_closed_forms(rng, samples: int) -> Check:
    def one(_):
        p = _random_params(rng)
        n = float(rng.choice([3, 4, 5, 10, rng.uniform(2.6, 8)]))
        v, w = lowerbound.twelve_mode_family(p)
        nv2, nw2 = lowerbound.closed_form_norms(p, n)
        a, b = lowerbound.p_form(v, w, n), lowerbound.closed_form_p(p, n)
        # P_n is a sum of terms of both signs; compare against its magnitude scale
        scale = max(abs(b), 1e-12 * (math.sqrt(nv2) * nw2))
        defect = max(abs(a - b) / scale, _rel(lowerbound.n_norm(v, n) ** 2, nv2), _rel(lowerbound.n_norm(w, n) ** 2, nw2))
        return defect, {"params": p.to_dict(), "n": n}

    return _run("closed_forms", samples, one, 1e-10)


def check_gamma_symmetry(rng, samples: int, config=SMALL) -> Check:
    def one(_):
        k = _random_k(rng, config.d, int(3 * config.rho))
        perm = rng.permutation(config.d)
        signs = rng.choice([-1, 1], size=config.d)
        k2 = signs * k[perm]
        vals = [gfunction.gamma(config, x) for x in (k, k2, gfunction.canonicalize(k))]
        return max(_rel(vals[0], v) for v in vals[1:]), {"k": k, "image": k2}

    return _run("gamma_symmetry", samples, one, IDENTITY_RTOL)


def check_l2_orthogonality(rng, samples: int) -> Check:
    def one(_):
        d = int(rng.integers(2, 4))
        v = fields.random_divfree_field(int(rng.integers(2**31)), d, int(rng.integers(1, 4)))
        w = fields.random_divfree_field(int(rng.integers(2**31)), d, int(rng.integers(1, 4)))
        return abs(fields.trilinear(v, w, 0.0)), {"v": v.to_records(), "w": w.to_records()}

    return _run("l2_orthogonality", samples, one, 1e-10)


# --------------------------------------------------------------------------
# inequalities


def check_angle_lemma(rng, samples: int) -> Check:
    def one(_):
        d = int(rng.integers(2, 6))
        p, q = rng.standard_normal(d), rng.standard_normal(d)
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        z -= (p @ z) / (p @ p) * p
        lhs = abs(q @ z)
        rhs = fields.wedge_norm(p, q) / np.linalg.norm(p) * np.linalg.norm(z)
        # the wedge norm cancels for near-parallel p, q; measure on the |q||z| scale
        return (lhs - rhs) / (np.linalg.norm(q) * np.linalg.norm(z)), {"p": p, "q": q, "z": z}

    return _run("angle_lemma", samples, one, 1e-12)


def check_c_inequality(rng, samples: int, ns=(3.0, 4.0, 5.0, 10.0)) -> Check:
    cs = {n: outward_up(kernel.c_max(n).max) for n in ns}

    def one(i):
        n = ns[i % len(ns)]
        d = int(rng.integers(2, 5))
        scale = np.exp(rng.uniform(-3, 3, size=2))
        p, q = rng.standard_normal(d) * scale[0], rng.standard_normal(d) * scale[1]
        pn, qn, pqn = np.linalg.norm(p), np.linalg.norm(q), np.linalg.norm(p + q)
        lhs = fields.wedge_norm(p, q) ** 2 * (pqn**n - qn**n) ** 2
        rhs = cs[n] / 2 * pn**4 * qn**2 * (pn ** (2 * n - 2) + qn ** (2 * n - 2))
        return lhs / rhs - 1.0, {"n": n, "p": p, "q": q}

    return _run("c_inequality", samples, one, 1e-12)


@lru_cache(maxsize=4)
def _norm_multiplicities(d: int, radius: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of ``|h|^2`` over ``0 < |h| <= radius`` with their counts."""
    ax = np.arange(-radius, radius + 1)
    sq = ax * ax
    n2 = sq
    for _ in range(d - 1):
        n2 = np.add.outer(n2, sq).ravel()
    n2 = n2[(n2 > 0) & (n2 <= radius * radius)]
    return np.unique(n2, return_counts=True)


def check_tail_sum(rng, samples: int) -> Check:
    """Partial sums over ``rho <= |h| <= rho + width`` never exceed the closed-form tail bound."""
    width = {2: 400, 3: 60}

    def one(_):
        d = int(rng.integers(2, 4))
        nu = float(d + rng.uniform(0.05, 4))
        rho = float(2 * math.sqrt(d) + rng.uniform(0.05, 8))
        vals, counts = _norm_multiplicities(d, int(2 * math.sqrt(d) + 8 + width[d]) + 1)
        sel = (vals >= rho * rho) & (vals <= (rho + width[d]) ** 2)
        partial = math.fsum((counts[sel] * np.exp(-0.5 * nu * np.log(vals[sel].astype(float)))).tolist())
        bound = gfunction.tail_sum_bound(d, nu, rho)
        return partial / bound - 1.0, {"d": d, "nu": nu, "rho": rho, "partial": partial, "bound": bound}

    return _run("tail_sum_dominance", samples, one, 0.0)


def check_sandwich(rng, samples: int, config: gfunction.CutoffConfig | None = None) -> Check:
    config = config or gfunction.CutoffConfig(n=4.0, rho=6.0, t=4)
    data = gfunction.asymptotic_data(config)

    def one(_):
        u = rng.standard_normal(config.d)
        u /= np.linalg.norm(u)
        mag = rng.uniform(2 * config.rho, 6 * config.rho)
        k = np.rint(mag * u).astype(np.int64)
        km = math.sqrt(float(k @ k))
        if km < 2 * config.rho:
            k = np.rint(k * (2 * config.rho + 1) / km).astype(np.int64)
            km = math.sqrt(float(k @ k))
        g = gfunction.gamma(config, k)
        lo = gfunction.tail_lower(config, data, km)
        hi = gfunction.tail_upper(config, data, km)
        return max(lo - g, g - hi) / g, {"k": k, "gamma": g, "lower": lo, "upper": hi}

    return _run("envelope_sandwich", samples, one, 0.0)


# --------------------------------------------------------------------------
# Kato inequality against the upper bounds


def check_kato(rng, samples: int, table: dict | None = None) -> Check:
    table = table or G_PLUS_TABLE

    def one(_):
        radius = int(rng.integers(1, 5))
        v = fields.random_divfree_field(int(rng.integers(2**31)), 3, radius)
        w = fields.random_divfree_field(int(rng.integers(2**31)), 3, int(rng.integers(1, 5)))
        adv = fields.advect(v, w)
        worst, wit = -math.inf, {}
        for n, gp in table.items():
            lhs = abs(fields.sobolev_inner(adv, w, n))
            rhs = gp * fields.sobolev_norm(v, n) * fields.sobolev_norm(w, n) ** 2
            r = lhs / rhs - 1.0
            if r > worst:
                worst, wit = r, {"n": n, "ratio": lhs / rhs * gp}
        return worst, wit | {"v": v.to_records(), "w": w.to_records()}

    return _run("kato", samples, one, 0.0)


# --------------------------------------------------------------------------

SUITES: dict[str, list[tuple[Callable, float]]] = {
    # (check, share of the requested sample count; expensive checks get less)
    "identities": [
        (check_resummation, 0.05),
        (check_quadratic_average, 1.0),
        (check_leray, 1.0),
        (check_closed_forms, 1.0),
        (check_gamma_symmetry, 0.2),
        (check_l2_orthogonality, 0.2),
    ],
    "inequalities": [
        (check_angle_lemma, 1.0),
        (check_c_inequality, 1.0),
        (check_tail_sum, 1.0),
        (check_sandwich, 0.1),
    ],
    "kato": [(check_kato, 1.0)],
}


def run_suite(suite: str, samples: int = 200, seed: int = 0) -> list[Check]:
    if suite == "all":
        return [c for s in ("identities", "inequalities", "kato") for c in run_suite(s, samples, seed)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES) + ['all']}")
    rng = np.random.default_rng(seed)
    return [fn(rng, max(1, int(round(samples * share)))) for fn, share in SUITES[suite]]

"""Real zero-mean vector fields on the d-torus, stored by Fourier coefficients.

A field ``v = sum_k v_k e_k`` with ``e_k(x) = (2 pi)^(-d/2) exp(i k.x)`` is
real iff ``v_{-k} = conj(v_k)``.  :class:`SpectralField` stores one
representative of every pair ``{k, -k}`` (the one whose first nonzero
component is positive) and derives the other by conjugation, so the
reality condition cannot drift.
"""

from __future__ import annotations

import itertools
import json
import math
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "SpectralField",
    "canonical_key",
    "sobolev_inner",
    "sobolev_norm",
    "leray_project",
    "advect",
    "trilinear",
    "wedge_norm",
    "random_divfree_field",
    "NotDivergenceFree",
]

DIVFREE_RTOL = 1e-10


class NotDivergenceFree(ValueError):
    pass


def canonical_key(k: Iterable[int]) -> tuple[tuple[int, ...], bool]:
    """``(representative, flipped)`` for the pair ``{k, -k}``.

    The representative has a positive first nonzero component; ``flipped``
    tells whether ``k`` itself was the negated one.
    """
    k = tuple(int(x) for x in k)
    for x in k:
        if x > 0:
            return k, False
        if x < 0:
            return tuple(-y for y in k), True
    raise ValueError("the zero wave vector is excluded (zero-mean fields)")


def _weight(k2: np.ndarray, n: float) -> np.ndarray:
    """``|k|^(2n)`` from squared norms, via exp(n log|k|^2) for every real n."""
    return np.exp(n * np.log(np.asarray(k2, dtype=float)))


class SpectralField:
    """Immutable finitely supported real vector field on T^d."""

    __slots__ = ("d", "_modes", "_keys", "_vals")

    def __init__(self, d: int, modes: Mapping[Iterable[int], Iterable[complex]] | None = None):
        if d < 2:
            raise ValueError("dimension must be >= 2")
        self.d = d
        store: dict[tuple[int, ...], np.ndarray] = {}
        for k, c in (modes or {}).items():
            k = tuple(int(x) for x in k)
            if len(k) != d:
                raise ValueError(f"wave vector {k} has wrong dimension")
            c = np.asarray(c, dtype=complex).reshape(-1)
            if c.shape != (d,):
                raise ValueError(f"coefficient at {k} must be a {d}-vector")
            key, flipped = canonical_key(k)
            c = np.conj(c) if flipped else c.copy()
            if key in store:
                if not np.allclose(store[key], c, rtol=1e-12, atol=1e-300):
                    raise ValueError(f"coefficients at {k} and its negative are not conjugate")
                continue
            store[key] = c
        self._modes = {k: store[k] for k in sorted(store) if np.any(store[k] != 0)}
        for c in self._modes.values():
            c.setflags(write=False)
        self._keys = None
        self._vals = None

    # ---- access -------------------------------------------------------
    @classmethod
    def zero(cls, d: int) -> "SpectralField":
        return cls(d)

    def __len__(self):
        """Number of stored representatives (half the support)."""
        return len(self._modes)

    def __iter__(self):
        return iter(self._modes.items())

    def canonical_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Representative wave vectors ``(N, d)`` and coefficients ``(N, d)``, lexicographic."""
        if self._keys is None:
            if self._modes:
                self._keys = np.array(list(self._modes), dtype=np.int64)
                self._vals = np.array(list(self._modes.values()), dtype=complex)
            else:
                self._keys = np.zeros((0, self.d), dtype=np.int64)
                self._vals = np.zeros((0, self.d), dtype=complex)
        return self._keys, self._vals

    def full_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Whole support (both members of each pair), sorted lexicographically."""
        k, v = self.canonical_arrays()
        keys = np.vstack([k, -k])
        vals = np.vstack([v, np.conj(v)])
        order = np.lexsort(keys.T[::-1])
        return keys[order], vals[order]

    def support(self) -> list[tuple[int, ...]]:
        keys, _ = self.full_arrays()
        return [tuple(map(int, k)) for k in keys]

    def coefficient(self, k: Iterable[int]) -> np.ndarray:
        key, flipped = canonical_key(k)
        c = self._modes.get(key)
        if c is None:
            return np.zeros(self.d, dtype=complex)
        return np.conj(c) if flipped else c.copy()

    def map_coefficients(self, fn) -> "SpectralField":
        """Apply ``fn(k, c) -> c'`` to every representative."""
        return SpectralField(self.d, {k: fn(np.array(k), c) for k, c in self._modes.items()})

    def scaled(self, a: float) -> "SpectralField":
        return SpectralField(self.d, {k: a * c for k, c in self._modes.items()})

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _same_dim(self, other)
        out = dict(self._modes)
        for k, c in other._modes.items():
            out[k] = out[k] + c if k in out else c
        return SpectralField(self.d, out)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return self + other.scaled(-1.0)

    def divergence_defect(self) -> float:
        """``max_k |k.v_k| / (|k| |v_k|)`` over the support (0 for the zero field)."""
        k, v = self.canonical_arrays()
        if not len(k):
            return 0.0
        kd = np.abs(np.einsum("ij,ij->i", k.astype(float), v))
        scale = np.linalg.norm(k, axis=1) * np.linalg.norm(v, axis=1)
        return float(np.max(kd / scale))

    def is_divergence_free(self, rtol: float = DIVFREE_RTOL) -> bool:
        return self.divergence_defect() <= rtol

    # ---- serialization -----------------------------------------------
    def to_records(self) -> list[dict]:
        return [
            {"k": list(k), "re": [float(x) for x in c.real], "im": [float(x) for x in c.imag]}
            for k, c in self._modes.items()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: list[dict], d: int | None = None) -> "SpectralField":
        if d is None:
            if not records:
                raise ValueError("cannot infer dimension of an empty record list")
            d = len(records[0]["k"])
        modes = {}
        for rec in records:
            k = tuple(rec["k"])
            if any(int(x) != x for x in k):
                raise ValueError(f"wave vector {k} is not integer")
            if len(rec["re"]) != d or len(rec["im"]) != d:
                raise ValueError(f"record at {k} has wrong component count")
            c = np.asarray(rec["re"], dtype=float) + 1j * np.asarray(rec["im"], dtype=float)
            key, flipped = canonical_key(k)
            if key in modes:
                raise ValueError(f"duplicate record for the pair containing {k}")
            modes[key] = np.conj(c) if flipped else c
        return cls(d, modes)

    @classmethod
    def from_json(cls, text: str, d: int | None = None) -> "SpectralField":
        return cls.from_records(json.loads(text), d)

    def __repr__(self):
        return f"SpectralField(d={self.d}, pairs={len(self)})"


def _same_dim(v: SpectralField, w: SpectralField):
    if v.d != w.d:
        raise ValueError(f"dimension mismatch: {v.d} vs {w.d}")


def sobolev_inner(v: SpectralField, w: SpectralField, n: float) -> float:
    """``<v|w>_n = sum_k |k|^(2n) conj(v_k).w_k`` (real for real fields)."""
    _same_dim(v, w)
    terms = []
    for k, a in v:
        b = w._modes.get(k)
        if b is None:
            continue
        k2 = sum(x * x for x in k)
        terms.append(float(_weight(k2, n)) * float(np.vdot(a, b).real))
    # each representative stands for the conjugate pair; imaginary parts cancel exactly
    return 2.0 * math.fsum(terms)


def sobolev_norm(v: SpectralField, n: float) -> float:
    return math.sqrt(max(sobolev_inner(v, v, n), 0.0))


def leray_project(v: SpectralField) -> SpectralField:
    """Mode-wise projection ``c - (k.c / |k|^2) k`` onto the complement of ``k``."""

    def proj(k, c):
        return c - (np.dot(k, c) / np.dot(k, k)) * k

    return v.map_coefficients(proj)


def advect(v: SpectralField, w: SpectralField) -> SpectralField:
    """Fourier coefficients of ``v . grad w``.

    ``(v.grad w)_k = i (2 pi)^(-d/2) sum_h [v_h . (k - h)] w_{k-h}``.  The
    ``k = 0`` coefficient (zero whenever ``v`` is divergence-free) is dropped.
    """
    _same_dim(v, w)
    d = v.d
    hv, cv = v.full_arrays()
    hw, cw = w.full_arrays()
    if not len(hv) or not len(hw):
        return SpectralField(d)
    ks = hv[:, None, :] + hw[None, :, :]
    dots = np.einsum("ir,jr->ij", cv, hw.astype(float))
    contrib = dots[:, :, None] * cw[None, :, :]
    ks = ks.reshape(-1, d)
    contrib = contrib.reshape(-1, d)
    # keep targets that are canonical representatives
    nz = ks != 0
    first = np.argmax(nz, axis=1)
    lead = ks[np.arange(len(ks)), first]
    keep = nz.any(axis=1) & (lead > 0)
    ks, contrib = ks[keep], contrib[keep]
    if not len(ks):
        return SpectralField(d)
    uniq, inv = np.unique(ks, axis=0, return_inverse=True)
    acc = np.zeros((len(uniq), d), dtype=complex)
    np.add.at(acc, inv.reshape(-1), contrib)
    acc *= 1j * (2 * math.pi) ** (-d / 2)
    return SpectralField(d, {tuple(map(int, k)): c for k, c in zip(uniq, acc)})


def trilinear(v: SpectralField, w: SpectralField, n: float) -> float:
    """``<v.grad w | w>_n`` for divergence-free ``v``."""
    if not v.is_divergence_free():
        raise NotDivergenceFree(f"v is not divergence-free (defect {v.divergence_defect():.3g})")
    return sobolev_inner(advect(v, w), w, n)


def wedge_norm(p, q) -> float:
    """``|p ^ q| = sqrt(|p|^2 |q|^2 - (p.q)^2)``, clamped at zero."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return math.sqrt(max(float(p @ p) * float(q @ q) - float(p @ q) ** 2, 0.0))


def lattice_ball(d: int, radius: float, strict: bool = False) -> np.ndarray:
    """All nonzero integer points with ``|k| <= radius`` (``<`` if strict), lexicographic."""
    r = int(math.floor(radius))
    pts = np.array(list(itertools.product(range(-r, r + 1), repeat=d)), dtype=np.int64)
    k2 = np.einsum("ij,ij->i", pts, pts)
    lim = radius * radius
    mask = (k2 > 0) & ((k2 < lim) if strict else (k2 <= lim))
    return pts[mask]


def random_divfree_field(seed: int, d: int, radius: int, amplitude: float = 1.0) -> SpectralField:
    """Seeded random divergence-free field supported on ``0 < |k| <= radius``."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    rng = np.random.default_rng(seed)
    keys = lattice_ball(d, radius)
    nz = keys != 0
    lead = keys[np.arange(len(keys)), np.argmax(nz, axis=1)]
    keys = keys[lead > 0]
    raw = amplitude * (rng.standard_normal((len(keys), d)) + 1j * rng.standard_normal((len(keys), d))) / math.sqrt(2)
    kf = keys.astype(float)
    coef = np.einsum("ij,ij->i", kf, raw) / np.einsum("ij,ij->i", kf, kf)
    raw = raw - coef[:, None] * kf
    return SpectralField(d, {tuple(map(int, k)): c for k, c in zip(keys, raw)})

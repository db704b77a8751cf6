"""Scalar kernels behind the lattice sums.

``c_fun``/``c_max``
    the two-variable function whose maximum ``C_n`` controls the lattice tail.
``d_fun``/``e_fun``
    the functions ``D_n(c, eps)`` and ``E_n(c, eps)`` that a single lattice
    summand reduces to once written in terms of ``c = cos(angle)`` and
    ``eps = |h|/|k|``.
``taylor_coeffs``
    their Taylor coefficients in ``eps`` as polynomials in ``c``.
``remainder``/``remainder_extrema``
    the order-``t`` Taylor remainders and their extrema over
    ``[-1, 1] x [0, 1/2]``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .optimize import BoxDomain, ExtremaReport, extrema_box, maximize_box
from .series import PolyInC, SeriesInEps

__all__ = [
    "c_fun",
    "c_max",
    "d_fun",
    "e_fun",
    "taylor_coeffs",
    "taylor_values",
    "remainder",
    "remainder_extrema",
    "RemainderExtrema",
    "hatted",
    "EPS0",
    "EXTRA_ORDERS",
]

# Below EPS0 the remainder is summed from its own Taylor series (EXTRA_ORDERS
# terms); above it the defining quotient is evaluated directly.
EPS0 = 0.25
EXTRA_ORDERS = 90

C_BOX = BoxDomain((0.0, 0.0), (4.0, 1.0))
REMAINDER_BOX = BoxDomain((-1.0, 0.0), (1.0, 0.5))
C_GRID = (201, 101)
REMAINDER_GRID = (201, 101)


def _as_exact(n):
    """Fraction for integral or Fraction ``n``; ``None`` otherwise."""
    if isinstance(n, Fraction):
        return n
    if isinstance(n, int) or (isinstance(n, float) and float(n).is_integer()):
        return Fraction(int(n))
    return None


# --------------------------------------------------------------------------
# c_n and C_n


def c_fun(n: float, z, u):
    """The function ``c_n(z, u)`` on ``[0, 4] x [0, 1]`` (vectorized)."""
    if n <= 1:
        raise ValueError("c_fun requires n > 1")
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any((z < 0) | (z > 4) | (u < 0) | (u > 1)):
        raise ValueError("c_fun arguments outside [0,4] x [0,1]")
    z, u = np.broadcast_arrays(z, u)
    out = np.empty(z.shape)
    at0 = u == 0
    out[at0] = n * n * z[at0] * (4 - z[at0]) * (2 - z[at0]) ** 2 / 8
    zp, up = z[~at0], u[~at0]
    with np.errstate(divide="ignore"):
        # (1 - z u + z u^2)^(n/2) - (1 - u)^n = e^B (e^(A-B) - 1), accurate for small u
        a = 0.5 * n * np.log1p(-zp * up + zp * up * up)
        b = n * np.log1p(-up)
    b = np.where(up == 1, -np.inf, b)
    diff = np.where(up == 1, np.exp(a), np.exp(b) * np.expm1(a - np.where(up == 1, 0.0, b)))
    den = 2 * up * up * (up ** (2 * n - 2) + (1 - up) ** (2 * n - 2))
    out[~at0] = zp * (4 - zp) * diff * diff / den
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def c_max(n: float) -> ExtremaReport:
    """``C_n``: the maximum of ``c_n`` over ``[0, 4] x [0, 1]`` with its argmax."""
    return maximize_box(lambda x: c_fun(n, x[:, 0], x[:, 1]), C_BOX, C_GRID)


# --------------------------------------------------------------------------
# D_n, E_n


def _check_domain(c, eps):
    if np.any((c < -1) | (c > 1) | (eps < 0)):
        raise ValueError("(c, eps) outside the domain c in [-1,1], eps >= 0")
    if np.any((c == 1) & (eps == 1)):
        raise ValueError("(c, eps) = (1, 1) is excluded from the domain")


def d_fun(n: float, c, eps):
    """``D_n(c, eps)``; the ``eps = 0`` branch is ``n^2 (c^2 - c^4)``."""
    c = np.asarray(c, dtype=float)
    eps = np.asarray(eps, dtype=float)
    _check_domain(c, eps)
    c, eps = np.broadcast_arrays(c, eps)
    x = eps * (eps - 2 * c)
    with np.errstate(divide="ignore", invalid="ignore"):
        # (1 - s^(n/2))^2 / s^n = (s^(-n/2) - 1)^2 with s = 1 + x
        q = np.expm1(-0.5 * n * np.log1p(x)) / eps
        out = (1 - c * c) * q * q
    out = np.where(eps == 0, n * n * (c * c - c**4), out)
    out = np.where(np.abs(c) == 1, 0.0, out)
    return out if out.ndim else float(out)


def e_fun(n: float, c, eps):
    """``E_n(c, eps) = (1 - c^2) / (1 - 2 c eps + eps^2)^(n+1)``."""
    c = np.asarray(c, dtype=float)
    eps = np.asarray(eps, dtype=float)
    _check_domain(c, eps)
    c, eps = np.broadcast_arrays(c, eps)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1 - c * c) * np.exp(-(n + 1) * np.log1p(eps * (eps - 2 * c)))
    out = np.where(np.abs(c) == 1, 0.0, out)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Taylor data


def _s_series(one, c, order: int) -> SeriesInEps:
    return SeriesInEps([one, -2 * c, one], order)


def _series(kind: str, n, c, one, count: int) -> SeriesInEps:
    """Series for D_n or E_n with ``count`` coefficients, over the ring of ``c``."""
    exact = isinstance(n, Fraction)
    if kind == "E":
        s = _s_series(one, c, count - 1)
        return (s ** (-(n + 1))) * (one - c * c)
    if kind == "D":
        s = _s_series(one, c, count + 1)
        half = -n / 2 if exact else -0.5 * n
        b = (s**half - one).shift_down(1)
        return (b * b) * (one - c * c)
    raise ValueError(f"kind must be 'D' or 'E', got {kind!r}")


@lru_cache(maxsize=None)
def _taylor_cached(kind: str, n, count: int, exact: bool) -> tuple[PolyInC, ...]:
    if exact:
        one, c = Fraction(1), PolyInC((Fraction(0), Fraction(1)))
    else:
        one, c = 1.0, PolyInC((0.0, 1.0))
    ser = _series(kind, n, c, one, count)
    polys = []
    for l in range(count):
        p = ser[l]
        p = p if isinstance(p, PolyInC) else PolyInC((p,))
        polys.append(p)
    return tuple(polys)


def taylor_coeffs(kind: str, n, count: int, exact: bool = False) -> list[PolyInC]:
    """Coefficients ``F_{n,l}(c)``, ``l = 0..count-1``, of ``F_n(c, eps)`` in ``eps``.

    ``kind`` is ``"D"`` or ``"E"``.  With ``exact=True`` the coefficients are
    Fractions; this needs a rational ``n`` (int or Fraction).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if exact:
        nn = _as_exact(n)
        if nn is None:
            raise ValueError("exact mode needs a rational n")
        return list(_taylor_cached(kind, nn, count, True))
    return list(_taylor_cached(kind, float(n), count, False))


def taylor_values(kind: str, n: float, count: int, c) -> np.ndarray:
    """Numerical ``F_{n,l}(c)`` for ``l < count`` at the points ``c``; shape ``(count, len(c))``.

    Runs the series recurrence directly on arrays of ``c`` values, which
    stays accurate at high order where the monomial coefficients of
    ``F_{n,l}`` would cancel catastrophically.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    one = np.ones_like(c)
    ser = _series(kind, float(n), c, one, count)
    return np.array([np.broadcast_to(ser[l], c.shape) for l in range(count)], dtype=float)


def _partial_sum(kind, n, t, c, eps):
    polys = taylor_coeffs(kind, n, t)
    acc = np.zeros(np.broadcast(c, eps).shape)
    for p in reversed(polys):
        acc = acc * eps + p(c)
    return acc


def remainder(kind: str, n: float, t: int, c, eps, eps0: float = EPS0, extra: int = EXTRA_ORDERS):
    """Order-``t`` Taylor remainder ``Q_{n,t}`` (``kind="Q"``) or ``R_{n,t}`` (``kind="R"``).

    Defined by ``F_n(c, eps) = sum_{l<t} F_{n,l}(c) eps^l + remainder * eps^t``.
    For ``eps >= eps0`` the quotient is evaluated directly; below it the
    series ``sum_{l>=t} F_{n,l}(c) eps^(l-t)`` is summed with ``extra`` terms.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    base = {"Q": "D", "R": "E"}.get(kind)
    if base is None:
        raise ValueError(f"kind must be 'Q' or 'R', got {kind!r}")
    c = np.asarray(c, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any((c < -1) | (c > 1) | (eps < 0) | (eps > 0.5)):
        raise ValueError("remainder is defined here for c in [-1,1], eps in [0, 1/2]")
    c, eps = np.broadcast_arrays(c, eps)
    out = np.empty(c.shape)
    big = eps >= eps0
    if np.any(big):
        cb, eb = c[big], eps[big]
        f = d_fun(n, cb, eb) if base == "D" else e_fun(n, cb, eb)
        out[big] = (f - _partial_sum(base, n, t, cb, eb)) / eb**t
    small = ~big
    if np.any(small):
        cs, es = c[small], eps[small]
        vals = taylor_values(base, n, t + extra + 1, cs)[t:]
        acc = vals[-1].copy()
        for row in vals[-2::-1]:
            acc = acc * es + row
        out[small] = acc
    return out if out.ndim else float(out)


class RemainderExtrema(NamedTuple):
    """Extrema of the order-``t`` remainders over ``[-1,1] x [0,1/2]``."""

    lam: float
    Lam: float
    mu: float
    M: float
    q_report: ExtremaReport
    r_report: ExtremaReport


@lru_cache(maxsize=None)
def remainder_extrema(n: float, t: int) -> RemainderExtrema:
    """``(min Q, max Q, min R, max R)`` for the order-``t`` remainders."""
    q = extrema_box(lambda x: remainder("Q", n, t, x[:, 0], x[:, 1]), REMAINDER_BOX, REMAINDER_GRID)
    r = extrema_box(lambda x: remainder("R", n, t, x[:, 0], x[:, 1]), REMAINDER_BOX, REMAINDER_GRID)
    return RemainderExtrema(q.min, q.max, r.min, r.max, q, r)


def hatted(poly: PolyInC, d: int) -> PolyInC:
    """``poly`` with its ``c^2`` monomial replaced by the constant ``1/d``."""
    return poly.hatted(d)

"""Polynomials in ``c`` and truncated power series in ``eps``.

Two small arithmetic types back the kernel expansions:

* :class:`PolyInC` -- a dense polynomial in one variable ``c``.  Coefficients
  may be floats or :class:`fractions.Fraction` (the exact mode used to check
  closed forms for integer ``n``).
* :class:`SeriesInEps` -- a power series in ``eps`` truncated after a fixed
  order.  Its coefficients live in any commutative ring that supports ``+``,
  ``-``, ``*`` and multiplication by scalars: floats, Fractions, ``PolyInC``
  or numpy arrays (one coefficient value per sample point ``c``).

Example::

    >>> c = PolyInC.variable()
    >>> s = SeriesInEps([1, -2 * c, 1], order=4)   # 1 - 2 c eps + eps^2
    >>> (s ** Fraction(-3)).coeffs[1]
    PolyInC((Fraction(0, 1), Fraction(6, 1)))
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Any, Iterable, Sequence

import numpy as np

__all__ = ["PolyInC", "SeriesInEps"]


def _is_zero(x: Any) -> bool:
    if isinstance(x, PolyInC):
        return x.is_zero()
    if isinstance(x, np.ndarray):
        return not np.any(x)
    return x == 0


class PolyInC:
    """Dense polynomial ``sum_j coeffs[j] * c**j`` with trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def variable(cls, one: Any = 1) -> "PolyInC":
        return cls((0 * one, one))

    @classmethod
    def constant(cls, value: Any) -> "PolyInC":
        return cls((value,))

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> Any:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def parity(self) -> int | None:
        """0 if even, 1 if odd, None if mixed (the zero polynomial is even)."""
        nz = {j % 2 for j, a in enumerate(self.coeffs) if a != 0}
        if not nz:
            return 0
        return nz.pop() if len(nz) == 1 else None

    def to_float(self) -> "PolyInC":
        return PolyInC(float(a) for a in self.coeffs)

    def __call__(self, c):
        """Horner evaluation; ``c`` may be a scalar or a numpy array."""
        if not self.coeffs:
            return 0.0 * np.asarray(c, dtype=float) if isinstance(c, np.ndarray) else 0.0
        if isinstance(c, np.ndarray):
            out = np.full(c.shape, float(self.coeffs[-1]))
            for a in reversed(self.coeffs[:-1]):
                out = out * c + float(a)
            return out
        out = self.coeffs[-1]
        for a in reversed(self.coeffs[:-1]):
            out = out * c + a
        return out

    # ring operations ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, PolyInC):
            n = max(len(self.coeffs), len(other.coeffs))
            return PolyInC(self.coeff(j) + other.coeff(j) for j in range(n))
        if isinstance(other, Number):
            if not self.coeffs:
                return PolyInC((other,))
            return PolyInC((self.coeffs[0] + other,) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return PolyInC(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyInC):
            if not self.coeffs or not other.coeffs:
                return PolyInC()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return PolyInC(out)
        if isinstance(other, Number):
            return PolyInC(a * other for a in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, PolyInC):
            return self.coeffs == other.coeffs
        if isinstance(other, Number):
            return self.coeffs == PolyInC((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyInC({self.coeffs!r})"

    def hatted(self, d: int) -> "PolyInC":
        """Replace the ``c**2`` monomial by the constant ``1/d``.

        This is the substitution that is exact after averaging ``(h.u)**2``
        over a cubic-symmetric lattice ball.
        """
        a2 = self.coeff(2)
        if a2 == 0:
            return self
        cs = list(self.coeffs)
        scale = Fraction(1, d) if isinstance(a2, (int, Fraction)) else 1.0 / d
        cs[0] = cs[0] + a2 * scale
        cs[2] = 0 * a2
        return PolyInC(cs)


class SeriesInEps:
    """Power series in ``eps`` truncated after ``eps**order``.

    ``coeffs[l]`` is the coefficient of ``eps**l``; missing entries are zero.
    All arithmetic truncates to the smaller order of the operands.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[Any], order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = list(coeffs[: order + 1])
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    def __len__(self):
        return self.order + 1

    def __getitem__(self, l: int):
        return self.coeffs[l]

    def _coerce(self, other) -> "SeriesInEps":
        if isinstance(other, SeriesInEps):
            return other
        return SeriesInEps([other], self.order)

    def __add__(self, other):
        o = self._coerce(other)
        m = min(self.order, o.order)
        return SeriesInEps([self.coeffs[l] + o.coeffs[l] for l in range(m + 1)], m)

    __radd__ = __add__

    def __neg__(self):
        return SeriesInEps([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, SeriesInEps):
            return SeriesInEps([a * other for a in self.coeffs], self.order)
        m = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for l in range(m + 1):
            acc = 0
            for j in range(l + 1):
                acc = acc + a[j] * b[l - j]
            out.append(acc)
        return SeriesInEps(out, m)

    __rmul__ = __mul__

    def shift_down(self, k: int = 1) -> "SeriesInEps":
        """Divide by ``eps**k``; the first ``k`` coefficients must vanish exactly."""
        if k > self.order:
            raise ValueError("shift exceeds series order")
        for l in range(k):
            if not _is_zero(self.coeffs[l]):
                raise ValueError(f"coefficient of eps^{l} is nonzero; cannot divide by eps^{k}")
        return SeriesInEps(self.coeffs[k:], self.order - k)

    def _check_unit(self):
        c0 = self.coeffs[0]
        one = c0 == 1
        if isinstance(one, np.ndarray):
            one = bool(np.all(one))
        if not one:
            raise ValueError("series must have constant term 1")

    def __pow__(self, alpha) -> "SeriesInEps":
        """``self**alpha`` for a unit-constant series and real ``alpha``.

        Uses the recurrence obtained from ``g f' = alpha g' f`` for
        ``f = g**alpha``, which reproduces the binomial series of
        ``(1 + x)**alpha`` term by term and stays exact in rational mode.
        """
        self._check_unit()
        g = self.coeffs
        nz = [j for j in range(1, self.order + 1) if not _is_zero(g[j])]
        f = [g[0]]
        for l in range(1, self.order + 1):
            acc = 0
            for j in nz:
                if j > l:
                    break
                w = (alpha + 1) * j - l
                if w == 0:
                    continue
                acc = acc + g[j] * f[l - j] * w
            f.append(acc * (Fraction(1, l) if _exact(alpha) else 1.0 / l))
        return SeriesInEps(f, self.order)

    def reciprocal(self) -> "SeriesInEps":
        return self ** (-1 if _exact(self.coeffs[0]) else -1.0)

    def __truediv__(self, other):
        if isinstance(other, SeriesInEps):
            return self * other.reciprocal()
        return self * (1 / other)

    def evaluate(self, eps, start: int = 0):
        """Evaluate ``sum_{l >= start} coeffs[l] * eps**(l - start)`` by Horner."""
        cs = self.coeffs[start:]
        out = cs[-1]
        for a in reversed(cs[:-1]):
            out = out * eps + a
        return out

    def __repr__(self):
        return f"SeriesInEps({self.coeffs!r}, order={self.order})"


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

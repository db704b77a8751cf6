import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from katobounds import kernel
from katobounds.kernel import c_fun, c_max, d_fun, e_fun, hatted, remainder, remainder_extrema, taylor_coeffs

mpmath.mp.dps = 60


# ---- c_n ---------------------------------------------------------------


def test_c_fun_zero_at_z0():
    assert np.all(c_fun(3.0, 0.0, np.linspace(0, 1, 11)) == 0)


def test_c_fun_reference_point():
    assert c_fun(3.0, 0.69603, 0.46453) == pytest.approx(14.814, abs=1e-2)


def test_c_fun_domain():
    with pytest.raises(ValueError):
        c_fun(3.0, 5.0, 0.5)
    with pytest.raises(ValueError):
        c_fun(1.0, 1.0, 0.5)


@pytest.mark.parametrize("n", [3.0, 4.0, 10.0, 2.7])
def test_c_fun_continuous_at_u0(n):
    z = np.linspace(0.05, 3.95, 40)
    errs = [np.max(np.abs(c_fun(n, z, u) - c_fun(n, z, 0.0))) for u in (1e-3, 1e-6, 1e-9)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-6


def test_c_fun_matches_mpmath():
    n = 4.0
    for z, u in [(0.6, 0.48), (3.1, 0.01), (1.5, 0.999), (2.0, 1.0)]:
        zz, uu = mpmath.mpf(z), mpmath.mpf(u)
        ref = zz * (4 - zz) * ((1 - zz * uu + zz * uu**2) ** (n / 2) - (1 - uu) ** n) ** 2
        ref /= 2 * uu**2 * (uu ** (2 * n - 2) + (1 - uu) ** (2 * n - 2))
        assert c_fun(n, z, u) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n,value", [(3, 14.814), (4, 58.460), (5, 215.97), (10, 1.3467e5)])
def test_c_max(n, value):
    assert c_max(float(n)).max == pytest.approx(value, rel=1e-3)


def test_c_max_argmax_n3():
    rep = c_max(3.0)
    assert rep.argmax == pytest.approx((0.69603, 0.46453), abs=1e-4)


def test_c_inequality_sampled():
    rng = np.random.default_rng(11)
    for n in (3.0, 4.0, 5.0, 10.0):
        cn = c_max(n).max * (1 + 1e-6)
        for _ in range(2500):
            p, q = rng.standard_normal(3) * math.exp(rng.uniform(-2, 2)), rng.standard_normal(3)
            w2 = (p @ p) * (q @ q) - (p @ q) ** 2
            lhs = w2 * (np.linalg.norm(p + q) ** n - np.linalg.norm(q) ** n) ** 2
            pn, qn = np.linalg.norm(p), np.linalg.norm(q)
            assert lhs <= cn / 2 * pn**4 * qn**2 * (pn ** (2 * n - 2) + qn ** (2 * n - 2)) * (1 + 1e-12)


# ---- D_n, E_n ----------------------------------------------------------


def test_d_e_vanish_at_poles():
    eps = np.linspace(0, 3, 7)
    for c in (-1.0, 1.0):
        assert np.all(d_fun(3.0, c, eps[eps != 1] if c == 1 else eps) == 0)
        assert np.all(e_fun(3.0, c, eps[eps != 1] if c == 1 else eps) == 0)


def test_d_eps0_branch():
    c = np.linspace(-1, 1, 9)
    assert np.allclose(d_fun(4.0, c, 0.0), 16 * (c**2 - c**4), atol=1e-15)


def test_singular_point_rejected():
    with pytest.raises(ValueError):
        d_fun(3.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        e_fun(3.0, 1.0, 1.0)


def test_d_small_eps_taylor():
    d0, d1 = taylor_coeffs("D", 3, 2)
    assert d_fun(3.0, 0.5, 1e-8) == pytest.approx(d0(0.5) + 1e-8 * d1(0.5), abs=1e-7)


@given(st.floats(-1, 1), st.one_of(st.just(0.0), st.floats(1e-12, 3)), st.floats(2.6, 10))
def test_d_e_nonnegative_and_match_mpmath(c, eps, n):
    if c == 1 and eps == 1:
        return
    s = mpmath.mpf(1) - 2 * mpmath.mpf(c) * eps + mpmath.mpf(eps) ** 2
    one_c2 = 1 - mpmath.mpf(c) ** 2
    if s == 0:
        return
    e_ref = one_c2 / s ** (n + 1)
    d_ref = one_c2 * ((s ** (-mpmath.mpf(n) / 2) - 1) / eps) ** 2 if eps else n * n * (c * c - c**4)
    dv, ev = d_fun(n, c, eps), e_fun(n, c, eps)
    assert dv >= 0 and ev >= 0
    assert dv == pytest.approx(float(d_ref), rel=1e-9, abs=1e-12)
    assert ev == pytest.approx(float(e_ref), rel=1e-9, abs=1e-12)


# ---- Taylor data -------------------------------------------------------


def poly(*cs):
    from katobounds.series import PolyInC

    return PolyInC(cs)


@pytest.mark.parametrize("n", [3, 4, 5, 10])
def test_d_low_orders_exact(n):
    n = F(n)
    d0, d1, d2 = taylor_coeffs("D", n, 3, exact=True)
    assert d0 == poly(0, 0, n**2, 0, -(n**2))
    assert d1 == poly(0, -(n**2), 0, 3 * n**2 + n**3, 0, -(2 * n**2 + n**3))
    expect = poly(
        n**2 / 4, 0, -(F(13, 4) * n**2 + F(3, 2) * n**3), 0,
        F(20, 3) * n**2 + F(9, 2) * n**3 + F(7, 12) * n**4, 0,
        -(F(11, 3) * n**2 + 3 * n**3 + F(7, 12) * n**4),
    )
    assert d2 == expect


def test_d2_n3_rationals():
    d2 = taylor_coeffs("D", 3, 3, exact=True)[2]
    assert d2.coeffs[0] == F(9, 4) and d2.coeffs[2] == F(-279, 4)


@pytest.mark.parametrize("n", [3, 4, 7])
def test_e_low_orders_exact(n):
    e0, e1 = taylor_coeffs("E", n, 2, exact=True)
    assert e0 == poly(1, 0, -1)
    assert e1 == poly(0, 2 * (n + 1), 0, -2 * (n + 1))


@pytest.mark.parametrize("kind", ["D", "E"])
@pytest.mark.parametrize("n", [3.0, 4.5, 10.0])
def test_degree_and_parity(kind, n):
    for l, p in enumerate(taylor_coeffs(kind, n, 12)):
        assert p.degree == l + (4 if kind == "D" else 2)
        assert p.parity() == l % 2


def test_float_and_exact_agree():
    ex = taylor_coeffs("D", 5, 9, exact=True)
    fl = taylor_coeffs("D", 5, 9)
    for a, b in zip(ex, fl):
        np.testing.assert_allclose([float(x) for x in a.coeffs], b.coeffs, rtol=1e-12, atol=1e-9)


def test_exact_mode_needs_rational_n():
    with pytest.raises(ValueError):
        taylor_coeffs("D", 3.3, 3, exact=True)
    with pytest.raises(ValueError):
        taylor_coeffs("X", 3, 3)


@pytest.mark.parametrize("kind,fun", [("D", d_fun), ("E", e_fun)])
def test_taylor_vs_finite_differences(kind, fun):
    """l! F_l(c) against a Richardson-extrapolated central difference in eps at 0."""
    n = 3.5
    polys = taylor_coeffs(kind, n, 5)

    def f(c, e):
        # F(c, -e) = F(-c, e) for both kernels, which extends them to negative eps
        return fun(n, c, e) if e >= 0 else fun(n, -c, -e)

    def central(c, l, h):
        return sum((-1) ** j * math.comb(l, j) * f(c, (l / 2 - j) * h) for j in range(l + 1)) / h**l

    for c in (-0.7, -0.2, 0.3, 0.9):
        for l in range(5):
            deriv = (4 * central(c, l, 5e-3) - central(c, l, 1e-2)) / 3
            assert deriv == pytest.approx(math.factorial(l) * polys[l](c), rel=1e-5, abs=1e-9)


# ---- remainders --------------------------------------------------------


def mp_remainder(kind, n, t, c, eps):
    c, eps, n = mpmath.mpf(c), mpmath.mpf(eps), mpmath.mpf(n)
    base = "D" if kind == "Q" else "E"

    def F(e):
        s = 1 - 2 * c * e + e * e
        if base == "E":
            return (1 - c * c) / s ** (n + 1)
        return (1 - c * c) * ((s ** (-n / 2) - 1) / e) ** 2

    coeffs = mpmath.taylor(F, 0, t + 30) if base == "E" else None
    if base == "D":
        G = lambda e: (1 - c * c) * (s_pow(e) - 1) ** 2
        s_pow = lambda e: (1 - 2 * c * e + e * e) ** (-n / 2)
        coeffs = mpmath.taylor(G, 0, t + 32)[2:]
    if eps == 0:
        return coeffs[t]
    part = sum(coeffs[l] * eps**l for l in range(t))
    return (F(eps) - part) / eps**t


@pytest.mark.parametrize("kind", ["Q", "R"])
@pytest.mark.parametrize("n,t", [(3, 8), (4, 6), (10, 6)])
def test_remainder_matches_mpmath(kind, n, t):
    for c, eps in [(-0.9, 0.01), (0.3, 0.2), (0.99, 0.5), (0.0, 0.3), (0.6, 1e-4)]:
        ref = float(mp_remainder(kind, n, t, c, eps))
        got = remainder(kind, float(n), t, c, eps)
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-8)


def test_remainder_at_zero_is_next_coefficient():
    for kind, base in (("Q", "D"), ("R", "E")):
        pt = taylor_coeffs(base, 4.0, 7)[6]
        for c in (-0.5, 0.1, 0.8):
            assert remainder(kind, 4.0, 6, c, 0.0) == pytest.approx(pt(c), rel=1e-12)


@pytest.mark.parametrize("n,t", [(3.0, 8), (4.0, 6)])
def test_remainder_defining_identity(n, t):
    c, e = np.meshgrid(np.linspace(-1, 1, 101), np.linspace(0, 0.5, 51))
    for kind, fun, base in (("Q", d_fun, "D"), ("R", e_fun, "E")):
        polys = taylor_coeffs(base, n, t)
        part = sum(p(c) * e**l for l, p in enumerate(polys))
        resid = fun(n, c, e) - (part + remainder(kind, n, t, c, e) * e**t)
        assert np.max(np.abs(resid)) <= 1e-10


@pytest.mark.parametrize(
    "n,t,tol",
    [(3, 4, None), (4, 6, None), (5, 6, None), (3, 8, 5e-10), (10, 6, 5e-10)],
)
def test_branch_agreement(n, t, tol):
    c, e = np.meshgrid(np.linspace(-1, 1, 41), np.linspace(kernel.EPS0 / 2, 2 * kernel.EPS0, 21))
    for kind in ("Q", "R"):
        direct = remainder(kind, float(n), t, c, e, eps0=0.0)
        series = remainder(kind, float(n), t, c, e, eps0=1.0)
        diff = np.max(np.abs(direct - series))
        if tol is None:
            assert diff <= 1e-8
        else:
            assert diff <= tol * np.max(np.abs(series))


def test_remainder_domain():
    with pytest.raises(ValueError):
        remainder("Q", 3.0, 4, 0.0, 0.6)
    with pytest.raises(ValueError):
        remainder("Z", 3.0, 4, 0.0, 0.1)
    with pytest.raises(ValueError):
        remainder("Q", 3.0, 0, 0.0, 0.1)


@pytest.mark.parametrize(
    "n,t,expect",
    [
        (3, 8, (-72.563, 202.91, -159.61, 930.73)),
        (5, 6, (-432.09, 4970.4, None, None)),
        (10, 6, (-1.3678e4, 5.0076e6, None, None)),
    ],
)
def test_remainder_extrema_reference(n, t, expect):
    ex = remainder_extrema(float(n), t)
    for got, want in zip((ex.lam, ex.Lam, ex.mu, ex.M), expect):
        if want is not None:
            assert got == pytest.approx(want, rel=1e-3)


def test_remainder_extrema_n4_recomputed():
    # the reference lambda_46 = -112.95 is not reproduced by the definitions (see README)
    ex = remainder_extrema(4.0, 6)
    assert ex.lam == pytest.approx(-149.895, rel=1e-4)
    assert ex.Lam == pytest.approx(909.695, rel=1e-4)


@pytest.mark.parametrize("n,t", [(3.0, 8), (4.0, 6)])
def test_enclosure_on_grid(n, t):
    ex = remainder_extrema(n, t)
    c, e = np.meshgrid(np.linspace(-1, 1, 101), np.linspace(0, 0.5, 51))
    q = remainder("Q", n, t, c, e)
    r = remainder("R", n, t, c, e)
    assert ex.lam <= q.min() and q.max() <= ex.Lam
    assert ex.mu <= r.min() and r.max() <= ex.M
    for fun, base, lo, hi in ((d_fun, "D", ex.lam, ex.Lam), (e_fun, "E", ex.mu, ex.M)):
        part = sum(p(c) * e**l for l, p in enumerate(taylor_coeffs(base, n, t)))
        val = fun(n, c, e)
        slack = 1e-9 * np.maximum(1, np.abs(val))
        assert np.all(part + lo * e**t <= val + slack) and np.all(val <= part + hi * e**t + slack)


def test_hatted_examples():
    d0 = taylor_coeffs("D", 3, 1, exact=True)[0]
    assert hatted(d0, 3) == poly(F(9, 3), 0, 0, 0, -9)
    d2 = taylor_coeffs("D", 3, 3, exact=True)[2]
    n = F(3)
    expect = poly(
        n**2 / 4 - (F(13, 4) * n**2 + F(3, 2) * n**3) / 3, 0, 0, 0,
        F(20, 3) * n**2 + F(9, 2) * n**3 + F(7, 12) * n**4, 0,
        -(F(11, 3) * n**2 + 3 * n**3 + F(7, 12) * n**4),
    )
    assert hatted(d2, 3) == expect
    e1 = taylor_coeffs("E", 3, 2, exact=True)[1]
    assert hatted(e1, 3) == e1

import math
from fractions import Fraction

import numpy as np
import pytest

from bgk1d.weno import (
    D_MINUS,
    D_PLUS,
    WenoConfig,
    conservative_derivative,
    linear_weights,
    smoothness_indicators,
    weno3_interpolate,
    weno5_candidates,
    weno5_edges,
    weno5_interface_values,
    weno5_smoothness,
    weno_interpolate,
)


# ---------------------------------------------------------------------------
# linear weights


def test_linear_weights_at_cell_nodes():
    w1, w2 = linear_weights(0.0)
    assert (w1, w2) == (pytest.approx(2.0 / 3.0), pytest.approx(1.0 / 3.0))
    w1, w2 = linear_weights(1.0)
    assert (w1, w2) == (pytest.approx(1.0 / 3.0), pytest.approx(2.0 / 3.0))
    w1, w2 = linear_weights(0.5)
    assert (w1, w2) == (pytest.approx(0.5), pytest.approx(0.5))


def test_linear_weights_partition_of_unity():
    theta = np.linspace(0.0, 1.0, 21)
    w1, w2 = linear_weights(theta)
    np.testing.assert_allclose(w1 + w2, 1.0, atol=1e-15)
    assert np.all(w1 > 0) and np.all(w2 > 0)


# ---------------------------------------------------------------------------
# smoothness indicators


def test_smoothness_vanishes_on_constants():
    for c in (0.0, 1.0, -3.7, 1e6):
        b1, b2 = smoothness_indicators(c, c, c, c)
        assert b1 == 0.0 and b2 == 0.0


def test_smoothness_linear_data():
    # derived by symbolic integration of the defining indicator integral
    b1, b2 = smoothness_indicators(0.0, 1.0, 2.0, 3.0)
    assert b1 == pytest.approx(1.0, rel=1e-14)
    assert b2 == pytest.approx(1.0, rel=1e-14)


def test_smoothness_matches_defining_integral():
    # oracle: build the two parabolas, integrate dtheta (P')^2 + (P'')^2 on [0,1]
    sympy = pytest.importorskip("sympy")
    th = sympy.symbols("theta")
    fm1, f0, f1, f2 = sympy.symbols("fm1 f0 f1 f2")
    p1 = fm1 * th * (th - 1) / 2 + f0 * (1 - th**2) + f1 * th * (th + 1) / 2
    p2 = f0 * (th - 1) * (th - 2) / 2 + f1 * th * (2 - th) + f2 * th * (th - 1) / 2

    def beta(p):
        return sympy.integrate(sympy.diff(p, th) ** 2, (th, 0, 1)) + sympy.integrate(
            sympy.diff(p, th, 2) ** 2, (th, 0, 1)
        )

    b1_sym = sympy.lambdify((fm1, f0, f1, f2), beta(p1))
    b2_sym = sympy.lambdify((fm1, f0, f1, f2), beta(p2))
    rng = np.random.default_rng(0)
    for _ in range(40):
        data = rng.uniform(-3, 3, 4)
        b1, b2 = smoothness_indicators(*data)
        assert b1 == pytest.approx(b1_sym(*data), rel=1e-12, abs=1e-13)
        assert b2 == pytest.approx(b2_sym(*data), rel=1e-12, abs=1e-13)


def test_smoothness_detects_downstream_jump():
    b1, b2 = smoothness_indicators(1.0, 1.0, 1.0, 50.0)
    assert b2 > 1e3 * max(b1, 1e-30)


def test_smoothness_mirror_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = rng.uniform(-2, 2, 4)
        b1, b2 = smoothness_indicators(*d)
        m2, m1 = smoothness_indicators(*d[::-1])
        assert b1 == pytest.approx(m1, rel=1e-13, abs=1e-15)
        assert b2 == pytest.approx(m2, rel=1e-13, abs=1e-15)


# ---------------------------------------------------------------------------
# pointwise interpolation


def _rational_oracle(fm1, f0, f1, f2, th, eps=Fraction(1, 10**6)):
    """Exact rational evaluation of the full third-order reconstruction."""
    fm1, f0, f1, f2, th = map(Fraction, (fm1, f0, f1, f2, th))
    b1 = (
        Fraction(13, 12) * fm1**2 + Fraction(16, 3) * f0**2 + Fraction(25, 12) * f1**2
        - Fraction(13, 3) * fm1 * f0 + Fraction(13, 6) * fm1 * f1 - Fraction(19, 3) * f0 * f1
    )
    b2 = (
        Fraction(13, 12) * f2**2 + Fraction(16, 3) * f1**2 + Fraction(25, 12) * f0**2
        - Fraction(13, 3) * f2 * f1 + Fraction(13, 6) * f2 * f0 - Fraction(19, 3) * f0 * f1
    )
    a1 = (2 - th) / 3 / (eps + b1) ** 2
    a2 = (1 + th) / 3 / (eps + b2) ** 2
    p1 = fm1 * th * (th - 1) / 2 + f0 * (1 - th**2) + f1 * th * (th + 1) / 2
    p2 = f0 * (th - 1) * (th - 2) / 2 + f1 * th * (2 - th) + f2 * th * (th - 1) / 2
    return float((a1 * p1 + a2 * p2) / (a1 + a2))


def test_weno3_matches_rational_oracle():
    rng = np.random.default_rng(2)
    for _ in range(200):
        data = [Fraction(int(k), 64) for k in rng.integers(-256, 256, 4)]
        th = Fraction(int(rng.integers(0, 65)), 64)
        got = weno3_interpolate(*map(float, data), float(th))
        want = _rational_oracle(*data, th)
        assert got == pytest.approx(want, rel=1e-13, abs=1e-14)


def test_weno3_reproduces_constants_exactly():
    for th in np.linspace(0, 1, 9):
        assert weno3_interpolate(4.2, 4.2, 4.2, 4.2, th) == 4.2


def test_weno3_exact_on_quadratics():
    # every substencil parabola reproduces a quadratic, so any convex mix does
    q = lambda x: 0.3 * x * x - 1.1 * x + 0.2
    data = [q(x) for x in (-1.0, 0.0, 1.0, 2.0)]
    for th in np.linspace(0, 1, 7):
        assert weno3_interpolate(*data, th) == pytest.approx(q(th), rel=1e-13, abs=1e-14)


def test_weno3_exact_on_cubic_with_equal_indicators():
    # antisymmetric cubic about the cell midpoint has beta_1 = beta_2, so the
    # weights reduce to the linear ones and degree-3 data are reproduced
    q = lambda x: (x - 0.5) ** 3
    data = [q(x) for x in (-1.0, 0.0, 1.0, 2.0)]
    b1, b2 = smoothness_indicators(*data)
    assert b1 == pytest.approx(b2, rel=1e-14)
    for th in (0.0, 0.25, 0.5, 0.8, 1.0):
        assert weno3_interpolate(*data, th) == pytest.approx(q(th), rel=1e-12, abs=1e-14)


def test_weno3_nodal_exactness():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = rng.uniform(-2, 2, 4)
        assert weno3_interpolate(*d, 0.0) == pytest.approx(d[1], rel=1e-14)
        assert weno3_interpolate(*d, 1.0) == pytest.approx(d[2], rel=1e-14)


def test_weno3_step_stencil_midpoint():
    val = weno3_interpolate(0.0, 0.0, 1.0, 1.0, 0.5)
    assert 0.0 <= val <= 1.0
    # ENO substencil values at the midpoint are 3/8 and 5/8
    assert min(abs(val - 0.375), abs(val - 0.625)) <= 0.15


def test_weno3_stays_between_parabolas():
    # convexity: the reconstruction is a convex combination of the parabolas
    rng = np.random.default_rng(4)
    for _ in range(100):
        fm1, f0, f1, f2 = rng.uniform(-3, 3, 4)
        th = rng.uniform(0, 1)
        a1 = fm1 - 2 * f0 + f1
        s1 = 0.5 * (f1 - fm1)
        p1 = f0 + th * (s1 + 0.5 * th * a1)
        a2 = f0 - 2 * f1 + f2
        s2 = 0.5 * (f0 - f2)
        p2 = f0 + th * (2 * (f1 - f0) + s2 + 0.5 * th * a2)
        val = weno3_interpolate(fm1, f0, f1, f2, th)
        assert min(p1, p2) - 1e-12 <= val <= max(p1, p2) + 1e-12


def test_weno3_nonlinear_weights_normalized():
    rng = np.random.default_rng(5)
    for _ in range(100):
        d = rng.uniform(-5, 5, 4)
        th = rng.uniform(0, 1)
        lw1, lw2 = linear_weights(th)
        b1, b2 = smoothness_indicators(*d)
        a1 = lw1 / (1e-6 + b1) ** 2
        a2 = lw2 / (1e-6 + b2) ** 2
        w1, w2 = a1 / (a1 + a2), a2 / (a1 + a2)
        assert w1 >= 0.0 and w2 >= 0.0
        assert w1 + w2 == pytest.approx(1.0, abs=1e-14)


def test_weno3_mirror_symmetry():
    rng = np.random.default_rng(6)
    for _ in range(50):
        d = rng.uniform(-2, 2, 4)
        th = rng.uniform(0, 1)
        assert weno3_interpolate(*d, th) == pytest.approx(
            weno3_interpolate(*d[::-1], 1.0 - th), rel=1e-12, abs=1e-13
        )


def test_weno_interpolate_dispatch():
    assert weno_interpolate((1.0, 3.0), 0.25, WenoConfig(n=1)) == pytest.approx(1.5)
    data = (0.1, 0.4, 0.9, 1.6)
    assert weno_interpolate(data, 0.3) == pytest.approx(weno3_interpolate(*data, 0.3), rel=1e-15)
    with pytest.raises(ValueError):
        weno_interpolate((1.0, 2.0, 3.0), 0.5)
    with pytest.raises(ValueError):
        WenoConfig(n=3)


# ---------------------------------------------------------------------------
# interface reconstruction


def test_flux_weights_partition():
    assert sum(D_MINUS) == pytest.approx(1.0)
    assert sum(D_PLUS) == pytest.approx(1.0)
    assert D_PLUS == tuple(reversed(D_MINUS))
    assert D_MINUS == (pytest.approx(0.1), pytest.approx(0.6), pytest.approx(0.3))


def test_weno5_candidates_exact_on_quadratic_cell_averages():
    # cell averages of q over [i-1/2, i+1/2]; every candidate must return the
    # exact point value q(1/2), which pins the +11/6 coefficient uniquely
    alpha, beta, gamma = Fraction(3, 7), Fraction(-2, 5), Fraction(1, 3)

    def avg(i):
        i = Fraction(i)
        lo, hi = i - Fraction(1, 2), i + Fraction(1, 2)
        return alpha * (hi**3 - lo**3) / 3 + beta * (hi**2 - lo**2) / 2 + gamma

    window = [avg(i) for i in range(-2, 3)]
    point = alpha * Fraction(1, 4) + beta * Fraction(1, 2) + gamma  # q(1/2)
    for cand in weno5_candidates(*map(float, window)):
        assert cand == pytest.approx(float(point), rel=1e-14)


def test_weno5_interface_constant_and_linear():
    minus, plus = weno5_interface_values(3.3, 3.3, 3.3, 3.3, 3.3)
    assert minus == pytest.approx(3.3, rel=1e-15)
    assert plus == pytest.approx(3.3, rel=1e-15)
    a, b = 0.7, -0.4
    window = [a + b * i for i in range(-2, 3)]
    minus, plus = weno5_interface_values(*window)
    assert minus == pytest.approx(a + b / 2, rel=1e-13)  # right edge of center cell
    assert plus == pytest.approx(a - b / 2, rel=1e-13)  # left edge of center cell


def test_weno5_smoothness_on_jump():
    b = weno5_smoothness(1.0, 1.0, 1.0, 8.0, 8.0)
    assert b[0] == pytest.approx(0.0, abs=1e-14)
    assert b[1] > 1.0 and b[2] > 1.0


def test_weno5_fifth_order_on_smooth_data():
    # nodal data are cell averages of h; the minus value approximates
    # h(x_{i+1/2}) to fifth order
    errs = []
    for n in (16, 32, 64, 128):
        dx = 1.0 / n
        x = (np.arange(-2, n + 3) + 0.5) * dx
        # exact cell averages of sin(2 pi x)
        avg = (np.cos(2 * np.pi * (x - dx / 2)) - np.cos(2 * np.pi * (x + dx / 2))) / (2 * np.pi * dx)
        minus, _ = weno5_edges(avg)
        exact = np.sin(2 * np.pi * np.arange(1, n + 2) * dx)  # right edges of cells 0..n
        errs.append(np.max(np.abs(minus - exact)))
    orders = [math.log2(errs[i - 1] / errs[i]) for i in range(1, len(errs))]
    assert min(orders[-2:]) > 4.5


def test_conservative_derivative_trivials():
    flux = np.full(9, 2.5)
    np.testing.assert_allclose(conservative_derivative(flux, 0.1), 0.0)
    flux = np.arange(9, dtype=float)
    np.testing.assert_allclose(conservative_derivative(flux, 0.1), 10.0)


def test_conservative_derivative_telescopes():
    rng = np.random.default_rng(8)
    flux = rng.uniform(-1, 1, 33)
    d = conservative_derivative(flux, 0.05)
    assert d.sum() * 0.05 == pytest.approx(flux[-1] - flux[0], abs=1e-13)

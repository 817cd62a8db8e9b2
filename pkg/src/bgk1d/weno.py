"""Non-oscillatory reconstruction.

Two flavours live here:

* pointwise WENO interpolation at an arbitrary point of a grid cell, used by
  the semi-Lagrangian solver to evaluate fields at characteristic foot
  points (third order from four nodes, or plain two-point linear);
* conservative fifth-order WENO reconstruction of upwind interface values
  from cell data, used by the conservative transport step.

All kernels are written elementwise on the stencil arguments, so they accept
scalars or same-shaped arrays and vectorize over whole grid lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: linear weights of the upwind interface flux combination, stencils l = -1, 0, 1
D_MINUS = (1.0 / 10.0, 3.0 / 5.0, 3.0 / 10.0)
#: mirrored weights for the downwind side, d~_l = d_{-l}
D_PLUS = tuple(reversed(D_MINUS))


@dataclass(frozen=True)
class WenoConfig:
    """Pointwise reconstruction choice: n substencils (degree 2n-1) and the
    denominator regularization eps."""

    n: int = 2
    eps: float = 1.0e-6

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("only n = 1 (linear) and n = 2 (third order) are supported")
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")


def linear_weights(theta, n: int = 2):
    """Linear weights of the substencil polynomials at local coordinate theta.

    theta = (xi - x_i)/dx in [0, 1] locates the evaluation point inside the
    cell.  For n = 2 the weights are ((2 - theta)/3, (1 + theta)/3); they are
    positive on the whole cell and sum to one everywhere.
    """
    theta = np.asarray(theta, dtype=float)
    if n == 1:
        return (np.ones_like(theta),)
    if n == 2:
        return ((2.0 - theta) / 3.0, (1.0 + theta) / 3.0)
    raise ValueError("only n in {1, 2} supported")


def smoothness_indicators(fm1, f0, f1, f2):
    """Smoothness of the two interpolation parabolas on {fm1, f0, f1} and
    {f0, f1, f2}: the scaled integrals of their squared first and second
    derivatives over the center cell.

    Written in terms of the second difference a and centered slope b of each
    substencil, beta = 4/3 a^2 + a b + b^2, which expands to

        beta_1 = 13/12 fm1^2 + 16/3 f0^2 + 25/12 f1^2
                 - 13/3 fm1 f0 + 13/6 fm1 f1 - 19/3 f0 f1

    and its mirror image on {f0, f1, f2}; both vanish identically on
    constant data.
    """
    a = fm1 - 2.0 * f0 + f1
    b = 0.5 * (f1 - fm1)
    beta1 = a * (4.0 / 3.0 * a + b) + b * b
    a = f0 - 2.0 * f1 + f2
    b = 0.5 * (f0 - f2)
    beta2 = a * (4.0 / 3.0 * a + b) + b * b
    return beta1, beta2


def weno3_interpolate(fm1, f0, f1, f2, theta, eps: float = 1.0e-6):
    """Third-order pointwise WENO value at theta in [0, 1] of the cell
    [x_i, x_{i+1}], from the four nodes x_{i-1}..x_{i+2}.

    Convex combination of the two substencil parabolas with weights
    w_k ~ l_k(theta)/(eps + beta_k)^2, normalized.  Exact on nodal points,
    on quadratics always, and on cubics wherever beta_1 = beta_2.
    """
    # substencil curvatures/slopes; parabola P = f + theta*(slope + theta*curv/2)
    a1 = fm1 - 2.0 * f0 + f1
    s1 = 0.5 * (f1 - fm1)
    beta1 = a1 * (4.0 / 3.0 * a1 + s1) + s1 * s1
    a2 = f0 - 2.0 * f1 + f2
    s2 = 0.5 * (f0 - f2)
    beta2 = a2 * (4.0 / 3.0 * a2 + s2) + s2 * s2
    w1 = ((2.0 - theta) / 3.0) / (eps + beta1) ** 2
    w2 = ((1.0 + theta) / 3.0) / (eps + beta2) ** 2
    w1 = w1 / (w1 + w2)
    p1 = f0 + theta * (s1 + 0.5 * theta * a1)
    p2 = f0 + theta * (2.0 * (f1 - f0) + s2 + 0.5 * theta * a2)
    return p2 + w1 * (p1 - p2)


def weno_interpolate(values, theta, cfg: WenoConfig = WenoConfig()):
    """Pointwise reconstruction from a stencil of 2n values centered on the
    cell containing the target point; theta in [0, 1] is the local coordinate.

    n = 1 expects (f_i, f_{i+1}) and is plain linear interpolation; n = 2
    expects (f_{i-1}, f_i, f_{i+1}, f_{i+2}).
    """
    values = tuple(values)
    if cfg.n == 1:
        if len(values) != 2:
            raise ValueError("n = 1 takes a 2-point stencil")
        f0, f1 = values
        return f0 * (1.0 - theta) + f1 * theta
    if len(values) != 4:
        raise ValueError("n = 2 takes a 4-point stencil")
    return weno3_interpolate(*values, theta, eps=cfg.eps)


def weno5_candidates(fm2, fm1, f0, f1, f2):
    """Candidate interface values at the right edge of the center cell
    (x_{i+1/2}^-) from the three upwind-biased substencils l = -1, 0, 1."""
    cm1 = fm2 / 3.0 - 7.0 / 6.0 * fm1 + 11.0 / 6.0 * f0
    c0 = -fm1 / 6.0 + 5.0 / 6.0 * f0 + f1 / 3.0
    c1 = f0 / 3.0 + 5.0 / 6.0 * f1 - f2 / 6.0
    return cm1, c0, c1


def weno5_smoothness(fm2, fm1, f0, f1, f2):
    """Jiang-Shu smoothness indicators of the three substencils."""
    bm1 = 13.0 / 12.0 * (fm2 - 2.0 * fm1 + f0) ** 2 + 0.25 * (fm2 - 4.0 * fm1 + 3.0 * f0) ** 2
    b0 = 13.0 / 12.0 * (fm1 - 2.0 * f0 + f1) ** 2 + 0.25 * (fm1 - f1) ** 2
    b1 = 13.0 / 12.0 * (f0 - 2.0 * f1 + f2) ** 2 + 0.25 * (3.0 * f0 - 4.0 * f1 + f2) ** 2
    return bm1, b0, b1


def weno5_interface_values(fm2, fm1, f0, f1, f2, eps: float = 1.0e-6):
    """Fifth-order WENO interface values from the 5-cell window centered on
    cell i, treating the nodal data as cell averages of the flux function.

    Returns ``(minus, plus)``: the upwind-biased value at the right edge
    x_{i+1/2}^- (weights d_l) and the mirrored downwind-biased value at the
    left edge x_{i-1/2}^+ (weights d~_l = d_{-l}, mirrored substencils).
    """
    bm1, b0, b1 = weno5_smoothness(fm2, fm1, f0, f1, f2)
    am1 = D_MINUS[0] / (eps + bm1) ** 2
    a0 = D_MINUS[1] / (eps + b0) ** 2
    a1 = D_MINUS[2] / (eps + b1) ** 2
    asum = am1 + a0 + a1
    cm1, c0, c1 = weno5_candidates(fm2, fm1, f0, f1, f2)
    minus = (am1 * cm1 + a0 * c0 + a1 * c1) / asum

    # mirror image: same indicators, reversed stencil coefficients and weights
    tm1 = D_PLUS[0] / (eps + bm1) ** 2
    t0 = D_PLUS[1] / (eps + b0) ** 2
    t1 = D_PLUS[2] / (eps + b1) ** 2
    tsum = tm1 + t0 + t1
    dm1, d0, d1 = weno5_candidates(f2, f1, f0, fm1, fm2)
    # candidates of the reversed window pair with the reversed indicators
    plus = (tm1 * d1 + t0 * d0 + t1 * dm1) / tsum
    return minus, plus


def weno5_edges(line, eps: float = 1.0e-6):
    """Vectorized interface values for every admissible center of a 1D line.

    For ``line`` of length m, returns two arrays of length m - 4 holding the
    minus value at the right edge and the plus value at the left edge of
    cells 2..m-3.
    """
    line = np.asarray(line, dtype=float)
    return weno5_interface_values(line[:-4], line[1:-3], line[2:-2], line[3:-1], line[4:], eps=eps)


def conservative_derivative(flux, dx: float):
    """Cell derivative from interface fluxes: (f_{i+1/2} - f_{i-1/2})/dx.

    Telescopes exactly: dx * sum equals the difference of the boundary
    fluxes.
    """
    flux = np.asarray(flux, dtype=float)
    return np.diff(flux, axis=0) / dx

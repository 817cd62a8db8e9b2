"""Exact Riemann solver for the 1D Euler equations.

Reference solution for the fluid limit of the kinetic solver: with one
translational degree of freedom the hydrodynamic limit is the Euler system
with adiabatic exponent gamma = 1 + 2/N = 3, and p = rho*T.

Star-region pressure is found by Newton iteration on the standard pressure
function (two-shock/two-rarefaction form); the solution is then sampled
along rays xi = x/t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class VacuumError(ValueError):
    """The data generate vacuum; the star state does not exist."""


@dataclass(frozen=True)
class EulerState:
    rho: float
    u: float
    p: float

    def __post_init__(self):
        if self.rho <= 0.0 or self.p <= 0.0:
            raise ValueError("state needs rho > 0 and p > 0")


def sound_speed(state: EulerState, gamma: float) -> float:
    return math.sqrt(gamma * state.p / state.rho)


def _pressure_fn(p: float, s: EulerState, gamma: float):
    """f_K(p) and its derivative for one side of the pressure equation."""
    a = sound_speed(s, gamma)
    if p > s.p:  # shock
        A = 2.0 / ((gamma + 1.0) * s.rho)
        B = (gamma - 1.0) / (gamma + 1.0) * s.p
        root = math.sqrt(A / (p + B))
        f = (p - s.p) * root
        df = root * (1.0 - 0.5 * (p - s.p) / (p + B))
    else:  # rarefaction
        f = 2.0 * a / (gamma - 1.0) * ((p / s.p) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = (p / s.p) ** (-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * a)
    return f, df


def riemann_star(left: EulerState, right: EulerState, gamma: float, tol: float = 1.0e-12):
    """Star-region (p*, u*) by Newton iteration on the pressure equation."""
    aL = sound_speed(left, gamma)
    aR = sound_speed(right, gamma)
    if 2.0 * (aL + aR) / (gamma - 1.0) <= right.u - left.u:
        raise VacuumError("initial states pull apart into vacuum")
    du = right.u - left.u
    p = max(tol, 0.5 * (left.p + right.p) - 0.125 * du * (left.rho + right.rho) * (aL + aR))
    for _ in range(100):
        fL, dL = _pressure_fn(p, left, gamma)
        fR, dR = _pressure_fn(p, right, gamma)
        delta = (fL + fR + du) / (dL + dR)
        p_new = p - delta
        if p_new <= 0.0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * max(1.0, p):
            p = p_new
            break
        p = p_new
    else:
        raise RuntimeError("star pressure iteration did not converge")
    fL, _ = _pressure_fn(p, left, gamma)
    fR, _ = _pressure_fn(p, right, gamma)
    u = 0.5 * (left.u + right.u) + 0.5 * (fR - fL)
    return p, u


def wave_speeds(left: EulerState, right: EulerState, gamma: float):
    """Characteristic speeds of the wave pattern, keyed by wave.

    Returns a dict with 'contact' and, per side, either a shock speed or a
    rarefaction (head, tail) pair.
    """
    p_star, u_star = riemann_star(left, right, gamma)
    aL = sound_speed(left, gamma)
    aR = sound_speed(right, gamma)
    out = {"p_star": p_star, "u_star": u_star, "contact": u_star}
    gp = (gamma + 1.0) / (2.0 * gamma)
    gm = (gamma - 1.0) / (2.0 * gamma)
    if p_star > left.p:
        out["left_shock"] = left.u - aL * math.sqrt(gp * p_star / left.p + gm)
    else:
        a_star = aL * (p_star / left.p) ** ((gamma - 1.0) / (2.0 * gamma))
        out["left_rarefaction"] = (left.u - aL, u_star - a_star)
    if p_star > right.p:
        out["right_shock"] = right.u + aR * math.sqrt(gp * p_star / right.p + gm)
    else:
        a_star = aR * (p_star / right.p) ** ((gamma - 1.0) / (2.0 * gamma))
        out["right_rarefaction"] = (u_star + a_star, right.u + aR)
    return out


def exact_riemann_euler(left: EulerState, right: EulerState, gamma: float, xi):
    """Sample the exact solution along rays xi = x/t.

    Returns (rho, u, p) arrays shaped like xi.
    """
    xi = np.asanyarray(xi, dtype=float)
    p_star, u_star = riemann_star(left, right, gamma)
    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    gm1 = gamma - 1.0
    gp1 = gamma + 1.0
    aL = sound_speed(left, gamma)
    aR = sound_speed(right, gamma)

    left_mask = xi <= u_star
    # left side of the contact
    if p_star > left.p:  # left shock
        ratio = p_star / left.p
        rho_star = left.rho * (ratio + gm1 / gp1) / (gm1 / gp1 * ratio + 1.0)
        s = left.u - aL * math.sqrt(gp1 / (2.0 * gamma) * ratio + gm1 / (2.0 * gamma))
        pre = left_mask & (xi < s)
        post = left_mask & ~(xi < s)
        _assign(rho, u, p, pre, left.rho, left.u, left.p)
        _assign(rho, u, p, post, rho_star, u_star, p_star)
    else:  # left rarefaction
        rho_star = left.rho * (p_star / left.p) ** (1.0 / gamma)
        a_star = aL * (p_star / left.p) ** (gm1 / (2.0 * gamma))
        head, tail = left.u - aL, u_star - a_star
        pre = left_mask & (xi < head)
        fan = left_mask & (xi >= head) & (xi <= tail)
        post = left_mask & (xi > tail)
        _assign(rho, u, p, pre, left.rho, left.u, left.p)
        _assign(rho, u, p, post, rho_star, u_star, p_star)
        u_fan = 2.0 / gp1 * (aL + gm1 / 2.0 * left.u + xi[fan])
        a_fan = aL + gm1 / 2.0 * (left.u - u_fan)
        rho[fan] = left.rho * (a_fan / aL) ** (2.0 / gm1)
        u[fan] = u_fan
        p[fan] = left.p * (a_fan / aL) ** (2.0 * gamma / gm1)

    right_mask = ~left_mask
    if p_star > right.p:  # right shock
        ratio = p_star / right.p
        rho_star = right.rho * (ratio + gm1 / gp1) / (gm1 / gp1 * ratio + 1.0)
        s = right.u + aR * math.sqrt(gp1 / (2.0 * gamma) * ratio + gm1 / (2.0 * gamma))
        post = right_mask & (xi < s)
        pre = right_mask & ~(xi < s)
        _assign(rho, u, p, pre, right.rho, right.u, right.p)
        _assign(rho, u, p, post, rho_star, u_star, p_star)
    else:  # right rarefaction
        rho_star = right.rho * (p_star / right.p) ** (1.0 / gamma)
        a_star = aR * (p_star / right.p) ** (gm1 / (2.0 * gamma))
        head, tail = u_star + a_star, right.u + aR
        pre = right_mask & (xi > tail)
        fan = right_mask & (xi >= head) & (xi <= tail)
        post = right_mask & (xi < head)
        _assign(rho, u, p, pre, right.rho, right.u, right.p)
        _assign(rho, u, p, post, rho_star, u_star, p_star)
        u_fan = 2.0 / gp1 * (-aR + gm1 / 2.0 * right.u + xi[fan])
        a_fan = aR - gm1 / 2.0 * (right.u - u_fan)
        rho[fan] = right.rho * (a_fan / aR) ** (2.0 / gm1)
        u[fan] = u_fan
        p[fan] = right.p * (a_fan / aR) ** (2.0 * gamma / gm1)

    return rho, u, p


def _assign(rho, u, p, mask, r_val, u_val, p_val):
    rho[mask] = r_val
    u[mask] = u_val
    p[mask] = p_val

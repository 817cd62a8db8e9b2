"""Semi-Lagrangian DIRK solver for the 1D BGK equation.

Data live on a fixed grid; the transport is handled by tracing
characteristics backward and interpolating, so no advective CFL
restriction applies.  Per step, for each stage l:

1. assemble the explicit part at every grid node by interpolating the old
   solution at the foot point x_i - v_j*c_l*dt and adding the earlier stage
   fluxes interpolated at x_i - v_j*(c_l - c_k)*dt;
2. solve the implicit relaxation in closed form (moments of the stage equal
   moments of the explicit part) and store the recovered stage flux.

The final combination interpolates the old solution at x_i - v_j*dt and the
stage fluxes at x_i - v_j*(1 - c_k)*dt, weighting by the tableau weights.
Every quantity attached to time t^n + c_k*dt is evaluated on the
characteristic through the target space-time point, which keeps all stage
geometries consistent for any tableau.

The ghost region of the state array is solver-owned scratch: it is refilled
from the boundary condition before every interpolation pass.  Interior
values of the input are never modified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dirk import ButcherTableau, relax_stage, stage_flux
from .phase_grid import CoverageError, PhaseGrid, UnphysicalState, maxwellian
from .weno import WenoConfig, weno3_interpolate


@dataclass(frozen=True)
class PrescribedMoments:
    """Inflow described by fixed Maxwellian states (rho, u, T) per side."""

    left: tuple
    right: tuple

    def __post_init__(self):
        for rho, _, T in (self.left, self.right):
            if rho <= 0.0 or T <= 0.0:
                raise ValueError("prescribed states need rho > 0 and T > 0")


@dataclass(frozen=True)
class Periodic:
    pass


def fill_ghosts(f: np.ndarray, grid: PhaseGrid, bc) -> None:
    """Refill the ghost region of a padded distribution array in place."""
    g = grid.ghost_width
    if g == 0:
        return
    if isinstance(bc, Periodic):
        n = grid.n_x
        if n < g:
            raise ValueError("periodic wrap needs n_x >= ghost_width")
        f[:g] = f[n : n + g]
        f[n + g :] = f[g : 2 * g]
    elif isinstance(bc, PrescribedMoments):
        rho, u, T = bc.left
        f[:g] = maxwellian(rho, u, T, grid.v)
        rho, u, T = bc.right
        f[g + grid.n_x :] = maxwellian(rho, u, T, grid.v)
    else:
        raise TypeError(f"unknown boundary condition {bc!r}")


def _fill_flux_ghosts(k: np.ndarray, grid: PhaseGrid, bc) -> None:
    # stage fluxes vanish in an equilibrium inflow region; wrap when periodic
    g = grid.ghost_width
    if g == 0:
        return
    if isinstance(bc, Periodic):
        n = grid.n_x
        k[:g] = k[n : n + g]
        k[n + g :] = k[g : 2 * g]
    else:
        k[:g] = 0.0
        k[g + grid.n_x :] = 0.0


def foot_point(x, v, dt_back):
    """Upstream position of the characteristic through x: x - v*dt_back."""
    return x - v * dt_back


def interpolate_field(field, grid: PhaseGrid, x_target: float, cfg: WenoConfig = WenoConfig()):
    """Value of a padded single-velocity field at an arbitrary position.

    Locates the containing cell on the padded grid and evaluates either the
    two-point linear interpolant (n = 1) or the third-order pointwise WENO
    interpolant (n = 2).  Raises CoverageError when the stencil would leave
    the padded grid, which means ghost_width was mis-sized.
    """
    field = np.asarray(field, dtype=float)
    g = grid.ghost_width
    pos = (x_target - grid.x_min) / grid.dx + g  # padded fractional index
    b = math.floor(pos)
    theta = pos - b
    lo, hi = (0, 1) if cfg.n == 1 else (-1, 2)
    if b + lo < 0 or b + hi >= field.shape[0]:
        raise CoverageError(f"target {x_target} outside interpolation coverage")
    if cfg.n == 1:
        return field[b] * (1.0 - theta) + field[b + 1] * theta
    return weno3_interpolate(field[b - 1], field[b], field[b + 1], field[b + 2], theta, eps=cfg.eps)


def shift_interpolate(field: np.ndarray, grid: PhaseGrid, dt_back: float, cfg: WenoConfig):
    """Interpolate a padded (space, velocity) array at the characteristic
    foot points x_i - v_j*dt_back of every interior node; returns the
    (n_x, n_velocity) interior block.

    On the uniform grid the fractional offset is shared by every node of a
    velocity column, so the whole pass reduces to a few gathers at
    per-column integer offsets plus the elementwise kernel.
    """
    n_x = grid.n_x
    g = grid.ghost_width
    t = -grid.v * dt_back / grid.dx
    m = np.floor(t).astype(int)
    theta = (t - m)[None, :]
    lo, hi = (0, 1) if cfg.n == 1 else (-1, 2)
    if (g + m.min() + lo) < 0 or (g + m.max() + n_x - 1 + hi) >= field.shape[0]:
        raise CoverageError(
            f"backtrack of {np.abs(t).max():.3f} cells exceeds ghost width {g}"
        )
    idx = (g + m)[None, :] + np.arange(n_x)[:, None]

    def gather(offset):
        return np.take_along_axis(field, idx + offset, axis=0)

    if cfg.n == 1:
        return gather(0) * (1.0 - theta) + gather(1) * theta
    return weno3_interpolate(gather(-1), gather(0), gather(1), gather(2), theta, eps=cfg.eps)


def advance_step(
    f: np.ndarray,
    grid: PhaseGrid,
    dt: float,
    tab: ButcherTableau,
    bc,
    tau_model,
    cfg: WenoConfig = WenoConfig(),
) -> np.ndarray:
    """One semi-Lagrangian DIRK step; returns a new padded array with ghosts
    filled.  The relaxation time is evaluated per node from the moments of
    each stage's explicit part."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    fill_ghosts(f, grid, bc)
    s = tab.stages
    interior = grid.interior
    fluxes = np.zeros((s,) + f.shape)
    for l in range(s):
        f_star = shift_interpolate(f, grid, tab.c[l] * dt, cfg)
        for k in range(l):
            if tab.a[l, k] != 0.0:
                f_star += tab.a[l, k] * shift_interpolate(fluxes[k], grid, (tab.c[l] - tab.c[k]) * dt, cfg)
        try:
            stage = relax_stage(f_star, tab.a[l, l] * dt, tau_model, grid)
        except UnphysicalState as exc:
            raise type(exc)(f"stage {l + 1}: {exc}") from exc
        fluxes[l, interior] = stage_flux(stage, f_star, tab.a[l, l])
        _fill_flux_ghosts(fluxes[l], grid, bc)
    new = shift_interpolate(f, grid, dt, cfg)
    for k in range(s):
        new += tab.w[k] * shift_interpolate(fluxes[k], grid, (1.0 - tab.c[k]) * dt, cfg)
    out = np.empty_like(f)
    out[interior] = new
    fill_ghosts(out, grid, bc)
    return out

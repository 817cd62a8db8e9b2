"""L-stable DIRK tableaux and the closed-form implicit relaxation stage.

Because the relaxation operator (M[f] - f)/tau has zero collision-invariant
moments, the moments of any implicit stage equal the moments of its explicit
part.  Each stage's Maxwellian is therefore known before the stage is
solved, and the stage equation

    F = f* + (a_ll*dt/tau) * (M[F] - F)

has the closed-form solution used in :func:`implicit_relax`.  No nonlinear
iteration appears anywhere, and the tau -> 0 limit is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phase_grid import PhaseGrid, fields_from_moments, maxwellian, moments

_ALPHA = 1.0 - math.sqrt(2.0) / 2.0
_GAMMA = 0.4358665215
# third-stage weight fixed by the order conditions w.c = 1/2, w.c^2 = 1/3
# at this gamma (closed form 3*g^2/2 - 5*g + 5/4)
_DELTA = 1.5 * _GAMMA * _GAMMA - 5.0 * _GAMMA + 1.25


@dataclass(frozen=True)
class ButcherTableau:
    """Lower-triangular DIRK tableau (A, c, w) with positive diagonal."""

    name: str
    a: np.ndarray
    c: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        c = np.asarray(self.c, dtype=float)
        w = np.asarray(self.w, dtype=float)
        s = a.shape[0]
        if a.shape != (s, s) or c.shape != (s,) or w.shape != (s,):
            raise ValueError("inconsistent tableau shapes")
        if np.any(np.triu(a, 1) != 0.0):
            raise ValueError("tableau is not lower triangular")
        if np.any(np.diag(a) <= 0.0):
            raise ValueError("diagonally implicit tableau needs a_ll > 0")
        if not np.allclose(a.sum(axis=1), c, rtol=0.0, atol=1e-13):
            raise ValueError("row sums must equal the abscissae")
        if abs(w.sum() - 1.0) > 1e-13:
            raise ValueError("weights must sum to one")
        for arr in (a, c, w):
            arr.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "w", w)

    @property
    def stages(self) -> int:
        return self.a.shape[0]


S1 = ButcherTableau("S1", a=np.array([[1.0]]), c=np.array([1.0]), w=np.array([1.0]))

S2 = ButcherTableau(
    "S2",
    a=np.array([[_ALPHA, 0.0], [1.0 - _ALPHA, _ALPHA]]),
    c=np.array([_ALPHA, 1.0]),
    w=np.array([1.0 - _ALPHA, _ALPHA]),
)

S3 = ButcherTableau(
    "S3",
    a=np.array(
        [
            [_GAMMA, 0.0, 0.0],
            [(1.0 - _GAMMA) / 2.0, _GAMMA, 0.0],
            [1.0 - _DELTA - _GAMMA, _DELTA, _GAMMA],
        ]
    ),
    c=np.array([_GAMMA, (1.0 + _GAMMA) / 2.0, 1.0]),
    w=np.array([1.0 - _DELTA - _GAMMA, _DELTA, _GAMMA]),
)

_TABLEAUX = {t.name: t for t in (S1, S2, S3)}


def tableau(name: str) -> ButcherTableau:
    try:
        return _TABLEAUX[name.upper()]
    except KeyError:
        raise ValueError(f"unknown tableau {name!r}; choose from {sorted(_TABLEAUX)}") from None


def implicit_relax(f_star, a_dt: float, tau, grid: PhaseGrid):
    """Solve one implicit relaxation stage in closed form.

    ``f_star`` holds the accumulated explicit part, shaped (..., n_velocity);
    ``a_dt`` is the effective step a_ll*dt >= 0; ``tau`` is scalar or shaped
    like the leading axes of ``f_star``.  Returns

        F = f* + a_dt/(tau + a_dt) * (M[f*] - f*)

    whose moments equal those of f* to round-off.  tau = inf disables the
    relaxation, tau -> 0 returns the Maxwellian (L-stable limit).
    """
    f_star = np.asarray(f_star, dtype=float)
    if a_dt < 0.0:
        raise ValueError("a_dt must be nonnegative")
    if a_dt == 0.0 or np.all(np.isinf(tau)):
        return f_star.copy()
    flds = fields_from_moments(*moments(f_star, grid))
    m = maxwellian(
        np.expand_dims(flds.rho, -1) if f_star.ndim > 1 else flds.rho,
        np.expand_dims(flds.u, -1) if f_star.ndim > 1 else flds.u,
        np.expand_dims(flds.T, -1) if f_star.ndim > 1 else flds.T,
        grid.v,
    )
    lam = a_dt / (np.asarray(tau, dtype=float) + a_dt)
    if f_star.ndim > 1:
        lam = np.expand_dims(np.broadcast_to(lam, f_star.shape[:-1]), -1)
    return f_star + lam * (m - f_star)


def relax_stage(f_star, a_dt: float, tau_model, grid: PhaseGrid):
    """Stage solve with the relaxation time taken from the moments of the
    explicit part.  An infinite constant tau disables the relaxation without
    touching the moments, so free-streaming states whose moment inversion
    would be degenerate still advance."""
    if getattr(tau_model, "tau", None) == math.inf:
        return f_star.copy()
    flds = fields_from_moments(*moments(f_star, grid))
    tau = tau_model(flds.rho, flds.T)
    return implicit_relax(f_star, a_dt, tau, grid)


def stage_flux(stage, f_star, a_ll: float):
    """Relaxation flux recovered from the solved stage: (F - f*)/a_ll.

    This equals dt/tau * (M[F] - F) without dividing by tau, so it stays
    finite as tau -> 0.
    """
    if not a_ll > 0.0:
        raise ValueError("a_ll must be positive")
    return (np.asarray(stage, dtype=float) - np.asarray(f_star, dtype=float)) / a_ll


def ode_relax_solve(f0, tau, dt: float, n_steps: int, tab: ButcherTableau, grid: PhaseGrid):
    """Advance the space-homogeneous relaxation df/dt = (M[f] - f)/tau.

    The moments are invariants of the homogeneous flow, so the exact
    solution is f(t) = M + (f0 - M) * exp(-t/tau); this driver exists to
    verify the tableau orders against that oracle.
    """
    f = np.asarray(f0, dtype=float).copy()
    for _ in range(n_steps):
        fluxes = []
        for l in range(tab.stages):
            f_star = f.copy()
            for k in range(l):
                if tab.a[l, k] != 0.0:
                    f_star += tab.a[l, k] * fluxes[k]
            stage = implicit_relax(f_star, tab.a[l, l] * dt, tau, grid)
            fluxes.append(stage_flux(stage, f_star, tab.a[l, l]))
        for k in range(tab.stages):
            f += tab.w[k] * fluxes[k]
    return f

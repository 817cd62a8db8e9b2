"""Phase-space discretization, quadrature moments, Maxwellian, relaxation-time models.

Units are nondimensional with gas constant R = 1 throughout, so the pressure
is p = rho*T and the total energy of a 1D (one translational degree of
freedom) gas is E = rho*u^2/2 + rho*T/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

R_GAS = 1.0


class UnphysicalState(ValueError):
    """Macroscopic state violates rho > 0 or T > 0."""


class NonPositiveDensity(UnphysicalState):
    pass


class NonPositiveTemperature(UnphysicalState):
    pass


class CoverageError(IndexError):
    """Interpolation stencil left the padded grid; ghost_width was mis-sized."""


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform grid in physical space and velocity.

    Space nodes are x_i = x_min + i*dx.  Non-periodic grids are node based
    and carry both endpoints, dx = (x_max - x_min)/(n_x - 1).  Periodic
    grids are half-open lattices, dx = (x_max - x_min)/n_x, so node n_x
    wraps onto node 0 and no value is stored twice.

    Velocity nodes are v_j = j*dv for j = -n_v..n_v with dv = v_bound/n_v;
    the grid is symmetric and always contains v = 0 exactly.

    ``ghost_width`` extra nodes pad each side of the space grid; it must
    cover the interpolation stencil radius plus the largest characteristic
    backtrack max_j |v_j| * dt / dx of the run.
    """

    x_min: float
    x_max: float
    n_x: int
    n_v: int
    v_bound: float
    ghost_width: int = 0
    periodic: bool = False

    def __post_init__(self):
        if self.n_x < 2:
            raise ValueError("need at least two space nodes")
        if self.n_v < 1 or self.v_bound <= 0:
            raise ValueError("velocity grid needs n_v >= 1 and v_bound > 0")
        if self.x_max <= self.x_min:
            raise ValueError("empty space interval")
        if self.ghost_width < 0:
            raise ValueError("ghost_width must be nonnegative")

    @property
    def dx(self) -> float:
        length = self.x_max - self.x_min
        return length / self.n_x if self.periodic else length / (self.n_x - 1)

    @property
    def dv(self) -> float:
        return self.v_bound / self.n_v

    @cached_property
    def v(self) -> np.ndarray:
        """Velocity nodes j*dv, j = -n_v..n_v (read-only)."""
        v = np.arange(-self.n_v, self.n_v + 1, dtype=float) * self.dv
        v.flags.writeable = False
        return v

    @property
    def n_velocity(self) -> int:
        return 2 * self.n_v + 1

    @property
    def n_padded(self) -> int:
        return self.n_x + 2 * self.ghost_width

    @property
    def interior(self) -> slice:
        return slice(self.ghost_width, self.ghost_width + self.n_x)

    @cached_property
    def x(self) -> np.ndarray:
        """Interior space nodes (read-only)."""
        x = self.x_min + np.arange(self.n_x, dtype=float) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def x_padded(self) -> np.ndarray:
        """Space nodes including ghosts (read-only)."""
        g = self.ghost_width
        x = self.x_min + np.arange(-g, self.n_x + g, dtype=float) * self.dx
        x.flags.writeable = False
        return x

    def allocate(self) -> np.ndarray:
        """Zero distribution array of the padded shape (space, velocity)."""
        return np.zeros((self.n_padded, self.n_velocity))


@dataclass(frozen=True)
class MacroFields:
    """Per-node macroscopic fields (rho, u, T, E) with p = rho*T."""

    rho: np.ndarray
    u: np.ndarray
    T: np.ndarray
    E: np.ndarray

    @property
    def p(self) -> np.ndarray:
        return self.rho * R_GAS * self.T


def maxwellian(rho, u, T, v):
    """Equilibrium distribution rho/sqrt(2 pi R T) * exp(-(v-u)^2 / (2 R T)).

    All arguments broadcast; raises on rho <= 0 or T <= 0.
    """
    rho = np.asarray(rho, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(rho <= 0.0):
        raise NonPositiveDensity(f"rho must be positive, got min {rho.min()}")
    if np.any(T <= 0.0):
        raise NonPositiveTemperature(f"T must be positive, got min {T.min()}")
    rt = R_GAS * T
    return rho / np.sqrt(2.0 * math.pi * rt) * np.exp(-((v - u) ** 2) / (2.0 * rt))


def moments(f, grid: PhaseGrid):
    """Discrete collision-invariant moments of f over the velocity grid.

    Plain summation quadrature: rho = dv*sum f, momentum = dv*sum v f,
    energy = dv/2 * sum v^2 f.  ``f`` may be a single velocity slice or any
    array whose last axis runs over velocity nodes.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != grid.n_velocity:
        raise ValueError(f"expected {grid.n_velocity} velocity nodes, got {f.shape[-1]}")
    v = grid.v
    rho = grid.dv * f.sum(axis=-1)
    mom = grid.dv * (f @ v)
    energy = 0.5 * grid.dv * (f @ (v * v))
    return rho, mom, energy


def fields_from_moments(rho, mom, energy) -> MacroFields:
    """Invert (rho, rho*u, E) to (rho, u, T, E); T = (2E/rho - u^2)/R.

    Raises NonPositiveDensity / NonPositiveTemperature with the offending
    node indices; such a state usually means dv or v_bound is too coarse.
    """
    rho = np.asarray(rho, dtype=float)
    mom = np.asarray(mom, dtype=float)
    energy = np.asarray(energy, dtype=float)
    bad = rho <= 0.0
    if np.any(bad):
        raise NonPositiveDensity(f"rho <= 0 at node(s) {np.flatnonzero(np.atleast_1d(bad))}")
    u = mom / rho
    T = (2.0 * energy / rho - u * u) / R_GAS
    bad = T <= 0.0
    if np.any(bad):
        raise NonPositiveTemperature(f"T <= 0 at node(s) {np.flatnonzero(np.atleast_1d(bad))}")
    return MacroFields(rho=rho, u=u, T=T, E=energy)


def macro_fields(f, grid: PhaseGrid) -> MacroFields:
    """Convenience: moments followed by the positivity-checked inversion."""
    return fields_from_moments(*moments(f, grid))


@dataclass(frozen=True)
class ConstantTau:
    """Constant relaxation time (constant collision frequency)."""

    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError("tau must be positive")

    def __call__(self, rho, T):
        return np.broadcast_to(self.tau, np.shape(rho)) if np.ndim(rho) else self.tau


@dataclass(frozen=True)
class PowerLawTau:
    """Viscosity-law relaxation time 1/tau = c * rho * T**(1 - delta).

    ``delta`` is stored raw: the value at which the temperature dependence
    vanishes depends on the viscosity-law convention in use, so callers pick
    the exponent themselves (delta = 1 kills the T factor here).
    """

    c: float
    delta: float

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError("prefactor c must be positive")

    def __call__(self, rho, T):
        return 1.0 / (self.c * rho * T ** (1.0 - self.delta))


def tau_eval(model, rho, T):
    """Evaluate a relaxation-time model on a positive (rho, T) state."""
    rho = np.asarray(rho, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(rho <= 0.0):
        raise NonPositiveDensity("tau_eval needs rho > 0")
    if np.any(T <= 0.0):
        raise NonPositiveTemperature("tau_eval needs T > 0")
    return model(rho, T)

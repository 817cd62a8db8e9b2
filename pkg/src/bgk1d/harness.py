"""Benchmark harness: experiment setup, run loop, diagnostics, and file I/O.

Two experiments are built in.  The smooth-flow case starts from a Maxwellian
with uniform density and temperature and a small two-bump velocity
perturbation

    u0(x) = (1/sigma) * (exp(-(sigma*x - 1)^2) - 2*exp(-(sigma*x + 3)^2)),

and is used for convergence, CFL-robustness, conservation-drift and entropy
studies.  The Riemann case starts from two Maxwellian half-states and probes
the shock-capturing behaviour against the exact gamma = 3 Euler solution.

``N_x`` in a :class:`SolverConfig` counts grid *intervals* on
[x_min, x_max]: runs with prescribed-moment boundaries carry N_x + 1 nodes
(both endpoints), periodic runs carry N_x lattice nodes.  With this
convention every N_x that divides a reference N_x gives a node set nested in
the reference node set, so error tables restrict by pure subsampling.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .cons_bgk import advance_step_conservative
from .dirk import tableau
from .phase_grid import ConstantTau, MacroFields, PhaseGrid, PowerLawTau, macro_fields, maxwellian, moments
from .sl_bgk import Periodic, PrescribedMoments, advance_step, fill_ghosts
from .weno import WenoConfig

LOG_FLOOR = 1.0e-300  # clamp for f before log f; clamped entries contribute ~0

SCHEMES = ("S1", "S2", "S3", "Conservative")


@dataclass(frozen=True)
class SolverConfig:
    """Flat run description; every field is a valid config-file key."""

    scheme: str = "S2"
    test: str = "test1"  # test1 | riemann
    N_x: int = 200
    N_v: int = 20
    v_bound: float = 10.0
    CFL: float = 4.5
    t_final: float = 0.04
    bc: str = "prescribed"  # prescribed | periodic
    tau_model: str = "constant"  # constant | powerlaw
    tau: float = 1.0e-2
    tau_c: float = 1.0
    tau_delta: float = 1.0
    x_min: float = -1.0
    x_max: float = 1.0
    sigma: float = 10.0
    rho_left: float = 1.0
    u_left: float = 0.0
    T_left: float = 1.0
    rho_right: float = 0.125
    u_right: float = 0.0
    T_right: float = 0.8
    x_split: float = 0.0
    interp: str = "weno3"  # weno3 | linear
    cons_flux: str = "swept"  # swept | pointwise
    weno_eps: float = 1.0e-6
    out_dir: str = ""

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.test not in ("test1", "riemann"):
            raise ValueError("test must be 'test1' or 'riemann'")
        if self.bc not in ("prescribed", "periodic"):
            raise ValueError("bc must be 'prescribed' or 'periodic'")
        if self.interp not in ("weno3", "linear"):
            raise ValueError("interp must be 'weno3' or 'linear'")
        if self.cons_flux not in ("swept", "pointwise"):
            raise ValueError("cons_flux must be 'swept' or 'pointwise'")
        if self.tau_model not in ("constant", "powerlaw"):
            raise ValueError("tau_model must be 'constant' or 'powerlaw'")
        if not (self.CFL > 0.0 and self.t_final >= 0.0):
            raise ValueError("need CFL > 0 and t_final >= 0")
        if self.N_x < 8:
            raise ValueError("N_x must be at least 8")
        for name in ("rho_left", "T_left", "rho_right", "T_right", "sigma"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


def riemann_defaults(**overrides) -> SolverConfig:
    """Config preset for the Riemann experiment (Sod-like data)."""
    base = dict(scheme="Conservative", test="riemann", N_x=300, N_v=60, t_final=0.25, tau=1.0e-6)
    base.update(overrides)
    return SolverConfig(**base)


@dataclass
class RunReport:
    """Everything a run produces besides raw files."""

    config: SolverConfig
    x: np.ndarray
    fields: MacroFields
    entropy_t: np.ndarray
    entropy_H: np.ndarray
    conservation: dict
    steps: int
    wall_time: float
    f_final: np.ndarray = field(repr=False, default=None)
    grid: PhaseGrid = None


def build_grid(config: SolverConfig) -> PhaseGrid:
    periodic = config.bc == "periodic"
    n_nodes = config.N_x if periodic else config.N_x + 1
    # WENO radius + worst characteristic backtrack; the conservative sweep
    # reaches one stencil radius past the farthest whole swept cell
    radius = 3 if config.scheme == "Conservative" else 2
    ghost = max(3, radius + math.ceil(config.CFL))
    return PhaseGrid(
        x_min=config.x_min,
        x_max=config.x_max,
        n_x=n_nodes,
        n_v=config.N_v,
        v_bound=config.v_bound,
        ghost_width=ghost,
        periodic=periodic,
    )


def build_tau_model(config: SolverConfig):
    if config.tau_model == "constant":
        return ConstantTau(config.tau)
    return PowerLawTau(c=config.tau_c, delta=config.tau_delta)


def velocity_bump(x, sigma: float):
    """Smooth two-bump velocity profile of the smooth-flow experiment."""
    x = np.asarray(x, dtype=float)
    return (np.exp(-((sigma * x - 1.0) ** 2)) - 2.0 * np.exp(-((sigma * x + 3.0) ** 2))) / sigma


def init_test1(sigma: float, grid: PhaseGrid) -> np.ndarray:
    """Maxwellian with rho = T = 1 and u = velocity_bump, on all padded nodes."""
    u0 = velocity_bump(grid.x_padded, sigma)
    return maxwellian(1.0, u0[:, None], 1.0, grid.v)


def init_riemann(left, right, x_split: float, grid: PhaseGrid) -> np.ndarray:
    """Piecewise Maxwellian: left state strictly left of x_split, right state
    elsewhere (node-based assignment)."""
    f = grid.allocate()
    mask = grid.x_padded < x_split
    rho, u, T = left
    f[mask] = maxwellian(rho, u, T, grid.v)
    rho, u, T = right
    f[~mask] = maxwellian(rho, u, T, grid.v)
    return f


def initial_condition(config: SolverConfig, grid: PhaseGrid) -> np.ndarray:
    if config.test == "test1":
        return init_test1(config.sigma, grid)
    left = (config.rho_left, config.u_left, config.T_left)
    right = (config.rho_right, config.u_right, config.T_right)
    return init_riemann(left, right, config.x_split, grid)


def boundary_condition(config: SolverConfig, grid: PhaseGrid):
    if config.bc == "periodic":
        return Periodic()
    if config.test == "test1":
        left = (1.0, float(velocity_bump(grid.x[0], config.sigma)), 1.0)
        right = (1.0, float(velocity_bump(grid.x[-1], config.sigma)), 1.0)
    else:
        left = (config.rho_left, config.u_left, config.T_left)
        right = (config.rho_right, config.u_right, config.T_right)
    return PrescribedMoments(left=left, right=right)


def _integrate_x(values: np.ndarray, grid: PhaseGrid) -> float:
    """Space integral of nodal values: plain sum on periodic lattices,
    composite fourth-order Newton-Cotes (Simpson, with a 3/8 tail when the
    interval count is odd) on node-based grids."""
    if grid.periodic:
        return grid.dx * float(values.sum())
    n_int = values.size - 1
    h = grid.dx
    if n_int < 3:
        return h * float(values.sum() - 0.5 * (values[0] + values[-1]))
    if n_int % 2 == 0:
        w = np.ones(values.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return h / 3.0 * float(w @ values)
    head = values.size - 4  # even interval count for Simpson, 3/8 on the last three
    w = np.ones(head + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    simpson = h / 3.0 * float(w @ values[: head + 1])
    tail = 3.0 * h / 8.0 * float(values[-4] + 3.0 * values[-3] + 3.0 * values[-2] + values[-1])
    return simpson + tail


def entropy(f: np.ndarray, grid: PhaseGrid) -> float:
    """Total kinetic entropy: space integral of dv * sum_j f log f.

    f is clamped at LOG_FLOOR so numerically zero (or slightly negative)
    tail entries contribute ~0 instead of -inf.
    """
    fc = np.maximum(f[grid.interior], LOG_FLOOR)
    per_node = grid.dv * np.sum(fc * np.log(fc), axis=1)
    return _integrate_x(per_node, grid)


def invariant_totals(f: np.ndarray, grid: PhaseGrid):
    """Total (mass, momentum, energy): dx*dv-weighted sums over the interior."""
    rho, mom, energy = moments(f[grid.interior], grid)
    return grid.dx * rho.sum(), grid.dx * mom.sum(), grid.dx * energy.sum()


def conservation_error(f_initial: np.ndarray, f_final: np.ndarray, grid: PhaseGrid) -> dict:
    """Relative drift of the three collision invariants between two states.

    The momentum drift is scaled by the total mass when the initial momentum
    (which may legitimately vanish) is smaller than that.
    """
    q0 = invariant_totals(f_initial, grid)
    q1 = invariant_totals(f_final, grid)
    names = ("mass", "momentum", "energy")
    out = {}
    for name, a, b in zip(names, q0, q1):
        scale = abs(a)
        if name == "momentum":
            scale = max(scale, abs(q0[0]))
        out[name] = abs(b - a) / scale
    return out


def step_size(config: SolverConfig, grid: PhaseGrid) -> float:
    return config.CFL * grid.dx / config.v_bound


def run(config: SolverConfig) -> RunReport:
    """Execute a configured run and optionally write its output files.

    Steps have size CFL*dx/v_bound with the last one clipped so t_final is
    hit exactly; the entropy series is recorded every step.
    """
    grid = build_grid(config)
    bc = boundary_condition(config, grid)
    tau_model = build_tau_model(config)
    cfg = WenoConfig(n=1 if config.interp == "linear" else 2, eps=config.weno_eps)
    f = initial_condition(config, grid)
    fill_ghosts(f, grid, bc)
    f0 = f.copy()

    dt = step_size(config, grid)
    n_steps = math.ceil(config.t_final / dt - 1e-12) if config.t_final > 0.0 else 0
    times = [0.0]
    entropies = [entropy(f, grid)]

    conservative = config.scheme == "Conservative"
    tab = None if conservative else tableau(config.scheme)

    start = time.perf_counter()
    t = 0.0
    for step in range(n_steps):
        # last step clipped so the final time is hit exactly
        t_next = config.t_final if step == n_steps - 1 else (step + 1) * dt
        dt_step = t_next - t
        try:
            if conservative:
                f = advance_step_conservative(
                    f, grid, dt_step, tau_model, bc, cfg, flux_mode=config.cons_flux
                )
            else:
                f = advance_step(f, grid, dt_step, tab, bc, tau_model, cfg)
        except Exception as exc:
            raise type(exc)(f"step {step + 1} (t = {t:.6g}): {exc}") from exc
        t = t_next
        times.append(t)
        entropies.append(entropy(f, grid))
    wall = time.perf_counter() - start
    assert n_steps == 0 or t == config.t_final, "final time missed"

    report = RunReport(
        config=config,
        x=grid.x.copy(),
        fields=macro_fields(f[grid.interior], grid),
        entropy_t=np.asarray(times),
        entropy_H=np.asarray(entropies),
        conservation=conservation_error(f0, f, grid),
        steps=n_steps,
        wall_time=wall,
        f_final=f,
        grid=grid,
    )
    if config.out_dir:
        write_outputs(report, Path(config.out_dir))
    return report


# ---------------------------------------------------------------------------
# error tables


def restrict(reference: RunReport, n_x: int) -> MacroFields:
    """Restrict a reference solution to the nodes of a coarser nested grid."""
    ref_nx = reference.config.N_x
    if ref_nx % n_x != 0:
        raise ValueError(f"grids not nested: {n_x} does not divide {ref_nx}")
    ratio = ref_nx // n_x
    sub = slice(None, None, ratio)
    flds = reference.fields
    return MacroFields(rho=flds.rho[sub], u=flds.u[sub], T=flds.T[sub], E=flds.E[sub])


def l2_relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


@dataclass
class ErrorTable:
    n_x: list
    errors: dict  # field name -> list of errors
    orders: dict  # field name -> list of orders (len - 1)


def error_table(runs, reference: RunReport) -> ErrorTable:
    """L2-relative errors of (rho, u, T) against a nested reference run, and
    the observed orders between successive resolutions."""
    runs = sorted(runs, key=lambda r: r.config.N_x)
    n_x = [r.config.N_x for r in runs]
    errors = {"rho": [], "u": [], "T": []}
    for r in runs:
        ref = restrict(reference, r.config.N_x)
        for name in errors:
            errors[name].append(l2_relative(getattr(r.fields, name), getattr(ref, name)))
    orders = {
        name: [math.log2(e[i - 1] / e[i]) for i in range(1, len(e))] for name, e in errors.items()
    }
    return ErrorTable(n_x=n_x, errors=errors, orders=orders)


# ---------------------------------------------------------------------------
# file I/O


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_fields_csv(report: RunReport, path: Path) -> bytes:
    flds = report.fields
    lines = ["x,rho,u,T,p"]
    for row in zip(report.x, flds.rho, flds.u, flds.T, flds.p):
        lines.append(",".join(_fmt(v) for v in row))
    data = ("\n".join(lines) + "\n").encode()
    path.write_bytes(data)
    return data


def write_entropy_csv(report: RunReport, path: Path) -> None:
    lines = ["t,H"]
    for t, h in zip(report.entropy_t, report.entropy_H):
        lines.append(f"{_fmt(t)},{_fmt(h)}")
    path.write_bytes(("\n".join(lines) + "\n").encode())


def write_errors_csv(table: ErrorTable, path: Path) -> None:
    lines = ["N_x,rho_err,u_err,T_err,rho_order,u_order,T_order"]
    for i, n in enumerate(table.n_x):
        row = [str(n)]
        row += [_fmt(table.errors[f][i]) for f in ("rho", "u", "T")]
        if i == 0:
            row += ["", "", ""]
        else:
            row += [_fmt(table.orders[f][i - 1]) for f in ("rho", "u", "T")]
        lines.append(",".join(row))
    path.write_bytes(("\n".join(lines) + "\n").encode())


def write_outputs(report: RunReport, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fields_bytes = write_fields_csv(report, out_dir / "fields.csv")
    write_entropy_csv(report, out_dir / "entropy.csv")
    meta = {
        "scheme": report.config.scheme,
        "CFL": report.config.CFL,
        "tau": report.config.tau if report.config.tau_model == "constant" else None,
        "tau_model": report.config.tau_model,
        "steps": report.steps,
        "wall_time_s": report.wall_time,
        "conservation": report.conservation,
        "fields_sha256": hashlib.sha256(fields_bytes).hexdigest(),
        "config": asdict(report.config),
    }
    (out_dir / "report.json").write_text(json.dumps(meta, indent=2) + "\n")


# ---------------------------------------------------------------------------
# reference-solution cache


def reference_key(config: SolverConfig) -> str:
    relevant = asdict(config)
    relevant.pop("out_dir")
    blob = json.dumps(relevant, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def reference_run(config: SolverConfig, cache_dir=None) -> RunReport:
    """Run (or load from cache) a configuration used as a reference solution.

    Cached fields are content-hashed; a mismatch between the stored hash and
    the stored arrays means the cache drifted and raises.
    """
    if cache_dir is None:
        return run(config)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"ref_{reference_key(config)}.npz"
    if path.exists():
        with np.load(path, allow_pickle=False) as data:
            arrays = {k: data[k] for k in ("x", "rho", "u", "T", "E")}
            stored = str(data["sha256"])
        digest = hashlib.sha256(b"".join(arrays[k].tobytes() for k in sorted(arrays))).hexdigest()
        if digest != stored:
            raise RuntimeError(f"reference cache {path} is corrupt (hash mismatch)")
        flds = MacroFields(rho=arrays["rho"], u=arrays["u"], T=arrays["T"], E=arrays["E"])
        return RunReport(
            config=config,
            x=arrays["x"],
            fields=flds,
            entropy_t=np.array([]),
            entropy_H=np.array([]),
            conservation={},
            steps=-1,
            wall_time=0.0,
        )
    report = run(config)
    arrays = {
        "x": report.x,
        "rho": report.fields.rho,
        "u": report.fields.u,
        "T": report.fields.T,
        "E": report.fields.E,
    }
    digest = hashlib.sha256(b"".join(arrays[k].tobytes() for k in sorted(arrays))).hexdigest()
    np.savez(path, sha256=digest, **arrays)
    return report


# ---------------------------------------------------------------------------
# config files


def parse_config_text(text: str) -> SolverConfig:
    """Parse flat ``key = value`` text; keys must be SolverConfig fields."""
    known = {f.name: f.type for f in fields(SolverConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in known:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, val)
    return SolverConfig(**values)


def load_config(path) -> SolverConfig:
    return parse_config_text(Path(path).read_text())


def _coerce(key: str, val: str):
    default = getattr(SolverConfig, key)
    if isinstance(default, bool):
        return val.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(val)
    if isinstance(default, float):
        return float(val)
    return val.strip("\"'")


def apply_overrides(config: SolverConfig, overrides) -> SolverConfig:
    """Apply ``key=value`` strings on top of a parsed config."""
    updates = {}
    for item in overrides:
        key, _, val = item.partition("=")
        key = key.strip()
        if not _is_field(key):
            raise ValueError(f"unknown config key {key!r}")
        updates[key] = _coerce(key, val.strip())
    return replace(config, **updates)


def _is_field(name: str) -> bool:
    return name in {f.name for f in fields(SolverConfig)}

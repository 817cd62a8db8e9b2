import math

import numpy as np
import pytest

from bgk1d.dirk import S1, S2, S3, implicit_relax, ode_relax_solve, relax_stage, stage_flux, tableau
from bgk1d.phase_grid import ConstantTau, PhaseGrid, fields_from_moments, macro_fields, maxwellian, moments

GRID = PhaseGrid(x_min=0.0, x_max=1.0, n_x=2, n_v=20, v_bound=10.0)


def bimodal():
    """A smooth non-Maxwellian state with well-resolved moments."""
    return maxwellian(1.0, 0.8, 0.9, GRID.v) + maxwellian(0.6, -1.1, 0.7, GRID.v)


# ---------------------------------------------------------------------------
# tableaux


@pytest.mark.parametrize("tab", [S1, S2, S3])
def test_tableau_consistency(tab):
    np.testing.assert_allclose(tab.a.sum(axis=1), tab.c, atol=1e-13)
    assert tab.w.sum() == pytest.approx(1.0, abs=1e-13)
    assert np.all(np.diag(tab.a) > 0.0)
    assert np.all(np.triu(tab.a, 1) == 0.0)


def test_s1_is_implicit_euler():
    assert S1.stages == 1
    assert S1.a[0, 0] == 1.0 and S1.c[0] == 1.0 and S1.w[0] == 1.0


def test_s2_order_conditions():
    assert S2.w @ S2.c == pytest.approx(0.5, abs=1e-14)
    assert S2.a[0, 0] == pytest.approx(1.0 - math.sqrt(2.0) / 2.0, rel=1e-15)


def test_s3_order_conditions():
    # gamma is stored to the printed ten digits, so the conditions hold to ~1e-11
    assert S3.w @ S3.c == pytest.approx(0.5, abs=1e-9)
    assert S3.w @ S3.c**2 == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert S3.a[0, 0] == pytest.approx(0.4358665215, rel=1e-12)


def test_tableau_lookup():
    assert tableau("s2") is S2
    with pytest.raises(ValueError):
        tableau("S4")


# ---------------------------------------------------------------------------
# implicit stage solve


def test_relax_identity_at_zero_step():
    f = bimodal()
    np.testing.assert_array_equal(implicit_relax(f, 0.0, 1e-2, GRID), f)


def test_relax_stiff_limit_returns_maxwellian():
    f = bimodal()
    flds = macro_fields(f, GRID)
    m = maxwellian(flds.rho, flds.u, flds.T, GRID.v)
    out = implicit_relax(f, 1e-2, 1e-12, GRID)
    np.testing.assert_allclose(out, m, rtol=1e-10, atol=1e-18)


def test_relax_maxwellian_fixed_point():
    f = maxwellian(1.0, 0.0, 1.0, GRID.v)
    out = implicit_relax(f, 0.5, 1e-3, GRID)
    np.testing.assert_allclose(out, f, rtol=1e-9, atol=1e-12)


def test_relax_conserves_moments():
    rng = np.random.default_rng(0)
    for _ in range(25):
        f = bimodal() * (1.0 + 0.3 * rng.random(GRID.n_velocity))
        a_dt = 10 ** rng.uniform(-4, 1)
        tau = 10 ** rng.uniform(-8, 1)
        out = implicit_relax(f, a_dt, tau, GRID)
        for q0, q1 in zip(moments(f, GRID), moments(out, GRID)):
            assert q1 == pytest.approx(q0, rel=1e-12, abs=1e-14)


def test_relax_l_stability_bound():
    f = bimodal()
    flds = macro_fields(f, GRID)
    m = maxwellian(flds.rho, flds.u, flds.T, GRID.v)
    for tau, a_dt in ((1e-6, 1e-2), (1e-3, 1e-2), (1e-2, 1e-2)):
        out = implicit_relax(f, a_dt, tau, GRID)
        bound = 2.0 * (tau / (tau + a_dt)) * np.max(np.abs(f - m))
        assert np.max(np.abs(out - m)) <= bound


def test_relax_infinite_tau_disables_relaxation():
    f = bimodal()
    np.testing.assert_array_equal(implicit_relax(f, 0.3, math.inf, GRID), f)
    np.testing.assert_array_equal(relax_stage(f, 0.3, ConstantTau(math.inf), GRID), f)


def test_relax_vectorized_over_nodes():
    f = np.stack([bimodal(), 2.0 * bimodal()])
    tau = np.array([1e-2, 1e-3])
    out = implicit_relax(f, 0.1, tau, GRID)
    np.testing.assert_allclose(out[0], implicit_relax(f[0], 0.1, 1e-2, GRID), rtol=1e-15)
    np.testing.assert_allclose(out[1], implicit_relax(f[1], 0.1, 1e-3, GRID), rtol=1e-15)


def test_relax_stage_uses_local_state_for_tau():
    f = bimodal()
    flds = fields_from_moments(*moments(f, GRID))
    want = implicit_relax(f, 0.05, 1e-2, GRID)
    got = relax_stage(f, 0.05, ConstantTau(1e-2), GRID)
    np.testing.assert_allclose(got, want, rtol=1e-15)
    assert flds.rho > 0  # sanity on the fixture


# ---------------------------------------------------------------------------
# stage flux recovery


def test_stage_flux_zero_at_equilibrium():
    f = bimodal()
    np.testing.assert_allclose(stage_flux(f, f, 0.7), 0.0)


def test_stage_flux_scaling():
    f = bimodal()
    np.testing.assert_allclose(stage_flux(f + 0.3, f, 1.0), 0.3)
    with pytest.raises(ValueError):
        stage_flux(f, f, 0.0)


def test_stage_flux_matches_direct_relaxation_form():
    # non-stiff cross-check: (F - f*)/a_ll equals dt/tau (M[F] - F)
    f = bimodal()
    tau, dt, a_ll = 1.0, 0.2, 0.5
    stage = implicit_relax(f, a_ll * dt, tau, GRID)
    flds = macro_fields(stage, GRID)
    m = maxwellian(flds.rho, flds.u, flds.T, GRID.v)
    np.testing.assert_allclose(stage_flux(stage, f, a_ll), dt / tau * (m - stage), rtol=1e-10, atol=1e-13)


# ---------------------------------------------------------------------------
# homogeneous relaxation driver


def test_ode_relax_fixed_point():
    flds = macro_fields(bimodal(), GRID)
    m = maxwellian(flds.rho, flds.u, flds.T, GRID.v)
    out = ode_relax_solve(m, 1.0, 0.1, 10, S2, GRID)
    np.testing.assert_allclose(out, m, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize(
    "tab,expected,tol",
    [(S1, 1.0, 0.1), (S2, 2.0, 0.2), (S3, 3.0, 0.25)],
)
def test_ode_relax_convergence_order(tab, expected, tol):
    f0 = bimodal()
    flds = macro_fields(f0, GRID)
    m = maxwellian(flds.rho, flds.u, flds.T, GRID.v)
    exact = m + (f0 - m) * math.exp(-1.0)
    errs = []
    for k in range(4):
        n = 8 * 2**k
        out = ode_relax_solve(f0, 1.0, 1.0 / n, n, tab, GRID)
        errs.append(np.max(np.abs(out - exact)))
    orders = [math.log2(errs[i - 1] / errs[i]) for i in range(1, len(errs))]
    assert orders[-1] == pytest.approx(expected, abs=tol)

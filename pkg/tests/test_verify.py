"""Residual checks: system, profile ODE (exact derivative), PDE finite
differences, and the per-case reports."""

import numpy as np
import pytest

from stochnls.field import PoleError, frame_for, screened_xi_grid
from stochnls.gkm import case_coefficients, make_coefficient_set, params_for_H
from stochnls.verify import (
    PdeResiduals,
    ode_residual,
    pde_residual_smooth,
    profile_second_derivative_expanded,
    set_report,
    system_residual,
    verification_report,
    _profile_values,
)


def constant_set(c: complex, H=None):
    return make_coefficient_set(1j, (c, 0, 0), (1, 0),
                                H=(-2 * c * c if H is None else H))


def zero_set():
    return make_coefficient_set(1j, (0, 0, 0), (1, 0), H=1.0)


# -- system level ----------------------------------------------------------------


def test_system_residual_case1():
    cs = case_coefficients(1, 1.0)
    assert system_residual(cs, 1.0) <= 1e-10


def test_system_residual_trivial_solution_zero():
    assert system_residual(zero_set(), 1.0) == 0.0


def test_system_residual_flagged_case_recorded():
    cs = case_coefficients(8, 1.0, B0=1.0, B1=2.0, k=1.0)
    r = system_residual(cs, 1.0)
    assert r > 0  # recorded magnitude, nothing asserted beyond positivity


# -- ODE level --------------------------------------------------------------------


def test_ode_residual_case2_small_on_screened_grid():
    cs = case_coefficients(2, 1.0)
    grid = screened_xi_grid(cs, -2.0, 2.0, 41)
    assert ode_residual(cs, 1.0, grid) <= 1e-9


def test_ode_residual_zero_profile():
    grid = np.linspace(-2, 2, 11)
    assert ode_residual(zero_set(), 1.0, grid) == 0.0


def test_ode_residual_constant_branch():
    """u = a with H = -2 a^2 solves 2 a^3 + H a = 0 identically."""
    a = 0.8
    cs = constant_set(a)
    grid = np.linspace(-2, 2, 11)
    assert ode_residual(cs, -2 * a * a, grid) <= 1e-12


def test_structured_and_expanded_second_derivative_agree():
    """Cross-route: stable structured assembly vs expanded symbolic form."""
    cs = case_coefficients(4, 1.3)
    for xi in (-1.7, -0.4, 0.6, 1.9):
        _, upp = _profile_values(cs, 1.0, xi)
        expanded = profile_second_derivative_expanded(cs, 1.0, xi)
        assert upp == pytest.approx(expanded, rel=1e-9, abs=1e-12)


def test_ode_residual_detects_perturbed_coefficients():
    cs = case_coefficients(2, 1.0)
    bad = make_coefficient_set(cs.k, tuple(a * (1 + 1e-3) for a in cs.A),
                               cs.B, H=1.0)
    grid = screened_xi_grid(bad, -2.0, 2.0, 41)
    assert ode_residual(bad, 1.0, grid) > 1e-4


def test_ode_residual_modulus_convention_differs_on_real_xi():
    """On the real xi line the profile is imaginary, so the two cubic
    conventions genuinely disagree; both are reported upstream."""
    cs = case_coefficients(2, 1.0)
    grid = screened_xi_grid(cs, -2.0, 2.0, 41)
    assert ode_residual(cs, 1.0, grid, nonlinearity="modulus") > 1.0


def test_ode_residual_all_pole_grid_raises():
    cs = case_coefficients(2, 1.0)
    with pytest.raises(PoleError):
        ode_residual(cs, 1.0, np.array([0.0]))  # single point on the pole


# -- PDE level ---------------------------------------------------------------------


CASE2_XS = np.linspace(0.2, 0.26, 5)
CASE2_TS = np.linspace(0.01, 0.03, 5)


def make_case2(sigma: float):
    cs = case_coefficients(2, 1.0)
    params = params_for_H(1.0, alpha=1.0, rho=0.25, sigma=sigma)
    return cs, params, frame_for(cs, params)


def test_pde_residual_smooth_noise_free():
    cs, params, frame = make_case2(0.0)
    res = pde_residual_smooth(cs, params, frame, 1.3, CASE2_XS, CASE2_TS, 1e-4)
    assert isinstance(res, PdeResiduals)
    assert res.modulus <= 1e-4 and res.cubic <= 1e-4
    assert res.points_used == 25


def test_pde_residual_smooth_noise_absorbed():
    """sigma psi L_t cancels exactly for the smooth surrogate path."""
    cs, params, frame = make_case2(0.7)
    res = pde_residual_smooth(cs, params, frame, 1.3, CASE2_XS, CASE2_TS, 1e-4)
    assert res.modulus <= 1e-4 and res.cubic <= 1e-4


def test_pde_residual_second_order_in_h():
    cs, params, frame = make_case2(0.0)
    r1 = pde_residual_smooth(cs, params, frame, 1.3, CASE2_XS, CASE2_TS, 1e-4)
    r2 = pde_residual_smooth(cs, params, frame, 1.3, CASE2_XS, CASE2_TS, 5e-5)
    assert 3.5 <= r1.modulus / r2.modulus <= 4.5


def test_pde_residual_zero_field():
    cs = zero_set()
    params = params_for_H(1.0, alpha=1.0, rho=0.25, sigma=0.0)
    frame = frame_for(cs, params)
    res = pde_residual_smooth(cs, params, frame, 0.0, CASE2_XS, CASE2_TS, 1e-4)
    assert res.modulus == 0.0 and res.cubic == 0.0


def test_pde_residual_rejects_tiny_step():
    cs, params, frame = make_case2(0.0)
    with pytest.raises(ValueError):
        pde_residual_smooth(cs, params, frame, 0.0, CASE2_XS, CASE2_TS, 1e-8)


# -- reports -----------------------------------------------------------------------


def test_verification_report_case2_passes():
    report = verification_report(2, 1.0)
    assert report["passed"] is True
    assert report["system_residual"] <= 1e-10
    assert report["ode_residual_u3"] <= 1e-9
    assert report["ode_residual_mod"] > 1.0
    assert "nonlinearity-convention-divergent" in report["flags"]
    assert report["pde_residual"] is not None


def test_verification_report_flagged_case():
    report = verification_report(8, 1.0, B1=2.0)
    assert "flagged-case" in report["flags"]
    assert report["passed"] is None  # reported, never asserted
    assert report["system_residual"] > 0


def test_verification_report_schema():
    report = verification_report(3, 2.0, B0=2 - 1j)
    assert set(report) == {"case", "H", "system_residual", "ode_residual_u3",
                           "ode_residual_mod", "pde_residual", "flags",
                           "passed"}


def test_set_report_for_solver_output():
    from stochnls.gkm import solve_system
    roots = solve_system(1.0, seeds=40, rng_seed=7)
    report = set_report(roots[0], 1.0)
    assert report["passed"] is True

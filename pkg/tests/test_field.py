"""Field evaluator: profile values, phase composition, grids, pole handling,
and agreement with the independent closed-form transcriptions."""

import io
import json

import numpy as np
import pytest

from stochnls.closed_forms import CLOSED_FORMS
from stochnls.field import (
    FieldGrid,
    PoleError,
    WaveFrame,
    eval_psi,
    eval_u,
    field_grid,
    frame_for,
    pole_locations_real_xi,
    riccati_profile,
    screened_xi_grid,
    write_field_csv,
    write_provenance_json,
)
from stochnls.gkm import (
    case_coefficients,
    make_coefficient_set,
    params_for_H,
)
from stochnls.levy import LevySpec, evaluate as levy_eval, sample_path


def constant_set(c: complex):
    return make_coefficient_set(1j, (c, 0, 0), (1, 0), H=-2 * c * c)


def test_constant_ratio_everywhere():
    cs = constant_set(0.8)
    for xi in (-3.0, 0.0, 1.0 + 2.0j, 5.0):
        assert eval_u(cs, 1.0, xi) == pytest.approx(0.8)


def test_riccati_profile_basic_and_overflow():
    assert riccati_profile(0.0) == pytest.approx(0.5)
    assert riccati_profile(800.0) == pytest.approx(0.0, abs=1e-300)
    assert riccati_profile(-800.0) == pytest.approx(1.0)
    with pytest.raises(PoleError):
        riccati_profile(1j * np.pi)  # 1 + e^{i pi} = 0


def test_case1_pole_at_origin():
    """Psi(0) = 1/2 makes the 1 - 2 Psi denominator vanish."""
    cs = case_coefficients(1, 1.0)
    with pytest.raises(PoleError):
        eval_u(cs, 1.0, 0.0)


def test_closed_form_agreement_cases_1_to_7():
    """Dual routes: coefficient-driven evaluator vs direct transcription,
    5x5 off-pole grid, 1e-12."""
    H, B0, A_const = 1.0, 1.0, 1.0
    params = params_for_H(H, alpha=0.4, rho=0.1, sigma=0.0)
    xs = np.linspace(0.31, 1.27, 5)
    ts = np.linspace(0.05, 0.33, 5)
    for case, transcription in CLOSED_FORMS.items():
        cs = case_coefficients(case, H, B0=B0)
        frame = frame_for(cs, params, A_const=A_const)
        for t in ts:
            for x in xs:
                lhs = eval_psi(cs, params, frame, None, x, t)
                rhs = transcription(x, t, H, B0, A_const, params.alpha,
                                    params.upsilon, 0.0, 0.0)
                assert abs(lhs - rhs) <= 1e-12, (case, x, t)


def test_modulus_independent_of_noise():
    """|psi| identical across sigma values and path seeds (phase noise)."""
    H = 1.0
    cs = case_coefficients(2, H)
    spec = LevySpec(drift=0.2, diffusion=1.0, jump_rate=2.0, horizon=1.0)
    base_params = params_for_H(H, alpha=0.4, rho=0.1, sigma=0.0)
    base_frame = frame_for(cs, base_params)
    x, t = 0.37, 0.21
    reference = abs(eval_psi(cs, base_params, base_frame, None, x, t))
    for sigma in (0.5, 2.0):
        params = params_for_H(H, alpha=0.4, rho=0.1, sigma=sigma)
        frame = frame_for(cs, params)
        for seed in (1, 2):
            path = sample_path(spec, 0.01, seed)
            val = eval_psi(cs, params, frame, path, x, t)
            assert abs(abs(val) - reference) <= 1e-13


def test_phase_difference_between_two_paths():
    """arg psi_1 - arg psi_2 = sigma (L_1(t) - L_2(t)) pointwise."""
    H, sigma = 1.0, 0.7
    cs = case_coefficients(2, H)
    params = params_for_H(H, alpha=0.4, rho=0.1, sigma=sigma)
    frame = frame_for(cs, params)
    spec = LevySpec(drift=0.0, diffusion=1.0, jump_rate=1.0, horizon=1.0)
    p1, p2 = sample_path(spec, 0.01, 1), sample_path(spec, 0.01, 2)
    x, t = 0.37, 0.21
    z1 = eval_psi(cs, params, frame, p1, x, t)
    z2 = eval_psi(cs, params, frame, p2, x, t)
    expected = sigma * (levy_eval(p1, t) - levy_eval(p2, t))
    got = np.angle(z1 / z2)
    assert abs((got - expected + np.pi) % (2 * np.pi) - np.pi) <= 1e-10


def test_gauge_scaling_leaves_profile_unchanged():
    cs = case_coefficients(2, 1.0)
    c = 0.3 - 1.7j
    scaled = make_coefficient_set(cs.k, tuple(c * a for a in cs.A),
                                  tuple(c * b for b in cs.B), H=1.0)
    for xi in (-1.3, 0.4, 2.0):
        assert eval_u(cs, 1.0, xi) == pytest.approx(eval_u(scaled, 1.0, xi),
                                                    rel=1e-12)


def test_frame_params_consistency_enforced():
    cs = case_coefficients(2, 1.0)
    params = params_for_H(1.0, alpha=0.4, rho=0.1)
    frame = WaveFrame(k=cs.k, alpha=0.9, upsilon=params.upsilon,
                      sigma=0.0)
    with pytest.raises(ValueError):
        eval_psi(cs, params, frame, None, 0.1, 0.1)
    with pytest.raises(ValueError):
        eval_psi(cs, params, frame_for(cs, params_for_H(1.0, alpha=0.4,
                                                        rho=0.1, sigma=1.0)),
                 None, 0.1, 0.1)  # sigma != 0 without a path


# -- grids ----------------------------------------------------------------------


def test_constant_grid_equal_modulus():
    cs = constant_set(0.8)
    params = params_for_H(-2 * 0.64, alpha=0.0, rho=0.0, sigma=0.0)
    frame = frame_for(cs, params)
    grid = field_grid(cs, params, frame, None, (0.0, 1.0), (0.0, 1.0), 2, 2)
    assert grid.samples.shape == (2, 2)
    assert np.allclose(np.abs(grid.samples), 0.8)
    assert not grid.nav_mask.any()


def test_grid_straddling_pole_gets_nav_marker():
    """Case 2 with alpha = 0 has a profile pole at x = 0."""
    cs = case_coefficients(2, 1.0)
    params = params_for_H(1.0, alpha=0.0, rho=0.0, sigma=0.0)
    frame = frame_for(cs, params)
    grid = field_grid(cs, params, frame, None, (-1.0, 1.0), (0.0, 1.0), 3, 2)
    assert grid.nav_mask[:, 1].all()  # x = 0 column is the pole
    assert not grid.nav_mask[:, 0].any()


def test_grid_modulus_invariance_cellwise():
    H = 1.0
    cs = case_coefficients(2, H)
    p0 = params_for_H(H, alpha=0.4, rho=0.1, sigma=0.0)
    p1 = params_for_H(H, alpha=0.4, rho=0.1, sigma=0.5)
    path = sample_path(LevySpec(diffusion=1.0, horizon=1.0), 0.01, 5)
    g0 = field_grid(cs, p0, frame_for(cs, p0), None, (0.2, 1.2), (0.0, 0.9),
                    6, 4)
    g1 = field_grid(cs, p1, frame_for(cs, p1), path, (0.2, 1.2), (0.0, 0.9),
                    6, 4)
    assert np.array_equal(g0.nav_mask, g1.nav_mask)
    ok = ~g0.nav_mask
    assert np.max(np.abs(np.abs(g0.samples[ok]) - np.abs(g1.samples[ok]))) \
        <= 1e-13


def test_field_csv_and_provenance(tmp_path):
    cs = case_coefficients(2, 1.0)
    params = params_for_H(1.0, alpha=0.0, rho=0.0, sigma=0.0)
    frame = frame_for(cs, params)
    grid = field_grid(cs, params, frame, None, (-1.0, 1.0), (0.0, 1.0), 3, 2,
                      provenance_label="case-2")
    buf = io.StringIO()
    write_field_csv(grid, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "t,x,re,im,abs"
    assert "NAV,NAV,NAV" in text
    sidecar = tmp_path / "grid.json"
    write_provenance_json(grid, str(sidecar))
    meta = json.loads(sidecar.read_text())
    assert meta["label"] == "case-2" and meta["path_seed"] is None


def test_grid_size_validation():
    cs = constant_set(1.0)
    params = params_for_H(-2.0, alpha=0.0, rho=0.0, sigma=0.0)
    frame = frame_for(cs, params)
    with pytest.raises(ValueError):
        field_grid(cs, params, frame, None, (0, 1), (0, 1), 1, 4)


# -- pole bookkeeping -----------------------------------------------------------


def test_pole_locator_finds_origin_pole():
    cs = case_coefficients(2, 1.0)
    poles = pole_locations_real_xi(cs, 1.0, -2.0, 2.0)
    assert poles == pytest.approx([0.0], abs=1e-12)


def test_pole_locator_respects_A_const():
    cs = case_coefficients(2, 1.0)
    # 1 - 2 Psi = 0 at A e^xi = 1, i.e. xi = -log(A)
    poles = pole_locations_real_xi(cs, 2.0, -2.0, 2.0)
    assert poles == pytest.approx([-np.log(2.0)], abs=1e-12)


def test_screened_grid_drops_pole_neighborhood():
    cs = case_coefficients(2, 1.0)
    grid = screened_xi_grid(cs, -2.0, 2.0, 41, min_dist=0.05)
    assert len(grid) == 40  # the xi = 0 node is gone
    assert np.min(np.abs(grid)) >= 0.05

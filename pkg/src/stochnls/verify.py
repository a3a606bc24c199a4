"""Independent residual checks at three levels.

  * system_residual: the coefficient set against the generated algebraic
    system (exact symbolic equations, numeric substitution).
  * ode_residual: the profile u(xi) against -k**2 u'' + 2 u**3 + H u = 0,
    with u'' taken from the exact rational second derivative, never from
    finite differences.
  * pde_residual_smooth: the full field psi(x, t) against the wave equation
    by central finite differences, along the smooth surrogate noise path
    L(t) = c*t (a rough path has no pointwise derivative, so the PDE-level
    statement only makes sense for smooth L; the system- and ODE-level
    checks carry the burden for genuine noise).

The cubic nonlinearity is convention-sensitive: the wave equation carries
2*|psi|**2*psi while the reduction to the profile equation uses 2*u**3.
The two coincide exactly where u is real (which happens on real (x, t)
grids for the determinate catalog cases, whose xi is imaginary) and differ
elsewhere, so both residuals are always computed and reported side by side.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gkm
from .field import PoleError, WaveFrame, frame_for, riccati_profile, screened_xi_grid
from .gkm import (
    AnsatzShape,
    CoefficientSet,
    FLAGGED_CASES,
    ModelParams,
    case_coefficients,
)
from .psi_algebra import PsiRational, rat_second_derivative, sym_a, sym_b


def system_residual(cs: CoefficientSet, H: complex) -> float:
    """Max modulus of the generated system equations at this set."""
    return max(abs(v) for v in gkm.system_residual_values(cs, H))


@lru_cache(maxsize=None)
def _second_derivative_form(shape: AnsatzShape):
    T, V = gkm.ansatz_polynomials(shape)
    return rat_second_derivative(PsiRational(T, V))


def _horner(coeffs, psi: complex) -> complex:
    out = 0j
    for c in reversed(coeffs):
        out = out * psi + c
    return out


def _profile_values(cs: CoefficientSet, A_const: complex, xi: complex
                    ) -> tuple[complex, complex]:
    """(u, u'') at one point, u'' from the exact rational second derivative.

    The derivative is assembled in its structured (unexpanded) form

        [(P2-P)(2P-1)(T'V - TV')V + (P2-P)^2 (T''V^2 - TV''V - 2T'V'V
         + 2TV'^2)] / V^3,   P = Psi(xi),

    which is algebraically identical to the expanded psi_algebra form (the
    test suite checks this) but loses far fewer digits near poles.
    """
    psi = riccati_profile(complex(xi), complex(A_const))
    A, B = cs.A, cs.B
    dA = [i * a for i, a in enumerate(A)][1:]
    ddA = [i * a for i, a in enumerate(dA)][1:]
    dB = [j * b for j, b in enumerate(B)][1:]
    ddB = [j * b for j, b in enumerate(dB)][1:]
    T, V = _horner(A, psi), _horner(B, psi)
    dT, dV = _horner(dA, psi), _horner(dB, psi)
    ddT, ddV = _horner(ddA, psi), _horner(ddB, psi)
    if abs(V) < 1e-12:
        raise PoleError(f"profile pole at xi={xi}")
    u = T / V
    shift = psi * psi - psi
    upp = (shift * (2.0 * psi - 1.0) * (dT * V - T * dV) * V
           + shift * shift * (ddT * V * V - T * ddV * V - 2.0 * dT * dV * V
                              + 2.0 * T * dV * dV)) / V**3
    return u, upp


def profile_second_derivative_expanded(cs: CoefficientSet, A_const: complex,
                                       xi: complex) -> complex:
    """u'' evaluated through the expanded symbolic rational form.

    Exists as the cross-route for _profile_values; prefer that one for
    numerics near poles.
    """
    d2 = _second_derivative_form(cs.shape)
    psi = riccati_profile(complex(xi), complex(A_const))
    values = {sym_a(i): complex(a) for i, a in enumerate(cs.A)}
    values.update({sym_b(j): complex(b) for j, b in enumerate(cs.B)})
    return (d2.numerator.evaluate(psi, values)
            / d2.denominator.evaluate(psi, values))


def ode_residual(cs: CoefficientSet, H: complex, xi_grid,
                 A_const: complex = 1.0, nonlinearity: str = "cubic") -> float:
    """Max modulus of -k**2 u'' + 2 g(u) + H u over the grid.

    g(u) is u**3 for the "cubic" convention and |u|**2 u for "modulus".
    The grid must avoid poles (use field.screened_xi_grid); a grid that is
    entirely pole-adjacent raises PoleError.
    """
    if nonlinearity not in ("cubic", "modulus"):
        raise ValueError("nonlinearity must be 'cubic' or 'modulus'")
    worst = 0.0
    evaluated = 0
    k2 = complex(cs.k) ** 2
    for xi in np.atleast_1d(np.asarray(xi_grid, dtype=complex)):
        try:
            u, upp = _profile_values(cs, A_const, complex(xi))
        except PoleError:
            continue
        evaluated += 1
        cube = u**3 if nonlinearity == "cubic" else (abs(u) ** 2) * u
        worst = max(worst, abs(-k2 * upp + 2.0 * cube + complex(H) * u))
    if evaluated == 0:
        raise PoleError("every grid point hit a pole")
    return worst


@dataclass(frozen=True)
class PdeResiduals:
    """Finite-difference residuals of the wave equation, both conventions."""

    modulus: float  # nonlinearity 2*|psi|^2*psi, the equation as written
    cubic: float    # nonlinearity 2*exp(-2i theta)*psi^3, the reduced form
    points_used: int


def pde_residual_smooth(cs: CoefficientSet, params: ModelParams,
                        frame: WaveFrame, drift: float, x_points, t_points,
                        h: float) -> PdeResiduals:
    """Central-difference residual of i*psi_t - psi_xx + 2*g(psi)
    - 2*rho**2*psi + sigma*psi*L_t along the smooth path L(t) = drift*t.

    Second-order stencils in both x and t; h below 1e-7 would be dominated
    by cancellation and is rejected.  Pole-adjacent grid points (any stencil
    evaluation within the pole guard) are skipped; the max runs over the
    surviving points.
    """
    if h < 1e-7:
        raise ValueError("step size below the cancellation floor 1e-7")

    def psi_at(x: float, t: float) -> complex:
        u_xi = frame.xi(x, t)
        psi = riccati_profile(u_xi, frame.A_const)
        num = 0j
        for a in reversed(cs.A):
            num = num * psi + a
        den = 0j
        for b in reversed(cs.B):
            den = den * psi + b
        if abs(den) < 1e-9:
            raise PoleError(f"pole near x={x}, t={t}")
        theta = frame.theta(x, t, drift * t)
        return cmath.exp(1j * theta) * (num / den)

    worst_mod = 0.0
    worst_cub = 0.0
    used = 0
    sigma = frame.sigma
    rho2 = params.rho**2
    for t in np.atleast_1d(np.asarray(t_points, dtype=float)):
        for x in np.atleast_1d(np.asarray(x_points, dtype=float)):
            try:
                c0 = psi_at(x, t)
                xp, xm = psi_at(x + h, t), psi_at(x - h, t)
                tp, tm = psi_at(x, t + h), psi_at(x, t - h)
            except PoleError:
                continue
            used += 1
            psi_t = (tp - tm) / (2.0 * h)
            psi_xx = (xp - 2.0 * c0 + xm) / (h * h)
            linear = (1j * psi_t - psi_xx - 2.0 * rho2 * c0
                      + sigma * c0 * drift)
            res_mod = linear + 2.0 * (abs(c0) ** 2) * c0
            theta = frame.theta(x, t, drift * t)
            res_cub = linear + 2.0 * cmath.exp(-2j * theta) * c0**3
            worst_mod = max(worst_mod, abs(res_mod))
            worst_cub = max(worst_cub, abs(res_cub))
    if used == 0:
        raise PoleError("every grid point hit a pole")
    return PdeResiduals(modulus=worst_mod, cubic=worst_cub, points_used=used)


# ---------------------------------------------------------------------------
# Per-case verification reports
# ---------------------------------------------------------------------------

SYSTEM_BOUND = 1e-10
ODE_BOUND = 1e-9


def verification_report(case_id: int, H: complex, B0: complex = 1.0,
                        B1: complex | None = None, k: complex | None = None,
                        A_const: complex = 1.0,
                        xi_window: tuple[float, float] = (-2.0, 2.0),
                        xi_points: int = 41) -> dict:
    """Verify one catalog case; flagged cases report, never assert.

    Returns a JSON-shaped report {case, H, system_residual, ode_residual_u3,
    ode_residual_mod, pde_residual, flags, passed}.  For determinate cases
    (1-7) "passed" records the asserted bounds system <= 1e-10 and
    ode (cubic convention) <= 1e-9 on the screened grid.
    """
    cs = case_coefficients(case_id, H, B0=B0, B1=B1, k=k)
    flags: list[str] = []
    if case_id in FLAGGED_CASES:
        flags.append("flagged-case")

    sys_res = system_residual(cs, H)
    grid = screened_xi_grid(cs, xi_window[0], xi_window[1], xi_points,
                            A_const=A_const)
    ode_u3 = ode_residual(cs, H, grid, A_const=A_const, nonlinearity="cubic")
    ode_mod = ode_residual(cs, H, grid, A_const=A_const, nonlinearity="modulus")
    if abs(ode_u3 - ode_mod) > 1e3 * max(ode_u3, 1e-300):
        flags.append("nonlinearity-convention-divergent")

    pde_res = None
    if complex(H).imag == 0 and complex(H).real > 0 and case_id not in FLAGGED_CASES:
        params = gkm.params_for_H(complex(H).real, alpha=1.0, rho=0.25, sigma=0.0)
        frame = frame_for(cs, params, A_const=A_const)
        try:
            res = pde_residual_smooth(cs, params, frame, drift=0.0,
                                      x_points=np.linspace(0.2, 0.26, 5),
                                      t_points=np.linspace(0.01, 0.03, 5),
                                      h=1e-4)
            pde_res = res.modulus
        except PoleError:
            flags.append("pde-grid-on-pole")
    else:
        flags.append("pde-skipped")

    passed = None
    if case_id not in FLAGGED_CASES:
        passed = bool(sys_res <= SYSTEM_BOUND and ode_u3 <= ODE_BOUND)

    return {
        "case": case_id,
        "H": [complex(H).real, complex(H).imag],
        "system_residual": sys_res,
        "ode_residual_u3": ode_u3,
        "ode_residual_mod": ode_mod,
        "pde_residual": pde_res,
        "flags": flags,
        "passed": passed,
    }


def set_report(cs: CoefficientSet, H: complex, A_const: complex = 1.0,
               xi_window: tuple[float, float] = (-2.0, 2.0),
               xi_points: int = 41) -> dict:
    """Verification report for an arbitrary coefficient set (solver output)."""
    sys_res = system_residual(cs, H)
    grid = screened_xi_grid(cs, xi_window[0], xi_window[1], xi_points,
                            A_const=A_const)
    ode_u3 = ode_residual(cs, H, grid, A_const=A_const, nonlinearity="cubic")
    ode_mod = ode_residual(cs, H, grid, A_const=A_const, nonlinearity="modulus")
    return {
        "case": cs.family_tag,
        "H": [complex(H).real, complex(H).imag],
        "system_residual": sys_res,
        "ode_residual_u3": ode_u3,
        "ode_residual_mod": ode_mod,
        "pde_residual": None,
        "flags": ["solved-set"],
        "passed": bool(sys_res <= SYSTEM_BOUND and ode_u3 <= ODE_BOUND),
    }

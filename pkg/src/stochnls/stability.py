"""Momentum diagnostic Q and the solitary-wave stability criterion dQ/dlambda.

Q = (1/2) * integral over [a, b] of kappa-weighted g(u(xi)) d xi, where g
is |u|**2 (the conventional momentum of a complex field, default) or the
literal square u**2.  Real-axis poles of the profile are excised with
symmetric epsilon-neighborhoods and reported; each remaining panel is
integrated by adaptive composite Gauss-Legendre quadrature.

The stability criterion reads dQ/dlambda > 0, with lambda one of the model
parameters (the frequency upsilon by default).  Since every catalog
coefficient depends on the parameters only through H, a family is a map
lambda -> CoefficientSet rebuilt at the perturbed H; the derivative is a
central finite difference with a Richardson consistency check at half the
step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .field import PoleError, WaveFrame, eval_u, pole_locations_real_xi
from .gkm import CoefficientSet, ModelParams, case_coefficients

LAMBDA_TARGETS = ("alpha", "upsilon", "rho", "sigma", "H")
CONVENTIONS = ("modulus_squared", "literal_square")


class UnreliableQuadratureError(ArithmeticError):
    """More than 10 percent of the interval had to be excised."""


class StepSizeError(ArithmeticError):
    """Richardson check failed: the finite-difference step is unreliable."""


@dataclass(frozen=True)
class StabilityConfig:
    interval: tuple[float, float] = (-10.0, 10.0)
    quadrature_points: int = 64
    kappa: complex = 1.0
    lambda_target: str = "upsilon"
    fd_step: float = 1e-4
    integrand_convention: str = "modulus_squared"
    pole_epsilon: float = 1e-3

    def __post_init__(self):
        if self.interval[0] >= self.interval[1]:
            raise ValueError("interval must satisfy a < b")
        if self.quadrature_points < 64:
            raise ValueError("need at least 64 quadrature points")
        if self.lambda_target not in LAMBDA_TARGETS:
            raise ValueError(f"lambda_target must be one of {LAMBDA_TARGETS}")
        if self.integrand_convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")


def _excised_panels(cs: CoefficientSet, A_const: complex, a: float, b: float,
                    eps: float) -> tuple[list[tuple[float, float]], float]:
    poles = pole_locations_real_xi(cs, A_const, a, b)
    panels: list[tuple[float, float]] = []
    lo = a
    excised = 0.0
    for p in poles:
        left, right = p - eps, p + eps
        if right <= lo:
            continue
        if left > lo:
            panels.append((lo, min(left, b)))
        excised += min(right, b) - max(left, lo)
        lo = right
        if lo >= b:
            break
    if lo < b:
        panels.append((lo, b))
    return panels, excised


def _gl_panel(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              nodes: np.ndarray, weights: np.ndarray) -> complex:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return half * np.sum(weights * f(mid + half * nodes))


def _adaptive_gl(f, lo: float, hi: float, n: int, rel_tol: float = 1e-12,
                 abs_tol: float = 1e-14, depth: int = 14) -> complex:
    """Bisect until the n-point and 2n-point rules agree."""
    x1, w1 = np.polynomial.legendre.leggauss(n)
    x2, w2 = np.polynomial.legendre.leggauss(2 * n)

    def recurse(a: float, b: float, level: int) -> complex:
        coarse = _gl_panel(f, a, b, x1, w1)
        fine = _gl_panel(f, a, b, x2, w2)
        err = abs(fine - coarse)
        if err <= max(rel_tol * abs(fine), abs_tol) or level >= depth:
            return fine
        m = 0.5 * (a + b)
        return recurse(a, m, level + 1) + recurse(m, b, level + 1)

    return recurse(lo, hi, 0)


@dataclass(frozen=True)
class MomentumResult:
    Q: complex
    excised_fraction: float
    panels: tuple[tuple[float, float], ...]


def momentum(cs: CoefficientSet, params: ModelParams, frame: WaveFrame,
             cfg: StabilityConfig, t: float = 0.0) -> MomentumResult:
    """Q = (1/2) * integral of kappa-weighted g(u) over the screened interval.

    The integrand lives on the real xi line, so the result does not depend
    on t or on the frame beyond the auxiliary constant A; both stay in the
    signature to document what the diagnostic was computed for.
    """
    del params, t  # the xi-profile is frame- and time-independent
    a, b = cfg.interval
    panels, excised = _excised_panels(cs, frame.A_const, a, b, cfg.pole_epsilon)
    if excised > 0.10 * (b - a):
        raise UnreliableQuadratureError(
            f"{excised:.3g} of {b - a:.3g} excised around poles")

    A = np.asarray(cs.A, dtype=complex)
    B = np.asarray(cs.B, dtype=complex)
    A_const = complex(frame.A_const)

    def profile(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        psi = 1.0 / (1.0 + A_const * np.exp(xs))
        num = np.zeros_like(psi)
        for coeff in A[::-1]:
            num = num * psi + coeff
        den = np.zeros_like(psi)
        for coeff in B[::-1]:
            den = den * psi + coeff
        return num / den

    if cfg.integrand_convention == "modulus_squared":
        weight = abs(complex(cfg.kappa)) ** 2

        def integrand(xs):
            u = profile(xs)
            return (u.real**2 + u.imag**2).astype(complex)
    else:
        weight = complex(cfg.kappa) ** 2

        def integrand(xs):
            u = profile(xs)
            return u * u

    total = 0j
    for lo, hi in panels:
        total += _adaptive_gl(integrand, lo, hi, cfg.quadrature_points)
    Q = 0.5 * weight * total
    if cfg.integrand_convention == "modulus_squared":
        Q = complex(Q.real, 0.0)
    return MomentumResult(Q=Q, excised_fraction=excised / (b - a),
                          panels=tuple(panels))


def trapezoid_momentum(cs: CoefficientSet, frame: WaveFrame,
                       cfg: StabilityConfig, n_points: int = 1_000_000
                       ) -> complex:
    """Brute-force oracle: uniform trapezoid rule on the same panels."""
    a, b = cfg.interval
    panels, _ = _excised_panels(cs, frame.A_const, a, b, cfg.pole_epsilon)
    total_len = sum(hi - lo for lo, hi in panels)
    total = 0j
    for lo, hi in panels:
        n = max(16, int(round(n_points * (hi - lo) / total_len)))
        xs = np.linspace(lo, hi, n)
        us = np.array([eval_u(cs, frame.A_const, x) for x in xs])
        if cfg.integrand_convention == "modulus_squared":
            ys = np.abs(us) ** 2
            weight = abs(complex(cfg.kappa)) ** 2
        else:
            ys = us * us
            weight = complex(cfg.kappa) ** 2
        total += weight * np.trapezoid(ys, xs)
    return 0.5 * total


# ---------------------------------------------------------------------------
# Parametric derivative and verdict
# ---------------------------------------------------------------------------


def momentum_derivative(cs_family: Callable[[float], CoefficientSet],
                        params: ModelParams, frame: WaveFrame,
                        cfg: StabilityConfig, lambda_value: float) -> complex:
    """Central difference dQ/dlambda with a Richardson consistency check.

    cs_family rebuilds the coefficient set at a perturbed parameter value
    (the coefficients depend on lambda through H).  The h and h/2 estimates
    must agree within 5 percent or StepSizeError is raised; the finer one is
    returned.
    """
    def q_at(lam: float) -> complex:
        cs = cs_family(lam)
        local_frame = replace(frame, k=cs.k)
        return momentum(cs, params, local_frame, cfg).Q

    def central(h: float) -> complex:
        return (q_at(lambda_value + h) - q_at(lambda_value - h)) / (2.0 * h)

    h = cfg.fd_step
    d1 = central(h)
    d2 = central(h / 2.0)
    if abs(d1 - d2) > 0.05 * max(abs(d2), 1e-12):
        raise StepSizeError(
            f"derivative estimates disagree: {d1} vs {d2} at h={h}")
    return d2


VERDICT_TOL = 1e-8


def stability_verdict(derivative: float) -> str:
    """'stable' iff dQ/dlambda > tol, 'unstable' iff < -tol, else
    'inconclusive'."""
    if derivative > VERDICT_TOL:
        return "stable"
    if derivative < -VERDICT_TOL:
        return "unstable"
    return "inconclusive"


def _with_lambda(params: ModelParams, target: str, value: float) -> ModelParams:
    return replace(params, **{target: value})


def case_family(case_id: int, params: ModelParams, B0: complex = 1.0,
                B1: complex | None = None,
                lambda_target: str = "upsilon"
                ) -> tuple[Callable[[float], CoefficientSet], float]:
    """(lambda -> CoefficientSet) for one catalog case, plus the base value."""
    if lambda_target == "H":
        return (lambda lam: case_coefficients(case_id, lam, B0=B0, B1=B1),
                params.H)

    def family(lam: float) -> CoefficientSet:
        p = _with_lambda(params, lambda_target, lam)
        return case_coefficients(case_id, p.H, B0=B0, B1=B1)

    return family, getattr(params, lambda_target)


def stability_report(case_id: int, params: ModelParams,
                     cfg: StabilityConfig, B0: complex = 1.0,
                     B1: complex | None = None,
                     A_const: complex = 1.0) -> dict:
    """Momentum, parametric derivative and verdict for one catalog case.

    The claimed positivity of dQ/dlambda is recorded as the expected sign,
    never asserted: the verdict simply reports which side of the tolerance
    band the measured derivative falls on.
    """
    cs = case_coefficients(case_id, params.H, B0=B0, B1=B1)
    frame = WaveFrame(k=cs.k, alpha=params.alpha, upsilon=params.upsilon,
                      sigma=params.sigma, A_const=A_const)
    result = momentum(cs, params, frame, cfg)
    family, base = case_family(case_id, params, B0=B0, B1=B1,
                               lambda_target=cfg.lambda_target)
    dq = momentum_derivative(family, params, frame, cfg, base)
    verdict = stability_verdict(dq.real)
    return {
        "case": case_id,
        "lambda_target": cfg.lambda_target,
        "convention": cfg.integrand_convention,
        "Q": [result.Q.real, result.Q.imag],
        "dQ": [dq.real, dq.imag],
        "verdict": verdict,
        "excised_fraction": result.excised_fraction,
    }

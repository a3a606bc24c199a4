"""Evaluate solitary-wave fields psi(x,t) = exp(i*theta) * u(xi) on grids.

u comes from a CoefficientSet through the auxiliary profile
Psi(xi) = 1/(1 + A*exp(xi)); the phase theta = alpha*x + upsilon*t +
sigma*L(t) carries the noise.  Because |exp(i*theta)| = 1 for real noise
paths, |psi| never depends on sigma or on the sampled path.

Most catalog wave numbers are imaginary, so xi = k*(x + 2*alpha*t) is
complex for real (x, t); evaluation is entire except at poles of the
rational profile, which are reported explicitly (grid cells become NAV
markers, never silently interpolated).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .gkm import CoefficientSet, ModelParams
from .levy import LevyPath, evaluate as levy_evaluate

POLE_TOL = 1e-12  # |denominator| below this raises PoleError


class PoleError(ArithmeticError):
    """Evaluation hit a pole of the rational profile."""


@dataclass(frozen=True)
class WaveFrame:
    """Traveling frame xi = k*(x + 2*alpha*t), theta = alpha*x + upsilon*t
    + sigma*L(t)."""

    k: complex
    alpha: float
    upsilon: float
    sigma: float
    A_const: complex = 1.0

    def __post_init__(self):
        if self.A_const == 0:
            raise ValueError("the auxiliary constant A must be nonzero")

    def xi(self, x: float, t: float) -> complex:
        return self.k * (x + 2.0 * self.alpha * t)

    def theta(self, x: float, t: float, levy_value: float) -> float:
        return self.alpha * x + self.upsilon * t + self.sigma * levy_value


def frame_for(cs: CoefficientSet, params: ModelParams,
              A_const: complex = 1.0) -> WaveFrame:
    return WaveFrame(k=cs.k, alpha=params.alpha, upsilon=params.upsilon,
                     sigma=params.sigma, A_const=A_const)


def riccati_profile(xi: complex, A_const: complex = 1.0) -> complex:
    """Psi(xi) = 1/(1 + A*exp(xi)), evaluated overflow-safely."""
    if xi.real > 300.0:
        # 1/(1 + A e^xi) = e^-xi / (e^-xi + A)
        w = cmath.exp(-xi)
        den = w + A_const
        if abs(den) < POLE_TOL:
            raise PoleError(f"Psi pole at xi={xi}")
        return w / den
    den = 1.0 + A_const * cmath.exp(xi)
    if abs(den) < POLE_TOL:
        raise PoleError(f"Psi pole at xi={xi}")
    return 1.0 / den


def eval_u(cs: CoefficientSet, A_const: complex, xi: complex) -> complex:
    """Profile u(xi) = (A0 + A1*Psi + ... )/(B0 + B1*Psi + ...)."""
    psi = riccati_profile(complex(xi), complex(A_const))
    num = 0j
    for a in reversed(cs.A):
        num = num * psi + a
    den = 0j
    for b in reversed(cs.B):
        den = den * psi + b
    if abs(den) < POLE_TOL:
        raise PoleError(f"profile pole at xi={xi} (|denominator|={abs(den):.2e})")
    return num / den


def eval_psi(cs: CoefficientSet, params: ModelParams, frame: WaveFrame,
             path: LevyPath | None, x: float, t: float) -> complex:
    """psi(x, t) = exp(i*theta)*u(xi) under the given noise path.

    path may be None only for sigma = 0.  Shared fields of params and frame
    must agree; the frame is authoritative for evaluation.
    """
    if (frame.alpha != params.alpha or frame.upsilon != params.upsilon
            or frame.sigma != params.sigma):
        raise ValueError("frame and params disagree on alpha/upsilon/sigma")
    if frame.sigma != 0.0:
        if path is None:
            raise ValueError("noise path required when sigma != 0")
        levy_value = levy_evaluate(path, t)
    else:
        levy_value = 0.0
    u = eval_u(cs, frame.A_const, frame.xi(x, t))
    return cmath.exp(1j * frame.theta(x, t, levy_value)) * u


@dataclass(frozen=True)
class FieldGrid:
    """Dense complex samples over a rectangular (x, t) grid.

    Pole cells carry NaN and are marked in nav_mask; provenance records how
    the grid was produced (case id or solved-set digest, path seed, params).
    """

    x_values: np.ndarray
    t_values: np.ndarray
    samples: np.ndarray  # complex, shape (len(t_values), len(x_values))
    nav_mask: np.ndarray  # bool, same shape; True = not-a-value
    provenance: dict

    def __post_init__(self):
        if self.samples.shape != (len(self.t_values), len(self.x_values)):
            raise ValueError("sample matrix does not match the coordinates")
        if self.nav_mask.shape != self.samples.shape:
            raise ValueError("NAV mask does not match the samples")


def field_grid(cs: CoefficientSet, params: ModelParams, frame: WaveFrame,
               path: LevyPath | None, x_range: tuple[float, float],
               t_range: tuple[float, float], nx: int, nt: int,
               provenance_label: str | None = None) -> FieldGrid:
    """Evaluate psi over a uniform grid; poles become NAV markers."""
    if nx < 2 or nt < 2:
        raise ValueError("grids need at least 2 points per axis")
    xs = np.linspace(x_range[0], x_range[1], nx)
    ts = np.linspace(t_range[0], t_range[1], nt)
    samples = np.empty((nt, nx), dtype=complex)
    nav = np.zeros((nt, nx), dtype=bool)
    for i, t in enumerate(ts):
        for j, x in enumerate(xs):
            try:
                samples[i, j] = eval_psi(cs, params, frame, path, x, t)
            except PoleError:
                samples[i, j] = complex("nan")
                nav[i, j] = True
    provenance = {
        "label": provenance_label or (cs.family_tag or "coefficient-set"),
        "k": [cs.k.real, cs.k.imag],
        "A": [[a.real, a.imag] for a in cs.A],
        "B": [[b.real, b.imag] for b in cs.B],
        "alpha": params.alpha,
        "upsilon": params.upsilon,
        "rho": params.rho,
        "sigma": params.sigma,
        "A_const": [complex(frame.A_const).real, complex(frame.A_const).imag],
        "path_seed": None if path is None else path.seed,
    }
    return FieldGrid(x_values=xs, t_values=ts, samples=samples, nav_mask=nav,
                     provenance=provenance)


def write_field_csv(grid: FieldGrid, dest: str | TextIO) -> None:
    """Rows (t, x, re, im, abs); NAV cells emit the literal token NAV."""
    own = isinstance(dest, str)
    fh = open(dest, "w") if own else dest
    try:
        fh.write("t,x,re,im,abs\n")
        for i, t in enumerate(grid.t_values):
            for j, x in enumerate(grid.x_values):
                if grid.nav_mask[i, j]:
                    fh.write(f"{float(t)!r},{float(x)!r},NAV,NAV,NAV\n")
                else:
                    z = complex(grid.samples[i, j])
                    fh.write(f"{float(t)!r},{float(x)!r},{z.real!r},"
                             f"{z.imag!r},{abs(z)!r}\n")
    finally:
        if own:
            fh.close()


def write_provenance_json(grid: FieldGrid, dest: str) -> None:
    with open(dest, "w") as fh:
        json.dump(grid.provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Pole bookkeeping on the real xi line
# ---------------------------------------------------------------------------


def pole_locations_real_xi(cs: CoefficientSet, A_const: complex,
                           lo: float, hi: float,
                           angle_tol: float = 1e-9) -> list[float]:
    """Real-axis poles of u(xi) (profile denominator or Psi itself).

    For M = 1 the denominator root is Psi* = -B0/B1, reached where
    A*exp(xi) = 1/Psi* - 1; Psi itself blows up where A*exp(xi) = -1.
    Returns every real solution in [lo, hi], branch by branch.
    """
    targets: list[complex] = [-1.0 + 0j]
    if len(cs.B) > 1 and abs(cs.B[1]) > 0:
        psi_star = -cs.B[0] / cs.B[1]
        if abs(psi_star) > 0:
            targets.append(1.0 / psi_star - 1.0)
    poles: list[float] = []
    for target in targets:
        w = target / complex(A_const)
        if w == 0:
            continue
        base = cmath.log(w)
        # log branches: xi = Re(base) is real only when some branch has zero
        # imaginary part
        im = base.imag
        n = round(-im / (2 * math.pi))
        if abs(im + 2 * math.pi * n) <= angle_tol:
            xi0 = base.real
            if lo - 1e-12 <= xi0 <= hi + 1e-12:
                poles.append(xi0)
    return sorted(poles)


def screened_xi_grid(cs: CoefficientSet, lo: float, hi: float, n: int,
                     A_const: complex = 1.0,
                     min_dist: float = 0.05) -> np.ndarray:
    """Uniform grid on [lo, hi] with points near real poles dropped."""
    grid = np.linspace(lo, hi, n)
    poles = pole_locations_real_xi(cs, A_const, lo - 1.0, hi + 1.0)
    if not poles:
        return grid
    keep = np.ones(len(grid), dtype=bool)
    for p in poles:
        keep &= np.abs(grid - p) >= min_dist
    screened = grid[keep]
    if len(screened) == 0:
        raise PoleError("every grid point sits on a pole neighborhood")
    return screened

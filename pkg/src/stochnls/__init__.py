"""Solitary waves of the noisy cubic wave equation via the generalized
Kudryashov method.

Subpackages:

  psi_algebra   exact polynomial/rational algebra in the Riccati variable
  gkm           balance, system generation, numeric root solver, catalog
  levy          jump-diffusion path sampling and evaluation
  field         field evaluation psi(x,t) on points and grids
  closed_forms  independent transcriptions of the determinate fields
  verify        system / profile-ODE / PDE residual checks
  stability     momentum diagnostic and the dQ/dlambda criterion
  ssfm          split-step spectral integrator and cross-checks
  cli           command-line entry point
"""

from .gkm import (
    AnsatzShape,
    CoefficientSet,
    DegenerateModelError,
    ModelParams,
    balanced_shape,
    case_catalog,
    case_coefficients,
    compute_balance,
    generate_system,
    params_for_H,
    reduce_pde,
    solve_system,
)
from .levy import ConstantJumps, LevyPath, LevySpec, NormalJumps, sample_path
from .field import FieldGrid, PoleError, WaveFrame, eval_psi, eval_u, field_grid
from .stability import StabilityConfig, momentum, momentum_derivative, stability_verdict
from .ssfm import SimGrid, evolve, xcheck_case

__all__ = [
    "AnsatzShape",
    "CoefficientSet",
    "ConstantJumps",
    "DegenerateModelError",
    "FieldGrid",
    "LevyPath",
    "LevySpec",
    "ModelParams",
    "NormalJumps",
    "PoleError",
    "SimGrid",
    "StabilityConfig",
    "WaveFrame",
    "balanced_shape",
    "case_catalog",
    "case_coefficients",
    "compute_balance",
    "eval_psi",
    "eval_u",
    "evolve",
    "field_grid",
    "generate_system",
    "momentum",
    "momentum_derivative",
    "params_for_H",
    "reduce_pde",
    "sample_path",
    "solve_system",
    "stability_verdict",
    "xcheck_case",
]

__version__ = "0.1.0"

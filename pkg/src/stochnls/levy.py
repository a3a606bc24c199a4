"""Cadlag jump-diffusion paths driving the stochastic phase.

A path is L(t) = drift*t + diffusion*W(t) + sum of compound-Poisson jumps,
the representative finite-activity family with independent stationary
increments, L(0) = 0 and right-continuous sample paths.  The Brownian
component is sampled on a grid and linearly interpolated between grid
points; jump times are kept exactly (never snapped to the grid) so phase
evaluation at arbitrary (x, t) cannot alias a jump.

Sampling is deterministic: identical (spec, grid_step, seed) gives bitwise
identical paths, and ensembles derive one independent substream per path
from the ensemble seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TextIO, Union

import numpy as np


@dataclass(frozen=True)
class NormalJumps:
    mean: float
    sd: float

    def __post_init__(self):
        if self.sd < 0:
            raise ValueError("jump sd must be >= 0")


@dataclass(frozen=True)
class ConstantJumps:
    size: float


JumpLaw = Union[NormalJumps, ConstantJumps]


@dataclass(frozen=True)
class LevySpec:
    """Jump-diffusion triplet plus the sampling horizon."""

    drift: float = 0.0
    diffusion: float = 0.0
    jump_rate: float = 0.0
    jump_law: JumpLaw = ConstantJumps(1.0)
    horizon: float = 1.0

    def __post_init__(self):
        for name in ("drift", "diffusion", "jump_rate", "horizon"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.horizon <= 0:
            raise ValueError("horizon must be > 0")
        if self.diffusion < 0 or self.jump_rate < 0:
            raise ValueError("diffusion and jump_rate must be >= 0")


@dataclass(frozen=True)
class LevyPath:
    """One sampled path; exactly evaluable at any t in [0, horizon]."""

    grid_times: np.ndarray
    brownian_values: np.ndarray
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    drift: float
    seed: int

    def __post_init__(self):
        if self.grid_times[0] != 0.0 or self.brownian_values[0] != 0.0:
            raise ValueError("paths start at L(0) = 0")
        if len(self.grid_times) != len(self.brownian_values):
            raise ValueError("grid and Brownian samples must align")

    @property
    def horizon(self) -> float:
        return float(self.grid_times[-1])


def _draw_jumps(rng: np.random.Generator, spec: LevySpec
                ) -> tuple[np.ndarray, np.ndarray]:
    times = []
    if spec.jump_rate > 0:
        t = rng.exponential(1.0 / spec.jump_rate)
        while t <= spec.horizon:
            times.append(t)
            t += rng.exponential(1.0 / spec.jump_rate)
    times = np.array(times, dtype=float)
    if isinstance(spec.jump_law, ConstantJumps):
        sizes = np.full(times.shape, spec.jump_law.size, dtype=float)
    else:
        sizes = rng.normal(spec.jump_law.mean, spec.jump_law.sd, size=times.shape)
    return times, sizes


def sample_path(spec: LevySpec, grid_step: float, seed: int) -> LevyPath:
    """Sample one path on a uniform grid (last cell clipped to the horizon).

    Brownian increments are independent N(0, diffusion**2 * dt) per cell;
    jumps arrive with exponential inter-arrival times at the given rate.
    """
    if not math.isfinite(grid_step) or grid_step <= 0:
        raise ValueError("grid_step must be positive and finite")
    if grid_step > spec.horizon:
        raise ValueError("grid_step must not exceed the horizon")
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    n = int(math.ceil(spec.horizon / grid_step - 1e-12))
    times = np.minimum(np.arange(n + 1) * grid_step, spec.horizon)
    times[-1] = spec.horizon
    dts = np.diff(times)
    increments = spec.diffusion * np.sqrt(dts) * rng.standard_normal(len(dts))
    brownian = np.concatenate(([0.0], np.cumsum(increments)))

    jump_times, jump_sizes = _draw_jumps(rng, spec)
    return LevyPath(grid_times=times, brownian_values=brownian,
                    jump_times=jump_times, jump_sizes=jump_sizes,
                    drift=spec.drift, seed=int(seed))


def _check_range(path: LevyPath, t: np.ndarray):
    if np.any(t < -1e-12) or np.any(t > path.horizon + 1e-12):
        raise ValueError("t outside [0, horizon]")


def evaluate(path: LevyPath, t):
    """L(t) with the right-continuous convention: jumps at t are included."""
    t_arr = np.asarray(t, dtype=float)
    _check_range(path, t_arr)
    val = path.drift * t_arr + np.interp(t_arr, path.grid_times,
                                         path.brownian_values)
    if len(path.jump_times):
        idx = np.searchsorted(path.jump_times, t_arr, side="right")
        cum = np.concatenate(([0.0], np.cumsum(path.jump_sizes)))
        val = val + cum[idx]
    return float(val) if np.isscalar(t) else val


def left_limit(path: LevyPath, t):
    """L(t-): jumps exactly at t are excluded."""
    t_arr = np.asarray(t, dtype=float)
    _check_range(path, t_arr)
    val = path.drift * t_arr + np.interp(t_arr, path.grid_times,
                                         path.brownian_values)
    if len(path.jump_times):
        idx = np.searchsorted(path.jump_times, t_arr, side="left")
        cum = np.concatenate(([0.0], np.cumsum(path.jump_sizes)))
        val = val + cum[idx]
    return float(val) if np.isscalar(t) else val


# ---------------------------------------------------------------------------
# Increment statistics for the axiom-level checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncrementMoments:
    windows: tuple[tuple[float, float], ...]
    means: np.ndarray
    variances: np.ndarray
    correlation: np.ndarray | None  # None when some window is deterministic
    n_paths: int

    @property
    def degenerate(self) -> bool:
        return self.correlation is None


def increment_moments(spec: LevySpec, windows: Sequence[tuple[float, float]],
                      n_paths: int, seed: int) -> IncrementMoments:
    """Sample means/variances of window increments and their correlations.

    Windows must be pairwise disjoint (touching endpoints allowed).  The
    sampling grid is built from the window endpoints themselves, so the
    increments carry no interpolation error.
    """
    if n_paths < 100:
        raise ValueError("need at least 100 paths for moment estimates")
    wins = [(float(a), float(b)) for a, b in windows]
    for a, b in wins:
        if not (0 <= a < b <= spec.horizon):
            raise ValueError("windows must satisfy 0 <= a < b <= horizon")
    ordered = sorted(wins)
    for (a1, b1), (a2, b2) in zip(ordered, ordered[1:]):
        if a2 < b1:
            raise ValueError("windows overlap")

    edges = np.unique(np.concatenate([[0.0, spec.horizon],
                                      np.array(wins).ravel()]))
    dts = np.diff(edges)
    starts = np.searchsorted(edges, [a for a, _ in wins])
    stops = np.searchsorted(edges, [b for _, b in wins])

    increments = np.empty((n_paths, len(wins)))
    base = np.random.SeedSequence(seed)
    for p, child in enumerate(base.spawn(n_paths)):
        rng = np.random.default_rng(child)
        gauss = spec.diffusion * np.sqrt(dts) * rng.standard_normal(len(dts))
        cum = np.concatenate(([0.0], np.cumsum(gauss)))
        jt, js = _draw_jumps(rng, spec)
        for w, (a, b) in enumerate(wins):
            jump_part = float(np.sum(js[(jt > a) & (jt <= b)])) if len(jt) else 0.0
            increments[p, w] = (spec.drift * (b - a)
                                + cum[stops[w]] - cum[starts[w]] + jump_part)

    means = increments.mean(axis=0)
    variances = increments.var(axis=0, ddof=1)
    if np.any(variances <= 1e-300):
        corr = None
    else:
        corr = np.corrcoef(increments, rowvar=False)
        corr = np.atleast_2d(corr)
    return IncrementMoments(windows=tuple(wins), means=means,
                            variances=variances, correlation=corr,
                            n_paths=n_paths)


# ---------------------------------------------------------------------------
# CSV export / import for replay
# ---------------------------------------------------------------------------


def write_path_csv(path: LevyPath, dest: str | TextIO) -> None:
    """Grid rows carry the full path value L(t); jump rows are flagged.

    Header comments keep drift/seed/horizon so the import reconstructs the
    Brownian component exactly.
    """
    own = isinstance(dest, str)
    fh = open(dest, "w") if own else dest
    try:
        fh.write("# levy-path v1\n")
        fh.write(f"# drift={path.drift!r}\n")
        fh.write(f"# seed={path.seed}\n")
        fh.write(f"# horizon={path.horizon!r}\n")
        fh.write("t,L,jump\n")
        values = evaluate(path, path.grid_times)
        for t, v in zip(path.grid_times, values):
            fh.write(f"{float(t)!r},{float(v)!r},0\n")
        for t, s in zip(path.jump_times, path.jump_sizes):
            fh.write(f"{float(t)!r},{float(s)!r},1\n")
    finally:
        if own:
            fh.close()


def read_path_csv(src: str | TextIO) -> LevyPath:
    own = isinstance(src, str)
    fh = open(src) if own else src
    try:
        meta: dict[str, float] = {}
        grid_t, grid_v, jump_t, jump_s = [], [], [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("# ")
                if "=" in body:
                    key, _, val = body.partition("=")
                    meta[key.strip()] = float(val)
                continue
            if line.lower().startswith("t,"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"malformed path row: {line!r}")
            t, v, flag = float(parts[0]), float(parts[1]), int(parts[2])
            if flag:
                jump_t.append(t)
                jump_s.append(v)
            else:
                grid_t.append(t)
                grid_v.append(v)
        if "drift" not in meta:
            raise ValueError("path file lacks the drift header")
        drift = meta["drift"]
        grid_t = np.array(grid_t)
        grid_v = np.array(grid_v)
        jump_t = np.array(jump_t)
        jump_s = np.array(jump_s)
        order = np.argsort(jump_t)
        jump_t, jump_s = jump_t[order], jump_s[order]
        cum = np.concatenate(([0.0], np.cumsum(jump_s)))
        jumps_at = cum[np.searchsorted(jump_t, grid_t, side="right")] \
            if len(jump_t) else np.zeros_like(grid_t)
        brownian = grid_v - drift * grid_t - jumps_at
        return LevyPath(grid_times=grid_t, brownian_values=brownian,
                        jump_times=jump_t, jump_sizes=jump_s,
                        drift=drift, seed=int(meta.get("seed", -1)))
    finally:
        if own:
            fh.close()


def pure_drift_path(drift: float, horizon: float) -> LevyPath:
    """The smooth surrogate L(t) = drift*t used by PDE-level verification."""
    times = np.array([0.0, horizon])
    return LevyPath(grid_times=times, brownian_values=np.zeros(2),
                    jump_times=np.array([]), jump_sizes=np.array([]),
                    drift=drift, seed=0)

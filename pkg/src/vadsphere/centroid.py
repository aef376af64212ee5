"""Per-emotion centroid optimization.

The center of an emotion's spherical coordinate system maximizes the ratio
of the mean distance to that emotion's points over the mean distance to the
neutral points. The ratio is smooth but non-convex in the 3-D cube, so we
run a multi-start Nelder-Mead simplex search projected onto [0, 1]^3, and
keep an exhaustive grid scan around as an independent oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .geometry import MODE_EMOTION_ADAPTIVE, Centroid, VadPoint

logger = logging.getLogger(__name__)

_CUBE_CORNERS = [(float(i), float(j), float(k))
                 for i in (0, 1) for j in (0, 1) for k in (0, 1)]


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the centroid search; defaults fit manifests of a few thousand rows."""

    max_iterations: int = 2000
    simplex_tolerance: float = 1e-6
    random_starts: int = 8
    seed: int = 42
    denominator_epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.simplex_tolerance <= 0:
            raise ValueError("simplex_tolerance must be > 0")
        if self.random_starts < 0:
            raise ValueError("random_starts must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be an unsigned integer")
        if self.denominator_epsilon <= 0:
            raise ValueError("denominator_epsilon must be > 0")


def points_array(points: Sequence) -> np.ndarray:
    """Stack VadPoints (or bare triples) into an (n, 3) float array."""
    if len(points) == 0:
        raise ValueError("empty point sequence")
    rows = []
    for p in points:
        if isinstance(p, VadPoint):
            rows.append(p.as_tuple())
        else:
            rows.append((float(p[0]), float(p[1]), float(p[2])))
    return np.asarray(rows, dtype=np.float64)


def objective(m, targets: Sequence, neutrals: Sequence, eps: float) -> float:
    """Distance-ratio objective at candidate center m.

    mean distance to the target-class points divided by (mean distance to
    the neutral points + eps). Larger is better.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    t_arr = points_array(targets)
    n_arr = points_array(neutrals)
    m_arr = np.asarray(
        m.as_tuple() if isinstance(m, VadPoint) else m, dtype=np.float64)
    if m_arr.shape != (3,):
        raise ValueError("candidate center must have 3 components")
    return float(_kernels.distance_ratio(m_arr, t_arr, n_arr, eps))


def _simplex_from(x0: np.ndarray, step: float = 0.1) -> np.ndarray:
    """Axis-aligned initial simplex around x0, kept inside the cube."""
    sim = np.tile(x0, (4, 1))
    for i in range(3):
        delta = step if x0[i] + step <= 1.0 else -step
        sim[i + 1, i] = min(1.0, max(0.0, x0[i] + delta))
    return sim


def solve_centroid(targets: Sequence, neutrals: Sequence,
                   cfg: SolverConfig | None = None,
                   emotion: str | None = None) -> Centroid:
    """Maximize the distance-ratio objective over the VAD cube.

    Multi-start Nelder-Mead: the neutral mean, the target mean, the eight
    cube corners, and cfg.random_starts seeded uniform points. Every
    candidate is evaluated inside [0, 1]^3 (scipy clips to the bounds), so
    the result always lies in the cube and its objective is at least the
    objective at each start. Deterministic for a fixed seed; ties across
    starts resolve to the lexicographically smallest point.
    """
    cfg = cfg or SolverConfig()
    t_arr = points_array(targets)
    n_arr = points_array(neutrals)
    eps = cfg.denominator_epsilon

    def neg(x: np.ndarray) -> float:
        return -float(_kernels.distance_ratio(x, t_arr, n_arr, eps))

    rng = np.random.default_rng(cfg.seed)
    starts = [n_arr.mean(axis=0), t_arr.mean(axis=0)]
    starts.extend(np.asarray(c) for c in _CUBE_CORNERS)
    if cfg.random_starts:
        starts.extend(rng.uniform(0.0, 1.0, size=(cfg.random_starts, 3)))

    best_key: tuple | None = None
    best_point: np.ndarray | None = None
    for x0 in starts:
        x0 = np.clip(np.asarray(x0, dtype=np.float64), 0.0, 1.0)
        res = minimize(
            neg, x0, method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * 3,
            options={
                "maxiter": cfg.max_iterations,
                "xatol": cfg.simplex_tolerance,
                "fatol": cfg.simplex_tolerance,
                "initial_simplex": _simplex_from(x0),
            },
        )
        point = np.clip(res.x, 0.0, 1.0)
        value = -neg(point)
        # order by objective desc, then lexicographically smallest point,
        # so a parallel multi-start reduction would give the same result
        key = (-value, tuple(point))
        if best_key is None or key < best_key:
            best_key, best_point = key, point
    assert best_point is not None and best_key is not None
    best_value = -best_key[0]
    logger.debug("solve_centroid: best objective %.6f at %s", best_value, best_point)
    return Centroid(point=tuple(float(x) for x in best_point),
                    mode=MODE_EMOTION_ADAPTIVE, emotion=emotion,
                    objective=float(best_value))


def grid_search_centroid(targets: Sequence, neutrals: Sequence, step: float,
                         eps: float = SolverConfig.denominator_epsilon,
                         emotion: str | None = None) -> Centroid:
    """Exhaustive maximizer over the lattice {0, step, 2*step, ..., 1}^3.

    Test oracle for solve_centroid. Ties break to the lexicographically
    smallest lattice point (first maximum in C scan order).
    """
    if not (0.0 < step <= 0.5):
        raise ValueError(f"step {step} must be in (0, 0.5]")
    t_arr = points_array(targets)
    n_arr = points_array(neutrals)
    m = int(math.floor(1.0 / step + 1e-9))
    axis = np.minimum(np.arange(m + 1, dtype=np.float64) * step, 1.0)
    values = _kernels.grid_objective_values(axis, t_arr, n_arr, eps)
    idx = int(np.argmax(values))
    n = axis.size
    point = (float(axis[idx // (n * n)]), float(axis[(idx // n) % n]), float(axis[idx % n]))
    return Centroid(point=point, mode=MODE_EMOTION_ADAPTIVE, emotion=emotion,
                    objective=objective(point, targets, neutrals, eps))

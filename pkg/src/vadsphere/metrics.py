"""Objective emotion metrics over VAD points, embeddings, and labels.

All functions are pure. Embeddings and labels arrive as data; no model
inference happens here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import MODE_NEUTRAL_MEAN, Centroid, VadPoint, shift, to_spherical

# Below this shifted radius the style angle is undefined.
MIN_ANGLE_RADIUS = 1e-9


@dataclass(frozen=True)
class AngleVector:
    """The (theta, phi) angle pair of a spherical emotion vector."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta {self.theta} outside [0, pi]")
        if not (-math.pi < self.phi <= math.pi):
            raise ValueError(f"phi {self.phi} outside (-pi, pi]")

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.phi])


@dataclass(frozen=True)
class EmbeddingBatch:
    """An (n, dim) stack of real vectors."""

    rows: np.ndarray

    def __post_init__(self) -> None:
        if self.rows.ndim != 2 or self.rows.shape[0] < 1 or self.rows.shape[1] < 1:
            raise ValueError("embedding batch must be a non-empty 2-D array")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity undefined for a zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def angle_cosine(a: AngleVector, b: AngleVector) -> float:
    """Cosine similarity of two (theta, phi) pairs."""
    return _cosine(a.as_array(), b.as_array())


def angle_vector(point: VadPoint, center: Centroid) -> AngleVector:
    """Angle pair of a point about a center; rejects near-degenerate radii."""
    sv = to_spherical(shift(point, center))
    if sv.r < MIN_ANGLE_RADIUS:
        raise ValueError("degenerate radius: point coincides with the center, "
                         "angle undefined")
    return AngleVector(theta=sv.theta, phi=sv.phi)


def svas(synth_vad: VadPoint, ref_vad: VadPoint, neutral_center: Centroid) -> float:
    """Spherical vector angle similarity about a fixed neutral center.

    Both points are shifted by the neutral mean (never the adaptive
    per-emotion center) and compared by the cosine of their (theta, phi)
    angle vectors. Result in [-1, 1].
    """
    if neutral_center.mode != MODE_NEUTRAL_MEAN:
        raise ValueError("svas requires a neutral-mean centroid")
    return angle_cosine(angle_vector(synth_vad, neutral_center),
                        angle_vector(ref_vad, neutral_center))


def eecs(a: Sequence[float], b: Sequence[float]) -> float:
    """Emotion embedding cosine similarity."""
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if a_arr.ndim != 1 or b_arr.ndim != 1 or a_arr.shape != b_arr.shape:
        raise ValueError(f"dimension mismatch: {a_arr.shape} vs {b_arr.shape}")
    return _cosine(a_arr, b_arr)


def eca(predicted: Sequence[str], reference: Sequence[str]) -> float:
    """Emotion classification accuracy; labels match case-insensitively."""
    if len(predicted) != len(reference):
        raise ValueError(f"length mismatch: {len(predicted)} vs {len(reference)}")
    if len(predicted) == 0:
        raise ValueError("eca requires at least one label pair")
    hits = sum(p.strip().casefold() == r.strip().casefold()
               for p, r in zip(predicted, reference))
    return hits / len(predicted)


def orthogonality_loss(speaker: EmbeddingBatch | np.ndarray,
                       emotion: EmbeddingBatch | np.ndarray) -> float:
    """All-pairs normalized squared dot product between two batches.

    sum over (i, j) of (s_i . e_j)^2 / (|s_i|^2 |e_j|^2). Zero when the
    batches are mutually orthogonal, n^2 when every pair is parallel.
    """
    s = speaker.rows if isinstance(speaker, EmbeddingBatch) else np.asarray(speaker, dtype=np.float64)
    e = emotion.rows if isinstance(emotion, EmbeddingBatch) else np.asarray(emotion, dtype=np.float64)
    if s.ndim != 2 or e.ndim != 2:
        raise ValueError("batches must be 2-D")
    if s.shape != e.shape:
        raise ValueError(f"shape mismatch: {s.shape} vs {e.shape}")
    s_norms = np.linalg.norm(s, axis=1)
    e_norms = np.linalg.norm(e, axis=1)
    if np.any(s_norms == 0.0) or np.any(e_norms == 0.0):
        raise ValueError("zero-norm row in embedding batch")
    gram = (s / s_norms[:, None]) @ (e / e_norms[:, None]).T
    return float((gram ** 2).sum())


def pair_order_accuracy(
        pairs: Sequence[tuple[float, float, bool]]) -> float:
    """Fraction of intensity pairs whose judgment matches the true ordering.

    Each pair is (r_low, r_high, judged_high_is_second): the boolean says
    the rater picked the second sample as the stronger one. A pair with
    equal radii counts as incorrect regardless of the judgment.
    """
    if len(pairs) == 0:
        raise ValueError("pair_order_accuracy requires at least one pair")
    correct = 0
    for r_low, r_high, judged_high_is_second in pairs:
        if r_high > r_low:
            correct += bool(judged_high_is_second)
        elif r_high < r_low:
            correct += not judged_high_is_second
        # equal radii: no credit
    return correct / len(pairs)

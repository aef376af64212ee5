"""End-to-end extraction of emotion-adaptive spherical vectors.

Fitting walks the manifest per emotion class: solve the class centroid,
shift every class point to it, take spherical coordinates, and derive
robust intensity bounds from the interquartile range of the radii. Neutral
utterances bypass all of it and are fixed at (0, 0, 0). Extraction then
maps any record to (r_iqr, theta, phi) with r_iqr clamped into [0, 1].

Control vectors for synthesis-time steering are built from an octant's cube
diagonal and a requested intensity, so "the same style, stronger" is just a
longer vector at the same angles.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version
from typing import Mapping, Sequence

import numpy as np

from .centroid import SolverConfig, solve_centroid
from .geometry import (
    MODE_EMOTION_ADAPTIVE,
    Centroid,
    ShiftedVad,
    StyleOctant,
    shift,
    to_spherical,
)
from .manifest import DatasetManifest, UtteranceRecord

logger = logging.getLogger(__name__)

INTENSITY_LABELS = {"weak": 0.1, "medium": 0.5, "strong": 0.9}

# Quartiles need spread; fewer points make the bounds ill-conditioned.
MIN_CLASS_RECORDS = 4

MODEL_FORMAT = "easv-model"

try:
    TOOL_VERSION = version("vadsphere")
except PackageNotFoundError:  # running from a source tree without install
    TOOL_VERSION = "0.0.0+src"


def intensity_label_to_value(label: str) -> float:
    """weak -> 0.1, medium -> 0.5, strong -> 0.9."""
    try:
        return INTENSITY_LABELS[label.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown intensity label {label!r}; expected one of {sorted(INTENSITY_LABELS)}"
        ) from None


@dataclass(frozen=True)
class IqrBounds:
    """Tukey-style radius bounds: [q1 - 1.5*IQR, q3 + 1.5*IQR]."""

    q1: float
    q3: float
    r_min: float
    r_max: float

    def __post_init__(self) -> None:
        if self.q1 > self.q3:
            raise ValueError("q1 must not exceed q3")
        if self.r_min > self.q1 or self.r_max < self.q3:
            raise ValueError("bounds must bracket the quartiles")

    @property
    def degenerate(self) -> bool:
        return self.r_min == self.r_max


@dataclass(frozen=True)
class Easv:
    """Emotion-adaptive spherical vector: normalized intensity plus style angles."""

    r_iqr: float
    theta: float
    phi: float
    emotion: str

    def __post_init__(self) -> None:
        if not (0.0 <= self.r_iqr <= 1.0):
            raise ValueError(f"r_iqr {self.r_iqr} outside [0, 1]")


@dataclass(frozen=True)
class ControlSpec:
    """Requested emotion, style octant, and intensity for a control vector."""

    emotion: str
    octant: StyleOctant
    intensity: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.intensity <= 1.0):
            raise ValueError(f"intensity {self.intensity} outside [0, 1]")


@dataclass(frozen=True)
class EasvModel:
    """Fitted per-emotion centroids and radius bounds; neutral stays implicit."""

    centroids: Mapping[str, Centroid]
    bounds: Mapping[str, IqrBounds]
    neutral_label: str

    def __post_init__(self) -> None:
        if set(self.centroids) != set(self.bounds):
            raise ValueError("centroids and bounds must cover the same emotions")
        if self.neutral_label in self.centroids:
            raise ValueError("neutral class must not appear in the fitted maps")
        for emotion, centroid in self.centroids.items():
            if centroid.mode != MODE_EMOTION_ADAPTIVE or centroid.emotion != emotion:
                raise ValueError(f"centroid for {emotion!r} must be emotion-adaptive "
                                 "and labeled with its class")

    def emotions(self) -> list[str]:
        return sorted(self.centroids)


def iqr_bounds(radii: Sequence[float]) -> IqrBounds:
    """Quartiles by linear interpolation between closest ranks, Tukey fences."""
    if len(radii) == 0:
        raise ValueError("iqr_bounds requires a non-empty sequence")
    arr = np.asarray(radii, dtype=np.float64)
    q1, q3 = np.percentile(arr, [25.0, 75.0])
    iqr = q3 - q1
    return IqrBounds(q1=float(q1), q3=float(q3),
                     r_min=float(q1 - 1.5 * iqr), r_max=float(q3 + 1.5 * iqr))


def normalize_radius(r: float, b: IqrBounds) -> float:
    """Clamp r into [r_min, r_max] and rescale affinely to [0, 1]."""
    if b.degenerate:
        raise ValueError("degenerate IQR bounds (r_min = r_max); cannot normalize")
    clamped = min(max(r, b.r_min), b.r_max)
    return (clamped - b.r_min) / (b.r_max - b.r_min)


def fit_easv_model(manifest: DatasetManifest,
                   cfg: SolverConfig | None = None) -> EasvModel:
    """Fit centroids and per-class radius bounds for every non-neutral class.

    Requires at least one neutral record and at least MIN_CLASS_RECORDS
    records per non-neutral class. Radii of constant spread (all class
    points equidistant from the centroid) are rejected because they leave
    nothing to normalize.
    """
    cfg = cfg or SolverConfig()
    neutrals = [r.vad for r in manifest.neutral_records()]
    if not neutrals:
        raise ValueError("no neutral records")

    centroids: dict[str, Centroid] = {}
    bounds: dict[str, IqrBounds] = {}
    for emotion in manifest.emotion_order():
        if emotion == manifest.neutral_label:
            continue
        class_records = manifest.class_records(emotion)
        if len(class_records) < MIN_CLASS_RECORDS:
            raise ValueError(
                f"class '{emotion}' has {len(class_records)} records; "
                f"need at least {MIN_CLASS_RECORDS}")
        targets = [r.vad for r in class_records]
        centroid = solve_centroid(targets, neutrals, cfg, emotion=emotion)
        radii = [to_spherical(shift(vad, centroid)).r for vad in targets]
        class_bounds = iqr_bounds(radii)
        if class_bounds.degenerate:
            raise ValueError(f"degenerate radius bounds for class '{emotion}'")
        centroids[emotion] = centroid
        bounds[emotion] = class_bounds
        logger.info("fit class '%s': centroid %s objective %.4f",
                    emotion, centroid.point, centroid.objective)
    return EasvModel(centroids=centroids, bounds=bounds,
                     neutral_label=manifest.neutral_label)


def extract_easv(record: UtteranceRecord, model: EasvModel) -> Easv:
    """Map one record to its spherical vector under the fitted model.

    Neutral records are exactly (0, 0, 0). Everything else is shifted by its
    class centroid; theta and phi pass through unchanged and only the radius
    is normalized.
    """
    if record.emotion == model.neutral_label:
        return Easv(0.0, 0.0, 0.0, record.emotion)
    centroid = model.centroids.get(record.emotion)
    if centroid is None:
        raise ValueError(f"unknown emotion class '{record.emotion}'")
    sv = to_spherical(shift(record.vad, centroid))
    r_iqr = normalize_radius(sv.r, model.bounds[record.emotion])
    return Easv(r_iqr=r_iqr, theta=sv.theta, phi=sv.phi, emotion=record.emotion)


def extract_easv_set(manifest: DatasetManifest, model: EasvModel) -> dict[str, Easv]:
    """Extract every manifest record, keyed by id in manifest (id-sorted) order."""
    return {r.id: extract_easv(r, model) for r in manifest.records}


def make_control_vector(spec: ControlSpec) -> Easv:
    """Spherical vector pointing down the octant's cube diagonal.

    The diagonal is the symmetric representative direction of a style
    octant; the requested intensity becomes the normalized radius directly.
    """
    sv, sa, sd = spec.octant.signs
    scale = 1.0 / np.sqrt(3.0)
    direction = ShiftedVad(sv * scale, sa * scale, sd * scale)
    angles = to_spherical(direction)
    return Easv(r_iqr=spec.intensity, theta=angles.theta, phi=angles.phi,
                emotion=spec.emotion)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def model_to_json(model: EasvModel, cfg: SolverConfig | None = None) -> str:
    """Serialize a model (with provenance) to a deterministic JSON document."""
    cfg = cfg or SolverConfig()
    doc = {
        "format": MODEL_FORMAT,
        "tool_version": TOOL_VERSION,
        "neutral_label": model.neutral_label,
        "solver": {
            "max_iterations": cfg.max_iterations,
            "simplex_tolerance": cfg.simplex_tolerance,
            "random_starts": cfg.random_starts,
            "seed": cfg.seed,
            "denominator_epsilon": cfg.denominator_epsilon,
        },
        "centroids": {
            emotion: {"point": list(c.point), "objective": c.objective}
            for emotion, c in model.centroids.items()
        },
        "bounds": {
            emotion: {"q1": b.q1, "q3": b.q3, "r_min": b.r_min, "r_max": b.r_max}
            for emotion, b in model.bounds.items()
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> EasvModel:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"not an EASV model document (format={doc.get('format')!r})")
    neutral_label = doc["neutral_label"]
    centroids = {
        emotion: Centroid(point=tuple(entry["point"]), mode=MODE_EMOTION_ADAPTIVE,
                          emotion=emotion, objective=entry.get("objective"))
        for emotion, entry in doc["centroids"].items()
    }
    bounds = {
        emotion: IqrBounds(q1=entry["q1"], q3=entry["q3"],
                           r_min=entry["r_min"], r_max=entry["r_max"])
        for emotion, entry in doc["bounds"].items()
    }
    return EasvModel(centroids=centroids, bounds=bounds, neutral_label=neutral_label)


def easv_set_to_jsonl(easvs: Mapping[str, Easv]) -> str:
    """One (id, emotion, r_iqr, theta, phi) object per line; angles in radians."""
    lines = []
    for rec_id, e in easvs.items():
        lines.append(json.dumps({
            "id": rec_id,
            "emotion": e.emotion,
            "r_iqr": e.r_iqr,
            "theta": e.theta,
            "phi": e.phi,
        }))
    return "\n".join(lines) + ("\n" if lines else "")


def easv_set_from_jsonl(text: str) -> dict[str, Easv]:
    out: dict[str, Easv] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {line_no}: malformed EASV record: {exc.msg}") from exc
        try:
            rec_id = obj["id"]
            easv = Easv(r_iqr=float(obj["r_iqr"]), theta=float(obj["theta"]),
                        phi=float(obj["phi"]), emotion=str(obj["emotion"]))
        except KeyError as exc:
            raise ValueError(f"line {line_no}: missing key {exc}") from exc
        if rec_id in out:
            raise ValueError(f"line {line_no}: duplicate id '{rec_id}'")
        out[rec_id] = easv
    return out

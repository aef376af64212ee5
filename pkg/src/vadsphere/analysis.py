"""Style-by-intensity prosodic variation reports.

Groups extracted spherical vectors by (emotion, style octant, intensity
region), aggregates prosody statistics per group, and derives the
per-octant variation range Rc (max - min over populated regions) and the
record-weighted average AVG. Neutral records are summarized separately
since their intensity is fixed at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .geometry import OCTANT_ORDER, StyleOctant, octant_from_angles
from .manifest import DatasetManifest
from .pipeline import Easv
from .prosody import ProsodyStats

FEATURES = ("pitch", "energy", "duration")

REGION_SPLITS = (0.33, 0.66)


class IntensityRegion(Enum):
    """Thirds of normalized intensity: [0, 0.33), [0.33, 0.66), [0.66, 1]."""

    R1 = "R1"
    R2 = "R2"
    R3 = "R3"


REGION_ORDER = tuple(IntensityRegion)


def bin_intensity(r_iqr: float) -> IntensityRegion:
    """Half-open binning at the 0.33 and 0.66 thresholds."""
    if not (0.0 <= r_iqr <= 1.0):
        raise ValueError(f"r_iqr {r_iqr} outside [0, 1]")
    if r_iqr < REGION_SPLITS[0]:
        return IntensityRegion.R1
    if r_iqr < REGION_SPLITS[1]:
        return IntensityRegion.R2
    return IntensityRegion.R3


@dataclass
class AnalysisCell:
    """Aggregate for one (emotion, octant, region) group."""

    emotion: str
    octant: StyleOctant
    region: IntensityRegion
    count: int
    pitch_mean: float | None
    energy_mean: float | None
    duration_mean: float | None

    def feature_mean(self, feature: str) -> float | None:
        return {"pitch": self.pitch_mean, "energy": self.energy_mean,
                "duration": self.duration_mean}[feature]


@dataclass
class NeutralSummary:
    """Whole-class aggregate for the neutral label (no octant/region split)."""

    count: int
    pitch_mean: float | None
    energy_mean: float | None
    duration_mean: float | None

    def feature_mean(self, feature: str) -> float | None:
        return {"pitch": self.pitch_mean, "energy": self.energy_mean,
                "duration": self.duration_mean}[feature]


@dataclass
class AnalysisReport:
    """Cells plus derived Rc/AVG maps; keys are plain string tuples."""

    cells: dict[tuple[str, str, str], AnalysisCell]
    rc: dict[tuple[str, str, str], float]
    avg: dict[tuple[str, str, str], float]
    neutral: NeutralSummary
    neutral_label: str
    emotion_order: tuple[str, ...]

    def cell(self, emotion: str, octant: StyleOctant,
             region: IntensityRegion) -> AnalysisCell | None:
        return self.cells.get((emotion, octant.tag, region.value))


def range_rc(values: Sequence[float | None],
             counts: Sequence[int]) -> float | None:
    """max - min over populated regions; None with fewer than 2 populated."""
    populated = [v for v, c in zip(values, counts) if c > 0 and v is not None]
    if len(populated) < 2:
        return None
    return max(populated) - min(populated)


@dataclass
class _Accumulator:
    count: int = 0
    sums: dict[str, float] = field(default_factory=lambda: dict.fromkeys(FEATURES, 0.0))
    counts: dict[str, int] = field(default_factory=lambda: dict.fromkeys(FEATURES, 0))

    def add(self, stats: ProsodyStats) -> None:
        self.count += 1
        for feature, value in (("pitch", stats.pitch_mean_hz),
                               ("energy", stats.energy_mean),
                               ("duration", stats.duration_s)):
            if value is not None:
                self.sums[feature] += value
                self.counts[feature] += 1

    def mean(self, feature: str) -> float | None:
        if self.counts[feature] == 0:
            return None
        return self.sums[feature] / self.counts[feature]


def build_report(easvs: Mapping[str, Easv],
                 prosody: Mapping[str, ProsodyStats],
                 manifest: DatasetManifest) -> AnalysisReport:
    """Assign every record to its (emotion, octant, region) cell and aggregate.

    The octant comes from each vector's own angles (the same class-adaptive
    shift that produced it), the region from its normalized intensity.
    Prosody is required for non-neutral records and optional for neutral
    ones. Means are arithmetic; a cell's pitch mean covers only the records
    that have a voiced pitch estimate.
    """
    by_id = manifest.by_id()
    acc: dict[tuple[str, str, str], _Accumulator] = {}
    neutral_acc = _Accumulator()
    neutral_count = 0

    for rec_id, easv in easvs.items():
        record = by_id.get(rec_id)
        if record is None:
            raise ValueError(f"easv id '{rec_id}' not found in manifest")
        if record.emotion != easv.emotion:
            raise ValueError(
                f"emotion mismatch for id '{rec_id}': manifest says "
                f"'{record.emotion}', easv says '{easv.emotion}'")
        if easv.emotion == manifest.neutral_label:
            neutral_count += 1
            stats = prosody.get(rec_id)
            if stats is not None:
                neutral_acc.add(stats)
            continue
        stats = prosody.get(rec_id)
        if stats is None:
            raise ValueError(f"missing prosody for record '{rec_id}'")
        octant = octant_from_angles(easv.theta, easv.phi)
        region = bin_intensity(easv.r_iqr)
        key = (easv.emotion, octant.tag, region.value)
        acc.setdefault(key, _Accumulator()).add(stats)

    cells: dict[tuple[str, str, str], AnalysisCell] = {}
    for (emotion, octant_tag, region_tag), a in acc.items():
        cells[(emotion, octant_tag, region_tag)] = AnalysisCell(
            emotion=emotion,
            octant=StyleOctant[octant_tag],
            region=IntensityRegion(region_tag),
            count=a.count,
            pitch_mean=a.mean("pitch"),
            energy_mean=a.mean("energy"),
            duration_mean=a.mean("duration"),
        )

    rc: dict[tuple[str, str, str], float] = {}
    avg: dict[tuple[str, str, str], float] = {}
    group_keys = sorted({(emotion, octant_tag) for emotion, octant_tag, _ in acc})
    for emotion, octant_tag in group_keys:
        for feature in FEATURES:
            region_means: list[float | None] = []
            region_counts: list[int] = []
            total_sum = 0.0
            total_count = 0
            for region in REGION_ORDER:
                a = acc.get((emotion, octant_tag, region.value))
                if a is None:
                    region_means.append(None)
                    region_counts.append(0)
                    continue
                region_means.append(a.mean(feature))
                region_counts.append(a.counts[feature])
                total_sum += a.sums[feature]
                total_count += a.counts[feature]
            spread = range_rc(region_means, region_counts)
            if spread is not None:
                rc[(emotion, octant_tag, feature)] = spread
            if total_count > 0:
                avg[(emotion, octant_tag, feature)] = total_sum / total_count

    neutral = NeutralSummary(
        count=neutral_count,
        pitch_mean=neutral_acc.mean("pitch"),
        energy_mean=neutral_acc.mean("energy"),
        duration_mean=neutral_acc.mean("duration"),
    )
    emotion_order = tuple(e for e in manifest.emotion_order()
                          if e != manifest.neutral_label)
    return AnalysisReport(cells=cells, rc=rc, avg=avg, neutral=neutral,
                          neutral_label=manifest.neutral_label,
                          emotion_order=emotion_order)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt_mean(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def _fmt_count(value: int | None) -> str:
    return "-" if value is None else f"{value:,}"


def _markdown(report: AnalysisReport) -> str:
    header = ["Emotion", "Style"]
    header += [f"N {r.value}" for r in REGION_ORDER] + ["N All"]
    for label in ("Pitch", "Energy", "Duration"):
        header += [f"{label} {r.value}" for r in REGION_ORDER]
        header += [f"{label} Rc", f"{label} AVG"]

    lines = [
        "# Prosodic variation by emotion style and intensity",
        "",
        "Intensity regions: R1 = [0, 0.33), R2 = [0.33, 0.66), R3 = [0.66, 1].",
        "Angles underlying the octants are in radians. Rc is the spread",
        "(max - min) of a feature's region means; AVG is the record-weighted",
        "mean. Neutral intensity is fixed at 0, so it carries no split.",
        "",
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]

    if report.neutral.count > 0:
        neutral_row = [report.neutral_label, "All", "-", "-", "-",
                       _fmt_count(report.neutral.count)]
        for feature in FEATURES:
            neutral_row += ["-", "-", "-", "-",
                            _fmt_mean(report.neutral.feature_mean(feature))]
        lines.append("| " + " | ".join(neutral_row) + " |")

    for emotion in report.emotion_order:
        for octant in OCTANT_ORDER:
            row_cells = [report.cell(emotion, octant, region) for region in REGION_ORDER]
            if all(c is None for c in row_cells):
                continue
            counts = [c.count if c else 0 for c in row_cells]
            row = [emotion, octant.tag]
            row += [_fmt_count(c.count) if c else "-" for c in row_cells]
            row.append(_fmt_count(sum(counts)))
            for feature in FEATURES:
                row += [_fmt_mean(c.feature_mean(feature)) if c else "-"
                        for c in row_cells]
                row.append(_fmt_mean(report.rc.get((emotion, octant.tag, feature))))
                row.append(_fmt_mean(report.avg.get((emotion, octant.tag, feature))))
            lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _csv(report: AnalysisReport) -> str:
    def raw(value: float | None) -> str:
        return "" if value is None else repr(value)

    lines = ["emotion,octant,region,count,pitch_mean,energy_mean,duration_mean"]
    if report.neutral.count > 0:
        lines.append(",".join([
            report.neutral_label, "", "", str(report.neutral.count),
            raw(report.neutral.pitch_mean), raw(report.neutral.energy_mean),
            raw(report.neutral.duration_mean),
        ]))
    for emotion in report.emotion_order:
        for octant in OCTANT_ORDER:
            for region in REGION_ORDER:
                c = report.cell(emotion, octant, region)
                if c is None:
                    continue
                lines.append(",".join([
                    emotion, octant.tag, region.value, str(c.count),
                    raw(c.pitch_mean), raw(c.energy_mean), raw(c.duration_mean),
                ]))
    return "\n".join(lines) + "\n"


def render_report(report: AnalysisReport, format: str = "markdown") -> str:
    """Render deterministically: manifest emotion order, octants I..VIII, R1..R3."""
    if format == "markdown":
        return _markdown(report)
    if format == "csv":
        return _csv(report)
    raise ValueError(f"unknown report format {format!r}; expected markdown or csv")

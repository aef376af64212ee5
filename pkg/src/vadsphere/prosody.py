"""Pitch, energy, and duration extraction plus prosodic error metrics.

Pitch uses the YIN difference function (de Cheveigne & Kawahara, 2002):
per frame, the cumulative-mean-normalized difference d'(tau) is searched
for the first dip under the aperiodicity threshold (falling back to the
global minimum), refined by parabolic interpolation. The dip depth doubles
as the voicing decision: a frame is voiced when its best d' value is below
the threshold, and periodicity is reported as 1 - d'.

Frame bookkeeping: energy frames are `window` samples advancing by `hop`;
pitch frames need `window + tau_max` samples (the difference function
correlates a window against lags up to tau_max), also advancing by `hop`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .manifest import AudioBuffer

MIN_SAMPLE_RATE = 8000


@dataclass(frozen=True)
class F0Config:
    """Pitch search range and framing; defaults target speech at 16-48 kHz."""

    f_min: float = 50.0
    f_max: float = 600.0
    window: int = 1024
    hop: int = 256
    aperiodicity_threshold: float = 0.15

    def __post_init__(self) -> None:
        if self.f_min < 50.0:
            raise ValueError("f_min must be >= 50 Hz")
        if self.f_max <= self.f_min:
            raise ValueError("f_max must exceed f_min")
        if self.window < 2 or self.hop < 1 or self.hop > self.window:
            raise ValueError("need window >= hop >= 1")
        if not (0.0 < self.aperiodicity_threshold < 1.0):
            raise ValueError("aperiodicity_threshold must lie in (0, 1)")


@dataclass
class F0Track:
    """Frame-aligned pitch, voicing, and periodicity sequences."""

    f0_hz: np.ndarray
    voiced: np.ndarray
    periodicity: np.ndarray
    hop: int
    sample_rate: int

    def __post_init__(self) -> None:
        self.f0_hz = np.asarray(self.f0_hz, dtype=np.float64)
        self.voiced = np.asarray(self.voiced, dtype=bool)
        self.periodicity = np.asarray(self.periodicity, dtype=np.float64)
        if not (len(self.f0_hz) == len(self.voiced) == len(self.periodicity)):
            raise ValueError("track sequences must have equal length")

    def __len__(self) -> int:
        return len(self.f0_hz)


@dataclass(frozen=True)
class ProsodyStats:
    """Per-utterance aggregates; pitch_mean_hz is None when nothing is voiced."""

    pitch_mean_hz: float | None
    energy_mean: float
    duration_s: float


def frame_energy(audio: AudioBuffer, window: int, hop: int) -> np.ndarray:
    """Root-mean-square of each `window`-sample frame, advancing by `hop`."""
    if not (window >= hop >= 1):
        raise ValueError("need window >= hop >= 1")
    if audio.samples.size < window:
        raise ValueError(
            f"audio shorter than one window ({audio.samples.size} < {window})")
    frames = np.lib.stride_tricks.sliding_window_view(audio.samples, window)[::hop]
    return np.sqrt(np.mean(frames ** 2, axis=1))


def _cmndf(diff: np.ndarray) -> np.ndarray:
    """Cumulative-mean-normalized difference; d'(0) = 1, 0/0 frames -> 1."""
    out = np.empty_like(diff)
    out[:, 0] = 1.0
    tau = np.arange(1, diff.shape[1], dtype=np.float64)
    cumsum = np.cumsum(diff[:, 1:], axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        out[:, 1:] = np.where(cumsum > 0.0, diff[:, 1:] * tau / cumsum, 1.0)
    return out


def _parabolic_refine(values: np.ndarray, i: int) -> float:
    """Sub-sample minimum location of a parabola through i-1, i, i+1."""
    if i <= 0 or i >= len(values) - 1:
        return float(i)
    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(i)
    return i + 0.5 * (y0 - y2) / denom


def estimate_f0(audio: AudioBuffer, cfg: F0Config | None = None) -> F0Track:
    """YIN-style per-frame pitch with a dip-depth voicing decision.

    Lag selection: the smallest lag whose d' dips under the threshold,
    descended to its local minimum (this rejects subharmonic picks at
    integer multiples of the true period); if nothing dips, the global
    minimum. Unvoiced frames carry f0 = 0 but keep their periodicity.
    """
    cfg = cfg or F0Config()
    sr = audio.sample_rate
    if sr < MIN_SAMPLE_RATE:
        raise ValueError(f"sample_rate {sr} below minimum {MIN_SAMPLE_RATE}")
    if cfg.f_max > min(600.0, sr / 4.0):
        raise ValueError(f"f_max {cfg.f_max} exceeds min(600, sample_rate/4)")

    tau_min = max(2, int(math.floor(sr / cfg.f_max)))
    tau_max = int(math.ceil(sr / cfg.f_min))
    frame_len = cfg.window + tau_max
    x = audio.samples
    if x.size < frame_len:
        raise ValueError(
            f"audio too short for pitch analysis: need {frame_len} samples "
            f"(window plus two periods of f_min), got {x.size}")

    frames = np.ascontiguousarray(
        np.lib.stride_tricks.sliding_window_view(x, frame_len)[::cfg.hop])
    diff = _kernels.yin_difference(frames, cfg.window, tau_max)
    cm = _cmndf(diff)

    n_frames = frames.shape[0]
    f0 = np.zeros(n_frames)
    voiced = np.zeros(n_frames, dtype=bool)
    periodicity = np.zeros(n_frames)
    threshold = cfg.aperiodicity_threshold
    for f in range(n_frames):
        row = cm[f]
        tau = -1
        for cand in range(tau_min, tau_max + 1):
            if row[cand] < threshold:
                tau = cand
                while tau + 1 <= tau_max and row[tau + 1] < row[tau]:
                    tau += 1
                break
        if tau < 0:
            tau = tau_min + int(np.argmin(row[tau_min:tau_max + 1]))
        aperiodicity = min(max(float(row[tau]), 0.0), 1.0)
        periodicity[f] = 1.0 - aperiodicity
        if aperiodicity < threshold:
            voiced[f] = True
            refined = _parabolic_refine(row, tau)
            refined = min(max(refined, float(tau_min)), float(tau_max))
            f0[f] = min(max(sr / refined, cfg.f_min), cfg.f_max)
    return F0Track(f0_hz=f0, voiced=voiced, periodicity=periodicity,
                   hop=cfg.hop, sample_rate=sr)


def utterance_prosody(audio: AudioBuffer, cfg: F0Config | None = None) -> ProsodyStats:
    """Pitch mean over voiced frames, RMS mean over all frames, duration."""
    cfg = cfg or F0Config()
    track = estimate_f0(audio, cfg)
    energy = frame_energy(audio, cfg.window, cfg.hop)
    pitch_mean = float(track.f0_hz[track.voiced].mean()) if track.voiced.any() else None
    return ProsodyStats(pitch_mean_hz=pitch_mean,
                        energy_mean=float(energy.mean()),
                        duration_s=audio.samples.size / audio.sample_rate)


def align_tracks(a: F0Track, b: F0Track) -> tuple[F0Track, F0Track]:
    """Truncate both tracks to the shorter frame count."""
    n = min(len(a), len(b))
    if n == 0:
        raise ValueError("cannot align empty tracks")

    def cut(t: F0Track) -> F0Track:
        if len(t) == n:
            return t
        return F0Track(f0_hz=t.f0_hz[:n], voiced=t.voiced[:n],
                       periodicity=t.periodicity[:n], hop=t.hop,
                       sample_rate=t.sample_rate)

    return cut(a), cut(b)


def _check_same_length(a: F0Track, b: F0Track) -> None:
    if len(a) != len(b):
        raise ValueError(
            f"frame-count mismatch ({len(a)} vs {len(b)}); align_tracks first")


def rmse_f0(a: F0Track, b: F0Track) -> float:
    """RMSE of f0 over frames voiced in both tracks."""
    _check_same_length(a, b)
    both = a.voiced & b.voiced
    if not both.any():
        raise ValueError("no commonly-voiced frame")
    err = a.f0_hz[both] - b.f0_hz[both]
    return float(np.sqrt(np.mean(err ** 2)))


def rmse_period(a: F0Track, b: F0Track) -> float:
    """RMSE of periodicity over all frames."""
    _check_same_length(a, b)
    if len(a) == 0:
        raise ValueError("rmse_period requires at least one frame")
    err = a.periodicity - b.periodicity
    return float(np.sqrt(np.mean(err ** 2)))


def f1_vuv(a: F0Track, b: F0Track) -> float:
    """F1 of the voiced class, with a as prediction and b as reference."""
    _check_same_length(a, b)
    if not b.voiced.any():
        raise ValueError("reference track is entirely unvoiced; F1 undefined")
    tp = int(np.sum(a.voiced & b.voiced))
    fp = int(np.sum(a.voiced & ~b.voiced))
    fn = int(np.sum(~a.voiced & b.voiced))
    return 2.0 * tp / (2.0 * tp + fp + fn)


# ---------------------------------------------------------------------------
# track serialization (line-delimited, for inspection and re-ingestion)
# ---------------------------------------------------------------------------

def track_to_text(track: F0Track) -> str:
    """Header comments plus one `frame f0 voiced periodicity` line per frame."""
    lines = [f"# hop={track.hop}", f"# sample_rate={track.sample_rate}"]
    for i in range(len(track)):
        lines.append(f"{i} {float(track.f0_hz[i])!r} {int(track.voiced[i])} "
                     f"{float(track.periodicity[i])!r}")
    return "\n".join(lines) + "\n"


def track_from_text(text: str) -> F0Track:
    hop = None
    sample_rate = None
    f0, voiced, periodicity = [], [], []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            key = key.strip()
            if key == "hop":
                hop = int(value)
            elif key == "sample_rate":
                sample_rate = int(value)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {line_no}: expected 'frame f0 voiced periodicity'")
        f0.append(float(parts[1]))
        voiced.append(bool(int(parts[2])))
        periodicity.append(float(parts[3]))
    if hop is None or sample_rate is None:
        raise ValueError("track text missing '# hop=' or '# sample_rate=' header")
    return F0Track(f0_hz=np.array(f0), voiced=np.array(voiced, dtype=bool),
                   periodicity=np.array(periodicity), hop=hop,
                   sample_rate=sample_rate)

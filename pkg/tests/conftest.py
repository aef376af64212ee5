"""Shared builders for synthetic manifests and audio."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np
import pytest

from vadsphere import DatasetManifest, UtteranceRecord, VadPoint
from vadsphere import _kernels

CLASS_CENTERS = {
    "neutral": (0.50, 0.50, 0.50),
    "happy": (0.76, 0.68, 0.62),
    "angry": (0.22, 0.82, 0.70),
    "sad": (0.30, 0.26, 0.36),
}


def synthetic_manifest(per_class: int = 200, seed: int = 2024,
                       spread: float = 0.11,
                       classes: dict | None = None) -> DatasetManifest:
    """Gaussian class clouds clipped to the cube, id-sorted."""
    rng = np.random.default_rng(seed)
    records = []
    for emotion, center in (classes or CLASS_CENTERS).items():
        points = np.clip(rng.normal(center, spread, size=(per_class, 3)), 0.0, 1.0)
        for i, p in enumerate(points):
            records.append(UtteranceRecord(
                id=f"{emotion}-{i:04d}",
                speaker=f"spk{i % 10}",
                emotion=emotion,
                vad=VadPoint(*p),
            ))
    records.sort(key=lambda r: r.id)
    return DatasetManifest(records=tuple(records), neutral_label="neutral")


def random_solver_instance(rng: np.random.Generator, n: int = 200):
    """One (targets, neutrals) pair of VadPoint clouds for solver tests."""
    t_center = rng.uniform(0.15, 0.85, 3)
    n_center = rng.uniform(0.35, 0.65, 3)
    t_spread = rng.uniform(0.05, 0.18)
    n_spread = rng.uniform(0.05, 0.15)
    targets = np.clip(rng.normal(t_center, t_spread, (n, 3)), 0.0, 1.0)
    neutrals = np.clip(rng.normal(n_center, n_spread, (n, 3)), 0.0, 1.0)
    return ([VadPoint(*p) for p in targets], [VadPoint(*p) for p in neutrals])


def sine_samples(freq: float, duration: float, sr: int = 22050,
                 amplitude: float = 0.8) -> np.ndarray:
    t = np.arange(int(round(duration * sr))) / sr
    return amplitude * np.sin(2.0 * np.pi * freq * t)


def write_wav(path: Path, samples: np.ndarray, sr: int, channels: int = 1) -> None:
    """16-bit PCM writer for test fixtures."""
    data = np.clip(samples, -1.0, 1.0)
    ints = (data * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(2)
        w.setframerate(sr)
        w.writeframes(ints.tobytes())


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the active kernels once so timing tests measure the algorithm."""
    _kernels.warm_up()


# One "[acceptance] <criterion>: PASS|FAIL" line per release criterion,
# echoed in the terminal summary regardless of capture mode.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

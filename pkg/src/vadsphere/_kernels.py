"""Hot numeric kernels, compiled with numba when available.

Two implementations exist for every kernel: a numba ``@njit`` version and a
pure-numpy version. The numpy path is selected when numba is not importable
or when the environment variable ``VADSPHERE_NO_NUMBA`` is set to a truthy
value (``1``, ``true``, ``yes``, ``on``). ``benchmarks/bench_kernels.py``
times both paths side by side.

Within one process a single path is active for all callers, so repeated runs
are bit-reproducible. The two paths may differ in the last few ulps (FFT vs
time-domain correlation, BLAS vs loop summation); every consumer tolerance
is orders of magnitude wider.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "VADSPHERE_NO_NUMBA"

# Lattice rows per chunk in the numpy grid scan; keeps the (chunk, n_points)
# distance matrix around 100 MB at 500 points/class.
_GRID_CHUNK = 32768


def _numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def distance_ratio_numpy(m: np.ndarray, targets: np.ndarray,
                         neutrals: np.ndarray, eps: float) -> float:
    """Mean distance to targets over mean distance to neutrals (plus eps)."""
    dist_t = np.sqrt(((targets - m) ** 2).sum(axis=1)).mean()
    dist_n = np.sqrt(((neutrals - m) ** 2).sum(axis=1)).mean()
    return float(dist_t / (dist_n + eps))


def grid_objective_values_numpy(axis: np.ndarray, targets: np.ndarray,
                                neutrals: np.ndarray, eps: float) -> np.ndarray:
    """Objective at every lattice point of axis x axis x axis, C order."""
    pts = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
    pts = pts.reshape(-1, 3)
    t_sq = (targets ** 2).sum(axis=1)
    n_sq = (neutrals ** 2).sum(axis=1)
    out = np.empty(pts.shape[0])
    for lo in range(0, pts.shape[0], _GRID_CHUNK):
        chunk = pts[lo:lo + _GRID_CHUNK]
        m_sq = (chunk ** 2).sum(axis=1)[:, None]
        # |m - e|^2 expanded so the cross term is a BLAS matmul
        dt = np.sqrt(np.maximum(m_sq - 2.0 * chunk @ targets.T + t_sq, 0.0))
        dn = np.sqrt(np.maximum(m_sq - 2.0 * chunk @ neutrals.T + n_sq, 0.0))
        out[lo:lo + _GRID_CHUNK] = dt.mean(axis=1) / (dn.mean(axis=1) + eps)
    return out


def yin_difference_numpy(frames: np.ndarray, window: int, tau_max: int) -> np.ndarray:
    """Per-frame squared difference function d(tau) for tau in [0, tau_max].

    FFT-based: d(tau) = E(0) + E(tau) - 2*corr(tau), with E(tau) the energy
    of the length-`window` slice starting at tau and corr the linear
    autocorrelation of the frame against its first `window` samples.
    """
    n_frames, frame_len = frames.shape
    n_fft = 1 << int(frame_len).bit_length()
    spec_full = np.fft.rfft(frames, n_fft, axis=1)
    spec_head = np.fft.rfft(frames[:, :window], n_fft, axis=1)
    corr = np.fft.irfft(spec_full * np.conj(spec_head), n_fft, axis=1)
    corr = corr[:, :tau_max + 1]
    sq = frames ** 2
    csum = np.concatenate([np.zeros((n_frames, 1)), np.cumsum(sq, axis=1)], axis=1)
    energy = csum[:, window:window + tau_max + 1] - csum[:, :tau_max + 1]
    d = energy[:, :1] + energy - 2.0 * corr
    return np.maximum(d, 0.0)


# ---------------------------------------------------------------------------
# numba implementations (compiled lazily on first call, cached on disk)
# ---------------------------------------------------------------------------

distance_ratio_numba = None
grid_objective_values_numba = None
yin_difference_numba = None

try:
    if _numba_disabled():
        raise ImportError(f"numba disabled via {ENV_FLAG}")
    from numba import njit, prange

    @njit(cache=True)
    def distance_ratio_numba(m, targets, neutrals, eps):  # noqa: F811
        acc_t = 0.0
        for i in range(targets.shape[0]):
            dv = m[0] - targets[i, 0]
            da = m[1] - targets[i, 1]
            dd = m[2] - targets[i, 2]
            acc_t += np.sqrt(dv * dv + da * da + dd * dd)
        acc_n = 0.0
        for i in range(neutrals.shape[0]):
            dv = m[0] - neutrals[i, 0]
            da = m[1] - neutrals[i, 1]
            dd = m[2] - neutrals[i, 2]
            acc_n += np.sqrt(dv * dv + da * da + dd * dd)
        return (acc_t / targets.shape[0]) / (acc_n / neutrals.shape[0] + eps)

    @njit(cache=True, parallel=True)
    def grid_objective_values_numba(axis, targets, neutrals, eps):  # noqa: F811
        n = axis.size
        out = np.empty(n * n * n)
        # independent writes per lattice point: deterministic under prange
        for idx in prange(n * n * n):
            v = axis[idx // (n * n)]
            a = axis[(idx // n) % n]
            d = axis[idx % n]
            acc_t = 0.0
            for i in range(targets.shape[0]):
                dv = v - targets[i, 0]
                da = a - targets[i, 1]
                dd = d - targets[i, 2]
                acc_t += np.sqrt(dv * dv + da * da + dd * dd)
            acc_n = 0.0
            for i in range(neutrals.shape[0]):
                dv = v - neutrals[i, 0]
                da = a - neutrals[i, 1]
                dd = d - neutrals[i, 2]
                acc_n += np.sqrt(dv * dv + da * da + dd * dd)
            out[idx] = (acc_t / targets.shape[0]) / (acc_n / neutrals.shape[0] + eps)
        return out

    @njit(cache=True, parallel=True)
    def yin_difference_numba(frames, window, tau_max):  # noqa: F811
        n_frames = frames.shape[0]
        out = np.empty((n_frames, tau_max + 1))
        for f in prange(n_frames):
            for tau in range(tau_max + 1):
                acc = 0.0
                for j in range(window):
                    diff = frames[f, j] - frames[f, j + tau]
                    acc += diff * diff
                out[f, tau] = acc
        return out

    USING_NUMBA = True
except ImportError:
    USING_NUMBA = False


if USING_NUMBA:
    distance_ratio = distance_ratio_numba
    grid_objective_values = grid_objective_values_numba
    yin_difference = yin_difference_numba
else:
    distance_ratio = distance_ratio_numpy
    grid_objective_values = grid_objective_values_numpy
    yin_difference = yin_difference_numpy


def warm_up() -> None:
    """Trigger JIT compilation of the active kernels on tiny inputs."""
    pts = np.zeros((2, 3))
    m = np.array([0.5, 0.5, 0.5])
    distance_ratio(m, pts, pts + 1.0, 1e-6)
    grid_objective_values(np.array([0.0, 1.0]), pts, pts + 1.0, 1e-6)
    yin_difference(np.zeros((2, 48)), 32, 16)

"""Inner loops for waveform-similarity overlap-add stretching.

Two interchangeable implementations of the same frame loop live here: a
vectorized numpy one and a scalar one compiled with numba when numba is
importable. Both follow identical arithmetic (same rounding convention,
same tie-breaking by first maximum), so their outputs can be compared
sample for sample. Set TEMPOSTEGO_NO_NUMBA=1 to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:
    njit = None

_DISABLED = bool(os.environ.get("TEMPOSTEGO_NO_NUMBA"))


def _best_offset(x, tb, lo, hi, overlap, te, sq):
    # Hottest loop: normalized cross-correlation over all candidate
    # offsets, first maximum wins. Compiled with fastmath so the dot
    # product vectorizes; that only reorders the correlation sum, which
    # np.correlate also does, while the energies in sq stay exact. The
    # template and window are hoisted as slices because a double-indexed
    # form (x[tb + i] * x[s + i]) defeats the vectorizer.
    tmpl = x[tb : tb + overlap]
    best = -3.0
    start = lo
    for s in range(lo, hi + 1):
        e = sq[s - lo + overlap] - sq[s - lo]
        if e > 0.0:
            win = x[s : s + overlap]
            c = 0.0
            for i in range(overlap):
                c += tmpl[i] * win[i]
            score = c / np.sqrt(te * e)
        else:
            score = -2.0
        if score > best:
            best = score
            start = s
    return start


if njit is not None:
    _best_offset = njit(cache=True, fastmath=True)(_best_offset)


def numpy_stretch(
    x: np.ndarray, ratio: float, seq: int, seek: int, overlap: int, n_out: int
) -> np.ndarray:
    """Stretch x to exactly n_out samples using numpy vector ops."""
    hop = seq - overlap
    n = x.shape[0]
    if n_out <= seq:
        n_frames = 1
    else:
        n_frames = (n_out - seq + hop - 1) // hop + 1
    out = np.zeros((n_frames - 1) * hop + seq)
    fade_in = np.arange(overlap) / overlap
    fade_out = 1.0 - fade_in

    out[:seq] = x[:seq]
    prev = 0
    for k in range(1, n_frames):
        nominal = int(np.floor(k * hop * ratio + 0.5))
        if nominal > n - seq:
            nominal = n - seq
        if nominal < 0:
            nominal = 0
        lo = nominal - seek
        if lo < 0:
            lo = 0
        hi = nominal + seek
        if hi > n - seq:
            hi = n - seq

        tb = prev + hop
        tmpl = x[tb : tb + overlap]
        te = float(np.dot(tmpl, tmpl))
        if te <= 0.0:
            # nothing to align against: keep the nominal grid position
            start = nominal
        else:
            seg = x[lo : hi + overlap]
            corr = np.correlate(seg, tmpl, mode="valid")
            sq = np.concatenate(([0.0], np.cumsum(seg * seg)))
            en = sq[overlap : overlap + corr.shape[0]] - sq[: corr.shape[0]]
            scores = np.full(corr.shape[0], -2.0)
            ok = en > 0.0
            scores[ok] = corr[ok] / np.sqrt(te * en[ok])
            start = lo + int(np.argmax(scores))

        o = k * hop
        out[o : o + overlap] = out[o : o + overlap] * fade_out + x[start : start + overlap] * fade_in
        out[o + overlap : o + seq] = x[start + overlap : start + seq]
        prev = start
    return out[:n_out].copy()


def _stretch_scalar(x, ratio, seq, seek, overlap, n_out):
    # Scalar twin of numpy_stretch; kept numba-compilable (no fancy indexing).
    hop = seq - overlap
    n = x.shape[0]
    if n_out <= seq:
        n_frames = 1
    else:
        n_frames = (n_out - seq + hop - 1) // hop + 1
    out = np.zeros((n_frames - 1) * hop + seq)
    fade_in = np.arange(overlap) / overlap
    fade_out = 1.0 - fade_in

    for i in range(seq):
        out[i] = x[i]
    prev = 0
    for k in range(1, n_frames):
        nominal = int(np.floor(k * hop * ratio + 0.5))
        if nominal > n - seq:
            nominal = n - seq
        if nominal < 0:
            nominal = 0
        lo = nominal - seek
        if lo < 0:
            lo = 0
        hi = nominal + seek
        if hi > n - seq:
            hi = n - seq

        tb = prev + hop
        te = 0.0
        for i in range(overlap):
            v = x[tb + i]
            te += v * v
        if te <= 0.0:
            start = nominal
        else:
            m = hi - lo + 1
            # window energies from one cumulative pass, same sequential
            # order as np.cumsum so both kernels see identical values
            sq = np.empty(m + overlap)
            acc = 0.0
            sq[0] = 0.0
            for j in range(m + overlap - 1):
                v = x[lo + j]
                acc += v * v
                sq[j + 1] = acc
            start = _best_offset(x, tb, lo, hi, overlap, te, sq)

        o = k * hop
        for i in range(overlap):
            out[o + i] = out[o + i] * fade_out[i] + x[start + i] * fade_in[i]
        for i in range(overlap, seq):
            out[o + i] = x[start + i]
        prev = start
    return out[:n_out].copy()


if njit is not None:
    numba_stretch = njit(cache=True)(_stretch_scalar)
else:
    numba_stretch = None


def active_backend() -> str:
    """Name of the stretch kernel stretch_core will dispatch to."""
    if numba_stretch is not None and not _DISABLED:
        return "numba"
    return "numpy"


def stretch_core(
    x: np.ndarray, ratio: float, seq: int, seek: int, overlap: int, n_out: int
) -> np.ndarray:
    if numba_stretch is not None and not _DISABLED:
        return numba_stretch(x, ratio, seq, seek, overlap, n_out)
    return numpy_stretch(x, ratio, seq, seek, overlap, n_out)

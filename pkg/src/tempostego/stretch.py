"""Pitch-preserving tempo change by waveform-similarity overlap-add.

The output is built from fixed-size frames taken from the input at
positions spaced by the tempo ratio. Each frame start is refined within a
small seek window so that the new frame lines up with the tail of the
previous one (maximum normalized cross-correlation over the overlap
region), then the frames are crossfaded. Pitch is untouched because
samples are never resampled, only re-spaced.

A ratio above 1 raises the tempo, so the output is shorter: the output
length is exactly round(len(input) / ratio) samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import stretch_core
from .audio import PcmBuffer
from .errors import BufferTooShort, RatioOutOfRange

RATIO_MIN = 0.5
RATIO_MAX = 2.0


@dataclass(frozen=True)
class StretchConfig:
    """Frame geometry in milliseconds. Defaults suit music at 44.1 kHz."""

    sequence_ms: float = 80.0
    seek_ms: float = 16.0
    overlap_ms: float = 10.0

    def __post_init__(self):
        if self.sequence_ms <= 0 or self.seek_ms <= 0 or self.overlap_ms <= 0:
            raise ValueError("stretch frame sizes must be positive")
        if self.overlap_ms >= self.sequence_ms:
            raise ValueError("overlap must be shorter than the sequence frame")


def stretch_tempo(
    buf: PcmBuffer, ratio: float, config: StretchConfig | None = None
) -> PcmBuffer:
    """Change tempo by `ratio` without changing pitch.

    ratio = 1.01 plays 1% faster (output shorter by 1%). The output length
    is exactly round(len(buf) / ratio). Raises RatioOutOfRange outside
    [0.5, 2.0] and BufferTooShort for inputs under two sequence frames.
    """
    if config is None:
        config = StretchConfig()
    if not (RATIO_MIN <= ratio <= RATIO_MAX):
        raise RatioOutOfRange(f"ratio {ratio} outside [{RATIO_MIN}, {RATIO_MAX}]")
    sr = buf.sample_rate
    seq = int(round(config.sequence_ms * sr / 1000.0))
    seek = int(round(config.seek_ms * sr / 1000.0))
    overlap = int(round(config.overlap_ms * sr / 1000.0))
    if overlap < 2 or seq <= overlap or seek < 1:
        raise ValueError(f"stretch config degenerates at {sr} Hz")
    if len(buf) < 2 * seq:
        raise BufferTooShort(
            f"need at least {2 * seq} samples ({2 * config.sequence_ms:.0f} ms), got {len(buf)}"
        )
    n_out = int(np.floor(len(buf) / ratio + 0.5))
    x = np.ascontiguousarray(buf.samples, dtype=np.float64)
    y = stretch_core(x, float(ratio), seq, seek, overlap, n_out)
    return PcmBuffer(samples=y, sample_rate=sr)

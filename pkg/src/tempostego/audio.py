"""WAV file I/O and mono PCM buffers.

All processing happens on mono float buffers with samples in [-1, 1].
Files are read with a small RIFF parser rather than the stdlib wave
module so that 24-bit PCM and 32-bit float content can be accepted and
so that malformed files fail with a precise error instead of a generic
one. Stereo input is mixed down to mono on read; output is always
16-bit mono PCM.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClippingWarning,
    IoError,
    MalformedHeader,
    OutOfRange,
    SampleRateMismatch,
    UnsupportedFormat,
)

WAVE_FORMAT_PCM = 1
WAVE_FORMAT_IEEE_FLOAT = 3


@dataclass(frozen=True)
class PcmBuffer:
    """Mono audio: float64 samples in [-1, 1] plus a sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.samples.ndim != 1:
            raise ValueError("PcmBuffer holds mono audio only")
        if self.sample_rate <= 0:
            raise ValueError("sample rate must be positive")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def read_wav(path: str) -> PcmBuffer:
    """Read a WAV file into a mono PcmBuffer.

    Accepts 8/16/24-bit integer PCM and 32-bit float, mono or stereo.
    Stereo is mixed down by channel mean. Integer samples are scaled by
    the full-scale value of their width (e.g. 16-bit by 1/32768).

    Raises IoError when the file cannot be read, MalformedHeader when the
    RIFF structure is broken, and UnsupportedFormat for other encodings.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if len(data) < 12:
        raise MalformedHeader(f"{path}: too small to be a WAV file")
    riff, _, wave_id = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF" or wave_id != b"WAVE":
        raise MalformedHeader(f"{path}: missing RIFF/WAVE signature")

    fmt = None
    raw = None
    pos = 12
    while pos + 8 <= len(data):
        cid, csize = struct.unpack_from("<4sI", data, pos)
        pos += 8
        if csize > len(data) - pos:
            raise MalformedHeader(f"{path}: chunk {cid!r} extends past end of file")
        body = data[pos : pos + csize]
        # chunks are word-aligned; odd sizes carry a pad byte
        pos += csize + (csize & 1)
        if cid == b"fmt ":
            if csize < 16:
                raise MalformedHeader(f"{path}: fmt chunk too small")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            raw = body

    if fmt is None:
        raise MalformedHeader(f"{path}: no fmt chunk")
    if raw is None:
        raise MalformedHeader(f"{path}: no data chunk")

    fmt_tag, channels, sample_rate, _, _, bits = fmt
    if fmt_tag not in (WAVE_FORMAT_PCM, WAVE_FORMAT_IEEE_FLOAT):
        raise UnsupportedFormat(f"{path}: format tag {fmt_tag} not supported")
    if channels not in (1, 2):
        raise UnsupportedFormat(f"{path}: {channels} channels not supported")
    if sample_rate == 0:
        raise MalformedHeader(f"{path}: zero sample rate")

    if fmt_tag == WAVE_FORMAT_PCM and bits == 8:
        x = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
        x = (x - 128.0) / 128.0
    elif fmt_tag == WAVE_FORMAT_PCM and bits == 16:
        n = len(raw) // 2
        x = np.frombuffer(raw[: n * 2], dtype="<i2").astype(np.float64) / 32768.0
    elif fmt_tag == WAVE_FORMAT_PCM and bits == 24:
        n = len(raw) // 3
        triplets = np.frombuffer(raw[: n * 3], dtype=np.uint8).reshape(n, 3)
        vals = (
            triplets[:, 0].astype(np.int64)
            | (triplets[:, 1].astype(np.int64) << 8)
            | (triplets[:, 2].astype(np.int64) << 16)
        )
        vals = np.where(vals >= 1 << 23, vals - (1 << 24), vals)
        x = vals.astype(np.float64) / float(1 << 23)
    elif fmt_tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        n = len(raw) // 4
        x = np.frombuffer(raw[: n * 4], dtype="<f4").astype(np.float64)
    else:
        raise UnsupportedFormat(f"{path}: {bits}-bit samples with format tag {fmt_tag}")

    if channels == 2:
        n = len(x) // 2
        x = x[: n * 2].reshape(n, 2).mean(axis=1)

    return PcmBuffer(samples=x, sample_rate=int(sample_rate))


def write_wav(buf: PcmBuffer, path: str) -> None:
    """Write a buffer as 16-bit mono PCM.

    Samples outside [-1, 1] are saturated and a ClippingWarning is issued.
    """
    if len(buf) == 0:
        raise ValueError("refusing to write an empty buffer")
    x = buf.samples
    if np.max(np.abs(x)) > 1.0:
        warnings.warn(
            "samples outside [-1, 1] were clipped on write", ClippingWarning, stacklevel=2
        )
    q = np.clip(np.rint(x * 32768.0), -32768, 32767).astype("<i2")
    payload = q.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        WAVE_FORMAT_PCM,
        1,
        buf.sample_rate,
        buf.sample_rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def slice_buffer(buf: PcmBuffer, start_s: float, end_s: float) -> PcmBuffer:
    """Extract [start_s, end_s) as a new buffer.

    Endpoints are converted with round(t * sample_rate) so adjacent slices
    share exact boundaries. The interval must be non-empty and lie inside
    the buffer.
    """
    i0 = int(round(start_s * buf.sample_rate))
    i1 = int(round(end_s * buf.sample_rate))
    if start_s < 0 or i0 < 0:
        raise OutOfRange(f"slice start {start_s} s is before the buffer")
    if i1 > len(buf):
        raise OutOfRange(f"slice end {end_s} s is past the buffer end")
    if i0 >= i1:
        raise OutOfRange(f"slice [{start_s}, {end_s}) s is empty")
    return PcmBuffer(samples=buf.samples[i0:i1].copy(), sample_rate=buf.sample_rate)


def concat(parts: list[PcmBuffer]) -> PcmBuffer:
    """Join buffers sample-exactly. All parts must share one sample rate."""
    if not parts:
        raise ValueError("concat needs at least one buffer")
    rate = parts[0].sample_rate
    for p in parts[1:]:
        if p.sample_rate != rate:
            raise SampleRateMismatch(f"cannot concat {p.sample_rate} Hz into {rate} Hz")
    return PcmBuffer(samples=np.concatenate([p.samples for p in parts]), sample_rate=rate)


def rms_dbfs(buf: PcmBuffer) -> float:
    """RMS level in dBFS; digital silence reads as -inf."""
    if len(buf) == 0:
        raise ValueError("rms of an empty buffer is undefined")
    mean_sq = float(np.mean(buf.samples**2))
    if mean_sq == 0.0:
        return float("-inf")
    return 10.0 * np.log10(mean_sq)

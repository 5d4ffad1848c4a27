"""Deterministic test signals, channel perturbations, and bit-error
accounting for end-to-end evaluation.

Click tracks stand in for real music: they have an unambiguous tempo, are
generated from a seed, and make every capacity and error count exactly
reproducible. The evaluate() protocol encodes the same message prefix
into each carrier (truncated to that carrier's capacity), optionally
passes the result through a perturbation, decodes, and tallies errors
against the expected bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import PcmBuffer
from .bits import ERASURE, BitString
from .codec import StegoParams, capacity, decode, encode
from .errors import StegoError
from .tempo import TempoConfig

CLICK_DECAY_S = 0.005
CLICK_LEN_S = 0.030
CLICK_PEAK = 0.8
SUBDIVISION_PEAK = 0.3


def generate_click_track(
    bpm: float,
    duration_s: float,
    sample_rate: int = 44100,
    *,
    seed: int = 0,
    subdivision: bool = False,
) -> PcmBuffer:
    """Metronome-style carrier: one noise burst per beat from t=0.

    Each click is a seeded white-noise burst with a 5 ms exponential
    decay, peak amplitude 0.8. With subdivision=True, quieter clicks
    (peak 0.3) land on the half beats.
    """
    if not (40.0 <= bpm <= 300.0):
        raise ValueError("bpm must be in [40, 300]")
    if duration_s < 1.0:
        raise ValueError("duration must be at least 1 s")
    if sample_rate < 8000:
        raise ValueError("sample rate must be at least 8 kHz")
    rng = np.random.default_rng(seed)
    burst_len = int(round(CLICK_LEN_S * sample_rate))
    t = np.arange(burst_len) / sample_rate
    burst = rng.uniform(-1.0, 1.0, burst_len) * np.exp(-t / CLICK_DECAY_S)
    burst /= np.max(np.abs(burst))

    n = int(round(duration_s * sample_rate))
    y = np.zeros(n)
    period = 60.0 / bpm

    def place(beat_time: float, peak: float) -> None:
        idx = int(round(beat_time * sample_rate))
        if idx >= n:
            return
        take = min(burst_len, n - idx)
        y[idx : idx + take] += peak * burst[:take]

    k = 0
    while k * period < duration_s:
        place(k * period, CLICK_PEAK)
        if subdivision:
            place((k + 0.5) * period, SUBDIVISION_PEAK)
        k += 1
    return PcmBuffer(samples=y, sample_rate=sample_rate)


@dataclass(frozen=True)
class Noise:
    """Additive white Gaussian noise at a given SNR (dB) below signal RMS."""

    snr_db: float
    seed: int = 0


@dataclass(frozen=True)
class Gain:
    """Uniform amplitude scaling."""

    factor: float


@dataclass(frozen=True)
class ResampleRoundTrip:
    """Linear resample to an intermediate rate and back, as a lossy
    broadcast chain would."""

    rate: int


Perturbation = Noise | Gain | ResampleRoundTrip


def perturb(buf: PcmBuffer, kind: Perturbation) -> PcmBuffer:
    """Apply a channel perturbation, returning a new buffer of the same
    length and sample rate."""
    x = buf.samples
    if isinstance(kind, Gain):
        if kind.factor <= 0:
            raise ValueError("gain factor must be positive")
        return PcmBuffer(samples=x * kind.factor, sample_rate=buf.sample_rate)
    if isinstance(kind, Noise):
        sig_rms = float(np.sqrt(np.mean(x**2)))
        if sig_rms == 0.0:
            return PcmBuffer(samples=x.copy(), sample_rate=buf.sample_rate)
        noise_rms = sig_rms * 10.0 ** (-kind.snr_db / 20.0)
        rng = np.random.default_rng(kind.seed)
        y = x + rng.standard_normal(len(x)) * noise_rms
        return PcmBuffer(samples=y, sample_rate=buf.sample_rate)
    if isinstance(kind, ResampleRoundTrip):
        if kind.rate < 4000:
            raise ValueError("intermediate rate must be at least 4 kHz")
        n = len(x)
        n_mid = int(round(n * kind.rate / buf.sample_rate))
        step = buf.sample_rate / kind.rate
        mid = np.interp(np.arange(n_mid) * step, np.arange(n), x)
        back = np.interp(np.arange(n) / step, np.arange(n_mid), mid)
        return PcmBuffer(samples=back, sample_rate=buf.sample_rate)
    raise TypeError(f"unknown perturbation {kind!r}")


def compare_bits(decoded: BitString, expected: BitString) -> tuple[int, int, int]:
    """(errors, erasures, compared) over the overlapping prefix.

    Erasures are positions the decoder declined; they are not errors and
    not compared.
    """
    errors = 0
    erasures = 0
    compared = 0
    for got, want in zip(decoded, expected):
        if got == ERASURE:
            erasures += 1
            continue
        compared += 1
        if got != want:
            errors += 1
    return errors, erasures, compared


@dataclass(frozen=True)
class FileResult:
    name: str
    duration_s: float
    capacity: int
    bits: BitString | None
    errors: int
    erasures: int
    compared: int
    failure: str | None = None


@dataclass(frozen=True)
class EvalResult:
    files: tuple[FileResult, ...]
    message: BitString
    params_used: StegoParams

    @property
    def total_errors(self) -> int:
        return sum(f.errors for f in self.files)

    @property
    def total_erasures(self) -> int:
        return sum(f.erasures for f in self.files)

    @property
    def total_compared(self) -> int:
        return sum(f.compared for f in self.files)

    @property
    def ber(self) -> float:
        if self.total_compared == 0:
            return 0.0
        return self.total_errors / self.total_compared

    def format_table(self) -> str:
        """Render per-file decoded bits, padded with 'x' beyond each
        file's capacity, plus a totals line."""
        name_w = max([len("(message)")] + [len(f.name) for f in self.files]) + 2
        bits_w = max(1, 2 * len(self.message) - 1)
        lines = [
            f"{'#':>3}  {'carrier':<{name_w}}{'dur_s':>7}  {'cap':>4}  "
            f"{'decoded bits':<{bits_w}}  {'err':>4}  {'ers':>4}"
        ]
        lines.append(
            f"{0:>3}  {'(message)':<{name_w}}{'-':>7}  {'-':>4}  "
            f"{str(self.message):<{bits_w}}  {'-':>4}  {'-':>4}"
        )
        for i, f in enumerate(self.files, start=1):
            if f.failure is not None:
                shown = f"<{f.failure}>"
                err = ers = "-"
            else:
                padded = list(f.bits.symbols) + [ERASURE] * (len(self.message) - len(f.bits))
                shown = str(BitString(tuple(padded)))
                err, ers = str(f.errors), str(f.erasures)
            lines.append(
                f"{i:>3}  {f.name:<{name_w}}{f.duration_s:>7.1f}  {f.capacity:>4}  "
                f"{shown:<{bits_w}}  {err:>4}  {ers:>4}"
            )
        lines.append(
            f"totals: errors {self.total_errors}/{self.total_compared}"
            f" (BER {self.ber:.4f}), erasures {self.total_erasures}"
        )
        return "\n".join(lines)


def evaluate(
    carriers: list[PcmBuffer],
    message: BitString,
    params: StegoParams | None = None,
    perturbation: Perturbation | None = None,
    tempo_config: TempoConfig | None = None,
    names: list[str] | None = None,
) -> EvalResult:
    """Encode, (optionally) perturb, and decode the same message prefix
    in every carrier; tally bit errors per file.

    A carrier that fails outright (for example a silent reference) is
    recorded with the error name instead of bits and contributes nothing
    to the totals.
    """
    if params is None:
        params = StegoParams()
    if names is None:
        names = [f"carrier-{i + 1}" for i in range(len(carriers))]
    results = []
    for name, carrier in zip(names, carriers):
        cap = capacity(carrier.duration_s, params)
        prefix = message[: min(cap, len(message))]
        try:
            stego = encode(carrier, prefix, params, tempo_config=tempo_config)
            if perturbation is not None:
                stego = perturb(stego, perturbation)
            report = decode(
                stego, params, max_bits=len(prefix), tempo_config=tempo_config
            )
            errors, erasures, compared = compare_bits(report.bits, prefix)
            results.append(
                FileResult(
                    name=name,
                    duration_s=carrier.duration_s,
                    capacity=cap,
                    bits=report.bits,
                    errors=errors,
                    erasures=erasures,
                    compared=compared,
                )
            )
        except StegoError as exc:
            results.append(
                FileResult(
                    name=name,
                    duration_s=carrier.duration_s,
                    capacity=cap,
                    bits=None,
                    errors=0,
                    erasures=0,
                    compared=0,
                    failure=type(exc).__name__,
                )
            )
    return EvalResult(files=tuple(results), message=message, params_used=params)


def split_on_silence(
    stream: PcmBuffer,
    min_silence_s: float = 2.0,
    threshold_dbfs: float = -50.0,
) -> list[PcmBuffer]:
    """Cut a stream at silent gaps, as a broadcast recording splitter.

    The stream is scanned in 20 ms frames; runs of frames below
    threshold_dbfs lasting at least min_silence_s become separators.
    Returned segments keep their interior short pauses but have leading
    and trailing silent frames removed. All-silent input yields [].
    """
    if min_silence_s <= 0:
        raise ValueError("min_silence_s must be positive")
    sr = stream.sample_rate
    frame_n = max(1, int(round(0.020 * sr)))
    n = len(stream)
    n_frames = (n + frame_n - 1) // frame_n
    silent = np.zeros(n_frames, dtype=bool)
    for f in range(n_frames):
        piece = stream.samples[f * frame_n : (f + 1) * frame_n]
        mean_sq = float(np.mean(piece**2))
        level = float("-inf") if mean_sq == 0.0 else 10.0 * np.log10(mean_sq)
        silent[f] = level < threshold_dbfs
    need = max(1, int(np.ceil(min_silence_s * sr / frame_n)))

    # separator frames: silent runs of at least `need`
    separator = np.zeros(n_frames, dtype=bool)
    f = 0
    while f < n_frames:
        if silent[f]:
            g = f
            while g < n_frames and silent[g]:
                g += 1
            if g - f >= need:
                separator[f:g] = True
            f = g
        else:
            f += 1

    segments = []
    f = 0
    while f < n_frames:
        if separator[f]:
            f += 1
            continue
        g = f
        while g < n_frames and not separator[g]:
            g += 1
        # trim edge silence shorter than a separator
        a, b = f, g
        while a < b and silent[a]:
            a += 1
        while b > a and silent[b - 1]:
            b -= 1
        if b > a:
            seg = stream.samples[a * frame_n : min(n, b * frame_n)].copy()
            segments.append(PcmBuffer(samples=seg, sample_rate=sr))
        f = g
    return segments

"""Hiding bits in constant-tempo audio by per-slice tempo modulation.

The carrier is cut into fixed slices of phi_s seconds. The first slice is
left untouched and serves as the tempo reference; the last (possibly
partial) slice is an untouched tail. Every slice in between carries one
bit: its tempo is raised by delta (1% by default) for one symbol and
lowered by delta for the other. The change is far below the ~2.75%
absolute accuracy of tempo estimation, so a listener or a single
measurement cannot tell, but the *direction* of the difference between a
payload slice and the reference survives measurement noise.

Decoding measures tempo candidates in a trimmed window of each slice and
compares them against the reference's candidates: all cross pairs become
percentage differences ("attributes"), pairs whose magnitude exceeds
discard_pct are dropped (they compare unrelated harmonics), and the sign
of the surviving sum names the direction. A slice with no usable pairs
becomes an erasure, not a guess.

Because stretched slices change length, slice boundaries in the encoded
file drift away from the nominal i * phi_s grid. In the default Tracked
boundary mode the decoder advances each boundary by the slice length
implied by the bit it just decoded, keeping windows aligned; Static mode
reads the nominal grid and tolerates the drift.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .audio import PcmBuffer, rms_dbfs
from .bits import ERASURE, BitString, plan_spanning
from .errors import (
    InvalidSymbol,
    LowEnergy,
    MessageTooLong,
    NoPeriodicity,
    ReferenceSilent,
    TooShort,
    Undecidable,
)
from .stretch import StretchConfig, stretch_tempo
from .tempo import TempoCandidates, TempoConfig, estimate_tempo

# Decisions with confidence below this are flagged in report warnings.
LOW_CONFIDENCE = 0.5

# Reference silence scan: any 2 s window under the RMS gate disqualifies
# the reference slice. 2 s is long enough that the gaps of a sparse 40 BPM
# pulse never trip it, short enough to catch a few seconds of lead-in
# silence hiding inside an otherwise loud slice.
_SILENCE_WIN_S = 2.0
_SILENCE_HOP_S = 1.0

# Decoding must not depend on playback level, so the stego buffer is
# normalized to this RMS before any measurement. Digital silence stays at
# -inf dBFS regardless, so the silence guards still work.
_NORM_TARGET_DBFS = -20.0


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"


class BoundaryMode(enum.Enum):
    STATIC = "static"
    TRACKED = "tracked"


@dataclass(frozen=True)
class StegoParams:
    """Channel geometry shared by encoder and decoder.

    phi_s: slice length in seconds (one hidden bit per payload slice).
    delta: tempo offset fraction; 0.01 means payload slices play 1%
        faster or slower than the reference.
    trim_frac: fraction trimmed from each end of a slice before measuring
        tempo, so boundary artifacts and drift stay out of the window.
    discard_pct: attribute gate; candidate-pair differences larger than
        this (in percent) compare different harmonics and are ignored.
    bit_one_direction: which tempo direction encodes a 1 bit.
    boundary_mode: how the decoder advances slice boundaries.
    """

    phi_s: float = 10.0
    delta: float = 0.01
    trim_frac: float = 0.05
    discard_pct: float = 4.0
    bit_one_direction: Direction = Direction.UP
    boundary_mode: BoundaryMode = BoundaryMode.TRACKED

    def __post_init__(self):
        if self.phi_s < 10.0:
            raise ValueError("phi_s must be at least 10 s")
        if not (0.0 < self.delta <= 0.03):
            raise ValueError("delta must be in (0, 0.03]")
        if not (0.0 <= self.trim_frac < 0.5):
            raise ValueError("trim_frac must be in [0, 0.5)")
        if self.discard_pct <= 0.0:
            raise ValueError("discard_pct must be positive")
        if self.phi_s * (1.0 - 2.0 * self.trim_frac) < 9.0:
            raise ValueError("trimmed measurement window would be under 9 s")


@dataclass(frozen=True)
class SliceDecision:
    slice_index: int
    direction: Direction | None
    confidence: float
    candidate_count_used: int


@dataclass(frozen=True)
class DecodeReport:
    bits: BitString
    per_slice: tuple[SliceDecision, ...]
    warnings: tuple[str, ...]
    params_used: StegoParams

    def to_dict(self) -> dict:
        return {
            "bits": str(self.bits),
            "per_slice": [
                {
                    "slice_index": d.slice_index,
                    "direction": d.direction.value if d.direction else None,
                    "confidence": d.confidence,
                    "candidate_count_used": d.candidate_count_used,
                }
                for d in self.per_slice
            ],
            "warnings": list(self.warnings),
            "params": {
                "phi_s": self.params_used.phi_s,
                "delta": self.params_used.delta,
                "trim_frac": self.params_used.trim_frac,
                "discard_pct": self.params_used.discard_pct,
                "bit_one_direction": self.params_used.bit_one_direction.value,
                "boundary_mode": self.params_used.boundary_mode.value,
            },
        }


@dataclass(frozen=True)
class SlicePlan:
    """Sample intervals covering the whole carrier: reference, payload
    slices, untouched tail. Intervals are contiguous and non-overlapping."""

    reference: tuple[int, int]
    data: tuple[tuple[int, int], ...]
    tail: tuple[int, int]
    sample_rate: int

    @property
    def capacity(self) -> int:
        return len(self.data)


def capacity(duration_s: float, params: StegoParams | None = None) -> int:
    """Payload bits a carrier of this duration can hold.

    One whole slice anchors the reference and one is reserved for the
    tail, so floor(duration / phi_s) - 2, floored at zero.
    """
    if params is None:
        params = StegoParams()
    n_slices = int(math.floor(duration_s / params.phi_s + 1e-9))
    return max(0, n_slices - 2)


def plan_slices(n_samples: int, sample_rate: int, params: StegoParams) -> SlicePlan:
    phi_n = int(round(params.phi_s * sample_rate))
    n_slices = n_samples // phi_n
    if n_slices == 0:
        return SlicePlan((0, n_samples), (), (n_samples, n_samples), sample_rate)
    data = tuple((i * phi_n, (i + 1) * phi_n) for i in range(1, max(1, n_slices - 1)))
    if n_slices == 1:
        data = ()
    tail_start = phi_n if n_slices == 1 else (n_slices - 1) * phi_n
    return SlicePlan((0, phi_n), data, (tail_start, n_samples), sample_rate)


def _ratio_for(direction: Direction, delta: float) -> float:
    # Raising tempo by delta shortens the slice by the same factor.
    return 1.0 + delta if direction is Direction.UP else 1.0 - delta


def _direction_for_bit(bit: int, params: StegoParams) -> Direction:
    one = params.bit_one_direction
    other = Direction.DOWN if one is Direction.UP else Direction.UP
    return one if bit == 1 else other


def _reference_silent(ref: PcmBuffer, min_rms_dbfs: float) -> bool:
    sr = ref.sample_rate
    win = min(len(ref), int(round(_SILENCE_WIN_S * sr)))
    hop = max(1, int(round(_SILENCE_HOP_S * sr)))
    for start in range(0, len(ref) - win + 1, hop):
        piece = PcmBuffer(samples=ref.samples[start : start + win], sample_rate=sr)
        if rms_dbfs(piece) < min_rms_dbfs:
            return True
    return False


def _surviving_attributes(
    reference: TempoCandidates, sample: TempoCandidates, discard_pct: float
) -> list[float]:
    kept = []
    for ref_bpm, _ in reference.entries:
        for smp_bpm, _ in sample.entries:
            attr = 100.0 * (smp_bpm - ref_bpm) / ref_bpm
            if abs(attr) <= discard_pct:
                kept.append(attr)
    return kept


def _decide(kept: list[float]) -> tuple[Direction, float]:
    if not kept:
        raise Undecidable("all candidate pairs exceeded the discard gate")
    total = sum(kept)
    if total == 0.0:
        raise Undecidable("surviving attributes sum to exactly zero")
    return (Direction.UP if total > 0.0 else Direction.DOWN), abs(total)


def classify_slice(
    reference: TempoCandidates, sample: TempoCandidates, params: StegoParams | None = None
) -> tuple[Direction, float]:
    """Decide whether `sample` plays faster (UP) or slower (DOWN) than
    `reference`.

    Every (reference candidate, sample candidate) pair yields a percentage
    difference; pairs beyond discard_pct are dropped and the sign of the
    surviving sum is the direction. The absolute sum is returned as a
    confidence figure. Raises Undecidable when nothing survives or the
    sum is exactly zero.
    """
    if params is None:
        params = StegoParams()
    return _decide(_surviving_attributes(reference, sample, params.discard_pct))


def encode(
    carrier: PcmBuffer,
    message: BitString,
    params: StegoParams | None = None,
    tempo_config: TempoConfig | None = None,
    stretch_config: StretchConfig | None = None,
) -> PcmBuffer:
    """Embed a message, returning the modulated carrier.

    The reference slice and tail pass through untouched, as do payload
    slices beyond the end of the message. Raises MessageTooLong when the
    message exceeds the carrier's capacity, ReferenceSilent when the first
    slice contains silence (decoding would be anchored to a bad tempo
    measurement), and InvalidSymbol if the message carries erasures.
    """
    if params is None:
        params = StegoParams()
    if tempo_config is None:
        tempo_config = TempoConfig()
    if message.has_erasures:
        raise InvalidSymbol("cannot embed a message containing erasures")
    plan = plan_slices(len(carrier), carrier.sample_rate, params)
    if len(message) > plan.capacity:
        raise MessageTooLong(message_bits=len(message), capacity=plan.capacity)

    a, b = plan.reference
    reference = PcmBuffer(samples=carrier.samples[a:b], sample_rate=carrier.sample_rate)
    if _reference_silent(reference, tempo_config.min_rms_dbfs):
        raise ReferenceSilent("the reference slice contains silence")

    parts = [carrier.samples[a:b]]
    for i, (s0, s1) in enumerate(plan.data):
        piece = PcmBuffer(samples=carrier.samples[s0:s1], sample_rate=carrier.sample_rate)
        if i < len(message):
            ratio = _ratio_for(_direction_for_bit(message[i], params), params.delta)
            piece = stretch_tempo(piece, ratio, stretch_config)
        parts.append(piece.samples)
    t0, t1 = plan.tail
    if t1 > t0:
        parts.append(carrier.samples[t0:t1])
    return PcmBuffer(samples=np.concatenate(parts), sample_rate=carrier.sample_rate)


def decode(
    stego: PcmBuffer,
    params: StegoParams | None = None,
    *,
    max_bits: int | None = None,
    tempo_config: TempoConfig | None = None,
    reference_override: TempoCandidates | None = None,
    force_decide: bool = False,
) -> DecodeReport:
    """Recover bits from a carrier encoded with the same params.

    The buffer is RMS-normalized first, so the result does not depend on
    playback level (only digital silence is still treated as silence).
    Reads every payload slice (or the first max_bits). Slices the
    classifier cannot decide come back as erasures unless force_decide is
    set, which breaks ties toward DOWN with zero confidence. Slices where
    tempo measurement itself fails (silence, no periodicity) are always
    erasures and noted in the warnings.

    reference_override substitutes externally supplied reference
    candidates in place of measuring the first slice; it exists for
    testing how a corrupted reference propagates, and skips the silence
    guard.
    """
    if params is None:
        params = StegoParams()
    if tempo_config is None:
        tempo_config = TempoConfig()
    sr = stego.sample_rate
    phi_n = int(round(params.phi_s * sr))
    trim_n = int(round(params.trim_frac * params.phi_s * sr))
    win_n = phi_n - 2 * trim_n
    n = len(stego)
    if n < 3 * phi_n:
        raise TooShort("decoding needs at least three slices of audio")
    samples = stego.samples
    mean_sq = float(np.mean(samples**2))
    if mean_sq > 0.0:
        samples = samples * (10.0 ** (_NORM_TARGET_DBFS / 20.0) / np.sqrt(mean_sq))
    stego = PcmBuffer(samples=samples, sample_rate=sr)
    n_slices = n // phi_n
    if max_bits is None:
        n_read = n_slices - 2
    else:
        # A message with more raised than lowered slices shrinks the file,
        # which can drop the last payload slice out of the n_slices - 2
        # bound; an explicit max_bits is allowed to reach one slice past it
        # (the net drift never exceeds one slice length).
        n_read = min(max_bits, n_slices - 1)

    if reference_override is None:
        reference = PcmBuffer(samples=stego.samples[0:phi_n], sample_rate=sr)
        if _reference_silent(reference, tempo_config.min_rms_dbfs):
            raise ReferenceSilent("the reference slice contains silence")
        ref_cands = estimate_tempo(
            PcmBuffer(samples=stego.samples[trim_n : phi_n - trim_n], sample_rate=sr),
            tempo_config,
        )
    else:
        ref_cands = reference_override

    symbols: list[int] = []
    decisions: list[SliceDecision] = []
    notes: list[str] = []
    boundary = float(phi_n)
    for i in range(1, n_read + 1):
        if params.boundary_mode is BoundaryMode.STATIC:
            boundary = float(i * phi_n)
        w0 = int(round(boundary)) + trim_n
        w1 = w0 + win_n
        if w1 > n:
            notes.append(f"slice {i}: window runs past the end; stopping")
            break
        window = PcmBuffer(samples=stego.samples[w0:w1], sample_rate=sr)

        direction: Direction | None = None
        conf = 0.0
        used = 0
        try:
            cands = estimate_tempo(window, tempo_config)
        except (LowEnergy, NoPeriodicity, TooShort) as exc:
            notes.append(f"slice {i}: {type(exc).__name__}")
        else:
            kept = _surviving_attributes(ref_cands, cands, params.discard_pct)
            used = len(kept)
            try:
                direction, conf = _decide(kept)
            except Undecidable:
                if force_decide:
                    direction, conf = Direction.DOWN, 0.0
                else:
                    notes.append(f"slice {i}: Undecidable")

        if direction is None:
            symbols.append(ERASURE)
        else:
            symbols.append(1 if direction == params.bit_one_direction else 0)
            if conf < LOW_CONFIDENCE:
                notes.append(f"slice {i}: low confidence {conf:.3f}")
        decisions.append(SliceDecision(i, direction, conf, used))

        if params.boundary_mode is BoundaryMode.TRACKED:
            if direction is None:
                boundary += phi_n
            else:
                boundary += phi_n / _ratio_for(direction, params.delta)

    return DecodeReport(
        bits=BitString(tuple(symbols)),
        per_slice=tuple(decisions),
        warnings=tuple(notes),
        params_used=params,
    )


def encode_playlist(
    carriers: list[PcmBuffer],
    message: BitString,
    params: StegoParams | None = None,
    tempo_config: TempoConfig | None = None,
) -> list[PcmBuffer]:
    """Spread one message across several carriers, in order.

    Capacities are computed per carrier and the message is split
    greedily; trailing carriers may come back unmodified. Raises
    InsufficientCapacity when the message cannot fit in total.
    """
    if params is None:
        params = StegoParams()
    caps = [capacity(c.duration_s, params) for c in carriers]
    segments = plan_spanning(message, caps)
    return [
        encode(c, seg, params, tempo_config=tempo_config)
        for c, seg in zip(carriers, segments)
    ]

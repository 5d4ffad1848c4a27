import os
import subprocess
import sys

import numpy as np
import pytest

from tempostego import (
    BufferTooShort,
    PcmBuffer,
    RatioOutOfRange,
    StretchConfig,
    estimate_tempo,
    stretch_tempo,
)
from tempostego._kernels import numba_stretch, numpy_stretch

SR = 44100


def sine(freq, duration_s, amp=0.5):
    t = np.arange(int(duration_s * SR)) / SR
    return PcmBuffer(samples=amp * np.sin(2 * np.pi * freq * t), sample_rate=SR)


def dominant_freq(buf):
    spec = np.abs(np.fft.rfft(buf.samples * np.hanning(len(buf))))
    return np.argmax(spec) * buf.sample_rate / len(buf)


@pytest.mark.parametrize("ratio", [0.9, 0.97, 0.99, 1.0, 1.01, 1.03, 1.1])
def test_length_law(click, ratio):
    buf = click(120, 10.0)
    out = stretch_tempo(buf, ratio)
    assert abs(len(out) * ratio - len(buf)) / len(buf) <= 0.005


def test_identity_ratio_reconstructs_content(click):
    buf = click(120, 10.0)
    out = stretch_tempo(buf, 1.0)
    assert len(out) == len(buf)
    corr = np.corrcoef(out.samples, buf.samples)[0, 1]
    assert corr >= 0.99


def test_sine_stretch_preserves_pitch():
    out = stretch_tempo(sine(440, 10.0), 1.01)
    assert out.duration_s == pytest.approx(9.901, abs=0.05)
    # a resampler would read 444.4 Hz here
    assert dominant_freq(out) == pytest.approx(440.0, abs=2.0)


@pytest.mark.parametrize("freq", [100, 440, 2000])
@pytest.mark.parametrize("ratio", [0.97, 1.03])
def test_pitch_drift_below_one_percent(freq, ratio):
    out = stretch_tempo(sine(freq, 6.0), ratio)
    assert abs(dominant_freq(out) - freq) / freq <= 0.01


def click_intervals(buf, min_gap_s=0.2):
    hits = np.flatnonzero(np.abs(buf.samples) > 0.4)
    starts = hits[np.concatenate(([True], np.diff(hits) > int(min_gap_s * buf.sample_rate)))]
    return np.diff(starts) / buf.sample_rate


def test_click_interval_law(click):
    buf = click(120, 20.0)
    for ratio in (0.99, 1.01):
        out = stretch_tempo(buf, ratio)
        mean_interval = float(np.mean(click_intervals(out)))
        assert mean_interval == pytest.approx(0.5 / ratio, rel=0.01)


def test_stretched_track_measures_scaled_tempo(click):
    out = stretch_tempo(click(120, 12.0), 0.99)
    assert estimate_tempo(out).best_bpm == pytest.approx(118.8, abs=1.0)


def test_round_trip_composition_length(click):
    buf = click(100, 10.0)
    back = stretch_tempo(stretch_tempo(buf, 1.03), 1 / 1.03)
    assert abs(back.duration_s - buf.duration_s) / buf.duration_s <= 0.01


@pytest.mark.parametrize("ratio", [0.4, 2.5, 0.0, -1.0])
def test_ratio_bounds(ratio, click):
    with pytest.raises(RatioOutOfRange):
        stretch_tempo(click(120, 10.0), ratio)


def test_short_buffer_rejected():
    with pytest.raises(BufferTooShort):
        stretch_tempo(sine(440, 0.1), 1.01)


def test_config_validation():
    with pytest.raises(ValueError):
        StretchConfig(sequence_ms=10, overlap_ms=20)
    with pytest.raises(ValueError):
        StretchConfig(seek_ms=0)


def test_kernels_agree_exactly(click):
    if numba_stretch is None:
        pytest.skip("numba unavailable")
    seq = int(round(0.080 * SR))
    seek = int(round(0.016 * SR))
    overlap = int(round(0.010 * SR))
    inputs = [click(120, 8.0).samples, sine(440, 8.0).samples]
    for x in inputs:
        for ratio in (0.99, 1.0, 1.01):
            n_out = int(np.floor(len(x) / ratio + 0.5))
            a = numpy_stretch(x, ratio, seq, seek, overlap, n_out)
            b = numba_stretch(x, ratio, seq, seek, overlap, n_out)
            assert len(a) == n_out
            assert np.array_equal(a, b)


def test_backend_env_flag_selects_numpy():
    code = (
        "from tempostego._kernels import active_backend; print(active_backend())"
    )
    env = dict(os.environ, TEMPOSTEGO_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"


def test_backend_defaults_to_numba_when_available():
    if numba_stretch is None:
        pytest.skip("numba unavailable")
    env = {k: v for k, v in os.environ.items() if k != "TEMPOSTEGO_NO_NUMBA"}
    code = (
        "from tempostego._kernels import active_backend; print(active_backend())"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numba"

"""Command-line front end.

Subcommands mirror the library one to one: encode, decode, capacity,
tempo, evaluate, make-carrier, split. All tempo-channel flags default to
the StegoParams defaults. On failure the process exits nonzero and
prints "error: <ErrorName>: detail" on stderr so scripts can match on
the error name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .audio import read_wav, slice_buffer, write_wav
from .bits import BitString, parse_bitstring, text_to_bits
from .codec import (
    BoundaryMode,
    StegoParams,
    capacity,
    decode,
    encode,
)
from .errors import StegoError
from .harness import (
    Gain,
    Noise,
    ResampleRoundTrip,
    evaluate,
    generate_click_track,
)
from .harness import (
    split_on_silence as split_stream,
)
from .tempo import estimate_tempo


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    d = StegoParams()
    p.add_argument("--phi", type=float, default=d.phi_s, help="slice length in seconds")
    p.add_argument("--delta", type=float, default=d.delta, help="tempo offset fraction (0.01 = 1%%)")
    p.add_argument("--trim", type=float, default=d.trim_frac, help="fraction trimmed per slice edge")
    p.add_argument("--discard", type=float, default=d.discard_pct, help="attribute discard gate in percent")
    p.add_argument(
        "--mode",
        choices=["tracked", "static"],
        default=d.boundary_mode.value,
        help="decoder slice boundary mode",
    )


def _params_from(args: argparse.Namespace) -> StegoParams:
    return StegoParams(
        phi_s=args.phi,
        delta=args.delta,
        trim_frac=args.trim,
        discard_pct=args.discard,
        boundary_mode=BoundaryMode(args.mode),
    )


def _add_payload_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="payload as 8-bit text")
    group.add_argument("--bits", help='payload as a bit string, e.g. "1 1 0 1" or "1101"')
    group.add_argument("--hex", help="payload as hex bytes, e.g. deadbeef")


def _payload_from(args: argparse.Namespace) -> BitString:
    if args.text is not None:
        return text_to_bits(args.text)
    if args.bits is not None:
        return parse_bitstring(args.bits)
    return text_to_bits(bytes.fromhex(args.hex).decode("latin-1"))


def _parse_perturb(spec: str):
    kind, _, value = spec.partition(":")
    if kind == "noise":
        return Noise(snr_db=float(value))
    if kind == "gain":
        return Gain(factor=float(value))
    if kind == "resample":
        return ResampleRoundTrip(rate=int(value))
    raise ValueError(f"unknown perturbation {spec!r}; use noise:SNR, gain:F, or resample:RATE")


def _parse_generate(spec: str) -> list[tuple[float, float]]:
    items = []
    for part in spec.split(","):
        bpm_s, _, dur_s = part.partition("@")
        if not dur_s:
            raise ValueError(f"bad --generate item {part!r}; use BPM@SECONDS")
        items.append((float(bpm_s), float(dur_s)))
    return items


def _cmd_encode(args) -> int:
    params = _params_from(args)
    message = _payload_from(args)
    carrier = read_wav(getattr(args, "in"))
    cap = capacity(carrier.duration_s, params)
    stego = encode(carrier, message, params)
    write_wav(stego, args.out)
    print(f"embedded {len(message)} bits (capacity {cap}) -> {args.out}")
    return 0


def _cmd_decode(args) -> int:
    params = _params_from(args)
    stego = read_wav(getattr(args, "in"))
    report = decode(
        stego, params, max_bits=args.max_bits, force_decide=args.force_decide
    )
    print(str(report.bits))
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
        print(f"report written to {args.report}", file=sys.stderr)
    return 0


def _cmd_capacity(args) -> int:
    params = _params_from(args)
    carrier = read_wav(getattr(args, "in"))
    print(capacity(carrier.duration_s, params))
    return 0


def _cmd_tempo(args) -> int:
    buf = read_wav(getattr(args, "in"))
    if args.from_s is not None or args.to_s is not None:
        start = args.from_s if args.from_s is not None else 0.0
        end = args.to_s if args.to_s is not None else buf.duration_s
        buf = slice_buffer(buf, start, end)
    cands = estimate_tempo(buf)
    for bpm, strength in cands.entries:
        print(f"{bpm:.2f} {strength:.3f}")
    return 0


def _cmd_evaluate(args) -> int:
    params = _params_from(args)
    message = _payload_from(args)
    if args.carriers:
        paths = sorted(
            os.path.join(args.carriers, f)
            for f in os.listdir(args.carriers)
            if f.lower().endswith(".wav")
        )
        if not paths:
            raise ValueError(f"no .wav files in {args.carriers}")
        carriers = [read_wav(p) for p in paths]
        names = [os.path.basename(p) for p in paths]
    else:
        items = _parse_generate(args.generate)
        carriers = [
            generate_click_track(bpm, dur, seed=i) for i, (bpm, dur) in enumerate(items)
        ]
        names = [f"click-{bpm:g}bpm-{dur:g}s" for bpm, dur in items]
    perturbation = _parse_perturb(args.perturb) if args.perturb else None
    result = evaluate(carriers, message, params, perturbation=perturbation, names=names)
    print(result.format_table())
    return 0


def _cmd_make_carrier(args) -> int:
    buf = generate_click_track(
        args.bpm,
        args.duration,
        sample_rate=args.sr,
        seed=args.seed,
        subdivision=args.subdivision,
    )
    write_wav(buf, args.out)
    print(f"wrote {args.out} ({buf.duration_s:.1f} s at {args.bpm:g} BPM)")
    return 0


def _cmd_split(args) -> int:
    stream = read_wav(getattr(args, "in"))
    segments = split_stream(
        stream, min_silence_s=args.min_silence, threshold_dbfs=args.threshold
    )
    os.makedirs(args.out_dir, exist_ok=True)
    for i, seg in enumerate(segments, start=1):
        path = os.path.join(args.out_dir, f"segment-{i:02d}.wav")
        write_wav(seg, path)
        print(f"wrote {path} ({seg.duration_s:.1f} s)")
    if not segments:
        print("no non-silent segments found", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempostego",
        description="Hide and recover bit strings in constant-tempo audio "
        "by slice-wise tempo modulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="embed a payload into a WAV carrier")
    p.add_argument("--in", required=True, help="carrier WAV")
    p.add_argument("--out", required=True, help="output WAV")
    _add_payload_flags(p)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="recover a payload from a WAV file")
    p.add_argument("--in", required=True, help="encoded WAV")
    p.add_argument("--max-bits", type=int, default=None, help="stop after this many bits")
    p.add_argument("--report", default=None, help="write a JSON decode report here")
    p.add_argument(
        "--force-decide",
        action="store_true",
        help="break undecidable slices toward Down instead of emitting x",
    )
    _add_param_flags(p)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("capacity", help="payload bits a carrier can hold")
    p.add_argument("--in", required=True, help="carrier WAV")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("tempo", help="print tempo candidates as 'bpm strength' lines")
    p.add_argument("--in", required=True, help="input WAV")
    p.add_argument("--from", dest="from_s", type=float, default=None, help="window start, seconds")
    p.add_argument("--to", dest="to_s", type=float, default=None, help="window end, seconds")
    p.set_defaults(func=_cmd_tempo)

    p = sub.add_parser("evaluate", help="bit-error evaluation over a set of carriers")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--carriers", help="directory of carrier WAVs")
    src.add_argument("--generate", help='generate click tracks, e.g. "120@194,128@222"')
    _add_payload_flags(p)
    p.add_argument("--perturb", default=None, help="noise:SNR_DB | gain:FACTOR | resample:RATE")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("make-carrier", help="generate a click-track WAV")
    p.add_argument("--bpm", type=float, required=True)
    p.add_argument("--duration", type=float, required=True, help="seconds")
    p.add_argument("--out", required=True)
    p.add_argument("--sr", type=int, default=44100, help="sample rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subdivision", action="store_true", help="add quieter half-beat clicks")
    p.set_defaults(func=_cmd_make_carrier)

    p = sub.add_parser("split", help="cut a stream at silent gaps into segment WAVs")
    p.add_argument("--in", required=True, help="input WAV stream")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-silence", type=float, default=2.0, help="seconds")
    p.add_argument("--threshold", type=float, default=-50.0, help="dBFS")
    p.set_defaults(func=_cmd_split)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StegoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Message representation: bit strings with an explicit erasure symbol.

A decoded message is a sequence over the alphabet {0, 1, erasure}. An
erasure marks a position the decoder looked at but could not decide, so
callers can distinguish "read as zero" from "could not read". Messages
being embedded never contain erasures.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import InsufficientCapacity, InvalidSymbol

ERASURE = -1

_CHAR_FOR = {0: "0", 1: "1", ERASURE: "x"}


@dataclass(frozen=True)
class BitString:
    """Immutable sequence of symbols from {0, 1, ERASURE}."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        for s in self.symbols:
            if s not in (0, 1, ERASURE):
                raise InvalidSymbol(f"symbol {s!r} is not 0, 1, or ERASURE")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        return cls(tuple(int(b) for b in bits))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString(self.symbols[index])
        return self.symbols[index]

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self.symbols + other.symbols)

    @property
    def has_erasures(self) -> bool:
        return ERASURE in self.symbols

    def erasure_count(self) -> int:
        return self.symbols.count(ERASURE)

    def __str__(self) -> str:
        return " ".join(_CHAR_FOR[s] for s in self.symbols)


def parse_bitstring(s: str) -> BitString:
    """Parse "1 0 1" or "101" into a BitString.

    Whitespace is ignored. Any character other than 0, 1, or whitespace
    raises InvalidSymbol; erasures are not accepted on input.
    """
    out = []
    for ch in s:
        if ch.isspace():
            continue
        if ch == "0":
            out.append(0)
        elif ch == "1":
            out.append(1)
        else:
            raise InvalidSymbol(f"unexpected character {ch!r} in bit string")
    return BitString(tuple(out))


def text_to_bits(text: str) -> BitString:
    """Encode text as bits, one byte per character, most significant bit first.

    The mapping is byte-transparent: every code point must fit in one byte
    (Latin-1), and every 8-bit pattern round-trips unchanged.
    """
    try:
        raw = text.encode("latin-1")
    except UnicodeEncodeError as exc:
        raise InvalidSymbol(f"text is not 8-bit clean: {exc}") from None
    bits = []
    for byte in raw:
        for shift in range(7, -1, -1):
            bits.append((byte >> shift) & 1)
    return BitString(tuple(bits))


def bits_to_text(bits: BitString) -> str:
    """Inverse of text_to_bits. The input must be erasure-free and a whole
    number of bytes long."""
    if bits.has_erasures:
        raise InvalidSymbol("cannot convert bits with erasures to text")
    if len(bits) % 8 != 0:
        raise InvalidSymbol(f"bit count {len(bits)} is not a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for b in bits.symbols[i : i + 8]:
            byte = (byte << 1) | b
        out.append(byte)
    return out.decode("latin-1")


def plan_spanning(message: BitString, capacities: Sequence[int]) -> list[BitString]:
    """Split a message across carriers greedily, in order.

    Each carrier receives up to its capacity; trailing carriers may receive
    nothing. Raises InsufficientCapacity when the combined capacity cannot
    hold the whole message.
    """
    total = sum(capacities)
    if len(message) > total:
        raise InsufficientCapacity(required=len(message), available=total)
    segments = []
    pos = 0
    for cap in capacities:
        take = min(cap, len(message) - pos)
        segments.append(message[pos : pos + take])
        pos += take
    return segments

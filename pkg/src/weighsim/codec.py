"""Bit-exact codec for the weigh-scale ADC serial frame.

One conversion is clocked out as 25-27 pulses on a shared clock/data pair:

    pulses 1-24   data bits, two's complement code, MSB first
    extra pulses  select gain/channel for the *next* conversion:
                      +1 pulse (25 total) → channel A, gain 128
                      +2 pulses (26 total) → channel B, gain 32
                      +3 pulses (27 total) → channel A, gain 64

The data line idles high once bit 24 has been shifted out, so the encoder
emits '1' for every configuration pulse; the decoder ignores those bit
values and counts pulses only. Timing (clock frequency, the ready-line
transition) is represented logically by AdcFrame.data_ready, not as
wall-clock time.

Wire text format: one frame per line, each line a string of '0'/'1'
characters, length 25-27. The decoder is total over arbitrary lines:
anything invalid raises a typed FrameError, never an unhandled crash.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedFrameError, TruncatedFrameError
from .sensor import AdcFrame

DATA_BITS = 24

#: (gain, channel) → number of configuration pulses after the data bits.
CONFIG_PULSES = {(128, "A"): 1, (32, "B"): 2, (64, "A"): 3}

#: Total pulse count → (gain, channel). Bijective with CONFIG_PULSES.
PULSE_COUNT_GAIN = {DATA_BITS + n: gc for gc, n in CONFIG_PULSES.items()}


@dataclass(frozen=True)
class BitTrace:
    """Clock-pulse sequence; each pulse carries one data-line bit."""

    bits: str

    def __post_init__(self) -> None:
        if any(c not in "01" for c in self.bits):
            raise MalformedFrameError(f"trace contains non-bit symbols: {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    def to_line(self) -> str:
        return self.bits

    @classmethod
    def from_line(cls, line: str) -> "BitTrace":
        return cls(line.strip())


def encode_frame(frame: AdcFrame) -> BitTrace:
    """Serialize a frame to its 25/26/27-pulse bit trace."""
    word = frame.code & 0xFFFFFF  # two's complement, 24 bits
    data = format(word, "024b")
    config = "1" * CONFIG_PULSES[(frame.gain, frame.channel)]
    return BitTrace(data + config)


def decode_frame(trace: BitTrace | str | bytes) -> AdcFrame:
    """Inverse of encode_frame; sign-extends bit 23.

    Total over arbitrary text or byte lines: raises TruncatedFrameError
    when fewer than 24 data pulses arrived and MalformedFrameError for any
    other invalid pulse count or symbol.
    """
    if isinstance(trace, (bytes, bytearray)):
        trace = trace.decode("latin-1")
    if isinstance(trace, str):
        trace = BitTrace.from_line(trace)
    n = len(trace)
    if n < DATA_BITS:
        raise TruncatedFrameError(f"only {n} pulses, need {DATA_BITS} data bits")
    if n not in PULSE_COUNT_GAIN:
        raise MalformedFrameError(f"invalid pulse count {n}, expected one of {sorted(PULSE_COUNT_GAIN)}")
    code = int(trace.bits[:DATA_BITS], 2)
    if code >= 2**23:
        code -= 2**24
    gain, channel = PULSE_COUNT_GAIN[n]
    return AdcFrame.from_code(code, gain=gain, channel=channel)

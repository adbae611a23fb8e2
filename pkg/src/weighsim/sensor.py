"""Load-cell signal chain: applied mass → bridge voltage → 24-bit ADC code.

Models one strain-gauge load cell read through a Wheatstone bridge and a
weigh-scale ADC of the HX711 family (24-bit, gain/channel selected per
conversion). Everything here is deterministic unless noise is explicitly
added, so the chain doubles as a firmware test bench.

Unit conventions
----------------
  mass           kg
  bridge output  mV (differential)
  excitation     V
  rated output   mV per V of excitation at full capacity
  temperature    °C
  time           ms (monotonic, producer-assigned)

Bridge model
------------
With load fraction f = applied_mass / capacity and dT = T - reference_temp:

    span = excitation_v * rated_output_mv_v          # mV at full capacity
    v = span * f * (1 + temp_coeff_span_per_c * dT)  # proportional term
        + nonlinearity * span * f**2                 # smooth quadratic bow
        + zero_offset_mv
        + temp_coeff_zero_mv_c * dT                  # zero drift

The quadratic is the simplest smooth deviation from proportionality and is
bounded by the |nonlinearity| < 5 % sanity check.

ADC characterization
--------------------
The full-scale differential input referred to the bridge is ±vref/gain
(so higher gain narrows the input window). Codes are

    code = round(v / full_scale * 2**23)

clamped to the signed 24-bit range. A code sitting on either rail is
reported saturated: at the rail an in-range reading is indistinguishable
from an overrange one, and the serial frame carries no separate flag.

Default excitation (5 V), noise (0) and sample rate (10 Sa/s) are
implementer-chosen placeholders, not characterized hardware values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MechanicalOverrangeError
from . import kvfile

CODE_MIN = -(2**23)
CODE_MAX = 2**23 - 1

#: Gain → valid channel. Gain is selected by the extra clock pulses of the
#: serial frame; only these three combinations exist.
GAIN_CHANNELS = {128: "A", 64: "A", 32: "B"}

#: Mechanical overrange: loads beyond this fraction of capacity risk
#: permanent deformation and are rejected rather than simulated.
OVERRANGE_FACTOR = 1.5


@dataclass(frozen=True)
class LoadCellSpec:
    """Physical and electrical parameters of one load cell.

    capacity_kg          rated capacity
    rated_output_mv_v    sensitivity, mV per V of excitation at capacity
    excitation_v         bridge excitation voltage
    zero_offset_mv       bridge output at zero load, reference temperature
    nonlinearity         fraction of full scale, quadratic bow (|x| < 0.05)
    noise_sigma_mv       std dev of additive Gaussian voltage noise
    temp_coeff_zero_mv_c zero drift, mV per °C away from reference
    temp_coeff_span_per_c span drift, fraction per °C away from reference
    reference_temp_c     temperature at which offsets/drift vanish
    """

    capacity_kg: float
    rated_output_mv_v: float = 2.0
    excitation_v: float = 5.0
    zero_offset_mv: float = 0.0
    nonlinearity: float = 0.0
    noise_sigma_mv: float = 0.0
    temp_coeff_zero_mv_c: float = 0.0
    temp_coeff_span_per_c: float = 0.0
    reference_temp_c: float = 25.0

    def __post_init__(self) -> None:
        if self.capacity_kg <= 0:
            raise ValueError(f"capacity must be > 0, got {self.capacity_kg}")
        if self.excitation_v <= 0:
            raise ValueError(f"excitation must be > 0, got {self.excitation_v}")
        if self.rated_output_mv_v <= 0:
            raise ValueError(f"rated output must be > 0, got {self.rated_output_mv_v}")
        if self.noise_sigma_mv < 0:
            raise ValueError(f"noise sigma must be >= 0, got {self.noise_sigma_mv}")
        if abs(self.nonlinearity) >= 0.05:
            raise ValueError(f"|nonlinearity| must be < 0.05, got {self.nonlinearity}")

    @property
    def span_mv(self) -> float:
        """Bridge output swing from zero load to capacity, in mV."""
        return self.excitation_v * self.rated_output_mv_v

    @classmethod
    def from_file(cls, path: str | Path) -> "LoadCellSpec":
        """Load a spec from a `key = value` file (keys match field names)."""
        source = str(path)
        values = kvfile.as_dict(kvfile.read_kv(path), source)
        return cls(
            capacity_kg=kvfile.get_float(values, "capacity_kg", source),
            rated_output_mv_v=kvfile.get_float(values, "rated_output_mv_v", source, 2.0),
            excitation_v=kvfile.get_float(values, "excitation_v", source, 5.0),
            zero_offset_mv=kvfile.get_float(values, "zero_offset_mv", source, 0.0),
            nonlinearity=kvfile.get_float(values, "nonlinearity", source, 0.0),
            noise_sigma_mv=kvfile.get_float(values, "noise_sigma_mv", source, 0.0),
            temp_coeff_zero_mv_c=kvfile.get_float(values, "temp_coeff_zero_mv_c", source, 0.0),
            temp_coeff_span_per_c=kvfile.get_float(values, "temp_coeff_span_per_c", source, 0.0),
            reference_temp_c=kvfile.get_float(values, "reference_temp_c", source, 25.0),
        )

    def to_file(self, path: str | Path) -> None:
        pairs = [
            ("capacity_kg", repr(self.capacity_kg)),
            ("rated_output_mv_v", repr(self.rated_output_mv_v)),
            ("excitation_v", repr(self.excitation_v)),
            ("zero_offset_mv", repr(self.zero_offset_mv)),
            ("nonlinearity", repr(self.nonlinearity)),
            ("noise_sigma_mv", repr(self.noise_sigma_mv)),
            ("temp_coeff_zero_mv_c", repr(self.temp_coeff_zero_mv_c)),
            ("temp_coeff_span_per_c", repr(self.temp_coeff_span_per_c)),
            ("reference_temp_c", repr(self.reference_temp_c)),
        ]
        kvfile.write_kv(path, pairs, header="load cell parameters")


#: 5 kg cell of the two-cell deck configuration.
TWO_CELL_5KG = LoadCellSpec(capacity_kg=5.0)

#: 120 kg cell of the four-cell deck configuration.
FOUR_CELL_120KG = LoadCellSpec(capacity_kg=120.0)


@dataclass(frozen=True)
class BridgeReading:
    """One differential bridge voltage sample."""

    differential_mv: float
    temperature_c: float
    timestamp_ms: int = 0


@dataclass(frozen=True)
class AdcConfig:
    """Converter configuration for one conversion.

    Gain 128 and 64 exist on channel A only; gain 32 on channel B only.
    """

    vref_v: float = 5.0
    gain: int = 128
    channel: str = "A"
    sample_rate_hz: float = 10.0

    def __post_init__(self) -> None:
        if self.gain not in GAIN_CHANNELS:
            raise ValueError(f"gain must be one of {sorted(GAIN_CHANNELS)}, got {self.gain}")
        if GAIN_CHANNELS[self.gain] != self.channel:
            raise ValueError(
                f"gain {self.gain} is only valid on channel {GAIN_CHANNELS[self.gain]!r},"
                f" got {self.channel!r}"
            )
        if self.vref_v <= 0:
            raise ValueError(f"vref must be > 0, got {self.vref_v}")

    @property
    def full_scale_mv(self) -> float:
        """Positive full-scale differential input referred to the bridge."""
        return self.vref_v / self.gain * 1000.0


@dataclass(frozen=True)
class AdcFrame:
    """One signed 24-bit conversion result plus the next gain selection.

    `saturated` follows the rail convention: True exactly when the code
    sits on either end of the 24-bit range. `data_ready` is the logical
    stand-in for the converter's ready line; frames produced by this
    package are always ready.
    """

    code: int
    gain: int = 128
    channel: str = "A"
    saturated: bool = False
    data_ready: bool = True

    def __post_init__(self) -> None:
        if not CODE_MIN <= self.code <= CODE_MAX:
            raise ValueError(f"code {self.code} outside signed 24-bit range")
        if self.gain not in GAIN_CHANNELS:
            raise ValueError(f"gain must be one of {sorted(GAIN_CHANNELS)}, got {self.gain}")
        if GAIN_CHANNELS[self.gain] != self.channel:
            raise ValueError(
                f"gain {self.gain} is only valid on channel {GAIN_CHANNELS[self.gain]!r}"
            )

    @classmethod
    def from_code(cls, code: int, gain: int = 128, channel: str = "A") -> "AdcFrame":
        """Build a frame, deriving the saturation flag from the rails."""
        return cls(
            code=code,
            gain=gain,
            channel=channel,
            saturated=code in (CODE_MIN, CODE_MAX),
        )


def bridge_output(
    spec: LoadCellSpec,
    applied_mass_kg: float,
    temperature_c: float | None = None,
    timestamp_ms: int = 0,
) -> BridgeReading:
    """Noise-free bridge voltage for a compressive load.

    Raises MechanicalOverrangeError beyond 150 % of capacity; that is a
    destructive load, distinct from (and well before) electrical
    saturation of the ADC.
    """
    if applied_mass_kg < 0:
        raise ValueError(f"applied mass must be >= 0, got {applied_mass_kg}")
    if applied_mass_kg > OVERRANGE_FACTOR * spec.capacity_kg:
        raise MechanicalOverrangeError(
            f"{applied_mass_kg} kg exceeds {OVERRANGE_FACTOR:.0%} of the"
            f" {spec.capacity_kg} kg capacity"
        )
    if temperature_c is None:
        temperature_c = spec.reference_temp_c
    fraction = applied_mass_kg / spec.capacity_kg
    dt = temperature_c - spec.reference_temp_c
    v = (
        spec.span_mv * fraction * (1.0 + spec.temp_coeff_span_per_c * dt)
        + spec.nonlinearity * spec.span_mv * fraction**2
        + spec.zero_offset_mv
        + spec.temp_coeff_zero_mv_c * dt
    )
    return BridgeReading(differential_mv=v, temperature_c=temperature_c, timestamp_ms=timestamp_ms)


def add_noise(
    reading: BridgeReading,
    spec: LoadCellSpec,
    rng: int | np.random.Generator,
) -> BridgeReading:
    """Add Gaussian voltage noise (std dev = spec.noise_sigma_mv).

    `rng` is a seed or a Generator; pass one Generator through a stream of
    readings to get independent draws that are still reproducible.
    """
    if spec.noise_sigma_mv == 0.0:
        return reading
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    noisy = reading.differential_mv + rng.normal(0.0, spec.noise_sigma_mv)
    return BridgeReading(
        differential_mv=noisy,
        temperature_c=reading.temperature_c,
        timestamp_ms=reading.timestamp_ms,
    )


def quantize(reading: BridgeReading, adc: AdcConfig | None = None) -> AdcFrame:
    """Quantize a bridge voltage to a signed 24-bit code.

    Saturation clamps to the rails and is flagged on the frame, never an
    error. Rounding is Python's round-half-even.
    """
    if adc is None:
        adc = AdcConfig()
    code = round(reading.differential_mv / adc.full_scale_mv * 2**23)
    code = max(CODE_MIN, min(CODE_MAX, code))
    return AdcFrame.from_code(code, gain=adc.gain, channel=adc.channel)


def dequantize(frame: AdcFrame, adc: AdcConfig) -> float:
    """Voltage (mV) a code corresponds to; inverse of `quantize` up to 1 LSB."""
    return frame.code / 2**23 * adc.full_scale_mv


def lsb_mv(adc: AdcConfig) -> float:
    """Size of one quantization step in mV."""
    return adc.full_scale_mv / 2**23

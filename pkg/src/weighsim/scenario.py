"""Forward statics: placed point masses → per-corner loads.

This is the ground-truth side of the package. A rigid deck on four
supports distributes a point mass bilinearly between the corners, which
is the standard corner-weight-scale resolution of the four-support
problem and makes the CoG round trip exact: feeding the corner loads of
any scenario back through the four-cell assessment recovers the mass
centroid to floating-point precision.

Coordinates follow the package convention (x rearward from the front cell
line, y leftward from the right cell line), so the corner weights for a
mass m at (x, y) on an L×T deck are

    FL  m * (1 - x/L) * (y/T)        FR  m * (1 - x/L) * (1 - y/T)
    RL  m * (x/L)     * (y/T)        RR  m * (x/L)     * (1 - y/T)

Scenario text format (`key = value`, see `Scenario.from_file`):

    wheelbase_m = 2.0
    track_m     = 1.5
    curb_fl_kg  = 55.0        # optional, default 0 (likewise fr/rl/rr)
    temperature_c = 25.0      # optional
    noise_seed  = 42          # optional
    placement   = 120.0 @ 0.8, 0.9     # mass_kg @ x_m, y_m; repeatable
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .calibration import CalibrationState, calibrate, code_to_mass, tare
from .cog import AlertPolicy, DeckGeometry, FourCellReading, LoadAssessment, assess_four_cell
from .errors import ConfigError, InvalidPlacementError, UndefinedCentroidError
from .sensor import AdcConfig, LoadCellSpec, add_noise, bridge_output, quantize
from . import kvfile


@dataclass(frozen=True)
class Placement:
    """One point mass on the deck."""

    mass_kg: float
    x_m: float
    y_m: float


@dataclass(frozen=True)
class Scenario:
    """A deck, its curb weights, and the masses placed on it."""

    geometry: DeckGeometry
    placements: tuple[Placement, ...] = ()
    curb: FourCellReading = field(default_factory=lambda: FourCellReading(0.0, 0.0, 0.0, 0.0))
    noise_seed: int = 0
    temperature_c: float = 25.0

    def __post_init__(self) -> None:
        for p in self.placements:
            if p.mass_kg <= 0:
                raise InvalidPlacementError(f"placement mass must be > 0, got {p.mass_kg}")
            if not 0.0 <= p.x_m <= self.geometry.wheelbase_m:
                raise InvalidPlacementError(
                    f"x={p.x_m} m outside deck [0, {self.geometry.wheelbase_m}]"
                )
            if not 0.0 <= p.y_m <= self.geometry.track_m:
                raise InvalidPlacementError(
                    f"y={p.y_m} m outside deck [0, {self.geometry.track_m}]"
                )

    @classmethod
    def from_file(cls, path: str | Path) -> "Scenario":
        source = str(path)
        pairs = kvfile.read_kv(path)
        placements = []
        scalars: dict[str, str] = {}
        for key, value in pairs:
            if key == "placement":
                placements.append(_parse_placement(value, source))
            elif key in scalars:
                raise ConfigError(f"{source}: duplicate key {key!r}")
            else:
                scalars[key] = value
        breadth = kvfile.get_float(scalars, "breadth_m", source, 0.0)
        geom = DeckGeometry(
            wheelbase_m=kvfile.get_float(scalars, "wheelbase_m", source),
            track_m=kvfile.get_float(scalars, "track_m", source),
            breadth_m=breadth if breadth > 0 else None,
        )
        curb = FourCellReading(
            fl_kg=kvfile.get_float(scalars, "curb_fl_kg", source, 0.0),
            fr_kg=kvfile.get_float(scalars, "curb_fr_kg", source, 0.0),
            rl_kg=kvfile.get_float(scalars, "curb_rl_kg", source, 0.0),
            rr_kg=kvfile.get_float(scalars, "curb_rr_kg", source, 0.0),
        )
        return cls(
            geometry=geom,
            placements=tuple(placements),
            curb=curb,
            noise_seed=kvfile.get_int(scalars, "noise_seed", source, 0),
            temperature_c=kvfile.get_float(scalars, "temperature_c", source, 25.0),
        )


def _parse_placement(value: str, source: str) -> Placement:
    try:
        mass_part, pos_part = value.split("@")
        x_part, y_part = pos_part.split(",")
        return Placement(mass_kg=float(mass_part), x_m=float(x_part), y_m=float(y_part))
    except ValueError:
        raise ConfigError(
            f"{source}: placement must be 'mass_kg @ x_m, y_m', got {value!r}"
        ) from None


def corner_loads(scenario: Scenario) -> FourCellReading:
    """Bilinear distribution of every placement, plus the curb weights."""
    geom = scenario.geometry
    fl, fr, rl, rr = scenario.curb.as_tuple()
    for p in scenario.placements:
        ax = p.x_m / geom.wheelbase_m  # rearward fraction
        ay = p.y_m / geom.track_m      # leftward fraction
        fl += p.mass_kg * (1.0 - ax) * ay
        fr += p.mass_kg * (1.0 - ax) * (1.0 - ay)
        rl += p.mass_kg * ax * ay
        rr += p.mass_kg * ax * (1.0 - ay)
    return FourCellReading(fl_kg=fl, fr_kg=fr, rl_kg=rl, rr_kg=rr)


def total_mass(scenario: Scenario) -> float:
    curb = scenario.curb
    return sum(p.mass_kg for p in scenario.placements) + (
        curb.fl_kg + curb.fr_kg + curb.rl_kg + curb.rr_kg
    )


def centroid(scenario: Scenario) -> tuple[float, float]:
    """Mass-weighted mean position of placements and curb weights.

    The curb contributes at the CoG implied by its own corner reading.
    Raises UndefinedCentroidError at zero total mass.
    """
    geom = scenario.geometry
    total = 0.0
    mx = 0.0
    my = 0.0
    for p in scenario.placements:
        total += p.mass_kg
        mx += p.mass_kg * p.x_m
        my += p.mass_kg * p.y_m
    curb = scenario.curb
    curb_total = curb.fl_kg + curb.fr_kg + curb.rl_kg + curb.rr_kg
    if curb_total > 0:
        total += curb_total
        mx += (curb.rl_kg + curb.rr_kg) * geom.wheelbase_m
        my += (curb.fl_kg + curb.rl_kg) * geom.track_m
    if total == 0:
        raise UndefinedCentroidError("scenario has no mass")
    return mx / total, my / total


def run_end_to_end(
    scenario: Scenario,
    specs: tuple[LoadCellSpec, LoadCellSpec, LoadCellSpec, LoadCellSpec],
    cals: tuple[CalibrationState, CalibrationState, CalibrationState, CalibrationState],
    policy: AlertPolicy,
    adc: AdcConfig | None = None,
) -> LoadAssessment:
    """Full pipeline: corner loads → bridge → ADC → calibration → assessment.

    Per-cell noise streams are spawned from the scenario seed, so repeated
    runs of the same scenario are bit-identical.
    """
    if adc is None:
        adc = AdcConfig()
    loads = corner_loads(scenario)
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(scenario.noise_seed).spawn(4)]
    masses = []
    for mass, spec, cal, rng in zip(loads.as_tuple(), specs, cals, rngs):
        reading = bridge_output(spec, mass, temperature_c=scenario.temperature_c)
        reading = add_noise(reading, spec, rng)
        frame = quantize(reading, adc)
        masses.append(code_to_mass(frame.code, cal).kg)
    return assess_four_cell(
        FourCellReading(fl_kg=masses[0], fr_kg=masses[1], rl_kg=masses[2], rr_kg=masses[3]),
        scenario.geometry,
        policy,
    )


def ideal_calibration(
    spec: LoadCellSpec,
    adc: AdcConfig | None = None,
    known_mass_kg: float | None = None,
) -> CalibrationState:
    """Calibration taken against the noise-free sensor model itself.

    Tare at zero load, slope from one known mass (default: the cell's
    capacity). This is the software analogue of placing a reference weight
    on a freshly installed cell.
    """
    if adc is None:
        adc = AdcConfig()
    if known_mass_kg is None:
        known_mass_kg = spec.capacity_kg
    zero = quantize(bridge_output(spec, 0.0), adc)
    loaded = quantize(bridge_output(spec, known_mass_kg), adc)
    return calibrate(
        tare([zero]),
        known_mass_kg,
        loaded.code,
        temperature_c=spec.reference_temp_c,
    )

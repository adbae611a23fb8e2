import numpy as np
import pytest
from hypothesis import given, strategies as st

from weighsim.calibration import (
    CalibrationState,
    calibrate,
    code_to_mass,
    tare,
)
from weighsim.errors import (
    DegenerateCalibrationError,
    InsufficientSamplesError,
    InvertedWiringError,
)
from weighsim.scenario import ideal_calibration
from weighsim.sensor import AdcConfig, AdcFrame, LoadCellSpec, bridge_output, quantize


def frames(*codes):
    return [AdcFrame.from_code(c) for c in codes]


class TestTare:
    def test_constant_samples(self):
        assert tare(frames(100, 100, 100)) == 100

    def test_symmetric_mean(self):
        assert tare(frames(99, 100, 101)) == 100

    def test_saturated_samples_excluded(self):
        sat = AdcFrame.from_code(2**23 - 1)
        assert tare([*frames(50, 50), sat]) == 50

    def test_no_usable_samples(self):
        with pytest.raises(InsufficientSamplesError):
            tare([])
        with pytest.raises(InsufficientSamplesError):
            tare([AdcFrame.from_code(2**23 - 1), AdcFrame.from_code(-(2**23))])

    def test_noisy_tare_converges(self):
        # statistical oracle: mean of N draws sits within 3*sigma/sqrt(N)
        # of the true offset (plus the final rounding step).
        true_offset, sigma, n = 5000, 50.0, 1000
        rng = np.random.default_rng(2024)
        noisy = frames(*(int(round(c)) for c in rng.normal(true_offset, sigma, size=n)))
        assert abs(tare(noisy) - true_offset) <= 3 * sigma / np.sqrt(n) + 0.5


class TestCalibrate:
    def test_direct_slope(self):
        cal = calibrate(0, 10.0, 100_000)
        assert cal.scale_kg_per_lsb == 1e-4

    def test_offset_independent(self):
        assert calibrate(500, 10.0, 100_500).scale_kg_per_lsb == 1e-4

    def test_degenerate(self):
        with pytest.raises(DegenerateCalibrationError):
            calibrate(0, 10.0, 0)

    def test_inverted_wiring(self):
        with pytest.raises(InvertedWiringError):
            calibrate(1000, 10.0, 500)

    def test_known_mass_must_be_positive(self):
        with pytest.raises(ValueError):
            calibrate(0, 0.0, 100)

    @given(st.integers(min_value=-10_000, max_value=10_000))
    def test_shift_invariance(self, shift):
        base = calibrate(0, 10.0, 100_000)
        shifted = calibrate(shift, 10.0, 100_000 + shift)
        assert shifted.scale_kg_per_lsb == base.scale_kg_per_lsb


class TestCodeToMass:
    CAL = CalibrationState(tare_code=500, scale_kg_per_lsb=1e-4, reference_points=((10.0, 100_500),))

    def test_tare_code_is_zero(self):
        assert code_to_mass(500, self.CAL) == (0.0, False)

    def test_below_tare_clamps_with_flag(self):
        mass, below = code_to_mass(498, self.CAL)
        assert mass == 0.0 and below

    def test_positive(self):
        assert code_to_mass(100_500, self.CAL).kg == pytest.approx(10.0)

    def test_temperature_warning(self):
        cal = CalibrationState(
            tare_code=0, scale_kg_per_lsb=1e-4, calibrated_at_temp_c=20.0,
            reference_points=((10.0, 100_000),),
        )
        assert not cal.temperature_warning(30.0)
        assert cal.temperature_warning(30.1)


class TestEndToEnd:
    SPEC = LoadCellSpec(capacity_kg=120.0)
    ADC = AdcConfig()

    def test_recovers_calibration_mass(self):
        cal = ideal_calibration(self.SPEC, self.ADC)
        code = quantize(bridge_output(self.SPEC, 120.0), self.ADC).code
        assert abs(code_to_mass(code, cal).kg - 120.0) <= cal.scale_kg_per_lsb

    @given(st.floats(min_value=0.0, max_value=120.0, allow_nan=False))
    def test_linear_recovery_anywhere(self, mass):
        cal = ideal_calibration(self.SPEC, self.ADC)
        code = quantize(bridge_output(self.SPEC, mass), self.ADC).code
        assert abs(code_to_mass(code, cal).kg - mass) <= cal.scale_kg_per_lsb


def test_state_validation():
    with pytest.raises(ValueError):
        CalibrationState(tare_code=0, scale_kg_per_lsb=-1e-4, reference_points=((1.0, 100),))
    with pytest.raises(ValueError):
        CalibrationState(tare_code=0, scale_kg_per_lsb=1e-4, reference_points=())


def test_file_round_trip(tmp_path):
    cal = calibrate(123, 10.0, 100_123, temperature_c=22.5)
    path = tmp_path / "cal.cfg"
    cal.to_file(path)
    loaded = CalibrationState.from_file(path)
    assert loaded == cal
    assert loaded.fingerprint() == cal.fingerprint()

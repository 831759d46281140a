"""Force normalization, Stevens mapping, intensity model, synthesis, WAV."""
import struct
import wave as stdlib_wave

import numpy as np
import pytest

from effortwave.haptics import (
    FIXED_REFERENCE,
    PER_CLIP_MAX,
    EffortSignal,
    IntensityModelParams,
    VibrationWaveform,
    default_intensity_params,
    effort_from_force,
    intensity_to_amplitude,
    normalize_force_magnitude,
    quantize_samples,
    synthesize_am,
    write_effort_csv,
    write_wav,
)

PARAMS = IntensityModelParams(carrier_frequency=200.0,
                              detection_threshold_amplitude=0.1,
                              alpha=0.4, max_intensity=1.0)


def vectors_with_norms(norms):
    return np.array([[n, 0.0, 0.0] for n in norms])


class TestNormalize:
    def test_per_clip_max(self):
        out = normalize_force_magnitude(vectors_with_norms([1.0, 2.0, 4.0]))
        np.testing.assert_allclose(out, [0.25, 0.5, 1.0], rtol=0, atol=0)

    def test_all_zero_input(self):
        out = normalize_force_magnitude(np.zeros((3, 3)))
        np.testing.assert_array_equal(out, np.zeros(3))

    def test_fixed_reference(self):
        out = normalize_force_magnitude(vectors_with_norms([3.0, 6.0]),
                                        mode=FIXED_REFERENCE, reference=12.0)
        np.testing.assert_allclose(out, [0.25, 0.5], rtol=0, atol=0)

    def test_fixed_reference_clamps(self):
        out = normalize_force_magnitude(vectors_with_norms([30.0]),
                                        mode=FIXED_REFERENCE, reference=12.0)
        assert out[0] == 1.0

    def test_fixed_reference_needs_reference(self):
        with pytest.raises(ValueError):
            normalize_force_magnitude(vectors_with_norms([1.0]), mode=FIXED_REFERENCE)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            normalize_force_magnitude(vectors_with_norms([1.0]), mode="minmax")

    def test_uses_euclidean_norm(self):
        out = normalize_force_magnitude(np.array([[3.0, 4.0, 0.0], [0.0, 0.0, 10.0]]))
        np.testing.assert_allclose(out, [0.5, 1.0])


class TestStevens:
    @pytest.mark.parametrize("exponent", [0.5, 1.0, 1.7, 3.0])
    def test_fixed_points(self, exponent):
        effort = effort_from_force(np.array([0.0, 1.0]), exponent)
        assert effort.values[0] == 0.0
        assert effort.values[1] == 1.0

    def test_half_to_the_1_7(self):
        effort = effort_from_force(np.array([0.5]), 1.7)
        assert abs(effort.values[0] - 0.30778610333622907) < 1e-12

    def test_exponent_one_is_identity(self):
        x = np.linspace(0.0, 1.0, 11)
        effort = effort_from_force(x, 1.0)
        np.testing.assert_array_equal(effort.values, x)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            effort_from_force(np.array([1.2]), 1.7)
        with pytest.raises(ValueError):
            effort_from_force(np.array([-0.1]), 1.7)

    def test_bad_exponent(self):
        with pytest.raises(ValueError):
            effort_from_force(np.array([0.5]), 0.0)

    def test_source_label(self):
        effort = effort_from_force(np.array([0.5]), 1.7, source="RShin")
        assert effort.source == "RShin"

    def test_effort_signal_bounds_enforced(self):
        with pytest.raises(ValueError):
            EffortSignal(values=np.array([1.5]))


class TestIntensityModel:
    def test_unit_intensity_maps_to_threshold(self):
        assert intensity_to_amplitude(1.0, PARAMS) == PARAMS.detection_threshold_amplitude

    def test_zero_intensity_is_silent(self):
        assert intensity_to_amplitude(0.0, PARAMS) == 0.0

    def test_alpha_one_square_root(self):
        params = IntensityModelParams(carrier_frequency=200.0,
                                      detection_threshold_amplitude=0.5,
                                      alpha=1.0, max_intensity=1.0)
        assert intensity_to_amplitude(4.0, params) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("intensity", [0.25, 1.0, 4.0])
    def test_inversion_consistency(self, alpha, intensity):
        params = IntensityModelParams(carrier_frequency=200.0,
                                      detection_threshold_amplitude=0.37,
                                      alpha=alpha, max_intensity=1.0)
        a = intensity_to_amplitude(intensity, params)
        recovered = (a / params.detection_threshold_amplitude) ** (2.0 * alpha)
        assert recovered == pytest.approx(intensity, rel=1e-9)

    def test_negative_intensity_rejected(self):
        with pytest.raises(ValueError):
            intensity_to_amplitude(-1.0, PARAMS)

    @pytest.mark.parametrize("kwargs", [
        {"alpha": 0.0}, {"detection_threshold_amplitude": 0.0},
        {"carrier_frequency": 0.0}, {"max_intensity": -1.0},
    ])
    def test_bad_params(self, kwargs):
        base = dict(carrier_frequency=200.0, detection_threshold_amplitude=0.1,
                    alpha=0.4, max_intensity=1.0)
        base.update(kwargs)
        with pytest.raises(ValueError):
            IntensityModelParams(**base)

    def test_defaults_load_from_data(self):
        params = default_intensity_params()
        assert params.carrier_frequency == 200.0
        assert params.alpha > 0 and params.detection_threshold_amplitude > 0


class TestSynthesis:
    def test_constant_full_effort_is_pure_carrier(self):
        times = np.array([0.0, 1.0])
        effort = EffortSignal(values=np.array([1.0, 1.0]))
        wave = synthesize_am(effort, times, PARAMS, 48000.0)
        assert len(wave.samples) == 48000
        assert np.max(np.abs(wave.samples)) == pytest.approx(1.0, abs=1e-12)
        spectrum = np.abs(np.fft.rfft(wave.samples))
        freqs = np.fft.rfftfreq(len(wave.samples), 1.0 / 48000.0)
        assert abs(freqs[np.argmax(spectrum)] - 200.0) <= freqs[1] - freqs[0]

    def test_zero_effort_is_silence(self):
        times = np.linspace(0.0, 0.5, 20)
        effort = EffortSignal(values=np.zeros(20))
        wave = synthesize_am(effort, times, PARAMS, 48000.0)
        assert np.all(wave.samples == 0.0)

    def test_duration_scales_sample_count(self):
        effort1 = EffortSignal(values=np.array([0.5, 0.5]))
        effort2 = EffortSignal(values=np.array([0.5, 0.5]))
        w1 = synthesize_am(effort1, np.array([0.0, 1.0]), PARAMS, 8000.0)
        w2 = synthesize_am(effort2, np.array([0.0, 2.0]), PARAMS, 8000.0)
        assert len(w2.samples) == 2 * len(w1.samples)
        # same constant effort -> identical envelope, hence identical samples
        np.testing.assert_array_equal(w2.samples[:len(w1.samples)], w1.samples)

    def test_envelope_monotone_in_effort(self):
        times = np.array([0.0, 1.0])
        levels = [0.1, 0.3, 0.5, 0.9]
        peaks = []
        for level in levels:
            wave = synthesize_am(EffortSignal(values=np.full(2, level)), times,
                                 PARAMS, 48000.0)
            peaks.append(np.max(np.abs(wave.samples)))
        assert all(a < b for a, b in zip(peaks, peaks[1:]))

    def test_start_time_offset_does_not_shift_envelope(self):
        effort = EffortSignal(values=np.array([0.2, 0.8]))
        w0 = synthesize_am(effort, np.array([0.0, 1.0]), PARAMS, 48000.0)
        w5 = synthesize_am(effort, np.array([5.0, 6.0]), PARAMS, 48000.0)
        np.testing.assert_allclose(w0.samples, w5.samples, rtol=0, atol=1e-9)

    def test_nyquist_guard(self):
        effort = EffortSignal(values=np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            synthesize_am(effort, np.array([0.0, 1.0]), PARAMS, 400.0)

    def test_length_mismatch(self):
        effort = EffortSignal(values=np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            synthesize_am(effort, np.array([0.0, 0.5, 1.0]), PARAMS, 48000.0)

    def test_waveform_bounds_enforced(self):
        with pytest.raises(ValueError):
            VibrationWaveform(sample_rate=48000.0, samples=np.array([1.2]),
                              carrier_frequency=200.0)


class TestWav:
    def test_endpoint_quantization(self):
        q = quantize_samples(np.array([1.0, -1.0, 0.0, 0.5, -0.5]))
        assert q.tolist() == [32767, -32767, 0, 16384, -16384]
        assert q.dtype == np.int16

    def test_half_away_from_zero(self):
        # 0.5/32767 scales to exactly 0.5 -> rounds to 1, not 0
        q = quantize_samples(np.array([0.5 / 32767.0, -0.5 / 32767.0]))
        assert q.tolist() == [1, -1]

    def test_header_arithmetic_4_samples_8khz(self, tmp_path):
        wave = VibrationWaveform(sample_rate=8000.0,
                                 samples=np.array([0.0, 0.5, -0.5, 1.0]),
                                 carrier_frequency=200.0)
        path = tmp_path / "t.wav"
        write_wav(wave, path)
        blob = path.read_bytes()
        assert blob[0:4] == b"RIFF"
        assert struct.unpack("<I", blob[4:8])[0] == 36 + 8
        assert blob[8:12] == b"WAVE"
        assert blob[12:16] == b"fmt "
        fmt_size, fmt, channels, rate, byte_rate, block, bits = struct.unpack(
            "<IHHIIHH", blob[16:36])
        assert (fmt_size, fmt, channels) == (16, 1, 1)
        assert rate == 8000 and byte_rate == 16000
        assert (block, bits) == (2, 16)
        assert blob[36:40] == b"data"
        assert struct.unpack("<I", blob[40:44])[0] == 8
        assert len(blob) == 44 + 8

    def test_round_trip_against_stdlib_reader(self, tmp_path):
        rng = np.random.default_rng(9)
        samples = rng.uniform(-1.0, 1.0, 500)
        wave = VibrationWaveform(sample_rate=48000.0, samples=samples,
                                 carrier_frequency=200.0)
        path = tmp_path / "t.wav"
        write_wav(wave, path)
        with stdlib_wave.open(str(path), "rb") as fh:
            assert fh.getnchannels() == 1
            assert fh.getsampwidth() == 2
            assert fh.getframerate() == 48000
            raw = fh.readframes(fh.getnframes())
        decoded = np.frombuffer(raw, dtype="<i2")
        np.testing.assert_array_equal(decoded, quantize_samples(samples))

    def test_effort_csv(self, tmp_path):
        times = np.array([0.0, 0.1, 0.2])
        effort = EffortSignal(values=np.array([0.0, 0.5, 1.0]))
        path = tmp_path / "effort.csv"
        write_effort_csv(path, times, effort, PARAMS)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,effort,envelope"
        last = lines[-1].split(",")
        assert float(last[1]) == 1.0 and float(last[2]) == 1.0

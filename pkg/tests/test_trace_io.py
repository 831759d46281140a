"""Trace parsing, validation, serialization, and resampling."""
import json

import numpy as np
import pytest

from effortwave.errors import (
    InsufficientFramesError,
    TraceOrderingError,
    TraceParseError,
    TraceSchemaError,
)
from effortwave.trace_io import (
    LandmarkTrace,
    parse_landmark_trace,
    resample_uniform,
    serialize_landmark_trace,
    to_y_up,
)

from conftest import STANDING_POSE, all_33_pose, make_trace, trace_doc, write_doc


class TestParse:
    def test_single_frame_all_33_at_origin(self, tmp_path):
        path = write_doc(tmp_path / "t.json", trace_doc(all_33_pose(), [0.0]))
        trace = parse_landmark_trace(path)
        assert trace.n_frames == 1
        assert len(trace.landmark_names) == 33
        assert np.all(trace.positions == 0.0)
        assert trace.timestamps[0] == 0.0

    def test_duplicate_timestamps_name_frame_pair(self, tmp_path):
        path = write_doc(tmp_path / "t.json", trace_doc(all_33_pose(), [0.1, 0.1]))
        with pytest.raises(TraceOrderingError) as err:
            parse_landmark_trace(path)
        assert err.value.first_frame == 0
        assert err.value.second_frame == 1

    def test_missing_landmark_names_landmark_and_frame(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0, 0.1, 0.2, 0.3])
        del doc["frames"][3]["landmarks"]["left_knee"]
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceSchemaError) as err:
            parse_landmark_trace(path)
        assert err.value.landmark == "left_knee"
        assert err.value.frame_index == 3

    def test_required_landmark_missing_in_frame_0(self, tmp_path):
        pose = dict(STANDING_POSE)
        del pose["right_ankle"]
        path = write_doc(tmp_path / "t.json", trace_doc(pose, [0.0]))
        with pytest.raises(TraceSchemaError) as err:
            parse_landmark_trace(path)
        assert err.value.landmark == "right_ankle"
        assert err.value.frame_index == 0

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text("{not json")
        with pytest.raises(TraceParseError):
            parse_landmark_trace(path)

    def test_nonfinite_coordinate(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0])
        doc["frames"][0]["landmarks"]["nose"]["y"] = float("nan")
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceSchemaError) as err:
            parse_landmark_trace(path)
        assert err.value.landmark == "nose"

    def test_bad_unit_scale(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0], unit_scale=0.0)
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceSchemaError):
            parse_landmark_trace(path)

    def test_bad_up_axis(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0], up_axis="+x")
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceSchemaError):
            parse_landmark_trace(path)

    def test_unsupported_version(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0])
        doc["version"] = 2
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceParseError):
            parse_landmark_trace(path)

    def test_visibility_out_of_range(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0])
        doc["frames"][0]["landmarks"]["nose"]["visibility"] = 1.5
        path = write_doc(tmp_path / "t.json", doc)
        with pytest.raises(TraceSchemaError):
            parse_landmark_trace(path)

    def test_missing_visibility_defaults_to_one(self, tmp_path):
        doc = trace_doc(all_33_pose(), [0.0])
        for lm in doc["frames"][0]["landmarks"].values():
            del lm["visibility"]
        path = write_doc(tmp_path / "t.json", doc)
        trace = parse_landmark_trace(path)
        assert np.all(trace.visibility == 1.0)


class TestRoundTrip:
    def test_parse_serialize_identity(self, tmp_path):
        rng = np.random.default_rng(7)
        trace = make_trace(STANDING_POSE, n_frames=5, rate=30.0,
                           offset_fn=lambda t: rng.normal(scale=0.01, size=3))
        trace.visibility = rng.uniform(0.2, 1.0, trace.visibility.shape)
        path = tmp_path / "t.json"
        serialize_landmark_trace(trace, path)
        again = parse_landmark_trace(path)
        assert again.equals(trace)
        # and a second lap stays fixed
        path2 = tmp_path / "t2.json"
        serialize_landmark_trace(again, path2)
        assert parse_landmark_trace(path2).equals(again)


class TestResample:
    def test_linear_motion_4hz(self):
        pose = all_33_pose()
        trace = make_trace(pose, n_frames=2, rate=1.0,
                           offset_fn=lambda t: (t, 0.0, 0.0))
        out = resample_uniform(trace, 4.0)
        np.testing.assert_allclose(out.timestamps, [0.0, 0.25, 0.5, 0.75, 1.0])
        x = out.landmark("nose")[:, 0]
        np.testing.assert_allclose(x, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-15)

    def test_already_uniform_is_bitwise_identical(self):
        trace = make_trace(STANDING_POSE, n_frames=10, rate=25.0,
                           offset_fn=lambda t: (np.sin(t), 0.0, 0.0))
        out = resample_uniform(trace, 25.0)
        assert np.array_equal(out.positions, trace.positions)
        assert np.array_equal(out.timestamps, trace.timestamps)

    def test_constant_positions_nonuniform_input(self):
        pose = all_33_pose((1.0, 2.0, 3.0))
        names = list(pose.keys())
        positions = np.tile(np.array(list(pose.values()), dtype=float), (3, 1, 1))
        trace = LandmarkTrace(
            timestamps=np.array([0.0, 0.1, 0.3]),
            landmark_names=names,
            positions=positions,
            visibility=np.ones((3, len(names))),
            unit_scale=1.0,
        )
        out = resample_uniform(trace, 10.0)
        np.testing.assert_allclose(out.timestamps, [0.0, 0.1, 0.2, 0.3], atol=1e-15)
        assert np.all(out.positions == positions[0])

    @pytest.mark.parametrize("rate", [7.0, 30.0, 123.0])
    def test_linear_signal_exact_at_any_rate(self, rate):
        trace = make_trace(all_33_pose(), n_frames=4, rate=10.0,
                           offset_fn=lambda t: (2.0 * t, -3.0 * t, 0.5 * t))
        out = resample_uniform(trace, rate)
        for k, slope in enumerate((2.0, -3.0, 0.5)):
            np.testing.assert_allclose(out.landmark("nose")[:, k],
                                       slope * out.timestamps, atol=1e-12)

    def test_uniform_spacing_tolerance(self):
        trace = make_trace(all_33_pose(), n_frames=50, rate=17.0)
        out = resample_uniform(trace, 31.0)
        dt = np.diff(out.timestamps)
        assert np.max(np.abs(dt - 1.0 / 31.0)) < 1e-12 / 31.0 + 1e-15

    def test_insufficient_frames(self):
        trace = make_trace(all_33_pose(), n_frames=1)
        with pytest.raises(InsufficientFramesError):
            resample_uniform(trace, 10.0)

    def test_bad_rate(self):
        trace = make_trace(all_33_pose(), n_frames=3)
        with pytest.raises(ValueError):
            resample_uniform(trace, 0.0)


class TestAxes:
    def test_y_up_identity(self):
        p = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(to_y_up(p, "+y"), p)

    @pytest.mark.parametrize("axis,up_point", [
        ("-y", (0.0, -1.0, 0.0)),
        ("+z", (0.0, 0.0, 1.0)),
        ("-z", (0.0, 0.0, -1.0)),
    ])
    def test_declared_up_maps_to_plus_y(self, axis, up_point):
        out = to_y_up(np.array(up_point), axis)
        np.testing.assert_array_equal(out, [0.0, 1.0, 0.0])

    @pytest.mark.parametrize("axis", ["-y", "+z", "-z"])
    def test_rotation_preserves_norm_and_handedness(self, axis):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=3), rng.normal(size=3)
        ra, rb = to_y_up(a, axis), to_y_up(b, axis)
        assert np.linalg.norm(ra) == pytest.approx(np.linalg.norm(a))
        np.testing.assert_allclose(to_y_up(np.cross(a, b), axis), np.cross(ra, rb),
                                   atol=1e-12)


class TestTraceModel:
    def test_jitter_measure(self):
        trace = LandmarkTrace(
            timestamps=np.array([0.0, 0.1, 0.2, 0.35]),
            landmark_names=["nose"],
            positions=np.zeros((4, 1, 3)),
            visibility=np.ones((4, 1)),
            unit_scale=1.0,
        )
        assert trace.timestamp_jitter() > 0.1
        uniform = make_trace(all_33_pose(), n_frames=5, rate=30.0)
        assert uniform.timestamp_jitter() < 1e-9

    def test_frame_accessor(self):
        trace = make_trace(STANDING_POSE, n_frames=2, rate=10.0)
        frame = trace.frame(1)
        assert frame.timestamp == pytest.approx(0.1)
        np.testing.assert_array_equal(frame.positions["left_hip"],
                                      np.array(STANDING_POSE["left_hip"]))

    def test_unknown_landmark_lookup(self):
        trace = make_trace(STANDING_POSE, n_frames=1)
        with pytest.raises(TraceSchemaError):
            trace.landmark("tail")

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkflex import io as lio
from linkflex.loops import DHLoop
from linkflex.ncpoly import MotionPoly
from linkflex.pods import Leg


def test_fmt_is_exact_and_drops_negative_zero():
    assert lio.fmt(0.1) == "0.10000000000000001"
    assert lio.fmt(-0.0) == "0"
    assert lio.fmt(float("inf")) == "inf"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(lio.fmt(x)) == x


def test_dumps_encodes_complex_and_numpy():
    text = lio.dumps({"z": 1 + 2j, "a": np.arange(3), "b": np.bool_(True), "f": np.float32(0.5)})
    assert json.loads(text) == {"z": [1.0, 2.0], "a": [0, 1, 2], "b": True, "f": 0.5}


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), max_size=6))
def test_json_round_trip(values):
    assert json.loads(lio.dumps({"v": values})) == {"v": values}


def test_atomic_write_leaves_no_temporaries(tmp_path):
    target = tmp_path / "sub" / "out.json"
    lio.write_json(target, {"a": 1})
    lio.write_json(target, {"a": 2})
    assert lio.read_json(target) == {"a": 2}
    assert [p.name for p in target.parent.iterdir()] == ["out.json"]


def test_csv_round_trip(tmp_path):
    rows = [[0.1, 1e-300, -2.5], [3.0, 4.0, 5.0]]
    lio.write_csv(tmp_path / "x.csv", ["a", "b", "c"], rows)
    assert np.array_equal(lio.read_csv(tmp_path / "x.csv"), np.array(rows))


def test_svg_has_one_polyline(tmp_path):
    lio.write_svg(tmp_path / "p.svg", [[0, 0], [1, 2], [3, 1]])
    text = (tmp_path / "p.svg").read_text()
    assert text.count("<polyline") == 1 and text.startswith("<svg")


def test_domain_object_round_trips(tmp_path):
    loop = DHLoop([1, 2, 3, 4], [0.1, 0.2, 0.3, 0.4], [0, 0.5, 0, 0])
    lio.write_json(tmp_path / "loop.json", loop.to_json())
    assert lio.read_loop(tmp_path / "loop.json").to_json() == loop.to_json()

    P = MotionPoly([(1, 2, 3, 4, 0, 1, 0, 0), (1, 0, 0, 0)])
    lio.write_json(tmp_path / "poly.json", lio.motion_poly_json(P))
    assert lio.read_motion_poly(tmp_path / "poly.json").allclose(P, 0.0)

    legs = [Leg([1, 0, 0], [0, 1, 0], 2.0), Leg([0, 0, 1], [1, 1, 1], 0.5)]
    lio.write_json(tmp_path / "pod.json", lio.multipod_json(legs))
    base, plat, back = lio.read_multipod(tmp_path / "pod.json")
    assert [(g.a.tolist(), g.b.tolist(), g.d) for g in back] == [(g.a.tolist(), g.b.tolist(), g.d) for g in legs]


def test_multipod_shape_errors(tmp_path):
    lio.write_json(tmp_path / "bad.json", {"base": [[0, 0, 0]], "platform": [[0, 0]]})
    with pytest.raises(ValueError):
        lio.read_multipod(tmp_path / "bad.json")
    lio.write_json(tmp_path / "bad2.json", {"base": [[0, 0, 0]], "platform": [[0, 0, 1]], "lengths": [1, 2]})
    with pytest.raises(ValueError):
        lio.read_multipod(tmp_path / "bad2.json")

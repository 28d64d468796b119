import json
import subprocess
import sys

import numpy as np
import pytest

from linkflex import io as lio
from linkflex.cli import run
from linkflex.dquat import DualQuaternion
from linkflex.ncpoly import MotionPoly
from linkflex.pods import random_isometry
from linkflex.rigidity import catalog
from linkflex.synth import RationalPlaneCurve, bennett_from_conic, random_bennett_poly


@pytest.fixture
def files(tmp_path):
    """Input files for the commands, built from library objects."""
    paths = {}

    def put(name, obj):
        paths[name] = str(tmp_path / name)
        lio.write_json(paths[name], obj)

    put("rigid7.json", catalog.rigid_seven().to_json())
    put("c4.json", catalog.cycle(4).to_json())
    put("k4.json", catalog.complete(4).to_json())
    k22 = catalog.complete_bipartite(2, 2)
    put("k22.json", k22.to_json({(1, 3): 5 ** 0.5, (1, 4): 10 ** 0.5, (2, 3): 2 ** 0.5, (2, 4): 7 ** 0.5}))
    put("ellipse.json", RationalPlaneCurve.ellipse(2.0, 1.0).to_json())
    P = random_bennett_poly(np.random.default_rng(4))
    put("conic.json", lio.motion_poly_json(P))
    B = bennett_from_conic(P)
    put("bennett.json", {"d": list(B.d), "alpha": list(B.alpha), "s": list(B.s)})
    quat = MotionPoly.linear((1, 1, 0, 0)) * MotionPoly.linear((0, 0, 2, 0)) * MotionPoly.linear((0, 1, 1, 1))
    put("quat.json", lio.motion_poly_json(quat))
    rng = np.random.default_rng(2)
    iso = random_isometry(rng)
    base = np.c_[rng.standard_normal((5, 2)), np.zeros(5)]
    plat = np.c_[rng.standard_normal((5, 2)), np.zeros(5)]
    put("penta.json", {"base": base.tolist(), "platform": plat.tolist(),
                       "lengths": [float(np.linalg.norm(iso(a) - b)) for a, b in zip(base, plat)]})
    put("iso.json", {"rotation": iso.rotation.tolist(), "translation": iso.translation.tolist()})
    put("point.json", [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1])
    paths["dir"] = tmp_path
    return paths


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_nac_on_the_rigid_seven_graph(capsys, files):
    code, out, _ = call(capsys, "rigidity", "nac", "--graph", files["rigid7.json"])
    assert code == 0 and json.loads(out)["count"] == 0


def test_synth_draw_traces_the_ellipse(capsys, files):
    target = files["dir"] / "trace.csv"
    code, out, _ = call(capsys, "synth", "draw", "--curve", files["ellipse.json"], "--samples", 100,
                        "--out", target, "--svg", files["dir"] / "trace.svg")
    assert code == 0
    data = lio.read_csv(target)
    assert data.shape == (100, 4)
    assert np.max(np.abs((data[:, 1] + 2) ** 2 / 4 + data[:, 2] ** 2 - 1)) < 1e-7
    assert json.loads(out)["path_spread"] < 1e-8
    assert (files["dir"] / "trace.svg").exists()


def test_synth_draw_without_out_prints_csv(capsys, files):
    code, out, err = call(capsys, "synth", "draw", "--curve", files["ellipse.json"], "--samples", 10)
    assert code == 0
    assert out.splitlines()[0] == "t,x,y,z" and len(out.splitlines()) == 11
    assert "path_spread" in json.loads(err)


def test_classify4r_on_a_bennett_loop(capsys, files):
    code, out, _ = call(capsys, "loop", "classify4r", "--loop", files["bennett.json"])
    assert code == 0 and out.strip() == "skew_isogram"


def test_factor_output_round_trips(capsys, files):
    target = files["dir"] / "factors.json"
    code, out, _ = call(capsys, "factor", "--poly", files["quat.json"], "--all", "--out", target)
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] == 6
    for hs in obj["factorizations"]:
        prod = MotionPoly([1.0])
        for h in hs:
            prod = prod * MotionPoly.linear(DualQuaternion.from_array(h))
        assert prod.allclose(lio.read_motion_poly(target), 1e-9)
    code, out2, _ = call(capsys, "factor", "--poly", target)
    assert code == 0 and len(json.loads(out2)["factors"]) == 3


def test_bennett_output_round_trips(capsys, files):
    target = files["dir"] / "b.json"
    code, out, _ = call(capsys, "synth", "bennett", "--poly", files["conic.json"], "--out", target)
    assert code == 0
    assert max(abs(v) for v in json.loads(out)["bennett_residuals"]) < 1e-8
    assert call(capsys, "loop", "classify4r", "--loop", target)[1].strip() == "skew_isogram"


def test_seed_reproduces_csv_bytes(capsys, files):
    outputs = []
    for k in range(2):
        target = files["dir"] / ("m%d.csv" % k)
        assert call(capsys, "rigidity", "motion", "--graph", files["c4.json"], "--seed", 5,
                    "--out", target)[0] == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    target = files["dir"] / "m2.csv"
    call(capsys, "rigidity", "motion", "--graph", files["c4.json"], "--seed", 6, "--out", target)
    assert target.read_bytes() != outputs[0]


def test_loop_trace_is_deterministic(capsys, files):
    outs = []
    for k in range(2):
        target = files["dir"] / ("t%d.csv" % k)
        code, out, _ = call(capsys, "loop", "trace", "--loop", files["bennett.json"], "--seed", 3,
                            "--samples", 9, "--out", target)
        assert code == 0 and json.loads(out)["max_residual"] < 1e-9
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv, key, check", [
    (["rigidity", "cgk", "--graph", "k4.json"], "cgk", lambda v: v == -1),
    (["rigidity", "laman", "--graph", "k4.json"], "is_laman", lambda v: v is False),
    (["rigidity", "matrix", "--graph", "k4.json"], "flex_count", lambda v: v == 0),
    (["rigidity", "dixon", "--graph", "k22.json"], "max_edge_residual", lambda v: v < 1e-12),
    (["rigidity", "dixon", "--rects", "1,2,3,1"], "flex_count", lambda v: v >= 1),
    (["loop", "closure", "--loop", "bennett.json", "--angles", "0,0,0,0"], "residual", lambda v: v > 0),
    (["loop", "bricard", "--family", "orthogonal", "--b", "1,2,2,1,1"], "d", lambda v: len(v) == 6),
    (["loop", "bricard", "--family", "plane"], "alpha", lambda v: len(v) == 6),
    (["pod", "pair", "--multipod", "penta.json", "--isometry", "iso.json"], "realized", all),
    (["pod", "duporcq", "--multipod", "penta.json"], "sixth", lambda v: v["span_residual"] < 1e-8),
    (["pod", "borel", "--alpha", 1, "--beta", -1, "--a", "1,0,0"], "max_length_deviation",
     lambda v: v < 1e-12),
    (["pod", "classify", "--point", "point.json"], "stratum", lambda v: v == "Zv_vertex"),
    (["pod", "hilbert", "--numerator", "1,10,18,10,1", "--pole", 2, "--terms", 5], "coefficients",
     lambda v: v == [1, 12, 41, 80, 120]),
])
def test_commands(capsys, files, argv, key, check):
    argv = [files.get(a, a) if isinstance(a, str) else a for a in argv]
    code, out, _ = call(capsys, *argv)
    assert code == 0
    assert check(json.loads(out)[key])


def test_loop_bonds_reports_four_sign_cases(capsys, files):
    target = files["dir"] / "bricard.json"
    call(capsys, "loop", "bricard", "--b", "1,2,2,1,1", "--out", target)
    code, out, _ = call(capsys, "loop", "bonds", "--loop", target)
    assert code == 0
    assert len(json.loads(out)["cases"]) == 4


def test_domain_error_exits_1(capsys, files):
    code, out, err = call(capsys, "rigidity", "motion", "--graph", files["rigid7.json"])
    assert code == 1 and out == ""
    rec = json.loads(err)
    assert rec["error"] == "NotRealizable" and rec["message"]


def test_bricard_relation_error_exits_1(capsys):
    code, _, err = call(capsys, "loop", "bricard", "--b", "1,1,1,1,1,2")
    assert code == 1 and json.loads(err)["error"] == "RelationViolated"


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["rigidity"], ["rigidity", "nac"], ["loop", "closure", "--loop", "x", "--angles", "a,b"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(argv) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_file_exits_2(capsys, files):
    code, _, err = call(capsys, "rigidity", "nac", "--graph", files["dir"] / "missing.json")
    assert code == 2 and err


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "linkflex", "pod", "hilbert", "--numerator", "1",
                           "--pole", "1", "--terms", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"] == [1, 1, 1]

"""End-to-end checks of the command-line envelope format and exit codes."""

import json
import subprocess
import sys

import pytest

from slowmating.cli import dispatch

P_956 = -0.10109636384562218 + 0.9562865108091415j

ENVELOPE_KEYS = {
    "command",
    "status",
    "iterations",
    "map",
    "marked_points",
    "collisions",
    "oracle_match",
    "diagnostics",
}


def run_cli(capsys, argv):
    rc = dispatch(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out)


def test_mate_converged_envelope(capsys):
    rc, env = run_cli(capsys, ["mate", "--theta-p", "1/6", "--theta-q", "1/3"])
    assert rc == 0
    assert ENVELOPE_KEYS <= set(env)
    assert env["status"] == "Converged"
    assert env["oracle_match"] is True
    assert env["map"]["normalization"] == "rational"
    assert env["map"]["d"] == 2
    assert env["collisions"] == [
        ["pin0"], ["pin1"], ["pininf"], ["x1"], ["x2", "x3"], ["y1"],
    ]
    assert {m["id"] for m in env["marked_points"]} == {
        "x1", "x2", "x3", "y1", "pin0", "pininf", "pin1",
    }
    assert env["c_p"]["im"] == pytest.approx(1.0, abs=1e-9)
    assert env["c_q"]["re"] == pytest.approx(-1.0, abs=1e-9)
    # measures shrink, one entry per window
    trace = env["diagnostics"]["trace"]
    assert len(trace) == env["iterations"] + 1
    assert trace[-1] < 1e-10


def test_mate_limits_are_finite_or_inf(capsys):
    rc, env = run_cli(capsys, ["mate", "--theta-p", "1/6", "--theta-q", "1/3"])
    assert rc == 0
    for m in env["marked_points"]:
        lim = m["limit"]
        assert lim == "inf" or set(lim) == {"re", "im"}
        assert m["side"] in ("P", "Q", None)


def test_mate_conjugate_refusal_and_force(capsys):
    rc = dispatch(["mate", "--theta-p", "1/3", "--theta-q", "1/3"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.out == ""
    assert "conjugate" in captured.err

    rc, env = run_cli(
        capsys, ["mate", "--theta-p", "1/3", "--theta-q", "1/3", "--force"]
    )
    assert rc == 2
    assert env["status"] == "Degenerate"
    assert env["oracle_match"] is False


def test_spider_envelope(capsys):
    rc, env = run_cli(capsys, ["spider", "--theta", "9/56"])
    assert rc == 0
    assert env["status"] == "Converged"
    assert env["k"] == 3 and env["p"] == 3
    assert env["residual"] < 1e-6
    assert env["oracle_match"] is True
    c = complex(env["c"]["re"], env["c"]["im"])
    assert abs(c - P_956) < 1e-9
    assert ["x4", "x5", "x6"] in env["collisions"]
    assert env["map"]["normalization"] == "polynomial"


def test_spider_theta_zero(capsys):
    rc, env = run_cli(capsys, ["spider", "--theta", "0"])
    assert rc == 0
    assert env["status"] == "Converged"
    assert env["iterations"] == 0
    assert env["map"] is None
    assert env["c"] == {"re": 0.0, "im": 0.0}
    assert env["k"] == 0 and env["p"] == 1


def test_usage_errors_exit_one(capsys):
    assert dispatch(["spider", "--theta", "bogus"]) == 1
    capsys.readouterr()
    assert dispatch(["nosuch"]) == 1
    capsys.readouterr()
    assert dispatch(["mate", "--theta-p", "1/6"]) == 1
    capsys.readouterr()
    assert dispatch([]) == 1
    capsys.readouterr()
    assert dispatch(["entropy"]) == 1
    err = capsys.readouterr().err
    assert "--theta or --matrix" in err


def test_stdout_is_deterministic(capsys):
    argv = ["spider", "--theta", "5/12"]
    rc1 = dispatch(argv)
    out1 = capsys.readouterr().out
    rc2 = dispatch(argv)
    out2 = capsys.readouterr().out
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_emit_trace_csv(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    rc, env = run_cli(
        capsys, ["spider", "--theta", "5/12", "--emit-trace", str(path)]
    )
    assert rc == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "window,measure"
    assert len(lines) == len(env["diagnostics"]["trace"]) + 1
    for n, line in enumerate(lines[1:]):
        idx, val = line.split(",")
        assert int(idx) == n
        assert float(val) >= 0.0


def test_capture_envelope_and_ray_csv(capsys, tmp_path):
    path = tmp_path / "ray.csv"
    rc, env = run_cli(
        capsys,
        [
            "capture",
            "--p-re", repr(P_956.real),
            "--p-im", repr(P_956.imag),
            "--theta-ray", "3/4",
            "--max-iter", "400",
            "--emit-ray", str(path),
        ],
    )
    assert rc == 0
    assert env["status"] == "Converged"
    assert env["oracle_match"] is True
    assert env["ray"]["theta"] == "3/4"
    landing = complex(env["ray"]["landing"]["re"], env["ray"]["landing"]["im"])
    assert abs(landing - (0.16894408440658618 - 1.1202820709578967j)) < 1e-9
    p = complex(env["p"]["re"], env["p"]["im"])
    assert abs(p - P_956) < 1e-15

    lines = path.read_text().splitlines()
    assert lines[0] == "potential,re,im"
    assert len(lines) == 43  # 41 potential samples + landing row + header
    first = lines[1].split(",")
    assert float(first[0]) == 2.0
    last = lines[-1].split(",")
    assert float(last[0]) == 0.0
    assert complex(float(last[1]), float(last[2])) == pytest.approx(landing)


def test_capture_needs_base_or_parameter(capsys):
    rc = dispatch(["capture", "--theta-ray", "3/4"])
    err = capsys.readouterr().err
    assert rc == 1
    assert "theta-base" in err


def test_entropy_theta(capsys):
    rc, env = run_cli(capsys, ["entropy", "--theta", "3/15"])
    assert rc == 0
    assert env["lambda"] == pytest.approx(1.3953369967322324, abs=1e-6)
    assert env["h"] == pytest.approx(0.3331359608173013, abs=1e-6)
    assert env["matrix"]["n"] == 6
    assert len(env["matrix"]["rows"]) == 6
    assert env["reducible"] is True
    assert env["oracle_match"] is True


def test_entropy_matrix_file(capsys, tmp_path):
    path = tmp_path / "mat.json"
    path.write_text(json.dumps(
        {"n": 4, "rows": [[0, 0, 1, 1], [1, 0, 0, 0],
                          [0, 1, 0, 0], [0, 1, 1, 0]]}
    ))
    rc, env = run_cli(capsys, ["entropy", "--matrix", str(path)])
    assert rc == 0
    assert env["lambda"] == pytest.approx(1.3953369967322324, abs=1e-6)
    assert env["reducible"] is False

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "rows": [[1, 0], [0, 1]]}))
    assert dispatch(["entropy", "--matrix", str(bad)]) == 1
    capsys.readouterr()


def test_render_cli(capsys, tmp_path):
    out = tmp_path / "frames"
    rc, env = run_cli(
        capsys,
        [
            "render",
            "--theta-p", "1/6", "--theta-q", "1/3",
            "--p-re", "0", "--p-im", "1", "--q-re", "-1", "--q-im", "0",
            "--depth", "2", "--fps", "2", "--units", "2",
            "--out", str(out),
        ],
    )
    assert rc == 4
    assert env["status"] == "MaxIter"
    assert env["frames"] == 5  # units * fps + 1
    files = sorted(f.name for f in out.iterdir())
    assert files == ["frame_%05d.ppm" % i for i in range(5)]
    with open(out / files[0], "rb") as fh:
        assert fh.read(3) == b"P6\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "slowmating.cli", "entropy", "--theta", "1/2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    env = json.loads(proc.stdout)
    assert env["lambda"] == pytest.approx(2.0, abs=1e-9)
    assert env["matrix"]["rows"] == [[2]]

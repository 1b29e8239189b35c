import json
import subprocess
import sys

import numpy as np
import pytest

from ramplab import io
from ramplab.cli import Command, main, parse_args
from ramplab.errors import BadNumber, MissingFlag, UnknownVerb, UsageError

from conftest import circle_points


def run(*argv):
    return main([str(a) for a in argv])


# -- parse_args -----------------------------------------------------------------


def test_parse_generate():
    cmd = parse_args(["generate", "spiral:sign=+", "--mu", "0.1", "--v", "2", "--out", "spiral.csv"])
    assert isinstance(cmd, Command) and cmd.verb == "generate"
    assert cmd.options["family"] == "spiral:sign=+"
    assert (cmd.options["mu"], cmd.options["v"], cmd.options["h"]) == (0.1, 2.0, 1e-3)


def test_parse_verify():
    cmd = parse_args(["verify", "--curve", "c.csv", "--force", "icho", "--mu", "0.5", "--v", "1"])
    assert cmd.verb == "verify"
    assert cmd.options["curve"] == "c.csv" and cmd.options["tol"] == 1e-5 and not cmd.options["closed"]


@pytest.mark.parametrize(
    "argv, error",
    [
        (["frobnicate"], UnknownVerb),
        (["generate", "circle:R=1", "--v", "1", "--out", "x.csv"], MissingFlag),
        (["generate", "circle:R=1", "--mu", "abc", "--v", "1", "--out", "x.csv"], BadNumber),
        (["generate", "circle:R=1", "--mu", "nan", "--v", "1", "--out", "x.csv"], BadNumber),
        (["generate", "circle:R=1", "--mu", "inf", "--v", "1", "--out", "x.csv"], BadNumber),
        (["generate", "circle:R=1", "--mu", "-0.5", "--v", "1", "--out", "x.csv"], BadNumber),
        (["generate", "circle:R=1", "--mu", "0", "--v", "1", "--out", "x.csv"], BadNumber),
        (["generate", "circle:R=1", "--mu", "0.5", "--v", "0", "--out", "x.csv"], BadNumber),
        (["phase", "--mu", "0.5", "--v", "1", "--grid-n", "1", "--out-dir", "d"], BadNumber),
        ([], UsageError),
    ],
)
def test_parse_errors(argv, error):
    with pytest.raises(error):
        parse_args(argv)


def test_frictionless_verify_is_allowed():
    assert parse_args(["verify", "--curve", "c.csv", "--mu", "0", "--v", "1"]).options["mu"] == 0.0


# -- exit codes -------------------------------------------------------------------


def test_generate_then_verify(tmp_path, capsys):
    out = tmp_path / "v1.csv"
    assert run("generate", "v1:u=0.75pi", "--mu", 0.3, "--v", 1, "--out", out) == 0
    assert len(io.read_curve(out)) > 1000
    capsys.readouterr()
    assert run("verify", "--curve", out, "--mu", 0.3, "--v", 1) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] and doc["max_residual"] < 1e-5 and doc["tol"] == 1e-5


def test_verify_fails_at_wrong_speed(tmp_path):
    out = tmp_path / "circle.csv"
    assert run("generate", "circle:R=1", "--mu", 0.5, "--v", 1, "--out", out) == 0
    report = tmp_path / "r.json"
    assert run("verify", "--curve", out, "--closed", "--mu", 0.5, "--v", 2, "--out", report) == 1
    doc = json.loads(report.read_text())
    assert not doc["passed"] and doc["max_residual"] > 1e-2


def test_verify_frictionless_circle(tmp_path):
    f = tmp_path / "c.csv"
    io.write_curve(f, circle_points(1.5, 3000))
    assert run("verify", "--curve", f, "--closed", "--mu", 0, "--v", 3, "--out", tmp_path / "r.json") == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "bogus:", "--mu", 0.1, "--v", 2, "--out", "x.csv"],
        ["generate", "circle:R=1", "--mu", 0.1, "--v", 2, "--out", "x.csv"],
        ["verify", "--curve", "c.csv", "--force", "power:eps=3", "--mu", 0.1, "--v", 2],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    io.write_curve("c.csv", circle_points())
    assert run(*argv) == 2


def test_data_errors_exit_3(tmp_path):
    missing = tmp_path / "missing.csv"
    assert run("verify", "--curve", missing, "--mu", 0.5, "--v", 1) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\nfoo,3\n")
    assert run("verify", "--curve", bad, "--mu", 0.5, "--v", 1) == 3
    short = tmp_path / "short.csv"
    short.write_text("x,y\n1,0\n0,1\n-1,0\n")
    assert run("verify", "--curve", short, "--mu", 0.5, "--v", 1) == 3
    header = tmp_path / "header.csv"
    header.write_text("a,b\n1,0\n")
    assert run("plot", header, "--out", tmp_path / "p.svg") == 3
    assert run("plot", missing, "--out", tmp_path / "p.svg") == 3


def test_classify(capsys):
    assert run("classify", "--mu", 0.1, "--v", 2) == 0
    assert capsys.readouterr().out.strip() == "UnboundedToSpiral"
    assert run("classify", "--mu", 0.3, "--v", 0.8, "--json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["class"] == "BoundedToSpiral" and doc["tail_monotone"]


def test_tms_roundtrip(tmp_path):
    src, tms, back = tmp_path / "a.csv", tmp_path / "t.csv", tmp_path / "b.csv"
    assert run("generate", "spiral:sign=+", "--mu", 0.1, "--v", 2, "--out", src) == 0
    assert run("tms", "forward", "--in", src, "--out", tms) == 0
    t, pts = io.read_tms(tms)
    assert np.all(np.diff(t) > 0) and pts.shape == (len(t), 2)
    assert run("tms", "inverse", "--in", tms, "--out", back) == 0
    assert len(io.read_curve(back)) == len(t)


# -- determinism and the phase bundle ---------------------------------------------


def test_outputs_are_byte_identical(tmp_path, monkeypatch):
    files = []
    for i, seed in enumerate(("1", "999")):
        monkeypatch.setenv("RAMPLAB_SEED", seed)
        d = tmp_path / str(i)
        d.mkdir()
        assert run("generate", "polar:", "--mu", 0.1, "--v", 2, "--out", d / "p.csv") == 0
        assert run("verify", "--curve", d / "p.csv", "--mu", 0.1, "--v", 2, "--out", d / "r.json") == 0
        assert run("phase", "--mu", 0.3, "--v", 0.5, "--steps", 200, "--grid-n", 4, "--out-dir", d / "ph") == 0
        assert run("plot", d / "ph", d / "p.csv", "--out", d / "f.svg") == 0
        files.append(d)
    for name in ("p.csv", "r.json", "ph/index.json", "ph/traj_000.csv", "f.svg"):
        assert (files[0] / name).read_bytes() == (files[1] / name).read_bytes(), name


def test_phase_bundle_layout(tmp_path):
    out = tmp_path / "ph"
    assert run("phase", "--mu", 0.1, "--v", 2, "--h", 0.02, "--steps", 300, "--grid-n", 9, "--out-dir", out) == 0
    index = json.loads((out / "index.json").read_text())
    assert index["mu"] == 0.1 and index["v"] == 2.0 and index["system"] == "quadratic"
    entries = index["trajectories"]
    kinds = [e["kind"] for e in entries]
    assert kinds.count("halfline") == 2 and kinds.count("seed") == 9
    assert sorted(e["sign"] for e in entries if e["kind"] == "halfline") == [-1, 1]
    for e in entries:
        t, states = io.read_phase(out / e["file"])
        assert len(t) == e["points"] and np.all(np.diff(t) > 0)
        if e["kind"] == "halfline":
            assert e["stop_reason"] == "halfline"  # drawn in closed form, not integrated
            continue
        # joined backward/forward runs report both stop reasons
        for reason in e["stop_reason"].split("/"):
            assert reason in ("steps", "overflow", "singularity", "min_norm", "max_norm")


def test_plot_writes_svg(tmp_path):
    c = tmp_path / "c.csv"
    io.write_curve(c, circle_points())
    svg = tmp_path / "c.svg"
    assert run("plot", c, "--out", svg, "--title", "unit circle") == 0
    text = svg.read_text()
    assert text.startswith("<?xml") and text.count('class="series"') == 1 and "unit circle" in text


def test_console_script_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "ramplab.cli", "classify", "--mu", "0.5", "--v", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and res.stdout.strip() == "CirclesAndSpirals"
    res = subprocess.run([sys.executable, "-m", "ramplab.cli", "nope"], capture_output=True, text=True, check=False)
    assert res.returncode == 2 and "error" in res.stderr

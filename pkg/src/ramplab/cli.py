"""Command-line interface: ``ramplab <verb> ...``.

Verbs: generate, verify, tms, phase, classify, plot. Exit status is 0 on
success, 1 when a verification fails, 2 for usage errors and 3 for bad
input data. ``RAMPLAB_SEED`` is reserved; every computation here is
deterministic and ignores it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import io
from .analytic import asymptotic_report, parse_family, sample_family
from .dynamics import phase_portrait
from .errors import (
    BadNumber,
    DataError,
    MissingFlag,
    RampLabError,
    UnknownVerb,
    UsageError,
)
from .forces import parse_force
from .geometry import FIDELITY_TOL, reparam_arclength
from .plotting import Series, render_svg
from .ramp_law import RampConfig, ramp_residual
from .treadmillsled import TmsCurve, tms_forward, tms_inverse

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3

VERBS = ("generate", "verify", "tms", "phase", "classify", "plot")


@dataclass(frozen=True)
class Command:
    verb: str
    options: dict = field(default_factory=dict)


def _finite(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(text)
    return x


_finite.__name__ = "number"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises typed usage errors instead of exiting."""

    def error(self, message):
        if "invalid choice" in message and "verb" in message:
            raise UnknownVerb(message)
        if "required" in message:
            raise MissingFlag(message)
        if "invalid number value" in message or "invalid int value" in message:
            raise BadNumber(message)
        raise UsageError(message)


def _add_cfg(p, mu_required=True, v_required=True):
    p.add_argument("--mu", type=_finite, required=mu_required, help="friction coefficient")
    p.add_argument("--v", type=_finite, required=v_required, help="constant speed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ramplab", description="Constant-speed ramps under a central force with friction.")
    parser.add_argument("--version", action="version", version=f"ramplab {__version__}")
    sub = parser.add_subparsers(dest="verb", metavar="verb", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("generate", help="sample a closed-form ramp to CSV")
    g.add_argument("family", help="circle:R=<r> | v1:u=<rad> | spiral:sign=<+|-> | polar:")
    _add_cfg(g)
    g.add_argument("--h", type=_finite, default=1e-3, help="arc-length spacing (default 1e-3)")
    g.add_argument("--span", type=_finite, nargs=2, metavar=("T0", "T1"), help="native parameter span")
    g.add_argument("--out", required=True, help="output CSV (x,y)")

    v = sub.add_parser("verify", help="check a curve CSV against the ramp law")
    v.add_argument("--curve", required=True, help="input CSV (x,y)")
    v.add_argument("--force", default="icho", help="icho | power:eps=<+-1>,n=<real>[,m=<real>]")
    _add_cfg(v)
    v.add_argument("--tol", type=_finite, default=1e-5, help="pass threshold on max residual (default 1e-5)")
    v.add_argument("--closed", action="store_true", help="treat the curve as closed")
    v.add_argument("--fidelity", type=_finite, default=FIDELITY_TOL, help="arc-length fidelity tolerance")
    v.add_argument("--out", help="report JSON (default: stdout)")

    t = sub.add_parser("tms", help="TreadmillSled transform between CSV files")
    t.add_argument("direction", choices=("forward", "inverse"))
    t.add_argument("--in", dest="inp", required=True, help="x,y CSV (forward) or t,xi1,xi2 CSV (inverse)")
    t.add_argument("--out", required=True)
    t.add_argument("--closed", action="store_true", help="forward: treat the curve as closed")
    t.add_argument("--g0", type=_finite, default=0.0, help="inverse: initial rotation angle")

    ph = sub.add_parser("phase", help="phase portrait trajectories")
    _add_cfg(ph)
    ph.add_argument("--h", type=_finite, default=1e-2, help="RK4 step (default 1e-2)")
    ph.add_argument("--steps", type=int, default=4000, help="RK4 steps per direction (default 4000)")
    ph.add_argument("--grid-n", type=int, default=16, help="number of seeds (default 16)")
    ph.add_argument("--bbox", type=_finite, nargs=4, default=(-2.0, -2.0, 2.0, 2.0), metavar=("X0", "Y0", "X1", "Y1"))
    ph.add_argument("--out-dir", required=True)

    c = sub.add_parser("classify", help="print the asymptotic class of the ramps")
    _add_cfg(c)
    c.add_argument("--json", action="store_true", help="print the full measurement report")

    pl = sub.add_parser("plot", help="render CSV files or phase bundles to SVG")
    pl.add_argument("inputs", nargs="+", help="CSV files or phase output directories")
    pl.add_argument("--out", required=True)
    pl.add_argument("--title", default="")
    pl.add_argument("--size", type=int, default=480)
    return parser


def parse_args(argv) -> Command:
    """Parse ``argv`` into a :class:`Command`; raises a :class:`UsageError` subclass on bad input."""
    ns = build_parser().parse_args(list(argv))
    opts = {k: v for k, v in vars(ns).items() if k != "verb"}
    cmd = Command(ns.verb, opts)
    _validate(cmd)
    return cmd


def _validate(cmd: Command):
    o = cmd.options
    if "mu" in o and o["mu"] is not None:
        # mu = 0 is the frictionless variant, meaningful only for verify
        if o["mu"] < 0 or (o["mu"] == 0 and cmd.verb != "verify"):
            raise BadNumber(f"--mu must be positive, got {o['mu']}")
    if "v" in o and o["v"] is not None and o["v"] <= 0:
        raise BadNumber(f"--v must be positive, got {o['v']}")
    for key in ("h", "tol", "fidelity"):
        if key in o and o[key] <= 0:
            raise BadNumber(f"--{key} must be positive, got {o[key]}")
    if cmd.verb == "phase" and (o["steps"] < 1 or o["grid_n"] < 2):
        raise BadNumber("--steps must be >= 1 and --grid-n >= 2")
    if cmd.verb == "plot" and o["size"] < 100:
        raise BadNumber("--size must be at least 100")


def _cfg(o) -> RampConfig:
    return RampConfig(o["mu"], o["v"])


def _run_generate(o, out) -> int:
    family = parse_family(o["family"], _cfg(o))
    sampled = sample_family(family, o["h"], tuple(o["span"]) if o["span"] else None)
    io.write_curve(o["out"], sampled.curve.pos)
    print(f"wrote {len(sampled.curve)} points to {o['out']}", file=out)
    return EXIT_OK


def _run_verify(o, out) -> int:
    force = parse_force(o["force"])
    pts = io.read_curve(o["curve"])
    curve = reparam_arclength(pts, closed=o["closed"], fidelity_tol=o["fidelity"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = ramp_residual(curve, force, _cfg(o))
    for w in caught:
        print(f"ramplab: warning: {w.message}", file=sys.stderr)
    doc = report.to_json()
    doc["tol"] = o["tol"]
    doc["passed"] = report.passes(o["tol"])
    if o["out"]:
        io.write_json(o["out"], doc)
        print(f"max_residual {report.max_residual:.6g} ({'PASS' if doc['passed'] else 'FAIL'})", file=out)
    else:
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    return EXIT_OK if doc["passed"] else EXIT_FAILED


def _run_tms(o, out) -> int:
    if o["direction"] == "forward":
        curve = reparam_arclength(io.read_curve(o["inp"]), closed=o["closed"])
        gamma = tms_forward(curve)
        io.write_tms(o["out"], gamma.params, gamma.points)
    else:
        t, pts = io.read_tms(o["inp"])
        curve = tms_inverse(TmsCurve(t, pts), o["g0"])
        io.write_curve(o["out"], curve.pos)
    print(f"wrote {o['out']}", file=out)
    return EXIT_OK


def _run_phase(o, out) -> int:
    cfg = _cfg(o)
    trajs = phase_portrait(cfg, tuple(o["bbox"]), o["grid_n"], h=o["h"], n_steps=o["steps"])
    out_dir = Path(o["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, tr in enumerate(trajs):
        name = f"traj_{i:03d}.csv"
        io.write_phase(out_dir / name, tr.t, tr.states)
        entries.append({"file": name, "stop_reason": tr.stop_reason, "points": len(tr), **tr.meta})
    index = {
        "mu": cfg.mu,
        "v": cfg.v,
        "system": trajs[0].system.value,
        "h": o["h"],
        "steps": o["steps"],
        "bbox": list(o["bbox"]),
        "trajectories": entries,
    }
    io.write_json(out_dir / "index.json", index)
    print(f"wrote {len(trajs)} trajectories to {out_dir}", file=out)
    return EXIT_OK


def _run_classify(o, out) -> int:
    report = asymptotic_report(_cfg(o))
    if o["json"]:
        json.dump(
            {
                "class": report.kind.value,
                "min_radius": report.min_radius,
                "max_radius": report.max_radius,
                "tail_monotone": report.tail_monotone,
            },
            out,
            indent=2,
            sort_keys=True,
        )
        out.write("\n")
    else:
        print(report.kind.value, file=out)
    return EXIT_OK


def _plot_series(path: Path) -> list[Series]:
    if path.is_dir():
        index_file = path / "index.json"
        try:
            index = json.loads(index_file.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise DataError(f"{index_file}: {exc}") from None
        series = []
        for entry in index.get("trajectories", []):
            pts = io.read_any(path / entry["file"])
            halfline = entry.get("kind") == "halfline"
            series.append(Series(pts, entry["file"], "#d62728" if halfline else "#1f77b4", 2.0 if halfline else 0.8))
        return series
    return [Series(io.read_any(path), path.name)]


def _run_plot(o, out) -> int:
    series = []
    for inp in o["inputs"]:
        series.extend(_plot_series(Path(inp)))
    svg = render_svg(series, size=o["size"], title=o["title"], version=__version__)
    Path(o["out"]).write_text(svg, encoding="utf-8")
    print(f"wrote {o['out']} ({len(series)} paths)", file=out)
    return EXIT_OK


_RUNNERS = {
    "generate": _run_generate,
    "verify": _run_verify,
    "tms": _run_tms,
    "phase": _run_phase,
    "classify": _run_classify,
    "plot": _run_plot,
}


def execute(cmd: Command, out=None) -> int:
    """Run a parsed command and return its exit status."""
    os.environ.get("RAMPLAB_SEED")  # reserved, intentionally unused
    return _RUNNERS[cmd.verb](cmd.options, out or sys.stdout)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_args(argv)
    except UsageError as exc:
        print(f"ramplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return execute(cmd)
    except DataError as exc:
        print(f"ramplab: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"ramplab: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (RampLabError, ValueError) as exc:
        print(f"ramplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``spindle <subcommand> [flags]``.

Flags may also come from a JSON file (``--config``) whose keys mirror the flag
names with underscores; explicit flags win over the file.  Errors are printed
as one line, ``ERROR <code>: <message>``, with exit status 2 for invalid input
or infeasible settings and 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, SpindleError, ValidationError

# flag defaults applied after the config file; None means "required"
DEFAULTS = {
    "workers": None,  # filled from SPINDLE_WORKERS
    "seed": 0,
    "out": None,
    "oracle": False,
    "model": "inscribed",
    "reps": 100,
    "field": ["var_f0", "var_missed"],
    "n_max": 1 << 16,
}


class UsageError(ValidationError):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _n_list(text: str):
    try:
        vals = [int(float(v)) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"--n expects comma-separated integers, got {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes (default $SPINDLE_WORKERS or 1)")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="64-bit seed")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with flag values")

    p = _Parser(prog="spindle", description="Spindle-convex hulls and random disc-polygons.")
    p.add_argument("--version", action="version", version=f"spindle {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common], argument_default=argparse.SUPPRESS)

    s = add("hull", "r-hull of the points in a CSV of x,y rows")
    s.add_argument("--input")
    s.add_argument("--r", type=float)
    s.add_argument("--oracle", action="store_true", help="use the brute-force edge test")

    s = add("caps", "cap area, arc length, Jacobian and small-height ratios")
    s.add_argument("--body")
    s.add_argument("--r", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--t", type=float)

    s = add("limits", "limit constants as JSON")
    s.add_argument("--body")
    s.add_argument("--r", type=float)
    s.add_argument("--model", choices=["inscribed", "circle", "circumscribed"])

    s = add("dual-check", "residuals of the r-dual identities")
    s.add_argument("--body")
    s.add_argument("--r", type=float)

    s = add("simulate", "Monte Carlo means and variances, written as CSV")
    s.add_argument("--body")
    s.add_argument("--r", type=float)
    s.add_argument("--model", choices=["inscribed", "circle", "circumscribed"])
    s.add_argument("--n", type=_n_list, help="comma-separated sample sizes")
    s.add_argument("--reps", type=int)

    s = add("variance-scan", "log-log slopes from a simulate CSV")
    s.add_argument("--input")
    s.add_argument("--field", action="append", help="column to fit (repeatable)")

    s = add("lln", "normalized observables along one nested sample path")
    s.add_argument("--body")
    s.add_argument("--r", type=float)
    s.add_argument("--model", choices=["inscribed", "circle"])
    s.add_argument("--n-max", dest="n_max", type=int)
    return p


REQUIRED = {
    "hull": ("input", "r"),
    "caps": ("body", "r", "theta", "t"),
    "limits": ("body", "r"),
    "dual-check": ("body", "r"),
    "simulate": ("body", "r", "n"),
    "variance-scan": ("input",),
    "lln": ("body", "r"),
}
ALLOWED = {
    "hull": {"input", "r", "oracle"},
    "caps": {"body", "r", "theta", "t"},
    "limits": {"body", "r", "model"},
    "dual-check": {"body", "r"},
    "simulate": {"body", "r", "model", "n", "reps"},
    "variance-scan": {"input", "field"},
    "lln": {"body", "r", "model", "n_max"},
}
GLOBAL = {"workers", "seed", "out"}


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the config file and explicit flags (in that order)."""
    cmd = args.command
    explicit = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    from_file = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(from_file, dict):
            raise ConfigError("config file must hold a JSON object")
        from_file = {k.replace("-", "_"): v for k, v in from_file.items()}
        unknown = set(from_file) - ALLOWED[cmd] - GLOBAL
        if unknown:
            raise ConfigError(f"unknown keys for {cmd}: {', '.join(sorted(unknown))}")
        if "n" in from_file and not isinstance(from_file["n"], list):
            from_file["n"] = _n_list(from_file["n"])
    keys = ALLOWED[cmd] | GLOBAL
    cfg = {k: DEFAULTS[k] for k in keys if k in DEFAULTS}
    cfg.update(from_file)
    cfg.update(explicit)
    if cfg.get("workers") is None:
        from .mc import default_workers
        cfg["workers"] = default_workers()
    missing = [k for k in REQUIRED[cmd] if cfg.get(k) is None]
    if missing:
        raise UsageError(f"{cmd} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    cfg["command"] = cmd
    return dict(sorted(cfg.items()))


def _metadata(cfg: dict) -> dict:
    from ._kernels import BACKEND_NAME
    return {"tool": "spindle", "version": __version__, "backend": BACKEND_NAME,
            "seed": cfg.get("seed"), "config": cfg}


def _emit(cfg: dict, text: str):
    if cfg.get("out"):
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: dict, payload: dict):
    doc = {"metadata": _metadata(cfg)}
    doc.update(payload)
    _emit(cfg, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _read_points(path: str) -> np.ndarray:
    rows = []
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}")
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                x, y = float(parts[0]), float(parts[1])
            except (ValueError, IndexError):
                if not rows and lineno == 1:
                    continue  # header row
                raise ValidationError(f"{path}:{lineno}: expected 'x,y', got {line!r}")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            rows.append((x, y))
    return np.array(rows, dtype=float).reshape(-1, 2)


# -- subcommands ------------------------------------------------------------------

def cmd_hull(cfg):
    from .hull import r_hull, r_hull_oracle
    pts = _read_points(cfg["input"])
    dp = (r_hull_oracle if cfg["oracle"] else r_hull)(pts, cfg["r"])
    _emit_json(cfg, {"r": cfg["r"], "vertices": dp.vertices.tolist(), "indices": dp.indices.tolist(),
                     "f0": dp.f0, "area": dp.area(), "perimeter": dp.perimeter()})


def cmd_caps(cfg):
    from .body import parse_body
    from .cap import ReparamPoint, cap_limit_constants, cap_measures, phi_jacobian_closed, phi_jacobian_fd

    body = parse_body(cfg["body"])
    r, theta, t = cfg["r"], cfg["theta"], cfg["t"]
    area, length = cap_measures(body, theta, t, r)
    # reference pair: two points on the inner arc of the cap, a quarter arc from the middle
    half = 0.25 * length / r
    rp = ReparamPoint(theta, t, theta - half, theta + half)
    out = {"theta": theta, "t": t, "r": r, "area": area, "arc_length": length,
           "reference_point": vars(rp),
           "jacobian_closed": phi_jacobian_closed(body, rp, r),
           "jacobian_fd": phi_jacobian_fd(body, rp, r)}
    try:
        c_len, c_area = cap_limit_constants(body, theta, r)
        out["ratio_length"] = length * t ** -0.5 / c_len
        out["ratio_area"] = area * t ** -1.5 / c_area
    except ValidationError:
        out["ratio_length"] = out["ratio_area"] = None
    _emit_json(cfg, out)


def cmd_limits(cfg):
    from .asymptotics import limits_for
    from .body import parse_body
    body = parse_body(cfg["body"])
    _emit_json(cfg, {"limits": limits_for(cfg["model"], body, cfg["r"]).as_dict()})


def cmd_dual_check(cfg):
    from .body import parse_body
    from .dual import DualBody, constant_width, constant_width_residuals, dual_identity_report, r_dual

    body = parse_body(cfg["body"])
    r = cfg["r"]
    report = dual_identity_report(body, r)
    th = np.linspace(0.0, 2.0 * math.pi, 1024, endpoint=False)
    dd = DualBody(r_dual(body, r), r)
    out = {"residuals": report,
           "double_dual": float(np.max(np.abs(dd.support(th) - body.support(th))))}
    w = constant_width(body)
    if w is not None and abs(w - r) <= 1e-9 * r:
        out["constant_width"] = {f"{p:.6g}": v for p, v in constant_width_residuals(body, r).items()}
    _emit_json(cfg, out)


def cmd_simulate(cfg):
    from .mc import ExperimentConfig, format_csv, run_experiment
    ec = ExperimentConfig(cfg["body"], cfg["r"], cfg["model"], cfg["n"], cfg["reps"], cfg["seed"],
                          cfg["workers"])
    ec.validate()
    stats = run_experiment(ec)
    _emit(cfg, format_csv(ec, stats))


def cmd_variance_scan(cfg):
    from .mc import read_csv, variance_slope
    meta, stats = read_csv(cfg["input"])
    fits = [vars(variance_slope(stats, f)) for f in cfg["field"]]
    _emit_json(cfg, {"source": meta, "fits": fits})


def cmd_lln(cfg):
    from .mc import lln_trajectory
    model = cfg["model"]
    rows = lln_trajectory(cfg["body"], cfg["r"], cfg["seed"], cfg["n_max"], model)
    _emit_json(cfg, {"trajectory": rows})


COMMANDS = {
    "hull": cmd_hull,
    "caps": cmd_caps,
    "limits": cmd_limits,
    "dual-check": cmd_dual_check,
    "simulate": cmd_simulate,
    "variance-scan": cmd_variance_scan,
    "lln": cmd_lln,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        print("config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)
        COMMANDS[cfg["command"]](cfg)
    except SpindleError as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())

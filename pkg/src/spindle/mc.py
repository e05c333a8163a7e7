"""Seeded Monte Carlo estimates of vertex counts and missed areas.

Every replication draws from its own Philox stream keyed by
``(seed, n, replication)``.  Replications are grouped into fixed blocks; each
block is reduced with Welford's update and the blocks are merged in order, so
the numbers do not depend on how many worker processes ran the blocks.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__, _kernels
from .body import DiscBody, parse_body
from .dual import intersection_arc_count, intersection_from_hull, r_dual
from .errors import ConfigError, Infeasible, InsufficientPoints
from .geom import REL_TOL, arc_polygon_area
from .hull import _canonical

MODELS = ("inscribed", "circle", "circumscribed")
BLOCK = 64
CSV_HEADER = (
    "model,body,r,n,reps,seed,mean_f0,se_f0,var_f0,mean_missed,se_missed,var_missed,"
    "mean_perim_diff,se_perim_diff,var_perim_diff,norm_mean_f0,norm_mean_missed,"
    "norm_var_f0,norm_var_missed"
).split(",")
_LLN_STREAM = 0x4C4C4E  # substream tag for law-of-large-numbers paths


@dataclass
class ExperimentConfig:
    body: str
    r: float
    model: str = "inscribed"
    n_values: list = field(default_factory=lambda: [1000])
    replications: int = 100
    seed: int = 0
    workers: int = 1
    output: str | None = None

    def validate(self):
        """Check the fields and the feasibility of (body, r, model); returns the parsed body."""
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {', '.join(MODELS)}, got {self.model!r}")
        ns = [int(n) for n in self.n_values]
        if not ns or any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError(f"n_values must be positive and strictly increasing, got {self.n_values}")
        self.n_values = ns
        if int(self.replications) < 2:
            raise ConfigError(f"replications must be >= 2, got {self.replications}")
        if int(self.workers) < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.r > 0:
            raise ConfigError(f"r must be positive, got {self.r}")
        body = parse_body(self.body)
        if self.model == "inscribed":
            body.require_sliding_radius_below(self.r, "inscribed model")
        elif self.model == "circle":
            if not isinstance(body, DiscBody) or abs(body.radius - self.r) > REL_TOL * self.r:
                raise Infeasible(f"circle model needs body disc:R with R = r = {self.r:g}, got {body.spec}")
        else:
            r_dual(body, self.r)
        return body

    def metadata(self) -> dict:
        """Everything that determines the numbers (worker count and output path do not)."""
        d = asdict(self)
        d.pop("workers")
        d.pop("output")
        return d


@dataclass
class SummaryStats:
    model: str
    body: str
    r: float
    n: int
    reps: int
    seed: int
    mean_f0: float
    se_f0: float
    var_f0: float
    mean_missed: float
    se_missed: float
    var_missed: float
    mean_perim_diff: float | None
    se_perim_diff: float | None
    var_perim_diff: float | None
    norm_mean_f0: float
    norm_mean_missed: float
    norm_var_f0: float
    norm_var_missed: float
    f0_mismatches: int = 0
    containment_failures: int = 0

    def row(self) -> list[str]:
        return [_fmt(getattr(self, k)) for k in CSV_HEADER]


@dataclass
class SlopeFit:
    field: str
    slope: float
    intercept: float
    residual: float
    n_range: tuple


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def normalizers(model: str, n: int) -> tuple[float, float, float, float]:
    """Factors for (mean_f0, mean_missed, var_f0, var_missed)."""
    if model == "circle":
        return 1.0, float(n), 1.0, float(n) ** 2
    return n ** (-1.0 / 3.0), n ** (2.0 / 3.0), n ** (-1.0 / 3.0), n ** (5.0 / 3.0)


# -- streaming moments ------------------------------------------------------

class Welford:
    """One-pass mean and centered second moment of a fixed-width vector."""

    def __init__(self, width: int):
        self.count = 0
        self.mean = np.zeros(width)
        self.m2 = np.zeros(width)

    def add(self, x):
        x = np.asarray(x, dtype=float)
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def merge(self, other: "Welford"):
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean.copy(), other.m2.copy()
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean = self.mean + delta * (other.count / total)
        self.m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / total)
        self.count = total

    def variance(self) -> np.ndarray:
        return self.m2 / (self.count - 1) if self.count > 1 else np.zeros_like(self.m2)


# -- one replication ----------------------------------------------------------

def replication_rng(seed: int, n: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(n), int(rep)))))


def _hull_area(pts, kept, r) -> float:
    if len(kept) < 2:
        return 0.0
    return arc_polygon_area(pts[kept], r)


class _Sampler:
    """Per-process state: parsed body, its area and (if needed) its dual."""

    def __init__(self, body_spec: str, r: float, model: str):
        self.body = parse_body(body_spec)
        self.r = float(r)
        self.model = model
        self.area = self.body.area()
        self.perimeter = self.body.perimeter()
        self.dual = r_dual(self.body, r) if model == "circumscribed" else None
        self.probe = self.body.boundary_points(np.arange(64) * (2.0 * math.pi / 64))

    def replicate(self, rng, n):
        """``(f0, missed, perim_diff, f0_matches, contains_body)`` for one sample."""
        r = self.r
        if self.dual is None:
            pts = self.body.sample_uniform(rng, n)
            lin = _kernels.linear_hull(pts)
            kept = _kernels.prune_r_hull(pts, lin, r, REL_TOL * r)
            return len(kept), self.area - _hull_area(pts, kept, r), math.nan, True, True
        centers = self.dual.sample_uniform(rng, n)
        lin = _kernels.linear_hull(centers)
        kept = _kernels.prune_r_hull(centers, lin, r, REL_TOL * r)
        inter = intersection_from_hull(centers, _canonical(r, centers, kept))
        w = centers[lin]
        d = np.hypot(self.probe[:, None, 0] - w[None, :, 0], self.probe[:, None, 1] - w[None, :, 1])
        return (inter.f0, inter.area() - self.area, inter.perimeter() - self.perimeter,
                inter.f0 == intersection_arc_count(centers, r, lin),
                bool(np.all(d <= r * (1.0 + 1e-9))))


_SAMPLERS: dict = {}


def _sampler(body_spec, r, model) -> _Sampler:
    key = (body_spec, float(r), model)
    if key not in _SAMPLERS:
        _SAMPLERS[key] = _Sampler(body_spec, r, model)
    return _SAMPLERS[key]


def _run_block(task):
    body_spec, r, model, seed, n, start, stop = task
    s = _sampler(body_spec, r, model)
    acc = Welford(3)
    mismatches = failures = 0
    for rep in range(start, stop):
        f0, missed, perim, match, inside = s.replicate(replication_rng(seed, n, rep), n)
        acc.add((f0, missed, 0.0 if math.isnan(perim) else perim))
        mismatches += not match
        failures += not inside
    return acc, mismatches, failures


def _tasks(cfg: ExperimentConfig):
    reps = int(cfg.replications)
    for n in cfg.n_values:
        for start in range(0, reps, BLOCK):
            yield (cfg.body, float(cfg.r), cfg.model, int(cfg.seed), int(n), start, min(reps, start + BLOCK))


def _summarize(cfg, n, acc: Welford, mismatches, failures) -> SummaryStats:
    reps = acc.count
    mean = [float(v) for v in acc.mean]
    var = [float(v) for v in acc.variance()]
    se = [math.sqrt(v / reps) for v in var]
    a, b, c, d = normalizers(cfg.model, n)
    circ = cfg.model == "circumscribed"
    return SummaryStats(
        cfg.model, parse_body(cfg.body).spec, float(cfg.r), int(n), reps, int(cfg.seed),
        mean[0], se[0], var[0], mean[1], se[1], var[1],
        mean[2] if circ else None, se[2] if circ else None, var[2] if circ else None,
        mean[0] * a, mean[1] * b, var[0] * c, var[1] * d, mismatches, failures)


def run_experiment(cfg: ExperimentConfig) -> list[SummaryStats]:
    """Estimate means and variances for every n in ``cfg.n_values``."""
    cfg.validate()
    tasks = list(_tasks(cfg))
    if int(cfg.workers) == 1:
        results = [_run_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=int(cfg.workers)) as pool:
            results = list(pool.map(_run_block, tasks))
    out = []
    pos = 0
    for n in cfg.n_values:
        acc, mism, fail = Welford(3), 0, 0
        while pos < len(tasks) and tasks[pos][4] == n:
            block, m, f = results[pos]
            acc.merge(block)
            mism += m
            fail += f
            pos += 1
        out.append(_summarize(cfg, n, acc, mism, fail))
    if cfg.output:
        write_csv(cfg.output, cfg, out)
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SPINDLE_WORKERS", "1")))
    except ValueError:
        raise ConfigError(f"SPINDLE_WORKERS must be an integer, got {os.environ['SPINDLE_WORKERS']!r}")


# -- CSV ----------------------------------------------------------------------

def format_csv(cfg: ExperimentConfig, stats: list[SummaryStats]) -> str:
    buf = io.StringIO()
    meta = {"tool": "spindle", "version": __version__, "config": cfg.metadata()}
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    checks = {str(s.n): {"f0_mismatches": s.f0_mismatches, "containment_failures": s.containment_failures}
              for s in stats}
    buf.write("# checks " + json.dumps(checks, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in stats:
        w.writerow(s.row())
    return buf.getvalue()


def write_csv(path, cfg: ExperimentConfig, stats: list[SummaryStats]):
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(cfg, stats))


def read_csv(path) -> tuple[dict, list[SummaryStats]]:
    """Inverse of :func:`write_csv`: ``(metadata, stats)``."""
    meta, checks, rows = {}, {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# checks "):
                checks = json.loads(line[len("# checks "):])
            elif line.startswith("#"):
                meta = json.loads(line[1:])
            else:
                rows.append(line)
    reader = csv.DictReader(rows)
    if reader.fieldnames != CSV_HEADER:
        raise ConfigError(f"{path}: unexpected CSV header {reader.fieldnames}")
    types = {f.name: f.type for f in fields(SummaryStats)}
    stats = []
    for rec in reader:
        vals = {}
        for k in CSV_HEADER:
            v = rec[k]
            if v == "":
                vals[k] = None
            elif k in ("model", "body"):
                vals[k] = v
            elif types[k] == "int":
                vals[k] = int(v)
            else:
                vals[k] = float(v)
        c = checks.get(str(vals["n"]), {})
        stats.append(SummaryStats(**vals, f0_mismatches=c.get("f0_mismatches", 0),
                                  containment_failures=c.get("containment_failures", 0)))
    return meta, stats


# -- slopes and trajectories ----------------------------------------------------

def variance_slope(stats: list[SummaryStats], field: str = "var_f0") -> SlopeFit:
    """Least-squares slope of ``log(stat)`` against ``log(n)``."""
    pts = [(s.n, getattr(s, field)) for s in stats]
    pts = [(n, v) for n, v in pts if v is not None]
    if len(pts) < 4:
        raise InsufficientPoints(f"slope of {field} needs >= 4 n-values, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    vs = np.array([p[1] for p in pts], dtype=float)
    if math.log10(ns.max() / ns.min()) < 2.0 - 1e-12:
        raise InsufficientPoints(f"n-values span {ns.min():g}..{ns.max():g}, less than two decades")
    if np.any(vs <= 0):
        raise InsufficientPoints(f"{field} has non-positive entries; log-log fit undefined")
    x, y = np.log(ns), np.log(vs)
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    resid = float(np.sqrt(res[0] / len(x))) if len(res) else 0.0
    return SlopeFit(field, float(slope), float(intercept), resid, (int(ns.min()), int(ns.max())))


def lln_trajectory(body_spec: str, r: float, seed: int, n_max: int, model: str = "inscribed") -> list[dict]:
    """One nested sample path; the hull is recomputed at ``n = 2^k`` (and ``n_max``)."""
    cfg = ExperimentConfig(body_spec, r, model, [n_max], 2, seed)
    body = cfg.validate()
    if model == "circumscribed":
        raise ConfigError("lln trajectories are defined for the inscribed and circle models")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(_LLN_STREAM,))))
    pts = body.sample_uniform(rng, n_max)
    checkpoints = sorted({1 << k for k in range(int(math.log2(n_max)) + 1)} | {n_max})
    area = body.area()
    out = []
    for n in checkpoints:
        sub = np.ascontiguousarray(pts[:n])
        lin = _kernels.linear_hull(sub)
        kept = _kernels.prune_r_hull(sub, lin, float(r), REL_TOL * r)
        missed = area - _hull_area(sub, kept, r)
        a, b, _, _ = normalizers(model, n)
        out.append({"n": n, "f0": len(kept), "missed": missed,
                    "norm_f0": len(kept) * a, "norm_missed": missed * b})
    return out

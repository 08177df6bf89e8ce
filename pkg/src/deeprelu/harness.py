"""Error measurement, parameter sweeps and report output.

CSV columns (stable order)::

    row, construction, params, seed, rng, input_dim, n_outputs, depth, size,
    n_weights, max_abs_weight, eps, linf_error, linf_argmax, l2_mu_error,
    l2_stderr, l2_samples, status[, wall_time]

``wall_time`` is only written when timing is requested, so that repeated runs
with identical flags produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bandlimited_nets import RNG_ALGORITHM, MeasureSpec, make_rng
from .catalog import TARGETS, build_target
from .errors import FeasibilityError, ParameterError
from .relu_ir import NetworkGraph, evaluate

MAX_GRID_POINTS = 10 ** 7
GRID_1D = 2001
GRID_2D = 401
MC_POINTS = 100_000
BANDLIMITED_MC_POINTS = 2000

CSV_COLUMNS = [
    "row", "construction", "params", "seed", "rng", "input_dim", "n_outputs", "depth", "size",
    "n_weights", "max_abs_weight", "eps", "linf_error", "linf_argmax", "l2_mu_error",
    "l2_stderr", "l2_samples", "status",
]


def _compare(net_out: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Pointwise max deviation; a 1-D reference is matched to the last output."""
    ref = np.asarray(ref, dtype=np.float64)
    if ref.ndim == 1:
        return np.abs(net_out[:, -1] - ref)
    if ref.shape != net_out.shape:
        raise ParameterError(f"oracle shape {ref.shape} does not match network {net_out.shape}")
    return np.max(np.abs(net_out - ref), axis=1)


def uniform_grid(domain: Sequence[tuple[float, float]], grid_per_dim: int) -> np.ndarray:
    """Tensor grid including endpoints, shape (grid_per_dim**d, d)."""
    if grid_per_dim < 2:
        raise ParameterError("grid_per_dim must be >= 2")
    total = grid_per_dim ** len(domain)
    if total > MAX_GRID_POINTS:
        raise FeasibilityError(f"grid of {total} points exceeds {MAX_GRID_POINTS}")
    axes = [np.linspace(lo, hi, grid_per_dim) for lo, hi in domain]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(domain))


def max_error_on(net: NetworkGraph, oracle: Callable, points: np.ndarray):
    err = _compare(evaluate(net, points), oracle(points))
    k = int(np.argmax(err))
    return float(err[k]), tuple(float(v) for v in points[k])


def linf_error(net: NetworkGraph, oracle: Callable, domain, grid_per_dim: int):
    """Max ``|net - oracle|`` over the uniform tensor grid, and the maximizing point."""
    if len(domain) != net.input_dim:
        raise ParameterError("domain dimension differs from the network input_dim")
    return max_error_on(net, oracle, uniform_grid(domain, grid_per_dim))


def l2_mu_error(net: NetworkGraph, oracle: Callable, mu: MeasureSpec, n_samples: int, seed: int):
    """Monte Carlo ``sqrt(mu(B) * mean(|net - oracle|**2))`` and its delta-method stderr."""
    if n_samples < 100:
        raise ParameterError("l2_mu_error needs at least 100 samples")
    x = mu.sample(make_rng(seed), n_samples)
    sq = _compare(evaluate(net, x), oracle(x)) ** 2
    mean = float(np.mean(sq))
    est = math.sqrt(mu.mass * mean)
    if est == 0.0:
        return 0.0, 0.0
    se_mean = float(np.std(sq, ddof=1)) / math.sqrt(n_samples)
    return est, mu.mass * se_mean / (2.0 * est)


@dataclass
class ErrorReport:
    construction: str
    params: dict
    depth: int
    size: int
    input_dim: int = 1
    n_outputs: int = 1
    n_weights: int = 0
    max_abs_weight: float = 0.0
    eps: float | None = None
    linf_error: float | None = None
    linf_argmax: tuple | None = None
    l2_mu_error: float | None = None
    l2_stderr: float | None = None
    l2_samples: int | None = None
    seed: int | None = None
    rng: str = RNG_ALGORITHM
    status: str = "ok"
    wall_time: float | None = None
    row: int = 0

    def to_row(self, timing: bool = False) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            if isinstance(v, tuple):
                return ";".join(repr(float(t)) for t in v)
            return str(v)

        params = ";".join(f"{k}={fmt(v) if not isinstance(v, list) else '|'.join(map(str, v))}"
                          for k, v in sorted(self.params.items()))
        values = [self.row, self.construction, params, self.seed, self.rng, self.input_dim,
                  self.n_outputs, self.depth, self.size, self.n_weights, self.max_abs_weight,
                  self.eps, self.linf_error, self.linf_argmax, self.l2_mu_error, self.l2_stderr,
                  self.l2_samples, self.status]
        if timing:
            values.append(self.wall_time)
        return [fmt(v) for v in values]

    def to_dict(self) -> dict:
        out = {c: getattr(self, c) for c in CSV_COLUMNS}
        out["wall_time"] = self.wall_time
        return out


def write_csv(reports: Sequence[ErrorReport], path=None, timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + (["wall_time"] if timing else []))
    for r in reports:
        writer.writerow(r.to_row(timing))
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def report_for(net: NetworkGraph, construction: str, params: dict, **fields) -> ErrorReport:
    return ErrorReport(construction, dict(params), net.depth, net.size, net.input_dim,
                       net.n_outputs, net.n_weights, net.max_abs_weight, **fields)


# -- sweeps ----------------------------------------------------------------


@dataclass
class SweepSpec:
    """One parameter varied over ``values``; everything else fixed."""

    construction: str
    vary: str
    values: list
    fixed: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    grid: int | None = None
    mc: int | None = None

    def __post_init__(self):
        if self.construction not in TARGETS:
            raise ParameterError(f"unknown construction {self.construction!r}")
        if self.vary not in ("eps", "n", "d", "n_terms"):
            raise ParameterError(f"cannot vary {self.vary!r}")
        if len(self.values) < 3:
            raise ParameterError("a sweep needs at least 3 values for its regression")

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepSpec":
        return cls(doc["construction"], doc["vary"], list(doc["values"]), dict(doc.get("fixed", {})),
                   list(doc.get("seeds", [0])), doc.get("grid"), doc.get("mc"))

    @classmethod
    def load(cls, path) -> "SweepSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


def row_seeds(master_seed: int, row: int) -> tuple[int, int]:
    """Independent (construction, evaluation) seeds owned by one sweep row."""
    state = np.random.SeedSequence([int(master_seed), int(row)]).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def measure_target(target, construction: str, params: dict, seed: int, eval_seed: int,
                   grid: int | None = None, mc: int | None = None) -> ErrorReport:
    """Default verification of a built target: grids in 1-D/2-D, Monte Carlo otherwise."""
    net = target.net
    d = net.input_dim
    rep = report_for(net, construction, params, eps=target.eps, seed=seed)
    if target.measure is not None:
        n = mc or BANDLIMITED_MC_POINTS
        x = target.measure.sample(make_rng(eval_seed), n)
        ref = target.oracle(x)
        err = _compare(evaluate(net, x), ref)
        k = int(np.argmax(err))
        rep.linf_error, rep.linf_argmax = float(err[k]), tuple(float(v) for v in x[k])
        mean = float(np.mean(err ** 2))
        rep.l2_mu_error = math.sqrt(target.measure.mass * mean)
        se = float(np.std(err ** 2, ddof=1)) / math.sqrt(n)
        rep.l2_stderr = target.measure.mass * se / (2 * rep.l2_mu_error) if rep.l2_mu_error else 0.0
        rep.l2_samples = n
    elif grid is not None or d <= 2:
        g = grid or (GRID_1D if d == 1 else GRID_2D)
        rep.linf_error, rep.linf_argmax = linf_error(net, target.oracle, target.domain, g)
    else:
        rng = make_rng(eval_seed)
        lo = np.array([a for a, _ in target.domain])
        hi = np.array([b for _, b in target.domain])
        x = lo + (hi - lo) * rng.random((mc or MC_POINTS, d))
        rep.linf_error, rep.linf_argmax = max_error_on(net, target.oracle, x)
    return rep


def fit_scaling(vary: str, xs, ys) -> dict:
    """Least-squares fit of the scaling model implied by the varied parameter."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if vary == "eps":
        model, feats = "a + b*log2(1/eps)", np.log2(1.0 / xs)
        design = np.stack([np.ones_like(feats), feats], axis=1)
    elif vary in ("n", "d"):
        model = f"a + b*{vary} + c*{vary}^2"
        design = np.stack([np.ones_like(xs), xs, xs ** 2], axis=1)
    else:
        model = "log(y) = a + b*log(n_terms)"
        design = np.stack([np.ones_like(xs), np.log(xs)], axis=1)
        ys = np.log(ys)
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return {"model": model, "coeffs": [float(c) for c in coef], "r2": r2}


def run_sweep(spec: SweepSpec, timing: bool = False) -> tuple[list[ErrorReport], dict]:
    """Build and measure every (value, seed) row, then fit the scaling models.

    A failing construction marks its row with an error status and the sweep
    continues.
    """
    reports = []
    row = 0
    for value in spec.values:
        for master in spec.seeds:
            params = dict(spec.fixed)
            params[spec.vary] = value
            seed, eval_seed = row_seeds(master, row)
            t0 = time.perf_counter()
            try:
                target = build_target(spec.construction, params, seed)
                rep = measure_target(target, spec.construction, params, seed, eval_seed,
                                     spec.grid, spec.mc)
            except Exception as exc:  # noqa: BLE001 - a row failure must not stop the sweep
                rep = ErrorReport(spec.construction, params, 0, 0, seed=seed,
                                  status=f"error: {type(exc).__name__}: {exc}")
            rep.row = row
            rep.wall_time = time.perf_counter() - t0 if timing else None
            reports.append(rep)
            row += 1
    return reports, summarize(spec, reports)


def summarize(spec: SweepSpec, reports: Sequence[ErrorReport]) -> dict:
    ok = [r for r in reports if r.status == "ok"]
    summary = {"construction": spec.construction, "vary": spec.vary, "rng": RNG_ALGORITHM,
               "rows": len(reports), "failed_rows": len(reports) - len(ok), "fits": {}}
    if len(ok) < 3:
        return summary
    if spec.vary == "n_terms":
        by_value: dict = {}
        for r in ok:
            by_value.setdefault(r.params[spec.vary], []).append(r.l2_mu_error)
        xs = sorted(by_value)
        summary["fits"]["l2_mu_error"] = fit_scaling("n_terms", xs,
                                                     [float(np.mean(by_value[x])) for x in xs])
    else:
        xs = [r.params[spec.vary] for r in ok]
        summary["fits"]["size"] = fit_scaling(spec.vary, xs, [r.size for r in ok])
        summary["fits"]["depth"] = fit_scaling(spec.vary, xs, [r.depth for r in ok])
    within = [r.linf_error <= r.eps for r in ok if r.linf_error is not None and r.l2_mu_error is None]
    summary["rows_within_eps"] = int(sum(within))
    return summary


def sweep_json(reports: Sequence[ErrorReport], summary: dict) -> str:
    doc = {"summary": summary, "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True, default=list) + "\n"

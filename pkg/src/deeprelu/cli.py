"""Command-line front end: ``deeprelu {build,eval,verify,sweep}``."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import harness
from .bandlimited_nets import lebesgue, make_rng
from .catalog import TARGETS, build_target, parse_measure, parse_oracle
from .errors import DeepReluError, ParameterError
from .relu_ir import evaluate, load, save


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=np.float64)
    except ValueError as exc:
        raise ParameterError(f"malformed point {text!r}") from exc


def cmd_build(args) -> int:
    params = {k: v for k, v in vars(args).items()
              if k in ("eps", "n", "d", "M", "N", "kernel", "density", "measure", "series", "n_terms")
              and v is not None}
    if args.coeffs is not None:
        params["coeffs"] = [float(c) for c in args.coeffs.split(",")]
    target = build_target(args.target, params, args.seed)
    save(target.net, args.out)
    if args.sample_out and "construction" in target.extra:
        Path(args.sample_out).write_text(target.extra["construction"].sample.to_json())
    net = target.net
    print(f"wrote {args.out}: input_dim={net.input_dim} outputs={net.n_outputs} "
          f"depth={net.depth} size={net.size}")
    return 0


def cmd_eval(args) -> int:
    net = load(args.net)
    x = _parse_point(args.point)
    y = evaluate(net, x.reshape(1, -1))[0]
    print(",".join(repr(float(v)) for v in y))
    return 0


def cmd_verify(args) -> int:
    net = load(args.net)
    oracle = parse_oracle(args.oracle, net.input_dim)
    rep = harness.report_for(net, "verify", {"net": Path(args.net).name, "oracle": args.oracle},
                             seed=args.seed)
    if args.mc is None and args.grid is None and net.input_dim >= 3:
        args.mc = harness.MC_POINTS
    if args.mc is not None:
        if args.measure is not None:
            mu = parse_measure(args.measure, net.input_dim)
        elif oracle.measure is not None:
            mu = oracle.measure
        else:
            lo, hi = zip(*oracle.domain)
            mu = lebesgue(net.input_dim, lo, hi)
        rep.l2_mu_error, rep.l2_stderr = harness.l2_mu_error(net, oracle.func, mu, args.mc, args.seed)
        rep.l2_samples = args.mc
        rep.linf_error, rep.linf_argmax = harness.max_error_on(
            net, oracle.func, mu.sample(make_rng(args.seed), args.mc))
    else:
        g = args.grid or (harness.GRID_1D if net.input_dim == 1 else harness.GRID_2D)
        rep.linf_error, rep.linf_argmax = harness.linf_error(net, oracle.func, oracle.domain, g)
    text = harness.write_csv([rep], args.out_csv)
    sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    spec = harness.SweepSpec.load(args.spec)
    reports, summary = harness.run_sweep(spec, timing=args.timing)
    harness.write_csv(reports, args.out_csv, timing=args.timing)
    if args.out_json:
        Path(args.out_json).write_text(harness.sweep_json(reports, summary))
    for name, fit in summary["fits"].items():
        coeffs = ", ".join(f"{c:.6g}" for c in fit["coeffs"])
        print(f"{name}: {fit['model']}  coeffs=[{coeffs}]  R2={fit['r2']:.6f}")
    failed = summary["failed_rows"]
    print(f"{len(reports)} rows, {failed} failed")
    return 0


def _positive_eps(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and 0 < v < 1):
        raise argparse.ArgumentTypeError("eps must lie in (0, 1)")
    return v


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deeprelu", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a construction and save it as JSON")
    b.add_argument("--target", required=True, choices=TARGETS)
    b.add_argument("--eps", type=_positive_eps)
    b.add_argument("--n", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--M", type=float)
    b.add_argument("--N", type=float)
    b.add_argument("--coeffs", help="comma-separated coefficients for poly/series")
    b.add_argument("--series", help="ChebSeries JSON file for series or analytic:custom")
    b.add_argument("--kernel", help="analytic: runge[:beta=B]|cos[:s=S]|cexp|custom; bandlimited: cexp")
    b.add_argument("--density", help="gauss[:sigma=S]|uniform|bump[:center=C,width=W]")
    b.add_argument("--measure", help="lebesgue|scaled:mass=C")
    b.add_argument("--n-terms", dest="n_terms", type=int, help="bandlimited: fix the number of terms")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--sample-out", help="bandlimited: write the Maurey sample as JSON")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("eval", help="evaluate a saved network at one point")
    e.add_argument("--net", required=True)
    e.add_argument("--point", required=True)
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="measure a saved network against an oracle")
    v.add_argument("--net", required=True)
    v.add_argument("--oracle", required=True)
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--grid", type=int)
    mode.add_argument("--mc", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--measure")
    v.add_argument("--out-csv")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="run a parameter sweep from a JSON spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--out-csv", required=True)
    s.add_argument("--out-json")
    s.add_argument("--timing", action="store_true", help="add a wall_time column")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DeepReluError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

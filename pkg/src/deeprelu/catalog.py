"""Named constructions, kernels, densities and oracles used by the CLI and sweeps.

Spec strings have the form ``name`` or ``name:key=value,key=value``. List
values use ``;`` as separator, e.g. ``poly:coeffs=0;-1;0;1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import analytic_nets as an
from . import bandlimited_nets as bl
from .cheb_nets import ChebSeries, MonomialPoly, build_cheb_series, build_chebyshev, build_poly
from .errors import ParameterError
from .product_nets import build_mul2, build_muld
from .relu_ir import NetworkGraph, parallel

TARGETS = ("mul2", "muld", "poly", "cheb", "series", "analytic", "bandlimited")


def _value(text: str):
    if ";" in text:
        return [_value(t) for t in text.split(";") if t != ""]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_spec(text: str) -> tuple[str, dict]:
    """Split ``name:key=value,...`` into the name and a parameter dict."""
    name, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ParameterError(f"malformed spec item {item!r} in {text!r}")
        params[key.strip()] = _value(val.strip())
    return name.strip(), params


def parse_density(text: str, d: int, M: float) -> bl.SpectralDensity:
    name, p = parse_spec(text)
    if name == "gauss":
        return bl.gaussian_density(d, M, float(p.get("sigma", 1.0)))
    if name == "uniform":
        return bl.uniform_density(d, M)
    if name == "bump":
        return bl.bump_density(d, M, p.get("center", 0.0), float(p.get("width", 0.05)))
    raise ParameterError(f"unknown density {name!r}")


def parse_measure(text: str | None, d: int) -> bl.MeasureSpec:
    if text is None:
        return bl.lebesgue(d)
    name, p = parse_spec(text)
    if name == "lebesgue":
        return bl.lebesgue(d)
    if name == "scaled":
        c = float(p.get("mass", 1.0))
        return bl.MeasureSpec(d, "weighted", weight=lambda x: np.full(x.shape[0], c), weight_max=c)
    raise ParameterError(f"unknown measure {name!r}")


def parse_kernel(text: str) -> bl.KernelSpec:
    name, _ = parse_spec(text)
    if name != "cexp":
        raise ParameterError(f"bandlimited kernels: only 'cexp' is available, got {name!r}")
    return bl.cexp_kernel()


def _cos_params(p: dict, M: float, eps: float) -> an.EllipseParams:
    if "s" in p:
        s = float(p["s"])
        return an.EllipseParams(s, an.exp_kernel_bound(s, M), M)
    return an.min_degree_ellipse(lambda s: an.exp_kernel_bound(s, M), M, eps / 2.0)


@dataclass
class Target:
    """A built network together with what is needed to verify it."""

    net: NetworkGraph
    oracle: Callable
    domain: list[tuple[float, float]]
    eps: float
    measure: bl.MeasureSpec | None = None
    extra: dict[str, Any] = field(default_factory=dict)


def _coeffs(params: dict, n_default: int) -> list[float]:
    c = params.get("coeffs")
    if c is None:
        return [1.0] * (int(params.get("n", n_default)) + 1)
    return [float(v) for v in (c if isinstance(c, list) else [c])]


def build_target(target: str, params: dict, seed: int = 0) -> Target:
    """Build one named construction; ``params`` uses the CLI flag names."""
    eps = float(params.get("eps", 1e-3))
    M = float(params.get("M", 1.0))
    if target == "mul2":
        N = float(params.get("N", M))
        net = build_mul2(M=M, N=N, eps=eps)
        return Target(net, lambda x: x[:, 0] * x[:, 1], [(-M, M), (-N, N)], eps)
    if target == "muld":
        d = int(params.get("d", 3))
        net = build_muld(d, M, eps)
        return Target(net, lambda x: np.prod(x, axis=1), [(-M, M)] * d, eps)
    if target == "poly":
        p = MonomialPoly(tuple(_coeffs(params, 3)), M)
        return Target(build_poly(p, eps), lambda x: p(x[:, 0]), [(-M, M)], eps)
    if target == "cheb":
        n = int(params.get("n", 4))
        return Target(build_chebyshev(n, eps), lambda x: np.cos(n * np.arccos(x[:, 0])),
                      [(-1.0, 1.0)], eps)
    if target == "series":
        if "series" in params:
            s = ChebSeries.load(params["series"])
        else:
            s = ChebSeries(tuple(_coeffs(params, 3)), M)
        return Target(build_cheb_series(s, eps), lambda x: s(x[:, 0]), [(-s.M, s.M)], eps)
    if target == "analytic":
        return _analytic_target(params, M, eps)
    if target == "bandlimited":
        return _bandlimited_target(params, M, eps, seed)
    raise ParameterError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")


def _analytic_target(params: dict, M: float, eps: float) -> Target:
    name, p = parse_spec(str(params.get("kernel", "cos")))
    if name == "runge":
        beta = float(p.get("beta", 2.0))
        cert = an.runge_params(beta, M)
        f = an.runge(beta)
        net = an.build_analytic(f, cert, eps)
        return Target(net, lambda x: f(x[:, 0]), [(-M, M)], eps, extra={"s": cert.s, "C_f": cert.C_f})
    if name == "cos":
        cert = _cos_params(p, M, eps)
        net = an.build_analytic(np.cos, cert, eps)
        return Target(net, lambda x: np.cos(x[:, 0]), [(-M, M)], eps, extra={"s": cert.s, "C_f": cert.C_f})
    if name == "cexp":
        cert = _cos_params(p, M, eps)
        net = parallel([an.build_analytic(np.cos, cert, eps), an.build_analytic(np.sin, cert, eps)])
        return Target(net, lambda x: np.stack([np.cos(x[:, 0]), np.sin(x[:, 0])], axis=1),
                      [(-M, M)], eps, extra={"s": cert.s, "C_f": cert.C_f})
    if name == "custom":
        if "series" not in params:
            raise ParameterError("kernel 'custom' needs a ChebSeries file (--series)")
        s = ChebSeries.load(params["series"])
        return Target(build_cheb_series(s, eps), lambda x: s(x[:, 0]), [(-s.M, s.M)], eps)
    raise ParameterError(f"unknown analytic kernel {name!r}")


def _bandlimited_target(params: dict, M: float, eps: float, seed: int) -> Target:
    d = int(params.get("d", 1))
    F = parse_density(str(params.get("density", "gauss:sigma=1")), d, M)
    K = parse_kernel(str(params.get("kernel", "cexp")))
    mu = parse_measure(params.get("measure"), d)
    if "n_terms" in params:
        eps = 2.0 * F.C_F * math.sqrt(mu.mass) / math.sqrt(float(params["n_terms"]))
    c = bl.bandlimited_construction(F, K, mu, eps, seed)
    return Target(c.net, lambda x: bl.quadrature_reference(F, K, x), [(0.0, 1.0)] * d, eps,
                  measure=mu, extra={"construction": c, "density": F, "kernel": K})


# -- oracles for `verify` --------------------------------------------------


@dataclass
class Oracle:
    func: Callable
    domain: list[tuple[float, float]]
    measure: bl.MeasureSpec | None = None


def parse_oracle(text: str, input_dim: int) -> Oracle:
    """Oracle spec for ``verify``; vector nets are compared on their last output
    unless the oracle itself is vector-valued."""
    name, p = parse_spec(text)
    M = float(p.get("M", 1.0))
    box = [(-M, M)] * input_dim
    if name == "identity":
        return Oracle(lambda x: x[:, 0] if input_dim == 1 else x, box)
    if name == "product":
        return Oracle(lambda x: np.prod(x, axis=1), box)
    if name == "partial-products":
        return Oracle(lambda x: np.cumprod(x, axis=1)[:, 1:], box)
    if name == "poly":
        c = p.get("coeffs", [0.0])
        c = c if isinstance(c, list) else [c]
        return Oracle(lambda x: np.polynomial.polynomial.polyval(x[:, 0], c), box)
    if name == "cheb":
        n = int(p["n"])
        return Oracle(lambda x: np.cos(n * np.arccos(np.clip(x[:, 0], -1, 1))), [(-1.0, 1.0)])
    if name == "series":
        s = ChebSeries.load(p["file"])
        return Oracle(lambda x: s(x[:, 0]), [(-s.M, s.M)])
    if name == "runge":
        f = an.runge(float(p.get("beta", 2.0)))
        return Oracle(lambda x: f(x[:, 0]), box)
    if name == "cos":
        return Oracle(lambda x: np.cos(x[:, 0]), box)
    if name == "sin":
        return Oracle(lambda x: np.sin(x[:, 0]), box)
    if name == "cexp":
        return Oracle(lambda x: np.stack([np.cos(x[:, 0]), np.sin(x[:, 0])], axis=1), box)
    if name == "bandlimited":
        dens = str(p.get("density", "gauss"))
        dens_params = ",".join(
            f"{k}={';'.join(map(str, v)) if isinstance(v, list) else v}"
            for k, v in p.items() if k not in ("density", "M"))
        F = parse_density(f"{dens}:{dens_params}" if dens_params else dens, input_dim, M)
        K = bl.cexp_kernel()
        return Oracle(lambda x: bl.quadrature_reference(F, K, x), [(0.0, 1.0)] * input_dim,
                      bl.lebesgue(input_dim))
    raise ParameterError(f"unknown oracle {name!r}")

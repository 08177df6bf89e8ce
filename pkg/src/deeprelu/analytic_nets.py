"""Networks for analytic functions via truncated Chebyshev series.

A function analytic inside the Bernstein ellipse with foci ``+-M`` and
parameter ``s > 1``, and bounded there by ``C_f``, has Chebyshev truncation
error at most ``2 C_f s**-n / (s - 1)``. The degree is chosen from that bound
with half the accuracy budget; the series network gets the other half.
The certificate ``(s, C_f)`` is always supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cheb_nets import build_cheb_series, cheb_coeffs
from .errors import ConstructionError, ParameterError
from .relu_ir import NetworkGraph


def ellipse_axes(s: float, M: float = 1.0) -> tuple[float, float]:
    """Semi-axes ``(M (s + 1/s) / 2, M (s - 1/s) / 2)`` of the scaled ellipse."""
    if not s > 1:
        raise ParameterError(f"ellipse parameter must exceed 1, got {s}")
    if not M >= 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    return M * (s + 1.0 / s) / 2.0, M * (s - 1.0 / s) / 2.0


@dataclass(frozen=True)
class EllipseParams:
    """Analyticity certificate: parameter ``s``, bound ``C_f`` and half-width ``M``."""

    s: float
    C_f: float
    M: float = 1.0

    def __post_init__(self):
        ellipse_axes(self.s, self.M)
        if not self.C_f > 0:
            raise ParameterError(f"C_f must be positive, got {self.C_f}")

    @property
    def a(self) -> float:
        return ellipse_axes(self.s, self.M)[0]

    @property
    def b(self) -> float:
        return ellipse_axes(self.s, self.M)[1]

    def truncation_bound(self, n: int) -> float:
        return 2.0 * self.C_f * self.s ** (-n) / (self.s - 1.0)


def runge(beta: float) -> Callable:
    """The Runge-like function ``1 / (1 + x**2 / beta**2)``."""
    return lambda x: 1.0 / (1.0 + np.asarray(x, dtype=np.float64) ** 2 / beta ** 2)


def runge_params(beta: float, M: float = 1.0) -> EllipseParams:
    """Ellipse certificate for the Runge-like function with poles at ``+-i beta``.

    ``s`` is the parameter of the ellipse through the poles, and ``C_f`` is the
    function evaluated at the real argument ``b_s``. This is not a bound on
    the ellipse, which passes through the poles.
    """
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    if not M >= 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    r = beta + math.sqrt(beta ** 2 + 1.0)
    s = (math.sqrt((4.0 * M ** 2 - 2.0) * r ** 2 + r ** 4 + 1.0) + r ** 2 - 1.0) / (2.0 * M * r)
    b = M * (s - 1.0 / s) / 2.0
    return EllipseParams(s, float(runge(beta)(b)), float(M))


def exp_kernel_bound(s: float, M: float = 1.0) -> float:
    """Bound ``exp(M (s - 1/s) / 2)`` of ``|e^{iz}|`` on the scaled ellipse."""
    if not s > 1:
        raise ParameterError(f"ellipse parameter must exceed 1, got {s}")
    return math.exp(M * (s - 1.0 / s) / 2.0)


def truncation_degree(p: EllipseParams, eps_half: float) -> int:
    """Smallest ``n >= 2`` with ``2 C_f s**-n / (s - 1) <= eps_half``."""
    if not 0 < eps_half < 1:
        raise ParameterError(f"eps_half must lie in (0, 1), got {eps_half}")
    n = max(2, math.ceil(math.log(2.0 * p.C_f / (eps_half * (p.s - 1.0))) / math.log(p.s)))
    while n > 2 and p.truncation_bound(n - 1) <= eps_half:
        n -= 1
    while p.truncation_bound(n) > eps_half:
        n += 1
    return n


def build_analytic(f: Callable, p: EllipseParams, eps: float) -> NetworkGraph:
    """Network within ``eps`` of ``f`` on ``[-p.M, p.M]``.

    Degree from :func:`truncation_degree` at ``eps / 2``, coefficients from
    Chebyshev interpolation, series network at accuracy ``eps / 2``.
    """
    if not 0 < eps < 1:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    n = truncation_degree(p, eps / 2.0)
    series = cheb_coeffs(f, n, p.M)
    return build_cheb_series(series, eps / 2.0)


def analytic_size_model(p: EllipseParams, eps: float) -> float:
    """``log2(C_f / eps)**2 / log2(s)**2``, the predicted growth of depth and size."""
    return math.log2(p.C_f / eps) ** 2 / math.log2(p.s) ** 2


def min_degree_ellipse(certificate: Callable[[float], float], half_width: float,
                       eps_half: float, s_max: float = 8.0, n_grid: int = 64) -> EllipseParams:
    """Pick ``s`` on the log grid ``s_max**(k / n_grid)``, k = 1..n_grid, minimizing the degree.

    ``certificate(s)`` returns the bound C_f valid on the ellipse of parameter
    ``s`` scaled to ``[-half_width, half_width]``. Ties go to the smallest ``s``.
    """
    best = None
    for k in range(1, n_grid + 1):
        s = s_max ** (k / n_grid)
        p = EllipseParams(s, certificate(s), half_width)
        n = truncation_degree(p, eps_half)
        if best is None or n < best[0]:
            best = (n, p)
    return best[1]

"""Polynomial, Chebyshev-polynomial and Chebyshev-series networks.

Chebyshev polynomials are built from the three-term recurrence

    T_k = 2 x T_{k-1} - T_{k-2},    T_0 = 1,  T_1 = x,

with each product ``x * T_{k-1}`` realized by a two-factor product network.
T_0 and T_1 never need hidden units; they live in the output functional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ConstructionError, DataError, DomainError, ParameterError
from .product_nets import MulBudget, build_mul2, build_muld
from .relu_ir import Affine, GraphBuilder, NetworkGraph

# Inner accuracy budgets larger than this are clamped; any accuracy below 1 is
# admissible for the sub-networks and a smaller one only tightens the result.
_MAX_INNER_EPS = 0.5


def _check_eps(eps: float) -> float:
    if not 0 < eps < 1:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    return float(eps)


def _effective_degree(coeffs: np.ndarray) -> int:
    nz = np.flatnonzero(coeffs)
    return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True)
class MonomialPoly:
    """``p(x) = sum c_k x**k`` on ``[-M, M]`` with ``max |c_k| <= C``."""

    coeffs: tuple[float, ...]
    M: float = 1.0
    C: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ParameterError("a polynomial needs at least one coefficient")
        if self.M < 1:
            raise ParameterError(f"M must be >= 1, got {self.M}")
        bound = max(abs(c) for c in self.coeffs)
        if self.C is None:
            object.__setattr__(self, "C", bound)
        elif self.C < bound:
            raise ParameterError(f"C={self.C} is below max |c_k| = {bound}")

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), self.coeffs)


@dataclass(frozen=True)
class ChebSeries:
    """``f_n(x) = sum c_k T_k(x / M)`` on ``[-M, M]`` with ``max |c_k| <= C``."""

    coeffs: tuple[float, ...]
    M: float = 1.0
    C: float | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ParameterError("a series needs at least one coefficient")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise DataError("series coefficients must be finite")
        if self.M < 1:
            raise ParameterError(f"M must be >= 1, got {self.M}")
        bound = max(abs(c) for c in self.coeffs)
        if self.C is None:
            object.__setattr__(self, "C", bound)
        elif self.C < bound:
            raise ParameterError(f"C={self.C} is below max |c_k| = {bound}")

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return clenshaw_eval(self, x)

    def to_json(self) -> str:
        coeffs = ", ".join(format(c, ".17g") for c in self.coeffs)
        return f'{{"M": {format(self.M, ".17g")}, "coeffs": [{coeffs}]}}\n'

    @classmethod
    def from_json(cls, text: str) -> "ChebSeries":
        doc = json.loads(text)
        return cls(tuple(doc["coeffs"]), float(doc.get("M", 1.0)))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "ChebSeries":
        return cls.from_json(Path(path).read_text())


# -- Chebyshev polynomials -------------------------------------------------


def chebyshev_stage_eps0(n: int, eps: float) -> float:
    """Relative accuracy of each recurrence product: eps / (n * 4**n * e)."""
    return eps / (n * 4.0 ** n * math.e)


def chebyshev_magnitude_bound(k: int, eps0: float) -> float:
    """Magnitude bound ``3**(k-2) (1+eps0)**k`` of the approximate T_k (k >= 2)."""
    return 3.0 ** (k - 2) * (1.0 + eps0) ** k


def chebyshev_product_range(k: int, eps0: float) -> float:
    """Range B of the second factor T_{k-1} in the product building T_k.

    For k >= 3 this is the recurrence ledger ``3**(k-3) (1+eps0)**(k-1)``;
    for k = 2 the factor is T_1 = x itself, so B = 1.
    """
    if k <= 2:
        return 1.0
    return max(1.0, 3.0 ** (k - 3) * (1.0 + eps0) ** (k - 1))


def _chebyshev_exprs(b: GraphBuilder, x: Affine, n: int, eps0: float) -> list[Affine]:
    ts = [Affine.constant(1.0), x]
    for k in range(2, n + 1):
        B = chebyshev_product_range(k, eps0)
        prod = b.embed(build_mul2(MulBudget(1.0, B, B * eps0)), [x, ts[k - 1]])[0]
        ts.append((2.0 * prod - ts[k - 2]).merged())
    return ts


def build_chebyshev(n: int, eps: float) -> NetworkGraph:
    """Network with ``n + 1`` outputs: output ``k`` approximates T_k on [-1, 1].

    Outputs 0 and 1 are the exact affine T_0 = 1 and T_1 = x; outputs
    ``2..n`` are within ``eps`` of T_k. Products use relative accuracy
    ``chebyshev_stage_eps0(n, eps)``.
    """
    if int(n) != n or n < 2:
        raise ConstructionError(f"n must be an integer >= 2, got {n}")
    eps = _check_eps(eps)
    b = GraphBuilder(1)
    return b.build(_chebyshev_exprs(b, b.input(0), int(n), chebyshev_stage_eps0(int(n), eps)))


# -- series and polynomials ------------------------------------------------


def build_cheb_series(series: ChebSeries, eps: float) -> NetworkGraph:
    """Scalar network within ``eps`` of ``series`` on ``[-M, M]``.

    The argument is rescaled to ``x / M`` and each T_k (k >= 2) comes from a
    Chebyshev network of accuracy ``eps / (C n)``.
    """
    eps = _check_eps(eps)
    c = np.asarray(series.coeffs)
    n = _effective_degree(c)
    b = GraphBuilder(1)
    t = b.input(0) / series.M
    out = Affine.constant(c[0])
    if n >= 1:
        out = out + c[1] * t
    if n >= 2:
        inner = min(eps / (series.C * n), _MAX_INNER_EPS)
        ts = _chebyshev_exprs(b, t, n, chebyshev_stage_eps0(n, inner))
        for k in range(2, n + 1):
            if c[k] != 0.0:
                out = out + c[k] * ts[k]
    return b.build([out.merged()])


def build_poly(p: MonomialPoly, eps: float) -> NetworkGraph:
    """Scalar network within ``eps`` of the monomial-basis polynomial on ``[-M, M]``.

    Powers ``x**k`` are the partial products of a d-factor product network
    with every input tied to ``x``, each of accuracy ``eps / (C n)``.
    """
    eps = _check_eps(eps)
    c = np.asarray(p.coeffs)
    n = _effective_degree(c)
    b = GraphBuilder(1)
    x = b.input(0)
    out = Affine.constant(c[0])
    if n >= 1:
        out = out + c[1] * x
    if n >= 2:
        inner = min(eps / (p.C * n), _MAX_INNER_EPS)
        powers = b.embed(build_muld(n, p.M, inner), [x] * n)
        for k in range(2, n + 1):
            if c[k] != 0.0:
                out = out + c[k] * powers[k - 2]
    return b.build([out.merged()])


# -- coefficients and the Clenshaw oracle ----------------------------------


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(x), dtype=np.float64)
        if values.shape != x.shape:
            raise ValueError
    except (TypeError, ValueError):
        values = np.array([float(f(float(t))) for t in x])
    return values


def chebyshev_points(n: int) -> np.ndarray:
    """Second-kind points ``cos(j pi / n)``, j = 0..n."""
    return np.cos(np.arange(n + 1) * np.pi / n)


def cheb_coeffs(f: Callable, n: int, M: float = 1.0) -> ChebSeries:
    """Coefficients of the degree-n Chebyshev interpolant of ``f`` on ``[-M, M]``.

    Direct O(n**2) discrete cosine sum over the n + 1 second-kind points, with
    halved end terms and halved ``c_0``, ``c_n``.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    n = int(n)
    j = np.arange(n + 1)
    values = _sample(f, M * chebyshev_points(n))
    if not np.all(np.isfinite(values)):
        raise DataError("f returned non-finite samples")
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    basis = np.cos(np.outer(j, j) * np.pi / n)
    c = (2.0 / n) * (basis @ (w * values))
    c[0] *= 0.5
    c[-1] *= 0.5
    return ChebSeries(tuple(c), float(M))


def clenshaw_eval(series: ChebSeries, x):
    """Evaluate the series by the backward recurrence; x must lie in ``[-M, M]``."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > series.M):
        raise DomainError(f"points outside [-{series.M}, {series.M}]")
    t = x / series.M
    c = series.coeffs
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for ck in reversed(c[1:]):
        b1, b2 = ck + 2.0 * t * b1 - b2, b1
    out = c[0] + t * b1 - b2
    return float(out) if out.ndim == 0 else out

"""Multiplication networks built from the sawtooth squaring construction.

The hat function ``g(x) = 2 relu(x) - 4 relu(x - 1/2) + 2 relu(x - 1)`` composed
``s`` times gives a sawtooth ``g_s`` with ``2**(s-1)`` teeth on [0, 1]. The
piecewise-linear interpolant of ``x**2`` on the dyadic grid of level ``m`` is

    sq_m(x) = x - sum_{s=1..m} g_s(x) / 4**s,       0 <= sq_m(x) - x**2 <= 4**-(m+1).

Products come from the polarization identity
``x*y = M*N * ((|u+v|/2)**2 - (|u-v|/2)**2)`` with ``u = x/M`` and ``v = y/N``,
where ``|t| = relu(t) + relu(-t)``. Because the two squaring branches are
structurally identical, a zero factor makes them bitwise equal and the output
cancels exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConstructionError
from .relu_ir import Affine, GraphBuilder, NetworkGraph


@dataclass(frozen=True)
class MulBudget:
    """Amplitudes and target accuracy of a two-factor product network."""

    M: float
    N: float
    eps: float

    def __post_init__(self):
        if not (self.M >= 1 and self.N >= 1):
            raise ConstructionError(f"amplitudes must be >= 1, got M={self.M}, N={self.N}")
        if not 0 < self.eps < 1:
            raise ConstructionError(f"eps must lie in (0, 1), got {self.eps}")

    @property
    def m(self) -> int:
        return refinement_level(self.M, self.N, self.eps)

    @property
    def error_bound(self) -> float:
        return mul_error_bound(self.M, self.N, self.m)


def mul_error_bound(M: float, N: float, m: int) -> float:
    """A-priori sup error of the product network: each branch is off by <= 4**-(m+1)."""
    return M * N * 2.0 * 4.0 ** -(m + 1)


def refinement_level(M: float, N: float, eps: float) -> int:
    """Smallest sawtooth depth ``m >= 1`` with ``mul_error_bound(M, N, m) <= eps``."""
    ratio = M * N / eps
    m = max(1, math.ceil((math.log2(ratio) - 1.0) / 2.0))
    while m > 1 and mul_error_bound(M, N, m - 1) <= eps:
        m -= 1
    while mul_error_bound(M, N, m) > eps:
        m += 1
    return m


def _check_level(m: int) -> int:
    if int(m) != m or m < 1:
        raise ConstructionError(f"refinement level must be a positive integer, got {m}")
    return int(m)


def _hat_chain(b: GraphBuilder, a: Affine, m: int) -> list[Affine]:
    """Sawtooth iterates g_1(a) .. g_m(a), three units per level."""
    teeth = []
    y = a
    for _ in range(m):
        h0 = b.relu(y)
        h1 = b.relu(y - 0.5)
        h2 = b.relu(y - 1.0)
        y = 2.0 * h0 - 4.0 * h1 + 2.0 * h2
        teeth.append(y)
    return teeth


def _square_expr(b: GraphBuilder, a: Affine, m: int) -> Affine:
    """sq_m(a) for an expression a with values in [0, 1]."""
    out = a
    for s, g in enumerate(_hat_chain(b, a, m), start=1):
        out = out - g * 4.0 ** -s
    return out


def mul_expr(b: GraphBuilder, x: Affine, y: Affine, M: float, N: float, m: int) -> Affine:
    """Add the product sub-network for ``x in [-M, M]``, ``y in [-N, N]`` to a builder.

    Uses one layer of four absolute-value units plus two sawtooth chains of
    depth ``m``; returns the product as an expression over those units.
    """
    u_plus = x / M + y / N
    u_minus = x / M - y / N
    abs_plus = 0.5 * b.relu(u_plus) + 0.5 * b.relu(-u_plus)
    abs_minus = 0.5 * b.relu(u_minus) + 0.5 * b.relu(-u_minus)
    sq_plus = _square_expr(b, abs_plus, m)
    sq_minus = _square_expr(b, abs_minus, m)
    return Affine.interleave(sq_plus * (M * N), sq_minus * (-M * N))


def build_sawtooth(m: int) -> NetworkGraph:
    """m-fold composition of the hat function on [0, 1]: depth m, size 3m."""
    m = _check_level(m)
    b = GraphBuilder(1)
    return b.build([_hat_chain(b, b.input(0), m)[-1]])


def build_square(m: int) -> NetworkGraph:
    """Network for ``x**2`` on [0, 1] with sup error ``<= 4**-(m+1)``; exact at dyadic k/2**m."""
    m = _check_level(m)
    b = GraphBuilder(1)
    return b.build([_square_expr(b, b.input(0), m)])


@lru_cache(maxsize=256)
def _mul2_cached(M: float, N: float, m: int) -> NetworkGraph:
    b = GraphBuilder(2)
    x1, x2 = b.inputs()
    return b.build([mul_expr(b, x1, x2, M, N, m)])


def build_mul2(budget: MulBudget | None = None, *, M: float = 1.0, N: float = 1.0,
               eps: float | None = None) -> NetworkGraph:
    """Product network on ``[-M, M] x [-N, N]`` with sup error ``<= eps``.

    Either pass a :class:`MulBudget` or the keyword arguments. The result has
    depth ``m + 1`` and size ``6m + 4`` where ``m = budget.m``.
    """
    if budget is None:
        if eps is None:
            raise ConstructionError("build_mul2 needs a budget or eps")
        budget = MulBudget(float(M), float(N), float(eps))
    return _mul2_cached(float(budget.M), float(budget.N), budget.m)


def muld_stage_eps0(d: int, M: float, eps: float) -> float:
    """Per-stage relative accuracy of the d-factor chain: eps / (d * M**d * e)."""
    return eps / (d * M ** d * math.e)


def muld_range(k: int, M: float, eps0: float) -> float:
    """Magnitude bound of the partial product y_{k-1} ~ x_1...x_k."""
    return M ** k * (1.0 + eps0) ** (k - 1)


def build_muld(d: int, M: float, eps: float) -> NetworkGraph:
    """Chained product network for ``x_1 * ... * x_d`` on ``[-M, M]**d``.

    Output ``k - 2`` (``k = 2..d``) is ``y_{k-1}``, the approximation of
    ``x_1 ... x_k``; the last output is the full product. Stage ``k`` multiplies
    ``y_{k-1}`` (range ``muld_range(k, M, eps0)``) by ``x_{k+1}`` (range ``M``)
    to accuracy ``range * M * eps0`` with ``eps0 = muld_stage_eps0(d, M, eps)``.
    """
    if int(d) != d or d < 2:
        raise ConstructionError(f"d must be an integer >= 2, got {d}")
    if not 0 < eps < 1:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    if M < 1:
        raise ConstructionError(f"M must be >= 1, got {M}")
    d = int(d)
    eps0 = muld_stage_eps0(d, M, eps)
    b = GraphBuilder(d)
    xs = b.inputs()
    y = xs[0]
    outs = []
    for k in range(1, d):
        A = muld_range(k, M, eps0)
        stage = build_mul2(MulBudget(A, M, A * M * eps0))
        y = b.embed(stage, [y, xs[k]])[0]
        outs.append(y)
    return b.build(outs)


def exact_partial_products(x) -> np.ndarray:
    """Columns ``x_1 x_2, x_1 x_2 x_3, ..., x_1...x_d`` for points of shape (n, d)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    return np.cumprod(x, axis=1)[:, 1:]

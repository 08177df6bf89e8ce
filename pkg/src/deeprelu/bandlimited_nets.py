"""Networks for bandlimited functions ``f(x) = int F(w) K(w . x) dw`` on ``[0, 1]**d``.

Writing ``F = |F| e^{i theta}``, ``f`` is an average of ``C_F e^{i theta(w)} K(w . x)``
under the probability density ``|F| / C_F``. Drawing ``ceil(1/eps0**2)``
frequencies from that density gives a finite sum whose L2(mu) error is of
order ``C_F sqrt(mu(B)) eps0``; each term's kernel is then replaced by an
analytic-function network.

Frequencies are drawn by rejection against a uniform envelope on the support
box, from a PCG64 generator seeded by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic_nets import EllipseParams, build_analytic, exp_kernel_bound, min_degree_ellipse
from .errors import (ConstructionError, DataError, EnvelopeError, FeasibilityError,
                     ParameterError)
from .relu_ir import NetworkGraph, linear_combine, precompose_affine

RNG_ALGORITHM = "PCG64"

_ENVELOPE_GRID = 33
_ENVELOPE_SAFETY = 1.01
_MAX_REJECTION_ROUNDS = 1000
_MAX_EPS0 = 0.5


def make_rng(seed: int) -> np.random.Generator:
    """The package-wide seeded generator (numpy PCG64)."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def n_terms_for(eps0: float) -> int:
    """``ceil(1 / eps0**2)``, robust to rounding in ``1 / eps0**2``."""
    if not 0 < eps0 < 1:
        raise ParameterError(f"eps0 must lie in (0, 1), got {eps0}")
    return max(1, math.ceil(1.0 / eps0 ** 2 - 1e-9))


# -- quadrature ------------------------------------------------------------


def _gauss_legendre(n: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def tensor_grid(nodes_per_dim: int, lower, upper):
    """Tensor Gauss-Legendre nodes (n**d, d) and weights on a box."""
    axes = [_gauss_legendre(nodes_per_dim, lo, hi) for lo, hi in zip(lower, upper)]
    pts = np.stack(np.meshgrid(*[a[0] for a in axes], indexing="ij"), axis=-1)
    wts = np.ones([nodes_per_dim] * len(axes))
    for k, (_, w) in enumerate(axes):
        shape = [1] * len(axes)
        shape[k] = nodes_per_dim
        wts = wts * w.reshape(shape)
    return pts.reshape(-1, len(axes)), wts.reshape(-1)


def integrate_1d(f: Callable, lo: float, hi: float, tol: float = 1e-13,
                 start: int = 16, max_nodes: int = 4096) -> float:
    """Gauss-Legendre with node doubling until successive values agree to ``tol``."""
    n = start
    x, w = _gauss_legendre(n, lo, hi)
    prev = float(w @ f(x))
    while n < max_nodes:
        n *= 2
        x, w = _gauss_legendre(n, lo, hi)
        cur = float(w @ f(x))
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise DataError("1-D quadrature did not converge")


# -- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class SpectralDensity:
    """``F = magnitude * exp(i phase)`` supported in ``[-M, M]**d`` with ``int |F| = C_F``.

    ``magnitude`` and ``phase`` map frequency arrays of shape (n, d) to (n,);
    ``phase=None`` means a real nonnegative density.
    """

    d: int
    M: float
    magnitude: Callable
    C_F: float
    phase: Callable | None = None
    name: str = "custom"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"d must be a positive integer, got {self.d}")
        if not self.M >= 1:
            raise ParameterError(f"M must be >= 1, got {self.M}")
        if not (math.isfinite(self.C_F) and self.C_F > 0):
            raise ParameterError(f"C_F must be finite and positive, got {self.C_F}")

    def theta(self, w) -> np.ndarray:
        w = np.atleast_2d(w)
        if self.phase is None:
            return np.zeros(w.shape[0])
        return np.asarray(self.phase(w), dtype=np.float64)

    def abs_values(self, w) -> np.ndarray:
        return np.asarray(self.magnitude(np.atleast_2d(w)), dtype=np.float64)


def gaussian_density(d: int, M: float = 1.0, sigma: float = 1.0) -> SpectralDensity:
    """Product of centered normal densities of width ``sigma``, truncated to the box."""
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))

    def pdf1(t):
        return norm * np.exp(-0.5 * (t / sigma) ** 2)

    def magnitude(w):
        return np.prod(pdf1(w), axis=1)

    mass1 = integrate_1d(pdf1, -M, M)
    return SpectralDensity(d, M, magnitude, mass1 ** d, name=f"gauss:sigma={sigma!r}")


def uniform_density(d: int, M: float = 1.0) -> SpectralDensity:
    """Constant density ``(2M)**-d`` on the box (C_F = 1)."""
    level = (2.0 * M) ** -d
    return SpectralDensity(d, M, lambda w: np.full(w.shape[0], level), 1.0, name="uniform")


def bump_density(d: int, M: float, center, width: float) -> SpectralDensity:
    """Narrow Gaussian bump at ``center`` of width ``width``, normalized on the box (C_F = 1)."""
    center = np.broadcast_to(np.asarray(center, dtype=np.float64), (d,)).copy()
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    if np.any(np.abs(center) > M):
        raise ParameterError("bump center must lie in the support box")
    s2 = width * math.sqrt(2.0)
    z = [0.5 * width * math.sqrt(2 * math.pi) * (math.erf((M - c) / s2) - math.erf((-M - c) / s2))
         for c in center]
    scale = 1.0 / float(np.prod(z))

    def magnitude(w):
        return scale * np.exp(-0.5 * np.sum(((w - center) / width) ** 2, axis=1))

    return SpectralDensity(d, M, magnitude, 1.0,
                           name=f"bump:center={center.tolist()!r},width={width!r}")


@dataclass(frozen=True)
class KernelSpec:
    """Complex kernel ``K(t)`` with an analyticity certificate and sup bound ``D_K``.

    ``certificate(s, half_width)`` bounds ``|K|`` on the Bernstein ellipse of
    parameter ``s`` scaled to ``[-half_width, half_width]``.
    """

    name: str
    func: Callable
    certificate: Callable[[float, float], float]
    D_K: float = 1.0

    def __post_init__(self):
        if not 0 < self.D_K <= 1:
            raise ParameterError(f"D_K must lie in (0, 1], got {self.D_K}")

    def real_part(self, theta: float) -> Callable:
        """``t -> Re(exp(i theta) K(t))``."""
        rot = complex(math.cos(theta), math.sin(theta))
        return lambda t: np.real(rot * self.func(np.asarray(t, dtype=np.float64)))


def cexp_kernel() -> KernelSpec:
    """``K(t) = exp(i t)``; its rotated real part is ``cos(t + theta)``."""
    return KernelSpec("cexp", lambda t: np.exp(1j * t), exp_kernel_bound, 1.0)


@dataclass(frozen=True)
class MeasureSpec:
    """Finite measure on a box (default ``[0, 1]**d``).

    ``kind='lebesgue'`` is Lebesgue measure; ``kind='weighted'`` has density
    ``weight`` with respect to Lebesgue measure and is sampled by rejection
    under ``weight_max``.
    """

    d: int
    kind: str = "lebesgue"
    lower: tuple[float, ...] | None = None
    upper: tuple[float, ...] | None = None
    weight: Callable | None = None
    weight_max: float | None = None
    mass: float = field(default=0.0)

    def __post_init__(self):
        lower = tuple(float(v) for v in (self.lower or (0.0,) * self.d))
        upper = tuple(float(v) for v in (self.upper or (1.0,) * self.d))
        if len(lower) != self.d or len(upper) != self.d or any(h <= l for l, h in zip(lower, upper)):
            raise ParameterError("measure box must have d nondegenerate sides")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        volume = float(np.prod(np.subtract(upper, lower)))
        if self.kind == "lebesgue":
            mass = volume
        elif self.kind == "weighted":
            if self.weight is None or not self.weight_max or self.weight_max <= 0:
                raise ParameterError("a weighted measure needs weight and weight_max > 0")
            if self.d > 4:
                raise FeasibilityError("weighted measures are supported for d <= 4")
            pts, wts = tensor_grid(32, lower, upper)
            mass = float(wts @ np.asarray(self.weight(pts), dtype=np.float64))
        else:
            raise ParameterError(f"unknown measure kind {self.kind!r}")
        if self.mass and not math.isclose(self.mass, mass, rel_tol=1e-8):
            raise ParameterError(f"declared mass {self.mass} disagrees with computed {mass}")
        if not mass > 0:
            raise ParameterError("measure mass must be positive")
        object.__setattr__(self, "mass", mass)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` points distributed as the normalized measure."""
        lo, hi = np.array(self.lower), np.array(self.upper)
        if self.kind == "lebesgue":
            return lo + (hi - lo) * rng.random((n, self.d))
        out = []
        got = 0
        for _ in range(_MAX_REJECTION_ROUNDS):
            cand = lo + (hi - lo) * rng.random((max(2 * n, 256), self.d))
            wv = np.asarray(self.weight(cand), dtype=np.float64)
            if np.any(wv > self.weight_max):
                raise EnvelopeError("measure weight exceeds weight_max")
            keep = cand[rng.random(cand.shape[0]) * self.weight_max < wv]
            out.append(keep)
            got += keep.shape[0]
            if got >= n:
                return np.concatenate(out)[:n]
        raise EnvelopeError("measure rejection sampling did not finish")


def lebesgue(d: int, lower=None, upper=None) -> MeasureSpec:
    return MeasureSpec(d, "lebesgue", lower, upper)


# -- sampling --------------------------------------------------------------


@dataclass(frozen=True)
class MaureySample:
    """Frequencies ``w_j`` and coefficients ``b_j = magnitude_j * exp(i phase_j)``."""

    seed: int
    w: np.ndarray
    magnitudes: np.ndarray
    phases: np.ndarray

    @property
    def n_terms(self) -> int:
        return self.w.shape[0]

    @property
    def b(self) -> np.ndarray:
        return self.magnitudes * np.exp(1j * self.phases)

    @property
    def total_weight(self) -> float:
        return math.fsum(self.magnitudes.tolist())

    def to_json(self) -> str:
        b = self.b
        terms = []
        for wj, bj in zip(self.w, b):
            wtxt = ", ".join(format(float(v), ".17g") for v in wj)
            terms.append(f'{{"w": [{wtxt}], "b_re": {format(bj.real, ".17g")}, '
                         f'"b_im": {format(bj.imag, ".17g")}}}')
        return f'{{"seed": {self.seed}, "terms": [\n  ' + ",\n  ".join(terms) + "\n]}\n"


def default_envelope(F: SpectralDensity) -> float:
    """1.01 times the max of ``|F|`` on a 33**d grid over the support box."""
    if F.d > 4:
        raise FeasibilityError("default envelope needs d <= 4; pass an envelope")
    axis = np.linspace(-F.M, F.M, _ENVELOPE_GRID)
    grid = np.stack(np.meshgrid(*[axis] * F.d, indexing="ij"), axis=-1).reshape(-1, F.d)
    return _ENVELOPE_SAFETY * float(np.max(F.abs_values(grid)))


def _equal_weight(C_F: float, n: int) -> float:
    q = C_F / n
    while math.fsum([q] * n) > C_F:
        q = math.nextafter(q, 0.0)
    return q


def maurey_sample(F: SpectralDensity, eps0: float, seed: int,
                  envelope: float | None = None) -> MaureySample:
    """Draw ``ceil(1/eps0**2)`` i.i.d. frequencies from ``|F| / C_F``.

    Every term gets weight ``C_F / n`` (nudged down by ulps if needed so the
    weights never sum above ``C_F``) and phase ``theta(w_j)``.
    """
    n = n_terms_for(eps0)
    env = default_envelope(F) if envelope is None else float(envelope)
    if not env > 0:
        raise DataError("spectral density vanishes on the whole support box")
    rng = make_rng(seed)
    accepted = []
    got = 0
    batch = max(2 * n, 1024)
    for _ in range(_MAX_REJECTION_ROUNDS):
        cand = F.M * (2.0 * rng.random((batch, F.d)) - 1.0)
        vals = F.abs_values(cand)
        if np.any(vals > env):
            raise EnvelopeError(f"|F| reached {vals.max()} above envelope {env}")
        keep = cand[rng.random(batch) * env < vals]
        accepted.append(keep)
        got += keep.shape[0]
        if got >= n:
            break
    else:
        raise EnvelopeError("rejection sampling exhausted its attempts")
    w = np.concatenate(accepted)[:n]
    mags = np.full(n, _equal_weight(F.C_F, n))
    return MaureySample(int(seed), w, mags, F.theta(w))


def evaluate_series(sample: MaureySample, K: KernelSpec, x) -> np.ndarray:
    """Real part of ``sum_j b_j K(w_j . x)`` for points of shape (n, d)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    out = np.zeros(x.shape[0])
    step = max(1, 2_000_000 // max(1, sample.n_terms))
    for lo in range(0, x.shape[0], step):
        t = x[lo:lo + step] @ sample.w.T
        vals = np.real(np.exp(1j * sample.phases) * K.func(t))
        out[lo:lo + step] = vals @ sample.magnitudes
    return out


# -- construction ----------------------------------------------------------


@dataclass(frozen=True)
class BandlimitedConstruction:
    net: NetworkGraph
    sample: MaureySample
    eps0: float
    kernel_params: EllipseParams
    kernel_nets: dict


def bandlimited_eps0(F: SpectralDensity, mu: MeasureSpec, eps: float) -> float:
    """``eps / (2 C_F sqrt(mu(B)))``, capped at 0.5."""
    return min(eps / (2.0 * F.C_F * math.sqrt(mu.mass)), _MAX_EPS0)


def bandlimited_construction(F: SpectralDensity, K: KernelSpec, mu: MeasureSpec, eps: float,
                             seed: int, envelope: float | None = None) -> BandlimitedConstruction:
    """Sample, build the per-term kernel networks and assemble the sum.

    Each term is ``|b_j| * kernel_j(w_j . x)`` where ``kernel_j`` approximates
    ``t -> Re(exp(i theta_j) K(t))`` on ``[-d M, d M]`` to accuracy ``eps0``.
    """
    if not 0 < eps < 1:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    if mu.d != F.d:
        raise ConstructionError("measure and density dimensions differ")
    eps0 = bandlimited_eps0(F, mu, eps)
    sample = maurey_sample(F, eps0, seed, envelope)
    half_width = F.d * F.M
    params = min_degree_ellipse(lambda s: K.certificate(s, half_width), half_width, eps0 / 2.0)
    kernel_nets: dict[float, NetworkGraph] = {}
    terms = []
    for wj, th in zip(sample.w, sample.phases):
        th = float(th)
        if th not in kernel_nets:
            kernel_nets[th] = build_analytic(K.real_part(th), params, eps0)
        terms.append(precompose_affine(kernel_nets[th], wj.reshape(1, -1)))
    net = linear_combine(terms, sample.magnitudes.tolist())
    return BandlimitedConstruction(net, sample, eps0, params, kernel_nets)


def build_bandlimited(F: SpectralDensity, K: KernelSpec, mu: MeasureSpec, eps: float,
                      seed: int, envelope: float | None = None) -> NetworkGraph:
    """Network with L2(mu) error about ``eps`` for the bandlimited function (F, K)."""
    return bandlimited_construction(F, K, mu, eps, seed, envelope).net


def bandlimited_size_model(F: SpectralDensity, K: KernelSpec, mu: MeasureSpec, eps: float,
                           s: float) -> tuple[float, float]:
    """Predicted (depth, size) growth terms without their constants."""
    C_K = K.certificate(s, F.d * F.M)
    log_term = math.log2(F.C_F * C_K * math.sqrt(mu.mass) / eps) ** 2 / math.log2(s) ** 2
    return log_term, F.C_F ** 2 * mu.mass / eps ** 2 * log_term


# -- oracle ----------------------------------------------------------------


def quadrature_reference(F: SpectralDensity, K: KernelSpec, x, nodes_per_dim: int = 16,
                         tol: float = 1e-10, max_total_nodes: int = 2 ** 22) -> np.ndarray:
    """Real part of ``int F(w) K(w . x) dw`` by tensor Gauss-Legendre on ``[-M, M]**d``.

    Nodes per axis double until two successive values agree to ``tol`` at
    every requested point.
    """
    if F.d > 4:
        raise FeasibilityError("tensor quadrature oracle supports d <= 4")
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != F.d:
        raise ParameterError(f"points must have dimension {F.d}")

    def at(nodes):
        pts, wts = tensor_grid(nodes, [-F.M] * F.d, [F.M] * F.d)
        weighted = wts * F.abs_values(pts)
        rot = np.exp(1j * F.theta(pts))
        out = np.empty(x.shape[0])
        step = max(1, 4_000_000 // pts.shape[0])
        for lo in range(0, x.shape[0], step):
            vals = np.real(rot * K.func(x[lo:lo + step] @ pts.T))
            out[lo:lo + step] = vals @ weighted
        return out

    n = int(nodes_per_dim)
    prev = at(n)
    while (2 * n) ** F.d <= max_total_nodes:
        n *= 2
        cur = at(n)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur[0] if single else cur
        prev = cur
    raise FeasibilityError("quadrature did not converge within the node budget")

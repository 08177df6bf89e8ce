"""Explicit ReLU network constructions for products, Chebyshev polynomials,
analytic functions and bandlimited functions."""

from .analytic_nets import (EllipseParams, build_analytic, ellipse_axes, exp_kernel_bound,
                            min_degree_ellipse, runge, runge_params, truncation_degree)
from .bandlimited_nets import (KernelSpec, MaureySample, MeasureSpec, SpectralDensity,
                               build_bandlimited, bandlimited_construction, cexp_kernel,
                               gaussian_density, lebesgue, maurey_sample, quadrature_reference)
from .cheb_nets import (ChebSeries, MonomialPoly, build_cheb_series, build_chebyshev, build_poly,
                        cheb_coeffs, clenshaw_eval)
from .errors import (ConstructionError, DataError, DeepReluError, DomainError, EnvelopeError,
                     FeasibilityError, InputError, ParameterError)
from .product_nets import MulBudget, build_mul2, build_muld, build_sawtooth, build_square
from .relu_ir import (Affine, GraphBuilder, Layer, NetworkGraph, Unit, compose, evaluate,
                      identity_net, linear_combine, parallel, precompose_affine)
from .harness import ErrorReport, SweepSpec, l2_mu_error, linf_error, run_sweep

__version__ = "0.1.0"

"""Spectral data of sqrt(-d^2/dx^2) + x^2: Airy-based eigenvalues and eigenfunctions,
heat kernel, trace asymptotics and a Monte Carlo Feynman-Kac cross-check."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .airy_core import AiryEvalConfig, Polynomial, ai, ai_derivative, ai_prime, airy, derivative_polynomials
from .eigenfunctions import (Eigenfunction, Moment, TailExpansion, count_zeros, eigenfunction, evaluate,
                             ground_state_shape, maclaurin, moment, sup_norm, tail_expansion)
from .errors import AiryspecError, ArgumentError, ConvergenceError, DomainError, PropertyFailure
from .feynman_kac import (McConfig, McEstimate, estimate_semigroup, sample_cauchy_increment,
                          sample_subordinator_increment, spectral_prediction)
from .heat_kernel import HeatKernelConfig, chapman_kolmogorov, check_two_sided_bound, kernel
from .spectrum import (Eigenvalue, ZeroCache, airy_prime_zero, airy_zero, eigenvalue, eigenvalue_asymptotic,
                       eigenvalue_bounds, eigenvalues, spectral_gap, trace, trace_scaled)

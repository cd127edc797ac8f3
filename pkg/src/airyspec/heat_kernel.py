"""Spectral heat kernel u(t, x, y) = sum_n exp(-lambda_n t) phi_n(x) phi_n(y)."""

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigenfunctions import evaluate
from .errors import ArgumentError, ConvergenceError, PropertyFailure
from .quadrature import line_rule
from .spectrum import eigenvalues, trace, trace_tail_bound

# sup_n sup_x |phi_n| measured over n <= 60 is phi_1(0) = 0.8443; doubled for safety
UNIFORM_BOUND = 1.7
# measured max(max r, 1/min r) over t in [1.1, 10], |x|, |y| <= 30 (step 0.25) is 4.751,
# attained at t = 1.1, x = y = -2 (min r = 0.297); frozen with a small margin
BOUND_CONSTANT = 5.0

_BLOCK = 32


@dataclass(frozen=True)
class HeatKernelConfig:
    t_min: float = 0.5
    truncation_rel_error: float = 1e-8
    max_terms: int = 400

    def __post_init__(self):
        if not self.t_min > 0:
            raise ArgumentError("t_min must be positive")
        if not self.truncation_rel_error > 0:
            raise ArgumentError("truncation_rel_error must be positive")
        if self.max_terms < 2:
            raise ArgumentError("max_terms must be at least 2")


DEFAULT_CONFIG = HeatKernelConfig()


class KernelValues(NamedTuple):
    value: np.ndarray
    tail_bound: np.ndarray
    n_terms: np.ndarray


def _check_t(t, config):
    if not (math.isfinite(t) and t >= config.t_min):
        raise ArgumentError(f"t={t!r} is below t_min={config.t_min}")


class _Basis:
    """phi_n on a fixed set of points, extended in blocks of n on demand."""

    def __init__(self, points):
        self.points = np.asarray(points, dtype=np.float64)
        self.values = np.empty((0, self.points.size))

    def upto(self, n):
        have = self.values.shape[0]
        if n > have:
            new = [evaluate(m, self.points) for m in range(have + 1, n + 1)]
            self.values = np.vstack([self.values] + [v[None, :] for v in new])
        return self.values[:n]


def kernel_grid(t, xs, ys, config=DEFAULT_CONFIG, abs_floor=0.0):
    """u(t, x_i, y_j) with a per-entry certified tail bound.

    Each entry is summed until UNIFORM_BOUND^2 times the trace tail is at most
    truncation_rel_error * max(|partial sum|, abs_floor).
    """
    _check_t(t, config)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    ys = np.atleast_1d(np.asarray(ys, dtype=np.float64))
    pts, inv = np.unique(np.concatenate((xs, ys)), return_inverse=True)
    basis = _Basis(pts)
    ix, iy = inv[:xs.size], inv[xs.size:]
    n = _BLOCK
    while True:
        n = min(n, config.max_terms)
        lam = eigenvalues(n)
        phi = basis.upto(n)
        weights = np.exp(-lam * t)
        # e * (phi(x) phi(y)): the product is commutative, so u(t,x,y) == u(t,y,x) bitwise
        terms = weights[:, None, None] * (phi[:, ix][:, :, None] * phi[:, iy][:, None, :])
        partial = np.cumsum(terms, axis=0)
        tails = np.array([trace_tail_bound(t, m) for m in range(2, n + 1)]) * UNIFORM_BOUND ** 2
        need = config.truncation_rel_error * np.maximum(np.abs(partial[1:]), abs_floor)
        ok = tails[:, None, None] <= need
        certified = ok.any(axis=0)
        if certified.all():
            first = np.argmax(ok, axis=0)
            value = np.take_along_axis(partial[1:], first[None], axis=0)[0]
            return KernelValues(value, tails[first], first + 2)
        if n >= config.max_terms:
            raise ConvergenceError("heat kernel truncation not certified within max_terms",
                                   t=t, max_terms=config.max_terms,
                                   uncertified=int((~certified).sum()))
        n *= 2


def kernel(t, x, y, config=DEFAULT_CONFIG):
    return float(kernel_grid(t, [x], [y], config).value[0, 0])


def kernel_with_bound(t, x, y, config=DEFAULT_CONFIG):
    res = kernel_grid(t, [x], [y], config)
    return float(res.value[0, 0]), float(res.tail_bound[0, 0]), int(res.n_terms[0, 0])


def _fixed_kernel(t, xs, ys, n):
    lam = eigenvalues(n)
    pts = np.unique(np.concatenate((np.atleast_1d(xs), np.atleast_1d(ys))))
    phi = np.array([evaluate(m, pts) for m in range(1, n + 1)])
    idx = {float(p): i for i, p in enumerate(pts)}
    ix = [idx[float(v)] for v in np.atleast_1d(xs)]
    iy = [idx[float(v)] for v in np.atleast_1d(ys)]
    return np.einsum("n,ni,nj->ij", np.exp(-lam * t), phi[:, ix], phi[:, iy])


@functools.lru_cache(maxsize=8)
def _line_basis(half_width, width, tail_panels):
    z, w = line_rule(half_width=half_width, width=width, tail_panels=tail_panels)
    return z, w, _Basis(z)


def absolute_terms(t, tol=1e-13, config=DEFAULT_CONFIG):
    """Smallest N with UNIFORM_BOUND^2 * trace tail <= tol (absolute truncation)."""
    _check_t(t, config)
    n = 2
    while UNIFORM_BOUND ** 2 * trace_tail_bound(t, n) > tol:
        n += 1
        if n > config.max_terms:
            raise ConvergenceError("absolute truncation exceeds max_terms", t=t)
    return n


def chapman_kolmogorov(t, s, x, y, half_width=20.0, width=0.25, tail_panels=8, config=DEFAULT_CONFIG):
    """|int u(t,x,z) u(s,z,y) dz - u(t+s,x,y)| with the whole-line panel rule."""
    z, w, basis = _line_basis(half_width, width, tail_panels)
    n = absolute_terms(min(t, s), config=config)
    lam = eigenvalues(n)
    phi_z = basis.upto(n)
    phi_x = np.array([evaluate(m, x) for m in range(1, n + 1)])
    phi_y = np.array([evaluate(m, y) for m in range(1, n + 1)])
    left = (np.exp(-lam * t) * phi_x) @ phi_z
    right = (np.exp(-lam * s) * phi_y) @ phi_z
    # pairwise sum of the symmetric product keeps the (t, s) swap exact
    integral = float(np.sum(w * (left * right)))
    return abs(integral - kernel(t + s, x, y, config))


def diagonal_integral(t, half_width=20.0, width=0.25, tail_panels=8, config=DEFAULT_CONFIG):
    """int u(t, x, x) dx by quadrature, to compare against the trace."""
    z, w, basis = _line_basis(half_width, width, tail_panels)
    n = absolute_terms(t, tol=1e-14, config=config)
    lam = eigenvalues(n)
    phi = basis.upto(n)
    diag = np.exp(-lam * t) @ (phi * phi)
    return float(np.sum(w * diag))


@dataclass
class BoundReport:
    r_max: float
    r_min: float
    c_measured: float
    c_frozen: float
    within: bool
    argmax: tuple
    argmin: tuple


def bound_ratio(t, xs, ys, config=DEFAULT_CONFIG):
    """r = u(t,x,y) (1 + x^4)(1 + y^4) exp(lambda_1 t)."""
    u = kernel_grid(t, xs, ys, config).value
    lam1 = eigenvalues(1)[0]
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    return u * np.outer(1 + xs ** 4, 1 + ys ** 4) * math.exp(lam1 * t)


def check_two_sided_bound(t_grid, xy_grid, c=BOUND_CONSTANT, config=DEFAULT_CONFIG):
    """Sweep r over t_grid x xy_grid^2 and test 1/c <= r <= c."""
    xy = np.asarray(xy_grid, dtype=np.float64)
    r_max, r_min = -math.inf, math.inf
    arg_max = arg_min = None
    for t in t_grid:
        if not t > 1:
            raise ArgumentError("the two-sided bound is stated for t > 1")
        r = bound_ratio(float(t), xy, xy, config)
        if np.any(r <= 0):
            i, j = np.unravel_index(np.argmin(r), r.shape)
            raise PropertyFailure("non-positive heat kernel", t=float(t), x=float(xy[i]), y=float(xy[j]))
        i, j = np.unravel_index(np.argmax(r), r.shape)
        if r[i, j] > r_max:
            r_max, arg_max = float(r[i, j]), (float(t), float(xy[i]), float(xy[j]))
        i, j = np.unravel_index(np.argmin(r), r.shape)
        if r[i, j] < r_min:
            r_min, arg_min = float(r[i, j]), (float(t), float(xy[i]), float(xy[j]))
    c_meas = max(r_max, 1.0 / r_min)
    return BoundReport(r_max, r_min, c_meas, c, bool(r_max <= c and r_min >= 1.0 / c), arg_max, arg_min)


def diagonal_trace_gap(t, **kwargs):
    return abs(diagonal_integral(t, **kwargs) - trace(t))

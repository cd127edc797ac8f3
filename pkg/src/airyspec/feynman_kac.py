"""Monte Carlo check of E^x[exp(-int_0^t X_s^2 ds)] for the Cauchy process X.

Two samplers generate the paths:

* ``direct_cauchy``: increments dt * tan(pi (U - 1/2));
* ``subordinated_bm``: a Brownian motion with E[exp(i xi B_t)] = exp(-t xi^2)
  (variance 2t) run on the 1/2-stable subordinator clock, whose increments
  are dt^2 / (2 Z^2).

Random numbers come from a counter-based stream keyed by (seed, path index),
so estimates do not depend on chunking or thread count.
"""

import functools
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .eigenfunctions import eigenfunction, evaluate, l1_integral
from .errors import ArgumentError, ConvergenceError
from .heat_kernel import DEFAULT_CONFIG as HK_CONFIG, UNIFORM_BOUND
from .quadrature import line_rule
from .spectrum import eigenvalues, trace_tail_bound

SAMPLERS = {"direct_cauchy": 0, "subordinated_bm": 1}
CHUNK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    t: float = 1.0
    n_steps: int = 1000
    n_paths: int = 1_000_000
    seed: int = 20240601
    sampler: str = "direct_cauchy"

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t > 0):
            raise ArgumentError("t must be positive and finite")
        if self.n_steps < 1 or self.n_paths < 1:
            raise ArgumentError("n_steps and n_paths must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError("seed must fit in 64 unsigned bits")
        if self.sampler not in SAMPLERS:
            raise ArgumentError(f"sampler must be one of {sorted(SAMPLERS)}")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int


def sample_cauchy_increment(dt, rng, size=None):
    """Cauchy draws of scale dt by inverse CDF."""
    if not dt > 0:
        raise ArgumentError("dt must be positive")
    u = rng.random(size)
    return dt * np.tan(np.pi * (u - 0.5))


def sample_subordinator_increment(dt, rng, size=None):
    """1/2-stable subordinator increments dt^2 / (2 Z^2), Laplace transform exp(-dt sqrt(lambda))."""
    if not dt > 0:
        raise ArgumentError("dt must be positive")
    z = rng.standard_normal(size)
    return dt * dt / (2.0 * z * z)


def sample_subordinated_increment(dt, rng, size=None):
    """Brownian increment (variance 2s) over a subordinator increment s."""
    s = sample_subordinator_increment(dt, rng, size)
    return np.sqrt(2.0 * s) * rng.standard_normal(size)


def path_values(x, config, backend=None, threads=None):
    """exp(-dt sum_{j=1..n} X_{t_j}^2) for every path, in path-index order."""
    kern = backend or _kernels.active
    threads = threads or _kernels.thread_count()
    out = np.empty(config.n_paths)
    code = SAMPLERS[config.sampler]
    for first in range(0, config.n_paths, CHUNK):
        count = min(CHUNK, config.n_paths - first)
        out[first:first + count] = kern.fk_path_values(
            float(x), float(config.t), int(config.n_steps), first, count,
            int(config.seed), code, threads)
    return out


def estimate_semigroup(x, config, backend=None, threads=None):
    """Sample mean and standard error of the Feynman-Kac functional started at x."""
    vals = path_values(x, config, backend, threads)
    n = vals.size
    mean = float(np.sum(vals) / n)
    std = float(np.std(vals, ddof=1)) if n > 1 else 0.0
    return McEstimate(mean, std / math.sqrt(n), n)


@functools.lru_cache(maxsize=None)
def l1_quadrature(n, half_width=20.0, width=0.25, tail_panels=8):
    """int phi_n over the real line by the whole-line panel rule."""
    z, w = line_rule(half_width=half_width, width=width, tail_panels=tail_panels)
    return float(np.sum(w * evaluate(n, z)))


def spectral_prediction(x, t, tol=1e-12, max_terms=400, quadrature=True):
    """sum_n exp(-lambda_n t) phi_n(x) int phi_n; only even eigenfunctions contribute.

    |int phi_n| = sqrt(pi / lambda_n) <= sqrt(pi / lambda_1), so the tail is
    bounded by UNIFORM_BOUND * sqrt(pi / lambda_1) times the trace tail.
    """
    if not t >= HK_CONFIG.t_min:
        raise ArgumentError(f"t must be at least {HK_CONFIG.t_min}")
    lam = eigenvalues(max_terms)
    scale = UNIFORM_BOUND * math.sqrt(math.pi / lam[0])
    n_terms = next((n for n in range(2, max_terms + 1)
                    if scale * trace_tail_bound(t, n) <= tol), None)
    if n_terms is None:
        raise ConvergenceError("spectral prediction not certified", t=t, max_terms=max_terms)
    total = 0.0
    for n in range(1, n_terms + 1, 2):
        integral = l1_quadrature(n) if quadrature else l1_integral(n)
        total += math.exp(-lam[n - 1] * t) * evaluate(n, x) * integral
    return total


def ground_state_limit(x):
    """phi_1(x) int phi_1, the large-t limit of exp(lambda_1 t) times the prediction."""
    eigenfunction(1)
    return evaluate(1, x) * l1_integral(1)


def stream_increments(dt, count, seed, sampler="direct_cauchy", step=0):
    """The increments the path kernel uses at ``step`` for paths 0..count-1.

    Returns (increment, subordinator_time); the latter is None for the
    direct sampler.
    """
    py = _kernels.python
    keys = py.path_keys(seed, 0, count)
    u1 = py.uniforms(keys, 2 * step)
    if SAMPLERS[sampler] == 0:
        return dt * np.tan(np.pi * (u1 - 0.5)), None
    u2 = py.uniforms(keys, 2 * step + 1)
    rad = np.sqrt(-2.0 * np.log(u1))
    s = dt * dt / (2.0 * (rad * np.cos(2.0 * np.pi * u2)) ** 2)
    return np.sqrt(2.0 * s) * rad * np.sin(2.0 * np.pi * u2), s

"""Airy zeros, the eigenvalues of sqrt(-d^2/dx^2) + x^2, and the semigroup trace.

lambda_{2k-1} = -a'_k (even eigenfunction), lambda_{2k} = -a_k (odd).
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize, special

from .airy_core import airy
from .errors import ArgumentError, ConvergenceError

ZERO_TOL = 1e-12

EVEN_FUNCTION = "even_function"
ODD_FUNCTION = "odd_function"

# inverse-power corrections of the zero expansions, t^(2/3) (1 + sum c_j t^(-2j))
G_COEFFS = (Fraction(-7, 48), Fraction(35, 288), Fraction(-181223, 207360),
            Fraction(18683371, 1244160), Fraction(-91145884361, 191102976))
F_COEFFS = (Fraction(5, 48), Fraction(-5, 36), Fraction(77125, 82944),
            Fraction(-108056875, 6967296), Fraction(162375596875, 334430208))


def _expansion(t, coeffs):
    t = np.asarray(t, dtype=np.float64)
    r = t ** -2.0
    acc = np.zeros_like(t)
    for c in reversed(coeffs):
        acc = (acc + float(c)) * r
    return t ** (2.0 / 3.0) * (1.0 + acc)


def g_expansion(t):
    """Asymptotic form of -a'_k as a function of t = 3 pi (4k - 3) / 8."""
    return _expansion(t, G_COEFFS)


def f_expansion(t):
    """Asymptotic form of -a_k as a function of t = 3 pi (4k - 1) / 8."""
    return _expansion(t, F_COEFFS)


def _t_even(k):
    return 3.0 * math.pi * (4.0 * np.asarray(k, dtype=np.float64) - 1.0) / 8.0


def _t_odd(k):
    return 3.0 * math.pi * (4.0 * np.asarray(k, dtype=np.float64) - 3.0) / 8.0


def _newton(x, step_fn, max_iter=40):
    """Vectorized Newton; returns iterate and a per-element convergence flag."""
    converged = np.zeros(x.shape, dtype=bool)
    for _ in range(max_iter):
        dx = step_fn(x)
        x = x - dx
        small = np.abs(dx) <= 4e-16 * np.maximum(1.0, np.abs(x))
        if np.all(small | converged):
            converged |= small
            # one polishing step at rounding level
            x = x - step_fn(x)
            return x, np.isfinite(x)
        converged |= small
    return x, converged & np.isfinite(x)


def _ai_step(x):
    a, d = airy(x)
    return a / d


def _aip_step(x):
    a, d = airy(x)
    return d / (x * a)


def _compute_ai_zeros(k):
    t = _t_even(k)
    upper = -(t ** (2.0 / 3.0))
    lower = upper * (1.0 + 1.5 * np.arctan(5.0 / (48.0 * t)))
    x, ok = _newton(upper.copy(), _ai_step)
    ok &= (x >= lower - 1e-12) & (x <= upper + 1e-12)
    for i in np.flatnonzero(~ok):
        x[i] = optimize.brentq(lambda s: airy(s)[0], lower[i], upper[i], xtol=1e-15, rtol=4e-16)
    return x


def _compute_ai_prime_zeros(k, ai_zeros_upto):
    # a'_k lies in (a_k, a_{k-1}) with a_0 := 0
    t = _t_odd(k)
    x, ok = _newton(-(t ** (2.0 / 3.0)), _aip_step)
    hi = np.concatenate(([0.0], ai_zeros_upto[:-1]))[k - 1]
    lo = ai_zeros_upto[k - 1]
    ok &= (x > lo) & (x < hi)
    for i in np.flatnonzero(~ok):
        x[i] = optimize.brentq(lambda s: airy(s)[1], lo[i] + 1e-14, hi[i] - 1e-14,
                               xtol=1e-15, rtol=4e-16)
    return x


@dataclass(frozen=True)
class ZeroCache:
    """Immutable snapshot of the first ``len(ai_zeros)`` zeros of Ai and Ai'."""

    ai_zeros: np.ndarray
    ai_prime_zeros: np.ndarray
    refined_to: float = ZERO_TOL

    @property
    def size(self):
        return len(self.ai_zeros)

    @classmethod
    def build(cls, kmax):
        return cls(np.empty(0), np.empty(0)).extended(kmax)

    def extended(self, kmax):
        """Return a new cache holding at least ``kmax`` zeros of each kind."""
        if kmax <= self.size:
            return self
        k = np.arange(self.size + 1, kmax + 1)
        new_ai = _compute_ai_zeros(k)
        ai_all = np.concatenate((self.ai_zeros, new_ai))
        new_aip = _compute_ai_prime_zeros(k, ai_all)
        for arr in (ai_all, new_aip):
            arr.setflags(write=False)
        cache = ZeroCache(ai_all, np.concatenate((self.ai_prime_zeros, new_aip)), self.refined_to)
        cache.ai_prime_zeros.setflags(write=False)
        return cache

    def check(self):
        """Newton-correction and interlacing diagnostics; raises ConvergenceError on failure.

        A zero passes when the next Newton correction is below ``refined_to``
        relative to the zero itself (the absolute residual of Ai grows with |x|
        through phase rounding, so it is not a usable criterion far out).
        """
        z1, z2 = self.ai_zeros, self.ai_prime_zeros
        bad = np.abs(_ai_step(z1)) > self.refined_to * np.abs(z1)
        bad2 = np.abs(_aip_step(z2)) > self.refined_to * np.abs(z2)
        seq = np.empty(2 * self.size)
        seq[0::2] = -self.ai_prime_zeros
        seq[1::2] = -self.ai_zeros
        interlaced = bool(seq[0] > 0 and np.all(np.diff(seq) > 0))
        if bad.any() or bad2.any() or not interlaced:
            raise ConvergenceError("zero cache failed verification",
                                   ai_bad=np.flatnonzero(bad) + 1,
                                   ai_prime_bad=np.flatnonzero(bad2) + 1,
                                   interlaced=interlaced)
        return True


_cache_lock = threading.Lock()
_cache = ZeroCache.build(256)


def zero_cache(kmax=0):
    """Current snapshot, extended (under a lock) to hold ``kmax`` zeros."""
    global _cache
    snap = _cache
    if kmax <= snap.size:
        return snap
    with _cache_lock:
        if kmax > _cache.size:
            _cache = _cache.extended(max(kmax, 2 * _cache.size))
        return _cache


def _check_index(k, name="k"):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ArgumentError(f"{name} must be a positive integer, got {k!r}")
    if k > 50_000_000:
        raise ArgumentError(f"{name}={k} is beyond the supported index range")
    return int(k)


def airy_zero(k):
    """a_k, the k-th negative zero of Ai (decreasing order)."""
    k = _check_index(k)
    return float(zero_cache(k).ai_zeros[k - 1])


def airy_prime_zero(k):
    """a'_k, the k-th negative zero of Ai'."""
    k = _check_index(k)
    return float(zero_cache(k).ai_prime_zeros[k - 1])


@dataclass(frozen=True)
class Eigenvalue:
    n: int
    parity: str
    k: int
    value: float


def eigenvalue(n):
    n = _check_index(n, "n")
    k = (n + 1) // 2
    if n % 2:
        return Eigenvalue(n, EVEN_FUNCTION, k, -airy_prime_zero(k))
    return Eigenvalue(n, ODD_FUNCTION, k, -airy_zero(k))


def eigenvalues(count):
    """Array of lambda_1 .. lambda_count."""
    count = _check_index(count, "count")
    cache = zero_cache((count + 1) // 2)
    kk = (count + 1) // 2
    lam = np.empty(2 * kk)
    lam[0::2] = -cache.ai_prime_zeros[:kk]
    lam[1::2] = -cache.ai_zeros[:kk]
    return lam[:count]


def eigenvalue_asymptotic(n):
    n = _check_index(n, "n")
    k = (n + 1) // 2
    if n % 2:
        return float(g_expansion(_t_odd(k)))
    return float(f_expansion(_t_even(k)))


class EigenvalueBounds(NamedTuple):
    lower_odd: Optional[float]
    upper_odd: float
    lower_even: float
    upper_even: float


def eigenvalue_bounds(k):
    """Bounds on lambda_{2k-1} (upper only) and lambda_{2k}, as printed with index 4k - 1."""
    k = _check_index(k)
    t = float(_t_even(k))
    base = t ** (2.0 / 3.0)
    return EigenvalueBounds(None, base, base, base * (1.0 + 1.5 * math.atan(5.0 / (18.0 * math.pi * (4 * k - 1)))))


class SpectralGap(NamedTuple):
    gap: float
    lower_bound: float


def spectral_gap():
    lam = eigenvalues(2)
    bound = (3.0 * math.pi / 8.0) ** (2.0 / 3.0) * (3.0 ** (2.0 / 3.0) - 1.0)
    return SpectralGap(float(lam[1] - lam[0]), bound)


def eigenvalue_lower_bound(s):
    """(3 pi (2s - 3) / 8)^(2/3) <= lambda_n for integer n >= 2, increasing in s."""
    return (3.0 * math.pi * (2.0 * s - 3.0) / 8.0) ** (2.0 / 3.0)


def trace_tail_bound(t, n_terms):
    """Upper bound on sum_{n > n_terms} exp(-lambda_n t) by integral comparison."""
    if n_terms < 2:
        raise ArgumentError("tail bound needs at least two summed terms")
    y = t * eigenvalue_lower_bound(n_terms)
    return 2.0 / math.pi * t ** -1.5 * special.gamma(1.5) * special.gammaincc(1.5, y)


def trace_terms(t, rel_tol=1e-10):
    """Number of eigenvalues needed so the tail bound is below rel_tol * partial sum."""
    if not t > 0:
        raise ArgumentError("trace requires t > 0")
    scale = max(math.exp(-1.02 * t), 0.5 / math.sqrt(math.pi) * t ** -1.5)
    n = 16
    while trace_tail_bound(t, n) > rel_tol * scale:
        n = int(n * 1.25) + 1
    return n


def trace(t, rel_tol=1e-10):
    """sum_n exp(-lambda_n t), truncated with a certified relative tail bound."""
    if not (isinstance(t, (int, float, np.floating)) and math.isfinite(t) and t > 0):
        raise ArgumentError(f"trace requires finite t > 0, got {t!r}")
    n = trace_terms(t, rel_tol)
    while True:
        lam = eigenvalues(n)
        # sum smallest terms first
        s = float(np.sum(np.exp(-lam * t)[::-1]))
        if trace_tail_bound(t, n) <= rel_tol * s:
            return s
        n = int(n * 1.25) + 1


def trace_scaled(t):
    """t^(3/2) times the trace; tends to 1/sqrt(pi) as t -> 0+."""
    return t ** 1.5 * trace(t)

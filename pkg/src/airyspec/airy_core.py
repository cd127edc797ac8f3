"""Airy function Ai, its derivative, and higher derivatives on the real line.

Evaluation strategy (double precision throughout):

* ``|x| >= 8``: the classical asymptotic expansions with 30 coefficients.
  At ``|x| = 8`` the truncation error is a few 1e-15 relative to the
  envelope and falls rapidly beyond.
* ``|x| < 8``: Taylor re-expansion of ``y'' = x y`` about anchor points
  spaced 0.5 apart.  Anchors are built once at import: stepping left from
  the exact values at 0, and stepping right-to-left from the asymptotic
  value at ``x = 8`` (the stable direction for the recessive solution).
  The anchor at 0 is the Maclaurin series itself.
* ``x > UNDERFLOW_X``: exact 0 (the envelope is below 3.2e-302 there and
  reaches the subnormal range shortly after).

Relative error is below 1e-13 of the envelope ``max(|Ai|, M(x))`` on
``[-40, 40]``, where ``M`` is the modulus ``pi^-1/2 |x|^-1/4`` on the
oscillatory side.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import ArgumentError, DomainError

AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))

N_ASYMPTOTIC = 30
N_TAYLOR = 26
N_STEP_TAYLOR = 40

# exp(-zeta) / (2 sqrt(pi) x^1/4) < 3.2e-302 beyond this point
UNDERFLOW_X = 102.5


class Polynomial:
    """Polynomial with exact integer coefficients, ascending degree."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        coeffs = [int(c) for c in coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs) if coeffs else (0,)

    @property
    def degree(self):
        if self.coefficients == (0,):
            return -1
        return len(self.coefficients) - 1

    def derivative(self):
        return Polynomial([k * c for k, c in enumerate(self.coefficients)][1:] or [0])

    def times_x(self):
        return Polynomial((0,) + self.coefficients)

    def __add__(self, other):
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Polynomial([p + q for p, q in zip(a, b)])

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coefficients == other.coefficients
        if isinstance(other, int):
            return self.coefficients == Polynomial([other]).coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction, elementwise for arrays."""
        if isinstance(x, (int, Fraction)):
            acc = 0
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        x = np.asarray(x, dtype=np.float64) if not isinstance(x, float) else x
        acc = 0.0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + float(c)
        return acc

    def __repr__(self):
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "x" if k == 1 else f"x**{k}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


@functools.lru_cache(maxsize=None)
def derivative_polynomials(n):
    """Return (p_n, q_n) with Ai^(n)(x) = p_n(x) Ai(x) + q_n(x) Ai'(x)."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ArgumentError(f"derivative order must be a non-negative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return Polynomial([1]), Polynomial([0])
    p, q = derivative_polynomials(n - 1)
    return p.derivative() + q.times_x(), p + q.derivative()


@dataclass(frozen=True)
class AiryEvalConfig:
    target_rel_error: float = 1e-12
    series_asymptotic_switch_point: float = 8.0
    anchor_step: float = 0.5

    def __post_init__(self):
        if not self.target_rel_error > 0:
            raise ArgumentError("target_rel_error must be positive")
        if not self.series_asymptotic_switch_point > 0:
            raise ArgumentError("switch point must be positive")
        ratio = self.series_asymptotic_switch_point / self.anchor_step
        if abs(ratio - round(ratio)) > 1e-12:
            raise ArgumentError("switch point must be a multiple of anchor_step")


def asymptotic_coefficients(count=N_ASYMPTOTIC):
    """u_k and v_k of the large-argument expansions."""
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, count)]
    return np.array(u), np.array(v)


class _Tables:
    def __init__(self, config):
        s = config.series_asymptotic_switch_point
        h = config.anchor_step
        self.switch = float(s)
        self.step = float(h)
        self.u, self.v = asymptotic_coefficients()
        n_side = int(round(s / h))
        ai = np.zeros(2 * n_side + 1)
        aip = np.zeros(2 * n_side + 1)
        ai[n_side], aip[n_side] = AI0, AIP0
        y, d = AI0, AIP0
        for j in range(1, n_side + 1):
            x0 = -(j - 1) * h
            y, d = _kernels.python._taylor(x0, y, d, -h, N_STEP_TAYLOR)
            ai[n_side - j], aip[n_side - j] = y, d
        top_ai, top_aip = _kernels.python.airy_eval(
            np.array([s]), ai, aip, self.u, self.v, s, h, UNDERFLOW_X, N_TAYLOR)
        y, d = float(top_ai[0]), float(top_aip[0])
        ai[2 * n_side], aip[2 * n_side] = y, d
        for j in range(2 * n_side - 1, n_side, -1):
            x0 = -s + (j + 1) * h
            y, d = _kernels.python._taylor(x0, y, d, -h, N_STEP_TAYLOR)
            ai[j], aip[j] = y, d
        self.anchor_ai = ai
        self.anchor_aip = aip

    def args(self):
        return (self.anchor_ai, self.anchor_aip, self.u, self.v,
                self.switch, self.step, UNDERFLOW_X, N_TAYLOR)


@functools.lru_cache(maxsize=8)
def _tables(config):
    return _Tables(config)


DEFAULT_CONFIG = AiryEvalConfig()


def airy(x, config=None, backend=None):
    """Return (Ai(x), Ai'(x)); scalars in, floats out."""
    scalar = np.ndim(x) == 0
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Airy functions require finite arguments")
    kern = backend or _kernels.active
    ai, aip = kern.airy_eval(np.atleast_1d(arr), *_tables(config or DEFAULT_CONFIG).args())
    if scalar:
        return float(ai[0]), float(aip[0])
    return ai.reshape(arr.shape), aip.reshape(arr.shape)


def ai(x, config=None):
    return airy(x, config)[0]


def ai_prime(x, config=None):
    return airy(x, config)[1]


def ai_derivative(n, x, config=None):
    """n-th derivative of Ai via p_n Ai + q_n Ai'."""
    p, q = derivative_polynomials(n)
    a, b = airy(x, config)
    if np.ndim(x) == 0:
        xf = float(x)
        return float(p(xf)) * a + float(q(xf)) * b
    xs = np.asarray(x, dtype=np.float64)
    return p(xs) * a + q(xs) * b


def ai_envelope(x):
    """Leading large-x behaviour exp(-2/3 x^1.5) / (2 sqrt(pi) x^1/4), x > 0."""
    x = np.asarray(x, dtype=np.float64)
    return np.exp(-(2.0 / 3.0) * x ** 1.5) / (2.0 * math.sqrt(math.pi) * x ** 0.25)


def oscillatory_modulus(x):
    """pi^-1/2 |x|^-1/4, the amplitude of Ai on the negative axis."""
    return 1.0 / (math.sqrt(math.pi) * np.abs(np.asarray(x, dtype=np.float64)) ** 0.25)

"""L2-normalized eigenfunctions phi_n of sqrt(-d^2/dx^2) + x^2 in real space.

With a the relevant Airy zero (a'_k for n = 2k-1, a_k for n = 2k) and
f(u) = Ai(u + a), the eigenfunctions are

    phi_{2k-1}(x) = C_n * int_0^inf f(u) cos(xu) du
    phi_{2k}(x)   = C_n * int_0^inf f(u) sin(xu) du

Evaluation of the oscillatory integral I(z) has three regimes:

* small |z|: composite Gauss-Legendre on [0, U], panels resolving both the
  oscillation of f and of the trigonometric factor;
* moderate |z|: M = 3 integrations by parts. The boundary terms are exact
  (f^(j)(0) = p_j(a) Ai(a) + q_j(a) Ai'(a)) and only the remainder
  int f^(6)(u) trig(zu) du / z^6 is done by quadrature, so the relative
  accuracy of phi survives its algebraic decay;
* |z| >= z_far(n): the same boundary series continued to M = 8 with the
  remainder dropped, where z_far is chosen so that the remainder bound
  (|f^(17)(0)| + int |f^(18)|) / z^18 is below 1e-16 of the leading term.

C_n is fixed from the Plancherel identity int phi^2 = pi * int_0^inf f^2,
with the integral evaluated by quadrature; the closed form
Ai'(a)^2 - a Ai(a)^2 is kept as a cross-check.  The sign makes phi(0) > 0
for even eigenfunctions and phi'(0) > 0 for odd ones.
"""

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize

from . import _kernels
from .airy_core import airy, derivative_polynomials
from .errors import ArgumentError, ConvergenceError, PropertyFailure
from .quadrature import panel_rule
from .spectrum import EVEN_FUNCTION, airy_zero, eigenvalue

# Airy argument beyond which f and its first 18 derivatives are below 1e-20 of their scale
V_MAX = 20.0
IBP_ORDER = 3
FAR_ORDER = 8
FAR_MIN = 100.0
FAR_REL = 1e-16


@dataclass(frozen=True)
class Eigenfunction:
    n: int
    parity: str
    k: int
    lam: float
    zero: float
    norm_constant: float
    closed_form_norm: float
    sign_convention: str

    @property
    def kind(self):
        """0 for the cosine transform (even function), 1 for sine (odd)."""
        return 0 if self.parity == EVEN_FUNCTION else 1

    def boundary_values(self, orders):
        """f^(j)(0) for j in ``orders``, from the derivative polynomials."""
        a = self.zero
        ai0, aip0 = airy(a)
        out = []
        for j in orders:
            p, q = derivative_polynomials(j)
            out.append(p(a) * ai0 + q(a) * aip0)
        return np.array(out)

    def __call__(self, x):
        return evaluate(self.n, x)


def _check_n(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _f_derivative(a, order, u):
    v = u + a
    ai, aip = airy(v)
    p, q = derivative_polynomials(order)
    return p(v) * ai + q(v) * aip


def _upper(a):
    return V_MAX - a


def _node_width(a, zmax):
    return min(0.5, 2.0 * math.pi / (zmax + math.sqrt(abs(a)) + 1.0))


@functools.lru_cache(maxsize=None)
def _base_rule(a):
    u, w = panel_rule(0.0, _upper(a), min(0.25, 1.0 / (math.sqrt(abs(a)) + 1.0)))
    return u, w


@functools.lru_cache(maxsize=None)
def eigenfunction(n):
    """Build (and memoize) the normalized eigenfunction record for index n."""
    n = _check_n(n)
    ev = eigenvalue(n)
    a = -ev.value
    u, w = _base_rule(a)
    f = _f_derivative(a, 0, u)
    l2 = float(np.sum(w * f * f))
    ai_a, aip_a = airy(a)
    closed = aip_a ** 2 - a * ai_a ** 2
    if ev.parity == EVEN_FUNCTION:
        sgn = math.copysign(1.0, float(np.sum(w * f)))
        conv = "phi(0) > 0"
    else:
        sgn = math.copysign(1.0, float(np.sum(w * f * u)))
        conv = "phi'(0) > 0"
    c = sgn / math.sqrt(math.pi * l2)
    if abs(l2 - closed) > 1e-10 * closed:
        raise ConvergenceError("normalization quadrature disagrees with closed form",
                               n=n, quadrature=l2, closed_form=closed)
    return Eigenfunction(n, ev.parity, ev.k, ev.value, a, c,
                         sgn / math.sqrt(math.pi * closed), conv)


@functools.lru_cache(maxsize=None)
def _ibp_threshold(n):
    ef = eigenfunction(n)
    return max(2.0, 2.0 * math.sqrt(abs(ef.zero)))


@functools.lru_cache(maxsize=None)
def _far_threshold(n):
    ef = eigenfunction(n)
    u, w = _base_rule(ef.zero)
    m = FAR_ORDER
    bound = abs(float(ef.boundary_values([2 * m + 1])[0]))
    bound += float(np.sum(w * np.abs(_f_derivative(ef.zero, 2 * m + 2, u))))
    if ef.kind == 0:
        lead, p_lead = abs(float(ef.boundary_values([3])[0])), 4
    else:
        lead, p_lead = abs(float(ef.boundary_values([4])[0])), 5
    z = (bound / (FAR_REL * lead)) ** (1.0 / (2 * m + 2 - p_lead))
    return max(FAR_MIN, z)


@functools.lru_cache(maxsize=256)
def _remainder_rule(n, bin_index, order):
    """Nodes u and weights w * f^(order)(u) for |z| <= 2**bin_index."""
    ef = eigenfunction(n)
    u, w = panel_rule(0.0, _upper(ef.zero), _node_width(ef.zero, 2.0 ** bin_index))
    g = w * _f_derivative(ef.zero, order, u)
    u.setflags(write=False)
    g.setflags(write=False)
    return u, g


def _boundary_series(ef, z, terms):
    """First ``terms`` boundary terms of the integration-by-parts expansion.

    cos: sum_{s=1..terms} (-1)^s f^(2s-1)(0) / z^(2s)
    sin: sum_{s=0..terms-1} (-1)^s f^(2s)(0) / z^(2s+1)
    """
    if ef.kind == 0:
        svals = range(1, terms + 1)
        orders = [2 * s - 1 for s in svals]
        powers = [2 * s for s in svals]
    else:
        svals = range(terms)
        orders = [2 * s for s in svals]
        powers = [2 * s + 1 for s in svals]
    vals = ef.boundary_values(orders)
    out = np.zeros_like(z)
    for s, c, p in zip(svals, vals, powers):
        out += (-1) ** s * c / z ** p
    return out


def _far_terms(ef):
    # both parities then leave a remainder bounded by (|f^(2M+1)(0)| + int |f^(2M+2)|) / z^(2M+2)
    return FAR_ORDER if ef.kind == 0 else FAR_ORDER + 1


def raw_transform(n, z):
    """I(z) = int_0^inf Ai(u + a) trig(z u) du for z >= 0 (array)."""
    ef = eigenfunction(n)
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    kern = _kernels.active
    z_ibp, z_far = _ibp_threshold(n), _far_threshold(n)
    far = z >= z_far
    if far.any():
        out[far] = _boundary_series(ef, z[far], _far_terms(ef))
    near = ~far
    bins = np.zeros(z.shape, dtype=np.int64)
    bins[near] = np.maximum(0, np.ceil(np.log2(np.maximum(z[near], 1.0)))).astype(np.int64)
    for b in np.unique(bins[near]):
        sel = near & (bins == b)
        zs = z[sel]
        direct = zs < z_ibp
        res = np.empty_like(zs)
        if direct.any():
            u, g = _remainder_rule(n, int(b), 0)
            res[direct] = kern.trig_sum(zs[direct], u, g, ef.kind)
        if (~direct).any():
            zi = zs[~direct]
            u, g = _remainder_rule(n, int(b), 2 * IBP_ORDER)
            rem = kern.trig_sum(zi, u, g, ef.kind)
            res[~direct] = _boundary_series(ef, zi, IBP_ORDER) + (-1) ** IBP_ORDER * rem / zi ** (2 * IBP_ORDER)
        out[sel] = res
    return out


def evaluate(n, x):
    """phi_n(x); scalar in, float out."""
    n = _check_n(n)
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(xs)):
        raise ArgumentError("eigenfunctions require finite arguments")
    ef = eigenfunction(n)
    flat = np.atleast_1d(xs).ravel()
    vals = ef.norm_constant * raw_transform(n, np.abs(flat))
    if ef.kind == 1:
        vals = np.where(flat < 0, -vals, vals)
    if scalar:
        return float(vals[0])
    return vals.reshape(xs.shape)


class TailExpansion(NamedTuple):
    n: int
    order: int
    coefficients: tuple
    powers: tuple
    convention: str

    def __call__(self, z):
        z = np.asarray(z, dtype=np.float64)
        out = np.zeros_like(z)
        for c, p in zip(self.coefficients, self.powers):
            out = out + c / z ** p
        return out if out.ndim else float(out)


def tail_coefficients(n, order, convention="normalized"):
    """Coefficients of z^-(2s) (even) or z^-(2s+1) (odd), s = 2..order.

    ``normalized`` uses this module's norm_constant so the expansion is the
    asymptotic series of ``evaluate``.  ``printed`` uses the prefactors
    sqrt(2 / lambda) (even) and sqrt(2) (odd) in place of |C_n Ai(a')| and
    |C_n Ai'(a)|; these differ from the normalized ones by sqrt(2 pi).  Both
    conventions share the sign fixed by ``sign_convention``.
    """
    n = _check_n(n)
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 2:
        raise ArgumentError(f"tail expansion order must be an integer >= 2, got {order!r}")
    if convention not in ("normalized", "printed"):
        raise ArgumentError(f"unknown convention {convention!r}")
    ef = eigenfunction(n)
    a = ef.zero
    ai_a, aip_a = airy(a)
    coeffs, powers = [], []
    for s in range(2, order + 1):
        if ef.kind == 0:
            poly = derivative_polynomials(2 * s - 1)[0]
            pref = ef.norm_constant * ai_a
            if convention == "printed":
                pref = math.copysign(math.sqrt(2.0 / ef.lam), pref)
            powers.append(2 * s)
        else:
            poly = derivative_polynomials(2 * s)[1]
            pref = ef.norm_constant * aip_a
            if convention == "printed":
                pref = math.copysign(math.sqrt(2.0), pref)
            powers.append(2 * s + 1)
        coeffs.append((-1) ** s * pref * float(poly(a)))
    return TailExpansion(n, int(order), tuple(coeffs), tuple(powers), convention)


def tail_expansion(n, z, order, convention="normalized"):
    if np.any(np.asarray(z) == 0):
        raise ArgumentError("tail expansion is undefined at z = 0")
    return tail_coefficients(n, order, convention)(z)


@dataclass(frozen=True)
class Moment:
    m: int
    a: float
    value: float


def _moment_cutoff(m, a, rel=1e-17):
    # u^m * envelope(u + a) has decayed by `rel` from its peak and keeps decreasing
    u = np.linspace(0.0, 200.0, 40001)
    v = np.maximum(u + a, 1e-3)
    with np.errstate(divide="ignore"):
        logg = m * np.log(np.maximum(u, 1e-300)) - (2.0 / 3.0) * v ** 1.5 - 0.25 * np.log(v)
    peak = np.argmax(logg)
    past = np.flatnonzero((np.arange(len(u)) > peak) & (logg < logg[peak] + math.log(rel)))
    return float(max(u[past[0]] if len(past) else u[-1], -a + 12.0))


@functools.lru_cache(maxsize=64)
def _moment_table(a, m_max):
    upper = _moment_cutoff(m_max, a)
    u, w = panel_rule(0.0, upper, min(0.25, 1.0 / (math.sqrt(abs(a)) + 1.0)))
    g = w * airy(u + a)[0]
    table = np.empty(m_max + 1)
    um = np.ones_like(u)
    for m in range(m_max + 1):
        table[m] = float(np.sum(g * um))
        um = um * u
    table.setflags(write=False)
    return table


def moment(m, a):
    """w_m(a) = int_0^inf Ai(u + a) u^m du."""
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise ArgumentError(f"moment order must be a non-negative integer, got {m!r}")
    return Moment(int(m), float(a), float(_moment_table(float(a), max(int(m), 8))[m]))


def maclaurin(n, x, order):
    """Partial Maclaurin sum of phi_n through power ``order``."""
    n = _check_n(n)
    if order < 0:
        raise ArgumentError("order must be >= 0")
    ef = eigenfunction(n)
    w = _moment_table(ef.zero, max(int(order) + 1, 8))
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros_like(x)
    for p in range(ef.kind, int(order) + 1, 2):
        m = p // 2
        total = total + (-1) ** m * w[p] / math.factorial(p) * x ** p
    total = ef.norm_constant * total
    return float(total) if total.ndim == 0 else total


def window(n):
    """A_n: twice the point where the leading tail term is twice the next one."""
    tail = tail_coefficients(n, 3)
    c2, c3 = tail.coefficients
    return 2.0 * math.sqrt(2.0 * abs(c3 / c2))


def _sign_changes(values):
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def count_zeros(n, spacing=0.005):
    """Sign changes of phi_n on [-A_n, A_n]; must agree under grid refinement x2."""
    n = _check_n(n)
    a_n = window(n)
    counts = []
    for h in (spacing, spacing / 2):
        pts = int(math.ceil(a_n / h))
        x = np.linspace(-a_n, a_n, 2 * pts + 1)
        counts.append(_sign_changes(evaluate(n, x)))
    # beyond A_n the sign must match the leading tail term
    far = np.geomspace(a_n, 1e4 * a_n, 400)
    lead = np.sign(tail_coefficients(n, 2).coefficients[0])
    outside = np.sign(evaluate(n, far))
    if counts[0] != counts[1] or np.any(outside != lead):
        raise ConvergenceError("zero count unstable", n=n, counts=counts,
                               outside_ok=bool(np.all(outside == lead)))
    return counts[1]


def sup_norm(n, spacing=0.01):
    """max |phi_n|, from a dense grid on [0, A_n] refined locally, plus the tail bound."""
    n = _check_n(n)
    a_n = window(n)
    x = np.linspace(0.0, a_n, int(math.ceil(a_n / spacing)) + 1)
    v = np.abs(evaluate(n, x))
    i = int(np.argmax(v))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    best = v[i]
    if hi > lo:
        res = optimize.minimize_scalar(lambda s: -abs(evaluate(n, s)), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-10})
        best = max(best, -res.fun)
    tail = tail_coefficients(n, 2)
    tail_bound = 2.0 * abs(tail.coefficients[0]) / a_n ** tail.powers[0]
    return float(max(best, tail_bound))


@dataclass
class GroundStateReport:
    decreasing: bool
    first_violation: Optional[float]
    second_difference_at_zero: float
    inflection: float
    convex_beyond: bool
    limit_x: float
    x6_second_derivative: float
    normalized_limit: float
    printed_limit_prime_zero: float
    printed_limit_ai_zero: float

    def matching_constant(self, rel=0.05):
        """Names of the candidate limits within ``rel`` of the measured value."""
        names = []
        for name in ("normalized_limit", "printed_limit_prime_zero", "printed_limit_ai_zero"):
            ref = getattr(self, name)
            if abs(self.x6_second_derivative - ref) <= rel * abs(ref):
                names.append(name)
        return names


def second_derivative(n, x, h=None):
    """Five-point central difference of phi_n."""
    x = np.asarray(x, dtype=np.float64)
    if h is None:
        h = np.maximum(1e-2, 0.01 * np.abs(x))
    f = [evaluate(n, x + k * h) for k in (-2, -1, 0, 1, 2)]
    return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)


def ground_state_shape(x_max=50.0, spacing=0.01, limit_x=40.0, strict=True):
    """Monotonicity, concave/convex split and the x^6 phi_1'' limit of the ground state."""
    x = np.arange(spacing, x_max + spacing / 2, spacing)
    x = np.concatenate(([0.0], x))
    v = evaluate(1, x)
    dv = np.diff(v)
    bad = np.flatnonzero(dv >= 0)
    decreasing = bad.size == 0
    first = float(x[bad[0] + 1]) if bad.size else None
    d2 = second_derivative(1, x[1:], h=spacing)
    sign = np.sign(d2)
    change = np.flatnonzero(sign[1:] != sign[:-1])
    inflection = float(0.5 * (x[1:][change[0]] + x[1:][change[0] + 1])) if change.size else math.nan
    convex_beyond = bool(change.size == 1 and np.all(d2[change[0] + 1:] > 0))
    h0 = spacing
    d2_zero = float((2 * evaluate(1, h0) - 2 * evaluate(1, 0.0)) / h0 ** 2)
    lam = eigenvalue(1).value
    report = GroundStateReport(
        decreasing=decreasing,
        first_violation=first,
        second_difference_at_zero=d2_zero,
        inflection=inflection,
        convex_beyond=convex_beyond,
        limit_x=limit_x,
        x6_second_derivative=float(limit_x ** 6 * second_derivative(1, limit_x)),
        normalized_limit=20.0 / math.sqrt(math.pi * lam),
        printed_limit_prime_zero=20.0 * math.sqrt(2.0 / lam),
        printed_limit_ai_zero=20.0 * math.sqrt(2.0 / -airy_zero(1)),
    )
    if strict and not decreasing:
        raise PropertyFailure("ground state is not strictly decreasing", location=first)
    return report


def l1_integral(n):
    """int phi_n over the real line in closed form: pi C_n Ai(a') for even n, 0 for odd."""
    ef = eigenfunction(n)
    if ef.kind == 1:
        return 0.0
    return math.pi * ef.norm_constant * airy(ef.zero)[0]



def symbol_residual(n, h=1e-3, points=400):
    """max |-y'' + |xi| y - lambda y| for y(xi) = Ai(|xi| - lambda) on (0, lambda + 10]."""
    ef = eigenfunction(n)
    xi = np.linspace(0.05, ef.lam + 10.0, points)
    y = [airy(xi + k * h - ef.lam)[0] for k in (-2, -1, 0, 1, 2)]
    d2 = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * h * h)
    return float(np.max(np.abs(-d2 + xi * y[2] - ef.lam * y[2])))


def apply_operator(n, x, x_cut=2000.0):
    """(sqrt(-d^2/dx^2) + x^2) phi_n at the points x, through a numerical Fourier transform.

    phi_n is transformed by quadrature on [0, x_cut] (the neglected tail is
    below int_{x_cut}^inf |phi_n| ~ x_cut^-3), multiplied by |xi| and
    transformed back on [0, lambda_n + 15], beyond which Ai(xi - lambda_n)
    is below 1e-17.
    """
    ef = eigenfunction(n)
    kern = _kernels.active
    xi_max = ef.lam + 15.0
    xr, wr = panel_rule(0.0, x_cut, 2.0 * math.pi / (xi_max + 1.0))
    xi, wx = panel_rule(0.0, xi_max, 0.25)
    transform = kern.trig_sum(xi, xr, wr * evaluate(n, xr), ef.kind)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    back = kern.trig_sum(np.abs(x), xi, wx * xi * transform, ef.kind) * (2.0 / math.pi)
    if ef.kind == 1:
        back = np.where(x < 0, -back, back)
    return back + x * x * evaluate(n, x)


def operator_residual(n, x):
    """max |H phi_n - lambda_n phi_n| at the points x."""
    ef = eigenfunction(n)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return float(np.max(np.abs(apply_operator(n, x) - ef.lam * evaluate(n, x))))

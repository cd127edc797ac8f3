"""The acceptance suite: one function per criterion, each returning a CriterionResult."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import airy_core as airy_mod
from . import eigenfunctions as ef
from . import feynman_kac as fk
from . import heat_kernel as hk
from . import spectrum as sp
from .errors import AiryspecError
from .quadrature import line_rule

REMARK_EIGENVALUES = (1.01879297164747, 2.33810741045976, 3.24819758217983,
                      4.08794944413097, 4.82009921117874, 5.52055982809555)

# (p_n, q_n) for n = 1..10 as ascending integer coefficients
POLYNOMIAL_TABLE = {
    1: ((0,), (1,)),
    2: ((0, 1), (0,)),
    3: ((1,), (0, 1)),
    4: ((0, 0, 1), (2,)),
    5: ((0, 4), (0, 0, 1)),
    6: ((4, 0, 0, 1), (0, 6)),
    7: ((0, 0, 9), (10, 0, 0, 1)),
    8: ((0, 28, 0, 0, 1), (0, 0, 12)),
    9: ((28, 0, 0, 16), (0, 52, 0, 0, 1)),
    10: ((0, 0, 100, 0, 0, 1), (80, 0, 0, 20)),
}

INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: float = math.inf

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        summary = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items() if not isinstance(v, (list, dict)))
        return f"{status} [{self.number:2d}] {self.title} ({self.seconds:.1f}s / {self.budget:g}s): {summary}"

    def to_dict(self):
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "seconds": self.seconds, "budget": self.budget, "details": _jsonable(self.details)}


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _timed(number, title, budget, fn):
    start = time.perf_counter()
    try:
        ok, details = fn()
    except AiryspecError as exc:
        ok, details = False, {"error": f"{type(exc).__name__}: {exc}"}
    seconds = time.perf_counter() - start
    details = dict(details)
    within = seconds <= budget
    if not within:
        details["over_budget"] = True
    return CriterionResult(number, title, bool(ok and within), details, seconds, budget)


def criterion_1():
    def run():
        lam = sp.eigenvalues(6)
        err = float(np.max(np.abs(lam - np.array(REMARK_EIGENVALUES))))
        return err <= 1e-10, {"max_abs_error": err, "tolerance": 1e-10}
    return _timed(1, "eigenvalue table", 1.0, run)


def criterion_2():
    def run():
        rel = {n: abs(sp.eigenvalue(n).value - sp.eigenvalue_asymptotic(n)) / sp.eigenvalue(n).value
               for n in (99, 100, 199, 200)}
        worst = max(rel.values())
        failures = []
        for k in range(1, 51):
            b = sp.eigenvalue_bounds(k)
            odd, even = sp.eigenvalue(2 * k - 1).value, sp.eigenvalue(2 * k).value
            if not odd <= b.upper_odd:
                failures.append(("upper_odd", k))
            if not b.lower_even <= even <= b.upper_even:
                failures.append(("even", k))
        return worst <= 1e-10 and not failures, {
            "max_rel_error": worst, "tolerance": 1e-10, "bound_failures": len(failures),
            "failed": failures}
    return _timed(2, "asymptotic expansions and bounds", 5.0, run)


def criterion_3():
    def run():
        gap = sp.spectral_gap()
        return gap.gap >= gap.lower_bound, {"gap": gap.gap, "lower_bound": gap.lower_bound}
    return _timed(3, "spectral gap", 1.0, run)


def criterion_4():
    def run():
        s1, s2 = sp.trace_scaled(0.01), sp.trace_scaled(0.003)
        d1, d2 = abs(s1 - INV_SQRT_PI), abs(s2 - INV_SQRT_PI)
        return d1 <= 0.02 * INV_SQRT_PI and d2 < d1, {
            "scaled_0.01": s1, "scaled_0.003": s2, "rel_dev_0.01": d1 / INV_SQRT_PI,
            "rel_dev_0.003": d2 / INV_SQRT_PI}
    return _timed(4, "trace limit", 10.0, run)


def criterion_5():
    def run():
        x, w = line_rule(half_width=20.0, width=0.1, tail_panels=16)
        phi = np.array([ef.evaluate(n, x) for n in range(1, 9)])
        gram = (phi * w) @ phi.T
        err = float(np.max(np.abs(gram - np.eye(8))))
        return err <= 1e-6, {"max_gram_error": err, "tolerance": 1e-6}
    return _timed(5, "orthonormality", 120.0, run)


def criterion_6():
    def run():
        sym = max(ef.symbol_residual(n) for n in range(1, 7))
        real = max(ef.operator_residual(n, [0.3, 1.0, 2.5]) for n in range(1, 5))
        return sym <= 1e-6 and real <= 1e-5, {
            "symbol_residual": sym, "symbol_tolerance": 1e-6,
            "real_space_residual": real, "real_space_tolerance": 1e-5}
    return _timed(6, "eigen-relation", 120.0, run)


def tail_slope(n, order, z_lo=30.0, z_hi=80.0, points=26):
    z = np.linspace(z_lo, z_hi, points)
    diff = np.abs(ef.evaluate(n, z) - ef.tail_expansion(n, z, order))
    return float(np.polyfit(np.log(z), np.log(diff), 1)[0])


def criterion_7():
    def run():
        slopes = {N: tail_slope(1, N) for N in (2, 3)}
        slope_ok = all(abs(slopes[N] + (2 * N + 2)) <= 0.2 for N in slopes)
        lam = sp.eigenvalue(1).value
        z4 = 50.0 ** 4 * ef.evaluate(1, 50.0)
        printed = math.sqrt(2.0 / lam)
        normalized = 1.0 / math.sqrt(math.pi * lam)
        limit_ok = abs(z4 - printed) <= 0.01 * printed
        return slope_ok and limit_ok, {
            "slope_N2": slopes[2], "slope_N3": slopes[3], "slopes_ok": slope_ok,
            "z4_phi1_50": z4, "target_sqrt_2_over_lambda1": printed, "limit_ok": limit_ok,
            "normalized_target": normalized,
            "normalized_rel_dev": abs(z4 - normalized) / normalized}
    return _timed(7, "tail law", 60.0, run)


def criterion_8():
    def run():
        bad = []
        for n, (p, q) in POLYNOMIAL_TABLE.items():
            pn, qn = airy_mod.derivative_polynomials(n)
            if pn.coefficients != p or qn.coefficients != q:
                bad.append(n)
        return not bad, {"orders_checked": len(POLYNOMIAL_TABLE), "mismatches": bad}
    return _timed(8, "polynomial tables", 1.0, run)


def criterion_9():
    def run():
        grid = np.linspace(-3.0, 3.0, 13)
        u = hk.kernel_grid(1.0, grid, grid).value
        symmetric = bool(np.array_equal(u, u.T))
        positive = bool(np.all(u > 0))
        ck = hk.chapman_kolmogorov(1.0, 1.0, 0.0, 0.0)
        diag = {t: hk.diagonal_trace_gap(t) for t in (1.0, 2.0, 5.0)}
        rep = hk.check_two_sided_bound(np.linspace(1.1, 10.0, 9), np.linspace(-30.0, 30.0, 61))
        ok = symmetric and positive and ck <= 1e-4 and max(diag.values()) <= 1e-6 and rep.within
        return ok, {"symmetric": symmetric, "positive": positive, "ck_residual": ck,
                    "max_diagonal_gap": max(diag.values()), "r_max": rep.r_max,
                    "r_min": rep.r_min, "c_frozen": rep.c_frozen}
    return _timed(9, "heat-kernel structure", 300.0, run)


def _within(sample, target, k=3.0):
    mean = float(np.mean(sample))
    se = float(np.std(sample, ddof=1) / math.sqrt(sample.size))
    return abs(mean - target) <= k * se, (mean - target) / se


def distribution_checks(draws=1_000_000, seed=7):
    """Characteristic function and Laplace transform tests, with z-scores."""
    rng = np.random.default_rng(seed)
    out = {}
    for dt in (1e-3, 1.0):
        for label, x in (("direct", fk.sample_cauchy_increment(dt, rng, draws)),
                         ("subordinated", fk.sample_subordinated_increment(dt, rng, draws)),
                         ("stream_direct", fk.stream_increments(dt, draws, seed, "direct_cauchy")[0]),
                         ("stream_subordinated", fk.stream_increments(dt, draws, seed, "subordinated_bm")[0])):
            for xi in (0.5, 1.0, 2.0):
                out[f"char_{label}_dt{dt:g}_xi{xi:g}"] = _within(np.cos(xi * x), math.exp(-dt * xi))
        for label, s in (("generator", fk.sample_subordinator_increment(dt, rng, draws)),
                         ("stream", fk.stream_increments(dt, draws, seed, "subordinated_bm")[1])):
            for lam in (1.0, 4.0):
                out[f"laplace_{label}_dt{dt:g}_l{lam:g}"] = _within(np.exp(-lam * s), math.exp(-dt * math.sqrt(lam)))
    return out


def criterion_10(n_paths=1_000_000, n_steps=1000):
    def run():
        pred = fk.spectral_prediction(0.0, 1.0)
        details = {"prediction": pred}
        ok = True
        for sampler in fk.SAMPLERS:
            cfg = fk.McConfig(t=1.0, n_steps=n_steps, n_paths=n_paths, sampler=sampler)
            est = fk.estimate_semigroup(0.0, cfg)
            z = (est.mean - pred) / est.std_error
            details[f"{sampler}_mean"] = est.mean
            details[f"{sampler}_z"] = z
            ok &= abs(z) <= 3.0
        dist = distribution_checks()
        worst = max(abs(z) for _, z in dist.values())
        details["distribution_tests"] = len(dist)
        details["distribution_max_abs_z"] = worst
        ok &= all(passed for passed, _ in dist.values())
        small = fk.McConfig(t=1.0, n_steps=n_steps, n_paths=max(1, n_paths // 10))
        identical = all(
            np.array_equal(fk.path_values(0.0, fk.McConfig(**{**small.to_dict(), "sampler": s})),
                           fk.path_values(0.0, fk.McConfig(**{**small.to_dict(), "sampler": s})))
            for s in fk.SAMPLERS)
        details["bit_identical_rerun"] = identical
        return ok and identical, details
    return _timed(10, "Monte Carlo Feynman-Kac", 600.0, run)


def criterion_11():
    def run():
        rep = ef.ground_state_shape(strict=False)
        counts = {}
        stable = True
        for n in range(1, 7):
            try:
                counts[n] = ef.count_zeros(n)
            except AiryspecError:
                stable = False
        ok = rep.decreasing and rep.second_difference_at_zero < 0 and rep.convex_beyond and stable
        return ok, {"decreasing": rep.decreasing, "second_difference_at_0": rep.second_difference_at_zero,
                    "inflection_x1": rep.inflection, "convex_beyond_x1": rep.convex_beyond,
                    "zero_counts": counts, "counts_stable": stable}
    return _timed(11, "ground-state shape", 120.0, run)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
            11: criterion_11}


def run_all(numbers=None):
    return [CRITERIA[k]() for k in (numbers or sorted(CRITERIA))]

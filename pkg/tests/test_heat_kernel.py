import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airyspec import eigenfunctions as E
from airyspec import heat_kernel as hk
from airyspec import spectrum as sp
from airyspec.errors import ArgumentError, ConvergenceError

GRID = np.linspace(-3.0, 3.0, 13)


def test_symmetry_is_bitwise():
    u = hk.kernel_grid(1.0, GRID, GRID).value
    assert np.array_equal(u, u.T)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.5, max_value=8.0), st.floats(-6, 6), st.floats(-6, 6))
def test_symmetry_pointwise(t, x, y):
    assert hk.kernel(t, x, y) == hk.kernel(t, y, x)


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_positivity(t):
    grid = np.linspace(-10.0, 10.0, 41)
    assert np.all(hk.kernel_grid(t, grid, grid).value > 0)


def test_certificate_holds_against_more_terms():
    res = hk.kernel_grid(1.0, GRID, GRID)
    n = int(res.n_terms.max())
    longer = hk._fixed_kernel(1.0, GRID, GRID, n + 10)
    diff = np.abs(longer - res.value)
    assert np.all(diff <= res.tail_bound + 1e-15)
    assert np.all(res.tail_bound <= hk.DEFAULT_CONFIG.truncation_rel_error * np.abs(res.value))


def test_kernel_with_bound():
    value, bound, n = hk.kernel_with_bound(2.0, 0.3, -0.4)
    assert value == hk.kernel(2.0, 0.3, -0.4)
    assert 0 < bound <= 1e-8 * value and n >= 2


def test_below_t_min_rejected():
    with pytest.raises(ArgumentError):
        hk.kernel(0.3, 0.0, 0.0)
    with pytest.raises(ArgumentError):
        hk.kernel(math.nan, 0.0, 0.0)


def test_config_validation():
    with pytest.raises(ArgumentError):
        hk.HeatKernelConfig(t_min=0.0)
    with pytest.raises(ArgumentError):
        hk.HeatKernelConfig(truncation_rel_error=-1.0)
    with pytest.raises(ArgumentError):
        hk.HeatKernelConfig(max_terms=1)


def test_uncertifiable_request_raises():
    cfg = hk.HeatKernelConfig(max_terms=40)
    with pytest.raises(ConvergenceError):
        hk.kernel_grid(0.5, [30.0], [-30.0], cfg)


def test_absolute_floor_allows_far_points():
    res = hk.kernel_grid(0.5, [30.0], [-30.0], abs_floor=1.0)
    assert res.value[0, 0] > 0


@pytest.mark.parametrize("t", [1.0, 2.0, 5.0])
def test_diagonal_integral_is_trace(t):
    assert hk.diagonal_trace_gap(t) <= 1e-6


def test_chapman_kolmogorov():
    assert hk.chapman_kolmogorov(1.0, 1.0, 0.0, 0.0) <= 1e-4
    assert hk.chapman_kolmogorov(0.7, 1.3, 0.5, -1.0) <= 1e-4


def test_chapman_kolmogorov_refinement():
    coarse = hk.chapman_kolmogorov(1.0, 1.0, 0.0, 0.0)
    fine = hk.chapman_kolmogorov(1.0, 1.0, 0.0, 0.0, width=0.125, tail_panels=16)
    assert fine <= 1e-4 and coarse <= 1e-4


def test_chapman_kolmogorov_time_swap():
    a = hk.chapman_kolmogorov(0.7, 1.3, 0.5, 0.5)
    b = hk.chapman_kolmogorov(1.3, 0.7, 0.5, 0.5)
    assert abs(a - b) <= 1e-12


def test_large_time_limit():
    t = 30.0
    lam1 = sp.eigenvalue(1).value
    for x, y in ((0.0, 0.0), (1.0, -2.0), (4.0, 4.0)):
        lead = math.exp(-lam1 * t) * E.evaluate(1, x) * E.evaluate(1, y)
        assert hk.kernel(t, x, y) == pytest.approx(lead, rel=1e-9)


def test_two_sided_bound_frozen_constant():
    rep = hk.check_two_sided_bound(np.linspace(1.1, 10.0, 9), np.linspace(-30.0, 30.0, 61))
    assert rep.within and rep.c_frozen == hk.BOUND_CONSTANT
    assert rep.c_measured <= hk.BOUND_CONSTANT


def test_two_sided_bound_requires_t_above_one():
    with pytest.raises(ArgumentError):
        hk.check_two_sided_bound([1.0], [0.0])


def test_uniform_bound_constant_covers_measured_sup():
    assert max(E.sup_norm(n) for n in range(1, 21)) <= hk.UNIFORM_BOUND

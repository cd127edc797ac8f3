import math

import numpy as np
import pytest
from scipy import stats

from airyspec import _kernels
from airyspec import feynman_kac as fk
from airyspec import heat_kernel as hk
from airyspec import spectrum as sp
from airyspec.checks import _within, distribution_checks
from airyspec.errors import ArgumentError
from airyspec.quadrature import line_rule

PATHS = 100_000


@pytest.fixture(scope="module")
def prediction():
    return fk.spectral_prediction(0.0, 1.0)


def cfg(**kw):
    return fk.McConfig(**{"n_paths": PATHS, **kw})


@pytest.mark.parametrize("kw", [{"t": 0.0}, {"t": math.inf}, {"n_steps": 0}, {"n_paths": 0},
                                {"seed": -1}, {"sampler": "euler"}])
def test_config_validation(kw):
    with pytest.raises(ArgumentError):
        fk.McConfig(**kw)


# samplers

@pytest.mark.parametrize("dt", [1e-3, 1.0])
def test_cauchy_increment_scale(dt):
    rng = np.random.default_rng(1)
    x = fk.sample_cauchy_increment(dt, rng, 200_000)
    assert np.median(np.abs(x)) / dt == pytest.approx(1.0, abs=0.01)
    assert stats.kstest(x, stats.cauchy(scale=dt).cdf).pvalue > 1e-3


@pytest.mark.parametrize("dt", [1e-3, 1.0])
def test_samplers_share_a_law(dt):
    rng = np.random.default_rng(2)
    a = fk.sample_cauchy_increment(dt, rng, 100_000)
    b = fk.sample_subordinated_increment(dt, rng, 100_000)
    assert stats.ks_2samp(a, b).pvalue > 1e-3


def test_subordinator_laplace_transform():
    rng = np.random.default_rng(3)
    s = fk.sample_subordinator_increment(0.5, rng, 400_000)
    for lam in (0.5, 1.0, 4.0):
        ok, _ = _within(np.exp(-lam * s), math.exp(-0.5 * math.sqrt(lam)))
        assert ok
    assert np.all(s > 0)


def test_distribution_checks_smaller_sample():
    results = distribution_checks(draws=200_000, seed=11)
    assert all(ok for ok, _ in results.values())


def test_nonpositive_dt_rejected():
    rng = np.random.default_rng(0)
    with pytest.raises(ArgumentError):
        fk.sample_cauchy_increment(0.0, rng)
    with pytest.raises(ArgumentError):
        fk.sample_subordinator_increment(-1.0, rng)


@pytest.mark.parametrize("sampler", sorted(fk.SAMPLERS))
def test_streams_drive_the_path_kernel(sampler):
    # one step from 0: the path value is exp(-dt X_dt^2), a right-endpoint sum
    inc, _ = fk.stream_increments(0.01, 1000, 5, sampler)
    vals = _kernels.active.fk_path_values(0.0, 0.01, 1, 0, 1000, 5, fk.SAMPLERS[sampler], 1)
    assert np.allclose(vals, np.exp(-0.01 * inc ** 2), rtol=1e-15, atol=0)


# path values

@pytest.mark.parametrize("sampler", sorted(fk.SAMPLERS))
def test_determinism(sampler):
    c = cfg(n_paths=20_000, n_steps=200, sampler=sampler)
    assert np.array_equal(fk.path_values(0.0, c), fk.path_values(0.0, c))


def test_chunk_and_thread_independence():
    c = cfg(n_paths=fk.CHUNK + 500, n_steps=50)
    whole = fk.path_values(0.3, c)
    tail = _kernels.active.fk_path_values(0.3, 1.0, 50, fk.CHUNK, 500, c.seed, 0, 1)
    assert np.array_equal(whole[fk.CHUNK:], tail)
    assert np.array_equal(fk.path_values(0.3, c, threads=1), fk.path_values(0.3, c, threads=3))


def test_backends_agree():
    if _kernels.compiled is None:
        pytest.skip("compiled extension not built")
    for sampler in fk.SAMPLERS:
        c = cfg(n_paths=5_000, n_steps=100, sampler=sampler)
        a = fk.path_values(0.0, c, backend=_kernels.python)
        b = fk.path_values(0.0, c, backend=_kernels.compiled)
        assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_values_in_unit_interval():
    v = fk.path_values(1.0, cfg(n_paths=20_000, n_steps=100))
    # far excursions underflow to exactly 0
    assert np.all((v >= 0) & (v <= 1)) and np.mean(v > 0) > 0.97


def test_short_time_limit():
    est = fk.estimate_semigroup(0.0, cfg(t=1e-4, n_steps=10, n_paths=20_000))
    assert est.mean == pytest.approx(1.0, abs=1e-3)


def test_monotone_in_start_point():
    c = cfg(n_paths=50_000, n_steps=200)
    assert fk.estimate_semigroup(3.0, c).mean < fk.estimate_semigroup(1.0, c).mean


@pytest.mark.parametrize("sampler", sorted(fk.SAMPLERS))
def test_estimate_matches_prediction(prediction, sampler):
    est = fk.estimate_semigroup(0.0, cfg(sampler=sampler))
    assert abs(est.mean - prediction) <= 3 * est.std_error


def test_step_doubling_within_error():
    a = fk.estimate_semigroup(0.0, cfg(n_steps=500))
    b = fk.estimate_semigroup(0.0, cfg(n_steps=1000))
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.std_error, b.std_error)


# spectral prediction

def test_prediction_value(prediction):
    assert prediction == pytest.approx(0.5092974098487726, abs=1e-10)
    assert fk.spectral_prediction(0.0, 1.0, quadrature=False) == pytest.approx(prediction, abs=1e-12)


def test_prediction_even():
    for x in (0.4, 2.5):
        assert fk.spectral_prediction(x, 1.0) == pytest.approx(fk.spectral_prediction(-x, 1.0), abs=1e-15)


def test_prediction_large_time():
    t = 20.0
    lam1 = sp.eigenvalue(1).value
    for x in (0.0, 1.5):
        scaled = math.exp(lam1 * t) * fk.spectral_prediction(x, t)
        assert scaled == pytest.approx(fk.ground_state_limit(x), rel=1e-10)


def test_prediction_is_kernel_integral(prediction):
    z, w = line_rule(half_width=20.0, width=0.25, tail_panels=8)
    u = hk._fixed_kernel(1.0, [0.0], z, hk.absolute_terms(1.0))[0]
    assert float(np.sum(w * u)) == pytest.approx(prediction, abs=1e-8)


def test_prediction_below_t_min():
    with pytest.raises(ArgumentError):
        fk.spectral_prediction(0.0, 0.1)

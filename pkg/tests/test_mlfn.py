import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

import oracles
from prabhakar.errors import DomainError, PrecisionWarning, SeriesTruncationError
from prabhakar.mlfn import MLParams, SeriesControl, gamma_ratio, log_gamma_ratio, mittag_leffler, ml3


def test_exponential_reduction():
    z = np.arange(-5.0, 6.0)
    got = ml3(MLParams(1.0, 1.0, 1.0), z)
    np.testing.assert_allclose(got, np.exp(z), rtol=1e-12)
    assert ml3(MLParams(1, 1, 1), 1.0) == pytest.approx(math.e, rel=1e-15)


@pytest.mark.parametrize("alpha,beta,z", [(0.3, 2.5, -4.0), (1.7, 0.4, 9.0), (2.0, -1.5, 0.3)])
def test_zero_upper_parameter_is_reciprocal_gamma(alpha, beta, z):
    assert ml3(MLParams(alpha, beta, 0.0), z) == special.rgamma(beta)


def test_cosh_identity():
    # E_{2,1}(z^2) = cosh(z)
    assert ml3(MLParams(2.0, 1.0, 1.0), 4.0) == pytest.approx(3.762195691083631459562, rel=1e-14)


@pytest.mark.parametrize("z", [-3.0, 0.0, 0.5, 7.0])
def test_negative_integer_upper_parameter_is_polynomial(z):
    assert ml3(MLParams(1.0, 1.0, -1.0), z) == pytest.approx(1.0 - z, abs=1e-15)


def test_pole_terms_are_skipped():
    # beta = 0: the k = 0 term vanishes, E_{1,0}(z) = z e^z
    assert ml3(MLParams(1.0, 0.0, 1.0), 1.5) == pytest.approx(1.5 * math.exp(1.5), rel=1e-14)


def test_erfcx_identity():
    z = np.linspace(0.0, 3.0, 7)
    np.testing.assert_allclose(mittag_leffler(-z, 0.5), special.erfcx(z), rtol=1e-10)


@pytest.mark.parametrize("alpha,beta,gamma,z,expected", [
    (0.8, 0.6, 0.9, -1.0, None),
    (0.77, 0.84, 1.57, 38.0, 4.400960714210967559719e50),
    (0.6, 1.3, -0.4, -3.0, 1.937998571949652659379),
])
def test_against_extended_precision(alpha, beta, gamma, z, expected):
    if expected is None:
        expected = oracles.ml3(alpha, beta, gamma, z)
    assert ml3(MLParams(alpha, beta, gamma), z) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(alpha=st.floats(0.5, 2.0), beta=st.floats(0.1, 3.0), gamma=st.floats(-1.5, 2.0),
       z=st.floats(-2.0, 2.0))
def test_random_parameters_match_oracle(alpha, beta, gamma, z):
    got = ml3(MLParams(alpha, beta, gamma), z)
    want = oracles.ml3(alpha, beta, gamma, z)
    assert got == pytest.approx(want, rel=1e-11, abs=1e-13)


def test_array_shape_is_preserved():
    z = np.linspace(-1, 1, 6).reshape(2, 3)
    out = ml3(MLParams(0.7, 1.2, 0.5), z)
    assert out.shape == (2, 3)
    assert out[1, 2] == ml3(MLParams(0.7, 1.2, 0.5), z[1, 2])


def test_truncation_error_carries_last_term():
    with pytest.raises(SeriesTruncationError) as info:
        ml3(MLParams(1.0, 1.0, 1.0), 30.0, SeriesControl(max_terms=5))
    assert info.value.last_term > 0


@pytest.mark.parametrize("alpha,z", [(1.0, -40.0), (0.2, -2.0)])
def test_cancellation_warning(alpha, z):
    with pytest.warns(PrecisionWarning):
        ml3(MLParams(alpha, 1.0, 1.0), z)


def test_non_finite_argument_rejected():
    with pytest.raises(DomainError):
        ml3(MLParams(1.0, 1.0), np.nan)


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0.0), dict(max_terms=0), dict(consecutive_small=1)])
def test_series_control_validation(kwargs):
    with pytest.raises(DomainError):
        SeriesControl(**kwargs)


def test_params_validation():
    with pytest.raises(DomainError):
        MLParams(0.0, 1.0)
    with pytest.raises(DomainError):
        MLParams(1.0, math.inf)


@pytest.mark.parametrize("a,b,expected", [(5, 4, 4.0), (1, 1, 1.0), (0.5, 1.5, 2.0), (30.5, 31.0, None)])
def test_gamma_ratio_values(a, b, expected):
    if expected is None:
        expected = math.exp(math.lgamma(a) - math.lgamma(b))
    assert gamma_ratio(a, b) == pytest.approx(expected, rel=1e-13)


def test_gamma_ratio_sign():
    r = log_gamma_ratio(-0.5, 1.0)
    assert r.sign == -1
    assert r.value == pytest.approx(special.gamma(-0.5), rel=1e-14)


def test_gamma_ratio_poles():
    assert log_gamma_ratio(2.5, -3.0).value == 0.0
    assert gamma_ratio(-2.0, 1.5) == math.inf
    with pytest.raises(DomainError):
        log_gamma_ratio(-1.0, 0.0)


def test_no_warning_on_benign_input():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ml3(MLParams(0.5, 1.0, 1.0), np.linspace(-3, 3, 11))

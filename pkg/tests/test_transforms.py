import math

import numpy as np
import pytest

from prabhakar.errors import DomainError, EnvelopeError
from prabhakar.functions import CallableFunction, SampledFunction
from prabhakar.kernels import PrabhakarParams, kernel_eval, sumudu_symbol
from prabhakar.operators import BaseParams, HilferOrder, hp_derivative, hp_derivative_regularized
from prabhakar.transforms import (
    FrequencyGrid,
    convolve,
    fourier_forward,
    fourier_inverse,
    sumudu_hp_symbol,
    sumudu_hpreg_symbol,
    sumudu_numeric,
    verify_convolution,
)

U = np.array([0.1, 0.5, 2.0])


def one(t):
    return np.ones_like(np.asarray(t, dtype=float))


# {{{ Sumudu

def test_sumudu_elementary():
    np.testing.assert_allclose(sumudu_numeric(one, U), 1.0, rtol=1e-14)
    np.testing.assert_allclose(sumudu_numeric(lambda t: t, U), U, rtol=1e-14)
    np.testing.assert_allclose(sumudu_numeric(np.sin, U), U / (1 + U**2), rtol=1e-12)
    assert isinstance(sumudu_numeric(np.cos, 0.3), float)


@pytest.mark.parametrize("rho,mu,omega,gamma", [(0.5, 0.3, -0.9, 1.7), (1.0, 1.4, 0.8, -0.6)])
def test_sumudu_of_kernel(rho, mu, omega, gamma):
    p = PrabhakarParams(rho, mu, omega, gamma)
    u = np.array([0.1, 0.3, 0.5])
    got = sumudu_numeric(lambda t: kernel_eval(p, t), u, power=mu - 1)
    np.testing.assert_allclose(got, sumudu_symbol(p, u), rtol=1e-6)


def test_sumudu_of_sampled_data_uses_horizon():
    f = SampledFunction.from_callable(lambda t: np.exp(-t), 40.0, 2000)
    assert sumudu_numeric(f, 0.5) == pytest.approx(1 / 1.5, rel=1e-5)
    with pytest.raises(EnvelopeError, match="horizon"):
        sumudu_numeric(f, 5.0)


def test_sumudu_detects_growth():
    with pytest.raises(EnvelopeError, match="decay"):
        sumudu_numeric(lambda t: np.exp(2.0 * t), 1.0)


def test_sumudu_argument_validation():
    with pytest.raises(DomainError):
        sumudu_numeric(one, -1.0)
    with pytest.raises(DomainError):
        sumudu_numeric(one, 1.0, n_nodes=0)

# }}}


# {{{ convolution

def test_convolution_of_elementary_functions():
    t = np.array([0.5, 2.0])
    np.testing.assert_allclose(convolve(one, one, t), t, rtol=1e-14)
    np.testing.assert_allclose(convolve(one, lambda s: s, t), t**2 / 2, rtol=1e-13)
    a, b = -0.7, 0.4
    got = convolve(lambda s: np.exp(a * s), lambda s: np.exp(b * s), t)
    np.testing.assert_allclose(got, (np.exp(a * t) - np.exp(b * t)) / (a - b), rtol=1e-12)


@pytest.mark.parametrize("f,g,expected", [
    (one, one, lambda u: u),
    (one, lambda t: t, lambda u: u * u),
    (lambda t: np.exp(-0.7 * t), lambda t: np.exp(0.4 * t),
     lambda u: u / ((1 + 0.7 * u) * (1 - 0.4 * u))),
])
def test_convolution_theorem(f, g, expected):
    lhs, rhs = verify_convolution(f, g, 0.3)
    assert lhs == pytest.approx(rhs, rel=1e-8)
    assert rhs == pytest.approx(expected(0.3), rel=1e-10)

# }}}


# {{{ symbols

def test_symbol_parameter_collapses():
    h, u = HilferOrder(0.4, 0.0), 0.3
    assert sumudu_hp_symbol(h, BaseParams(1.0, 0.0, 0.0), u, 0.0, u) == pytest.approx(u**0.6)
    base = BaseParams(0.7, -0.5, 1.2)
    assert sumudu_hp_symbol(h, base, 2.0, 0.0, u) == pytest.approx(
        u**-0.4 * (1 + 0.5 * u**0.7) ** 1.2 * 2.0)
    assert sumudu_hpreg_symbol(0.4, base, 1.7, 1.7, u) == 0.0
    assert sumudu_hpreg_symbol(0.4, BaseParams(1.0, 0.3, 0.0), 2.0, 0.5, u) == pytest.approx(
        u**-0.4 * 1.5)


def test_symbols_match_numerical_operators():
    h, base = HilferOrder(0.6, 0.35), BaseParams(0.8, -0.3, 0.7)
    f = CallableFunction(np.sin, ac1=True)
    u = np.array([0.1, 0.2, 0.3])
    F = u / (1 + u * u)
    for ui, Fi in zip(u, F):
        d = CallableFunction(lambda t: hp_derivative(h, base, f, t), power=0.0)
        got = sumudu_numeric(d, ui, power=d.power)
        assert got == pytest.approx(sumudu_hp_symbol(h, base, Fi, 0.0, ui), rel=1e-4)
    reg = CallableFunction(lambda t: hp_derivative_regularized(h.mu, base, f, t), power=0.0)
    got = sumudu_numeric(reg, 0.2)
    assert got == pytest.approx(sumudu_hpreg_symbol(h.mu, base, 0.2 / 1.04, 0.0, 0.2), rel=1e-4)


def test_symbol_branch_violation():
    with pytest.raises(DomainError):
        sumudu_hp_symbol(HilferOrder(0.5), BaseParams(1.0, 4.0, 1.0), 1.0, 0.0, 0.5)

# }}}


# {{{ Fourier

GRID = FrequencyGrid(p_max=12.0, n_p=1024, x_max=16.0)


def gaussian(x):
    return np.exp(-np.asarray(x) ** 2 / 2)


def test_gaussian_pair_and_round_trip():
    g_hat = fourier_forward(gaussian, GRID)
    np.testing.assert_allclose(g_hat, math.sqrt(2 * math.pi) * gaussian(GRID.nodes), atol=1e-13)
    x = np.array([0.0, 0.7, -2.0])
    np.testing.assert_allclose(fourier_inverse(g_hat, x, GRID).real, gaussian(x), atol=1e-12)


def test_indicator_transform():
    g_hat = fourier_forward(lambda x: (np.abs(x) <= 1).astype(float), GRID)
    p = GRID.nodes
    np.testing.assert_allclose(g_hat.real, 2 * np.sin(p) / p, atol=1e-12)
    np.testing.assert_allclose(g_hat.imag, 0.0, atol=1e-12)


def test_truncated_tail_is_reported():
    with pytest.raises(EnvelopeError):
        fourier_forward(lambda x: 1 / (1 + np.asarray(x) ** 2), GRID)


def test_grid_validation():
    with pytest.raises(DomainError, match="spacing"):
        FrequencyGrid(p_max=10.0, n_p=64, x_max=16.0)
    with pytest.raises(DomainError):
        FrequencyGrid(n_p=7)
    with pytest.raises(DomainError):
        fourier_inverse(np.ones(3), 0.0, GRID)

# }}}

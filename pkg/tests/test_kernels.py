import math

import numpy as np
import pytest

import oracles
from prabhakar.errors import DomainError
from prabhakar.kernels import PrabhakarParams, branch_factor, kernel_eval, sumudu_symbol
from prabhakar.transforms import sumudu_numeric


def test_kernel_trivial_cases():
    assert kernel_eval(PrabhakarParams(1, 1, 0, 0.7), 2.0) == 1.0
    assert kernel_eval(PrabhakarParams(1, 1, 0.5, 1), 1.0) == pytest.approx(math.exp(0.5), rel=1e-15)


def test_kernel_against_series_oracle():
    p = PrabhakarParams(0.8, 0.6, -0.7, 0.9)
    assert kernel_eval(p, 1.5) == pytest.approx(0.1307908563365328789906, rel=1e-13)
    t = np.array([0.1, 2.0, 4.0])
    want = [oracles.kernel(0.8, 0.6, -0.7, 0.9, ti) for ti in t]
    np.testing.assert_allclose(kernel_eval(p, t), want, rtol=1e-12)


def test_kernel_accepts_non_positive_mu_pointwise():
    # t^{-mu} E^{-gamma}_{rho,1-mu} with mu > 1 gives a negative order
    p = PrabhakarParams(0.5, -0.3, 0.2, -0.4)
    assert math.isfinite(kernel_eval(p, 0.7))


def test_kernel_rejects_origin():
    with pytest.raises(DomainError):
        kernel_eval(PrabhakarParams(1, 0.5), np.array([0.0, 1.0]))


def test_params_validation():
    with pytest.raises(DomainError):
        PrabhakarParams(0.0, 1.0)
    with pytest.raises(DomainError):
        PrabhakarParams(1.0, math.nan)


def test_symbol_trivial_cases():
    assert sumudu_symbol(PrabhakarParams(1, 1, 0.5, 1), 0.4) == pytest.approx(1 / 0.8)
    assert sumudu_symbol(PrabhakarParams(0.3, 1, 0.0, 2.5), 0.9) == 1.0


def test_symbol_closed_form_and_numeric_transform():
    p = PrabhakarParams(0.8, 0.6, -0.7, 0.9)
    want = 1.307972787328802053557
    assert sumudu_symbol(p, 0.3) == pytest.approx(want, rel=1e-14)
    numeric = sumudu_numeric(lambda t: kernel_eval(p, t), 0.3, power=p.mu - 1.0)
    assert numeric == pytest.approx(want, rel=1e-6)


def test_branch_violation():
    with pytest.raises(DomainError, match="branch"):
        sumudu_symbol(PrabhakarParams(1, 1, 2.0, 1), 0.6)
    with pytest.raises(DomainError):
        branch_factor(1.0, 0.1, -1.0)

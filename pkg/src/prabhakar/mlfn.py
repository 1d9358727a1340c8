r"""Three-parameter (Prabhakar) Mittag-Leffler function.

.. math::

    E^{\gamma}_{\alpha,\beta}(z) = \sum_{k=0}^\infty
        \frac{(\gamma)_k}{k!\,\Gamma(\alpha k + \beta)} z^k

evaluated by direct Taylor summation for real arguments. This is adequate
for moderate arguments (roughly :math:`|z| \lesssim 50`); for large negative
``z`` the alternating series loses digits and a :class:`PrecisionWarning` is
emitted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from prabhakar.errors import DomainError, PrecisionWarning, SeriesTruncationError

# largest intermediate term relative to the result before we warn
CANCELLATION_RATIO = 1.0e8
_CHUNK = 32


@dataclass(frozen=True)
class MLParams:
    """Parameters ``(alpha, beta, gamma_upper)`` of :math:`E^\\gamma_{\\alpha,\\beta}`."""

    alpha: float
    beta: float
    gamma_upper: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma_upper"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite series.

    Summation stops once ``consecutive_small`` consecutive terms are below
    ``rel_tol`` times the running sum. Terms that vanish identically (poles of
    the reciprocal gamma function) do not count as small.
    """

    rel_tol: float = 1.0e-14
    max_terms: int = 2000
    consecutive_small: int = 3

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.consecutive_small < 2:
            raise DomainError("consecutive_small must be at least 2")


DEFAULT_CONTROL = SeriesControl()


class GammaRatio(NamedTuple):
    """``Gamma(a) / Gamma(b)`` stored as ``sign * exp(log_abs)``."""

    sign: int
    log_abs: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)


def is_gamma_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma_ratio(a: float, b: float) -> GammaRatio:
    """Return :math:`\\Gamma(a)/\\Gamma(b)` with the sign tracked separately.

    A pole of ``Gamma(b)`` gives a zero ratio (``sign == 0``); a pole of
    ``Gamma(a)`` with ``b`` regular gives an infinite ratio, reported as
    ``log_abs == inf`` and ``sign == 0``. Both at poles is undefined here.
    """
    pa, pb = is_gamma_pole(a), is_gamma_pole(b)
    if pa and pb:
        raise DomainError(f"Gamma({a})/Gamma({b}): both arguments are poles")
    if pb:
        return GammaRatio(0, -math.inf)
    if pa:
        return GammaRatio(0, math.inf)

    sign = int(special.gammasgn(a) * special.gammasgn(b))
    if abs(a - b) < 50 and max(abs(a), abs(b)) > 10 and a > 0 and b > 0:
        # poch is accurate for nearby large arguments, gammaln differences are not
        return GammaRatio(1, -math.log(special.poch(a, b - a)))
    return GammaRatio(sign, float(special.gammaln(a) - special.gammaln(b)))


def gamma_ratio(a: float, b: float) -> float:
    r = log_gamma_ratio(a, b)
    if r.sign == 0 and r.log_abs == math.inf:
        return math.inf
    return r.value


def ml3(p: MLParams, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Evaluate :math:`E^{\\gamma}_{\\alpha,\\beta}(z)` for real scalar or array ``z``.

    Terms are built as ``(gamma)_k z^k / k!`` (multiplicative recurrence)
    times ``1/Gamma(alpha k + beta)``, with ``1/Gamma`` taken as zero at the
    poles. For ``gamma_upper = -m`` the series is a polynomial of degree ``m``
    and is summed exactly.

    :raises SeriesTruncationError: if ``ctl.max_terms`` terms do not converge.
    """
    zarr = np.asarray(z, dtype=np.float64)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    if not np.all(np.isfinite(zarr)):
        raise DomainError("ml3 argument must be finite")

    alpha, beta, g = p.alpha, p.beta, p.gamma_upper

    if g == 0.0:
        out = np.full(zarr.shape, special.rgamma(beta))
        return float(out[0]) if scalar else out

    n_terms = ctl.max_terms
    polynomial = is_gamma_pole(g)
    if polynomial:
        n_terms = min(n_terms, int(-g) + 1)

    total = np.zeros(zarr.size)
    peak = np.zeros(zarr.size)
    last = np.zeros(zarr.size)
    done = np.zeros(zarr.size, dtype=bool)

    # working arrays cover only the points still summing; converged points
    # are written back and dropped
    idx = np.arange(zarr.size)
    zw = zarr.ravel().copy()
    tot = np.zeros_like(zw)
    pk = np.zeros_like(zw)
    lst = np.zeros_like(zw)
    nsmall = np.zeros(zw.shape, dtype=np.int64)
    # a_k = (gamma)_k z^k / k! is carried as mantissa * exp(scale) and
    # combined with log(1/Gamma(alpha k + beta)) so that neither factor
    # over- or underflows on its own
    ak = np.ones_like(zw)
    scale = np.zeros_like(zw)
    big = 1.0e100
    tiny = np.finfo(float).tiny
    eps = np.finfo(float).eps

    def flush(keep):
        out = idx[~keep]
        total[out] = tot[~keep]
        peak[out] = pk[~keep]
        last[out] = lst[~keep]
        done[out] = nsmall[~keep] >= ctl.consecutive_small

    k0 = 0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        while k0 < n_terms and idx.size:
            k1 = min(k0 + _CHUNK, n_terms)
            args = alpha * np.arange(k0, k1) + beta
            rg = special.rgamma(args)
            log_rg = -special.gammaln(args)
            sign_rg = special.gammasgn(args)

            for j in range(k1 - k0):
                k = k0 + j
                pole = is_gamma_pole(args[j])
                if pole:
                    term = 0.0
                elif rg[j] != 0.0 and not scale.any():
                    term = ak * rg[j]
                else:
                    term = sign_rg[j] * ak * np.exp(scale + log_rg[j])
                    if rg[j] != 0.0:
                        term = np.where(scale == 0.0, ak * rg[j], term)
                ak = ak * ((g + k) / (k + 1.0)) * zw
                huge = np.abs(ak) > big
                if huge.any():
                    ak = np.where(huge, ak / big, ak)
                    scale = np.where(huge, scale + math.log(big), scale)
                if pole:
                    lst = np.zeros_like(lst)
                    continue
                tot = tot + term
                absterm = np.abs(term)
                pk = np.maximum(pk, absterm)
                lst = absterm
                small = (absterm <= ctl.rel_tol * np.maximum(np.abs(tot), tiny)) | (
                    absterm <= 1.0e-3 * eps * pk
                )
                nsmall = np.where(small, nsmall + 1, 0)
                fin = nsmall >= ctl.consecutive_small
                if fin.any():
                    keep = ~fin
                    flush(keep)
                    idx, zw, tot, pk, lst = idx[keep], zw[keep], tot[keep], pk[keep], lst[keep]
                    nsmall, ak, scale = nsmall[keep], ak[keep], scale[keep]
                    if not idx.size:
                        break
            if not np.all(np.isfinite(tot)):
                break
            k0 = k1
    if idx.size:
        flush(np.zeros(idx.size, dtype=bool))
    total, peak, last, done = (a.reshape(zarr.shape) for a in (total, peak, last, done))

    if not np.all(np.isfinite(total)):
        raise SeriesTruncationError(
            f"E^{g}_{{{alpha},{beta}}} overflowed; argument outside the series envelope",
            math.inf,
            partial_sum=total,
        )
    if not polynomial and not np.all(done):
        worst = float(np.max(np.where(done, 0.0, last)))
        raise SeriesTruncationError(
            f"E^{g}_{{{alpha},{beta}}} did not converge in {ctl.max_terms} terms",
            worst,
            partial_sum=total,
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = peak / np.abs(total)
    if np.any(ratio > CANCELLATION_RATIO):
        warnings.warn(
            f"E^{g}_{{{alpha},{beta}}}: cancellation ratio {np.nanmax(ratio):.1e}"
            " exceeds 1e8; result may have lost most of its digits",
            PrecisionWarning,
            stacklevel=2,
        )

    return float(total[0]) if scalar else total


def mittag_leffler(z, alpha: float, beta: float = 1.0, gamma: float = 1.0,
                   ctl: SeriesControl = DEFAULT_CONTROL):
    """Shorthand for :func:`ml3` taking the parameters positionally."""
    return ml3(MLParams(alpha, beta, gamma), z, ctl)

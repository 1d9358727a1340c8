r"""Prabhakar integral and Hilfer-Prabhakar derivatives.

All operators act on either a :class:`~prabhakar.functions.SampledFunction`
or a vectorized callable (:class:`~prabhakar.functions.CallableFunction`).

* Sampled operands use product integration: the weakly singular factor
  :math:`(t - y)^{\mu - 1}` is integrated exactly against piecewise-linear
  hat functions and the remaining factor
  :math:`E^\gamma_{\rho,\mu}(\omega (t-y)^\rho) f(y)` is interpolated
  linearly on the graded mesh.
* Callable operands use the composite graded Gauss-Jacobi rule from
  :mod:`prabhakar.quadrature`, which is accurate to roughly ``1e-10``.

Derivatives are evaluated literally: the inner Prabhakar integral is
tabulated, differentiated with fourth-order finite differences and the
outer Prabhakar integral is applied to the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from prabhakar.errors import DomainError, IndeterminateLimitError
from prabhakar.functions import CallableFunction, SampledFunction, as_function
from prabhakar.kernels import PrabhakarParams
from prabhakar.mlfn import DEFAULT_CONTROL, SeriesControl, ml3
from prabhakar.quadrature import (
    DEFAULT_QUADRATURE,
    GradedTable,
    QuadratureConfig,
    graded_rule,
    grid_derivative,
    relative_difference,
)

# target size of the (points x nodes) work arrays
_BLOCK = 200_000
# keeps limit probes and their powers clear of underflow
_SMALLEST_PROBE = 1.0e-280


@dataclass(frozen=True)
class HilferOrder:
    """Order ``mu`` in ``(0, 1)`` and type ``nu`` in ``[0, 1]``."""

    mu: float
    nu: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"mu must lie in (0, 1), got {self.mu}")
        if not 0.0 <= self.nu <= 1.0:
            raise DomainError(f"nu must lie in [0, 1], got {self.nu}")

    @property
    def inner_order(self) -> float:
        return (1.0 - self.nu) * (1.0 - self.mu)

    @property
    def outer_order(self) -> float:
        return self.nu * (1.0 - self.mu)


@dataclass(frozen=True)
class BaseParams:
    """The ``(rho, omega, gamma_upper)`` shared by both derivative stages."""

    rho: float
    omega: float = 0.0
    gamma_upper: float = 0.0

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        for name in ("omega", "gamma_upper"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    def with_order(self, mu: float, gamma_upper: float) -> PrabhakarParams:
        return PrabhakarParams(self.rho, mu, self.omega, gamma_upper)


def hp_stages(h: HilferOrder, base: BaseParams) -> tuple[PrabhakarParams, PrabhakarParams]:
    """Inner and outer Prabhakar operators of the Hilfer-Prabhakar derivative."""
    g = base.gamma_upper
    # "+ 0.0" keeps -0.0 out of the identity check
    inner = base.with_order(h.inner_order, -g * (1.0 - h.nu) + 0.0)
    outer = base.with_order(h.outer_order, -g * h.nu + 0.0)
    return inner, outer


def _as_points(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation points must be finite")
    return arr, arr.ndim == 0


def _finish(out: np.ndarray, scalar: bool):
    return float(out.reshape(-1)[0]) if scalar else out


# {{{ Prabhakar integral

def _graded_integral(p: PrabhakarParams, f: CallableFunction, t: np.ndarray,
                     q: QuadratureConfig, ctl: SeriesControl) -> np.ndarray:
    """``int_0^t (t-y)^(mu-1) E(omega (t-y)^rho) f(y) dy`` for callables, t > 0."""
    beta = f.power
    x, xc, w = graded_rule(p.mu - 1.0, beta, q)
    flat = t.ravel()
    out = np.empty_like(flat)
    step = max(1, _BLOCK // len(x))
    for i in range(0, len(flat), step):
        tb = flat[i:i + step, None]
        s = tb * x[None, :]
        y = tb * xc[None, :]
        e = ml3(p.ml, p.omega * s**p.rho, ctl)
        fy = f(y)
        if beta != 0.0:
            fy = fy / y**beta
        out[i:i + step] = tb[:, 0] ** (p.mu + beta) * np.sum(w * e * fy, axis=1)
    return out.reshape(t.shape)


def _product_weights(s_left: np.ndarray, s_right: np.ndarray, h: np.ndarray,
                     mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Weights of ``int s^(mu-1) * hat`` over cells with ``s`` in ``[s_right, s_left]``."""
    i0 = (s_left**mu - s_right**mu) / mu
    i1 = (s_left ** (mu + 1.0) - s_right ** (mu + 1.0)) / (mu + 1.0)
    return (i1 - s_right * i0) / h, (s_left * i0 - i1) / h


def _product_integral(p: PrabhakarParams, f: SampledFunction, t: np.ndarray,
                      ctl: SeriesControl) -> np.ndarray:
    flat = t.ravel()
    out = np.empty_like(flat)
    for i, ti in enumerate(flat):
        y = f.grid[f.grid < ti]
        y = np.append(y, ti)
        s = ti - y
        g = ml3(p.ml, p.omega * s**p.rho, ctl) * f(y)
        a, b = _product_weights(s[:-1], s[1:], np.diff(y), p.mu)
        out[i] = np.sum(a * g[:-1]) + np.sum(b * g[1:])
    return out.reshape(t.shape)


def prabhakar_integral(p: PrabhakarParams, f, t,
                       q: QuadratureConfig = DEFAULT_QUADRATURE,
                       ctl: SeriesControl = DEFAULT_CONTROL):
    r"""Evaluate :math:`\int_0^t (t-y)^{\mu-1} E^\gamma_{\rho,\mu}(\omega(t-y)^\rho) f(y)\,dy`.

    The order-zero operator with zero upper parameter is the identity.

    :arg f: a :class:`SampledFunction`, :class:`CallableFunction` or a plain
        vectorized callable.
    :arg t: scalar or array of evaluation points, ``t > 0`` (and ``t <= T``
        for sampled functions).
    """
    f = as_function(f)
    t, scalar = _as_points(t)

    if p.is_identity():
        return _finish(np.asarray(f(t), dtype=np.float64), scalar)
    if p.mu <= 0:
        raise DomainError(f"Prabhakar integral needs mu > 0, got {p.mu}")
    if np.any(t <= 0):
        raise DomainError("Prabhakar integral is evaluated for t > 0")

    if isinstance(f, SampledFunction):
        if np.any(t > f.t_max):
            raise DomainError(f"t exceeds the sampled interval [0, {f.t_max}]")
        return _finish(_product_integral(p, f, t, ctl), scalar)
    return _finish(_graded_integral(p, f, t, q, ctl), scalar)

# }}}


# {{{ derivatives

def _next_power(lead: float, rho: float) -> float:
    """Leading exponent of a function behaving like ``c0 t**lead + ...``.

    When ``lead == 0`` the constant carries no singularity and the first
    varying term is of order ``t**min(rho, 1)``.
    """
    if abs(lead) < 1e-12:
        return min(rho, 1.0)
    return lead


def _sampled_envelope(f: SampledFunction, t: np.ndarray) -> None:
    t_lo = 5.0 * f.h_min
    t_hi = f.t_max - 2.0 * f.h_max
    if np.any(t < t_lo) or np.any(t > t_hi):
        raise DomainError(
            f"t must lie in [{t_lo:.6g}, {t_hi:.6g}] for the difference stencil "
            f"(minimum admissible t = {t_lo:.6g})"
        )


def hp_derivative(h: HilferOrder, base: BaseParams, f, t,
                  q: QuadratureConfig = DEFAULT_QUADRATURE,
                  ctl: SeriesControl = DEFAULT_CONTROL,
                  derivative_power: float | None = None):
    r"""Hilfer-Prabhakar derivative of order ``mu`` and type ``nu``.

    Computes the outer Prabhakar integral (order ``nu (1 - mu)``, upper
    parameter ``-gamma nu``) of the time derivative of the inner Prabhakar
    integral (order ``(1 - nu)(1 - mu)``, upper parameter
    ``-gamma (1 - nu)``) of ``f``.

    For callables, ``derivative_power`` overrides the guessed leading
    exponent of the differentiated inner stage near ``t = 0``.
    """
    f = as_function(f)
    t, scalar = _as_points(t)
    if np.any(t <= 0):
        raise DomainError("derivative is evaluated for t > 0")
    inner, outer = hp_stages(h, base)

    if isinstance(f, SampledFunction):
        _sampled_envelope(f, t)
        grid = f.grid
        if inner.is_identity():
            fin = f.values
        else:
            fin = np.empty_like(grid)
            fin[0] = 0.0
            fin[1:] = _product_integral(inner, f, grid[1:], ctl)
        deriv = SampledFunction(grid, grid_derivative(grid, fin))
        if outer.is_identity():
            return _finish(deriv(t), scalar)
        return _finish(_product_integral(outer, deriv, t, ctl), scalar)

    t_top = float(np.max(t)) * (1.0 + 3.0 * q.diff_step)
    if inner.is_identity():
        if f.derivative is not None:
            deriv_func = f.derivative
        else:
            def deriv_func(y):
                return relative_difference(f, y, q.diff_step)
        power = f.derivative_leading_power
    else:
        table = GradedTable(lambda y: _graded_integral(inner, f, y, q, ctl), t_top,
                            q.table_ratio, q.table_levels, q.table_nodes,
                            power=inner.mu + f.power)

        def deriv_func(y):
            return relative_difference(table, y, q.diff_step)
        power = _next_power(inner.mu + f.power, base.rho) - 1.0

    if derivative_power is not None:
        power = derivative_power
    deriv = CallableFunction(deriv_func, power=power)
    if outer.is_identity():
        return _finish(np.asarray(deriv(t)), scalar)
    return _finish(_graded_integral(outer, deriv, t, q, ctl), scalar)


def hp_derivative_regularized(mu: float, base: BaseParams, f, t,
                              q: QuadratureConfig = DEFAULT_QUADRATURE,
                              ctl: SeriesControl = DEFAULT_CONTROL):
    r"""Regularized (Caputo-like) Hilfer-Prabhakar derivative.

    One Prabhakar integral of order ``1 - mu`` with upper parameter
    ``-gamma`` applied to ``f'``; independent of the type ``nu``. The operand
    must declare ``ac1=True``.
    """
    HilferOrder(mu)
    f = as_function(f)
    if not f.ac1:
        raise DomainError("regularized derivative requires an operand flagged ac1=True")
    t, scalar = _as_points(t)
    if np.any(t <= 0):
        raise DomainError("derivative is evaluated for t > 0")
    p = base.with_order(1.0 - mu, -base.gamma_upper + 0.0)

    if isinstance(f, SampledFunction):
        if np.any(t > f.t_max):
            raise DomainError(f"t exceeds the sampled interval [0, {f.t_max}]")
        deriv = SampledFunction(f.grid, grid_derivative(f.grid, f.values))
        return _finish(_product_integral(p, deriv, t, ctl), scalar)

    if f.derivative is not None:
        deriv_func = f.derivative
    else:
        def deriv_func(y):
            return relative_difference(f, y, q.diff_step)
    deriv = CallableFunction(deriv_func, power=f.derivative_leading_power)
    return _finish(_graded_integral(p, deriv, t, q, ctl), scalar)

# }}}


# {{{ weighted initial value

def _limit_exponents(lead: float, rho: float) -> tuple[float, float]:
    cands = sorted({round(lead + c, 12) for c in (0.0, rho, 1.0, 2 * rho, rho + 1.0, 2.0)})
    cands = [c for c in cands if c > 1e-9]
    return cands[0], cands[1]


def _richardson(ts: np.ndarray, vals: np.ndarray, e1: float, e2: float) -> float:
    a = np.stack([np.ones(3), ts**e1, ts**e2], axis=1)
    scale = np.max(np.abs(a), axis=0)
    return float(np.linalg.solve(a / scale, vals)[0])


def _limit_probes(e1: float, e2: float, q: QuadratureConfig) -> np.ndarray:
    """Four points at which ``t**e1`` drops tenfold from one to the next.

    The first point is also small enough that ``t**(e2 - e1) <= 1e-8``, so
    that terms beyond the two eliminated ones cannot be seen. Small
    exponents lead to very small points, which the scale-free graded
    quadrature handles without loss.
    """
    t0 = min(q.limit_probe, 10.0 ** (-1.0 / e1), 10.0 ** (-8.0 / (e2 - e1)))
    ts = t0 * 10.0 ** (-np.arange(4) / e1)
    return np.maximum(ts, _SMALLEST_PROBE)


def initial_weighted_limit(h: HilferOrder, base: BaseParams, f,
                           q: QuadratureConfig = DEFAULT_QUADRATURE,
                           ctl: SeriesControl = DEFAULT_CONTROL,
                           exponents: tuple[float, float] | None = None) -> float:
    r"""Limit of the inner Prabhakar integral of ``f`` as ``t -> 0+``.

    The inner stage is sampled at three small points and extrapolated by
    Richardson elimination of its two leading powers of ``t``, which follow
    from the declared leading exponent of ``f`` and from ``rho``. A second
    extrapolation from the next three points checks that the value settled.

    For sampled operands the points are the smallest positive grid points.
    For callables they start below ``limit_probe`` and are spaced so that
    the leading power drops tenfold per point (see :func:`_limit_probes`).
    ``exponents`` overrides the two powers eliminated, for operands whose
    expansion is known.

    :raises IndeterminateLimitError: if the two extrapolations disagree by
        more than ``q.limit_tol``.
    """
    f = as_function(f)
    inner, _ = hp_stages(h, base)

    if isinstance(f, SampledFunction):
        lead = inner.mu
    else:
        lead = inner.mu + f.power
    e1, e2 = exponents if exponents is not None else _limit_exponents(lead, base.rho)
    ts = f.grid[1:5] if isinstance(f, SampledFunction) else _limit_probes(e1, e2, q)

    if inner.is_identity():
        vals = np.asarray(f(ts), dtype=np.float64)
    else:
        vals = np.asarray(prabhakar_integral(inner, f, ts, q, ctl), dtype=np.float64)

    k0 = _richardson(ts[:3], vals[:3], e1, e2)
    k1 = _richardson(ts[1:], vals[1:], e1, e2)
    if abs(k0 - k1) > q.limit_tol * max(1.0, abs(k0)):
        raise IndeterminateLimitError(
            f"extrapolations {k0:.6g} and {k1:.6g} differ by more than {q.limit_tol:g}",
            vals[:3],
        )
    return k0

# }}}

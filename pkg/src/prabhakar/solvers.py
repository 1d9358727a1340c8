r"""Series solutions of four Cauchy problems for Hilfer-Prabhakar equations.

* :func:`solve_ode`: the linear equation
  :math:`D^{\gamma,\mu,\nu}_{\rho,\omega} y = \lambda E^{\delta}_{\rho,\mu,\omega} y + f`
  with weighted initial datum ``K``.
* :func:`solve_pgf`: the generating function of a Prabhakar-type counting
  process, governed by the regularized derivative with frequency ``-omega``.
* :func:`solve_diffusion_hp` and :func:`solve_diffusion_reg`: the diffusion
  equation :math:`D_t u = K u_{xx}` on the line with either derivative,
  solved by Fourier synthesis of a power series in ``-K p**2``.

Every series is summed term by term under :class:`SeriesControl`, with a
ratio monitor that reports divergence instead of summing silently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from prabhakar.errors import (
    DomainError,
    PrabhakarError,
    PrecisionWarning,
    SeriesDivergenceError,
    SeriesTruncationError,
)
from prabhakar.functions import CallableFunction, Function, as_function
from prabhakar.kernels import PrabhakarParams, kernel_eval
from prabhakar.mlfn import CANCELLATION_RATIO, MLParams, SeriesControl, ml3
from prabhakar.operators import BaseParams, HilferOrder, prabhakar_integral
from prabhakar.quadrature import DEFAULT_QUADRATURE, GradedTable, QuadratureConfig
from prabhakar.transforms import DEFAULT_GRID, FrequencyGrid, fourier_forward

SOLVER_CONTROL = SeriesControl(max_terms=200)
# consecutive growing term ratios that count as divergence
DIVERGENCE_RUN = 3
# imaginary part tolerated in the synthesis of an even datum
IMAG_TOL = 1.0e-8
# noise allowed at a frequency node, relative to max |g_hat|
NODE_NOISE_TOL = 1.0e-12


# {{{ series bookkeeping

class _SeriesState:
    """Term-by-term summation over an array of points.

    A point converges after ``ctl.consecutive_small`` consecutive terms at
    most ``rel_tol`` times its running sum; later terms are not added. It
    diverges when ``DIVERGENCE_RUN`` consecutive term ratios are at least
    one and non-decreasing. Entire-function series, whose ratios eventually
    fall like a reciprocal power of ``n``, never trip this test even while
    their terms still grow.
    """

    def __init__(self, shape, ctl: SeriesControl) -> None:
        self.ctl = ctl
        self.total = np.zeros(shape)
        self.peak = np.zeros(shape)
        self.done = np.zeros(shape, dtype=bool)
        self.diverged = np.zeros(shape, dtype=bool)
        self._nsmall = np.zeros(shape, dtype=np.int64)
        self._prev = np.full(shape, np.nan)
        self._prev_ratio = np.zeros(shape)
        self._growing = np.zeros(shape, dtype=np.int64)
        self.n_terms = 0

    @property
    def active(self) -> np.ndarray:
        return ~(self.done | self.diverged)

    def add(self, term: np.ndarray) -> bool:
        """Add one term; return ``True`` once no point is still summing."""
        term = np.broadcast_to(term, self.total.shape)
        act = self.active
        absterm = np.abs(term)
        self.total = np.where(act, self.total + term, self.total)
        self.peak = np.where(act, np.maximum(self.peak, absterm), self.peak)

        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = absterm / self._prev
        grows = np.isfinite(ratio) & (ratio >= 1.0) & (ratio >= self._prev_ratio)
        self._growing = np.where(grows, self._growing + 1, 0)
        self._prev_ratio = np.where(np.isfinite(ratio), ratio, 0.0)
        self._prev = np.where(absterm > 0, absterm, np.nan)
        self.diverged |= act & (self._growing >= DIVERGENCE_RUN)
        self.diverged |= act & ~np.isfinite(self.total)

        small = absterm <= self.ctl.rel_tol * np.abs(self.total)
        self._nsmall = np.where(small, self._nsmall + 1, 0)
        self.done |= act & (self._nsmall >= self.ctl.consecutive_small)
        self.n_terms += 1
        return not np.any(self.active)

    def check(self, what: str) -> np.ndarray:
        """Return the sums, raising if any point diverged or did not converge."""
        if np.any(self.diverged):
            raise SeriesDivergenceError(
                f"{what}: term ratios grew for {DIVERGENCE_RUN} consecutive terms; "
                "parameters lie outside the convergence envelope",
                partial_sum=self.total,
            )
        if not np.all(self.done):
            raise SeriesTruncationError(
                f"{what}: no convergence within {self.ctl.max_terms} terms",
                float(np.max(np.abs(self.total[~self.done]))),
                partial_sum=self.total,
            )
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.max(self.peak / np.abs(self.total)) if self.total.size else 0.0
        if ratio > CANCELLATION_RATIO:
            warnings.warn(
                f"{what}: largest term exceeds the sum by {ratio:.1e}; "
                "cancellation may have destroyed significant digits",
                PrecisionWarning,
                stacklevel=3,
            )
        return self.total


def _points(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be positive and finite")
    return arr


def _finish(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def tabulate(func: Callable, t_max: float, power: float,
             q: QuadratureConfig = DEFAULT_QUADRATURE) -> CallableFunction:
    """Wrap an expensive function of ``t`` in a graded Chebyshev table.

    Operators applied to a solution evaluate it at very many points; the
    table replaces those evaluations with interpolation. ``power`` is the
    leading exponent at ``t = 0`` passed on to the quadrature.
    """
    table = GradedTable(func, t_max, q.table_ratio, q.table_levels, q.table_nodes, power)
    return CallableFunction(table, power=power)

# }}}


# {{{ linear equation with weighted initial datum

@dataclass(frozen=True)
class OdeProblem:
    """``D^{gamma,mu,nu}_{rho,omega} y = lam E^delta_{rho,mu,omega} y + f``.

    ``K`` is the limit at ``0+`` of the inner Prabhakar integral of ``y``;
    ``f=None`` means a zero source.
    """

    order: HilferOrder
    base: BaseParams
    delta: float = 0.0
    lam: float = 0.0
    K: float = 0.0
    f: Function | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.delta < 0 or self.K < 0 or self.base.gamma_upper < 0:
            raise DomainError("delta, K and gamma_upper must be non-negative")
        if not math.isfinite(self.lam):
            raise DomainError("lam must be finite")
        if self.f is not None:
            object.__setattr__(self, "f", as_function(self.f))

    @property
    def leading_power(self) -> float:
        """Leading exponent of ``y`` at ``0+``."""
        mu, nu = self.order.mu, self.order.nu
        powers = []
        if self.K != 0.0:
            powers.append(nu * (1.0 - mu) + mu - 1.0)
        if self.f is not None:
            powers.append(mu + getattr(self.f, "power", 0.0))
        return min(powers) if powers else 0.0


def solve_ode(prob: OdeProblem, x, ctl: SeriesControl = SOLVER_CONTROL,
              q: QuadratureConfig = DEFAULT_QUADRATURE):
    r"""Evaluate the series solution at ``x > 0``.

    .. math::

        y = K \sum_n \lambda^n e^{\gamma(1-\nu) + n(\delta+\gamma)}_{\rho,\,
            \nu(1-\mu) + (2n+1)\mu,\,\omega}(x)
          + \sum_n \lambda^n \mathbf{E}^{\gamma + n(\delta+\gamma)}_{\rho,(2n+1)\mu,\omega} f(x)

    :raises SeriesDivergenceError: if the term ratios grow.
    :raises SeriesTruncationError: if ``ctl.max_terms`` terms do not converge.
    """
    x = _points(x, "x")
    mu, nu = prob.order.mu, prob.order.nu
    rho, omega, g = prob.base.rho, prob.base.omega, prob.base.gamma_upper
    growth = prob.delta + g
    state = _SeriesState(x.shape, ctl)

    for n in range(ctl.max_terms):
        coeff = prob.lam**n
        term = np.zeros(x.shape)
        if coeff != 0.0:
            if prob.K != 0.0:
                p = PrabhakarParams(rho, nu * (1 - mu) + (2 * n + 1) * mu, omega,
                                    g * (1 - nu) + n * growth)
                term = term + prob.K * coeff * kernel_eval(p, x, ctl)
            if prob.f is not None:
                p = PrabhakarParams(rho, (2 * n + 1) * mu, omega, g + n * growth)
                term = term + coeff * prabhakar_integral(p, prob.f, x, q, ctl)
        if state.add(term):
            break
    return _finish(state.check("linear equation series"))


def tabulate_ode(prob: OdeProblem, x_max: float, ctl: SeriesControl = SOLVER_CONTROL,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> CallableFunction:
    """The solution on ``(0, x_max]`` as a tabulated callable."""
    return tabulate(lambda x: solve_ode(prob, x, ctl, q), x_max, prob.leading_power, q)

# }}}


# {{{ generating function

@dataclass(frozen=True)
class PgfProblem:
    """Generating-function problem with rate ``lam`` and Prabhakar memory."""

    rho: float
    omega: float
    gamma_upper: float
    mu: float
    lam: float

    def __post_init__(self) -> None:
        if not 0 < self.rho <= 1:
            raise DomainError(f"rho must lie in (0, 1], got {self.rho}")
        if not 0 < self.mu <= 1:
            raise DomainError(f"mu must lie in (0, 1], got {self.mu}")
        if not self.lam > 0:
            raise DomainError(f"lam must be positive, got {self.lam}")
        if self.gamma_upper < 0:
            raise DomainError("gamma_upper must be non-negative")
        if not math.isfinite(self.omega):
            raise DomainError("omega must be finite")

    @property
    def derivative_base(self) -> BaseParams:
        """Parameters of the governing regularized derivative (frequency ``-omega``)."""
        return BaseParams(self.rho, -self.omega, self.gamma_upper)


def _check_v(v: float) -> None:
    if not abs(v) <= 1:
        raise DomainError(f"|v| must not exceed 1, got {v}")


def _pgf_sum(prob: PgfProblem, v: float, t: np.ndarray, ctl: SeriesControl,
             derivative: bool) -> np.ndarray:
    c = -prob.lam * (1.0 - v)
    z = -prob.omega * t**prob.rho
    state = _SeriesState(t.shape, ctl)
    for n in range(ctl.max_terms):
        if n > 0 and c == 0.0:
            term = np.zeros(t.shape)
        elif derivative:
            # d/dt t^(n mu) E^{n gamma}_{rho, n mu + 1} = t^(n mu - 1) E^{n gamma}_{rho, n mu}
            if n == 0:
                term = np.zeros(t.shape)
            else:
                p = MLParams(prob.rho, n * prob.mu, n * prob.gamma_upper)
                term = c**n * t ** (n * prob.mu - 1.0) * ml3(p, z, ctl)
        else:
            p = MLParams(prob.rho, n * prob.mu + 1.0, n * prob.gamma_upper)
            term = c**n * t ** (n * prob.mu) * ml3(p, z, ctl)
        if state.add(term):
            break
    return state.check("generating-function series")


def solve_pgf(prob: PgfProblem, v: float, t, ctl: SeriesControl = SOLVER_CONTROL):
    r"""``G(v, t) = sum_n (-lam (1-v))^n t^(n mu) E^{n gamma}_{rho, n mu + 1}(-omega t^rho)``.

    At ``v = 1`` only the ``n = 0`` term survives and ``G = 1`` exactly.
    Values outside ``[0, 1]`` for ``v`` in ``[0, 1]`` are flagged with a
    :class:`PrecisionWarning`, since positivity is not guaranteed for every
    parameter set.
    """
    _check_v(v)
    t = _points(t, "t")
    out = _pgf_sum(prob, v, t, ctl, derivative=False)
    if 0 <= v <= 1 and np.any((out < -1e-12) | (out > 1 + 1e-12)):
        warnings.warn(
            f"generating function left [0, 1] (range {out.min():.3g}..{out.max():.3g})",
            PrecisionWarning,
            stacklevel=2,
        )
    return _finish(out)


def pgf_time_derivative(prob: PgfProblem, v: float, t, ctl: SeriesControl = SOLVER_CONTROL):
    """Term-wise time derivative of :func:`solve_pgf`."""
    _check_v(v)
    t = _points(t, "t")
    return _finish(_pgf_sum(prob, v, t, ctl, derivative=True))


def pgf_function(prob: PgfProblem, v: float,
                 ctl: SeriesControl = SOLVER_CONTROL) -> CallableFunction:
    """``t -> G(v, t)`` as an absolutely continuous operand with exact derivative."""
    return CallableFunction(
        lambda t: solve_pgf(prob, v, t, ctl),
        ac1=True,
        derivative=lambda t: pgf_time_derivative(prob, v, t, ctl),
        derivative_power=prob.mu - 1.0,
    )

# }}}


# {{{ diffusion

def standard_normal(x):
    return np.exp(-0.5 * np.asarray(x) ** 2) / math.sqrt(2.0 * math.pi)


def standard_normal_hat(p):
    return np.exp(-0.5 * np.asarray(p) ** 2)


@dataclass(frozen=True)
class DiffusionProblem:
    """``D_t u = K_diff u_xx`` on the line with datum ``g``.

    ``nu`` is used by the Hilfer-Prabhakar variant only. ``g_hat``, when
    given, is the analytic Fourier image and replaces the numerical forward
    transform. ``even`` asserts that ``g`` is even, which makes the synthesis
    real; its imaginary residue is then checked.
    """

    rho: float
    omega: float = 0.0
    gamma_upper: float = 0.0
    mu: float = 0.5
    nu: float = 0.0
    K_diff: float = 1.0
    g: Callable = field(default=standard_normal, compare=False)
    g_hat: Callable | None = field(default=standard_normal_hat, compare=False)
    even: bool = True

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not 0 < self.mu <= 1:
            raise DomainError(f"mu must lie in (0, 1], got {self.mu}")
        if not 0 <= self.nu <= 1:
            raise DomainError(f"nu must lie in [0, 1], got {self.nu}")
        if self.K_diff < 0 or self.gamma_upper < 0:
            raise DomainError("K_diff and gamma_upper must be non-negative")
        if not math.isfinite(self.omega):
            raise DomainError("omega must be finite")

    @property
    def hp_beta0(self) -> float:
        """Exponent ``mu + nu (1 - mu)`` of the leading time factor."""
        return self.mu + self.nu * (1.0 - self.mu)


def _hp_coefficient(prob: DiffusionProblem, n: int, t: np.ndarray, ctl) -> np.ndarray:
    beta = prob.mu * (n + 1) + prob.nu * (1.0 - prob.mu)
    p = MLParams(prob.rho, beta, prob.gamma_upper * (n + 1 - prob.nu))
    return t ** (beta - 1.0) * ml3(p, prob.omega * t**prob.rho, ctl)


def _reg_coefficient(prob: DiffusionProblem, n: int, t: np.ndarray, ctl) -> np.ndarray:
    p = MLParams(prob.rho, n * prob.mu + 1.0, n * prob.gamma_upper)
    return t ** (n * prob.mu) * ml3(p, prob.omega * t**prob.rho, ctl)


@dataclass
class DiffusionDiagnostics:
    """Side information from the last synthesis.

    ``tail_bound`` bounds the dropped part of the ``p``-integral, assuming
    the time series at a dropped node is no larger than at the retained ones.
    """

    dropped_nodes: int = 0
    tail_bound: float = 0.0


def _time_series(coef, prob: DiffusionProblem, t: np.ndarray, p: np.ndarray,
                 ctl: SeriesControl) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sum ``sum_n a_n(t) (-K p^2)^n`` on the ``(t, p)`` product grid.

    Returns the sums, a mask of nodes that converged, and the peak term.
    """
    z = -prob.K_diff * p**2
    logz = np.log(np.abs(z), where=z != 0, out=np.full(z.shape, -np.inf))
    state = _SeriesState((len(t), len(p)), ctl)
    for n in range(ctl.max_terms):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PrecisionWarning)
            try:
                a = coef(prob, n, t, ctl)
            except PrabhakarError:
                state.diverged |= state.active
                break
        if n == 0:
            term = np.broadcast_to(a[:, None], state.total.shape)
        else:
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                mag = np.exp(np.log(np.abs(a))[:, None] + n * logz[None, :])
                term = np.sign(a)[:, None] * np.sign(z)[None, :] ** n * mag
            term = np.where(np.isnan(term), 0.0, term)
        if state.add(term):
            break
    return state.total, state.done & ~state.diverged, state.peak


def _synthesize(coef, prob: DiffusionProblem, x, t, grid: FrequencyGrid,
                ctl: SeriesControl, diag: DiffusionDiagnostics | None):
    x = np.asarray(x, dtype=np.float64)
    t = _points(t, "t")
    xb, tb = np.broadcast_arrays(x, t)
    shape = xb.shape
    xf, tf = xb.ravel(), tb.ravel()

    p = grid.nodes
    if prob.g_hat is not None:
        g_hat = np.asarray(prob.g_hat(p), dtype=np.complex128)
    else:
        g_hat = fourier_forward(prob.g, grid)
    scale = max(float(np.max(np.abs(g_hat))), 1e-300)

    tu, inverse = np.unique(tf, return_inverse=True)
    series, ok, peak = _time_series(coef, prob, tu, p, ctl)
    eps = np.finfo(float).eps
    # nodes whose sum did not converge, or whose rounding noise would
    # exceed the node tolerance, are dropped from the synthesis
    # series size at each t, from the nodes that converged
    level = np.max(np.where(ok, np.abs(series), 0.0), axis=1, keepdims=True)
    keep = ok & (np.abs(g_hat)[None, :] * peak * eps <= NODE_NOISE_TOL * scale * level)
    weighted = np.where(keep, g_hat[None, :] * series, 0.0)

    dropped = int(np.sum(~keep))
    lost = np.sum(np.where(keep, 0.0, np.abs(g_hat)[None, :]), axis=1)
    tail = float(np.max(lost * level[:, 0])) * grid.spacing / (2.0 * math.pi)
    mass = float(np.sum(np.abs(g_hat)))
    fraction = float(np.max(lost)) / mass if mass > 0 else 0.0
    if diag is not None:
        diag.dropped_nodes, diag.tail_bound = dropped, tail
    if dropped and fraction > NODE_NOISE_TOL:
        warnings.warn(
            f"{dropped} frequency node(s) dropped from the synthesis; "
            f"estimated tail bound {tail:.2e}",
            PrecisionWarning,
            stacklevel=3,
        )

    phase = np.exp(1j * np.outer(xf, p))
    u = np.sum(phase * (grid.weights * weighted[inverse]), axis=1) / (2.0 * math.pi)
    if prob.even:
        resid = np.max(np.abs(u.imag)) if u.size else 0.0
        if resid > IMAG_TOL * max(1.0, float(np.max(np.abs(u.real)))):
            raise PrabhakarError(
                f"imaginary residue {resid:.2e} exceeds {IMAG_TOL:g} for an even datum"
            )
    return _finish(u.real.reshape(shape))


def solve_diffusion_hp(prob: DiffusionProblem, x, t, grid: FrequencyGrid = DEFAULT_GRID,
                       ctl: SeriesControl = SOLVER_CONTROL,
                       diag: DiffusionDiagnostics | None = None):
    r"""Solution with the Hilfer-Prabhakar derivative and weighted datum ``g``.

    .. math::

        u = \frac{1}{2\pi} \int e^{ipx} \hat g(p) \sum_n (-K p^2)^n
            t^{\beta_n - 1} E^{\gamma(n+1-\nu)}_{\rho,\beta_n}(\omega t^\rho)\,dp,
        \quad \beta_n = \mu(n+1) + \nu(1-\mu).

    For each frequency node the ``n``-series is summed first and the
    ``p``-integral is then taken on ``grid``. ``x`` and ``t`` broadcast.
    """
    if prob.mu >= 1:
        raise DomainError("the Hilfer-Prabhakar variant needs mu < 1")
    return _synthesize(_hp_coefficient, prob, x, t, grid, ctl, diag)


def solve_diffusion_reg(prob: DiffusionProblem, x, t, grid: FrequencyGrid = DEFAULT_GRID,
                        ctl: SeriesControl = SOLVER_CONTROL,
                        diag: DiffusionDiagnostics | None = None):
    r"""Solution with the regularized derivative and ``u(x, 0+) = g``.

    .. math::

        u = \frac{1}{2\pi} \int e^{ipx} \hat g(p) \sum_n (-K p^2)^n
            t^{n\mu} E^{n\gamma}_{\rho, n\mu+1}(\omega t^\rho)\,dp.

    ``mu = 1`` is accepted and, with ``gamma_upper = 0``, gives the heat
    equation.
    """
    return _synthesize(_reg_coefficient, prob, x, t, grid, ctl, diag)

# }}}

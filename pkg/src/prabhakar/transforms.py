r"""Numerical Sumudu transform, transform-domain symbols and a Fourier pair.

Sumudu transform:

.. math::

    S[f](u) = \frac{1}{u} \int_0^\infty e^{-t/u} f(t)\,dt
            = \int_0^\infty e^{-x} f(u x)\,dx.

Fourier convention: :math:`\hat g(p) = \int e^{-ipx} g(x)\,dx` and
:math:`g(x) = \frac{1}{2\pi}\int \hat g(p) e^{ipx}\,dp`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from prabhakar.errors import DomainError, EnvelopeError, PrecisionWarning
from prabhakar.functions import CallableFunction, SampledFunction, as_function
from prabhakar.kernels import branch_factor
from prabhakar.operators import BaseParams, HilferOrder
from prabhakar.quadrature import DEFAULT_QUADRATURE, QuadratureConfig, graded_rule, laguerre_rule

DEFAULT_LAGUERRE_NODES = 64
# relative size of the last Laguerre contribution that signals non-decay
DECAY_TOL = 1.0e-10
# Laguerre nodes with smaller weights cannot affect a double-precision result
MIN_LAGUERRE_WEIGHT = 1.0e-50


# {{{ Sumudu

def _sumudu_nodes(u: float, n_nodes: int, power: float, horizon: float | None,
                  q: QuadratureConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Points ``t``, weights and power divisors of the rule at one ``u``.

    The transform is ``sum(w * f(t) / d)``; the last ``n_tail`` entries are
    the Gauss-Laguerre part.
    """
    # [0, 1]: graded rule with the declared power at the origin
    x, _, w = graded_rule(power, 0.0, q)
    t_head = u * x
    w_head = u**power * w * np.exp(-x)
    d_head = t_head**power if power != 0.0 else np.ones_like(x)

    # [1, oo): Gauss-Laguerre on the shifted variable
    y, wl = laguerre_rule(n_nodes)
    keep = wl >= MIN_LAGUERRE_WEIGHT
    xs, wl = 1.0 + y[keep], wl[keep]
    if horizon is not None:
        if math.exp(-horizon / u) > DECAY_TOL:
            raise EnvelopeError(
                f"horizon {horizon} too short for u={u}: e^(-T/u) = {math.exp(-horizon / u):.2e}"
            )
        inside = u * xs <= horizon
        xs, wl = xs[inside], wl[inside]
    return (np.concatenate([t_head, u * xs]),
            np.concatenate([w_head, math.exp(-1.0) * wl]),
            np.concatenate([d_head, np.ones_like(xs)]),
            len(xs))


def _sumudu_reduce(u: float, fx: np.ndarray, w: np.ndarray, d: np.ndarray, n_tail: int) -> float:
    contrib = w * fx / d
    total = float(np.sum(contrib))
    if n_tail and abs(contrib[-1]) > DECAY_TOL * max(abs(total), 1e-300):
        raise EnvelopeError(
            f"integrand does not decay at u={u}: last Laguerre contribution "
            f"{abs(contrib[-1]):.2e} vs total {abs(total):.2e}"
        )
    if not math.isfinite(total):
        raise EnvelopeError(f"non-finite Sumudu transform at u={u}")
    return total


def sumudu_numeric(f, u, n_nodes: int = DEFAULT_LAGUERRE_NODES, *,
                   power: float | None = None, horizon: float | None = None,
                   q: QuadratureConfig = DEFAULT_QUADRATURE):
    """Numerical Sumudu transform of ``f`` at ``u > 0``.

    The integral over ``x`` in ``[0, 1]`` uses the graded Gauss-Jacobi rule,
    with ``power`` (defaulting to the callable's declared leading exponent)
    as the weight at the origin; ``[1, oo)`` uses ``n_nodes``-point
    Gauss-Laguerre. ``horizon`` drops nodes with ``u x > horizon`` for
    functions only known on ``[0, horizon]``; it is rejected unless
    ``exp(-horizon/u)`` is negligible. ``f`` is called once, on the nodes
    for all requested ``u`` together.

    :raises EnvelopeError: if the integrand fails to decay.
    """
    f = as_function(f)
    if isinstance(f, SampledFunction):
        horizon = f.t_max if horizon is None else min(horizon, f.t_max)
        f = CallableFunction(f)
    if power is None:
        power = f.power
    if n_nodes < 1:
        raise DomainError("n_nodes must be positive")

    uarr = np.asarray(u, dtype=np.float64)
    if np.any(uarr <= 0) or not np.all(np.isfinite(uarr)):
        raise DomainError("Sumudu variable must be positive and finite")
    rules = [_sumudu_nodes(float(ui), n_nodes, power, horizon, q) for ui in uarr.ravel()]
    points = np.concatenate([r[0] for r in rules])
    with warnings.catch_warnings():
        # digits lost far out in the tail are weighted by e^(-x)
        warnings.simplefilter("ignore", PrecisionWarning)
        fx = np.asarray(f(points), dtype=np.float64)

    out = np.empty(len(rules))
    start = 0
    for i, (ui, (pts, w, d, n_tail)) in enumerate(zip(uarr.ravel(), rules)):
        out[i] = _sumudu_reduce(float(ui), fx[start:start + len(pts)], w, d, n_tail)
        start += len(pts)
    out = out.reshape(uarr.shape)
    return float(out) if out.ndim == 0 else out


def convolve(f, g, t, q: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """``(f * g)(t) = int_0^t f(tau) g(t - tau) dtau`` by graded quadrature."""
    f, g = as_function(f), as_function(g)
    pf = getattr(f, "power", 0.0)
    pg = getattr(g, "power", 0.0)
    x, xc, w = graded_rule(pf, pg, q)
    t = np.asarray(t, dtype=np.float64)
    tb = t.reshape(-1, 1)
    a, b = tb * x, tb * xc
    fa, gb = f(a), g(b)
    if pf != 0.0:
        fa = fa / a**pf
    if pg != 0.0:
        gb = gb / b**pg
    out = tb[:, 0] ** (1.0 + pf + pg) * np.sum(w * fa * gb, axis=1)
    return out.reshape(t.shape)


def verify_convolution(f, g, u, n_nodes: int = DEFAULT_LAGUERRE_NODES,
                       q: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Return ``(S[f*g](u), u S[f](u) S[g](u))`` for comparison by the caller."""
    f, g = as_function(f), as_function(g)
    power = getattr(f, "power", 0.0) + getattr(g, "power", 0.0) + 1.0
    fg = CallableFunction(lambda t: convolve(f, g, t, q), power=power)
    lhs = sumudu_numeric(fg, u, n_nodes, q=q)
    rhs = u * sumudu_numeric(f, u, n_nodes, q=q) * sumudu_numeric(g, u, n_nodes, q=q)
    return float(lhs), float(rhs)


def sumudu_hp_symbol(h: HilferOrder, base: BaseParams, F_u, init_K, u):
    """Sumudu image of the Hilfer-Prabhakar derivative.

    ``u**-mu (1 - omega u**rho)**gamma F(u)
    - u**(nu (1 - mu) - 1) (1 - omega u**rho)**(gamma nu) K``
    """
    b = branch_factor(base.rho, base.omega, u)
    u = np.asarray(u, dtype=np.float64)
    g, mu, nu = base.gamma_upper, h.mu, h.nu
    out = u**-mu * b**g * F_u - u ** (nu * (1 - mu) - 1) * b ** (g * nu) * init_K
    return float(out) if np.ndim(out) == 0 else out


def sumudu_hpreg_symbol(mu: float, base: BaseParams, F_u, f0, u):
    """Sumudu image of the regularized derivative, ``u**-mu (1-omega u**rho)**gamma (F - f0)``."""
    HilferOrder(mu)
    b = branch_factor(base.rho, base.omega, u)
    u = np.asarray(u, dtype=np.float64)
    out = u**-mu * b**base.gamma_upper * (F_u - f0)
    return float(out) if np.ndim(out) == 0 else out

# }}}


# {{{ Fourier

@dataclass(frozen=True)
class FrequencyGrid:
    """Midpoint nodes on ``[-p_max, p_max]`` for the inverse Fourier integral.

    ``x_max`` is the largest ``|x|`` the grid is meant to resolve; the node
    spacing must not exceed ``pi / (4 x_max)``, which keeps the aliasing
    period ``2 pi / dp`` at eight times the target range.
    """

    p_max: float = 10.0
    n_p: int = 512
    x_max: float = 16.0
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.p_max <= 0 or self.x_max <= 0:
            raise DomainError("p_max and x_max must be positive")
        if self.n_p < 2 or self.n_p % 2:
            raise DomainError("n_p must be a positive even integer")
        dp = 2.0 * self.p_max / self.n_p
        if dp > math.pi / (4.0 * self.x_max) * (1 + 1e-12):
            raise DomainError(
                f"frequency spacing {dp:.4g} exceeds pi/(4 x_max) = "
                f"{math.pi / (4 * self.x_max):.4g}; increase n_p or reduce x_max"
            )
        p = -self.p_max + dp * (np.arange(self.n_p) + 0.5)
        object.__setattr__(self, "nodes", p)
        object.__setattr__(self, "weights", np.full(self.n_p, dp))

    @property
    def spacing(self) -> float:
        return 2.0 * self.p_max / self.n_p


DEFAULT_GRID = FrequencyGrid()


def fourier_forward(g, grid: FrequencyGrid = DEFAULT_GRID, *, x_max: float | None = None,
                    panel: float = 1.0, panel_nodes: int = 24,
                    tail_tol: float = 1.0e-12) -> np.ndarray:
    """Sample ``hat g(p) = int exp(-i p x) g(x) dx`` on the grid nodes.

    Composite Gauss-Legendre on panels of width ``panel`` covering
    ``[-x_max, x_max]`` (default: the grid's ``x_max``). Panel edges sit on
    multiples of ``panel``, so data with jumps there are integrated exactly.

    :raises EnvelopeError: if ``|g|`` at the truncation points exceeds
        ``tail_tol`` times its maximum.
    """
    x_max = grid.x_max if x_max is None else x_max
    n_panels = int(math.ceil(2 * x_max / panel))
    edges = -x_max + panel * np.arange(n_panels + 1)
    xl, wl = special.roots_legendre(panel_nodes)
    a, b = edges[:-1, None], edges[1:, None]
    x = (0.5 * (b - a) * (xl + 1.0) + a).ravel()
    w = (0.5 * (b - a) * wl).ravel()

    gx = np.asarray(g(x), dtype=np.complex128)
    edge_vals = np.abs(np.asarray(g(np.array([-x_max, x_max])), dtype=np.complex128))
    scale = max(np.max(np.abs(gx)), 1e-300)
    if np.max(edge_vals) > tail_tol * scale:
        raise EnvelopeError(
            f"g is not negligible at |x| = {x_max}: {np.max(edge_vals):.2e} "
            f"relative to max {scale:.2e}"
        )
    phase = np.exp(-1j * np.outer(grid.nodes, x))
    return phase @ (w * gx)


def fourier_inverse(g_hat: np.ndarray, x, grid: FrequencyGrid = DEFAULT_GRID) -> np.ndarray:
    """``(1/2pi) sum_j w_j hat g(p_j) exp(i p_j x)``, complex-valued."""
    x = np.asarray(x, dtype=np.float64)
    g_hat = np.asarray(g_hat)
    if g_hat.shape[-1] != grid.n_p:
        raise DomainError("g_hat must be sampled on the grid nodes")
    phase = np.exp(1j * np.multiply.outer(x, grid.nodes))
    return phase @ (grid.weights * g_hat) / (2.0 * math.pi)

# }}}

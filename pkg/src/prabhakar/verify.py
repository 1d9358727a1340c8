"""Verification harness: every identity of the toolkit as a reproducible sweep.

A suite is a list of cases; a case draws nothing itself but receives its
parameters from the suite builder, which uses a generator seeded by
``(seed, suite name)``. Each case returns one or more
:class:`VerificationReport` rows comparing two independently computed
numbers. Exceptions inside a case become failed reports.

Tolerances follow the kind of check: transform identities ``1e-6``
(convolution ``1e-7``), operator round trips ``1e-4``, solver residuals
``1e-3``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from functools import partial
from typing import Callable

import numpy as np
from scipy import integrate, special

from prabhakar.functions import CallableFunction, format_number
from prabhakar.kernels import PrabhakarParams, kernel_eval, sumudu_symbol
from prabhakar.mlfn import MLParams, ml3, mittag_leffler
from prabhakar.operators import (
    BaseParams,
    HilferOrder,
    hp_derivative,
    hp_derivative_regularized,
    initial_weighted_limit,
    prabhakar_integral,
)
from prabhakar.quadrature import second_difference
from prabhakar.solvers import (
    DiffusionProblem,
    OdeProblem,
    PgfProblem,
    pgf_function,
    solve_diffusion_hp,
    solve_diffusion_reg,
    solve_ode,
    solve_pgf,
    standard_normal,
    tabulate,
    tabulate_ode,
)
from prabhakar.transforms import (
    FrequencyGrid,
    convolve,
    sumudu_hp_symbol,
    sumudu_hpreg_symbol,
    sumudu_numeric,
)

FLOOR = 1.0e-30
TOL_TRANSFORM = 1.0e-6
TOL_CONVOLUTION = 1.0e-7
TOL_OPERATOR = 1.0e-4
TOL_RESIDUAL = 1.0e-3
N_DRAWS = 10


@dataclass(frozen=True)
class VerificationReport:
    """One comparison ``lhs`` vs ``rhs``.

    ``rel_err = |lhs - rhs| / max(|rhs|, 1e-30)``. The check passes when
    ``rel_err <= tolerance``, or, for ``|rhs| < 1e-30``, when
    ``abs_err <= tolerance``. Error norms are reported as ``lhs`` against
    ``rhs = 0``, which makes them absolute checks.
    """

    case_id: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool
    notes: str = ""

    @classmethod
    def compare(cls, case_id: str, lhs: float, rhs: float, tolerance: float,
                notes: str = "") -> "VerificationReport":
        lhs, rhs = float(lhs), float(rhs)
        abs_err = abs(lhs - rhs)
        rel_err = abs_err / max(abs(rhs), FLOOR)
        if abs(rhs) < FLOOR:
            passed = abs_err <= tolerance
        else:
            passed = rel_err <= tolerance
        # NaN compares false, so non-finite results fail
        return cls(case_id, lhs, rhs, abs_err, rel_err, tolerance, bool(passed), notes)

    @classmethod
    def failure(cls, case_id: str, tolerance: float, exc: BaseException) -> "VerificationReport":
        nan = math.nan
        return cls(case_id, nan, nan, nan, nan, tolerance, False,
                   f"{type(exc).__name__}: {exc}")


# {{{ shared test functions

def _neg_exp(t):
    return np.exp(-np.asarray(t))


def _one(t):
    return np.ones_like(np.asarray(t, dtype=np.float64))


# name -> (f, Sumudu image, f(0))
SMOOTH = {
    "sin": (np.sin, lambda u: u / (1.0 + u * u), 0.0),
    "cos": (np.cos, lambda u: 1.0 / (1.0 + u * u), 1.0),
    "exp": (_neg_exp, lambda u: 1.0 / (1.0 + u), 1.0),
}


def _draw_derivative_params(rng: np.random.Generator) -> dict:
    return dict(
        rho=float(rng.uniform(0.3, 1.0)),
        mu=float(rng.uniform(0.2, 0.8)),
        nu=float(rng.uniform(0.0, 0.9)),
        omega=float(rng.uniform(-0.5, 0.5)),
        gamma=float(rng.uniform(0.0, 1.5)),
    )


def _notes(caught: list) -> str:
    kinds = sorted({type(w.message).__name__ for w in caught})
    return f"{len(caught)} warning(s): {', '.join(kinds)}" if caught else ""

# }}}


# {{{ transform identities

def case_kernel_symbol(case_id: str, rho: float, mu: float, omega: float, gamma: float,
                       us: tuple[float, ...]) -> list[VerificationReport]:
    p = PrabhakarParams(rho, mu, omega, gamma)
    f = CallableFunction(partial(kernel_eval, p), power=mu - 1.0)
    lhs = sumudu_numeric(f, np.array(us))
    rhs = sumudu_symbol(p, np.array(us))
    return [VerificationReport.compare(f"{case_id}/u={u:g}", a, b, TOL_TRANSFORM)
            for u, a, b in zip(us, lhs, rhs)]


def _operand(kind: str, a: float):
    if kind == "exp":
        return CallableFunction(lambda t: np.exp(a * t))
    if kind == "cos":
        return CallableFunction(lambda t: np.cos(a * t))
    if kind == "power":
        return CallableFunction(lambda t: np.asarray(t) ** a, power=a)
    raise ValueError(kind)


def case_convolution(case_id: str, kinds: tuple[str, str], params: tuple[float, float],
                     u: float) -> list[VerificationReport]:
    f = _operand(kinds[0], params[0])
    g = _operand(kinds[1], params[1])
    fg = CallableFunction(lambda t: convolve(f, g, t), power=f.power + g.power + 1.0)
    lhs = sumudu_numeric(fg, u)
    rhs = u * sumudu_numeric(f, u) * sumudu_numeric(g, u)
    return [VerificationReport.compare(case_id, lhs, rhs, TOL_CONVOLUTION,
                                       f"{kinds[0]}({params[0]:.3g}) * {kinds[1]}({params[1]:.3g})")]

# }}}


# {{{ operator identities

def case_hp_symbol(case_id: str, fname: str, rho: float, mu: float, nu: float,
                   omega: float, gamma: float, us: tuple[float, ...],
                   regularized: bool) -> list[VerificationReport]:
    func, image, f0 = SMOOTH[fname]
    f = CallableFunction(func, ac1=True)
    base = BaseParams(rho, omega, gamma)
    u = np.array(us)
    if regularized:
        lhs = sumudu_numeric(lambda t: hp_derivative_regularized(mu, base, f, t), u,
                             horizon=20.0, power=-mu)
        rhs = sumudu_hpreg_symbol(mu, base, image(u), f0, u)
    else:
        h = HilferOrder(mu, nu)
        # smooth data have a vanishing weighted initial value
        lhs = sumudu_numeric(lambda t: hp_derivative(h, base, f, t), u,
                             horizon=20.0, power=-mu)
        rhs = sumudu_hp_symbol(h, base, image(u), 0.0, u)
    return [VerificationReport.compare(f"{case_id}/u={ui:g}", a, b, TOL_OPERATOR, fname)
            for ui, a, b in zip(us, lhs, rhs)]


def case_relation(case_id: str, fname: str, rho: float, mu: float, nu: float,
                  omega: float, gamma: float) -> list[VerificationReport]:
    func, _, f0 = SMOOTH[fname]
    f = CallableFunction(func, ac1=True)
    base = BaseParams(rho, omega, gamma)
    t = np.linspace(0.5, 10.0, 10)
    lhs = hp_derivative(HilferOrder(mu, nu), base, f, t) - hp_derivative_regularized(mu, base, f, t)
    rhs = f0 * kernel_eval(PrabhakarParams(rho, 1.0 - mu, omega, -gamma), t)
    return [VerificationReport.compare(f"{case_id}/t={ti:05.2f}", a, b, TOL_OPERATOR, fname)
            for ti, a, b in zip(t, lhs, rhs)]


def case_limit(case_id: str, fname: str, rho: float, mu: float, nu: float,
               omega: float, gamma: float) -> list[VerificationReport]:
    func, _, _ = SMOOTH[fname]
    f = CallableFunction(func, ac1=True)
    k = initial_weighted_limit(HilferOrder(mu, nu), BaseParams(rho, omega, gamma), f)
    return [VerificationReport.compare(case_id, k, 0.0, TOL_OPERATOR, fname)]

# }}}


# {{{ solvers

def case_ode_residual(case_id: str, rho: float, mu: float, nu: float, omega: float,
                      gamma: float, delta: float, lam: float, K: float,
                      x_max: float = 5.0) -> list[VerificationReport]:
    h, base = HilferOrder(mu, nu), BaseParams(rho, omega, gamma)
    prob = OdeProblem(h, base, delta=delta, lam=lam, K=K, f=CallableFunction(_neg_exp))
    y = tabulate_ode(prob, x_max)
    x = np.linspace(0.1 * x_max, 0.9 * x_max, 10)
    lhs = hp_derivative(h, base, y, x)
    rhs = lam * prabhakar_integral(PrabhakarParams(rho, mu, omega, delta), y, x) + np.exp(-x)
    return [VerificationReport.compare(f"{case_id}/x={xi:05.2f}", a, b, TOL_RESIDUAL)
            for xi, a, b in zip(x, lhs, rhs)]


def case_ode_closed_forms(case_id: str, rho: float, mu: float, nu: float, omega: float,
                          gamma: float, K: float, x: float) -> list[VerificationReport]:
    h, base = HilferOrder(mu, nu), BaseParams(rho, omega, gamma)
    homogeneous = solve_ode(OdeProblem(h, base, K=K), x)
    expected = K * kernel_eval(PrabhakarParams(rho, nu * (1 - mu) + mu, omega, gamma * (1 - nu)), x)
    sourced = solve_ode(OdeProblem(h, base, f=CallableFunction(_one)), x)
    # independent route: the kernel of order mu + 1 integrates the constant
    closed = x**mu * ml3(MLParams(rho, mu + 1.0, gamma), omega * x**rho)
    return [
        VerificationReport.compare(f"{case_id}/homogeneous", homogeneous, expected, TOL_TRANSFORM),
        VerificationReport.compare(f"{case_id}/unit-source", sourced, closed, TOL_TRANSFORM),
    ]


def case_pgf(case_id: str, rho: float, mu: float, omega: float, gamma: float, lam: float,
             v: float) -> list[VerificationReport]:
    prob = PgfProblem(rho, omega, gamma, mu, lam)
    t = np.linspace(0.25, 2.0, 5)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = pgf_function(prob, v)
        lhs = hp_derivative_regularized(mu, prob.derivative_base, g, t)
        rhs = -lam * (1.0 - v) * g(t)
    note = _notes(caught)
    out = [VerificationReport.compare(f"{case_id}/residual/t={ti:04.2f}", a, b, TOL_RESIDUAL, note)
           for ti, a, b in zip(t, lhs, rhs)]
    out.append(VerificationReport.compare(
        f"{case_id}/normalization", solve_pgf(prob, 1.0, 2.0), 1.0, 0.0))
    out.append(VerificationReport.compare(
        f"{case_id}/initial", solve_pgf(prob, v, 1e-30), 1.0, TOL_TRANSFORM))
    return out


def case_poisson(case_id: str, lam: float, omega: float, v: float, t: float
                 ) -> list[VerificationReport]:
    prob = PgfProblem(1.0, omega, 0.0, 1.0, lam)
    return [VerificationReport.compare(case_id, solve_pgf(prob, v, t),
                                       math.exp(-lam * (1.0 - v) * t), 1e-10)]


_RESIDUAL_GRID = FrequencyGrid(p_max=8.0, n_p=512, x_max=16.0)


def _diffusion(rho, mu, nu, omega, gamma, K) -> DiffusionProblem:
    return DiffusionProblem(rho=rho, omega=omega, gamma_upper=gamma, mu=mu, nu=nu, K_diff=K)


def case_diffusion_factorization(case_id: str, rho: float, mu: float, nu: float,
                                 omega: float, gamma: float, x: float, t: float
                                 ) -> list[VerificationReport]:
    prob = _diffusion(rho, mu, nu, omega, gamma, 0.0)
    b0 = prob.hp_beta0
    lhs = solve_diffusion_hp(prob, x, t)
    rhs = standard_normal(x) * t ** (b0 - 1.0) * mittag_leffler(
        omega * t**rho, rho, b0, gamma * (1.0 - nu))
    return [VerificationReport.compare(case_id, lhs, rhs, 1e-5)]


def case_diffusion_residual(case_id: str, rho: float, mu: float, nu: float, omega: float,
                            gamma: float, K: float, x0: float, regularized: bool
                            ) -> list[VerificationReport]:
    prob = _diffusion(rho, mu, nu, omega, gamma, K)
    base = BaseParams(rho, omega, gamma)
    grid = _RESIDUAL_GRID
    solve = solve_diffusion_reg if regularized else solve_diffusion_hp
    t = np.linspace(0.3, 2.7, 5)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if regularized:
            table = tabulate(lambda s: solve(prob, x0, s, grid), 3.0, 0.0)
            u = CallableFunction(table.func, ac1=True, derivative_power=mu - 1.0)
            lhs = hp_derivative_regularized(mu, base, u, t)
        else:
            u = tabulate(lambda s: solve(prob, x0, s, grid), 3.0, prob.hp_beta0 - 1.0)
            lhs = hp_derivative(HilferOrder(mu, nu), base, u, t)
        rhs = K * np.array([second_difference(lambda x: solve(prob, x, ti, grid), x0, 0.02)
                            for ti in t])
    note = _notes(caught)
    return [VerificationReport.compare(f"{case_id}/t={ti:04.2f}", a, b, TOL_RESIDUAL, note)
            for ti, a, b in zip(t, lhs, rhs)]


def case_diffusion_weighted_datum(case_id: str, rho: float, mu: float, nu: float,
                                  omega: float, gamma: float, K: float, x0: float
                                  ) -> list[VerificationReport]:
    prob = _diffusion(rho, mu, nu, omega, gamma, K)
    u = CallableFunction(lambda s: solve_diffusion_hp(prob, x0, s, _RESIDUAL_GRID),
                         power=prob.hp_beta0 - 1.0)
    k = initial_weighted_limit(HilferOrder(mu, nu), BaseParams(rho, omega, gamma), u,
                               exponents=tuple(sorted((rho, mu))))
    return [VerificationReport.compare(case_id, k, standard_normal(x0), 1e-2)]


def case_diffusion_initial(case_id: str, rho: float, mu: float, omega: float, gamma: float,
                           K: float) -> list[VerificationReport]:
    prob = _diffusion(rho, mu, 0.0, omega, gamma, K)
    x = np.linspace(-5.0, 5.0, 41)
    u = solve_diffusion_reg(prob, x, 1e-30)
    err = float(np.max(np.abs(u - standard_normal(x))))
    return [VerificationReport.compare(case_id, err, 0.0, TOL_TRANSFORM, "sup-norm error")]

# }}}


# {{{ classical reductions

def case_exponential(case_id: str) -> list[VerificationReport]:
    z = np.arange(-5.0, 6.0)
    vals = mittag_leffler(z, 1.0, 1.0, 1.0)
    return [VerificationReport.compare(f"{case_id}/z={zi:+03.0f}", a, math.exp(zi), 1e-12)
            for zi, a in zip(z, vals)]


def case_reciprocal_gamma(case_id: str, alpha: float, beta: float, z: float
                          ) -> list[VerificationReport]:
    return [VerificationReport.compare(case_id, mittag_leffler(z, alpha, beta, 0.0),
                                       special.rgamma(beta), 1e-15)]


def case_erfcx(case_id: str, z: float) -> list[VerificationReport]:
    # E_{1/2}(-z) = exp(z^2) erfc(z)
    return [VerificationReport.compare(case_id, mittag_leffler(-z, 0.5, 1.0, 1.0),
                                       special.erfcx(z), 1e-9)]


def case_constant_integral(case_id: str, rho: float, mu: float, omega: float, gamma: float,
                           t: float) -> list[VerificationReport]:
    p = PrabhakarParams(rho, mu, omega, gamma)
    lhs = prabhakar_integral(p, _one, t)
    rhs = t**mu * ml3(MLParams(rho, mu + 1.0, gamma), omega * t**rho)
    return [VerificationReport.compare(case_id, lhs, rhs, 1e-8)]


def case_heat(case_id: str, K: float) -> list[VerificationReport]:
    prob = _diffusion(1.0, 1.0, 0.0, 0.0, 0.0, K)
    x = np.linspace(-8.0, 8.0, 161)
    out = []
    for t in (0.5, 1.0, 2.0):
        var = 1.0 + 2.0 * K * t
        u = solve_diffusion_reg(prob, x, t)
        exact = np.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var)
        out.append(VerificationReport.compare(
            f"{case_id}/t={t:3.1f}/sup", float(np.max(np.abs(u - exact))), 0.0, 1e-4,
            "sup-norm error"))
        xm = np.linspace(-16.0, 16.0, 641)
        mass = integrate.trapezoid(solve_diffusion_reg(prob, xm, t), xm)
        out.append(VerificationReport.compare(f"{case_id}/t={t:3.1f}/mass", mass, 1.0, 1e-4))
    return out


def case_time_fractional(case_id: str, K: float) -> list[VerificationReport]:
    prob = _diffusion(1.0, 0.5, 0.0, 0.0, 0.0, K)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        lhs = solve_diffusion_reg(prob, 0.0, 1.0)
    oracle = integrate.quad(lambda p: math.exp(-p * p / 2) * special.erfcx(K * p * p),
                            -np.inf, np.inf, epsabs=1e-14)[0] / (2 * math.pi)
    return [VerificationReport.compare(case_id, lhs, oracle, TOL_OPERATOR, _notes(caught))]

# }}}


# {{{ suite builders

def _build_lemma_2_14(rng: np.random.Generator) -> list:
    cases = []
    for i in range(30):
        cases.append(partial(
            case_kernel_symbol, f"lemma_2_14/draw{i:02d}",
            float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.2, 2.0)),
            float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-2.0, 2.0)),
            (0.1, 0.25, 0.5)))
    return cases


def _build_thm_2_13(rng: np.random.Generator) -> list:
    kinds = ("exp", "cos", "power")
    draw = {
        "exp": lambda: float(rng.uniform(-1.0, 0.5)),
        "cos": lambda: float(rng.uniform(0.2, 3.0)),
        "power": lambda: float(rng.uniform(-0.5, 1.5)),
    }
    cases = []
    for i in range(N_DRAWS):
        a, b = (kinds[j] for j in rng.integers(0, 3, size=2))
        cases.append(partial(case_convolution, f"thm_2_13/draw{i:02d}", (a, b),
                             (draw[a](), draw[b]()), float(rng.uniform(0.1, 0.5))))
    return cases


def _build_symbol(rng: np.random.Generator, name: str, regularized: bool) -> list:
    cases = []
    for i in range(N_DRAWS):
        fname = ("sin", "exp", "cos")[i % 3]
        cases.append(partial(case_hp_symbol, f"{name}/draw{i:02d}", fname,
                             **_draw_derivative_params(rng), us=(0.1, 0.2, 0.3),
                             regularized=regularized))
    return cases


def _build_relation(rng: np.random.Generator) -> list:
    return [partial(case_relation, f"relation_3_6/draw{i:02d}", ("cos", "exp", "sin")[i % 3],
                    **_draw_derivative_params(rng)) for i in range(N_DRAWS)]


def _build_limit(rng: np.random.Generator) -> list:
    return [partial(case_limit, f"limit_3_3/draw{i:02d}", ("cos", "exp", "sin")[i % 3],
                    **_draw_derivative_params(rng)) for i in range(N_DRAWS)]


def _build_thm_4_1(rng: np.random.Generator) -> list:
    cases = [partial(case_ode_residual, "thm_4_1/residual00", rho=0.7, mu=0.6, nu=0.4,
                     omega=-0.3, gamma=0.8, delta=0.5, lam=0.2, K=1.0)]
    for i in range(1, 3):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_ode_residual, f"thm_4_1/residual{i:02d}", **d,
                             delta=float(rng.uniform(0.0, 1.0)), lam=float(rng.uniform(-0.5, 0.5)),
                             K=float(rng.uniform(0.0, 2.0))))
    for i in range(N_DRAWS):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_ode_closed_forms, f"thm_4_1/closed{i:02d}", **d,
                             K=float(rng.uniform(0.1, 2.0)), x=float(rng.uniform(0.2, 5.0))))
    return cases


def _build_thm_4_2(rng: np.random.Generator) -> list:
    cases = []
    for i in range(N_DRAWS):
        cases.append(partial(
            # the series loses digits to cancellation once lam (1 - v) t**mu
            # grows large, fastest for small mu
            case_pgf, f"thm_4_2/draw{i:02d}", rho=float(rng.uniform(0.3, 1.0)),
            mu=float(rng.uniform(0.5, 0.95)), omega=float(rng.uniform(-0.5, 0.5)),
            gamma=float(rng.uniform(0.0, 1.5)), lam=float(rng.uniform(0.2, 1.0)),
            v=float(rng.uniform(-1.0, 1.0))))
    cases.append(partial(case_poisson, "thm_4_2/poisson", 2.0, 0.5, 0.5, 1.0))
    return cases


def _build_thm_4_3(rng: np.random.Generator) -> list:
    cases = []
    for i in range(N_DRAWS):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_diffusion_factorization, f"thm_4_3/factor{i:02d}", **d,
                             x=float(rng.uniform(-3.0, 3.0)), t=float(rng.uniform(0.2, 3.0))))
    for i in range(2):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_diffusion_residual, f"thm_4_3/residual{i:02d}", **d,
                             K=float(rng.uniform(0.02, 0.1)), x0=float(rng.uniform(-1.0, 1.0)),
                             regularized=False))
    d = _draw_derivative_params(rng)
    cases.append(partial(case_diffusion_weighted_datum, "thm_4_3/weighted-datum", **d,
                         K=float(rng.uniform(0.02, 0.1)), x0=float(rng.uniform(-1.0, 1.0))))
    return cases


def _build_thm_4_4(rng: np.random.Generator) -> list:
    cases = []
    for i in range(N_DRAWS):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_diffusion_initial, f"thm_4_4/initial{i:02d}", d["rho"],
                             d["mu"], d["omega"], d["gamma"], float(rng.uniform(0.05, 0.5))))
    for i in range(2):
        d = _draw_derivative_params(rng)
        cases.append(partial(case_diffusion_residual, f"thm_4_4/residual{i:02d}", **d,
                             K=float(rng.uniform(0.02, 0.1)), x0=float(rng.uniform(-1.0, 1.0)),
                             regularized=True))
    return cases


def _build_reductions(rng: np.random.Generator) -> list:
    cases = [partial(case_exponential, "reductions/exponential")]
    for i in range(N_DRAWS):
        cases.append(partial(case_reciprocal_gamma, f"reductions/rgamma{i:02d}",
                             float(rng.uniform(0.1, 3.0)), float(rng.uniform(-3.0, 5.0)),
                             float(rng.uniform(-5.0, 5.0))))
        cases.append(partial(case_erfcx, f"reductions/erfcx{i:02d}", float(rng.uniform(0.0, 3.0))))
        cases.append(partial(case_constant_integral, f"reductions/constant{i:02d}",
                             float(rng.uniform(0.2, 1.5)), float(rng.uniform(0.1, 2.0)),
                             float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-1.0, 2.0)),
                             float(rng.uniform(0.1, 3.0))))
        # lam (1 - v) t <= 4 keeps the alternating series within 1e-10
        cases.append(partial(case_poisson, f"reductions/poisson{i:02d}",
                             float(rng.uniform(0.1, 1.0)), float(rng.uniform(-1.0, 1.0)),
                             float(rng.uniform(-1.0, 1.0)), float(rng.uniform(0.1, 2.0))))
    for i in range(3):
        cases.append(partial(case_heat, f"reductions/heat{i:02d}", float(rng.uniform(0.05, 0.25))))
    cases.append(partial(case_time_fractional, "reductions/time-fractional",
                         float(rng.uniform(0.1, 0.3))))
    return cases


SUITES: dict[str, tuple[str, Callable]] = {
    "lemma_2_14": ("Sumudu image of the Prabhakar kernel", _build_lemma_2_14),
    "thm_2_13": ("Sumudu convolution theorem", _build_thm_2_13),
    "lemma_3_1": ("Sumudu image of the Hilfer-Prabhakar derivative",
                  partial(_build_symbol, name="lemma_3_1", regularized=False)),
    "lemma_3_2": ("Sumudu image of the regularized derivative",
                  partial(_build_symbol, name="lemma_3_2", regularized=True)),
    "relation_3_6": ("difference of the two derivatives", _build_relation),
    "limit_3_3": ("vanishing weighted initial value of smooth data", _build_limit),
    "thm_4_1": ("linear equation with weighted initial datum", _build_thm_4_1),
    "thm_4_2": ("generating function of the counting process", _build_thm_4_2),
    "thm_4_3": ("diffusion with the Hilfer-Prabhakar derivative", _build_thm_4_3),
    "thm_4_4": ("diffusion with the regularized derivative", _build_thm_4_4),
    "reductions": ("classical special cases", _build_reductions),
}

# identity -> suites exercising it; checked by :func:`coverage_gaps`
COVERAGE: dict[str, tuple[str, ...]] = {
    "Sumudu transform": ("lemma_2_14", "thm_2_13", "lemma_3_1", "lemma_3_2"),
    "three-parameter Mittag-Leffler series": ("reductions", "lemma_2_14"),
    "Fourier transform pair": ("thm_4_3", "thm_4_4", "reductions"),
    "Prabhakar integral": ("reductions", "thm_4_1"),
    "Prabhakar kernel": ("lemma_2_14", "relation_3_6"),
    "Hilfer-Prabhakar derivative": ("lemma_3_1", "relation_3_6", "thm_4_1", "thm_4_3"),
    "regularized derivative": ("lemma_3_2", "relation_3_6", "thm_4_2", "thm_4_4"),
    "convolution theorem": ("thm_2_13",),
    "kernel symbol": ("lemma_2_14",),
    "derivative symbol": ("lemma_3_1",),
    "regularized derivative symbol": ("lemma_3_2",),
    "vanishing weighted initial value": ("limit_3_3",),
    "derivative symbol for smooth data": ("lemma_3_1",),
    "derivative relation": ("relation_3_6",),
    "linear equation solution": ("thm_4_1",),
    "generating function solution": ("thm_4_2",),
    "diffusion solution": ("thm_4_3",),
    "regularized diffusion solution": ("thm_4_4", "reductions"),
}


def coverage_gaps() -> list[str]:
    """Identities without a registered, existing suite."""
    return sorted(name for name, suites in COVERAGE.items()
                  if not suites or any(s not in SUITES for s in suites))


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


def _suite_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def build_cases(suite_name: str, seed: int) -> list:
    if suite_name == "all":
        return [c for name in SUITES for c in build_cases(name, seed)]
    if suite_name not in SUITES:
        raise ValueError(f"unknown suite {suite_name!r}; choose from {', '.join(suite_names())}")
    return SUITES[suite_name][1](_suite_rng(seed, suite_name))


def run_case(case) -> list[VerificationReport]:
    """Run one case, turning any exception into a failed report."""
    case_id = case.args[0]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with np.errstate(all="ignore"):
                return list(case())
    except Exception as exc:  # noqa: BLE001 - every failure becomes a report
        return [VerificationReport.failure(case_id, math.nan, exc)]


def run_suite(suite_name: str, seed: int = 0, workers: int = 1) -> list[VerificationReport]:
    """Run a suite (or ``"all"``) and return its reports sorted by ``case_id``.

    With ``workers > 1`` cases run in a process pool; the output does not
    depend on the number of workers.
    """
    cases = build_cases(suite_name, seed)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, cases))
    else:
        results = [run_case(c) for c in cases]
    reports = [r for rs in results for r in rs]
    return sorted(reports, key=lambda r: r.case_id)

# }}}


# {{{ output

REPORT_FIELDS = tuple(f.name for f in fields(VerificationReport))


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def report_rows(reports: list[VerificationReport]) -> list[dict]:
    return [dict(zip(REPORT_FIELDS, astuple(r))) for r in reports]


def reports_to_csv(reports: list[VerificationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for r in reports:
        writer.writerow([_cell(v) for v in astuple(r)])
    return buf.getvalue()


def summary_table(reports: list[VerificationReport]) -> str:
    """Fixed-width table of all reports followed by a pass count."""
    width = max([len("case_id")] + [len(r.case_id) for r in reports])
    lines = [f"{'case_id':<{width}}  {'rel_err':>10}  {'abs_err':>10}  {'tol':>8}  result"]
    for r in reports:
        lines.append(f"{r.case_id:<{width}}  {r.rel_err:10.2e}  {r.abs_err:10.2e}  "
                     f"{r.tolerance:8.1e}  {'PASS' if r.passed else 'FAIL'}"
                     + (f"  {r.notes}" if r.notes and not r.passed else ""))
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} passed")
    return "\n".join(lines) + "\n"

# }}}

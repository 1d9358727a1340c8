"""Command-line entry point.

Every subcommand writes a table: one row per grid point, as CSV (header
row, LF endings, 17 significant digits) or as a JSON array of objects.
Exit status is 0 on success, 1 for invalid input, 2 when a computation
leaves its numerical envelope and 3 when a verification suite fails.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import sys
import warnings
from typing import Callable, Sequence

import numpy as np

from prabhakar.errors import DomainError, PrabhakarError
from prabhakar.functions import CallableFunction, SampledFunction, write_columns
from prabhakar.kernels import PrabhakarParams, kernel_eval
from prabhakar.mlfn import MLParams, ml3
from prabhakar.operators import (
    BaseParams,
    HilferOrder,
    hp_derivative,
    hp_derivative_regularized,
    prabhakar_integral,
)
from prabhakar.solvers import (
    DiffusionProblem,
    OdeProblem,
    PgfProblem,
    solve_diffusion_hp,
    solve_diffusion_reg,
    solve_ode,
    solve_pgf,
)
from prabhakar.transforms import DEFAULT_LAGUERRE_NODES, FrequencyGrid, sumudu_numeric
from prabhakar.verify import report_rows, reports_to_csv, run_suite, suite_names, summary_table

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ENVELOPE = 2
EXIT_VERIFICATION = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # abbreviated flags would let misspellings through
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    # argparse exits with status 2 on bad input; we reserve 2 for envelope errors
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# {{{ argument types

def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def grid_range(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` equally spaced points from ``a`` to ``b``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}")
    a, b = finite_float(parts[0]), finite_float(parts[1])
    n = positive_int(parts[2])
    if n == 1 and a != b:
        raise argparse.ArgumentTypeError("a single-point range needs a == b")
    return np.linspace(a, b, n)


_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {name: getattr(np, name) for name in (
    "sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sinh", "cosh", "tanh",
    "arctan", "expm1", "log1p",
)}
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load,
          ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def parse_expression(text: str) -> Callable:
    """Compile an arithmetic expression in ``t`` to a vectorized callable.

    Only numbers, ``t``, ``pi``, ``e``, arithmetic operators and a fixed set
    of elementary functions are accepted.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise argparse.ArgumentTypeError(f"invalid expression {text!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise argparse.ArgumentTypeError(
                f"{type(node).__name__} is not allowed in expressions")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise argparse.ArgumentTypeError("only numeric constants are allowed")
        if isinstance(node, ast.Name) and node.id not in {"t", *_NAMES, *_FUNCS}:
            raise argparse.ArgumentTypeError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Call) and (
                not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS
                or node.keywords):
            raise argparse.ArgumentTypeError("only calls of the listed functions are allowed")
    code = compile(tree, "<expression>", "eval")
    env = {"__builtins__": {}, **_NAMES, **_FUNCS}

    def func(t):
        t = np.asarray(t, dtype=np.float64)
        return np.broadcast_to(eval(code, env, {"t": t}), t.shape).astype(np.float64)  # noqa: S307

    return func

# }}}


# {{{ parser

def _points(parser: argparse.ArgumentParser, name: str, default: float | None = None) -> None:
    group = parser.add_mutually_exclusive_group(required=default is None)
    group.add_argument(f"--{name}", type=finite_float, default=default,
                       help=f"single {name} value")
    group.add_argument(f"--{name}-range", type=grid_range, metavar="A:B:N",
                       help=f"sweep {name} over N equally spaced points")


def _kernel_flags(parser: argparse.ArgumentParser, mu: bool = True) -> None:
    parser.add_argument("--rho", type=finite_float, required=True)
    if mu:
        parser.add_argument("--mu", type=finite_float, required=True)
    parser.add_argument("--omega", type=finite_float, default=0.0)
    parser.add_argument("--gamma", type=finite_float, default=0.0,
                        help="upper parameter of the Mittag-Leffler function")


def _operand_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--f-expr", type=parse_expression, metavar="EXPR",
                       help="operand as an expression in t, e.g. 'exp(-t)'")
    group.add_argument("--f-csv", metavar="PATH", help="operand sampled in a t,value CSV file")
    parser.add_argument("--f-power", type=finite_float, default=0.0,
                        help="leading exponent p of f(t) ~ c t**p at the origin")
    parser.add_argument("--f-ac1", choices=("yes", "no"), default="yes",
                        help="declare the operand absolutely continuous")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    parser.add_argument("--config", metavar="PATH",
                        help="file of key=value lines; explicit flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prabhakar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ml", help="three-parameter Mittag-Leffler function")
    p.add_argument("--alpha", type=finite_float, required=True)
    p.add_argument("--beta", type=finite_float, default=1.0)
    p.add_argument("--gamma", type=finite_float, default=1.0)
    _points(p, "z")

    p = sub.add_parser("kernel", help="Prabhakar kernel t^(mu-1) E(omega t^rho)")
    _kernel_flags(p)
    _points(p, "t")

    p = sub.add_parser("prabhakar-int", help="Prabhakar integral of an operand")
    _kernel_flags(p)
    _operand_flags(p)
    _points(p, "t")

    p = sub.add_parser("hp-deriv", help="Hilfer-Prabhakar derivative of an operand")
    _kernel_flags(p)
    p.add_argument("--nu", type=finite_float, default=0.0)
    p.add_argument("--variant", choices=("hp", "reg"), default="hp",
                   help="hp: two-stage derivative; reg: regularized derivative")
    _operand_flags(p)
    _points(p, "t")

    p = sub.add_parser("sumudu", help="numerical Sumudu transform of an operand")
    _operand_flags(p)
    p.add_argument("--n-nodes", type=positive_int, default=DEFAULT_LAGUERRE_NODES)
    _points(p, "u")

    p = sub.add_parser("solve-ode", help="linear equation with weighted initial datum")
    _kernel_flags(p)
    p.add_argument("--nu", type=finite_float, default=0.0)
    p.add_argument("--delta", type=finite_float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=finite_float, default=0.0)
    p.add_argument("--K", dest="K", type=finite_float, default=0.0)
    _operand_flags(p, required=False)
    _points(p, "x")

    p = sub.add_parser("solve-pgf", help="generating function of the counting process")
    _kernel_flags(p)
    p.add_argument("--lambda", dest="lam", type=finite_float, required=True)
    p.add_argument("--v", type=finite_float, required=True)
    _points(p, "t")

    p = sub.add_parser("solve-diffusion", help="diffusion on the line, Gaussian datum")
    _kernel_flags(p)
    p.add_argument("--nu", type=finite_float, default=0.0)
    p.add_argument("--K", dest="K", type=finite_float, default=1.0, help="diffusivity")
    p.add_argument("--variant", choices=("hp", "reg"), default="reg")
    p.add_argument("--p-max", type=finite_float, default=10.0)
    p.add_argument("--n-p", type=positive_int, default=512)
    p.add_argument("--x-max", type=finite_float, default=16.0)
    _points(p, "x")
    _points(p, "t")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", "--verify-suite", dest="suite", choices=suite_names(),
                   required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=positive_int, default=1)
    p.add_argument("--summary", choices=("stderr", "none"), default="stderr",
                   help="where to print the human-readable table")

    for action in sub.choices.values():
        _common_flags(action)
    return parser

# }}}


# {{{ config merging

def read_config(path: str) -> list[str]:
    """Translate ``key=value`` lines into ``--key value`` arguments."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    args = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not sep or not key:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        if key == "config":
            raise UsageError(f"{path}:{lineno}: nested config files are not supported")
        args += [f"--{key}", value.strip()]
    return args


def _config_path(argv: list[str]) -> str | None:
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.partition("=")[2]
    return None


def merge_config(argv: list[str]) -> list[str]:
    """Insert config arguments right after the subcommand.

    Later occurrences win in argparse, so explicit flags override the file.
    A config key naming one side of a point/range pair is dropped when the
    command line gives the other side.
    """
    path = _config_path(argv)
    if path is None or not argv:
        return argv
    extra = read_config(path)
    given = {a.split("=", 1)[0] for a in argv[1:] if a.startswith("--")}
    kept = []
    for key, value in zip(extra[::2], extra[1::2]):
        twin = key[:-len("-range")] if key.endswith("-range") else f"{key}-range"
        if key in given or twin in given:
            continue
        kept += [key, value]
    return argv[:1] + kept + argv[1:]

# }}}


# {{{ commands

def _grid(args, name: str) -> np.ndarray:
    rng = getattr(args, f"{name}_range")
    return rng if rng is not None else np.array([getattr(args, name)])


def _operand(args):
    ac1 = args.f_ac1 == "yes"
    if args.f_csv is not None:
        try:
            return SampledFunction.from_csv(args.f_csv, ac1=ac1)
        except (OSError, ValueError) as exc:
            raise DomainError(f"cannot read operand {args.f_csv!r}: {exc}") from None
    return CallableFunction(args.f_expr, ac1=ac1, power=args.f_power)


def _positive_part(t: np.ndarray, func: Callable, at_zero: float) -> np.ndarray:
    """Evaluate ``func`` on ``t > 0`` and use the known limit at ``t = 0``."""
    if np.any(t < 0):
        raise DomainError("t must be non-negative")
    out = np.full(t.shape, at_zero)
    pos = t > 0
    if pos.any():
        out[pos] = func(t[pos])
    return out


def cmd_ml(args) -> dict:
    z = _grid(args, "z")
    return {"z": z, "value": ml3(MLParams(args.alpha, args.beta, args.gamma), z)}


def cmd_kernel(args) -> dict:
    p = PrabhakarParams(args.rho, args.mu, args.omega, args.gamma)
    t = _grid(args, "t")
    return {"t": t, "value": kernel_eval(p, t)}


def cmd_prabhakar_int(args) -> dict:
    p = PrabhakarParams(args.rho, args.mu, args.omega, args.gamma)
    if p.mu <= 0:
        raise DomainError(f"Prabhakar integral needs mu > 0, got {p.mu}")
    f = _operand(args)
    t = _grid(args, "t")
    return {"t": t, "value": _positive_part(t, lambda s: prabhakar_integral(p, f, s), 0.0)}


def cmd_hp_deriv(args) -> dict:
    h = HilferOrder(args.mu, args.nu)
    base = BaseParams(args.rho, args.omega, args.gamma)
    f = _operand(args)
    t = _grid(args, "t")
    if args.variant == "reg":
        value = hp_derivative_regularized(h.mu, base, f, t)
    else:
        value = hp_derivative(h, base, f, t)
    return {"t": t, "value": np.atleast_1d(value)}


def cmd_sumudu(args) -> dict:
    f = _operand(args)
    u = _grid(args, "u")
    return {"u": u, "value": np.atleast_1d(sumudu_numeric(f, u, args.n_nodes))}


def cmd_solve_ode(args) -> dict:
    f = None
    if args.f_expr is not None or args.f_csv is not None:
        f = _operand(args)
    prob = OdeProblem(HilferOrder(args.mu, args.nu), BaseParams(args.rho, args.omega, args.gamma),
                      delta=args.delta, lam=args.lam, K=args.K, f=f)
    x = _grid(args, "x")
    return {"x": x, "value": np.atleast_1d(solve_ode(prob, x))}


def cmd_solve_pgf(args) -> dict:
    prob = PgfProblem(args.rho, args.omega, args.gamma, args.mu, args.lam)
    if not abs(args.v) <= 1:
        raise DomainError(f"|v| must not exceed 1, got {args.v}")
    t = _grid(args, "t")
    return {"t": t, "value": _positive_part(t, lambda s: solve_pgf(prob, args.v, s), 1.0)}


def cmd_solve_diffusion(args) -> dict:
    prob = DiffusionProblem(rho=args.rho, omega=args.omega, gamma_upper=args.gamma,
                            mu=args.mu, nu=args.nu, K_diff=args.K)
    grid = FrequencyGrid(args.p_max, args.n_p, args.x_max)
    x, t = _grid(args, "x"), _grid(args, "t")
    if np.any(t <= 0):
        raise DomainError("diffusion solutions are evaluated for t > 0")
    xx, tt = (a.ravel() for a in np.meshgrid(x, t, indexing="ij"))
    solve = solve_diffusion_reg if args.variant == "reg" else solve_diffusion_hp
    return {"x": xx, "t": tt, "value": np.atleast_1d(solve(prob, xx, tt, grid))}


COMMANDS = {
    "ml": cmd_ml,
    "kernel": cmd_kernel,
    "prabhakar-int": cmd_prabhakar_int,
    "hp-deriv": cmd_hp_deriv,
    "sumudu": cmd_sumudu,
    "solve-ode": cmd_solve_ode,
    "solve-pgf": cmd_solve_pgf,
    "solve-diffusion": cmd_solve_diffusion,
}

# }}}


# {{{ output

def _columns_json(columns: dict) -> str:
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k], dtype=np.float64)) for k in names]
    rows = [{k: float(a[i]) for k, a in zip(names, arrays)} for i in range(len(arrays[0]))]
    return json.dumps(rows, indent=1) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _run_verify(args) -> int:
    reports = run_suite(args.suite, args.seed, args.workers)
    if args.format == "json":
        text = json.dumps(report_rows(reports), indent=1) + "\n"
    else:
        text = reports_to_csv(reports)
    _emit(text, args.output)
    if args.summary == "stderr":
        sys.stderr.write(summary_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION

# }}}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(merge_config(argv))
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VALIDATION

    try:
        if args.command == "verify":
            return _run_verify(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            columns = COMMANDS[args.command](args)
        if args.format == "json":
            text = _columns_json(columns)
        else:
            text = write_columns(columns)
        _emit(text, args.output)
    except DomainError as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: invalid input: {exc}\n")
        return EXIT_VALIDATION
    except PrabhakarError as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_ENVELOPE
    except OSError as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: {exc}\n")
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

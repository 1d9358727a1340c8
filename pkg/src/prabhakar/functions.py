"""Operands of the integral operators: sampled data or vectorized callables."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from prabhakar.errors import DomainError
from prabhakar.quadrature import graded_mesh


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A function known on a grid ``0 = t_0 < t_1 < ... < t_N = T``.

    Between grid points the function is taken to be piecewise linear.
    ``ac1`` asserts absolute continuity with integrable derivative on
    ``[0, T]``, required by the regularized derivative.
    """

    grid: np.ndarray
    values: np.ndarray
    ac1: bool = False

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if len(grid) < 2 or grid[0] != 0.0:
            raise DomainError("grid must start at t = 0 and contain at least two points")
        if np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("sampled values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])

    @property
    def h_min(self) -> float:
        return float(np.min(np.diff(self.grid)))

    @property
    def h_max(self) -> float:
        return float(np.max(np.diff(self.grid)))

    def __call__(self, t):
        return np.interp(t, self.grid, self.values)

    @classmethod
    def from_callable(cls, func: Callable, t_max: float, n: int = 400,
                      grading: float = 2.0, ac1: bool = False) -> "SampledFunction":
        grid = graded_mesh(t_max, n, grading)
        return cls(grid, np.asarray(func(grid), dtype=np.float64), ac1=ac1)

    def to_csv(self, target=None, header: tuple[str, str] = ("t", "value")) -> str | None:
        """Write ``t,value`` rows with 17 significant digits.

        With ``target=None`` the CSV text is returned.
        """
        return write_columns({header[0]: self.grid, header[1]: self.values}, target)

    @classmethod
    def from_csv(cls, source, ac1: bool = False) -> "SampledFunction":
        """Read a two-column CSV with a header row."""
        if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
            with open(source, newline="") as fh:
                rows = list(csv.reader(fh))
        else:
            text = source.read() if hasattr(source, "read") else str(source)
            rows = list(csv.reader(io.StringIO(text)))
        if len(rows) < 3 or len(rows[0]) != 2:
            raise DomainError("expected a header row and two numeric columns")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
        return cls(data[:, 0], data[:, 1], ac1=ac1)


@dataclass(frozen=True)
class CallableFunction:
    """A vectorized callable with declared behaviour at ``t = 0``.

    ``power`` is the leading exponent ``p`` in ``f(t) ~ c t**p`` as
    ``t -> 0+`` (``0`` for functions bounded and nonzero at the origin); it
    selects the Gauss-Jacobi weight used next to ``y = 0``. The optional
    ``derivative`` and ``derivative_power`` play the same roles for ``f'``.
    """

    func: Callable
    ac1: bool = False
    power: float = 0.0
    derivative: Callable | None = field(default=None, compare=False)
    derivative_power: float | None = None

    def __call__(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=np.float64)), dtype=np.float64)

    @property
    def derivative_leading_power(self) -> float:
        if self.derivative_power is not None:
            return self.derivative_power
        return self.power - 1.0 if self.power != 0.0 else 0.0


Function = Union[SampledFunction, CallableFunction]


def as_function(f, **kwargs) -> Function:
    """Wrap a bare callable into a :class:`CallableFunction`."""
    if isinstance(f, (SampledFunction, CallableFunction)):
        return f
    if callable(f):
        return CallableFunction(f, **kwargs)
    raise TypeError(f"cannot interpret {type(f).__name__} as a function")


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def write_columns(columns: dict, target=None) -> str | None:
    """Write equal-length columns as CSV (header row, LF endings, 17 digits)."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k], dtype=np.float64)) for k in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise DomainError("all CSV columns must have the same length")

    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(format_number(a[i]) for a in arrays))
    text = "\n".join(lines) + "\n"

    if target is None:
        return text
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    return None

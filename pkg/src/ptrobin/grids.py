"""Uniform grids on [0, d], sampled complex functions and trapezoid quadrature.

Everything downstream (spectra, the metric operator, the verification
suite) consumes the two value types defined here:

* :class:`Grid` -- a uniform partition of ``[0, d]`` into ``n`` subintervals.
* :class:`GridFunction` -- complex samples on the ``n + 1`` grid nodes.

All integrals are composite-trapezoid sums on the grid; the cumulative
integral operator :func:`cumulative_integral` maps a grid function to the
grid function of its running integral, anchored so the value at 0 is
exactly zero.  The inner product is antilinear in the *first* argument.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Grid",
    "GridFunction",
    "GridMismatchError",
    "inner_product",
    "norm",
    "cumulative_integral",
    "sample",
    "grid_function_to_dict",
    "grid_function_from_dict",
    "save_grid_function",
    "load_grid_function",
]


class GridMismatchError(ValueError):
    """Two grid functions that must share a grid do not."""


@dataclass(frozen=True)
class Grid:
    """Uniform partition of ``[0, d]`` with nodes ``x_i = i * d / n``.

    Parameters
    ----------
    d : float
        Interval length, strictly positive.
    n : int
        Number of subintervals, at least 2.  There are ``n + 1`` nodes.
    """

    d: float
    n: int

    def __post_init__(self) -> None:
        if not (self.d > 0 and np.isfinite(self.d)):
            raise ValueError(f"interval length must be positive and finite, got {self.d}")
        if self.n < 2:
            raise ValueError(f"need at least 2 subintervals, got {self.n}")

    @property
    def h(self) -> float:
        """Node spacing ``d / n``."""
        return self.d / self.n

    @property
    def nodes(self) -> NDArray[np.float64]:
        return np.linspace(0.0, self.d, self.n + 1)

    @property
    def weights(self) -> NDArray[np.float64]:
        """Trapezoid quadrature weights; they sum to ``d`` exactly up to rounding."""
        w = np.full(self.n + 1, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass(frozen=True)
class GridFunction:
    """A complex-valued function sampled on the nodes of a :class:`Grid`."""

    grid: Grid
    values: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", values)
        if values.shape != (self.grid.n + 1,):
            raise ValueError(
                f"expected {self.grid.n + 1} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
            raise ValueError("samples must be finite")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _require_same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _require_same_grid(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction":
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    @staticmethod
    def constant(grid: Grid, value: complex) -> "GridFunction":
        return GridFunction(grid, np.full(grid.n + 1, value, dtype=np.complex128))


def _require_same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """Trapezoid approximation of ``integral conj(f) * g`` over ``[0, d]``.

    Antilinear in ``f``, linear in ``g``.  Raises
    :class:`GridMismatchError` when the grids differ.
    """
    _require_same_grid(f, g)
    return complex(np.sum(f.grid.weights * np.conj(f.values) * g.values))


def norm(f: GridFunction) -> float:
    """Quadrature L2 norm, ``sqrt((f, f))``."""
    value = np.sum(f.grid.weights * np.abs(f.values) ** 2)
    return float(np.sqrt(max(value.real, 0.0)))


def cumulative_integral(f: GridFunction) -> GridFunction:
    """Running integral from 0, by cumulative composite trapezoid.

    The result at node 0 is exactly ``0``; at node ``i`` it is the
    trapezoid sum over ``[0, x_i]``.
    """
    segments = 0.5 * f.grid.h * (f.values[1:] + f.values[:-1])
    running = np.concatenate(([0.0 + 0.0j], np.cumsum(segments)))
    return GridFunction(f.grid, running)


def sample(f: Callable[[NDArray[np.float64]], NDArray[np.complex128]], grid: Grid) -> GridFunction:
    """Evaluate a callable (e.g. an analytic test function) on the grid nodes."""
    values = np.asarray(f(grid.nodes), dtype=np.complex128)
    return GridFunction(grid, values)


# ---------------------------------------------------------------------------
# JSON wire/file format: {"d": float, "n": int, "values": [[re, im], ...]}
# ---------------------------------------------------------------------------

def grid_function_to_dict(f: GridFunction) -> dict:
    pairs = [[float(v.real), float(v.imag)] for v in f.values]
    return {"d": float(f.grid.d), "n": int(f.grid.n), "values": pairs}


def grid_function_from_dict(payload: dict) -> GridFunction:
    grid = Grid(d=float(payload["d"]), n=int(payload["n"]))
    raw = payload["values"]
    if len(raw) != grid.n + 1:
        raise ValueError(f"expected {grid.n + 1} value pairs, got {len(raw)}")
    values = np.array([complex(re, im) for re, im in raw], dtype=np.complex128)
    return GridFunction(grid, values)


def save_grid_function(f: GridFunction, path: str | Path) -> None:
    Path(path).write_text(json.dumps(grid_function_to_dict(f)))


def load_grid_function(path: str | Path) -> GridFunction:
    return grid_function_from_dict(json.loads(Path(path).read_text()))

"""Radial grids, numerical differentiation, and quadrature.

Everything downstream works with scalar functions of the geodesic radius
sampled on a :class:`RadialGrid`.  A :class:`RadialFunction` couples node
values with optional analytic callbacks; finite differences are the fallback
when no callback is available.

Numerical conventions used package-wide:

* finite differences are second order (central stencils inside, one-sided at
  the endpoints), also on non-uniform grids;
* the default tolerance for "equals" assertions on finite-differenced
  quantities is ``10 * h**2`` with ``h`` the local step (``grid_tolerance``);
* cumulative quadrature over node values is Simpson-based; machine-accuracy
  cumulative integrals of smooth callbacks use composite 5-point
  Gauss-Legendre (:func:`cumulative_gauss`).
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import cumulative_simpson

from .errors import InsufficientNodesError, InvalidRangeError, OutOfGridError

#: Minimum node count for any grid.
MIN_NODES = 16

_GAUSS_X, _GAUSS_W = leggauss(5)


@dataclasses.dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing radii from ``r_min`` to ``r_max``.

    ``spacing_kind`` is ``"uniform"`` or ``"geometric"``; geometric grids
    require ``r_min > 0``.
    """

    r_min: float
    r_max: float
    nodes: np.ndarray
    spacing_kind: str

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        if nodes.size < MIN_NODES:
            raise InvalidRangeError(f"need at least {MIN_NODES} nodes, got {nodes.size}")
        if not (0.0 <= self.r_min < self.r_max):
            raise InvalidRangeError(f"bad radial range [{self.r_min}, {self.r_max}]")
        if nodes[0] != self.r_min or nodes[-1] != self.r_max:
            raise InvalidRangeError("nodes must start at r_min and end at r_max")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidRangeError("nodes must be strictly increasing")

    @property
    def n(self) -> int:
        return int(self.nodes.size)

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def first_step(self) -> float:
        return float(self.nodes[1] - self.nodes[0])

    @property
    def local_steps(self) -> np.ndarray:
        """Per-node step scale: the larger of the two adjacent spacings."""
        h = self.steps
        out = np.empty(self.n)
        out[0] = h[0]
        out[-1] = h[-1]
        out[1:-1] = np.maximum(h[:-1], h[1:])
        return out

    def contains(self, r: float) -> bool:
        return self.r_min <= r <= self.r_max


def grid_tolerance(grid: RadialGrid, factor: float = 10.0) -> np.ndarray:
    """Per-node tolerance ``factor * h_local**2`` for O(h^2) quantities."""
    return factor * grid.local_steps**2


def make_grid(r_min: float, r_max: float, n: int, kind: str = "uniform") -> RadialGrid:
    """Build a uniform or geometric grid of ``n`` nodes on ``[r_min, r_max]``.

    Raises
    ------
    InvalidRangeError
        if ``r_min >= r_max``, ``n < 16``, or a geometric grid starts at 0.
    """
    if n < MIN_NODES or not (0.0 <= r_min < r_max):
        raise InvalidRangeError(
            f"invalid grid request r_min={r_min} r_max={r_max} n={n}"
        )
    if kind == "uniform":
        nodes = np.linspace(r_min, r_max, n)
    elif kind == "geometric":
        if r_min <= 0.0:
            raise InvalidRangeError("geometric spacing requires r_min > 0")
        nodes = np.geomspace(r_min, r_max, n)
    else:
        raise InvalidRangeError(f"unknown spacing kind {kind!r}")
    # guard against rounding at the endpoints
    nodes[0] = r_min
    nodes[-1] = r_max
    return RadialGrid(r_min=r_min, r_max=r_max, nodes=nodes, spacing_kind=kind)


@dataclasses.dataclass(frozen=True, eq=False)
class RadialFunction:
    """Scalar function of the radius: node values + optional analytic callbacks.

    ``derivs`` holds callables for derivative orders 1..3 (``None`` where
    unavailable).  When a callback exists it is the preferred derivative
    source; finite differences are used otherwise.
    """

    grid: RadialGrid
    values: np.ndarray
    value_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    derivs: Sequence[Optional[Callable[[np.ndarray], np.ndarray]]] = (None, None, None)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise InvalidRangeError(
                f"values length {values.size} != node count {self.grid.n}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        d = tuple(self.derivs) + (None,) * (3 - len(self.derivs))
        object.__setattr__(self, "derivs", d[:3])

    # -- evaluation ---------------------------------------------------------

    def __call__(self, r):
        """Evaluate at radius ``r`` (callback if available, else interpolation)."""
        if self.value_fn is not None:
            out = self.value_fn(np.asarray(r, dtype=float))
            return float(out) if np.ndim(r) == 0 else out
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < self.grid.r_min) or np.any(r_arr > self.grid.r_max):
            raise OutOfGridError(f"radius outside grid [{self.grid.r_min}, {self.grid.r_max}]")
        out = np.interp(r_arr, self.grid.nodes, self.values)
        return float(out) if np.isscalar(r) else out

    def has_analytic(self, order: int) -> bool:
        if order == 0:
            return self.value_fn is not None
        return 1 <= order <= 3 and self.derivs[order - 1] is not None

    def derivative_values(self, order: int = 1) -> np.ndarray:
        """Derivative sampled on the grid; analytic when possible."""
        if self.has_analytic(order):
            return np.asarray(self.derivs[order - 1](self.grid.nodes), dtype=float)
        return finite_difference(self.values, self.grid, order)

    def derivative(self, order: int = 1) -> "RadialFunction":
        """Derivative as a new RadialFunction (callbacks shifted down)."""
        if not 1 <= order <= 3:
            raise InvalidRangeError(f"derivative order {order} not in 1..3")
        vals = self.derivative_values(order)
        shifted = tuple(self.derivs[order:]) + (None,) * order
        fn = self.derivs[order - 1] if self.has_analytic(order) else None
        return RadialFunction(self.grid, vals, value_fn=fn, derivs=shifted)


def sample(
    fn: Callable[[np.ndarray], np.ndarray],
    grid: RadialGrid,
    derivs: Sequence[Optional[Callable]] = (None, None, None),
) -> RadialFunction:
    """Sample an analytic callback onto a grid, keeping it for evaluation."""
    return RadialFunction(grid, np.asarray(fn(grid.nodes), dtype=float), value_fn=fn, derivs=derivs)


def finite_difference(values: np.ndarray, grid: RadialGrid, order: int) -> np.ndarray:
    """Second-order finite differences on (possibly non-uniform) nodes."""
    if not 1 <= order <= 3:
        raise InvalidRangeError(f"derivative order {order} not in 1..3")
    if grid.n < order + 2:
        raise InsufficientNodesError(f"{grid.n} nodes cannot support order {order}")
    out = np.asarray(values, dtype=float)
    for _ in range(order):
        out = np.gradient(out, grid.nodes, edge_order=2)
    return out


def differentiate(f: RadialFunction, order: int = 1) -> RadialFunction:
    """Finite-difference derivative of a sampled function.

    Central differences on interior nodes, second-order one-sided stencils at
    the endpoints; exact for quadratics (order 1).  This deliberately ignores
    analytic callbacks — it is the measurement side of invariant checks.
    """
    vals = finite_difference(f.values, f.grid, order)
    return RadialFunction(f.grid, vals)


def integrate_cumulative(f: RadialFunction) -> RadialFunction:
    """Cumulative integral with F(r_min) = 0 (composite Simpson on nodes)."""
    vals = cumulative_simpson(f.values, x=f.grid.nodes, initial=0.0)
    return RadialFunction(f.grid, vals)


def pole_refined_partition(nodes: np.ndarray, points: int = 81, inner: float = 1e-8) -> np.ndarray:
    """Integration partition covering ``[0, nodes[-1]]``, geometrically graded
    near the pole.

    Contains every node of ``nodes``.  The span up to the first positive node
    is subdivided down to ``inner`` times that radius, so that splines built
    on the partition stay accurate for integrands later divided by r- or
    r^2-scale factors (weight slopes, curvature combinations).
    """
    nodes = np.asarray(nodes, dtype=float)
    r1 = nodes[1] if nodes[0] == 0.0 else nodes[0]
    prefix = r1 * np.geomspace(inner, 1.0, points)
    rest = nodes[nodes > r1]
    return np.concatenate([[0.0], prefix, rest])


def cumulative_gauss(
    fn: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    refine: int = 4,
) -> np.ndarray:
    """Cumulative integral of a smooth callback, machine accuracy.

    Each node interval is split into ``refine`` pieces, each integrated with
    5-point Gauss-Legendre; partial sums are returned at the nodes
    (``out[0] = 0``).  All evaluation points are assembled into one vectorized
    call to ``fn``.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size < 2:
        return np.zeros(nodes.shape)
    # subinterval edges: shape (n_intervals, refine+1)
    frac = np.linspace(0.0, 1.0, refine + 1)
    lo = nodes[:-1, None] + np.diff(nodes)[:, None] * frac[None, :-1]
    hi = nodes[:-1, None] + np.diff(nodes)[:, None] * frac[None, 1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    # evaluation points: shape (n_intervals, refine, 5)
    pts = mid[..., None] + half[..., None] * _GAUSS_X
    vals = fn(pts.ravel()).reshape(pts.shape)
    pieces = (half * (vals @ _GAUSS_W)).sum(axis=1)
    out = np.empty(nodes.shape)
    out[0] = 0.0
    np.cumsum(pieces, out=out[1:])
    return out


def indefinite_gauss(
    fn: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    refine: int = 4,
) -> Callable[[np.ndarray], np.ndarray]:
    """Antiderivative of ``fn`` from ``nodes[0]``, callable at arbitrary points.

    Nodal values come from :func:`cumulative_gauss`; between nodes the partial
    segment is integrated on the fly with a single 5-point rule.  Unlike a
    spline fitted through the nodal values, the result keeps quadrature-level
    accuracy *between* nodes too, which matters for integrals later divided by
    vanishing factors (e.g. r^2 near a pole).
    """
    nodes = np.asarray(nodes, dtype=float)
    acc = cumulative_gauss(fn, nodes, refine=refine)

    def antiderivative(r):
        rr = np.atleast_1d(np.asarray(r, dtype=float))
        idx = np.clip(np.searchsorted(nodes, rr, side="right") - 1, 0, nodes.size - 2)
        half = 0.5 * (rr - nodes[idx])
        mid = nodes[idx] + half
        pts = mid[:, None] + half[:, None] * _GAUSS_X
        vals = np.asarray(fn(pts.ravel()), dtype=float).reshape(pts.shape)
        out = acc[idx] + half * (vals @ _GAUSS_W)
        return out if np.ndim(r) else float(out[0])

    antiderivative.nodes = nodes  # type: ignore[attr-defined]
    antiderivative.nodal_values = acc  # type: ignore[attr-defined]
    return antiderivative

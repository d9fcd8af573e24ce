"""Weighted model-manifold data and curvature/volume/comparison computations.

A model manifold here is ``g = dr^2 + psi(r)^2 dtheta^2`` with measure
``dmu = e^{-f} dnu``.  All geometry reduces to the radial profiles ``psi``
and ``f``:

* drift Laplacian of a radial ``w``:  ``w'' + ((d-1) psi'/psi - f') w'``;
* radial curvature:   ``ric_r = -(d-1) psi''/psi + f''``;
* angular curvature:  ``ric_theta = -psi'' psi + (d-2)(1-(psi')^2) + psi psi' f'``
  (the coefficient of ``dtheta^2``);
* finite virtual dimension ``n > d``: ``ric_r - (f')^2/(n-d)``.

Evaluations at the pole ``r = 0`` raise ``singular-radius``; reports start at
the first node with ``r >= 3h`` (h = first grid step) so finite-difference
noise near the 0/0 limit of ``psi'/psi`` never enters a verdict.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    InvalidDimensionError,
    InvalidRangeError,
    InvalidVirtualDimensionError,
    OutOfGridError,
    SingularRadiusError,
    WarpingNotConcaveError,
)
from .radial_core import (
    RadialFunction,
    RadialGrid,
    cumulative_gauss,
    indefinite_gauss,
    pole_refined_partition,
    sample,
)


def unit_sphere_area(d: int) -> float:
    """Surface area of the unit (d-1)-sphere in R^d."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _as_radii(r, positive: bool = True):
    arr = np.asarray(r, dtype=float)
    if positive and np.any(arr <= 0.0):
        raise SingularRadiusError("evaluation requires r > 0")
    if not positive and np.any(arr < 0.0):
        raise InvalidRangeError("radius must be nonnegative")
    return arr


def _maybe_scalar(x, template):
    return float(x) if np.isscalar(template) or np.ndim(template) == 0 else x


@dataclasses.dataclass(frozen=True, eq=False)
class ModelManifold:
    """Dimension plus warping and weight profiles on a shared grid.

    ``alpha`` records the linear slope of ``psi`` at infinity when known;
    ``weight_from_psi`` marks weights obtained from the concave-warping
    recipe (it enables closed-form cross-checks downstream).
    """

    d: int
    psi: RadialFunction
    f: RadialFunction
    f0: float = 0.0
    alpha: Optional[float] = None
    weight_from_psi: bool = False

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 2:
            raise InvalidDimensionError(f"dimension must be an integer >= 2, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if not np.array_equal(self.psi.grid.nodes, self.f.grid.nodes):
            raise InvalidRangeError("psi and f must share one grid")
        r = self.grid.nodes
        pos = r > 0
        psi_vals = self.psi.values
        if np.any(psi_vals[pos] <= 0):
            raise InvalidRangeError("warping must be positive for r > 0")
        if np.any(self.psi.derivative_values(1)[pos] <= 0):
            raise InvalidRangeError("warping slope must be positive for r > 0")
        object.__setattr__(self, "_cache", {})

    # -- structure ----------------------------------------------------------

    @property
    def grid(self) -> RadialGrid:
        return self.psi.grid

    @property
    def report_start_radius(self) -> float:
        """Smallest radius used in verdicts: 3 local steps from the pole."""
        return 3.0 * self.grid.first_step

    def report_nodes(self, r_max: Optional[float] = None) -> np.ndarray:
        r = self.grid.nodes
        keep = (r >= max(self.report_start_radius, np.finfo(float).tiny)) & (r > 0)
        if r_max is not None:
            keep &= r <= r_max
        return r[keep]

    # -- profile evaluation -------------------------------------------------

    def _profile_at(self, rf: RadialFunction, order: int, r):
        if order == 0:
            if rf.value_fn is not None:
                return rf.value_fn(np.asarray(r, dtype=float))
            return np.interp(r, self.grid.nodes, rf.values)
        if rf.has_analytic(order):
            return rf.derivs[order - 1](np.asarray(r, dtype=float))
        key = (id(rf), order)
        table = self._cache.setdefault("deriv_samples", {})
        if key not in table:
            table[key] = rf.derivative_values(order)
        return np.interp(r, self.grid.nodes, table[key])

    def psi_at(self, r, order: int = 0):
        return self._profile_at(self.psi, order, r)

    def f_at(self, r, order: int = 0):
        return self._profile_at(self.f, order, r)

    def drift(self, r):
        """L r = (d-1) psi'/psi - f' at r > 0 (the drift of the distance)."""
        rr = _as_radii(r)
        val = (self.d - 1) * self.psi_at(rr, 1) / self.psi_at(rr) - self.f_at(rr, 1)
        return _maybe_scalar(val, r)

    def area_density(self, r):
        """S(r) = e^{-f} psi^{d-1}, the weighted area density (no sphere factor)."""
        rr = np.asarray(r, dtype=float)
        val = np.exp(-self.f_at(rr)) * self.psi_at(rr) ** (self.d - 1)
        return _maybe_scalar(val, r)

    # -- weighted volume ----------------------------------------------------

    def _volume_spline(self) -> CubicSpline:
        if "volume" not in self._cache:
            pts = pole_refined_partition(self.grid.nodes)
            dens = lambda s: np.exp(-self.f_at(s)) * self.psi_at(s) ** (self.d - 1)
            acc = cumulative_gauss(dens, pts)
            self._cache["volume"] = CubicSpline(pts, acc)
        return self._cache["volume"]

    def cumulative_area(self, R):
        """V(R) = integral_0^R e^{-f} psi^{d-1} dr (no sphere factor)."""
        RR = _as_radii(R, positive=False)
        if np.any(RR > self.grid.r_max * (1 + 1e-12)):
            raise OutOfGridError(f"radius beyond grid r_max={self.grid.r_max}")
        return _maybe_scalar(self._volume_spline()(RR), R)


# --------------------------------------------------------------- curvature


def ric_infinity_components(M: ModelManifold, r):
    """Radial and angular curvature components at r > 0.

    Returns ``(ric_r, ric_theta)`` with
    ``ric_r = -(d-1) psi''/psi + f''`` and
    ``ric_theta = -psi'' psi + (d-2)(1-(psi')^2) + psi psi' f'``.
    """
    rr = _as_radii(r)
    psi = M.psi_at(rr)
    dpsi = M.psi_at(rr, 1)
    ddpsi = M.psi_at(rr, 2)
    df = M.f_at(rr, 1)
    ddf = M.f_at(rr, 2)
    ric_r = -(M.d - 1) * ddpsi / psi + ddf
    ric_th = -ddpsi * psi + (M.d - 2) * (1.0 - dpsi**2) + psi * dpsi * df
    return _maybe_scalar(ric_r, r), _maybe_scalar(ric_th, r)


def ric_n_radial(M: ModelManifold, n: float, r):
    """Radial curvature at finite virtual dimension: ric_r - (f')^2/(n-d).

    ``n = math.inf`` returns the plain radial component; ``n <= d`` raises
    ``invalid-n``.
    """
    if not math.isinf(n) and n <= M.d:
        raise InvalidVirtualDimensionError(f"need n > d = {M.d}, got n = {n}")
    ric_r, _ = ric_infinity_components(M, r)
    if math.isinf(n):
        return ric_r
    rr = _as_radii(r)
    val = ric_r - M.f_at(rr, 1) ** 2 / (n - M.d)
    return _maybe_scalar(val, r)


def weighted_laplacian_radial(M: ModelManifold, w: RadialFunction, r):
    """Drift Laplacian of a radial function: w'' + ((d-1) psi'/psi - f') w'."""
    rr = _as_radii(r)
    w1 = M._profile_at(w, 1, rr)
    w2 = M._profile_at(w, 2, rr)
    val = w2 + M.drift(rr) * w1
    return _maybe_scalar(val, r)


def warping_slope_energy(M: ModelManifold):
    """Cached antiderivative r -> int_0^r (psi')^2 ds.

    Drives both the closed-form distance Laplacian of warping-derived weights
    and the sharp-comparison defect chi = int (psi')^2 - psi^2/r.
    """
    if "int_dpsi_sq" not in M._cache:
        pts = pole_refined_partition(M.grid.nodes)
        M._cache["int_dpsi_sq"] = indefinite_gauss(lambda s: M.psi_at(s, 1) ** 2, pts)
    return M._cache["int_dpsi_sq"]


def laplacian_of_distance(M: ModelManifold, r, check_closed_form: Optional[bool] = None):
    """L r, the drift Laplacian of the distance from the pole.

    For weights produced by :func:`weight_from_warping` the closed form
    ``(d-1) * int_0^r (psi')^2 / psi^2`` must agree with the generic value;
    the agreement is verified (to 1e-8 relative) unless explicitly disabled.
    """
    generic = M.drift(r)
    if check_closed_form is None:
        check_closed_form = M.weight_from_psi
    if check_closed_form:
        if not M.weight_from_psi:
            raise InvalidRangeError("closed form only valid for warping-derived weights")
        rr = _as_radii(r)
        closed = (M.d - 1) * warping_slope_energy(M)(rr) / M.psi_at(rr) ** 2
        err = np.max(np.abs(closed - np.asarray(generic)) / (1.0 + np.abs(generic)))
        if err > 1e-8:
            raise ArithmeticError(
                f"closed-form distance Laplacian disagrees with generic value ({err:.2e})"
            )
    return generic


def weighted_volume(M: ModelManifold, R):
    """mu(B_R) = |S^{d-1}| * int_0^R e^{-f} psi^{d-1} dr."""
    return unit_sphere_area(M.d) * M.cumulative_area(R)


# ----------------------------------------------------------------- reports


@dataclasses.dataclass(frozen=True)
class CurvatureReport:
    """Curvature components sampled on the report nodes."""

    r: np.ndarray
    ric_r: np.ndarray
    ric_theta: np.ndarray
    ric_r_n: Optional[np.ndarray]
    n: Optional[float]

    @property
    def min_ric_r(self) -> float:
        return float(self.ric_r.min())

    @property
    def min_ric_theta(self) -> float:
        return float(self.ric_theta.min())


def curvature_report(M: ModelManifold, n: Optional[float] = None) -> CurvatureReport:
    r = M.report_nodes()
    ric_r, ric_th = ric_infinity_components(M, r)
    ric_n = None if n is None else np.asarray(ric_n_radial(M, n, r))
    return CurvatureReport(r=r, ric_r=np.asarray(ric_r), ric_theta=np.asarray(ric_th), ric_r_n=ric_n, n=n)


@dataclasses.dataclass(frozen=True)
class ComparisonReport:
    """Distance-Laplacian and volume comparison verdicts with fitted constants."""

    r: np.ndarray
    sharp_laplacian_holds: bool
    sharp_max_violation: float
    rough_constant: float
    volume_constant: float
    parabolicity_integral: float
    tail_exponent: float
    parabolic: bool


def comparison_report(M: ModelManifold, R_max: float) -> ComparisonReport:
    """Evaluate L r and volume growth on the grid up to ``R_max``.

    * sharp comparison:  L r <= (d-1)/r, max violation reported;
    * rough comparison:  least C with L r <= C/r, i.e. max of r * L r;
    * volume:            least C with mu(B_R) <= C R^d over R >= 1;
    * parabolicity:      the tail integral of 1/S; the verdict fits
      log(1/S) against log(r) on the top decade and calls the manifold
      non-parabolic when the fitted exponent is below -1 (integrable tail).
    """
    if R_max > M.grid.r_max * (1 + 1e-12):
        raise OutOfGridError(f"R_max={R_max} beyond grid r_max={M.grid.r_max}")
    r = M.report_nodes(R_max)
    Lr = np.asarray(M.drift(r))
    violation = Lr - (M.d - 1) / r
    sharp_max = float(violation.max())
    sharp_holds = sharp_max <= 1e-12 * max(1.0, float(np.abs(Lr).max()))
    rough = float((r * Lr).max())

    r_vol = r[r >= 1.0] if np.any(r >= 1.0) else r[-1:]
    vols = np.asarray(weighted_volume(M, r_vol))
    volume_constant = float((vols / r_vol**M.d).max())

    tail = r[r >= R_max / 10.0]
    dens = np.asarray(M.area_density(tail)) * unit_sphere_area(M.d)
    slope = float(np.polyfit(np.log(tail), np.log(1.0 / dens), 1)[0])
    integral = float(np.trapezoid(1.0 / dens, tail))
    return ComparisonReport(
        r=r,
        sharp_laplacian_holds=sharp_holds,
        sharp_max_violation=sharp_max,
        rough_constant=rough,
        volume_constant=volume_constant,
        parabolicity_integral=integral,
        tail_exponent=slope,
        parabolic=slope >= -1.0 - 1e-9,
    )


# ----------------------------------------------------- weight construction


def weight_from_warping(psi: RadialFunction, d: int, f0: float = 0.0) -> RadialFunction:
    """Weight profile determined by a strictly concave warping.

    Solves ``f'' + 2 (psi'/psi) f' = (d-1) psi''/psi`` with ``f(0) = f0`` and
    ``f'(0) = 0`` through its first-order reduction

        f'(r) = (d-1) * [ int_0^r psi'' psi ds ] / psi(r)^2 ,

    evaluated by composite Gauss-Legendre quadrature on a refinement of the
    grid.  Concavity (``psi'' < 0`` for r > 0) is required; it forces
    ``f' < 0`` for all r > 0.

    Raises
    ------
    WarpingNotConcaveError
        if ``psi'' >= 0`` at any grid node with r > 0.
    """
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d}")
    grid = psi.grid
    r_pos = grid.nodes > 0
    if np.any(psi.derivative_values(2)[r_pos] >= 0):
        raise WarpingNotConcaveError("psi'' < 0 for r > 0 is required")
    if np.any(psi.derivative_values(1)[r_pos] <= 0):
        raise InvalidRangeError("warping slope must stay positive")

    if psi.has_analytic(0) and psi.has_analytic(1) and psi.has_analytic(2):
        psi0: Callable = psi.value_fn
        psi1: Callable = psi.derivs[0]
        psi2: Callable = psi.derivs[1]
    else:
        spl = CubicSpline(grid.nodes, psi.values)
        psi0, psi1, psi2 = spl, spl.derivative(1), spl.derivative(2)

    nodes = grid.nodes
    # The slope divides the accumulated integral by psi^2 ~ r^2, so F needs
    # quadrature-level accuracy between nodes (a fitted spline is not enough)
    # and a partition graded into the pole.
    pts = pole_refined_partition(nodes)
    F = indefinite_gauss(lambda s: psi2(s) * psi0(s), pts)

    def f_prime(r):
        rr = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (d - 1) * np.atleast_1d(F(rr)) / np.atleast_1d(psi0(rr)) ** 2
        out = np.where(np.atleast_1d(rr) == 0.0, 0.0, out)
        return out if rr.ndim else float(out[0])

    f_accumulated = indefinite_gauss(f_prime, pts)

    def f_value(r):
        return f_accumulated(r) + f0

    def f_second(r):
        rr = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (d - 1) * psi2(rr) / psi0(rr) - 2.0 * (psi1(rr) / psi0(rr)) * f_prime(rr)
        if np.any(rr == 0.0):
            # limit (d-1) psi'''(0)/3; estimate psi''' from the concavity data
            p3 = psi.derivs[2](0.0) if psi.has_analytic(3) else psi2(1e-6) / 1e-6
            out = np.where(rr == 0.0, (d - 1) * float(p3) / 3.0, out)
        return out

    values = f_accumulated.nodal_values[np.searchsorted(pts, nodes)] + f0
    return RadialFunction(grid, values, value_fn=f_value, derivs=(f_prime, f_second, None))


# ---------------------------------------------------- stock model builders


def euclidean(d: int, grid: RadialGrid) -> ModelManifold:
    """Flat R^d as a model manifold: psi = r, f = 0 (analytic callbacks)."""
    psi = sample(
        lambda r: np.asarray(r, dtype=float),
        grid,
        derivs=(
            lambda r: np.ones_like(np.asarray(r, dtype=float)),
            lambda r: np.zeros_like(np.asarray(r, dtype=float)),
            lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        ),
    )
    zero = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    f = sample(zero, grid, derivs=(zero, zero, zero))
    return ModelManifold(d=d, psi=psi, f=f, f0=0.0, alpha=1.0)


def power_weight(d: int, grid: RadialGrid, coeff: float = 1.0, power: float = 2.0) -> ModelManifold:
    """psi = r with weight f = coeff * r^power (e.g. the Gaussian-type soliton)."""
    e = euclidean(d, grid)
    f = sample(
        lambda r: coeff * np.asarray(r, dtype=float) ** power,
        grid,
        derivs=(
            lambda r: coeff * power * np.asarray(r, dtype=float) ** (power - 1),
            lambda r: coeff * power * (power - 1) * np.asarray(r, dtype=float) ** (power - 2),
            None,
        ),
    )
    return ModelManifold(d=d, psi=e.psi, f=f, f0=0.0, alpha=1.0)


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t**3 * (10.0 + t * (-15.0 + 6.0 * t))


def _smoothstep_d1(t: np.ndarray) -> np.ndarray:
    inside = (t > 0.0) & (t < 1.0)
    t = np.clip(t, 0.0, 1.0)
    return np.where(inside, 30.0 * t**2 * (1.0 - t) ** 2, 0.0)


def _smoothstep_d2(t: np.ndarray) -> np.ndarray:
    inside = (t > 0.0) & (t < 1.0)
    t = np.clip(t, 0.0, 1.0)
    return np.where(inside, 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t), 0.0)


def log_tail_weight(
    d: int,
    grid: RadialGrid,
    beta: float = 2.0,
    blend: tuple[float, float] = (1.5, 3.0),
) -> ModelManifold:
    """psi = r with a weight whose density is ``C r^{2-d} log^beta r`` at infinity.

    ``e^{-f} = h`` with ``h = (1 - eta) + eta * C r^{2-d} log^beta r`` where
    ``eta`` is a quintic smoothstep over the ``blend`` window and ``C`` is
    normalized so the tail formula equals 1 at the window's right edge.  The
    weight is exactly constant near the pole (so f'(0) = 0) and exactly the
    logarithmic tail beyond the window.
    """
    lo, hi = blend
    if not (1.0 < lo < hi):
        raise InvalidRangeError(f"blend window must sit right of r = 1, got {blend}")
    C = hi ** (d - 2) / math.log(hi) ** beta

    def tail(r):
        return C * r ** (2.0 - d) * np.log(r) ** beta

    def tail_d1(r):
        return C * r ** (1.0 - d) * np.log(r) ** (beta - 1) * ((2.0 - d) * np.log(r) + beta)

    def tail_d2(r):
        lg = np.log(r)
        poly = (2.0 - d) * (1.0 - d) * lg**2 + beta * (3.0 - 2.0 * d) * lg + beta * (beta - 1.0)
        return C * r ** (-d) * lg ** (beta - 2) * poly

    w = hi - lo

    def h(r):
        rr = np.asarray(r, dtype=float)
        eta = _smoothstep((rr - lo) / w)
        safe = np.maximum(rr, lo)  # tail(r) only sampled where eta > 0
        return (1.0 - eta) + eta * tail(safe)

    def h1(r):
        rr = np.asarray(r, dtype=float)
        t = (rr - lo) / w
        eta, deta = _smoothstep(t), _smoothstep_d1(t) / w
        safe = np.maximum(rr, lo)
        return deta * (tail(safe) - 1.0) + eta * tail_d1(safe)

    def h2(r):
        rr = np.asarray(r, dtype=float)
        t = (rr - lo) / w
        eta, deta, ddeta = _smoothstep(t), _smoothstep_d1(t) / w, _smoothstep_d2(t) / w**2
        safe = np.maximum(rr, lo)
        return ddeta * (tail(safe) - 1.0) + 2.0 * deta * tail_d1(safe) + eta * tail_d2(safe)

    f_fn = lambda r: -np.log(h(r))
    f_d1 = lambda r: -h1(r) / h(r)
    f_d2 = lambda r: -h2(r) / h(r) + (h1(r) / h(r)) ** 2

    e = euclidean(d, grid)
    f = sample(f_fn, grid, derivs=(f_d1, f_d2, None))
    return ModelManifold(d=d, psi=e.psi, f=f, f0=0.0, alpha=1.0)

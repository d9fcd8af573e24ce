"""Bubbles, the v-transform and the P-function machinery on radial data.

For a positive solution u of -Lu = u^p set v = u^{-(p-1)/2} and
m/2 = (p+1)/(p-1); for -Lu = e^u set v = e^{-u/2} and m = 2.  Then

    P := Lv = ((m/2) v'^2 + c_m) / v,       c_m = 2/(m-2)  (= 1/2 for m = 2),

and rigidity questions reduce to sign and growth properties of

    k[v] = |Hess v|^2 - P^2/m + Ric(v', v')            (radial Hessian
           eigenvalues: v'' once and (psi'/psi) v' with multiplicity d-1),

its lower bound W_f, the divergence identity m v^{1-m} k = div_f(v^{2-m} P')
and weighted integral estimates over balls.  Everything here is specialized
to radial profiles on model manifolds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import (
    InvalidBranchError,
    InvalidDimensionError,
    InvalidRangeError,
    InvalidVirtualDimensionError,
    NonpositiveSolutionError,
    OutOfGridError,
    OutOfRangeError,
    QOutOfRangeError,
    SingularRadiusError,
    SuperharmonicityError,
)
from .geometry import (
    ModelManifold,
    euclidean,
    ric_infinity_components,
    ric_n_radial,
    unit_sphere_area,
    weighted_laplacian_radial,
    weighted_volume,
)
from .lane_emden import SolutionProfile
from .radial_core import (
    RadialFunction,
    RadialGrid,
    finite_difference,
    indefinite_gauss,
    make_grid,
    pole_refined_partition,
    sample,
)

__all__ = [
    "PFunctionData",
    "SuperharmonicReport",
    "bubble",
    "log_bubble",
    "v_transform",
    "k_functional",
    "w_functional",
    "divergence_identity_residual",
    "fundamental_gap",
    "ibp_residual",
    "integral_estimate_ratio",
    "cheng_yau_ratio",
    "superharmonic_floor_check",
    "radial_cutoff",
]


def _default_bubble_grid() -> RadialGrid:
    return make_grid(0.0, 200.0, 2001, "uniform")


def bubble(d: int, b: float, grid: Optional[RadialGrid] = None) -> SolutionProfile:
    """Explicit entire solution u = (a + b r^2)^{-(d-2)/2} at the critical
    power on flat space, normalized by d(d-2)ab = 1."""
    if int(d) != d or d < 3:
        raise InvalidDimensionError(f"bubbles need an integer d >= 3, got {d}")
    if b <= 0.0:
        raise InvalidRangeError(f"bubble width must be positive, got b = {b}")
    d = int(d)
    a = 1.0 / (d * (d - 2) * b)
    k = (d - 2) / 2.0
    if grid is None:
        grid = _default_bubble_grid()

    def u(r):
        rr = np.asarray(r, dtype=float)
        return (a + b * rr**2) ** (-k)

    def du(r):
        rr = np.asarray(r, dtype=float)
        return -2.0 * k * b * rr * (a + b * rr**2) ** (-k - 1)

    def ddu(r):
        rr = np.asarray(r, dtype=float)
        w = a + b * rr**2
        return -2.0 * k * b * w ** (-k - 1) + 4.0 * k * (k + 1) * b**2 * rr**2 * w ** (-k - 2)

    def dddu(r):
        rr = np.asarray(r, dtype=float)
        w = a + b * rr**2
        return 12.0 * k * (k + 1) * b**2 * rr * w ** (-k - 2) - 8.0 * k * (k + 1) * (
            k + 2
        ) * b**3 * rr**3 * w ** (-k - 3)

    M = euclidean(d, grid)
    u_fn = sample(u, grid, derivs=(du, ddu, dddu))
    up_fn = sample(du, grid, derivs=(ddu, dddu, None))
    return SolutionProfile(
        manifold=M,
        p=(d + 2.0) / (d - 2.0),
        ell=a ** (-k),
        u=u_fn,
        u_prime=up_fn,
        status="global-positive",
        r_end=grid.r_max,
        r_star=None,
        tol=1e-14,
    )


def log_bubble(b: float, grid: Optional[RadialGrid] = None) -> SolutionProfile:
    """Explicit solution u = -2 log(a + b r^2) of -Lu = e^u on the flat
    surface, normalized by 8ab = 1."""
    if b <= 0.0:
        raise InvalidRangeError(f"bubble width must be positive, got b = {b}")
    a = 1.0 / (8.0 * b)
    if grid is None:
        grid = _default_bubble_grid()

    def u(r):
        rr = np.asarray(r, dtype=float)
        return -2.0 * np.log(a + b * rr**2)

    def du(r):
        rr = np.asarray(r, dtype=float)
        return -4.0 * b * rr / (a + b * rr**2)

    def ddu(r):
        rr = np.asarray(r, dtype=float)
        w = a + b * rr**2
        return -4.0 * b * (a - b * rr**2) / w**2

    def dddu(r):
        rr = np.asarray(r, dtype=float)
        w = a + b * rr**2
        return 24.0 * b**2 * rr / w**2 - 32.0 * b**3 * rr**3 / w**3

    M = euclidean(2, grid)
    u_fn = sample(u, grid, derivs=(du, ddu, dddu))
    up_fn = sample(du, grid, derivs=(ddu, dddu, None))
    return SolutionProfile(
        manifold=M,
        p=None,
        ell=-2.0 * math.log(a),
        u=u_fn,
        u_prime=up_fn,
        status="global-positive",
        r_end=grid.r_max,
        r_star=None,
        tol=1e-14,
    )


# ------------------------------------------------------------- v-transform


@dataclass(frozen=True)
class PFunctionData:
    """The transformed profile v, its P-function and the bookkeeping scalars."""

    manifold: ModelManifold
    m: float
    n: float
    v: RadialFunction
    P: RadialFunction
    c_m: float

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})
        finite = np.isfinite(self.v.values)
        if not np.all(self.v.values[finite] > 0.0):
            raise NonpositiveSolutionError("transformed profile must stay positive")


def v_transform(profile: SolutionProfile, n: float = math.inf) -> PFunctionData:
    """Build v, m, c_m and P from a solution profile.

    Power nonlinearity: v = u^{-(p-1)/2}, m = 2(p+1)/(p-1); exponential
    nonlinearity: v = e^{-u/2}, m = 2.  The virtual dimension n only selects
    branches downstream; it must satisfy n >= d (n = inf allowed).
    """
    M = profile.manifold
    if not math.isinf(n) and n < M.d:
        raise InvalidVirtualDimensionError(f"need n >= d = {M.d}, got n = {n}")
    u, du = profile.u, profile.u_prime
    if profile.p is None:
        m = 2.0
        c_m = 0.5

        def v_fn(r):
            return np.exp(-0.5 * np.asarray(u(r), dtype=float))

        def dv_fn(r):
            vv = v_fn(r)
            return -0.5 * vv * np.asarray(du(r), dtype=float)

        def ddv_fn(r):
            vv = v_fn(r)
            du_r = np.asarray(du(r), dtype=float)
            ddu_r = np.asarray(u.derivs[1](r), dtype=float)
            return vv * (0.25 * du_r**2 - 0.5 * ddu_r)

        v_vals = np.exp(-0.5 * u.values)
    else:
        if profile.r_star is not None:
            raise NonpositiveSolutionError(
                "profile crosses zero; the power transform needs u > 0"
            )
        p = profile.p
        m = 2.0 * (p + 1.0) / (p - 1.0)
        c_m = (p - 1.0) / 2.0  # = 2/(m-2)
        gamma = -(p - 1.0) / 2.0

        def v_fn(r):
            return np.asarray(u(r), dtype=float) ** gamma

        def dv_fn(r):
            uu = np.asarray(u(r), dtype=float)
            return gamma * uu ** (gamma - 1.0) * np.asarray(du(r), dtype=float)

        def ddv_fn(r):
            uu = np.asarray(u(r), dtype=float)
            du_r = np.asarray(du(r), dtype=float)
            ddu_r = np.asarray(u.derivs[1](r), dtype=float)
            return gamma * (gamma - 1.0) * uu ** (gamma - 2.0) * du_r**2 + gamma * uu ** (
                gamma - 1.0
            ) * ddu_r

        with np.errstate(invalid="ignore"):
            v_vals = u.values**gamma

    def P_fn(r):
        vv = np.asarray(v_fn(r), dtype=float)
        dv = np.asarray(dv_fn(r), dtype=float)
        return ((m / 2.0) * dv**2 + c_m) / vv

    def dP_fn(r):
        vv = np.asarray(v_fn(r), dtype=float)
        dv = np.asarray(dv_fn(r), dtype=float)
        ddv = np.asarray(ddv_fn(r), dtype=float)
        P = ((m / 2.0) * dv**2 + c_m) / vv
        return (dv / vv) * (m * ddv - P)

    grid = M.grid
    dv_vals = np.full(grid.n, np.nan)
    P_vals = np.full(grid.n, np.nan)
    ok = np.isfinite(v_vals)
    if np.any(ok):
        dv_vals[ok] = dv_fn(grid.nodes[ok])
        P_vals[ok] = P_fn(grid.nodes[ok])
    v = RadialFunction(grid, v_vals, value_fn=v_fn, derivs=(dv_fn, ddv_fn, None))
    P = RadialFunction(grid, P_vals, value_fn=P_fn, derivs=(dP_fn, None, None))
    return PFunctionData(manifold=M, m=m, n=float(n), v=v, P=P, c_m=c_m)


# ------------------------------------------------------ pointwise functionals


def _radial_pieces(data: PFunctionData, r: np.ndarray):
    M = data.manifold
    dv = np.asarray(data.v.derivs[0](r), dtype=float)
    ddv = np.asarray(data.v.derivs[1](r), dtype=float)
    P = np.asarray(data.P(r), dtype=float)
    tangential = (np.asarray(M.psi_at(r, 1)) / np.asarray(M.psi_at(r))) * dv
    return dv, ddv, P, tangential


def k_functional(data: PFunctionData, r, check_decomposition: Optional[bool] = None):
    """k[v] = |Hess v|^2 - P^2/m + Ric(v',v') at r > 0.

    For finite n the equivalent four-term decomposition

        k = (d-1)/d (v'' - (psi'/psi) v')^2 + ((m-n)/(mn)) P^2
            + ((n-d)/(nd)) (P + n/(n-d) f' v')^2 + Ric_n (v')^2

    is evaluated too and must agree to 1e-8 relative (a strong consistency
    check on the curvature plumbing).  Vanishes identically on bubbles.
    """
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr <= 0.0):
        raise SingularRadiusError("the Hessian split needs r > 0")
    M = data.manifold
    d, m, n = M.d, data.m, data.n
    dv, ddv, P, tang = _radial_pieces(data, rr)
    ric_r, _ = ric_infinity_components(M, rr)
    hess_sq = ddv**2 + (d - 1) * tang**2
    k = hess_sq - P**2 / m + np.asarray(ric_r) * dv**2

    if check_decomposition is None:
        check_decomposition = not math.isinf(n)
    if check_decomposition:
        if math.isinf(n):
            raise InvalidVirtualDimensionError("the decomposition check needs finite n")
        fv = np.asarray(M.f_at(rr, 1), dtype=float) * dv
        t1 = ((d - 1.0) / d) * (ddv - tang) ** 2
        t2 = ((m - n) / (m * n)) * P**2
        if n == d:
            if np.max(np.abs(fv)) > 1e-12 * (1.0 + np.max(np.abs(P))):
                raise InvalidVirtualDimensionError(
                    "n = d requires a trivial weight (f' = 0)"
                )
            t3 = np.zeros_like(P)
            ric_n = np.asarray(ric_r)
        else:
            t3 = ((n - d) / (n * d)) * (P + (n / (n - d)) * fv) ** 2
            ric_n = np.asarray(ric_n_radial(M, n, rr))
        k_alt = t1 + t2 + t3 + ric_n * dv**2
        scale = 1.0 + np.abs(hess_sq) + P**2 / m
        worst = float(np.max(np.abs(k - k_alt) / scale))
        if worst > 1e-8:
            raise ArithmeticError(
                f"Hessian-split decomposition mismatch: relative gap {worst:.3e}"
            )
    return k if np.ndim(r) else float(k[0])


def w_functional(data: PFunctionData, r):
    """Lower-bound functional W_f for k[v]; branch selected by n.

    n = d needs a trivial weight, d < n < inf needs m > d (else the branch
    is undefined, ``invalid-branch``), and n = inf mixes P with f'v' and may
    go negative when f'v' does.
    """
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr <= 0.0):
        raise SingularRadiusError("the lower bound needs r > 0")
    M = data.manifold
    d, m, n = M.d, data.m, data.n
    dv, ddv, P, tang = _radial_pieces(data, rr)
    fv = np.asarray(M.f_at(rr, 1), dtype=float) * dv
    ric_r, _ = ric_infinity_components(M, rr)

    if math.isinf(n):
        w = ((m - d) / m**2) * P**2 + (2.0 / m) * P * fv + np.asarray(ric_r) * dv**2
    elif n == d:
        if np.max(np.abs(fv)) > 1e-12 * (1.0 + np.max(np.abs(P))):
            raise InvalidBranchError("the n = d branch requires a trivial weight")
        lap = ddv + (d - 1) * tang  # plain Laplacian; equals P when f is constant
        w = ((m - d) / m**2) * lap**2 + np.asarray(ric_r) * dv**2
    else:
        if m <= d:
            raise InvalidBranchError(
                f"the finite-n branch needs m > d (got m = {m}, d = {d})"
            )
        w = (
            (1.0 / (m - d)) * (((m - d) / m) * P + fv) ** 2
            + ((m - n) / ((n - d) * (m - d))) * fv**2
            + np.asarray(ric_n_radial(M, n, rr)) * dv**2
        )
    return w if np.ndim(r) else float(w[0])


def divergence_identity_residual(data: PFunctionData) -> RadialFunction:
    """|m v^{1-m} k[v] - div_f(v^{2-m} P')| on the grid.

    The divergence side is measured: the flux v^{2-m} P' is sampled at the
    nodes and differentiated by finite differences, so the residual carries
    the usual 100 h^2 tier on non-analytic data.  Edge nodes (and the pole)
    are set to NaN.
    """
    M = data.manifold
    grid = M.grid
    nodes = grid.nodes
    pos = nodes > 0.0
    r = nodes[pos]
    m = data.m
    v = np.asarray(data.v(r), dtype=float)
    dP = np.asarray(data.P.derivs[0](r), dtype=float)
    flux = np.zeros(grid.n)
    flux[pos] = v ** (2.0 - m) * dP
    # the flux vanishes at the pole (P' ~ r there)
    dflux = finite_difference(flux, grid, order=1)
    div = np.full(grid.n, np.nan)
    div[pos] = dflux[pos] + np.asarray(M.drift(r)) * flux[pos]
    lhs = np.full(grid.n, np.nan)
    lhs[pos] = m * v ** (1.0 - m) * np.asarray(k_functional(data, r, check_decomposition=False))
    residual = np.abs(lhs - div)
    residual[:2] = np.nan
    residual[-2:] = np.nan
    return RadialFunction(grid, residual)


def fundamental_gap(data: PFunctionData, t: float = 1.0) -> RadialFunction:
    """Slack of the pointwise inequality

        (t - 1/2) P^{t-2} v^{2-m} (P')^2 + m P^{t-1} v^{1-m} W_f
            <= div_f(P^{t-1} v^{2-m} P')

    (nonnegative values mean the inequality holds).  The divergence is again
    a finite-difference measurement; edge nodes are NaN.
    """
    M = data.manifold
    grid = M.grid
    nodes = grid.nodes
    pos = nodes > 0.0
    r = nodes[pos]
    m = data.m
    v = np.asarray(data.v(r), dtype=float)
    P = np.asarray(data.P(r), dtype=float)
    dP = np.asarray(data.P.derivs[0](r), dtype=float)
    flux = np.zeros(grid.n)
    flux[pos] = P ** (t - 1.0) * v ** (2.0 - m) * dP
    dflux = finite_difference(flux, grid, order=1)
    div = dflux[pos] + np.asarray(M.drift(r)) * flux[pos]
    lhs = (t - 0.5) * P ** (t - 2.0) * v ** (2.0 - m) * dP**2 + m * P ** (
        t - 1.0
    ) * v ** (1.0 - m) * np.asarray(w_functional(data, r))
    gap = np.full(grid.n, np.nan)
    gap[pos] = div - lhs
    gap[:2] = np.nan
    gap[-2:] = np.nan
    return RadialFunction(grid, gap)


# ------------------------------------------------------- integral estimates


def _weighted_antiderivative(data: PFunctionData, key, integrand):
    cache = data._cache
    if key not in cache:
        pts = pole_refined_partition(data.manifold.grid.nodes)
        cache[key] = indefinite_gauss(integrand, pts)
    return cache[key]


def ibp_residual(data: PFunctionData, q: float, R: float) -> Tuple[float, float]:
    """Both sides of the integration-by-parts identity with cutoff phi_R^2:

        (m/2 + 1 - q) I[v^{-q} v'^2 phi^2] + c_m I[v^{-q} phi^2]
            = -I[v^{1-q} v' (phi^2)']

    where I integrates against the weighted area measure.  Returns
    ``(lhs, rhs)``; the two agree to quadrature accuracy for every q.
    """
    M = data.manifold
    phi = radial_cutoff(R, M)
    m, c_m = data.m, data.c_m
    sphere = unit_sphere_area(M.d)

    def common(s):
        ss = np.asarray(s, dtype=float)
        vv = np.asarray(data.v(ss), dtype=float)
        dv = np.asarray(data.v.derivs[0](ss), dtype=float)
        S = np.asarray(M.area_density(ss), dtype=float)
        ph = np.asarray(phi(ss), dtype=float)
        dph = np.asarray(phi.derivs[0](ss), dtype=float)
        return vv, dv, S, ph, dph

    def lhs_integrand(s):
        vv, dv, S, ph, _ = common(s)
        return ((m / 2.0 + 1.0 - q) * vv ** (-q) * dv**2 + c_m * vv ** (-q)) * ph**2 * S

    def rhs_integrand(s):
        vv, dv, S, ph, dph = common(s)
        return -(vv ** (1.0 - q)) * dv * 2.0 * ph * dph * S

    top = min(2.0 * R, M.grid.r_max)
    lhs = sphere * _weighted_antiderivative(data, ("ibp-l", q, R), lhs_integrand)(top)
    rhs = sphere * _weighted_antiderivative(data, ("ibp-r", q, R), rhs_integrand)(top)
    return float(lhs), float(rhs)


def integral_estimate_ratio(
    data: PFunctionData,
    q: float,
    R: Union[float, np.ndarray],
    part: str = "auto",
) -> Tuple[np.ndarray, np.ndarray]:
    """(lhs, bound_factor) for the ball estimates on v.

    Part "i" integrates v^{-q}(v'^2 + 1) over B_R and needs 2 <= q < m/2+1;
    part "ii" integrates v^{-q} and needs 0 <= q <= m/2+1.  ``part="auto"``
    picks "i" when its range admits q, else "ii".  The bound factor is
    mu(B_{2R}) R^{-q}; the interesting content is that lhs/bound stays
    bounded over sweeps in R.
    """
    m = data.m
    if part == "auto":
        part = "i" if 2.0 <= q < m / 2.0 + 1.0 else "ii"
    if part == "i":
        if not (2.0 <= q < m / 2.0 + 1.0):
            raise QOutOfRangeError(f"part i needs 2 <= q < m/2+1, got q = {q}")
    elif part == "ii":
        if not (0.0 <= q <= m / 2.0 + 1.0):
            raise QOutOfRangeError(f"part ii needs 0 <= q <= m/2+1, got q = {q}")
    else:
        raise InvalidRangeError(f"unknown part {part!r}")

    M = data.manifold
    RR = np.asarray(R, dtype=float)
    if np.any(2.0 * RR > M.grid.r_max * (1 + 1e-12)):
        raise OutOfGridError("the bound factor needs 2R inside the grid")

    def integrand(s):
        ss = np.asarray(s, dtype=float)
        vv = np.asarray(data.v(ss), dtype=float)
        S = np.asarray(M.area_density(ss), dtype=float)
        if part == "i":
            dv = np.asarray(data.v.derivs[0](ss), dtype=float)
            return vv ** (-q) * (dv**2 + 1.0) * S
        return vv ** (-q) * S

    acc = _weighted_antiderivative(data, ("est", part, q), integrand)
    lhs = unit_sphere_area(M.d) * np.asarray(acc(RR), dtype=float)
    bound = np.asarray(weighted_volume(M, 2.0 * RR), dtype=float) * RR ** (-q)
    if np.ndim(R):
        return lhs, bound
    return float(lhs), float(bound)


def cheng_yau_ratio(profile: SolutionProfile, n: float, R: float) -> float:
    """sup_{B_R} (u'/u)^2 divided by 1/R^2 + sup_{B_{2R}} u^{4/(n-2)}.

    Gradient-estimate sweeps assert this stays bounded in R.  Suprema are
    grid maxima (radial profiles realize ball suprema on radii).
    """
    if n <= 2.0:
        raise InvalidVirtualDimensionError(f"the exponent 4/(n-2) needs n > 2, got {n}")
    M = profile.manifold
    nodes = M.grid.nodes
    if 2.0 * R > profile.r_end * (1 + 1e-12):
        raise OutOfRangeError("need the profile positive on all of B_2R")
    inner = nodes[nodes <= R]
    outer = nodes[nodes <= 2.0 * R]
    u_in = np.asarray(profile.u(inner), dtype=float)
    u_out = np.asarray(profile.u(outer), dtype=float)
    if np.any(u_out <= 0.0):
        raise NonpositiveSolutionError("profile must be positive on B_2R")
    du_in = np.asarray(profile.u_prime(inner), dtype=float)
    num = float(np.max((du_in / u_in) ** 2))
    expo = 0.0 if math.isinf(n) else 4.0 / (n - 2.0)
    den = 1.0 / R**2 + float(np.max(u_out**expo))
    return num / den


@dataclass(frozen=True)
class SuperharmonicReport:
    """Floor comparison u >= A r^{-(kappa-2)} on r >= R."""

    r: np.ndarray
    floor: np.ndarray
    values: np.ndarray
    A: float
    holds: np.ndarray
    all_hold: bool


def superharmonic_floor_check(
    profile: SolutionProfile, kappa: float, R: float
) -> SuperharmonicReport:
    """Positive L-superharmonic profiles dominate A / r^{kappa-2} outside B_R,
    with A = R^{kappa-2} u(R).

    Superharmonicity (Lu <= 0) is verified on the grid first and
    ``superharmonicity-violated`` is raised when it fails; a 1e-12 relative
    slack absorbs roundoff in both checks.
    """
    if kappa <= 2.0:
        raise InvalidRangeError(f"the floor needs kappa > 2, got {kappa}")
    M = profile.manifold
    nodes = M.grid.nodes
    keep = (nodes > 0.0) & (nodes <= profile.r_end * (1 + 1e-12))
    r_all = nodes[keep]
    u_all = np.asarray(profile.u(r_all), dtype=float)
    if np.any(u_all <= 0.0):
        raise NonpositiveSolutionError("floor comparison needs a positive profile")
    lap = np.asarray(weighted_laplacian_radial(M, profile.u, r_all), dtype=float)
    if np.max(lap) > 1e-12 * (1.0 + np.max(np.abs(lap))):
        raise SuperharmonicityError(
            f"profile is not superharmonic: max Lu = {np.max(lap):.3e}"
        )
    if not (0.0 < R <= r_all[-1]):
        raise OutOfRangeError(f"R must lie inside the positive range (0, {r_all[-1]:.6g}]")
    A = R ** (kappa - 2.0) * float(profile.u(R))
    tail = r_all[r_all >= R]
    values = np.asarray(profile.u(tail), dtype=float)
    floor = A * tail ** (-(kappa - 2.0))
    holds = values >= floor * (1.0 - 1e-12)
    return SuperharmonicReport(
        r=tail, floor=floor, values=values, A=A, holds=holds, all_hold=bool(np.all(holds))
    )


# ------------------------------------------------------------------ cutoffs


def _smoothstep(t: np.ndarray) -> np.ndarray:
    return 6.0 * t**5 - 15.0 * t**4 + 10.0 * t**3


def _smoothstep_d1(t: np.ndarray) -> np.ndarray:
    return 30.0 * t**2 * (1.0 - t) ** 2


def _smoothstep_d2(t: np.ndarray) -> np.ndarray:
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)


def radial_cutoff(R: float, M: ModelManifold) -> RadialFunction:
    """C^2 bump: 1 on [0, R], 0 beyond 2R, quintic ramp in between.

    Scaling gives |phi'| <= (15/8)/R and |phi''| <= C/R^2 with constants
    independent of R, and phi'^2 <= C phi / R^2 (the ramp vanishes to third
    order at its outer end).
    """
    if R <= 0.0:
        raise InvalidRangeError("cutoff radius must be positive")
    if 2.0 * R > M.grid.r_max * (1 + 1e-12):
        raise OutOfGridError("cutoff support [0, 2R] must fit inside the grid")

    def t_of(r):
        rr = np.asarray(r, dtype=float)
        return np.clip((rr - R) / R, 0.0, 1.0)

    def phi(r):
        return 1.0 - _smoothstep(t_of(r))

    def dphi(r):
        rr = np.asarray(r, dtype=float)
        t = t_of(rr)
        ramp = (rr > R) & (rr < 2.0 * R)
        return np.where(ramp, -_smoothstep_d1(t) / R, 0.0)

    def ddphi(r):
        rr = np.asarray(r, dtype=float)
        t = t_of(rr)
        ramp = (rr > R) & (rr < 2.0 * R)
        return np.where(ramp, -_smoothstep_d2(t) / R**2, 0.0)

    return sample(phi, M.grid, derivs=(dphi, ddphi, None))

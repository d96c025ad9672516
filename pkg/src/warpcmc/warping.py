"""Warping functions and the warped metric over the hyperbolic disc.

The ambient space is the product of the hyperbolic disc (curvature -1,
geodesic polar coordinates rho, theta) with a real line whose fibre lengths
are scaled by exp(f(rho)).  In these coordinates the metric is

    d rho^2 + sinh(rho)^2 d theta^2 + exp(2 f(rho)) dt^2

so the 3d volume element is exp(f) sinh(rho) and the 2d one is sinh(rho).

Three warping families are provided:

* ``ConstantWarp(c)``   -- f identically c (the Riemannian product for c = 0),
* ``LogCoshWarp()``     -- f(rho) = log(2 cosh rho),
* ``TabulatedWarp``     -- monotone C^1 piecewise cubic through given knots.

Every field exposes f, its derivative, the cumulative weighted disc integral

    cumulative_area(rho) = integral_0^rho exp(f(s)) sinh(s) ds

normalised to vanish at the origin (closed forms for the analytic families,
adaptive quadrature with a memoised knot table for tabulated ones), the
metric coefficients, and the sup-product constant entering the height bound.

``divergence_identity_residual`` checks, by central finite differences on a
3d grid, that the weighted divergence of a vector field splits into a
horizontal divergence of the exp(f)-scaled projection plus a vertical term.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InputError, QuadratureError

__all__ = [
    "MetricCoeffs",
    "WarpField",
    "ConstantWarp",
    "LogCoshWarp",
    "TabulatedWarp",
    "warp_bound_constant",
    "divergence_identity_residual",
]

DEFAULT_QUAD_TOL = 1e-10


def adaptive_quad(fn, a, b, rel_tol=DEFAULT_QUAD_TOL, abs_tol=0.0, limit=200):
    """Adaptive Gauss-Kronrod quadrature; raises QuadratureError on failure."""
    out = quad(fn, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=limit,
               full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3:
        # QUADPACK hit its roundoff floor; accept only if the achieved error
        # is still comfortably inside the request.
        target = max(abs_tol, rel_tol * abs(value), 1e-11 * max(1.0, abs(value)))
        if abserr > target:
            raise QuadratureError(
                f"quadrature did not converge on [{a}, {b}]: "
                f"achieved {abserr:.3e}, requested {target:.3e}",
                achieved=abserr,
            )
    return value


@dataclass(frozen=True)
class MetricCoeffs:
    """Diagonal metric coefficients at a point (all dimensionless)."""
    g_rho_rho: float
    g_theta_theta: float
    g_tt: float


class WarpField:
    """Base class: a radial warping function with derivative and cumulative integral."""

    #: largest radius at which the field may be evaluated
    rho_max = math.inf

    def _check_domain(self, rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0.0):
            raise DomainError("rho must be nonnegative")
        if np.any(rho > self.rho_max):
            raise DomainError(f"rho beyond the tabulated range [0, {self.rho_max}]")
        return rho

    def f(self, rho):
        raise NotImplementedError

    def f_prime(self, rho):
        raise NotImplementedError

    def cumulative_area(self, rho):
        """integral_0^rho exp(f) sinh(s) ds, vanishing at the origin."""
        raise NotImplementedError

    def exp_f(self, rho):
        return np.exp(self.f(rho))

    def metric_coeffs(self, rho):
        rho = self._check_domain(rho)
        return MetricCoeffs(
            g_rho_rho=1.0,
            g_theta_theta=float(np.sinh(rho) ** 2),
            g_tt=float(np.exp(2.0 * self.f(rho))),
        )

    def volume_element(self, rho):
        """exp(f) sinh(rho), the 3d Riemannian volume density in polar coordinates."""
        rho = self._check_domain(rho)
        return np.exp(self.f(rho)) * np.sinh(rho)


class ConstantWarp(WarpField):
    """f identically equal to c; c = 0 is the unwarped Riemannian product."""

    def __init__(self, c=0.0):
        self.c = float(c)

    def __repr__(self):
        return f"ConstantWarp({self.c!r})"

    def f(self, rho):
        rho = self._check_domain(rho)
        return np.full_like(rho, self.c) if rho.ndim else self.c

    def f_prime(self, rho):
        rho = self._check_domain(rho)
        return np.zeros_like(rho) if rho.ndim else 0.0

    def cumulative_area(self, rho):
        rho = self._check_domain(rho)
        return math.exp(self.c) * (np.cosh(rho) - 1.0)


class LogCoshWarp(WarpField):
    """f(rho) = log(2 cosh rho); exp(f) = 2 cosh(rho)."""

    def __repr__(self):
        return "LogCoshWarp()"

    def f(self, rho):
        rho = self._check_domain(rho)
        return np.log(2.0 * np.cosh(rho))

    def f_prime(self, rho):
        rho = self._check_domain(rho)
        return np.tanh(rho)

    def exp_f(self, rho):
        rho = self._check_domain(rho)
        return 2.0 * np.cosh(rho)

    def cumulative_area(self, rho):
        # integrand is 2 cosh sinh = sinh(2s), with antiderivative cosh(2s)/2
        rho = self._check_domain(rho)
        return (np.cosh(2.0 * rho) - 1.0) / 2.0


class TabulatedWarp(WarpField):
    """Warping function given by knots (rho_i, f_i), interpolated by a
    monotone C^1 piecewise cubic.  The cumulative integral is evaluated by
    adaptive quadrature against a knot table memoised at construction."""

    def __init__(self, knots, quad_tol=DEFAULT_QUAD_TOL):
        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 2 or knots.shape[1] != 2 or knots.shape[0] < 2:
            raise InputError("knots must be a list of at least two (rho, f) pairs")
        r, fv = knots[:, 0], knots[:, 1]
        if r[0] != 0.0:
            raise InputError("the first knot must sit at rho = 0")
        if np.any(np.diff(r) <= 0.0):
            raise InputError("knot radii must be strictly increasing")
        if not np.all(np.isfinite(fv)):
            raise InputError("knot values must be finite")
        self.knots = knots
        self.rho_max = float(r[-1])
        self.quad_tol = float(quad_tol)
        self._interp = PchipInterpolator(r, fv)
        self._dinterp = self._interp.derivative()
        # memoised cumulative integral at the knot radii, built once
        table = [0.0]
        for a, b in zip(r[:-1], r[1:]):
            table.append(table[-1] + adaptive_quad(
                lambda s: math.exp(self._interp(s)) * math.sinh(s),
                a, b, rel_tol=quad_tol, abs_tol=1e-14))
        self._cum_table = np.asarray(table)

    def __repr__(self):
        return f"TabulatedWarp({self.knots.tolist()!r})"

    def f(self, rho):
        rho = self._check_domain(rho)
        return self._interp(rho)

    def f_prime(self, rho):
        rho = self._check_domain(rho)
        return self._dinterp(rho)

    def _cumulative_scalar(self, rho):
        k = int(np.searchsorted(self.knots[:, 0], rho, side="right") - 1)
        k = min(max(k, 0), len(self._cum_table) - 1)
        base = self._cum_table[k]
        a = self.knots[k, 0]
        if rho == a:
            return float(base)
        return float(base + adaptive_quad(
            lambda s: math.exp(self._interp(s)) * math.sinh(s),
            a, rho, rel_tol=self.quad_tol, abs_tol=1e-14))

    def cumulative_area(self, rho):
        rho = self._check_domain(rho)
        if rho.ndim == 0:
            return self._cumulative_scalar(float(rho))
        return np.array([self._cumulative_scalar(float(r)) for r in np.ravel(rho)]).reshape(rho.shape)


def warp_bound_constant(w, rho0, n_samples=1024):
    """sup exp(-2f) times sup exp(f) over the closed disc of radius rho0.

    Exact for the analytic families (whose extrema sit at an endpoint);
    otherwise approximate: dense sampling refined by ternary search around
    the best sample.
    """
    if rho0 <= 0.0:
        raise DomainError("rho0 must be positive")
    w._check_domain(rho0)
    if isinstance(w, ConstantWarp):
        return math.exp(-w.c)
    if isinstance(w, LogCoshWarp):
        # exp(-2f) decreases, exp(f) increases: sups at 0 and rho0
        return 0.25 * 2.0 * math.cosh(rho0)
    grid = np.linspace(0.0, rho0, n_samples)
    fv = np.asarray(w.f(grid))
    fmin = _refine_extremum(w.f, grid, int(np.argmin(fv)), minimize=True)
    fmax = _refine_extremum(w.f, grid, int(np.argmax(fv)), minimize=False)
    return math.exp(-2.0 * fmin) * math.exp(fmax)


def _refine_extremum(fn, grid, idx, minimize, iters=80):
    """Ternary search in the bracket around grid[idx]; assumes local unimodality."""
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]
    sign = 1.0 if minimize else -1.0
    for _ in range(iters):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if sign * fn(m1) < sign * fn(m2):
            hi = m2
        else:
            lo = m1
    return float(fn(0.5 * (lo + hi)))


def _central_rho(a, h):
    return (a[2:, :, :] - a[:-2, :, :]) / (2.0 * h)


def _central_theta(a, h):
    return (np.roll(a, -1, axis=1) - np.roll(a, 1, axis=1)) / (2.0 * h)


def _central_t(a, h):
    return (a[:, :, 2:] - a[:, :, :-2]) / (2.0 * h)


def divergence_identity_residual(w, rho, theta, t, components):
    """Pointwise residual of the divergence splitting identity.

    ``components`` are the three coordinate components (radial, angular,
    vertical) of a vector field sampled on the grid ``rho x theta x t``;
    theta is assumed uniform and periodic over [0, 2 pi), rho and t uniform.
    The left side evaluates exp(f) times the 3d divergence, with the
    logarithmic derivative of the volume element exp(f) sinh(rho) supplied
    analytically; the right side differences the conservative horizontal
    fluxes against sinh(rho) and adds the vertical derivative of
    exp(-f) g(X, xi).  Both sides agree to second order in the grid spacing.

    Returns the absolute difference on the interior nodes, an array of shape
    (n_rho - 2, n_theta, n_t - 2).
    """
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    t = np.asarray(t, dtype=float)
    if rho.size < 3 or theta.size < 3 or t.size < 3:
        raise InputError("need at least 3 grid points per axis")
    if rho[0] <= 0.0:
        raise DomainError("grid must exclude the axis rho = 0")
    for axis_name, axis in (("rho", rho), ("theta", theta), ("t", t)):
        d = np.diff(axis)
        if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-12, atol=1e-14):
            raise InputError(f"{axis_name} grid must be uniform and increasing")
    x_r, x_th, x_t = (np.asarray(c, dtype=float) for c in components)
    shape = (rho.size, theta.size, t.size)
    if x_r.shape != shape or x_th.shape != shape or x_t.shape != shape:
        raise InputError(f"component arrays must have shape {shape}")

    h_r, h_th, h_t = rho[1] - rho[0], theta[1] - theta[0], t[1] - t[0]
    col = rho[:, None, None]
    f = np.asarray(w.f(col))
    fp = np.asarray(w.f_prime(col))
    ef = np.exp(f)
    sh = np.sinh(col)
    log_vol_prime = fp + np.cosh(col) / sh  # d/drho of log(exp(f) sinh)

    lhs = ef[1:-1] * (
        _central_rho(x_r, h_r)[:, :, 1:-1]
        + (x_r * log_vol_prime)[1:-1, :, 1:-1]
        + _central_theta(x_th, h_th)[1:-1, :, 1:-1]
        + _central_t(x_t, h_t)[1:-1, :, :]
    )
    rhs = (
        _central_rho(sh * ef * x_r, h_r)[:, :, 1:-1]
        + _central_theta(sh * ef * x_th, h_th)[1:-1, :, 1:-1]
    ) / sh[1:-1] + _central_t(np.exp(-f) * (ef ** 2 * x_t), h_t)[1:-1, :, :]
    return np.abs(lhs - rhs)

"""Adaptive quadrature wrappers with square-root boundary substitution.

Line and area integrals use the Gauss-Kronrod rules of scipy (QUADPACK)
behind small wrappers that check the reported error estimate.  Profile
integrands of the form g(t)*sqrt(h(t)), with h vanishing simply at a
domain endpoint, lose accuracy for the plain rule; substituting
t = b0 +/- s^2 near that endpoint makes the integrand smooth again.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate as _si

from .errors import QuadratureError

__all__ = ["integrate", "integrate_2d", "integrate_with_boundary", "gauss_segment"]

BOUNDARY_WINDOW = 1e-4  # switch to the sqrt substitution within this distance of a bound

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def integrate(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Adaptive integral of f over [a, b] to absolute tolerance tol."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        value, err = _si.quad(f, a, b, epsabs=tol, epsrel=max(tol, 1e-13), limit=200)
    if not math.isfinite(value) or err > max(100.0 * tol, 1e-8 * abs(value)):
        raise QuadratureError(
            f"integral over [{a!r}, {b!r}] did not converge (estimate {err:.3e})"
        )
    return value


def integrate_with_boundary(f, a: float, b: float, bounds, tol: float = 1e-10) -> float:
    """Like :func:`integrate`, substituting t = b0 +/- s^2 near a domain bound.

    bounds is the open existence interval (lo, hi) of the integrand; either
    entry may be infinite.  The path [a, b] (a <= b) must lie inside it.
    """
    if a == b:
        return 0.0
    if a > b:
        return -integrate_with_boundary(f, b, a, bounds, tol)
    lo, hi = bounds
    window_lo = BOUNDARY_WINDOW * max(1.0, abs(lo)) if math.isfinite(lo) else -math.inf
    window_hi = BOUNDARY_WINDOW * max(1.0, abs(hi)) if math.isfinite(hi) else -math.inf
    near_lo = math.isfinite(lo) and (a - lo) < window_lo
    near_hi = math.isfinite(hi) and (hi - b) < window_hi
    if near_lo and near_hi:
        mid = 0.5 * (a + b)
        return integrate_with_boundary(f, a, mid, bounds, 0.5 * tol) + integrate_with_boundary(
            f, mid, b, bounds, 0.5 * tol
        )
    if near_lo:
        # t = lo + s^2, dt = 2 s ds
        sa, sb = math.sqrt(a - lo), math.sqrt(b - lo)
        return integrate(lambda s: 2.0 * s * f(lo + s * s), sa, sb, tol)
    if near_hi:
        # t = hi - s^2, dt = -2 s ds; reversing limits keeps the sign
        sa, sb = math.sqrt(hi - b), math.sqrt(hi - a)
        return integrate(lambda s: 2.0 * s * f(hi - s * s), sa, sb, tol)
    return integrate(f, a, b, tol)


def gauss_segment(f, a: float, b: float, bounds=None) -> float:
    """Fixed 12-point Gauss-Legendre integral over a short segment.

    Used for incremental accumulation along profile curves, where the
    per-segment truncation error must sit far below adaptive tolerances.
    Applies the sqrt substitution when the segment touches the boundary
    window of the open interval ``bounds``.
    """
    if a == b:
        return 0.0
    if a > b:
        return -gauss_segment(f, b, a, bounds)
    if bounds is not None:
        lo, hi = bounds
        if math.isfinite(lo) and (a - lo) < BOUNDARY_WINDOW * max(1.0, abs(lo)):
            sa, sb = math.sqrt(a - lo), math.sqrt(b - lo)
            return gauss_segment(lambda s: 2.0 * s * f(lo + s * s), sa, sb)
        if math.isfinite(hi) and (hi - b) < BOUNDARY_WINDOW * max(1.0, abs(hi)):
            sa, sb = math.sqrt(hi - b), math.sqrt(hi - a)
            return gauss_segment(lambda s: 2.0 * s * f(hi - s * s), sa, sb)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(sum(w * f(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS)))


def integrate_2d(f, u0: float, u1: float, v0: float, v1: float, tol: float = 1e-9):
    """Iterated adaptive integral of f(u, v) over a rectangle.

    Returns (value, error_estimate).
    """
    if u0 == u1 or v0 == v1:
        return 0.0, 0.0
    inner_tol = 0.25 * tol / abs(v1 - v0)
    errors = []

    def row(v):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", _si.IntegrationWarning)
            value, err = _si.quad(
                lambda u: f(u, v), u0, u1, epsabs=inner_tol, epsrel=1e-12, limit=200
            )
        errors.append(err)
        return value

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        value, outer_err = _si.quad(row, v0, v1, epsabs=0.5 * tol, epsrel=1e-12, limit=200)
    inner_err = max(errors, default=0.0) * abs(v1 - v0)
    estimate = outer_err + inner_err
    if not math.isfinite(value) or estimate > max(1e3 * tol, 1e-7 * abs(value)):
        raise QuadratureError(f"2d integral did not converge (estimate {estimate:.3e})")
    return value, estimate

"""Curvature and measure quantities for surfaces and transverse curves.

For a surface with adapted frame data (A, alpha) the Gaussian curvature
of the approximating metric g_L is

    K_L = L/(L+A^2)^2 * (dalpha ^ dA)(f3, f2)
        - L^2/(L+A^2)^2 * dA(f2) - L/(L+A^2) * A^2,

with limit K_inf = -dA(f2) - A^2 as L -> infinity.  The Gauss-map
curvature K = (dalpha ^ dA)(f3, f2) appears inside K_L as the term that
dies in the limit, which is why the two notions differ.

Transverse curves (tangent a*f2 + b*f3 with b != 0) carry the normal
curvature k_n_L of g_L and its limit k_n = A * sign(b).  Area and length
elements scale like sqrt(L); only the 1/sqrt(L)-rescaled versions have
limits (f^2^f^3 and sign(b) f^3, the Hausdorff forms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import GeometryError, NonTransverseError
from .surface import (
    AdaptedFrameSample,
    FrameDerivatives,
    SurfacePatch,
    adapted_frame,
    frame_derivatives,
    pushforward_frame,
    structure_identity_residual,
)

__all__ = [
    "CurvatureSample",
    "TransverseCurveSample",
    "k_L",
    "k_inf",
    "k_gauss_map",
    "k_n_L",
    "k_n",
    "area_form_coeffs",
    "length_form_limit",
    "ds_L_density",
    "curvature_sample",
    "transverse_sample",
]

IDENTITY_TOL = 1e-5


def k_L(fd: FrameDerivatives, A: float, L: float) -> float:
    """Gaussian curvature of the surface in the metric g_L."""
    L = float(L)
    if L <= 0.0:
        raise ValueError("metric parameter must be positive")
    den = L + A * A
    wedge = fd.dalpha_f3 * fd.dA_f2 - fd.dalpha_f2 * fd.dA_f3
    return L / den**2 * wedge - L * L / den**2 * fd.dA_f2 - L / den * A * A


def k_inf(fd: FrameDerivatives, A: float) -> float:
    """Limit curvature -dA(f2) - A^2; depends on A alone."""
    return -fd.dA_f2 - A * A


def k_gauss_map(fd: FrameDerivatives) -> float:
    """Gauss-map curvature (dalpha ^ dA)(f3, f2)."""
    return fd.dalpha_f3 * fd.dA_f2 - fd.dalpha_f2 * fd.dA_f3


@dataclass(frozen=True)
class TransverseCurveSample:
    """Per-point data for a curve with tangent a*f2 + b*f3, b != 0."""

    t: float
    a: float
    b: float
    da_dt: float
    db_dt: float
    dA_dt: float
    A: float
    dalpha_f2: float
    dalpha_f3: float

    def __post_init__(self):
        if self.b == 0.0:
            raise NonTransverseError(f"curve tangent has no f3 component at t={self.t!r}")


def k_n_L(c: TransverseCurveSample, L: float) -> float:
    """Normal curvature of the curve in g_L (four-term assembled formula).

    The terms are, in order: the (a, b) rotation rate, and the dalpha(f2),
    dalpha(f3) and sqrt(L)-tilt contributions of the frame rotation; the
    last one survives the limit, giving k_n = A*sign(b).

    The rotation-rate term reads da/dt, db/dt in the curve's own
    parameterization; the value equals <D_T T, N>_L exactly when the curve
    has unit g_L speed at the point (the classical normalization).  The
    other three terms, and the L -> infinity limit, are parameterization
    independent.
    """
    L = float(L)
    if L <= 0.0:
        raise ValueError("metric parameter must be positive")
    if c.b == 0.0:
        raise NonTransverseError("normal curvature needs a transverse tangent")
    A = c.A
    m = L + A * A
    root_m = math.sqrt(m)
    q = math.sqrt(c.a * c.a + c.b * c.b * m)
    turn = (c.a * c.b * A * c.dA_dt + (c.a * c.db_dt - c.b * c.da_dt) * m) / (
        root_m * (c.a * c.a + c.b * c.b * m)
    )
    term2 = -(A / root_m) * (c.a / q) * c.dalpha_f2
    term3 = -(A * c.b) / (root_m * q) * c.dalpha_f3
    term4 = L * A * c.b / (root_m * q)
    return turn + term2 + term3 + term4


def k_n(A: float, b: float) -> float:
    """Limit normal curvature A * sign(b)."""
    if b == 0.0:
        raise NonTransverseError("limit normal curvature needs b != 0")
    return A * math.copysign(1.0, b)


def area_form_coeffs(A: float, L: float) -> tuple[float, float]:
    """Coefficients of f^2^f^3 in the g_L area form and its rescaled limit.

    Returns (sqrt(L+A^2), 1.0); the unrescaled coefficient diverges like
    sqrt(L) while (1/sqrt(L)) * dsigma_L tends to the Hausdorff form.
    """
    L = float(L)
    if L <= 0.0:
        raise ValueError("metric parameter must be positive")
    return math.sqrt(L + A * A), 1.0


def length_form_limit(b: float) -> float:
    """Coefficient sign(b) of f^3 in the Hausdorff length form of the curve."""
    if b == 0.0:
        raise NonTransverseError("length form limit needs b != 0")
    return math.copysign(1.0, b)


def ds_L_density(c: TransverseCurveSample, L: float) -> float:
    """f^3 coefficient b_L * sqrt(L+A^2) of the raw g_L length element.

    Grows like sqrt(L), so the unrescaled length element has no limit;
    (1/sqrt(L)) * ds_L_density tends to sign(b), the Hausdorff coefficient.
    """
    L = float(L)
    A = c.A
    m = L + A * A
    b_L = c.b * math.sqrt(m) / math.sqrt(c.a * c.a + c.b * c.b * m)
    return b_L * math.sqrt(m)


@dataclass(frozen=True)
class CurvatureSample:
    """Curvature quantities at one surface point."""

    K_inf: float
    K_gauss: float
    K_L: tuple[tuple[float, float], ...]
    area_coeff_L: tuple[tuple[float, float], ...]
    area_coeff_hausdorff: float
    sample: AdaptedFrameSample
    derivs: FrameDerivatives


def curvature_sample(
    S: SurfacePatch,
    u: float,
    v: float,
    L_values: Sequence[float] = (),
    method: str = "auto",
    identity_tol: float = IDENTITY_TOL,
) -> CurvatureSample:
    """All curvature quantities at (u, v), with the structural identity re-checked."""
    sample = adapted_frame(S, u, v)
    fd = frame_derivatives(S, u, v, method)
    residual = structure_identity_residual(fd, sample.A)
    scale = max(1.0, sample.A * sample.A, abs(fd.dA_f2))
    if abs(residual) > identity_tol * scale:
        raise GeometryError(
            f"structural identity violated at ({u!r}, {v!r}): residual {residual:.3e}; "
            "the point may be nearly characteristic"
        )
    return CurvatureSample(
        K_inf=k_inf(fd, sample.A),
        K_gauss=k_gauss_map(fd),
        K_L=tuple((float(L), k_L(fd, sample.A, L)) for L in L_values),
        area_coeff_L=tuple((float(L), area_form_coeffs(sample.A, L)[0]) for L in L_values),
        area_coeff_hausdorff=1.0,
        sample=sample,
        derivs=fd,
    )


def transverse_sample(
    S: SurfacePatch,
    path: Callable[[float], tuple[float, float]],
    t: float,
    h: float = 1e-4,
    velocity: Callable[[float], tuple[float, float]] | None = None,
    method: str = "auto",
) -> TransverseCurveSample:
    """Build curve data at parameter t for a path t -> (u, v) on the patch.

    The (a, b) components come from the adapted frame; their t-derivatives
    use central differences of the sampled components, and dA/dt is the
    chain rule a*dA(f2) + b*dA(f3).  Pass ``velocity`` returning (du, dv)
    when the path derivative is known exactly; the finite-difference
    fallback uses a smaller inner step so its rounding noise stays well
    below the outer step h.
    """
    h_vel = 1e-6 * max(1.0, abs(t))

    def components(tt: float) -> tuple[float, float]:
        u, v = path(tt)
        if velocity is not None:
            du, dv = velocity(tt)
        else:
            up, vp = path(tt + h_vel)
            um, vm = path(tt - h_vel)
            du, dv = (up - um) / (2.0 * h_vel), (vp - vm) / (2.0 * h_vel)
        f_u, f_v = pushforward_frame(S, u, v)
        s = adapted_frame(S, u, v)
        # gamma' = du*f_u + dv*f_v; the f2 part is the horizontal dot with f2,
        # the f3 part is the raw e3 coefficient (f3 has third coefficient 1).
        p1 = f_u.c1 * s.f2.c1 + f_u.c2 * s.f2.c2
        p2 = f_v.c1 * s.f2.c1 + f_v.c2 * s.f2.c2
        a = du * p1 + dv * p2
        b = du * f_u.c3 + dv * f_v.c3
        return a, b

    a, b = components(t)
    ap, bp = components(t + h)
    am, bm = components(t - h)
    u, v = path(t)
    sample = adapted_frame(S, u, v)
    fd = frame_derivatives(S, u, v, method)
    return TransverseCurveSample(
        t=t,
        a=a,
        b=b,
        da_dt=(ap - am) / (2.0 * h),
        db_dt=(bp - bm) / (2.0 * h),
        dA_dt=a * fd.dA_f2 + b * fd.dA_f3,
        A=sample.A,
        dalpha_f2=fd.dalpha_f2,
        dalpha_f3=fd.dalpha_f3,
    )

"""Parametric surface patches and the adapted frame (f1, f2, f3, alpha, A).

At a non-characteristic point of a surface S the horizontal plane meets
the tangent plane in a line.  f2 is a unit horizontal vector spanning
that line, f1 = cos(alpha) e1 + sin(alpha) e2 is the horizontal normal
(f2 = -sin(alpha) e1 + cos(alpha) e2), and f3 = e3 + A*f1 completes a
basis of the tangent plane.  The tilt scalar A is fixed by requiring
the conormal f^1 = cos(alpha) e^1 + sin(alpha) e^2 - A e^3 to kill TS.

Sign rule for f2: among the two unit choices, take the one making the
change of basis from (f2, f3) to the coordinate tangents (f_u, f_v)
positive, so the area density f^2^f^3(f_u, f_v) is positive; the patch
orientation flag flips this globally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import expr as _expr
from .errors import CharacteristicPointError, DegenerateParametrizationError
from .hgroup import FrameVec, Point

__all__ = [
    "SurfacePatch",
    "AdaptedFrameSample",
    "FrameDerivatives",
    "AnalyticFrameFields",
    "pushforward_frame",
    "characteristic_test",
    "adapted_frame",
    "frame_derivatives",
    "frame_data",
    "structure_identity_residual",
    "beta",
    "xl_basis",
    "graph_patch",
    "parametric_patch",
]

CHARACTERISTIC_TOL = 1e-10
FD_REL_STEP = 1e-5


@dataclass(frozen=True)
class AnalyticFrameFields:
    """Closed-form A, alpha data for the orientation +1 frame of a patch.

    Gradients are with respect to the chart coordinates (u, v); alpha is
    only defined modulo 2*pi, so just its gradient is carried.
    """

    A: float
    dA_du: float
    dA_dv: float
    dalpha_du: float
    dalpha_dv: float


@dataclass(frozen=True)
class SurfacePatch:
    """Immutable chart (u, v) -> H^1 with evaluable first partials.

    jet(u, v) returns three length-3 arrays: the position and the two
    coordinate partial derivatives.  frame_fields, when present, supplies
    closed-form A/alpha data used instead of finite differences.
    """

    jet: Callable[[float, float], tuple]
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    orientation: int = 1
    closed_u: bool = False
    name: str = "patch"
    frame_fields: Optional[Callable[[float, float], AnalyticFrameFields]] = None

    def position(self, u: float, v: float) -> Point:
        pos = self.jet(u, v)[0]
        return Point(float(pos[0]), float(pos[1]), float(pos[2]))

    def contains(self, u: float, v: float) -> bool:
        return (
            self.u_range[0] <= u <= self.u_range[1]
            and self.v_range[0] <= v <= self.v_range[1]
        )

    def with_orientation(self, sign: int) -> "SurfacePatch":
        return replace(self, orientation=1 if sign >= 0 else -1)


@dataclass(frozen=True)
class AdaptedFrameSample:
    """Adapted frame data at one surface point.

    f2_uv and f3_uv express f2 and f3 as parameter-space directions
    (coefficients on d/du, d/dv); area_density is f^2^f^3(f_u, f_v).
    """

    point: Point
    alpha: float
    A: float
    f1: FrameVec
    f2: FrameVec
    f3: FrameVec
    f2_uv: tuple[float, float]
    f3_uv: tuple[float, float]
    area_density: float
    characteristic: bool = False


@dataclass(frozen=True)
class FrameDerivatives:
    """Directional derivatives of A and alpha along f2 and f3."""

    dA_f2: float
    dA_f3: float
    dalpha_f2: float
    dalpha_f3: float


def structure_identity_residual(fd: FrameDerivatives, A: float) -> float:
    """Residual of the structural identity dalpha(f3) + dA(f2) + A^2 = 0."""
    return fd.dalpha_f3 + fd.dA_f2 + A * A


def pushforward_frame(S: SurfacePatch, u: float, v: float) -> tuple[FrameVec, FrameVec]:
    """Coordinate tangents f_u, f_v expressed on the left-invariant frame."""
    pos, du, dv = S.jet(u, v)
    p = Point(float(pos[0]), float(pos[1]), float(pos[2]))
    return FrameVec.from_coordinates(p, du), FrameVec.from_coordinates(p, dv)


def characteristic_test(f_u: FrameVec, f_v: FrameVec, tol: float = CHARACTERISTIC_TOL) -> bool:
    """True iff both tangents are horizontal to tolerance (tangent plane = D)."""
    scale = max(
        abs(f_u.c1), abs(f_u.c2), abs(f_u.c3), abs(f_v.c1), abs(f_v.c2), abs(f_v.c3)
    )
    return abs(f_u.c3) <= tol * scale and abs(f_v.c3) <= tol * scale


def adapted_frame(
    S: SurfacePatch, u: float, v: float, tol: float = CHARACTERISTIC_TOL
) -> AdaptedFrameSample:
    f_u, f_v = pushforward_frame(S, u, v)
    if characteristic_test(f_u, f_v, tol):
        raise CharacteristicPointError(
            f"characteristic point of {S.name!r} at (u, v) = ({u!r}, {v!r})"
        )
    p = f_u.base
    scale = max(abs(c) for c in (*f_u.coefficients(), *f_v.coefficients()))

    # D n TS direction: the combination with vanishing third frame coefficient.
    w1 = f_v.c3 * f_u.c1 - f_u.c3 * f_v.c1
    w2 = f_v.c3 * f_u.c2 - f_u.c3 * f_v.c2
    norm = math.hypot(w1, w2)
    if norm <= 1e-14 * scale * scale:
        raise DegenerateParametrizationError(
            f"dependent coordinate tangents of {S.name!r} at (u, v) = ({u!r}, {v!r})"
        )
    f2h = (w1 / norm, w2 / norm)
    f1h = (f2h[1], -f2h[0])

    # A from least squares on f^1(f_u) = f^1(f_v) = 0.
    h_dots = [t.c1 * f1h[0] + t.c2 * f1h[1] for t in (f_u, f_v)]
    verts = [f_u.c3, f_v.c3]
    A = (h_dots[0] * verts[0] + h_dots[1] * verts[1]) / (verts[0] ** 2 + verts[1] ** 2)

    p1 = f_u.c1 * f2h[0] + f_u.c2 * f2h[1]
    p2 = f_v.c1 * f2h[0] + f_v.c2 * f2h[1]
    q1, q2 = f_u.c3, f_v.c3
    det = p1 * q2 - p2 * q1
    if det * S.orientation < 0.0:
        f2h = (-f2h[0], -f2h[1])
        f1h = (-f1h[0], -f1h[1])
        A = -A
        p1, p2, det = -p1, -p2, -det
    if abs(det) <= 1e-14 * scale * scale:
        raise DegenerateParametrizationError(
            f"vanishing change-of-basis determinant of {S.name!r} at ({u!r}, {v!r})"
        )
    alpha = math.atan2(-f2h[0], f2h[1])

    f1 = FrameVec(p, f1h[0], f1h[1], 0.0)
    f2 = FrameVec(p, f2h[0], f2h[1], 0.0)
    f3 = FrameVec(p, A * f1h[0], A * f1h[1], 1.0)
    return AdaptedFrameSample(
        point=p,
        alpha=alpha,
        A=A,
        f1=f1,
        f2=f2,
        f3=f3,
        f2_uv=(q2 / det, -q1 / det),
        f3_uv=(-p2 / det, p1 / det),
        area_density=det,
        characteristic=False,
    )


def _wrap_angle_near(angle: float, reference: float) -> float:
    while angle - reference > math.pi:
        angle -= 2.0 * math.pi
    while angle - reference < -math.pi:
        angle += 2.0 * math.pi
    return angle


def _scalar_gradient(S, u, v, axis, h, lo, hi, center, tol):
    """Central (or one-sided, at chart edges) differences of (A, alpha)."""

    def sample(uu, vv):
        s = adapted_frame(S, uu, vv, tol)
        return s.A, _wrap_angle_near(s.alpha, center.alpha)

    coord = u if axis == 0 else v
    if S.closed_u and axis == 0:
        lo, hi = -math.inf, math.inf
    room_minus = coord - lo
    room_plus = hi - coord
    step = h

    if min(room_minus, room_plus) > 1e-3 * h:
        step = min(step, room_minus, room_plus)
        if axis == 0:
            a_p, al_p = sample(u + step, v)
            a_m, al_m = sample(u - step, v)
        else:
            a_p, al_p = sample(u, v + step)
            a_m, al_m = sample(u, v - step)
        return (a_p - a_m) / (2.0 * step), (al_p - al_m) / (2.0 * step)

    # Pinned to an edge: second-order one-sided stencil into the rectangle.
    sign = 1.0 if room_plus >= room_minus else -1.0
    step = min(h, (room_plus if sign > 0 else room_minus) / 2.0)
    if step <= 0.0:
        raise DegenerateParametrizationError("no room for a derivative stencil")
    if axis == 0:
        a1, al1 = sample(u + sign * step, v)
        a2, al2 = sample(u + 2.0 * sign * step, v)
    else:
        a1, al1 = sample(u, v + sign * step)
        a2, al2 = sample(u, v + 2.0 * sign * step)
    a0, al0 = center.A, center.alpha
    dA = sign * (-3.0 * a0 + 4.0 * a1 - a2) / (2.0 * step)
    dal = sign * (-3.0 * al0 + 4.0 * al1 - al2) / (2.0 * step)
    return dA, dal


def frame_derivatives(
    S: SurfacePatch,
    u: float,
    v: float,
    method: str = "auto",
    rel_step: float = FD_REL_STEP,
    tol: float = CHARACTERISTIC_TOL,
) -> FrameDerivatives:
    """Directional derivatives of A and alpha along f2 and f3.

    method 'analytic' uses the patch's closed-form fields, 'fd' central
    finite differences of the sampled scalar fields, 'auto' prefers the
    closed forms when the patch provides them.
    """
    if method not in ("auto", "fd", "analytic"):
        raise ValueError(f"unknown derivative method {method!r}")
    sample = adapted_frame(S, u, v, tol)
    use_analytic = method == "analytic" or (method == "auto" and S.frame_fields is not None)
    if use_analytic:
        if S.frame_fields is None:
            raise ValueError(f"patch {S.name!r} has no analytic frame fields")
        fields = S.frame_fields(u, v)
        flip = -1.0 if S.orientation < 0 else 1.0
        grad_A = (flip * fields.dA_du, flip * fields.dA_dv)
        grad_al = (fields.dalpha_du, fields.dalpha_dv)
    else:
        hu = rel_step * (S.u_range[1] - S.u_range[0])
        hv = rel_step * (S.v_range[1] - S.v_range[0])
        dA_du, dal_du = _scalar_gradient(S, u, v, 0, hu, *S.u_range, sample, tol)
        dA_dv, dal_dv = _scalar_gradient(S, u, v, 1, hv, *S.v_range, sample, tol)
        grad_A = (dA_du, dA_dv)
        grad_al = (dal_du, dal_dv)
    s2, s3 = sample.f2_uv, sample.f3_uv
    return FrameDerivatives(
        dA_f2=s2[0] * grad_A[0] + s2[1] * grad_A[1],
        dA_f3=s3[0] * grad_A[0] + s3[1] * grad_A[1],
        dalpha_f2=s2[0] * grad_al[0] + s2[1] * grad_al[1],
        dalpha_f3=s3[0] * grad_al[0] + s3[1] * grad_al[1],
    )


def frame_data(
    S: SurfacePatch, u: float, v: float, method: str = "auto", tol: float = CHARACTERISTIC_TOL
) -> tuple[AdaptedFrameSample, FrameDerivatives]:
    return adapted_frame(S, u, v, tol), frame_derivatives(S, u, v, method, tol=tol)


def beta(L, A: float) -> float:
    """Tilt angle of the g_L normal: cos(beta) = sqrt(L)/sqrt(L+A^2)."""
    return math.atan2(A, math.sqrt(float(L)))


def xl_basis(sample: AdaptedFrameSample, L) -> tuple[FrameVec, FrameVec, FrameVec]:
    """g_L-orthonormal triple (X1, X2, X3): normal, then a tangent basis."""
    Lf = float(L)
    A = sample.A
    root = math.sqrt(Lf + A * A)
    cos_b = math.sqrt(Lf) / root
    sin_b = A / root
    p = sample.point
    ca, sa = math.cos(sample.alpha), math.sin(sample.alpha)
    # e3^L = e3/sqrt(L), so its raw third coefficient is 1/sqrt(L)
    x1 = FrameVec(p, cos_b * ca, cos_b * sa, -sin_b / math.sqrt(Lf))
    x2 = sample.f2
    x3 = FrameVec(p, sample.f3.c1 / root, sample.f3.c2 / root, sample.f3.c3 / root)
    return x1, x2, x3


# ---------------------------------------------------------------------------
# Expression-backed patches


def _as_expr(e) -> _expr.Expr:
    return _expr.parse(e) if isinstance(e, str) else e


def graph_patch(h, u_range=(-2.0, 2.0), v_range=(-2.0, 2.0), name=None, orientation=1):
    """Patch (u, v) -> (u, v, h(u, v)) for an expression or AST h."""
    tree = _as_expr(h)

    def jet(u, v):
        d = _expr.eval_dual(tree, u, v)
        pos = np.array([u, v, d.value])
        du = np.array([1.0, 0.0, d.d_u])
        dv = np.array([0.0, 1.0, d.d_v])
        return pos, du, dv

    label = name or f"graph({_expr.pretty(tree)})"
    return SurfacePatch(jet, tuple(u_range), tuple(v_range), orientation, False, label)


def parametric_patch(x, y, z, u_range, v_range, name=None, orientation=1, closed_u=False):
    """Patch from three coordinate expressions in u and v."""
    trees = tuple(_as_expr(e) for e in (x, y, z))

    def jet(u, v):
        ds = [_expr.eval_dual(t, u, v) for t in trees]
        pos = np.array([d.value for d in ds])
        du = np.array([d.d_u for d in ds])
        dv = np.array([d.d_v for d in ds])
        return pos, du, dv

    label = name or "parametric"
    return SurfacePatch(jet, tuple(u_range), tuple(v_range), orientation, closed_u, label)

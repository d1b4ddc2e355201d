"""Surfaces of revolution about the z-axis and the constant-curvature families.

A surface invariant under rotations is swept from a horizontal generating
curve (a(v), b(v), c(v)) with c' = (a b' - b a')/2:

    f(u, v) = (a cos u - b sin u, b cos u + a sin u, c).

In polar profile coordinates a = r cos(theta), b = r sin(theta) with a
unit-speed parameterization ((a')^2 + (b')^2 = 1) one has

    theta' = sqrt(1 - (r')^2) / r,      c' = r sqrt(1 - (r')^2) / 2,
    A = (ln r^2)' ,                     K_inf = -A' - A^2.

Prescribing a constant K_inf and integrating gives exactly three families:

    K > 0:  A = -sqrt(K) tan(sqrt(K) v),   r = r0 sqrt(cos(sqrt(K) v))
    K = 0:  A = 1/v,                       r = r0 sqrt(v)
    K < 0:  A = sqrt(-K) tanh(sqrt(-K) v), r = r0 sqrt(cosh(sqrt(-K) v))

each defined where (r')^2 <= 1.  The integration constant is normalized
away (a v-translation); ``c1_shift`` reintroduces it as a translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import expr as _expr
from .errors import DomainViolationError, GeometryError
from .quadrature import gauss_segment, integrate, integrate_with_boundary
from .surface import AnalyticFrameFields, SurfacePatch

__all__ = [
    "Profile",
    "family_profile",
    "line_profile",
    "circle_profile",
    "r_family",
    "A_family",
    "domain_bound",
    "theta_c_quadrature",
    "horizontal_lift",
    "rotation_patch",
    "default_v_range",
    "RotationSurfaceSpec",
    "Mesh",
    "build_mesh",
    "sample_generating_curve",
    "e3_chord_ratio",
]

CLAMP = 1e-12  # values of 1 - (r')^2 in [-CLAMP, 0] count as exact zeros
ANCHOR_EPS = 1e-9


def _sqrt1m(rp2_complement: float, context: str) -> float:
    if rp2_complement < -CLAMP:
        raise DomainViolationError(f"(r')^2 exceeds 1 {context}")
    return math.sqrt(max(rp2_complement, 0.0))


def domain_bound(K_inf: float, r0: float) -> tuple[float, float]:
    """Open existence interval of the constant-curvature profile (shift 0).

    Solves (r')^2 = 1 in closed form; for K = 0 the interval is
    (r0^2/4, inf), otherwise it is symmetric about 0.
    """
    if not (math.isfinite(r0) and r0 > 0.0):
        raise ValueError(f"profile radius r0 must be positive, got {r0!r}")
    if not math.isfinite(K_inf):
        raise ValueError("curvature must be finite")
    if K_inf > 0.0:
        q = r0 * r0 * K_inf
        s_star = -2.0 / q + math.sqrt(4.0 / (q * q) + 1.0)
        vmax = math.acos(s_star) / math.sqrt(K_inf)
        return -vmax, vmax
    if K_inf < 0.0:
        q = r0 * r0 * (-K_inf)
        cosh_star = 2.0 / q + math.sqrt(1.0 + 4.0 / (q * q))
        vmax = math.acosh(cosh_star) / math.sqrt(-K_inf)
        return -vmax, vmax
    return r0 * r0 / 4.0, math.inf


def _check_domain(v: float, bounds: tuple[float, float], what: str):
    lo, hi = bounds
    fuzz = 1e-12 * max(1.0, abs(lo) if math.isfinite(lo) else 0.0, abs(hi) if math.isfinite(hi) else 0.0)
    if v < lo - fuzz or v > hi + fuzz:
        raise DomainViolationError(
            f"{what}: v = {v!r} outside the existence domain ({lo!r}, {hi!r})"
        )


def r_family(K_inf: float, r0: float, v: float) -> float:
    """Profile radius of the constant-curvature family (integration constant 0)."""
    _check_domain(v, domain_bound(K_inf, r0), "r_family")
    if K_inf > 0.0:
        return r0 * math.sqrt(max(math.cos(math.sqrt(K_inf) * v), 0.0))
    if K_inf < 0.0:
        return r0 * math.sqrt(math.cosh(math.sqrt(-K_inf) * v))
    return r0 * math.sqrt(v)


def A_family(K_inf: float, v: float) -> float:
    """Tilt scalar A(v) solving K_inf = -A' - A^2 (integration constant 0)."""
    if K_inf > 0.0:
        root = math.sqrt(K_inf)
        if abs(root * v) >= 0.5 * math.pi:
            raise DomainViolationError(f"A_family: |v| = {abs(v)!r} reaches the tan pole")
        return -root * math.tan(root * v)
    if K_inf < 0.0:
        root = math.sqrt(-K_inf)
        return root * math.tanh(root * v)
    if v <= 0.0:
        raise DomainViolationError("A_family: v must be positive when the curvature is 0")
    return 1.0 / v


def _dr_family(K_inf: float, r0: float, v: float) -> float:
    # r' = r*A/2 since A = (ln r^2)' = 2 r'/r
    return 0.5 * r_family(K_inf, r0, v) * A_family(K_inf, v)


def _dA_family(K_inf: float, v: float) -> float:
    return -K_inf - A_family(K_inf, v) ** 2


@dataclass(frozen=True)
class Profile:
    """Unit-speed generating-curve data for a surface of revolution.

    kappa is the planar curvature a'b'' - a''b' of the generating curve,
    used to pick chord lengths for exported polylines.  theta_c_closed,
    when set, bypasses quadrature (straight-line and circular profiles).
    """

    name: str
    domain: tuple[float, float]
    anchor: float
    r: Callable[[float], float]
    dr: Callable[[float], float]
    A: Callable[[float], float]
    dA: Callable[[float], float]
    kappa: Callable[[float], float]
    theta_c_closed: Optional[Callable[[float], tuple[float, float]]] = None
    K_inf: Optional[float] = None


def family_profile(K_inf: float, r0: float, c1_shift: float = 0.0) -> Profile:
    """Constant-curvature profile; c1_shift translates the profile parameter."""
    lo, hi = domain_bound(K_inf, r0)
    lo_s = lo - c1_shift
    hi_s = hi - c1_shift
    if K_inf == 0.0:
        anchor = lo_s + ANCHOR_EPS * max(1.0, abs(lo_s)) if lo_s <= 0 else lo_s * (1.0 + ANCHOR_EPS)
    else:
        anchor = -c1_shift

    def r(v):
        return r_family(K_inf, r0, v + c1_shift)

    def dr(v):
        return _dr_family(K_inf, r0, v + c1_shift)

    def A(v):
        return A_family(K_inf, v + c1_shift)

    def dA(v):
        return _dA_family(K_inf, v + c1_shift)

    def kappa(v):
        rv = r(v)
        s = _sqrt1m(1.0 - dr(v) ** 2, f"at v={v!r}")
        if s == 0.0:
            return math.inf
        return (K_inf + 2.0 / (rv * rv)) * rv / (2.0 * s)

    return Profile(
        name=f"constant-curvature({K_inf}, r0={r0})",
        domain=(lo_s, hi_s),
        anchor=anchor,
        r=r,
        dr=dr,
        A=A,
        dA=dA,
        kappa=kappa,
        K_inf=K_inf,
    )


def line_profile() -> Profile:
    """Radial straight-line profile r = v: the plane z = 0 in polar form."""
    return Profile(
        name="plane",
        domain=(0.0, math.inf),
        anchor=1.0,
        r=lambda v: v,
        dr=lambda v: 1.0,
        A=lambda v: 2.0 / v,
        dA=lambda v: -2.0 / (v * v),
        kappa=lambda v: 0.0,
        theta_c_closed=lambda v: (0.0, 0.0),
    )


def circle_profile() -> Profile:
    """Unit-circle profile r = 1: the vertical cylinder x^2 + y^2 = 1."""
    return Profile(
        name="cylinder",
        domain=(-math.inf, math.inf),
        anchor=0.0,
        r=lambda v: 1.0,
        dr=lambda v: 0.0,
        A=lambda v: 0.0,
        dA=lambda v: 0.0,
        kappa=lambda v: 1.0,
        theta_c_closed=lambda v: (v, 0.5 * v),
        K_inf=0.0,
    )


class ThetaC:
    """Cached quadrature of theta(v) and c(v) from the profile anchor.

    theta(v) = int sqrt(1 - r'^2)/r, c(v) = int r sqrt(1 - r'^2)/2, both
    from the anchor, with a square-root change of variable near domain
    endpoints where 1 - r'^2 has a simple zero.
    """

    def __init__(self, profile: Profile, tol: float = 1e-10):
        self.profile = profile
        self.tol = tol
        self._cache: dict[float, tuple[float, float]] = {profile.anchor: (0.0, 0.0)}

    def _g_theta(self, t: float) -> float:
        return _sqrt1m(1.0 - self.profile.dr(t) ** 2, f"at v={t!r}") / self.profile.r(t)

    def _g_c(self, t: float) -> float:
        return 0.5 * self.profile.r(t) * _sqrt1m(1.0 - self.profile.dr(t) ** 2, f"at v={t!r}")

    def __call__(self, v: float) -> tuple[float, float]:
        hit = self._cache.get(v)
        if hit is not None:
            return hit
        if self.profile.theta_c_closed is not None:
            anchor_theta, anchor_c = self.profile.theta_c_closed(self.profile.anchor)
            theta, c = self.profile.theta_c_closed(v)
            result = (theta - anchor_theta, c - anchor_c)
            self._cache[v] = result
            return result
        _check_domain(v, self.profile.domain, self.profile.name)
        a = self.profile.anchor
        theta = integrate_with_boundary(self._g_theta, a, v, self.profile.domain, self.tol)
        c = integrate_with_boundary(self._g_c, a, v, self.profile.domain, self.tol)
        result = (theta, c)
        self._cache[v] = result
        return result


_integrators: dict[tuple[float, float, float], ThetaC] = {}


def _integrator(K_inf: float, r0: float, c1_shift: float = 0.0) -> ThetaC:
    key = (float(K_inf), float(r0), float(c1_shift))
    found = _integrators.get(key)
    if found is None:
        found = ThetaC(family_profile(*key))
        _integrators[key] = found
    return found


def theta_c_quadrature(K_inf: float, r0: float, v: float, tol: float = 1e-10) -> tuple[float, float]:
    """Angle theta(v) and height c(v) of the family profile from the anchor."""
    integrator = _integrator(K_inf, r0)
    if tol != integrator.tol:
        integrator = ThetaC(family_profile(K_inf, r0), tol)
    return integrator(v)


def horizontal_lift(a, b, t: float, tol: float = 1e-10) -> float:
    """Height c(t) = (1/2) int_0^t (a b' - b a') restoring horizontality."""
    a_tree = _expr.parse(a) if isinstance(a, str) else a
    b_tree = _expr.parse(b) if isinstance(b, str) else b

    def integrand(s: float) -> float:
        da = _expr.eval_dual_t(a_tree, s)
        db = _expr.eval_dual_t(b_tree, s)
        return 0.5 * (da.value * db.d_u - db.value * da.d_u)

    return integrate(integrand, 0.0, t, tol)


# ---------------------------------------------------------------------------
# Patches and meshes


def _generating_point(profile: Profile, thetac: ThetaC, v: float):
    r = profile.r(v)
    rp = profile.dr(v)
    theta, c = thetac(v)
    s = _sqrt1m(1.0 - rp * rp, f"at v={v!r}")
    ct, st = math.cos(theta), math.sin(theta)
    a, b = r * ct, r * st
    ap = rp * ct - s * st  # r*theta' = sqrt(1 - r'^2) for unit speed
    bp = rp * st + s * ct
    cp = 0.5 * r * s
    return a, b, ap, bp, c, cp


def rotation_patch(
    profile: Profile,
    v_range: tuple[float, float],
    orientation: int = 1,
    name: Optional[str] = None,
) -> SurfacePatch:
    """Surface of revolution as a patch over [0, 2*pi] x v_range."""
    lo, hi = profile.domain
    if not (lo <= v_range[0] < v_range[1] <= hi):
        raise DomainViolationError(
            f"v_range {v_range!r} not inside the existence domain ({lo!r}, {hi!r})"
        )
    thetac = ThetaC(profile)

    def jet(u: float, v: float):
        a, b, ap, bp, c, cp = _generating_point(profile, thetac, v)
        cu, su = math.cos(u), math.sin(u)
        pos = np.array([a * cu - b * su, b * cu + a * su, c])
        du = np.array([-a * su - b * cu, -b * su + a * cu, 0.0])
        dv = np.array([ap * cu - bp * su, bp * cu + ap * su, cp])
        return pos, du, dv

    def fields(u: float, v: float) -> AnalyticFrameFields:
        return AnalyticFrameFields(
            A=profile.A(v),
            dA_du=0.0,
            dA_dv=profile.dA(v),
            dalpha_du=1.0,
            dalpha_dv=profile.kappa(v),
        )

    return SurfacePatch(
        jet=jet,
        u_range=(0.0, 2.0 * math.pi),
        v_range=tuple(v_range),
        orientation=1 if orientation >= 0 else -1,
        closed_u=True,
        name=name or profile.name,
        frame_fields=fields,
    )


def default_v_range(K_inf: float, r0: float, c1_shift: float = 0.0) -> tuple[float, float]:
    """A mesh-friendly band strictly inside the existence domain."""
    lo, hi = domain_bound(K_inf, r0)
    if K_inf == 0.0:
        start = lo * (1.0 + 1e-6) if lo > 0 else lo + 1e-6
        return start - c1_shift, lo + 2.0 - c1_shift
    return -0.98 * hi - c1_shift, 0.98 * hi - c1_shift


@dataclass(frozen=True)
class RotationSurfaceSpec:
    """Parameters of one constant-curvature rotation surface mesh."""

    K_inf: float
    r0: float = 1.0
    c1_shift: float = 0.0
    v_range: Optional[tuple[float, float]] = None
    samples_u: int = 128
    samples_v: int = 128
    n_curves: int = 8
    curve_e3_ratio: float = 1e-8

    def resolved_v_range(self) -> tuple[float, float]:
        if self.v_range is not None:
            return tuple(self.v_range)
        return default_v_range(self.K_inf, self.r0, self.c1_shift)

    def validate(self) -> None:
        if not (math.isfinite(self.r0) and self.r0 > 0.0):
            raise ValueError("r0 must be positive")
        if self.samples_u < 3 or self.samples_v < 2:
            raise ValueError("mesh needs at least 3 x 2 samples")
        if self.n_curves < 0:
            raise ValueError("n_curves must be non-negative")
        profile = family_profile(self.K_inf, self.r0, self.c1_shift)
        v0, v1 = self.resolved_v_range()
        lo, hi = profile.domain
        if not (lo <= v0 < v1 <= hi):
            raise DomainViolationError(
                f"v_range ({v0!r}, {v1!r}) not inside the existence domain "
                f"({lo!r}, {hi!r}) of the K_inf={self.K_inf} family"
            )
        for v in np.linspace(v0, v1, 257):
            if profile.r(float(v)) <= 0.0:
                raise DomainViolationError(f"profile radius vanishes at v={v!r}")
            _sqrt1m(1.0 - profile.dr(float(v)) ** 2, f"at v={v!r}")


@dataclass
class Mesh:
    """Vertex grid with triangles and embedded horizontal polylines."""

    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray  # (m, 3) int indices into vertices
    polylines: list = field(default_factory=list)  # list of (k, 3) arrays
    uv: Optional[np.ndarray] = None  # (n, 2) chart coordinates
    profile_rows: Optional[np.ndarray] = None  # columns: v, r, r', theta, c, A


def e3_chord_ratio(points: np.ndarray) -> np.ndarray:
    """|e^3(chord)| / |chord| at segment midpoints of a polyline."""
    delta = np.diff(points, axis=0)
    mid = 0.5 * (points[1:] + points[:-1])
    e3 = delta[:, 2] + 0.5 * (mid[:, 1] * delta[:, 0] - mid[:, 0] * delta[:, 1])
    norms = np.linalg.norm(delta, axis=1)
    return np.abs(e3) / np.maximum(norms, 1e-300)


def sample_generating_curve(
    profile: Profile,
    v0: float,
    v1: float,
    max_ratio: float = 1e-8,
    max_points: int = 500_000,
) -> np.ndarray:
    """Adaptive samples (v, a, b, c) of the generating horizontal curve.

    Chord lengths are chosen from the profile curvature so that every
    segment satisfies |e^3(midpoint chord)| <= max_ratio * |chord|; a
    bisection pass enforces the bound where the estimate was optimistic.
    theta and c accumulate per segment with a fixed Gauss rule (plus the
    boundary substitution), keeping consecutive points consistent to far
    below the chord tolerance.
    """
    if not (v0 < v1):
        raise ValueError("need v0 < v1")
    thetac = ThetaC(profile)
    theta0, c0 = thetac(v0)

    def g_theta(t):
        return _sqrt1m(1.0 - profile.dr(t) ** 2, f"at v={t!r}") / profile.r(t)

    def g_c(t):
        return 0.5 * profile.r(t) * _sqrt1m(1.0 - profile.dr(t) ** 2, f"at v={t!r}")

    span = v1 - v0
    dv_cap = span / 64.0
    dv_floor = span * 1e-9
    target = 0.6 * max_ratio

    vs = [v0]
    thetas = [theta0]
    cs = [c0]
    v = v0
    while v < v1 - 1e-15 * max(1.0, abs(v1)):
        k_here = abs(profile.kappa(v))
        dv = min(math.sqrt(12.0 * target / max(k_here, 1e-12)), dv_cap)
        k_ahead = abs(profile.kappa(min(v + dv, v1)))
        dv = min(dv, math.sqrt(12.0 * target / max(k_ahead, 1e-12)))
        dv = max(dv, dv_floor)
        v_next = min(v + dv, v1)
        thetas.append(thetas[-1] + gauss_segment(g_theta, v, v_next, profile.domain))
        cs.append(cs[-1] + gauss_segment(g_c, v, v_next, profile.domain))
        vs.append(v_next)
        if len(vs) > max_points:
            raise GeometryError("generating-curve sampling exceeded the point budget")
        v = v_next

    def position(idx: int) -> np.ndarray:
        r = profile.r(vs[idx])
        return np.array([r * math.cos(thetas[idx]), r * math.sin(thetas[idx]), cs[idx]])

    # Enforcement pass: bisect any chord still above 0.9 * max_ratio.
    pts = [position(i) for i in range(len(vs))]
    i = 0
    while i < len(vs) - 1:
        seg = np.vstack([pts[i], pts[i + 1]])
        ratio = float(e3_chord_ratio(seg)[0])
        if ratio > 0.9 * max_ratio and (vs[i + 1] - vs[i]) > dv_floor:
            vm = 0.5 * (vs[i] + vs[i + 1])
            theta_m = thetas[i] + gauss_segment(g_theta, vs[i], vm, profile.domain)
            c_m = cs[i] + gauss_segment(g_c, vs[i], vm, profile.domain)
            vs.insert(i + 1, vm)
            thetas.insert(i + 1, theta_m)
            cs.insert(i + 1, c_m)
            pts.insert(i + 1, position(i + 1))
            if len(vs) > max_points:
                raise GeometryError("generating-curve refinement exceeded the point budget")
        else:
            i += 1

    out = np.empty((len(vs), 4))
    out[:, 0] = vs
    out[:, 1:] = np.vstack(pts)
    return out


def _rotate_xy(points: np.ndarray, angle: float) -> np.ndarray:
    cu, su = math.cos(angle), math.sin(angle)
    rotated = points.copy()
    rotated[:, 0] = points[:, 0] * cu - points[:, 1] * su
    rotated[:, 1] = points[:, 1] * cu + points[:, 0] * su
    return rotated


def build_mesh(spec: RotationSurfaceSpec) -> Mesh:
    """Vertex grid, triangles, profile table and horizontal polylines."""
    spec.validate()
    profile = family_profile(spec.K_inf, spec.r0, spec.c1_shift)
    thetac = ThetaC(profile)
    v0, v1 = spec.resolved_v_range()
    us = np.linspace(0.0, 2.0 * math.pi, spec.samples_u)
    vvs = np.linspace(v0, v1, spec.samples_v)

    rows = np.empty((spec.samples_v, 6))
    vertices = np.empty((spec.samples_v * spec.samples_u, 3))
    uv = np.empty((spec.samples_v * spec.samples_u, 2))
    for j, v in enumerate(vvs):
        v = float(v)
        a, b, _, _, c, _ = _generating_point(profile, thetac, v)
        theta, _ = thetac(v)
        rows[j] = (v, profile.r(v), profile.dr(v), theta, c, profile.A(v))
        cu = np.cos(us)
        su = np.sin(us)
        base = j * spec.samples_u
        vertices[base : base + spec.samples_u, 0] = a * cu - b * su
        vertices[base : base + spec.samples_u, 1] = b * cu + a * su
        vertices[base : base + spec.samples_u, 2] = c
        uv[base : base + spec.samples_u, 0] = us
        uv[base : base + spec.samples_u, 1] = v

    faces = []
    for j in range(spec.samples_v - 1):
        for i in range(spec.samples_u - 1):
            k = j * spec.samples_u + i
            faces.append((k, k + 1, k + spec.samples_u))
            faces.append((k + 1, k + spec.samples_u + 1, k + spec.samples_u))

    polylines = []
    if spec.n_curves > 0:
        curve = sample_generating_curve(profile, v0, v1, spec.curve_e3_ratio)[:, 1:]
        for k in range(spec.n_curves):
            polylines.append(_rotate_xy(curve, 2.0 * math.pi * k / spec.n_curves))

    return Mesh(
        vertices=vertices,
        faces=np.array(faces, dtype=int),
        polylines=polylines,
        uv=uv,
        profile_rows=rows,
    )

"""Projection matrix builders.

One matrix family covers the whole range between a perspective projection
(blend fraction 0) and an orthographic projection (blend fraction 1):
every entry is interpolated component-wise between the two classical
matrices.  The orthographic half-extents are derived from the field of
view so that the cross-section at eye distance ``d`` is identical for
every blend value, which is what makes the blend look continuous.

Conventions (see docs/conventions.md): right-handed eye space looking
down -z, GL-style clip cube with NDC z in [-1, 1], angles in radians,
matrices row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .linalg import Mat4, lerp

__all__ = [
    "InvalidParamsError",
    "FiniteFar",
    "InfiniteFar",
    "FarMode",
    "IdentityMapping",
    "PowerMapping",
    "MappingFunction",
    "OrthoExtents",
    "ProjectionParams",
    "ValidationReport",
    "EPSILON_FLOOR",
    "perspective",
    "orthographic",
    "ortho_extents_from_fov",
    "apply_mapping",
    "generalized",
    "alpha_from_fovs",
    "theta_from_horizontal",
    "validate",
]

# Recommended lower bound for a nonzero depth tweak epsilon; smaller values
# are likely to vanish in float32 depth buffers.
EPSILON_FLOOR = 2.0 ** -21


class InvalidParamsError(ValueError):
    """Raised by the builders when parameters fail validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        msg = "; ".join(f"{name}: {text}" for name, text in report.violations)
        super().__init__(f"invalid projection parameters ({msg})")


@dataclass(frozen=True)
class FiniteFar:
    """Conventional far plane at eye-space distance ``distance``."""

    distance: float


@dataclass(frozen=True)
class InfiniteFar:
    """Far plane pushed to infinity.

    ``epsilon`` nudges the depth row to recover precision lost in the
    limit; 0 means the exact limit matrix.
    """

    epsilon: float = 0.0


FarMode = Union[FiniteFar, InfiniteFar]


@dataclass(frozen=True)
class IdentityMapping:
    """Blend fraction used as-is."""


@dataclass(frozen=True)
class PowerMapping:
    """Remaps the blend fraction to x**(1/c); c > 0.

    Larger c front-loads the transition so small fractions already look
    strongly orthographic.
    """

    c: float


MappingFunction = Union[IdentityMapping, PowerMapping]


@dataclass(frozen=True)
class OrthoExtents:
    """Orthographic half-extents: center-to-right r, center-to-top t."""

    r: float
    t: float


@dataclass(frozen=True)
class ProjectionParams:
    """Full parameter record for the generalized projection.

    theta    vertical field of view in radians, in (0, pi)
    alpha    aspect ratio (width / height), > 0
    near     near plane distance, > 0
    far      FiniteFar(distance) or InfiniteFar(epsilon)
    d        eye distance at which all blend values share the same
             cross-section, > 0
    p        orthographic fraction before mapping, in [0, 1]
    shear_h  horizontal shear factor (far face shifts right for +1)
    shear_v  vertical shear factor (far face shifts up for +1)
    mapping  reparameterization applied to p before blending
    """

    theta: float
    alpha: float
    near: float
    far: FarMode
    d: float
    p: float = 0.0
    shear_h: float = 0.0
    shear_v: float = 0.0
    mapping: MappingFunction = IdentityMapping()


@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [f"VIOLATION {name}: {text}" for name, text in self.violations]
        out += [f"WARNING {name}: {text}" for name, text in self.warnings]
        return out


def _ok(value: float) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)


def validate(params: ProjectionParams) -> ValidationReport:
    """Check every parameter restriction; never raises.

    Each violated restriction contributes exactly one entry naming the
    offending parameter.  Two conditions are deliberately advisory only:
    d outside [near, far], and a nonzero epsilon below 2**-21.
    """
    rep = ValidationReport()
    p = params

    if not (_ok(p.theta) and 0.0 < p.theta < math.pi):
        rep.violations.append(("theta", "0 < theta < pi (radians)"))
    if not (_ok(p.alpha) and p.alpha > 0.0):
        rep.violations.append(("alpha", "0 < alpha"))
    if not (_ok(p.p) and 0.0 <= p.p <= 1.0):
        rep.violations.append(("p", "0 <= p <= 1"))
    d_ok = _ok(p.d) and p.d > 0.0
    if not d_ok:
        rep.violations.append(("d", "0 < d"))
    near_ok = _ok(p.near) and p.near > 0.0
    if not near_ok:
        rep.violations.append(("near", "0 < near"))

    if isinstance(p.far, FiniteFar):
        f = p.far.distance
        far_ok = _ok(f) and f > 0.0
        if not far_ok:
            rep.violations.append(("far", "0 < far"))
        elif near_ok and not (p.near < f):
            rep.violations.append(("near", "near < far"))
        elif d_ok and near_ok and not (p.near <= p.d <= f):
            rep.warnings.append(
                ("d", f"d = {p.d:g} lies outside [near, far] = [{p.near:g}, {f:g}]; "
                      "legal, but possibly unintuitive")
            )
    else:
        eps = p.far.epsilon
        if not (_ok(eps) and eps >= 0.0):
            rep.violations.append(("epsilon", "0 <= epsilon"))
        elif 0.0 < eps < EPSILON_FLOOR:
            rep.warnings.append(
                ("epsilon", f"epsilon = {eps:g} is below 2**-21 ~= 4.8e-07; "
                            "depth precision may suffer")
            )
        if d_ok and near_ok and p.d < p.near:
            rep.warnings.append(
                ("d", f"d = {p.d:g} lies below near = {p.near:g}; "
                      "legal, but possibly unintuitive")
            )

    if not _ok(p.shear_h):
        rep.violations.append(("shear_h", "finite value required"))
    if not _ok(p.shear_v):
        rep.violations.append(("shear_v", "finite value required"))
    if isinstance(p.mapping, PowerMapping) and not (_ok(p.mapping.c) and p.mapping.c > 0.0):
        rep.violations.append(("c", "0 < c (power mapping exponent)"))

    return rep


def _raise_if_invalid(rep: ValidationReport) -> None:
    if not rep.ok:
        raise InvalidParamsError(rep)


def _cot_half(theta: float) -> float:
    return 1.0 / math.tan(0.5 * theta)


def _persp_depth(n: float, f: float) -> tuple[float, float]:
    # Row 2 of the perspective matrix; maps z = -n to NDC -1 and z = -f to +1.
    return -(f + n) / (f - n), -2.0 * f * n / (f - n)


def _ortho_depth(n: float, f: float) -> tuple[float, float]:
    return -2.0 / (f - n), -(f + n) / (f - n)


def perspective(theta: float, alpha: float, near: float, far: float) -> Mat4:
    """Classical perspective projection (the blend's endpoint at fraction 0)."""
    rep = validate(
        ProjectionParams(theta=theta, alpha=alpha, near=near, far=FiniteFar(far), d=1.0)
    )
    _raise_if_invalid(rep)
    cot = _cot_half(theta)
    m22, m23 = _persp_depth(near, far)
    return Mat4.from_rows([
        [cot / alpha, 0.0, 0.0, 0.0],
        [0.0, cot, 0.0, 0.0],
        [0.0, 0.0, m22, m23],
        [0.0, 0.0, -1.0, 0.0],
    ])


def orthographic(extents: OrthoExtents, near: float, far: float) -> Mat4:
    """Classical symmetric orthographic projection (endpoint at fraction 1)."""
    rep = ValidationReport()
    if not (_ok(extents.r) and extents.r > 0.0):
        rep.violations.append(("r", "0 < r"))
    if not (_ok(extents.t) and extents.t > 0.0):
        rep.violations.append(("t", "0 < t"))
    if not (_ok(near) and near > 0.0):
        rep.violations.append(("near", "0 < near"))
    if not (_ok(far) and far > 0.0):
        rep.violations.append(("far", "0 < far"))
    elif _ok(near) and near > 0.0 and not (near < far):
        rep.violations.append(("near", "near < far"))
    _raise_if_invalid(rep)
    m22, m23 = _ortho_depth(near, far)
    return Mat4.from_rows([
        [1.0 / extents.r, 0.0, 0.0, 0.0],
        [0.0, 1.0 / extents.t, 0.0, 0.0],
        [0.0, 0.0, m22, m23],
        [0.0, 0.0, 0.0, 1.0],
    ])


def ortho_extents_from_fov(theta: float, alpha: float, d: float) -> OrthoExtents:
    """Half-extents of the frustum cross-section at eye distance d.

    t = tan(theta/2) * d and r = alpha * t, so an orthographic projection
    built from these matches the perspective field of view at distance d.
    """
    rep = ValidationReport()
    if not (_ok(theta) and 0.0 < theta < math.pi):
        rep.violations.append(("theta", "0 < theta < pi (radians)"))
    if not (_ok(alpha) and alpha > 0.0):
        rep.violations.append(("alpha", "0 < alpha"))
    if not (_ok(d) and d > 0.0):
        rep.violations.append(("d", "0 < d"))
    _raise_if_invalid(rep)
    t = math.tan(0.5 * theta) * d
    return OrthoExtents(r=alpha * t, t=t)


def apply_mapping(mapping: MappingFunction, p: float) -> float:
    """Remap a blend fraction; always fixes 0 to 0 and 1 to 1 exactly."""
    rep = ValidationReport()
    if not (_ok(p) and 0.0 <= p <= 1.0):
        rep.violations.append(("p", "0 <= p <= 1"))
    if isinstance(mapping, PowerMapping) and not (_ok(mapping.c) and mapping.c > 0.0):
        rep.violations.append(("c", "0 < c (power mapping exponent)"))
    _raise_if_invalid(rep)
    if isinstance(mapping, IdentityMapping):
        return p
    return p ** (1.0 / mapping.c)


def alpha_from_fovs(theta: float, theta_h: float) -> float:
    """Aspect ratio implied by a vertical and a horizontal field of view."""
    rep = ValidationReport()
    if not (_ok(theta) and 0.0 < theta < math.pi):
        rep.violations.append(("theta", "0 < theta < pi (radians)"))
    if not (_ok(theta_h) and 0.0 < theta_h < math.pi):
        rep.violations.append(("theta_h", "0 < theta_h < pi (radians)"))
    _raise_if_invalid(rep)
    return theta_h / theta


def theta_from_horizontal(theta_h: float, alpha: float) -> float:
    """Vertical field of view implied by a horizontal one and an aspect ratio."""
    rep = ValidationReport()
    if not (_ok(theta_h) and 0.0 < theta_h < math.pi):
        rep.violations.append(("theta_h", "0 < theta_h < pi (radians)"))
    if not (_ok(alpha) and alpha > 0.0):
        rep.violations.append(("alpha", "0 < alpha"))
    _raise_if_invalid(rep)
    theta = theta_h / alpha
    if not theta < math.pi:
        rep.violations.append(("theta", "theta_h / alpha must stay below pi"))
        _raise_if_invalid(rep)
    return theta


def generalized(params: ProjectionParams) -> Mat4:
    """Build the blended projection matrix for a full parameter record.

    With q = mapping(p), every entry is the interpolation
    ``lerp(perspective entry, orthographic entry, q)``:

      m00 = lerp(cot(theta/2)/alpha, 1/r, q)      r, t from distance d
      m11 = lerp(cot(theta/2),       1/t, q)
      m02 = lerp(shear_h, shear_h/d, q)           m12 likewise for shear_v
      row 2 = depth rows of both endpoints, blended
      row 3 = [0, 0, q-1, q]

    An infinite far plane replaces row 2 with the f -> infinity limit,
    optionally nudged by epsilon: m22 = lerp(eps-1, 0, q) and
    m23 = lerp((eps-2)n, eps-1, q).
    """
    rep = validate(params)
    _raise_if_invalid(rep)

    q = apply_mapping(params.mapping, params.p)
    ext = ortho_extents_from_fov(params.theta, params.alpha, params.d)
    cot = _cot_half(params.theta)
    n = params.near
    d = params.d

    m00 = lerp(cot / params.alpha, 1.0 / ext.r, q)
    m11 = lerp(cot, 1.0 / ext.t, q)
    m02 = lerp(params.shear_h, params.shear_h / d, q)
    m12 = lerp(params.shear_v, params.shear_v / d, q)

    if isinstance(params.far, FiniteFar):
        f = params.far.distance
        p22, p23 = _persp_depth(n, f)
        o22, o23 = _ortho_depth(n, f)
        m22 = lerp(p22, o22, q)
        m23 = lerp(p23, o23, q)
    else:
        eps = params.far.epsilon
        m22 = lerp(eps - 1.0, 0.0, q)
        m23 = lerp((eps - 2.0) * n, eps - 1.0, q)

    return Mat4.from_rows([
        [m00, 0.0, m02, 0.0],
        [0.0, m11, m12, 0.0],
        [0.0, 0.0, m22, m23],
        [0.0, 0.0, q - 1.0, q],
    ])

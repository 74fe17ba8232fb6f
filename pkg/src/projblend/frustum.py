"""Geometric oracle for projection matrices.

Recovers the eye-space frustum by unprojecting the corners of the NDC
cube through the inverse matrix, and offers point projection/containment
checks.  None of this reuses the closed-form builder entries, so it can
cross-check them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Mat4, NdcPoint, Vec3, Vec4, mat4_inverse, mat4_mul_vec4

__all__ = [
    "DegenerateWError",
    "Frustum",
    "NDC_CUBE_CORNERS",
    "project_point",
    "unproject",
    "frustum_corners",
    "contains",
]

_W_EPS = 1e-12


class DegenerateWError(ValueError):
    """A homogeneous point landed (numerically) on w = 0."""


# Corner order: near/far block first, then bottom/top, then left/right.
# Near is NDC z = -1, bottom is y = -1, left is x = -1.
NDC_CUBE_CORNERS: tuple[Vec3, ...] = tuple(
    Vec3(float(x), float(y), float(z))
    for z in (-1, 1)
    for y in (-1, 1)
    for x in (-1, 1)
)


@dataclass(frozen=True)
class Frustum:
    """8 eye-space corners in NDC_CUBE_CORNERS order."""

    corners: tuple[Vec3, ...]

    @property
    def near_corners(self) -> tuple[Vec3, ...]:
        return self.corners[:4]

    @property
    def far_corners(self) -> tuple[Vec3, ...]:
        return self.corners[4:]

    def centroid(self) -> Vec3:
        s = Vec3(0.0, 0.0, 0.0)
        for c in self.corners:
            s = s + c
        return s * (1.0 / 8.0)


def project_point(m: Mat4, eye: Vec3) -> tuple[NdcPoint, float]:
    """Project an eye-space point; returns (NDC point, clip-space w)."""
    clip = mat4_mul_vec4(m, Vec4.from_vec3(eye))
    if abs(clip.w) < _W_EPS:
        raise DegenerateWError(f"clip-space w = {clip.w:g} for eye point {eye.as_tuple()}")
    inv_w = 1.0 / clip.w
    return Vec3(clip.x * inv_w, clip.y * inv_w, clip.z * inv_w), clip.w


def unproject(m: Mat4, ndc: NdcPoint) -> Vec3:
    """Map an NDC point back to eye space through the matrix inverse."""
    return _unproject_with(mat4_inverse(m), ndc)


def _unproject_with(inv: Mat4, ndc: NdcPoint) -> Vec3:
    h = mat4_mul_vec4(inv, Vec4.from_vec3(ndc))
    if abs(h.w) < _W_EPS:
        raise DegenerateWError(f"unprojected w = {h.w:g} for NDC point {ndc.as_tuple()}")
    inv_w = 1.0 / h.w
    return Vec3(h.x * inv_w, h.y * inv_w, h.z * inv_w)


def frustum_corners(m: Mat4) -> Frustum:
    """Unproject the 8 NDC cube corners.

    Only defined for invertible matrices; infinite-far matrices at full
    orthographic blend have proportional depth and bottom rows and raise
    SingularMatrixError from the inversion.
    """
    inv = mat4_inverse(m)
    return Frustum(tuple(_unproject_with(inv, c) for c in NDC_CUBE_CORNERS))


def contains(m: Mat4, eye: Vec3) -> bool:
    """Clip-space containment: w > 0 and |x|, |y|, |z| <= w.

    Stated on clip coordinates rather than NDC so it stays well-defined
    across the whole blend (w varies with the blend fraction) and needs
    no division.
    """
    clip = mat4_mul_vec4(m, Vec4.from_vec3(eye))
    w = clip.w
    return w > 0.0 and abs(clip.x) <= w and abs(clip.y) <= w and abs(clip.z) <= w

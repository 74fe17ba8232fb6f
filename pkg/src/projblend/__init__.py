"""Blendable perspective/orthographic projection matrices.

A single matrix family interpolates component-wise between a perspective
and an orthographic projection, with shear, an optional infinite far
plane, and remappable blend fractions, plus a small software pipeline
that renders scenes through it.
"""

from .linalg import (
    Mat4,
    NdcPoint,
    SingularMatrixError,
    Vec3,
    Vec4,
    lerp,
    mat4_inverse,
    mat4_mul,
    mat4_mul_vec4,
    max_abs_diff,
)
from .projection import (
    EPSILON_FLOOR,
    FarMode,
    FiniteFar,
    IdentityMapping,
    InfiniteFar,
    InvalidParamsError,
    MappingFunction,
    OrthoExtents,
    PowerMapping,
    ProjectionParams,
    ValidationReport,
    alpha_from_fovs,
    apply_mapping,
    generalized,
    ortho_extents_from_fov,
    orthographic,
    perspective,
    theta_from_horizontal,
    validate,
)
from .frustum import (
    DegenerateWError,
    Frustum,
    NDC_CUBE_CORNERS,
    contains,
    frustum_corners,
    project_point,
    unproject,
)
from .render import (
    BACKGROUND,
    DEFAULT_CAMERA,
    DEFAULT_SWEEP_MAPPINGS,
    DEFAULT_SWEEP_P_VALUES,
    Box,
    Camera,
    CheckerPlane,
    Image,
    Scene,
    SceneFormatError,
    Segment,
    SweepSpec,
    builtin_scene,
    clip_polygon,
    clip_segment,
    load_scene,
    parse_scene_text,
    render,
    render_svg,
    render_sweep,
    sweep_svg,
    write_ppm,
)

__version__ = "0.1.0"

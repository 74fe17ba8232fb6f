"""Software projection pipeline.

Primitives are moved to eye space with a rigid camera transform,
projected by the generalized matrix, clipped in homogeneous clip space,
divided and viewport-mapped, then drawn back-to-front (painter's order
over eye-space centroids).  Everything is deterministic: the same inputs
produce bit-identical images.

Two draw modes exist.  ``wireframe`` rasterizes outline segments only
(box edges, checkerboard grid lines) with integer Bresenham lines.
``flat`` fills box faces and checkerboard cells with even-odd scanline
spans; degenerate (zero-area) polygons produce no pixels, which is what
makes an edge-on plane vanish at full orthographic blend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .linalg import Mat4, Vec3, Vec4, mat4_mul, mat4_mul_vec4
from .projection import (
    IdentityMapping,
    MappingFunction,
    PowerMapping,
    ProjectionParams,
    generalized,
)

__all__ = [
    "Color",
    "Box",
    "CheckerPlane",
    "Segment",
    "Primitive",
    "Camera",
    "Scene",
    "Image",
    "SweepSpec",
    "SceneFormatError",
    "BACKGROUND",
    "DEFAULT_CAMERA",
    "DEFAULT_SWEEP_MAPPINGS",
    "DEFAULT_SWEEP_P_VALUES",
    "clip_segment",
    "clip_polygon",
    "render",
    "render_svg",
    "render_sweep",
    "sweep_svg",
    "parse_scene_text",
    "load_scene",
    "builtin_scene",
    "write_ppm",
]

Color = tuple[int, int, int]

BACKGROUND: Color = (255, 255, 255)
GUTTER: Color = (0, 0, 0)
GUTTER_PX = 2


class SceneFormatError(ValueError):
    """Malformed scene text."""


@dataclass(frozen=True)
class Box:
    center: Vec3
    half_extents: Vec3
    color: Color


@dataclass(frozen=True)
class CheckerPlane:
    """Planar checkerboard: origin plus full edge vectors u and v,
    subdivided into cells x cells quads of alternating colors."""

    origin: Vec3
    u_axis: Vec3
    v_axis: Vec3
    cells: int
    color_a: Color
    color_b: Color


@dataclass(frozen=True)
class Segment:
    a: Vec3
    b: Vec3
    color: Color


Primitive = Box | CheckerPlane | Segment


@dataclass(frozen=True)
class Camera:
    """Rigid camera pose; basis must be orthonormal (within 1e-9)."""

    position: Vec3
    forward: Vec3
    up: Vec3

    @classmethod
    def look_at(cls, position: Vec3, target: Vec3, up: Vec3 = Vec3(0.0, 1.0, 0.0)) -> "Camera":
        fwd = (target - position).normalized()
        right = fwd.cross(up)
        if right.length() < 1e-9:
            raise ValueError("camera forward direction is parallel to up")
        right = right.normalized()
        true_up = right.cross(fwd)
        return cls(position, fwd, true_up)

    def view_matrix(self) -> Mat4:
        f, u = self.forward, self.up
        right = f.cross(u)
        for name, v in (("forward", f), ("up", u), ("right", right)):
            if abs(v.length() - 1.0) > 1e-9:
                raise ValueError(f"camera basis not orthonormal: |{name}| = {v.length()!r}")
        if abs(f.dot(u)) > 1e-9:
            raise ValueError("camera basis not orthonormal: forward not perpendicular to up")
        pos = self.position
        return Mat4.from_rows([
            [right.x, right.y, right.z, -right.dot(pos)],
            [u.x, u.y, u.z, -u.dot(pos)],
            [-f.x, -f.y, -f.z, f.dot(pos)],
            [0.0, 0.0, 0.0, 1.0],
        ])


DEFAULT_CAMERA = Camera.look_at(Vec3(0.0, 2.0, 10.0), Vec3(0.0, 2.0, 0.0))


@dataclass(frozen=True)
class Scene:
    primitives: tuple[Primitive, ...]
    camera: Camera = DEFAULT_CAMERA


class Image:
    """Row-major RGB8 raster."""

    def __init__(self, width: int, height: int, background: Color = BACKGROUND):
        if width < 1 or height < 1:
            raise ValueError("image dimensions must be at least 1x1")
        self.width = width
        self.height = height
        self.pixels = bytearray(bytes(background) * (width * height))

    def put(self, x: int, y: int, color: Color) -> None:
        if 0 <= x < self.width and 0 <= y < self.height:
            i = 3 * (y * self.width + x)
            self.pixels[i] = color[0]
            self.pixels[i + 1] = color[1]
            self.pixels[i + 2] = color[2]

    def get(self, x: int, y: int) -> Color:
        i = 3 * (y * self.width + x)
        return (self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])

    def blit(self, src: "Image", ox: int, oy: int) -> None:
        for row in range(src.height):
            dst_off = 3 * ((oy + row) * self.width + ox)
            src_off = 3 * row * src.width
            self.pixels[dst_off:dst_off + 3 * src.width] = src.pixels[src_off:src_off + 3 * src.width]

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + bytes(self.pixels)


def write_ppm(image: Image, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(image.to_ppm())


@dataclass(frozen=True)
class SweepSpec:
    """Grid of renders: one row per mapping, one column per p value."""

    mappings: tuple[MappingFunction, ...]
    p_values: tuple[float, ...]
    params: ProjectionParams
    scene: Scene
    panel_width: int
    panel_height: int
    mode: str = "wireframe"


DEFAULT_SWEEP_MAPPINGS: tuple[MappingFunction, ...] = (
    PowerMapping(1.0),
    PowerMapping(3.0),
    PowerMapping(5.0),
    PowerMapping(7.0),
    PowerMapping(9.0),
)
DEFAULT_SWEEP_P_VALUES: tuple[float, ...] = (0.25, 0.5, 0.75)


# ---------------------------------------------------------------------------
# Homogeneous clipping against |x|, |y|, |z| <= w (w > 0 implied for any
# nonzero point satisfying all six inequalities).


def _plane_dists(v: Vec4) -> tuple[float, float, float, float, float, float]:
    return (v.w + v.x, v.w - v.x, v.w + v.y, v.w - v.y, v.w + v.z, v.w - v.z)


def _mix4(a: Vec4, b: Vec4, t: float) -> Vec4:
    return Vec4(
        a.x + (b.x - a.x) * t,
        a.y + (b.y - a.y) * t,
        a.z + (b.z - a.z) * t,
        a.w + (b.w - a.w) * t,
    )


def clip_segment(a: Vec4, b: Vec4) -> tuple[Vec4, Vec4] | None:
    """Clip a clip-space segment to the view volume.

    Returns the surviving sub-segment or None if nothing is inside.
    Endpoints already inside are returned unchanged, so points exactly on
    the boundary are preserved.
    """
    t0, t1 = 0.0, 1.0
    for da, db in zip(_plane_dists(a), _plane_dists(b)):
        if da < 0.0 and db < 0.0:
            return None
        if da < 0.0:
            t0 = max(t0, da / (da - db))
        elif db < 0.0:
            t1 = min(t1, da / (da - db))
        if t0 > t1:
            return None
    na = _mix4(a, b, t0) if t0 > 0.0 else a
    nb = _mix4(a, b, t1) if t1 < 1.0 else b
    return na, nb


def clip_polygon(poly: list[Vec4]) -> list[Vec4]:
    """Sutherland-Hodgman clip of a convex polygon against the view volume."""
    verts = list(poly)
    for plane in range(6):
        if not verts:
            return []
        dists = [_plane_dists(v)[plane] for v in verts]
        out: list[Vec4] = []
        count = len(verts)
        for i in range(count):
            j = (i + 1) % count
            di, dj = dists[i], dists[j]
            if di >= 0.0:
                out.append(verts[i])
            if (di >= 0.0) != (dj >= 0.0):
                out.append(_mix4(verts[i], verts[j], di / (di - dj)))
        verts = out
    return verts


# ---------------------------------------------------------------------------
# Rasterization.


def _viewport(ndc_x: float, ndc_y: float, width: int, height: int) -> tuple[float, float]:
    return (ndc_x + 1.0) * 0.5 * width, (1.0 - (ndc_y + 1.0) * 0.5) * height


def _draw_line(img: Image, x0f: float, y0f: float, x1f: float, y1f: float, color: Color) -> None:
    # Integer Bresenham for cross-platform reproducibility.
    x0, y0 = int(round(x0f)), int(round(y0f))
    x1, y1 = int(round(x1f)), int(round(y1f))
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        img.put(x0, y0, color)
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def _fill_polygon(img: Image, pts: list[tuple[float, float]], color: Color) -> None:
    # Even-odd scanline fill sampled at pixel centers; zero-area polygons
    # yield no spans.
    if len(pts) < 3:
        return
    ys = [p[1] for p in pts]
    y_lo = max(0, int(math.floor(min(ys))))
    y_hi = min(img.height - 1, int(math.ceil(max(ys))))
    count = len(pts)
    for py in range(y_lo, y_hi + 1):
        yc = py + 0.5
        xs: list[float] = []
        for i in range(count):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % count]
            if (ay <= yc < by) or (by <= yc < ay):
                t = (yc - ay) / (by - ay)
                xs.append(ax + t * (bx - ax))
        xs.sort()
        for k in range(0, len(xs) - 1, 2):
            x_start = max(0, int(math.ceil(xs[k] - 0.5)))
            x_end = min(img.width, int(math.ceil(xs[k + 1] - 0.5)))
            for px in range(x_start, x_end):
                img.put(px, py, color)


# ---------------------------------------------------------------------------
# Scene decomposition into eye-space draw items.


_BOX_EDGES = (
    (0, 1), (1, 3), (3, 2), (2, 0),
    (4, 5), (5, 7), (7, 6), (6, 4),
    (0, 4), (1, 5), (2, 6), (3, 7),
)
_BOX_FACES = (
    (0, 1, 3, 2), (4, 5, 7, 6),
    (0, 1, 5, 4), (2, 3, 7, 6),
    (0, 2, 6, 4), (1, 3, 7, 5),
)


def _box_corners(box: Box) -> list[Vec3]:
    c, h = box.center, box.half_extents
    return [
        Vec3(c.x + (sx * h.x), c.y + (sy * h.y), c.z + (sz * h.z))
        for sz in (-1.0, 1.0)
        for sy in (-1.0, 1.0)
        for sx in (-1.0, 1.0)
    ]


def _plane_point(pl: CheckerPlane, i: int, j: int) -> Vec3:
    fu = i / pl.cells
    fv = j / pl.cells
    return pl.origin + pl.u_axis * fu + pl.v_axis * fv


# Draw items: ("line", a, b, color) with eye-space endpoints, or
# ("poly", [vertices], color) with an eye-space vertex loop.


def _scene_items(scene: Scene, mode: str) -> list[tuple]:
    view = scene.camera.view_matrix()

    def to_eye(p: Vec3) -> Vec3:
        return mat4_mul_vec4(view, Vec4.from_vec3(p)).xyz()

    items: list[tuple] = []
    for prim in scene.primitives:
        if isinstance(prim, Segment):
            items.append(("line", to_eye(prim.a), to_eye(prim.b), prim.color))
        elif isinstance(prim, Box):
            corners = [to_eye(p) for p in _box_corners(prim)]
            if mode == "wireframe":
                for i, j in _BOX_EDGES:
                    items.append(("line", corners[i], corners[j], prim.color))
            else:
                for face in _BOX_FACES:
                    items.append(("poly", [corners[k] for k in face], prim.color))
        elif isinstance(prim, CheckerPlane):
            if mode == "wireframe":
                for j in range(prim.cells + 1):
                    a = to_eye(_plane_point(prim, 0, j))
                    b = to_eye(_plane_point(prim, prim.cells, j))
                    items.append(("line", a, b, prim.color_a))
                for i in range(prim.cells + 1):
                    a = to_eye(_plane_point(prim, i, 0))
                    b = to_eye(_plane_point(prim, i, prim.cells))
                    items.append(("line", a, b, prim.color_a))
            else:
                for i in range(prim.cells):
                    for j in range(prim.cells):
                        quad = [
                            to_eye(_plane_point(prim, i, j)),
                            to_eye(_plane_point(prim, i + 1, j)),
                            to_eye(_plane_point(prim, i + 1, j + 1)),
                            to_eye(_plane_point(prim, i, j + 1)),
                        ]
                        color = prim.color_a if (i + j) % 2 == 0 else prim.color_b
                        items.append(("poly", quad, color))
        else:
            raise TypeError(f"unknown primitive type: {type(prim).__name__}")

    def depth(item: tuple) -> float:
        if item[0] == "line":
            return 0.5 * (item[1].z + item[2].z)
        verts = item[1]
        return sum(v.z for v in verts) / len(verts)

    # Farthest (most negative z) first; ties keep insertion order.
    items.sort(key=depth)
    return items


def _check_render_args(mode: str, width: int, height: int) -> None:
    if mode not in ("wireframe", "flat"):
        raise ValueError(f"unknown draw mode: {mode!r}")
    if width < 1 or height < 1:
        raise ValueError("render size must be at least 1x1 pixels")


def _screen_segments(
    proj: Mat4, items: list[tuple], width: int, height: int
) -> list[tuple[float, float, float, float, Color]]:
    """Project, clip and viewport-map the line items, preserving order."""
    out = []
    for item in items:
        if item[0] != "line":
            continue
        _, a, b, color = item
        clipped = clip_segment(
            mat4_mul_vec4(proj, Vec4.from_vec3(a)),
            mat4_mul_vec4(proj, Vec4.from_vec3(b)),
        )
        if clipped is None:
            continue
        ca, cb = clipped
        ax, ay = _viewport(ca.x / ca.w, ca.y / ca.w, width, height)
        bx, by = _viewport(cb.x / cb.w, cb.y / cb.w, width, height)
        out.append((ax, ay, bx, by, color))
    return out


def render(
    scene: Scene,
    params: ProjectionParams,
    width: int,
    height: int,
    mode: str = "wireframe",
    background: Color = BACKGROUND,
) -> Image:
    """Render a scene to an RGB8 image through the generalized projection."""
    _check_render_args(mode, width, height)
    proj = generalized(params)
    items = _scene_items(scene, mode)
    img = Image(width, height, background)
    for item in items:
        if item[0] == "line":
            _, a, b, color = item
            clipped = clip_segment(
                mat4_mul_vec4(proj, Vec4.from_vec3(a)),
                mat4_mul_vec4(proj, Vec4.from_vec3(b)),
            )
            if clipped is None:
                continue
            ca, cb = clipped
            ax, ay = _viewport(ca.x / ca.w, ca.y / ca.w, width, height)
            bx, by = _viewport(cb.x / cb.w, cb.y / cb.w, width, height)
            _draw_line(img, ax, ay, bx, by, color)
        else:
            _, verts, color = item
            clipped_poly = clip_polygon([mat4_mul_vec4(proj, Vec4.from_vec3(v)) for v in verts])
            if len(clipped_poly) < 3:
                continue
            pts = [_viewport(v.x / v.w, v.y / v.w, width, height) for v in clipped_poly]
            _fill_polygon(img, pts, color)
    return img


def render_svg(scene: Scene, params: ProjectionParams, width: int, height: int) -> str:
    """Wireframe render as an SVG document: one <line> per clipped segment."""
    _check_render_args("wireframe", width, height)
    proj = generalized(params)
    items = _scene_items(scene, "wireframe")
    segs = _screen_segments(proj, items, width, height)
    return _svg_document(segs, width, height)


def _svg_document(segs: list[tuple[float, float, float, float, Color]], width: int, height: int) -> str:
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">']
    for ax, ay, bx, by, (r, g, b) in segs:
        lines.append(
            f'<line x1="{ax:.3f}" y1="{ay:.3f}" x2="{bx:.3f}" y2="{by:.3f}" '
            f'stroke="rgb({r},{g},{b})" stroke-width="1"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _sweep_grid_size(spec: SweepSpec) -> tuple[int, int]:
    cols = len(spec.p_values)
    rows = len(spec.mappings)
    w = cols * spec.panel_width + (cols - 1) * GUTTER_PX
    h = rows * spec.panel_height + (rows - 1) * GUTTER_PX
    return w, h


def render_sweep(spec: SweepSpec) -> Image:
    """Render the mapping x p grid; panels separated by 2px black gutters."""
    if not spec.mappings or not spec.p_values:
        raise ValueError("sweep needs at least one mapping and one p value")
    total_w, total_h = _sweep_grid_size(spec)
    grid = Image(total_w, total_h, GUTTER)
    for row, mapping in enumerate(spec.mappings):
        for col, p in enumerate(spec.p_values):
            params = replace(spec.params, p=p, mapping=mapping)
            panel = render(spec.scene, params, spec.panel_width, spec.panel_height, spec.mode)
            grid.blit(panel, col * (spec.panel_width + GUTTER_PX), row * (spec.panel_height + GUTTER_PX))
    return grid


def sweep_svg(spec: SweepSpec) -> str:
    """Wireframe sweep as SVG; panel segments are offset into grid position."""
    if not spec.mappings or not spec.p_values:
        raise ValueError("sweep needs at least one mapping and one p value")
    total_w, total_h = _sweep_grid_size(spec)
    segs: list[tuple[float, float, float, float, Color]] = []
    items = _scene_items(spec.scene, "wireframe")
    for row, mapping in enumerate(spec.mappings):
        for col, p in enumerate(spec.p_values):
            params = replace(spec.params, p=p, mapping=mapping)
            proj = generalized(params)
            ox = col * (spec.panel_width + GUTTER_PX)
            oy = row * (spec.panel_height + GUTTER_PX)
            for ax, ay, bx, by, color in _screen_segments(proj, items, spec.panel_width, spec.panel_height):
                segs.append((ax + ox, ay + oy, bx + ox, by + oy, color))
    return _svg_document(segs, total_w, total_h)


# ---------------------------------------------------------------------------
# Scene text format and built-in scenes.
#
#   box cx cy cz hx hy hz r g b
#   plane ox oy oz ux uy uz vx vy vz cells r1 g1 b1 r2 g2 b2
#   segment ax ay az bx by bz r g b
#
# '#' starts a comment; values are whitespace-separated decimals.


def _color_from(vals: list[float], lineno: int) -> Color:
    for v in vals:
        if not (0 <= v <= 255):
            raise SceneFormatError(f"line {lineno}: color component {v:g} outside 0..255")
    return (int(round(vals[0])), int(round(vals[1])), int(round(vals[2])))


def parse_scene_text(text: str) -> tuple[Primitive, ...]:
    prims: list[Primitive] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        try:
            vals = [float(t) for t in args]
        except ValueError as exc:
            raise SceneFormatError(f"line {lineno}: non-numeric value ({exc})") from None
        if kind == "box":
            if len(vals) != 9:
                raise SceneFormatError(f"line {lineno}: box needs 9 values, got {len(vals)}")
            half = Vec3(vals[3], vals[4], vals[5])
            if min(half.x, half.y, half.z) <= 0:
                raise SceneFormatError(f"line {lineno}: box half-extents must be positive")
            prims.append(Box(Vec3(vals[0], vals[1], vals[2]), half, _color_from(vals[6:9], lineno)))
        elif kind == "plane":
            if len(vals) != 16:
                raise SceneFormatError(f"line {lineno}: plane needs 16 values, got {len(vals)}")
            cells = int(round(vals[9]))
            if cells < 1:
                raise SceneFormatError(f"line {lineno}: plane needs at least 1 cell")
            prims.append(
                CheckerPlane(
                    Vec3(vals[0], vals[1], vals[2]),
                    Vec3(vals[3], vals[4], vals[5]),
                    Vec3(vals[6], vals[7], vals[8]),
                    cells,
                    _color_from(vals[10:13], lineno),
                    _color_from(vals[13:16], lineno),
                )
            )
        elif kind == "segment":
            if len(vals) != 9:
                raise SceneFormatError(f"line {lineno}: segment needs 9 values, got {len(vals)}")
            prims.append(
                Segment(Vec3(vals[0], vals[1], vals[2]), Vec3(vals[3], vals[4], vals[5]), _color_from(vals[6:9], lineno))
            )
        else:
            raise SceneFormatError(f"line {lineno}: unknown primitive {kind!r}")
    return tuple(prims)


def load_scene(path: str, camera: Camera = DEFAULT_CAMERA) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return Scene(parse_scene_text(text), camera)


def _fig1_scene() -> Scene:
    # Checkerboard ground plane plus a few boxes, viewed by a level camera
    # so the plane lies edge-on to the view direction: visible while the
    # blend is perspective-like, gone at the full orthographic end.
    ground = CheckerPlane(
        origin=Vec3(-8.0, 0.0, -8.0),
        u_axis=Vec3(16.0, 0.0, 0.0),
        v_axis=Vec3(0.0, 0.0, 16.0),
        cells=8,
        color_a=(205, 205, 205),
        color_b=(95, 95, 95),
    )
    boxes = (
        Box(Vec3(-2.5, 1.0, -3.0), Vec3(1.0, 1.0, 1.0), (196, 60, 48)),
        Box(Vec3(2.0, 0.75, 1.0), Vec3(0.75, 0.75, 0.75), (66, 96, 198)),
        Box(Vec3(0.0, 0.5, 5.0), Vec3(0.5, 0.5, 0.5), (70, 160, 85)),
    )
    return Scene((ground,) + boxes, DEFAULT_CAMERA)


_BUILTIN_SCENES = {
    "paper-fig1": _fig1_scene,
    "fig1": _fig1_scene,
}


def builtin_scene(name: str) -> Scene | None:
    """Look up a named built-in scene; None when the name is unknown."""
    maker = _BUILTIN_SCENES.get(name)
    return maker() if maker else None

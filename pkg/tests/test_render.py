import math
import random
from dataclasses import replace

import pytest

from projblend import (
    BACKGROUND,
    Box,
    Camera,
    CheckerPlane,
    FiniteFar,
    IdentityMapping,
    Image,
    PowerMapping,
    ProjectionParams,
    Scene,
    SceneFormatError,
    Segment,
    SweepSpec,
    Vec3,
    Vec4,
    builtin_scene,
    clip_polygon,
    clip_segment,
    parse_scene_text,
    render,
    render_svg,
    render_sweep,
)

IDENTITY_CAM = Camera(Vec3(0.0, 0.0, 0.0), Vec3(0.0, 0.0, -1.0), Vec3(0.0, 1.0, 0.0))


def base_params(**overrides):
    kw = dict(theta=math.pi / 2, alpha=1.0, near=1.0, far=FiniteFar(30.0), d=5.0)
    kw.update(overrides)
    return ProjectionParams(**kw)


def footprint(img):
    return {
        (x, y)
        for y in range(img.height)
        for x in range(img.width)
        if img.get(x, y) != BACKGROUND
    }


# --- clipping --------------------------------------------------------------

def test_clip_inside_unchanged():
    a = Vec4(0.1, 0.2, -0.3, 1.0)
    b = Vec4(-0.4, 0.0, 0.9, 1.0)
    assert clip_segment(a, b) == (a, b)


def test_clip_fully_outside_one_plane():
    # z > w at both ends: beyond the far plane
    a = Vec4(0.0, 0.0, 2.0, 1.0)
    b = Vec4(0.5, 0.0, 3.0, 1.0)
    assert clip_segment(a, b) is None


def test_clip_near_plane_straddle():
    # crossing z = -w; the clipped endpoint must satisfy z' = -w'
    a = Vec4(0.0, 0.0, 0.0, 1.0)
    b = Vec4(0.2, 0.1, -3.0, 1.0)
    got = clip_segment(a, b)
    assert got is not None
    na, nb = got
    assert na == a
    assert abs(nb.z + nb.w) < 1e-9


def test_clip_boundary_endpoint_preserved():
    a = Vec4(0.0, 0.0, -1.0, 1.0)   # exactly on the near plane
    b = Vec4(0.0, 0.0, 0.5, 1.0)
    got = clip_segment(a, b)
    assert got is not None
    assert got[0] == a


def test_clip_behind_camera():
    # w flips sign along the segment; only the w > 0 piece may survive
    a = Vec4(0.0, 0.0, -1.0, 2.0)
    b = Vec4(0.0, 0.0, 1.0, -2.0)
    got = clip_segment(a, b)
    assert got is not None
    for v in got:
        assert v.w > 0.0
        assert abs(v.x) <= v.w + 1e-9
        assert abs(v.z) <= v.w + 1e-9


def test_clip_soundness_random_segments():
    rng = random.Random(1100)
    kept = 0
    for _ in range(2000):
        a = Vec4(*(rng.uniform(-4, 4) for _ in range(3)), rng.uniform(-2, 3))
        b = Vec4(*(rng.uniform(-4, 4) for _ in range(3)), rng.uniform(-2, 3))
        got = clip_segment(a, b)
        if got is None:
            continue
        kept += 1
        for t in (0.0, 0.25, 0.5, 0.75, 1.0):
            v = Vec4(
                got[0].x + (got[1].x - got[0].x) * t,
                got[0].y + (got[1].y - got[0].y) * t,
                got[0].z + (got[1].z - got[0].z) * t,
                got[0].w + (got[1].w - got[0].w) * t,
            )
            slack = 1e-9 * max(1.0, abs(v.w))
            assert abs(v.x) <= v.w + slack
            assert abs(v.y) <= v.w + slack
            assert abs(v.z) <= v.w + slack
    assert kept > 50  # the sample ranges do produce visible segments


def test_clip_polygon_quad():
    quad = [
        Vec4(-2.0, -0.5, 0.0, 1.0),
        Vec4(2.0, -0.5, 0.0, 1.0),
        Vec4(2.0, 0.5, 0.0, 1.0),
        Vec4(-2.0, 0.5, 0.0, 1.0),
    ]
    out = clip_polygon(quad)
    assert len(out) == 4
    assert all(abs(v.x) <= v.w + 1e-12 for v in out)
    assert max(v.x for v in out) == pytest.approx(1.0)
    assert clip_polygon([Vec4(0, 0, 2, 1), Vec4(1, 0, 2, 1), Vec4(0, 1, 2, 1)]) == []


# --- images ----------------------------------------------------------------

def test_image_basics():
    img = Image(3, 2, (10, 20, 30))
    assert img.get(2, 1) == (10, 20, 30)
    img.put(1, 0, (1, 2, 3))
    assert img.get(1, 0) == (1, 2, 3)
    img.put(-1, 0, (9, 9, 9))  # out-of-bounds writes are dropped
    img.put(3, 0, (9, 9, 9))
    ppm = img.to_ppm()
    assert ppm.startswith(b"P6\n3 2\n255\n")
    assert len(ppm) == len(b"P6\n3 2\n255\n") + 18


def test_image_rejects_empty():
    with pytest.raises(ValueError):
        Image(0, 4)


# --- render ----------------------------------------------------------------

def test_render_empty_scene_is_background():
    img = render(Scene((), IDENTITY_CAM), base_params(), 16, 16)
    assert footprint(img) == set()


def test_render_deterministic():
    scene = builtin_scene("paper-fig1")
    params = base_params(theta=math.radians(60), near=0.5, far=FiniteFar(40.0), d=10.0, p=0.4)
    a = render(scene, params, 64, 64, "flat")
    b = render(scene, params, 64, 64, "flat")
    assert a.to_ppm() == b.to_ppm()


def test_orthographic_depth_independence():
    box_near = Box(Vec3(0.5, 0.4, -5.0), Vec3(0.8, 0.8, 0.8), (200, 30, 30))
    box_far = Box(Vec3(0.5, 0.4, -15.0), Vec3(0.8, 0.8, 0.8), (200, 30, 30))
    params = base_params(p=1.0)
    img_near = render(Scene((box_near,), IDENTITY_CAM), params, 128, 128)
    img_far = render(Scene((box_far,), IDENTITY_CAM), params, 128, 128)
    assert img_near.to_ppm() == img_far.to_ppm()
    # sanity: at the perspective endpoint they differ, the far one smaller
    p0 = base_params(p=0.0)
    fp_near = footprint(render(Scene((box_near,), IDENTITY_CAM), p0, 128, 128))
    fp_far = footprint(render(Scene((box_far,), IDENTITY_CAM), p0, 128, 128))
    assert fp_near != fp_far

    def width_of(fp):
        xs = [x for x, _ in fp]
        return max(xs) - min(xs)

    assert width_of(fp_far) < width_of(fp_near)


def test_apparent_size_monotone_across_blend():
    # At depths beyond d the footprint grows with the blend, nearer it shrinks.
    far_box = Scene((Box(Vec3(0.0, 0.0, -20.0), Vec3(1.0, 1.0, 1.0), (0, 0, 0)),), IDENTITY_CAM)
    near_box = Scene((Box(Vec3(0.0, 0.0, -2.0), Vec3(1.0, 1.0, 1.0), (0, 0, 0)),), IDENTITY_CAM)
    params = base_params(near=0.5, far=FiniteFar(40.0), d=5.0)

    def bbox_width(scene, p):
        fp = footprint(render(scene, replace(params, p=p), 400, 400))
        xs = [x for x, _ in fp]
        return max(xs) - min(xs)

    far_w = [bbox_width(far_box, p) for p in (0.0, 0.5, 1.0)]
    near_w = [bbox_width(near_box, p) for p in (0.0, 0.5, 1.0)]
    assert far_w[0] < far_w[1] < far_w[2]
    assert near_w[0] > near_w[1] > near_w[2]


def test_edge_on_checkerboard_vanishes_at_ortho():
    plane = CheckerPlane(
        Vec3(-4.0, 0.0, -2.0), Vec3(8.0, 0.0, 0.0), Vec3(0.0, 0.0, -8.0), 4,
        (200, 200, 200), (90, 90, 90),
    )
    cam = Camera(Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, -1.0), Vec3(0.0, 1.0, 0.0))
    scene = Scene((plane,), cam)
    params = base_params(near=0.5, far=FiniteFar(20.0), d=4.0)
    assert footprint(render(scene, replace(params, p=0.0), 96, 96, "flat")) != set()
    assert footprint(render(scene, replace(params, p=1.0), 96, 96, "flat")) == set()


def test_segments_draw():
    seg = Segment(Vec3(-1.0, 0.0, -5.0), Vec3(1.0, 0.0, -5.0), (5, 6, 7))
    img = render(Scene((seg,), IDENTITY_CAM), base_params(), 64, 64)
    fp = footprint(img)
    assert fp and all(img.get(x, y) == (5, 6, 7) for x, y in fp)


# --- sweep -----------------------------------------------------------------

def test_sweep_grid_layout():
    scene = builtin_scene("paper-fig1")
    spec = SweepSpec(
        mappings=(PowerMapping(1.0), PowerMapping(3.0), PowerMapping(5.0), PowerMapping(7.0), PowerMapping(9.0)),
        p_values=(0.25, 0.5, 0.75),
        params=base_params(theta=math.radians(60), near=0.5, far=FiniteFar(40.0), d=10.0),
        scene=scene,
        panel_width=40,
        panel_height=40,
    )
    grid = render_sweep(spec)
    assert grid.width == 3 * 40 + 2 * 2
    assert grid.height == 5 * 40 + 4 * 2
    for gx in (40, 41, 82, 83):
        assert all(grid.get(gx, y) == (0, 0, 0) for y in range(grid.height))
    for gy in (40, 41, 82, 83, 124, 125, 166, 167):
        assert all(grid.get(x, gy) == (0, 0, 0) for x in range(grid.width))


def test_sweep_single_panel_matches_render():
    scene = builtin_scene("paper-fig1")
    params = base_params(theta=math.radians(60), near=0.5, far=FiniteFar(40.0), d=10.0)
    spec = SweepSpec((IdentityMapping(),), (0.0,), params, scene, 48, 48)
    grid = render_sweep(spec)
    single = render(scene, replace(params, p=0.0, mapping=IdentityMapping()), 48, 48)
    assert grid.to_ppm() == single.to_ppm()


def test_sweep_identity_equals_pow1():
    scene = builtin_scene("paper-fig1")
    params = base_params(theta=math.radians(60), near=0.5, far=FiniteFar(40.0), d=10.0)
    spec = SweepSpec((IdentityMapping(), PowerMapping(1.0)), (0.5,), params, scene, 48, 48)
    grid = render_sweep(spec)
    top = [grid.get(x, y) for y in range(48) for x in range(48)]
    bottom = [grid.get(x, y + 50) for y in range(48) for x in range(48)]
    assert top == bottom


# --- svg -------------------------------------------------------------------

def test_svg_structure():
    seg = Segment(Vec3(-1.0, 0.0, -5.0), Vec3(1.0, 0.5, -5.0), (10, 20, 30))
    doc = render_svg(Scene((seg,), IDENTITY_CAM), base_params(), 80, 60)
    assert doc.startswith('<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 80 60">')
    assert doc.count("<line") == 1
    assert 'stroke="rgb(10,20,30)"' in doc
    assert doc.rstrip().endswith("</svg>")


def test_svg_offscreen_segment_emits_nothing():
    seg = Segment(Vec3(0.0, 0.0, 5.0), Vec3(1.0, 0.0, 5.0), (1, 2, 3))  # behind camera
    doc = render_svg(Scene((seg,), IDENTITY_CAM), base_params(), 80, 60)
    assert "<line" not in doc


# --- scene text format -----------------------------------------------------

SCENE_TEXT = """
# demo scene
box 0 0.5 -4 0.5 0.5 0.5 200 30 30
plane -4 0 -8 8 0 0 0 0 8 4 200 200 200 90 90 90  # ground
segment 0 0 -2 1 1 -6 0 0 255
"""


def test_parse_scene_round_trip():
    prims = parse_scene_text(SCENE_TEXT)
    assert len(prims) == 3
    box, plane, seg = prims
    assert isinstance(box, Box) and box.color == (200, 30, 30)
    assert box.center == Vec3(0.0, 0.5, -4.0)
    assert isinstance(plane, CheckerPlane) and plane.cells == 4
    assert isinstance(seg, Segment) and seg.b == Vec3(1.0, 1.0, -6.0)


def test_parse_scene_empty_and_comments():
    assert parse_scene_text("") == ()
    assert parse_scene_text("# nothing\n\n   \n") == ()


@pytest.mark.parametrize(
    "line",
    [
        "box 0 0 0 1 1",                  # wrong arity
        "box 0 0 0 -1 1 1 0 0 0",        # bad half extent
        "box 0 0 0 1 1 1 300 0 0",       # color out of range
        "plane 0 0 0 1 0 0 0 0 1 0 1 1 1 2 2 2",   # zero cells
        "sphere 0 0 0 1 0 0 0",          # unknown primitive
        "box a b c 1 1 1 0 0 0",         # non-numeric
    ],
)
def test_parse_scene_rejects_malformed(line):
    with pytest.raises(SceneFormatError):
        parse_scene_text(line)


# --- camera ----------------------------------------------------------------

def test_camera_rejects_skewed_basis():
    cam = Camera(Vec3(0, 0, 0), Vec3(0.0, 0.0, -1.0), Vec3(0.0, 1.0, 0.1))
    with pytest.raises(ValueError):
        cam.view_matrix()


def test_camera_look_at_is_orthonormal():
    cam = Camera.look_at(Vec3(3.0, 2.0, 8.0), Vec3(-1.0, 0.5, -4.0))
    cam.view_matrix()  # must not raise
    assert abs(cam.forward.dot(cam.up)) < 1e-12


def test_render_rejects_bad_mode():
    with pytest.raises(ValueError):
        render(Scene((), IDENTITY_CAM), base_params(), 8, 8, mode="sketchy")

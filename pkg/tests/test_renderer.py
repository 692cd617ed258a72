import numpy as np
import pytest

from symdiag.errors import EmptyGeometryError
from symdiag.image import RasterImage
from symdiag.logic_form import LogicForm, parse
from symdiag.renderer import (
    DEFAULT_SIZE,
    RenderFrame,
    RenderStyle,
    derive_circles,
    render,
    render_text,
    viewport,
)

TRIANGLE_SRC = (
    "Point(a, 0.2, 0.2)\nPoint(b, 0.8, 0.2)\nPoint(c, 0.5, 0.8)\n"
    "Line(ab)\nLine(bc)\nLine(ca)\nShape(Triangle(a, b, c))\n"
)


class TestDeriveCircles:
    def test_explicit_radius_wins(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o, 0.25))\n"
            "Relation(PointLiesOnCircle(p, Circle(o)))\n"
        )
        circles = derive_circles(parse(src))
        assert len(circles) == 1
        assert circles[0].source == "explicit"
        assert circles[0].geom.radius == pytest.approx(0.25)

    def test_point_on_circle_distance(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o))\n"
            "Relation(PointLiesOnCircle(p, Circle(o, 0.4)))\n"
        )
        circles = derive_circles(parse(src))
        # the radius carried on the relation term is explicit and wins
        assert circles[0].geom.radius == pytest.approx(0.4)

    def test_point_on_circle_without_explicit_radius(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o))\n"
            "Relation(PointLiesOnCircle(p, Circle(o)))\n"
        )
        circles = derive_circles(parse(src))
        assert circles[0].source == "point_on_circle"
        assert circles[0].geom.radius == pytest.approx(0.4, abs=1e-12)

    def test_concyclic_cardinal_points(self):
        src = (
            "Point(a, 0.5, 0.1)\nPoint(b, 0.9, 0.5)\nPoint(c, 0.5, 0.9)\nPoint(d, 0.1, 0.5)\n"
            "Relation(ConcyclicPoints(a, b, c, d))\n"
        )
        circles = derive_circles(parse(src))
        assert len(circles) == 1
        assert circles[0].center_name is None
        assert circles[0].geom.center == pytest.approx((0.5, 0.5), abs=1e-9)
        assert circles[0].geom.radius == pytest.approx(0.4, abs=1e-9)

    def test_concyclic_binds_to_declared_center(self):
        src = (
            "Point(o, 0.5, 0.5)\n"
            "Point(a, 0.5, 0.1)\nPoint(b, 0.9, 0.5)\nPoint(c, 0.5, 0.9)\nPoint(d, 0.1, 0.5)\n"
            "Shape(Circle(o))\n"
            "Relation(ConcyclicPoints(a, b, c, d))\n"
        )
        circles = derive_circles(parse(src))
        assert len(circles) == 1
        assert circles[0].center_name == "o"
        assert circles[0].source == "concyclic"
        assert circles[0].geom.radius == pytest.approx(0.4, abs=1e-9)

    def test_incircle_heron_radius(self):
        src = (
            "Point(a, 0.1, 0.1)\nPoint(b, 0.4, 0.1)\nPoint(c, 0.1, 0.5)\n"
            "Point(o, 0.2, 0.2)\n"
            "Shape(Triangle(a, b, c))\nShape(Circle(o))\n"
            "Relation(Incircle(Circle(o), Triangle(a, b, c)))\n"
        )
        circles = derive_circles(parse(src))
        assert circles[0].source == "incircle"
        assert circles[0].geom.radius == pytest.approx(0.1, abs=1e-12)

    def test_unresolvable_circle_dropped_with_warning(self):
        warnings: list[str] = []
        src = "Point(o, 0.5, 0.5)\nShape(Circle(o))\n"
        circles = derive_circles(parse(src), collect_warnings=warnings)
        assert circles == []
        assert any("no resolvable radius" in w for w in warnings)


class TestViewport:
    def test_margin_arithmetic(self):
        lf = parse("Point(a, 0.2, 0.5)\nPoint(b, 0.8, 0.5)")
        vp = viewport(lf, circles=[])
        assert vp.xmin == pytest.approx(-0.04, abs=1e-12)
        assert vp.xmax == pytest.approx(1.04, abs=1e-12)

    def test_single_point_gets_minimum_extent(self):
        lf = parse("Point(a, 0.5, 0.5)")
        vp = viewport(lf, circles=[])
        assert vp.width > 0
        assert vp.width == pytest.approx(vp.height)
        # 0.2 floor + 0.4 margin per side
        assert vp.width == pytest.approx(0.2 * 1.8, abs=1e-12)

    def test_circle_extent_included(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o))\nRelation(PointLiesOnCircle(p, Circle(o)))\n"
        )
        lf = parse(src)
        circles = derive_circles(lf)
        vp = viewport(lf, circles)
        # pre-margin bounds are [0.1, 0.9]; margin adds 0.4 * 0.8 per side
        assert vp.xmin == pytest.approx(0.1 - 0.32, abs=1e-12)
        assert vp.xmax == pytest.approx(0.9 + 0.32, abs=1e-12)

    def test_empty_form_raises(self):
        with pytest.raises(EmptyGeometryError):
            viewport(LogicForm(), circles=[])

    def test_monotone_growth(self):
        lf_small = parse("Point(a, 0.4, 0.4)\nPoint(b, 0.6, 0.6)")
        lf_big = parse("Point(a, 0.4, 0.4)\nPoint(b, 0.6, 0.6)\nPoint(c, 0.95, 0.1)")
        vp_small = viewport(lf_small, circles=[])
        vp_big = viewport(lf_big, circles=[])
        assert vp_big.xmax >= vp_small.xmax
        assert vp_big.xmin <= vp_small.xmin


class TestRender:
    def test_empty_points_black_image(self):
        img = render(LogicForm(), size=(64, 64))
        assert img.is_black()
        assert img.size == (64, 64)

    def test_garbage_text_black_image(self):
        img = render_text(":::not a logic form:::", size=(32, 32))
        assert img.is_black()

    def test_garbage_text_raise_mode(self):
        with pytest.raises(Exception):
            render_text(":::not a logic form:::", on_error="raise")

    def test_deterministic(self):
        lf = parse(TRIANGLE_SRC)
        a = render(lf)
        b = render(lf)
        assert np.array_equal(a.pixels, b.pixels)
        assert a.to_png_bytes() == b.to_png_bytes()

    def test_normal_render_is_not_black(self):
        img = render(parse(TRIANGLE_SRC), on_error="raise")
        assert not img.is_black()
        assert float(img.pixels.mean()) > 0.9  # mostly white background

    def test_segment_endpoints_match_transform(self):
        src = "Point(a, 0.2, 0.5)\nPoint(b, 0.8, 0.5)\nLine(ab)"
        lf = parse(src)
        # no point markers or labels: isolate the line stroke
        style = RenderStyle(point_radius=0.0, label_size_pt=0.0)
        img = render(lf, style=style, on_error="raise")
        circles = derive_circles(lf)
        from symdiag.renderer import _frame_for

        frame = _frame_for(lf, circles, DEFAULT_SIZE)
        dark = np.argwhere(img.pixels.mean(axis=2) < 0.6)
        assert dark.size > 0
        cols = dark[:, 1]
        rows = dark[:, 0]
        ax, ay = frame.logic_to_pixel((0.2, 0.5))
        bx, by = frame.logic_to_pixel((0.8, 0.5))
        assert abs(cols.min() + 0.5 - min(ax, bx)) < 1.5
        assert abs(cols.max() + 0.5 - max(ax, bx)) < 1.5
        assert abs(rows.mean() + 0.5 - ay) < 1.5
        assert abs(ay - by) < 1e-9

    def test_point_marker_centroid_near_transform(self):
        src = "Point(a, 0.3, 0.7)\nPoint(b, 0.7, 0.3)"
        lf = parse(src)
        style = RenderStyle(label_size_pt=0.0)
        img = render(lf, style=style, on_error="raise")
        from symdiag.renderer import _frame_for

        frame = _frame_for(lf, derive_circles(lf), DEFAULT_SIZE)
        gray = img.pixels.mean(axis=2)
        for name, pos in lf.point_map().items():
            ex, ey = frame.logic_to_pixel(pos)
            patch = np.argwhere(gray < 0.5)
            near = patch[
                (np.abs(patch[:, 1] + 0.5 - ex) < 6) & (np.abs(patch[:, 0] + 0.5 - ey) < 6)
            ]
            assert near.size > 0
            cx = near[:, 1].mean() + 0.5
            cy = near[:, 0].mean() + 0.5
            assert abs(cx - ex) < 1.5
            assert abs(cy - ey) < 1.5

    def test_y_axis_flip(self):
        # a point with small logic y must land near the top of the image
        lf = parse("Point(a, 0.5, 0.05)\nPoint(b, 0.5, 0.95)")
        style = RenderStyle(label_size_pt=0.0)
        img = render(lf, style=style, on_error="raise")
        gray = img.pixels.mean(axis=2)
        dark_rows = np.argwhere(gray < 0.5)[:, 0]
        top_cluster = dark_rows.min()
        bottom_cluster = dark_rows.max()
        h = img.height
        assert top_cluster < h / 2 < bottom_cluster

    def test_circle_rendered_blue(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o))\nRelation(PointLiesOnCircle(p, Circle(o)))\n"
        )
        img = render(parse(src), on_error="raise")
        px = img.pixels
        blue_mask = (px[:, :, 2] - px[:, :, 0] > 0.3) & (px[:, :, 2] - px[:, :, 1] > 0.3)
        assert blue_mask.sum() > 100

    def test_custom_size(self):
        img = render(parse(TRIANGLE_SRC), size=(128, 128), on_error="raise")
        assert img.size == (128, 128)

    def test_labels_have_dark_pixels_near_points(self):
        lf = parse("Point(a, 0.3, 0.3)\nPoint(b, 0.7, 0.7)")
        img = render(lf, on_error="raise")
        assert (img.pixels.mean(axis=2) < 0.5).sum() > 2 * 28  # markers plus glyphs


class TestPngRoundTrip:
    def test_png_round_trip(self):
        img = render(parse(TRIANGLE_SRC))
        back = RasterImage.from_png_bytes(img.to_png_bytes())
        assert back.size == img.size
        assert np.abs(back.pixels - img.pixels).max() <= 1.0 / 255.0 + 1e-12

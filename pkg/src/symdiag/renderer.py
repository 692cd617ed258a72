"""Deterministic rendering decoder: logic form -> raster diagram.

The pipeline resolves circle geometry from shape declarations and relations,
computes a margin-padded equal-aspect viewport, and rasterizes lines, circle
strokes, point markers, and labels.  Rendering is a pure function of its
inputs; any content failure (no points, unresolvable geometry, a raised
parse error in :func:`render_text`) produces an all-black image instead of
an exception, signalling reconstruction failure to reward consumers.

Logic coordinates put the origin at the top-left (image convention); the
renderer applies the y-flip ``y' = 1 - y`` and works in a bottom-left world
frame internally, so rendered output matches the authored orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import logic_form as lform
from .errors import CircleFitRejectedError, DegenerateGeometryError, EmptyGeometryError
from .geometry import CircleGeom, Vec2, circumcircle_fit, distance, incircle_radius, point_circle_radius
from .glyphs import GLYPH_HEIGHT, text_bitmap
from .image import RasterImage
from .raster import draw_bitmap, draw_circle_stroke, draw_disk, draw_segment

__all__ = [
    "RenderStyle",
    "DerivedCircle",
    "Viewport",
    "RenderFrame",
    "derive_circles",
    "viewport",
    "render",
    "render_text",
    "DEFAULT_SIZE",
]

DEFAULT_SIZE = (512, 512)

# Fraction of fitted radius within which a fitted center binds to a declared
# circle center (mirrors the fit-rejection threshold).
_CENTER_BIND_FRACTION = 0.10
_MIN_EXTENT = 0.2
_MARGIN = 0.4


@dataclass(frozen=True)
class RenderStyle:
    """Fixed plotting style; values are pixel units at the 512 reference size."""

    background: tuple[float, float, float] = (1.0, 1.0, 1.0)
    point_color: tuple[float, float, float] = (0.0, 0.0, 0.0)
    point_radius: float = 3.0
    line_color: tuple[float, float, float] = (0.0, 0.0, 0.0)
    line_width: float = 1.2
    line_opacity: float = 0.8
    circle_color: tuple[float, float, float] = (0.0, 0.0, 1.0)
    circle_width: float = 1.2
    circle_opacity: float = 0.8
    label_color: tuple[float, float, float] = (0.0, 0.0, 0.0)
    label_size_pt: float = 15.0
    label_offset: float = 8.0
    dpi: float = 100.0
    reference_size: int = 512


@dataclass(frozen=True)
class DerivedCircle:
    """A renderable circle: its geometry plus the declared center name, if any."""

    center_name: str | None
    geom: CircleGeom
    source: str  # "explicit" | "point_on_circle" | "concyclic" | "incircle"


@dataclass(frozen=True)
class Viewport:
    """World-space view bounds (y already flipped), equal-aspect padded."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin


def _flip(p) -> Vec2:
    return Vec2(p[0], 1.0 - p[1])


def derive_circles(
    lf: lform.LogicForm, collect_warnings: list[str] | None = None
) -> list[DerivedCircle]:
    """Resolve every circle's geometry from the logic form.

    Radius priority per declared center: explicit radius term, then mean
    point-on-circle distance, then a concyclic least-squares fit whose center
    lands near the declared one, then the incircle radius of a related
    triangle.  Concyclic relations bound to no declared center produce
    anonymous circles.  Unresolvable circles are dropped with a warning.
    """
    warnings = [] if collect_warnings is None else collect_warnings
    positions = lf.point_map()

    centers: list[str] = []
    explicit: dict[str, float] = {}

    def see_center(name: str, radius: float | None) -> None:
        if name not in positions:
            return
        if name not in centers:
            centers.append(name)
        if radius is not None and name not in explicit:
            explicit[name] = radius

    for shape in lf.shapes:
        if shape.kind == "Circle":
            see_center(shape.vertices[0], shape.radius)
    for rel in lf.relations:
        for term in rel.args:
            if isinstance(term, lform.CircleTerm):
                see_center(term.center, term.radius)

    on_circle: dict[str, list[str]] = {}
    incircle_tris: dict[str, list[tuple[str, ...]]] = {}
    concyclic_groups: list[tuple[str, ...]] = []
    for rel in lf.relations:
        if rel.kind == "PointLiesOnCircle":
            pt, circle = rel.args
            on_circle.setdefault(circle.center, []).append(pt.name)
        elif rel.kind == "Incircle":
            circle, tri = rel.args
            if isinstance(tri, lform.ShapeTerm) and len(tri.vertices) == 3:
                incircle_tris.setdefault(circle.center, []).append(tri.vertices)
        elif rel.kind == "ConcyclicPoints":
            concyclic_groups.append(tuple(t.name for t in rel.args))

    fits: list[CircleGeom | None] = []
    for group in concyclic_groups:
        pts = [positions[n] for n in group if n in positions]
        try:
            fits.append(circumcircle_fit(pts) if len(pts) >= 3 else None)
        except (DegenerateGeometryError, CircleFitRejectedError) as exc:
            warnings.append(f"concyclic fit over ({', '.join(group)}) skipped: {exc}")
            fits.append(None)

    resolved: list[DerivedCircle] = []
    for name in centers:
        center = Vec2(*positions[name])
        if name in explicit:
            resolved.append(DerivedCircle(name, CircleGeom(center, explicit[name]), "explicit"))
            continue
        dists = []
        for pname in on_circle.get(name, ()):
            if pname in positions:
                try:
                    dists.append(point_circle_radius(positions[pname], center))
                except DegenerateGeometryError:
                    continue
        if dists:
            radius = math.fsum(dists) / len(dists)
            resolved.append(DerivedCircle(name, CircleGeom(center, radius), "point_on_circle"))
            continue
        bound = None
        for fit in fits:
            if fit is not None and distance(fit.center, center) <= _CENTER_BIND_FRACTION * fit.radius:
                bound = fit
                break
        if bound is not None:
            resolved.append(DerivedCircle(name, CircleGeom(center, bound.radius), "concyclic"))
            continue
        heron = None
        for verts in incircle_tris.get(name, ()):
            try:
                heron = incircle_radius(*(positions[v] for v in verts))
                break
            except (DegenerateGeometryError, KeyError):
                continue
        if heron is not None:
            resolved.append(DerivedCircle(name, CircleGeom(center, heron), "incircle"))
            continue
        warnings.append(f"circle {name!r} dropped: no resolvable radius")

    declared_positions = [positions[n] for n in centers]
    for fit in fits:
        if fit is None:
            continue
        near_declared = any(
            distance(fit.center, c) <= _CENTER_BIND_FRACTION * fit.radius for c in declared_positions
        )
        if near_declared:
            continue
        duplicate = any(
            distance(fit.center, dc.geom.center) < 1e-6 and abs(fit.radius - dc.geom.radius) < 1e-6
            for dc in resolved
            if dc.center_name is None
        )
        if not duplicate:
            resolved.append(DerivedCircle(None, fit, "concyclic"))
    return resolved


def viewport(lf: lform.LogicForm, circles: list[DerivedCircle] | None = None) -> Viewport:
    """Equal-aspect world bounds covering all points and circle extents.

    Each circle contributes center +/- radius.  Axes get a minimum-extent
    floor, then a 40% margin per side, then symmetric expansion of the
    shorter axis.
    """
    if not lf.points:
        raise EmptyGeometryError("viewport needs at least one point")
    if circles is None:
        circles = derive_circles(lf)
    xs: list[float] = []
    ys: list[float] = []
    for p in lf.points:
        w = _flip(p.position)
        xs.append(w.x)
        ys.append(w.y)
    for dc in circles:
        cw = _flip(dc.geom.center)
        xs.extend((cw.x - dc.geom.radius, cw.x + dc.geom.radius))
        ys.extend((cw.y - dc.geom.radius, cw.y + dc.geom.radius))
    return _pad_bounds(min(xs), max(xs), min(ys), max(ys))


def _pad_bounds(xmin: float, xmax: float, ymin: float, ymax: float, aspect: float = 1.0) -> Viewport:
    def floor_extent(lo: float, hi: float) -> tuple[float, float]:
        if hi - lo < _MIN_EXTENT:
            mid = (lo + hi) / 2.0
            return mid - _MIN_EXTENT / 2.0, mid + _MIN_EXTENT / 2.0
        return lo, hi

    xmin, xmax = floor_extent(xmin, xmax)
    ymin, ymax = floor_extent(ymin, ymax)
    dx = xmax - xmin
    dy = ymax - ymin
    xmin, xmax = xmin - _MARGIN * dx, xmax + _MARGIN * dx
    ymin, ymax = ymin - _MARGIN * dy, ymax + _MARGIN * dy
    dx = xmax - xmin
    dy = ymax - ymin
    if dx / dy < aspect:
        grow = (aspect * dy - dx) / 2.0
        xmin, xmax = xmin - grow, xmax + grow
    elif dx / dy > aspect:
        grow = (dx / aspect - dy) / 2.0
        ymin, ymax = ymin - grow, ymax + grow
    return Viewport(xmin, xmax, ymin, ymax)


@dataclass(frozen=True)
class RenderFrame:
    """Coordinate transform from logic/world space to pixel space."""

    view: Viewport
    size: tuple[int, int]

    def world_to_pixel(self, p) -> tuple[float, float]:
        w, h = self.size
        px = (p[0] - self.view.xmin) / self.view.width * w
        py = (self.view.ymax - p[1]) / self.view.height * h
        return (px, py)

    def logic_to_pixel(self, p) -> tuple[float, float]:
        return self.world_to_pixel(_flip(p))

    @property
    def pixels_per_unit(self) -> float:
        return self.size[0] / self.view.width


def _frame_for(lf: lform.LogicForm, circles: list[DerivedCircle], size: tuple[int, int]) -> RenderFrame:
    if not lf.points:
        raise EmptyGeometryError("render needs at least one point")
    xs: list[float] = []
    ys: list[float] = []
    for p in lf.points:
        w = _flip(p.position)
        xs.append(w.x)
        ys.append(w.y)
    for dc in circles:
        cw = _flip(dc.geom.center)
        xs.extend((cw.x - dc.geom.radius, cw.x + dc.geom.radius))
        ys.extend((cw.y - dc.geom.radius, cw.y + dc.geom.radius))
    view = _pad_bounds(min(xs), max(xs), min(ys), max(ys), aspect=size[0] / size[1])
    return RenderFrame(view, size)


_COMPASS = (
    (1.0, 0.0),
    (math.sqrt(0.5), -math.sqrt(0.5)),
    (0.0, -1.0),
    (-math.sqrt(0.5), -math.sqrt(0.5)),
    (-1.0, 0.0),
    (-math.sqrt(0.5), math.sqrt(0.5)),
    (0.0, 1.0),
    (math.sqrt(0.5), math.sqrt(0.5)),
)


def _place_labels(canvas, lf, frame, circles, style, scale) -> None:
    positions = lf.point_map()
    neighbors: dict[str, list[tuple[float, float]]] = {name: [] for name in positions}
    for line in lf.lines:
        if line.a in positions and line.b in positions:
            neighbors[line.a].append(frame.logic_to_pixel(positions[line.b]))
            neighbors[line.b].append(frame.logic_to_pixel(positions[line.a]))
    for dc in circles:
        center_px = frame.logic_to_pixel(dc.geom.center)
        for name, pos in positions.items():
            if dc.center_name == name:
                continue
            if abs(distance(pos, dc.geom.center) - dc.geom.radius) < 1e-6:
                neighbors[name].append(center_px)

    glyph_scale = max(1, round(style.label_size_pt * style.dpi / 72.0 * scale / GLYPH_HEIGHT))
    offset = style.label_offset * scale
    marker = style.point_radius * scale
    placed: list[tuple[float, float, float, float]] = []
    h, w = canvas.shape[:2]

    for point in lf.points:
        px, py = frame.logic_to_pixel(point.position)
        bitmap = text_bitmap(point.name, glyph_scale)
        bh, bw = bitmap.shape
        near = neighbors.get(point.name, [])
        if near:
            cx = sum(p[0] for p in near) / len(near)
            cy = sum(p[1] for p in near) / len(near)
            dx, dy = px - cx, py - cy
            norm = math.hypot(dx, dy)
            desired = (dx / norm, dy / norm) if norm > 1e-9 else _COMPASS[1]
        else:
            desired = _COMPASS[1]
        order = sorted(
            _COMPASS, key=lambda d: -(d[0] * desired[0] + d[1] * desired[1])
        )
        chosen = None
        for d in order:
            cx = px + d[0] * (offset + marker + bw / 2.0)
            cy = py + d[1] * (offset + marker + bh / 2.0)
            box = (cx - bw / 2.0, cy - bh / 2.0, cx + bw / 2.0, cy + bh / 2.0)
            if box[0] < 0 or box[1] < 0 or box[2] > w or box[3] > h:
                continue
            if any(
                box[0] < o[2] and box[2] > o[0] and box[1] < o[3] and box[3] > o[1]
                for o in placed
            ):
                continue
            chosen = box
            break
        if chosen is None:
            d = order[0]
            cx = px + d[0] * (offset + marker + bw / 2.0)
            cy = py + d[1] * (offset + marker + bh / 2.0)
            chosen = (cx - bw / 2.0, cy - bh / 2.0, cx + bw / 2.0, cy + bh / 2.0)
        placed.append(chosen)
        draw_bitmap(canvas, bitmap, (chosen[0], chosen[1]), style.label_color)


def render(
    lf: lform.LogicForm,
    style: RenderStyle | None = None,
    size: tuple[int, int] = DEFAULT_SIZE,
    on_error: str = "black",
) -> RasterImage:
    """Rasterize a logic form deterministically.

    ``on_error="black"`` (the default) maps any content failure to an
    all-black image; ``on_error="raise"`` propagates the exception instead.
    """
    style = style or RenderStyle()
    try:
        return _render_strict(lf, style, size)
    except Exception:
        if on_error == "black":
            return RasterImage.black(size)
        raise


def render_text(
    text: str,
    style: RenderStyle | None = None,
    size: tuple[int, int] = DEFAULT_SIZE,
    on_error: str = "black",
) -> RasterImage:
    """Parse then render; parse failures follow the same black-image contract."""
    style = style or RenderStyle()
    try:
        lf = lform.parse(text)
        return _render_strict(lf, style, size)
    except Exception:
        if on_error == "black":
            return RasterImage.black(size)
        raise


def _render_strict(lf: lform.LogicForm, style: RenderStyle, size: tuple[int, int]) -> RasterImage:
    circles = derive_circles(lf)
    frame = _frame_for(lf, circles, size)
    scale = min(size) / style.reference_size
    positions = lf.point_map()

    w, h = size
    canvas = np.empty((h, w, 3), dtype=np.float64)
    canvas[:] = np.asarray(style.background, dtype=np.float64)

    for line in lf.lines:
        p0 = frame.logic_to_pixel(positions[line.a])
        p1 = frame.logic_to_pixel(positions[line.b])
        draw_segment(canvas, p0, p1, style.line_width * scale, style.line_color, style.line_opacity)
    for dc in circles:
        center = frame.logic_to_pixel(dc.geom.center)
        radius = dc.geom.radius * frame.pixels_per_unit
        draw_circle_stroke(
            canvas, center, radius, style.circle_width * scale, style.circle_color, style.circle_opacity
        )
    if style.point_radius > 0:
        for point in lf.points:
            draw_disk(
                canvas,
                frame.logic_to_pixel(point.position),
                style.point_radius * scale,
                style.point_color,
            )
    if style.label_size_pt > 0:
        _place_labels(canvas, lf, frame, circles, style, scale)
    return RasterImage(canvas)

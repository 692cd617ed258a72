"""Computational-geometry kernels shared by the generator and the renderer.

All functions are pure and operate on plain 2-vectors.  Degeneracy thresholds
live in module constants: they are set well below pixel scale in the unit
square but above double-precision noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import CircleFitRejectedError, DegenerateGeometryError

__all__ = [
    "Vec2",
    "LineGeom",
    "CircleGeom",
    "IntersectionResult",
    "COLLINEAR_TOL",
    "FIT_REJECT_FRACTION",
    "distance",
    "midpoint",
    "perpendicular_foot",
    "circumcenter",
    "incenter",
    "angle_bisector_point",
    "derived_point",
    "twice_signed_area",
    "circumcircle_fit",
    "incircle_radius",
    "point_circle_radius",
    "intersections",
]

COLLINEAR_TOL = 1e-9       # |signed twice-area| below this is collinear
COINCIDENT_TOL = 1e-9
CONDITION_LIMIT = 1e12     # normal-equation rank check
FIT_REJECT_FRACTION = 0.10


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> float:
        return self.x * other[1] - self.y * other[0]

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def _vec(p) -> Vec2:
    v = Vec2(float(p[0]), float(p[1]))
    if not (math.isfinite(v.x) and math.isfinite(v.y)):
        raise DegenerateGeometryError(f"non-finite coordinate {p!r}")
    return v


@dataclass(frozen=True)
class LineGeom:
    """Infinite line through two distinct anchor points."""

    p: Vec2
    q: Vec2

    def __post_init__(self):
        object.__setattr__(self, "p", _vec(self.p))
        object.__setattr__(self, "q", _vec(self.q))
        if distance(self.p, self.q) < COINCIDENT_TOL:
            raise DegenerateGeometryError("line anchors coincide")

    @property
    def direction(self) -> Vec2:
        return self.q - self.p


@dataclass(frozen=True)
class CircleGeom:
    center: Vec2
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center))
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise DegenerateGeometryError(f"invalid circle radius {self.radius!r}")


class IntersectionResult(NamedTuple):
    points: tuple[Vec2, ...]
    coincident: bool = False


def distance(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def twice_signed_area(a, b, c) -> float:
    """Twice the signed area of triangle abc (positive when counterclockwise)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def midpoint(a, b) -> Vec2:
    return Vec2((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)


def perpendicular_foot(p, a, b) -> Vec2:
    """Foot of the perpendicular from p onto the line through a and b."""
    a, b, p = _vec(a), _vec(b), _vec(p)
    d = b - a
    denom = d.dot(d)
    if denom < COINCIDENT_TOL**2:
        raise DegenerateGeometryError("line anchors coincide")
    t = (p - a).dot(d) / denom
    return a + d.scaled(t)


def circumcenter(a, b, c) -> Vec2:
    a, b, c = _vec(a), _vec(b), _vec(c)
    d = 2.0 * twice_signed_area(a, b, c)
    if abs(d) < 2.0 * COLLINEAR_TOL:
        raise DegenerateGeometryError("circumcenter of collinear points")
    a2, b2, c2 = a.dot(a), b.dot(b), c.dot(c)
    ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d
    uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d
    return Vec2(ux, uy)


def incenter(a, b, c) -> Vec2:
    """Incenter: side-length weighted vertex average (weight = opposite side)."""
    a, b, c = _vec(a), _vec(b), _vec(c)
    if abs(twice_signed_area(a, b, c)) < COLLINEAR_TOL:
        raise DegenerateGeometryError("incenter of collinear points")
    la, lb, lc = distance(b, c), distance(c, a), distance(a, b)
    s = la + lb + lc
    return Vec2((la * a.x + lb * b.x + lc * c.x) / s, (la * a.y + lb * b.y + lc * c.y) / s)


def angle_bisector_point(a, b, c) -> Vec2:
    """Where the bisector of angle abc (vertex b) meets side ac.

    By the angle-bisector theorem the point divides ac in ratio |ba| : |bc|.
    """
    a, b, c = _vec(a), _vec(b), _vec(c)
    if abs(twice_signed_area(a, b, c)) < COLLINEAR_TOL:
        raise DegenerateGeometryError("angle bisector of collinear points")
    ab = distance(b, a)
    cb = distance(b, c)
    s = ab + cb
    return Vec2((cb * a.x + ab * c.x) / s, (cb * a.y + ab * c.y) / s)


_DERIVED = {
    "midpoint": midpoint,
    "perpendicular_foot": perpendicular_foot,
    "circumcenter": circumcenter,
    "incenter": incenter,
    "angle_bisector_point": angle_bisector_point,
}


def derived_point(kind: str, *args) -> Vec2:
    """Dispatch to a named Euclidean construction (see ``_DERIVED`` keys)."""
    try:
        fn = _DERIVED[kind]
    except KeyError:
        raise ValueError(f"unknown derived-point kind {kind!r}") from None
    return fn(*args)


def circumcircle_fit(points: Sequence) -> CircleGeom:
    """Least-squares circle through >= 3 points.

    Linearizes (x-a)^2 + (y-b)^2 = r^2 to x^2 + y^2 = 2ax + 2by + c and solves
    the normal equations of the overdetermined system.  Raises
    :class:`DegenerateGeometryError` for rank-deficient (collinear) input and
    :class:`CircleFitRejectedError` when the worst radial residual exceeds
    10% of the fitted radius.
    """
    pts = [_vec(p) for p in points]
    if len(pts) < 3:
        raise DegenerateGeometryError("circle fit needs at least 3 points")
    arr = np.array(pts, dtype=float)
    design = np.column_stack([2.0 * arr[:, 0], 2.0 * arr[:, 1], np.ones(len(pts))])
    rhs = arr[:, 0] ** 2 + arr[:, 1] ** 2
    normal = design.T @ design
    if np.linalg.cond(normal) > CONDITION_LIMIT:
        raise DegenerateGeometryError("circle fit is rank-deficient (collinear points)")
    a, b, c = np.linalg.solve(normal, design.T @ rhs)
    r_sq = c + a * a + b * b
    if r_sq <= 0 or not math.isfinite(r_sq):
        raise DegenerateGeometryError("circle fit produced a non-positive radius")
    radius = math.sqrt(r_sq)
    center = Vec2(float(a), float(b))
    max_err = max(abs(distance(p, center) - radius) for p in pts)
    if max_err > FIT_REJECT_FRACTION * radius:
        raise CircleFitRejectedError(max_err, radius, FIT_REJECT_FRACTION)
    return CircleGeom(center, radius)


def incircle_radius(v1, v2, v3) -> float:
    """Incircle radius via Heron's formula: r = area / semiperimeter."""
    v1, v2, v3 = _vec(v1), _vec(v2), _vec(v3)
    if abs(twice_signed_area(v1, v2, v3)) < COLLINEAR_TOL:
        raise DegenerateGeometryError("incircle of collinear vertices")
    a = distance(v2, v3)
    b = distance(v3, v1)
    c = distance(v1, v2)
    s = (a + b + c) / 2.0
    area_sq = s * (s - a) * (s - b) * (s - c)
    if area_sq <= 0:
        raise DegenerateGeometryError("incircle of degenerate triangle")
    return math.sqrt(area_sq) / s


def point_circle_radius(p, c) -> float:
    """Radius implied by a point on a circle: the distance to the center."""
    d = distance(_vec(p), _vec(c))
    if d < COINCIDENT_TOL:
        raise DegenerateGeometryError("point coincides with circle center")
    return d


Primitive = Union[LineGeom, CircleGeom]


def intersections(a: Primitive, b: Primitive) -> IntersectionResult:
    """All real intersection points of two primitives (0, 1, or 2).

    Coincident primitives are flagged rather than enumerated.  Lines are
    treated as infinite; callers apply segment bounds where needed.
    """
    if isinstance(a, LineGeom) and isinstance(b, LineGeom):
        return _line_line(a, b)
    if isinstance(a, LineGeom) and isinstance(b, CircleGeom):
        return _line_circle(a, b)
    if isinstance(a, CircleGeom) and isinstance(b, LineGeom):
        return _line_circle(b, a)
    if isinstance(a, CircleGeom) and isinstance(b, CircleGeom):
        return _circle_circle(a, b)
    raise TypeError(f"unsupported primitive pair {type(a).__name__}/{type(b).__name__}")


def _line_line(l1: LineGeom, l2: LineGeom) -> IntersectionResult:
    d1 = l1.direction
    d2 = l2.direction
    denom = d1.cross(d2)
    scale = d1.norm() * d2.norm()
    if abs(denom) < COLLINEAR_TOL * scale:
        on_line = abs((l2.p - l1.p).cross(d1)) < COLLINEAR_TOL * max(d1.norm(), 1.0)
        return IntersectionResult((), coincident=on_line)
    t = (l2.p - l1.p).cross(d2) / denom
    return IntersectionResult((l1.p + d1.scaled(t),))


def _line_circle(line: LineGeom, circle: CircleGeom) -> IntersectionResult:
    foot = perpendicular_foot(circle.center, line.p, line.q)
    d = distance(circle.center, foot)
    h_sq = circle.radius**2 - d**2
    if h_sq < -COLLINEAR_TOL:
        return IntersectionResult(())
    h = math.sqrt(max(h_sq, 0.0))
    u = line.direction
    u = u.scaled(1.0 / u.norm())
    if h < COINCIDENT_TOL:
        return IntersectionResult((foot,))
    return IntersectionResult((foot - u.scaled(h), foot + u.scaled(h)))


def _circle_circle(c1: CircleGeom, c2: CircleGeom) -> IntersectionResult:
    d = distance(c1.center, c2.center)
    if d < COINCIDENT_TOL:
        same = abs(c1.radius - c2.radius) < COINCIDENT_TOL
        return IntersectionResult((), coincident=same)
    if d > c1.radius + c2.radius + COLLINEAR_TOL:
        return IntersectionResult(())
    if d < abs(c1.radius - c2.radius) - COLLINEAR_TOL:
        return IntersectionResult(())
    a = (d * d + c1.radius**2 - c2.radius**2) / (2.0 * d)
    h_sq = c1.radius**2 - a * a
    h = math.sqrt(max(h_sq, 0.0))
    u = (c2.center - c1.center).scaled(1.0 / d)
    base = c1.center + u.scaled(a)
    if h < COINCIDENT_TOL:
        return IntersectionResult((base,))
    n = Vec2(-u.y, u.x)
    return IntersectionResult((base + n.scaled(h), base - n.scaled(h)))

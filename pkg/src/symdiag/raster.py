"""Low-level anti-aliased drawing onto float RGB canvases.

Coverage-based single-sample AA: each primitive computes a signed distance to
its stroke boundary per pixel center and converts it to coverage with a
one-pixel linear ramp.  Every primitive is composited independently (painter's
order), so overlapping translucent strokes darken, matching typical plotting
behavior.  All operations touch only the primitive's bounding box.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["draw_segment", "draw_circle_stroke", "draw_disk", "draw_bitmap"]


def _patch(canvas: np.ndarray, xmin: float, xmax: float, ymin: float, ymax: float):
    """Clipped integer bounds plus pixel-center coordinate grids for a bbox."""
    h, w = canvas.shape[:2]
    c0 = max(int(math.floor(xmin)), 0)
    c1 = min(int(math.ceil(xmax)) + 1, w)
    r0 = max(int(math.floor(ymin)), 0)
    r1 = min(int(math.ceil(ymax)) + 1, h)
    if c0 >= c1 or r0 >= r1:
        return None
    xs = np.arange(c0, c1, dtype=np.float64) + 0.5
    ys = np.arange(r0, r1, dtype=np.float64) + 0.5
    return r0, r1, c0, c1, xs[None, :], ys[:, None]


def _composite(canvas: np.ndarray, r0: int, r1: int, c0: int, c1: int, alpha: np.ndarray, color):
    if not alpha.any():
        return
    region = canvas[r0:r1, c0:c1]
    a = alpha[..., None]
    region *= 1.0 - a
    region += np.asarray(color, dtype=np.float64) * a


def draw_segment(canvas, p0, p1, width: float, color, opacity: float = 1.0) -> None:
    """Stroke a straight segment of the given width between two pixel points."""
    x0, y0 = float(p0[0]), float(p0[1])
    x1, y1 = float(p1[0]), float(p1[1])
    half = width / 2.0
    pad = half + 1.0
    grid = _patch(canvas, min(x0, x1) - pad, max(x0, x1) + pad, min(y0, y1) - pad, max(y0, y1) + pad)
    if grid is None:
        return
    r0, r1, c0, c1, xs, ys = grid
    dx, dy = x1 - x0, y1 - y0
    denom = dx * dx + dy * dy
    if denom < 1e-18:
        t = np.zeros((ys.size, xs.size))
    else:
        t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / denom, 0.0, 1.0)
    qx = x0 + t * dx
    qy = y0 + t * dy
    dist = np.hypot(xs - qx, ys - qy)
    cov = np.clip(half + 0.5 - dist, 0.0, 1.0)
    _composite(canvas, r0, r1, c0, c1, opacity * cov, color)


def draw_circle_stroke(canvas, center, radius: float, width: float, color, opacity: float = 1.0) -> None:
    cx, cy = float(center[0]), float(center[1])
    half = width / 2.0
    pad = radius + half + 1.0
    grid = _patch(canvas, cx - pad, cx + pad, cy - pad, cy + pad)
    if grid is None:
        return
    r0, r1, c0, c1, xs, ys = grid
    dist = np.abs(np.hypot(xs - cx, ys - cy) - radius)
    cov = np.clip(half + 0.5 - dist, 0.0, 1.0)
    _composite(canvas, r0, r1, c0, c1, opacity * cov, color)


def draw_disk(canvas, center, radius: float, color, opacity: float = 1.0) -> None:
    cx, cy = float(center[0]), float(center[1])
    pad = radius + 1.0
    grid = _patch(canvas, cx - pad, cx + pad, cy - pad, cy + pad)
    if grid is None:
        return
    r0, r1, c0, c1, xs, ys = grid
    dist = np.hypot(xs - cx, ys - cy)
    cov = np.clip(radius + 0.5 - dist, 0.0, 1.0)
    _composite(canvas, r0, r1, c0, c1, opacity * cov, color)


def draw_bitmap(canvas, bitmap: np.ndarray, top_left, color, opacity: float = 1.0) -> None:
    """Blit a boolean bitmap at an integer position, clipping at the borders."""
    h, w = canvas.shape[:2]
    bh, bw = bitmap.shape
    r0 = int(round(top_left[1]))
    c0 = int(round(top_left[0]))
    rr0, cc0 = max(r0, 0), max(c0, 0)
    rr1, cc1 = min(r0 + bh, h), min(c0 + bw, w)
    if rr0 >= rr1 or cc0 >= cc1:
        return
    clip = bitmap[rr0 - r0 : rr1 - r0, cc0 - c0 : cc1 - c0]
    alpha = clip.astype(np.float64) * opacity
    _composite(canvas, rr0, rr1, cc0, cc1, alpha, color)

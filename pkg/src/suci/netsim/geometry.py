"""Position estimation from distances to known anchors."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import DegenerateGeometry

# ratio of smallest to largest singular value below which anchors count as collinear
_COLLINEAR_RTOL = 1e-10


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def trilaterate(anchors: Sequence[Sequence[float]], distances: Sequence[float]) -> tuple[float, float]:
    """Least-squares circle intersection.

    Subtracting the first circle equation from the others leaves the linear
    system 2 (p_i - p_0) . x = d_0^2 - d_i^2 + |p_i|^2 - |p_0|^2, solved in
    the least-squares sense when more than three anchors are given.
    """
    pts = np.asarray(anchors, dtype=float)
    d = np.asarray(distances, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("anchors must be a sequence of (x, y) pairs")
    if len(pts) < 3:
        raise DegenerateGeometry(f"need at least 3 anchors, got {len(pts)}")
    if d.shape != (len(pts),):
        raise ValueError("one distance per anchor is required")
    if np.any(d < 0):
        raise ValueError("distances must be non-negative")

    # centre on the first anchor for conditioning
    origin = pts[0]
    rel = pts - origin
    A = 2.0 * rel[1:]
    b = d[0] ** 2 - d[1:] ** 2 + np.sum(rel[1:] ** 2, axis=1)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] < _COLLINEAR_RTOL:
        raise DegenerateGeometry("anchors are collinear")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(sol[0] + origin[0]), float(sol[1] + origin[1])

"""
Distance and segment/sphere intersection for the spherical receiver
"""

import numpy as np

from ..models import Vec3

# Negative discriminants down to this fraction of b^2 are treated as tangency
_DISCRIMINANT_REL_TOL = 1e-12


class GeometryError(Exception):
    """Custom exception for receiver geometry errors"""
    pass


class NoIntersectionError(GeometryError):
    """Custom exception for segments that never reach the sphere"""
    pass


class DegenerateSegmentError(GeometryError):
    """Custom exception for zero-length segments"""
    pass


def distance_to_center(p: Vec3, center: Vec3) -> float:
    """Euclidean distance between a point and the receiver center."""
    return float(np.linalg.norm(p.as_array() - center.as_array()))


def _first_root(b: np.ndarray, c: np.ndarray, disc: np.ndarray) -> np.ndarray:
    """Smaller root of g^2 + b g + c = 0 without cancellation.

    With q = -(b + sign(b) sqrt(disc)) / 2 the roots are q and c / q.
    """
    sqrt_disc = np.sqrt(disc)
    sign_b = np.where(b < 0.0, -1.0, 1.0)
    q = -0.5 * (b + sign_b * sqrt_disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        other = np.where(q != 0.0, c / q, 0.0)
    return np.minimum(q, other)


def intersect_segments(
    p_prev: np.ndarray, p_new: np.ndarray, center: np.ndarray, rr: float
) -> np.ndarray:
    """First crossing of each segment ``p_prev[i] -> p_new[i]`` with the sphere.

    Rows of ``p_prev`` must lie on or outside the sphere and rows of ``p_new``
    inside it. With the unit direction u and segment length Delta the crossing
    is ``p_prev + g u`` where g solves ``g^2 + b g + c = 0``,
    ``b = 2 u.(p_prev - center)``, ``c = |p_prev - center|^2 - rr^2``.
    Returned points are snapped radially onto the sphere.
    """
    p_prev = np.atleast_2d(np.asarray(p_prev, dtype=float))
    p_new = np.atleast_2d(np.asarray(p_new, dtype=float))
    center = np.asarray(center, dtype=float)

    seg = p_new - p_prev
    delta = np.linalg.norm(seg, axis=1)
    if np.any(delta == 0.0):
        raise DegenerateSegmentError("segment has zero length (p_prev == p_new)")

    u = seg / delta[:, None]
    rel = p_prev - center
    b = 2.0 * np.einsum("ij,ij->i", u, rel)
    c = np.einsum("ij,ij->i", rel, rel) - rr * rr
    disc = b * b - 4.0 * c

    bad = disc < -_DISCRIMINANT_REL_TOL * b * b
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NoIntersectionError(
            f"segment {p_prev[i].tolist()} -> {p_new[i].tolist()} does not meet sphere "
            f"of radius {rr} (discriminant {disc[i]:.3e})"
        )
    disc = np.maximum(disc, 0.0)

    g = np.clip(_first_root(b, c, disc), 0.0, delta)
    points = p_prev + g[:, None] * u

    radial = points - center
    norms = np.linalg.norm(radial, axis=1)
    return center + radial * (rr / norms)[:, None]


def line_sphere_intersection(p_prev: Vec3, p_new: Vec3, center: Vec3, rr: float) -> Vec3:
    """Point where the segment p_prev -> p_new first meets the sphere.

    A segment starting exactly on the surface returns ``p_prev`` (g = 0).
    """
    point = intersect_segments(
        p_prev.as_array()[None, :], p_new.as_array()[None, :], center.as_array(), rr
    )[0]
    return Vec3.from_array(point)

"""Exact arithmetic geometry primitives.

Everything in this package runs on Python ints and fractions.Fraction; there is
deliberately no float code path.  Fraction keeps values canonical (reduced,
positive denominator), which is exactly the contract the rest of the pipeline
relies on when it compares slopes or floors plane values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Union

Scalar = Union[int, Fraction]


class GeometryError(Exception):
    """Base class for exact-geometry failures."""


class VerticalEdge(GeometryError):
    """Slope requested for a segment with equal x coordinates."""


class DegenerateFace(GeometryError):
    """Plane requested through three points whose xy-projections are collinear."""


class Point2(NamedTuple):
    x: Scalar
    y: Scalar


class Point3(NamedTuple):
    x: int
    y: int
    z: int


class Plane(NamedTuple):
    """Non-vertical plane z = c1*x + c2*y + c3."""

    c1: Fraction
    c2: Fraction
    c3: Fraction


def sign(v: Scalar) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def orient2d(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of the signed area of triangle pqr: +1 ccw, -1 cw, 0 collinear."""
    return sign((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def cross2(p: Point2, q: Point2, r: Point2) -> Scalar:
    """Twice the signed area of pqr (exact)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def slope(p: Point2, q: Point2) -> Fraction:
    """Slope of segment pq.  Raises VerticalEdge when x(p) == x(q).

    Vertical edges are an error by design: the drawings this package produces
    never contain them, so asking for such a slope means an upstream bug.
    """
    dx = q[0] - p[0]
    if dx == 0:
        raise VerticalEdge(f"vertical segment through x={p[0]!r}")
    return Fraction(q[1] - p[1], 1) / Fraction(dx, 1)


def plane_through(p1: Point3, p2: Point3, p3: Point3) -> Plane:
    """The unique non-vertical plane through three lifted points.

    Solves c1*x + c2*y + c3 = z by Cramer's rule.  Raises DegenerateFace when
    the xy-projections are collinear (no such plane / not unique).
    """
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    x3, y3, z3 = p3
    det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
    if det == 0:
        raise DegenerateFace(f"collinear projections: {p1}, {p2}, {p3}")
    c1 = Fraction((z2 - z1) * (y3 - y1) - (y2 - y1) * (z3 - z1), det)
    c2 = Fraction((x2 - x1) * (z3 - z1) - (z2 - z1) * (x3 - x1), det)
    c3 = Fraction(z1, 1) - c1 * x1 - c2 * y1
    return Plane(c1, c2, c3)


def eval_plane(plane: Plane, x: Scalar, y: Scalar) -> Fraction:
    """Exact height of ``plane`` above (x, y)."""
    return plane.c1 * x + plane.c2 * y + plane.c3


def intersect_lines(p: Point2, s: Fraction, q: Point2, u: Fraction) -> Point2:
    """Intersection of the line through p with slope s and through q with slope u.

    Raises GeometryError when s == u (parallel); callers that can hit this
    legitimately should check first.
    """
    if s == u:
        raise GeometryError("parallel lines")
    # y = y_p + s (x - x_p) = y_q + u (x - x_q)
    x = (Fraction(q[1]) - Fraction(p[1]) + s * p[0] - u * q[0]) / (s - u)
    y = Fraction(p[1]) + s * (x - p[0])
    return Point2(x, y)


def line_side(a: Point2, b: Point2, p: Point2) -> int:
    """+1 if p is strictly left of the directed line a->b, -1 right, 0 on it.

    For a,b with x(a) < x(b), "left" is "strictly above".
    """
    return orient2d(a, b, p)


def floor_fraction(v: Scalar) -> int:
    """Largest integer <= v, exact."""
    if isinstance(v, int):
        return v
    return v.numerator // v.denominator


def ceil_fraction(v: Scalar) -> int:
    """Smallest integer >= v, exact."""
    if isinstance(v, int):
        return v
    return -((-v.numerator) // v.denominator)

"""Independent certificates for drawings and lifts.

Everything here re-derives its verdict from coordinates and heights alone;
nothing trusts bookkeeping carried along by the construction code.  Each check
returns a Certificate, and a failing certificate always names the first
offending vertex, edge, or face in scan order, so a red result is directly
debuggable.

The drawing check leans on a covering argument instead of an all-pairs
segment-intersection sweep: once every bounded face is drawn strictly ccw and
the outer cycle is simple and ccw, the face cycles sum to the outer cycle as
1-chains, so a generic point is covered by exactly as many triangles as its
winding number under the outer cycle -- once inside, zero outside.  The
triangles then tile the boundary polygon simply, which forces the straight-line
drawing to be a plane embedding whose bounded faces are exactly the triangles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .embedding import GridEmbedding
from .exactgeom import (
    DegenerateFace,
    Point2,
    eval_plane,
    orient2d,
    plane_through,
)
from .lifting import LiftedPolyhedron
from .triangulation import PlaneTriangulation, edge_key, validate

XY = Sequence  # any (x, y) pair of exact numbers: tuple, Point2, ...


@dataclass(frozen=True)
class Certificate:
    """Outcome of one independent check.

    kind names the property, witness is None on a pass and the first
    violating element (vertex, edge, face, or bound triple) on a fail.
    """

    kind: str
    passed: bool
    witness: object = None
    detail: str = ""

    def line(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        out = f"{head} {self.kind}"
        if self.detail:
            out += f": {self.detail}"
        if not self.passed:
            out += f" [witness: {self.witness!r}]"
        return out


def report(certs: Iterable[Certificate]) -> str:
    """Line-oriented report, one certificate per line."""
    return "".join(c.line() + "\n" for c in certs)


def _fail(kind: str, witness: object, detail: str) -> Certificate:
    return Certificate(kind, False, witness, detail)


# -- plane drawings --------------------------------------------------------------


def _p2(pt: XY) -> Point2:
    return Point2(pt[0], pt[1])


def _on_segment(a: Point2, b: Point2, c: Point2) -> bool:
    """Is c on the closed segment ab?  Assumes c collinear with a, b."""
    return (
        min(a.x, b.x) <= c.x <= max(a.x, b.x)
        and min(a.y, b.y) <= c.y <= max(a.y, b.y)
    )


def segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """Do the closed segments p1p2 and q1q2 share any point?  Exact."""
    o1 = orient2d(p1, p2, q1)
    o2 = orient2d(p1, p2, q2)
    o3 = orient2d(q1, q2, p1)
    o4 = orient2d(q1, q2, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False


def _doubled_area(pts: Sequence[Point2]):
    total = 0
    for a, b in zip(pts, pts[1:] + pts[:1]):
        total += a.x * b.y - b.x * a.y
    return total


def check_face_isomorphic(
    G: PlaneTriangulation, coords: Mapping[int, XY]
) -> Certificate:
    """Does drawing G's edges straight at coords reproduce G's faces?

    Passes iff the identity vertex map carries G's triangles onto the bounded
    faces of the straight-line drawing.  Per the covering argument in the
    module docstring, that is equivalent to: G is a valid triangulated disk,
    every triangle is drawn strictly ccw, and the outer cycle is drawn as a
    simple ccw polygon.  Those three conditions are what gets checked.
    """
    kind = "face-isomorphic"
    bad = validate(G)
    if bad:
        return _fail(kind, bad[0], f"input is not a triangulated disk ({len(bad)} violations)")
    missing = sorted(set(G.vertices) ^ set(coords))
    if missing:
        return _fail(kind, missing[0], "vertex sets of triangulation and drawing differ")
    pts = {v: _p2(coords[v]) for v in G.vertices}
    seen: dict[Point2, int] = {}
    for v in sorted(pts):
        if pts[v] in seen:
            return _fail(kind, (seen[pts[v]], v), "two vertices drawn at the same point")
        seen[pts[v]] = v
    for t in G.triangles:
        if orient2d(pts[t[0]], pts[t[1]], pts[t[2]]) != 1:
            return _fail(kind, t, "face not drawn strictly counterclockwise")
    cyc = [pts[v] for v in G.boundary]
    b = len(cyc)
    if _doubled_area(cyc) <= 0:
        return _fail(kind, G.boundary, "outer cycle not drawn counterclockwise")
    for i in range(b):
        p1, p2 = cyc[i], cyc[(i + 1) % b]
        for j in range(i + 1, b):
            q1, q2 = cyc[j], cyc[(j + 1) % b]
            adjacent = j == i + 1 or (i == 0 and j == b - 1)
            if adjacent:
                shared = p2 if j == i + 1 else p1
                other_p = p1 if j == i + 1 else p2
                other_q = q2 if j == i + 1 else q1
                if orient2d(shared, other_p, other_q) == 0 and (
                    (other_p.x - shared.x) * (other_q.x - shared.x)
                    + (other_p.y - shared.y) * (other_q.y - shared.y)
                ) > 0:
                    ei = (G.boundary[i], G.boundary[(i + 1) % b])
                    ej = (G.boundary[j], G.boundary[(j + 1) % b])
                    return _fail(kind, (ei, ej), "consecutive outer edges overlap")
            elif segments_intersect(p1, p2, q1, q2):
                ei = (G.boundary[i], G.boundary[(i + 1) % b])
                ej = (G.boundary[j], G.boundary[(j + 1) % b])
                return _fail(kind, (ei, ej), "outer cycle self-intersects")
    return Certificate(
        kind, True, None, f"{len(G.triangles)} faces ccw, outer {b}-cycle simple"
    )


def check_projectively_convex(
    cycle: Sequence[XY], base: tuple[XY, XY]
) -> Certificate:
    """Is the drawn boundary strictly convex as seen from below the base?

    cycle is the ccw outer cycle of a drawn prefix, as exact points; base is
    the pair of base-edge endpoints, expected on the x-axis with the rest of
    the cycle strictly above it.  Passes iff, walking the non-base boundary
    chain left to right, consecutive x-coordinates strictly increase and edge
    slopes strictly decrease -- the exact-arithmetic form of being contained
    in a triangle over the base.
    """
    kind = "projectively-convex"
    pts = [_p2(p) for p in cycle]
    b1, b2 = _p2(base[0]), _p2(base[1])
    if b1.y != 0 or b2.y != 0 or b1.x == b2.x:
        return _fail(kind, (tuple(b1), tuple(b2)), "base edge not a span of the x-axis")
    lb, rb = (b1, b2) if b1.x < b2.x else (b2, b1)
    for p in pts:
        if p not in (lb, rb) and p.y <= 0:
            return _fail(kind, tuple(p), "cycle point not strictly above the x-axis")
    seen: set[Point2] = set()
    for p in pts:
        if p in seen:
            return _fail(kind, tuple(p), "repeated point on the cycle")
        seen.add(p)
    if lb not in pts or rb not in pts:
        return _fail(kind, (tuple(lb), tuple(rb)), "base endpoints not on the cycle")
    j = pts.index(lb)
    rot = pts[j:] + pts[:j]
    if rot[1] != rb:
        return _fail(kind, (tuple(lb), tuple(rb)), "base edge not traversed lb->rb on the ccw cycle")
    chain = [lb] + rot[:1:-1] + [rb]
    prev_slope: Optional[Fraction] = None
    for u, v in zip(chain, chain[1:]):
        if v.x <= u.x:
            return _fail(kind, (tuple(u), tuple(v)), "chain not strictly x-monotone")
        s = Fraction(v.y - u.y, v.x - u.x)
        if prev_slope is not None and s >= prev_slope:
            return _fail(kind, (tuple(u), tuple(v)), "edge slopes not strictly decreasing")
        prev_slope = s
    return Certificate(kind, True, None, f"{len(chain) - 1} chain edges, slopes strictly decreasing")


# -- lifted surfaces -------------------------------------------------------------


def _facet_data(P: LiftedPolyhedron):
    """Per-facet plane and inner-side sign: +1 above for the lifted surface,
    -1 below for the closing top face of a truncated polytope."""
    out = []
    for t in P.facets:
        pl = plane_through(P.points[t[0]], P.points[t[1]], P.points[t[2]])
        side = -1 if (P.truncated is not None and t == P.truncated) else 1
        out.append((t, pl, side))
    return out


def check_lift_convex(P: LiftedPolyhedron) -> Certificate:
    """Strict convexity across every shared edge of the lifted facets.

    For two facets meeting along an edge, each one's opposite vertex must lie
    strictly on the inner side of the other's plane.  Edges on only one facet
    (the untruncated surface's rim) are skipped.
    """
    kind = "lift-convex-local"
    try:
        facets = _facet_data(P)
    except DegenerateFace as exc:
        return _fail(kind, str(exc), "degenerate facet")
    wings: dict[tuple[int, int], list[int]] = {}
    for idx, (t, _, _) in enumerate(facets):
        for e in (edge_key(t[0], t[1]), edge_key(t[1], t[2]), edge_key(t[0], t[2])):
            wings.setdefault(e, []).append(idx)
    for e in sorted(wings):
        inc = wings[e]
        if len(inc) == 1:
            continue
        if len(inc) > 2:
            return _fail(kind, e, f"edge on {len(inc)} facets")
        for i, j in ((inc[0], inc[1]), (inc[1], inc[0])):
            t, pl, side = facets[i]
            other = facets[j][0]
            (w,) = set(other) - set(e)
            p = P.points[w]
            if side * (p.z - eval_plane(pl, p.x, p.y)) <= 0:
                return _fail(kind, e, f"facets {t} and {other} not strictly convex across it")
    return Certificate(kind, True, None, f"{len(wings)} edges, all shared ones strictly convex")


def lift_convex_globally(P: LiftedPolyhedron) -> Certificate:
    """Every vertex against every facet plane: incident ones exactly on it,
    all others strictly on its inner side.  Quadratic but exact; the local
    certificate must agree with this one (they are equivalent for lifts of a
    disk, and the test suite checks that on every instance it builds)."""
    kind = "lift-convex-global"
    try:
        facets = _facet_data(P)
    except DegenerateFace as exc:
        return _fail(kind, str(exc), "degenerate facet")
    for t, pl, side in facets:
        for v in sorted(P.points):
            p = P.points[v]
            d = p.z - eval_plane(pl, p.x, p.y)
            if v in t:
                if d != 0:
                    return _fail(kind, (t, v), "facet vertex off its own plane")
            elif side * d <= 0:
                return _fail(kind, (t, v), "vertex not strictly inside facet plane")
    return Certificate(
        kind, True, None, f"{len(facets)} facets support all {len(P.points)} vertices"
    )


# -- grid bounds -----------------------------------------------------------------


def _depths(facets: Sequence[tuple[int, int, int]], order: Sequence[int]) -> dict[int, int]:
    """Vertex depths under order, re-derived from facet adjacency alone."""
    adj: dict[int, set[int]] = {v: set() for v in order}
    for t in facets:
        for u, v in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            adj[u].add(v)
            adj[v].add(u)
    pos = {v: i for i, v in enumerate(order)}
    depth: dict[int, int] = {}
    for i, v in enumerate(order):
        preds = [u for u in adj[v] if pos[u] < i]
        depth[v] = 1 + max((depth[u] for u in preds), default=0)
    return depth


def check_grid_bounds(
    obj: Union[GridEmbedding, LiftedPolyhedron, Mapping[int, XY]], n: int
) -> Certificate:
    """Bounding-box dimensions against the 4n^3 x 8n^5 grid, and, for a lift,
    the maximum height against (500 n^8)^tau with tau re-derived from the
    facets and the deletion order (tau <= n, so the (500 n^8)^n ceiling is
    implied).  Accepts a drawing, a lift, or a bare coordinate mapping."""
    kind = "grid-bounds"
    if isinstance(obj, GridEmbedding):
        pts = obj.coords.values()
        heights = None
    elif isinstance(obj, LiftedPolyhedron):
        pts = [(p.x, p.y) for p in obj.points.values()]
        heights = obj.heights
    elif isinstance(obj, Mapping):
        pts = list(obj.values())
        heights = None
    else:
        raise TypeError(f"expected a drawing or a lift, got {type(obj).__name__}")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    dx, dy = max(xs) - min(xs), max(ys) - min(ys)
    if dx > 4 * n**3:
        return _fail(kind, ("x", dx, 4 * n**3), "width exceeds 4n^3")
    if dy > 8 * n**5:
        return _fail(kind, ("y", dy, 8 * n**5), "height exceeds 8n^5")
    detail = f"x {dx} <= {4 * n**3}, y {dy} <= {8 * n**5}"
    if heights is not None:
        lower = [t for t in obj.facets if t != obj.truncated]
        depth = _depths(lower, obj.sequence.order)
        tau = max(depth.values())
        if tau > n:
            return _fail(kind, ("tau", tau, n), "depth exceeds vertex count")
        zbound = (500 * n**8) ** tau
        zmax = max(heights.values())
        if zmax > zbound:
            return _fail(kind, ("z", zmax, zbound), "height exceeds (500n^8)^tau")
        detail += f", z {zmax} <= (500n^8)^{tau}"
    return Certificate(kind, True, None, detail)

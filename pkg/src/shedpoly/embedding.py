"""Sequentially convex straight-line drawings.

Two constructions over a shedding sequence, both exact:

* :func:`rational_embed` -- grows the drawing one vertex at a time, placing
  each new vertex at a rational point strictly inside the wedge region cut out
  by four support lines.  Unbounded denominators, tiny code.
* :func:`grid_embed` -- integer coordinates on a 4n^3 x 8n^5 grid.  It tracks
  a scaled copy of the reduced template triangulation: high-degree steps round
  the support-line intersection outward, degree-2 steps copy (scale, translate,
  shear, round) the matching template triangle.  Three per-step audits are
  enforced with exact arithmetic: horizontal extent dominates the template
  edge, slope drifts from the template by at most i, and every prefix stays
  face-correct and projectively convex.

Left and right are read off the boundary-cycle orientation, never from vertex
labels, so the only normalization ever needed is mirroring the instance when
its contracted tree is left-heavy (and negating x afterward).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .exactgeom import (
    Point2,
    ceil_fraction,
    floor_fraction,
    intersect_lines,
    orient2d,
    slope,
)
from .reduction import (
    MalformedTreeSequence,
    ReducedTriangulation,
    build_reduced_triangulation,
    build_shedding_trees,
    reduce_trees,
)
from .triangulation import (
    DeletionTrace,
    PlaneTriangulation,
    SheddingSequence,
    deletion_trace,
    edge_key,
    mirror,
)


class EmptyRegion(Exception):
    """The support-line region has no interior; must never fire on valid input."""


class ParallelSupportLines(Exception):
    """Left and right support lines fail s > u; must never fire on valid input."""


class PropertyViolation(Exception):
    """A per-step audit failed: implementation bug, never valid-input failure."""

    def __init__(self, i: int, which: str, detail: str):
        super().__init__(f"step {i}: property {which} violated: {detail}")
        self.i = i
        self.which = which


IntPoint = tuple[int, int]


@dataclass(frozen=True)
class ScaledTemplate:
    """The template triangulation stretched onto the working grid:
    z_q = (alpha * x(a*_q), beta * y(a*_q)) with alpha = 2n^2+n+1, beta = 2n*alpha."""

    n: int
    alpha: int
    beta: int
    rt: ReducedTriangulation
    z: dict[int, IntPoint]
    M: Fraction  # max |boundary slope| of the full template

    def slope_of(self, pair: tuple[int, int]) -> Fraction:
        p, q = self.z[pair[0]], self.z[pair[1]]
        return slope(Point2(*p), Point2(*q))

    def xspan(self, pair: tuple[int, int]) -> int:
        return abs(self.z[pair[0]][0] - self.z[pair[1]][0])

    def prefix_chain(self, j: int) -> list[int]:
        """Template ids present in Z_j, left to right."""
        ids = [0, 1] + [q - 1 for q in range(3, j + 1)]
        return sorted(ids, key=lambda t: self.z[t][0])

    def prefix_boundary_slopes(self, j: int) -> list[Fraction]:
        """Slopes of all boundary edges of Z_j (upper chain plus the base)."""
        chain = self.prefix_chain(j)
        out = [
            slope(Point2(*self.z[u]), Point2(*self.z[v]))
            for u, v in zip(chain, chain[1:])
        ]
        out.append(Fraction(0))  # the base edge
        return out


def make_template(rt: ReducedTriangulation, n: int) -> ScaledTemplate:
    alpha = 2 * n * n + n + 1
    beta = 2 * n * alpha
    z = {vid: (alpha * x, beta * y) for vid, (x, y) in rt.Gstar.coords.items()}
    tpl = ScaledTemplate(n, alpha, beta, rt, z, Fraction(0))
    M = max(abs(s) for s in tpl.prefix_boundary_slopes(rt.Gstar.n))
    object.__setattr__(tpl, "M", M)
    return tpl


# -- placement cases (pure helpers) --------------------------------------------


def place_high_degree(ws: list[IntPoint]) -> IntPoint:
    """Vertex placement over a chain of k >= 3 neighbors (degree > 2 case).

    Intersect the line of slope s(w1 w2) through w1 with the line of slope
    s(w_{k-1} w_k) through w_k, then round: x' = ceil(xbar), and push y up by
    floor((x' - xbar) * s) + 1.
    """
    w1, w2 = Point2(*ws[0]), Point2(*ws[1])
    wk1, wk = Point2(*ws[-2]), Point2(*ws[-1])
    s = slope(w1, w2)
    u = slope(wk1, wk)
    if s <= u:
        raise ParallelSupportLines(f"support slopes s={s} <= u={u}")
    xbar, ybar = intersect_lines(w1, s, wk, u)
    xp = ceil_fraction(xbar)
    gamma = xp - xbar
    yp = ceil_fraction(ybar) + floor_fraction(gamma * s) + 1
    return (xp, yp)


def place_degree_two(
    w1: IntPoint, w2: IntPoint, b1: IntPoint, b2: IntPoint, apex: IntPoint
) -> IntPoint:
    """Vertex placement by copying a template triangle (degree = 2 case).

    The triangle (b1, b2, apex) is scaled and translated so that the image of
    b2 is exactly w2 and the image of b1 shares its x with w1, then sheared
    down by kappa * eta to pin the b1 corner onto w1; the apex image is
    rounded (floor x when the template apex is left of center, ceil when
    right; always ceil y).
    """
    lam = Fraction(w2[0] - w1[0], b2[0] - b1[0])
    assert lam > 0
    v1y = w2[1] + lam * (b1[1] - b2[1])
    v3x = w2[0] + lam * (apex[0] - b2[0])
    v3y = w2[1] + lam * (apex[1] - b2[1])
    eta = v1y - w1[1]
    kappa = Fraction(b2[0] - apex[0], b2[0] - b1[0])
    v3bar_y = v3y - kappa * eta
    x = floor_fraction(v3x) if apex[0] <= 0 else ceil_fraction(v3x)
    return (x, ceil_fraction(v3bar_y))


# -- grid embedding -------------------------------------------------------------


class AuditRecord(NamedTuple):
    i: int
    case: str
    point: IntPoint


@dataclass(frozen=True)
class GridEmbedding:
    """Integer drawing plus the bookkeeping that certified it.

    coords are in the frame of the input triangulation (mirroring, if any, has
    been undone); correspondence maps every edge that was ever a prefix
    boundary edge to its template edge (as a pair of template vertex ids), in
    the construction frame.
    """

    G: PlaneTriangulation
    sequence: SheddingSequence
    coords: dict[int, IntPoint]
    correspondence: dict[tuple[int, int], tuple[int, int]]
    template: ScaledTemplate
    mirrored: bool
    audit: Optional[tuple[AuditRecord, ...]]

    @property
    def n(self) -> int:
        return self.G.n

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p[0] for p in self.coords.values()]
        ys = [p[1] for p in self.coords.values()]
        return min(xs), min(ys), max(xs), max(ys)

    @property
    def width(self) -> int:
        x0, _, x1, _ = self.bbox()
        return x1 - x0

    @property
    def height(self) -> int:
        _, y0, _, y1 = self.bbox()
        return y1 - y0


def _chain_of_cycle(cyc: tuple[int, ...], lb: int) -> tuple[int, ...]:
    """Boundary chain left->right: rotate the ccw cycle to (lb, rb, r1..rt)
    and fold it into (lb, rt, ..., r1, rb)."""
    j = cyc.index(lb)
    rot = cyc[j:] + cyc[:j]
    return (rot[0],) + tuple(reversed(rot[2:])) + (rot[1],)


def _pipeline(work: PlaneTriangulation, a: SheddingSequence):
    trace = deletion_trace(work, a)
    trees = build_shedding_trees(work, a, trace)
    rs = reduce_trees(trees, a)
    return trace, rs


def _base_lr(trace: DeletionTrace, a: SheddingSequence) -> tuple[int, int]:
    a1, a2 = a.order[0], a.order[1]
    cyc3 = trace.base_boundary
    succ3 = {cyc3[j]: cyc3[(j + 1) % 3] for j in range(3)}
    if succ3[a1] == a2:
        return a1, a2
    assert succ3[a2] == a1
    return a2, a1


def _audit_grid_step(
    i: int,
    coords: dict[int, IntPoint],
    cyc: tuple[int, ...],
    lb: int,
    zmap: dict[tuple[int, int], tuple[int, int]],
    tpl: ScaledTemplate,
) -> None:
    # P(i,1) and P(i,2) over all boundary edges of the prefix
    b = len(cyc)
    for j in range(b):
        u, v = cyc[j], cyc[(j + 1) % b]
        zpair = zmap[edge_key(u, v)]
        dx = abs(coords[u][0] - coords[v][0])
        zdx = tpl.xspan(zpair)
        if dx < zdx:
            raise PropertyViolation(i, "1", f"edge {u}-{v}: x-extent {dx} < template {zdx}")
        dev = abs(slope(Point2(*coords[u]), Point2(*coords[v])) - tpl.slope_of(zpair))
        if dev > i:
            raise PropertyViolation(i, "2", f"edge {u}-{v}: slope drift {dev} > {i}")
    # P(i,3): strictly decreasing slopes along the upper chain
    chain = _chain_of_cycle(cyc, lb)
    prev = None
    for u, v in zip(chain, chain[1:]):
        s = slope(Point2(*coords[u]), Point2(*coords[v]))
        if prev is not None and not s < prev:
            raise PropertyViolation(i, "3", f"slopes not strictly decreasing at {u}-{v}")
        prev = s


def grid_embed(
    G: PlaneTriangulation, a: SheddingSequence, audit: bool = True
) -> GridEmbedding:
    """Integer drawing of G driven by the shedding sequence a.

    Raises PropertyViolation / ParallelSupportLines only on implementation
    bugs; for every valid input the audits pass and the result fits the
    4n^3 x 8n^5 grid with (0,0) on the base edge.
    """
    n = G.n
    work = G
    mirrored = False
    trace, rs = _pipeline(work, a)
    m, mp = rs.internal_counts()
    if m > mp:
        work = mirror(G)
        mirrored = True
        trace, rs = _pipeline(work, a)
        m, mp = rs.internal_counts()
        assert m <= mp
    rt = build_reduced_triangulation(rs)
    tpl = make_template(rt, n)
    zmap = {key: rt.psi[rs.rep[key]] for key in rs.store.by_key}

    lb, rb = _base_lr(trace, a)
    a3 = a.order[2]
    coords: dict[int, IntPoint] = {lb: tpl.z[0], rb: tpl.z[1], a3: tpl.z[2]}
    records: list[AuditRecord] = [AuditRecord(3, "base", tpl.z[2])]
    if audit:
        _audit_grid_step(3, coords, trace.base_boundary, lb, zmap, tpl)

    for i in range(4, n + 1):
        ai = trace.order[i - 1]
        ws = trace.link(i)
        wpts = [coords[w] for w in ws]
        if len(ws) > 2:
            pt = place_high_degree(wpts)
            case = "high"
        else:
            q = rs.rho[i]
            fq, gq = rt.f[q], rt.g[q]
            ek = edge_key(ws[0], ws[1])
            if set(zmap[ek]) != {fq - 1, gq - 1}:
                raise PropertyViolation(
                    i, "correspondence", f"Z({ek})={zmap[ek]} but template face is ({fq},{gq})"
                )
            pt = place_degree_two(wpts[0], wpts[1], tpl.z[fq - 1], tpl.z[gq - 1], tpl.z[q - 1])
            case = "two"
        if not wpts[0][0] < pt[0] < wpts[-1][0]:
            raise PropertyViolation(i, "3", f"new x {pt[0]} not strictly inside the chain span")
        for w_a, w_b in zip(wpts, wpts[1:]):
            if orient2d(Point2(*w_a), Point2(*w_b), Point2(*pt)) != 1:
                raise PropertyViolation(i, "3", f"new vertex not strictly above covered edge")
        coords[ai] = pt
        records.append(AuditRecord(i, case, pt))
        if audit:
            _audit_grid_step(i, coords, trace.boundary(i), lb, zmap, tpl)

    # frame-independent final invariants
    xs = [p[0] for p in coords.values()]
    ys = [p[1] for p in coords.values()]
    width = max(xs) - min(xs)
    height = max(ys) - min(ys)
    if width != 2 * tpl.alpha * (rt.mprime + 1):
        raise PropertyViolation(n, "width", f"width {width} != 2*alpha*(m'+1)")
    if width > 4 * n**3 or height > 8 * n**5:
        raise PropertyViolation(n, "bounds", f"{width} x {height} exceeds 4n^3 x 8n^5")
    if not (coords[lb][1] == coords[rb][1] == 0 and coords[lb][0] < 0 < coords[rb][0]):
        raise PropertyViolation(n, "base", "(0,0) not interior to the base edge")

    if mirrored:
        coords = {v: (-x, y) for v, (x, y) in coords.items()}
    return GridEmbedding(
        G, a, coords, zmap, tpl, mirrored, tuple(records) if audit else None
    )


# -- rational embedding ----------------------------------------------------------


class _Line(NamedTuple):
    point: Point2
    s: Fraction

    def at(self, x: Fraction) -> Fraction:
        return self.point.y + self.s * (x - self.point.x)

    def intercept(self) -> Fraction:
        return self.point.y - self.s * self.point.x


def _region_point(constraints: list[tuple[_Line, str]]) -> Point2:
    """A rational point strictly inside the intersection of half-planes.

    Takes the centroid of the corner points of the (bounded) feasible region;
    raises EmptyRegion if that fails, which valid inputs never trigger.
    """
    uniq: dict[tuple[Fraction, Fraction], tuple[_Line, str]] = {}
    for ln, sense in constraints:
        uniq.setdefault((ln.s, ln.intercept()), (ln, sense))
    lines = list(uniq.values())

    def feasible(p: Point2, strict: bool) -> bool:
        for ln, sense in lines:
            yl = ln.at(p.x)
            if sense == "below":
                ok = p.y < yl if strict else p.y <= yl
            else:
                ok = p.y > yl if strict else p.y >= yl
            if not ok:
                return False
        return True

    corners: set[tuple[Fraction, Fraction]] = set()
    for idx in range(len(lines)):
        for jdx in range(idx + 1, len(lines)):
            l1, l2 = lines[idx][0], lines[jdx][0]
            if l1.s == l2.s:
                continue
            p = intersect_lines(l1.point, l1.s, l2.point, l2.s)
            if feasible(p, strict=False):
                corners.add((p.x, p.y))
    if len(corners) < 3:
        raise EmptyRegion(f"only {len(corners)} feasible corners")
    cx = sum((c[0] for c in corners), Fraction(0)) / len(corners)
    cy = sum((c[1] for c in corners), Fraction(0)) / len(corners)
    pt = Point2(cx, cy)
    if not feasible(pt, strict=True):
        raise EmptyRegion("centroid not strictly interior")
    return pt


def rational_embed(
    G: PlaneTriangulation, a: SheddingSequence, audit: bool = True
) -> dict[int, Point2]:
    """Rational sequentially convex drawing with base (0,0)-(2,0), apex (1,1).

    The base endpoint that is leftmost is the one the boundary orientation
    says; the drawing always has the interior in the upper half-plane.
    """
    trace = deletion_trace(G, a)
    lb, rb = _base_lr(trace, a)
    a3 = a.order[2]
    coords: dict[int, Point2] = {
        lb: Point2(Fraction(0), Fraction(0)),
        rb: Point2(Fraction(2), Fraction(0)),
        a3: Point2(Fraction(1), Fraction(1)),
    }
    for i in range(4, trace.n + 1):
        ai = trace.order[i - 1]
        ws = trace.link(i)
        prev_cyc = trace.boundary(i - 1)
        bprev = len(prev_cyc)
        succ_prev = {prev_cyc[j]: prev_cyc[(j + 1) % bprev] for j in range(bprev)}
        pred_prev = {s: p for p, s in succ_prev.items()}
        w1, wk = ws[0], ws[-1]
        p1, pk = coords[w1], coords[wk]
        s2 = slope(coords[ws[0]], coords[ws[1]])
        s3 = slope(coords[ws[-2]], coords[ws[-1]])
        if w1 == lb:
            l1 = _Line(p1, s2 + 1)
        else:
            l1 = _Line(p1, slope(coords[succ_prev[w1]], p1))
        if wk == rb:
            l4 = _Line(pk, s3 - 1)
        else:
            l4 = _Line(pk, slope(pk, coords[pred_prev[wk]]))
        pt = _region_point(
            [(l1, "below"), (_Line(p1, s2), "above"), (_Line(pk, s3), "above"), (l4, "below")]
        )
        for w_a, w_b in zip(ws, ws[1:]):
            if orient2d(coords[w_a], coords[w_b], pt) != 1:
                raise EmptyRegion(f"step {i}: chosen point not above covered edge {w_a}-{w_b}")
        coords[ai] = pt
        if audit:
            chain = _chain_of_cycle(trace.boundary(i), lb)
            slopes = [slope(coords[x], coords[y]) for x, y in zip(chain, chain[1:])]
            if not all(sa > sb for sa, sb in zip(slopes, slopes[1:])):
                raise EmptyRegion(f"step {i}: prefix chain lost strict convexity")
    return coords

"""Combinatorial plane triangulations (triangulated disks) and shedding machinery.

A triangulation here is a pure combinatorial object: a set of vertex ids, a set
of counterclockwise-oriented triangles, and an explicit counterclockwise
boundary cycle.  Optional integer lattice coordinates ride along for instances
that have them (grid triangulations); nothing in this module does geometry with
them beyond lexicographic tie-breaking.

Vertex ids are arbitrary distinct non-negative ints.  Freshly generated or
file-loaded instances use dense ids 0..n-1, but deleting a boundary vertex
(the basic move of a shedding sequence) produces a sub-triangulation that keeps
the surviving ids, so the data model must allow gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence


class InvalidTriangulation(Exception):
    """Operation applied to an object that is not a valid plane triangulation."""


class NotBoundary(InvalidTriangulation):
    """Vertex expected to be on the boundary cycle is interior (or absent)."""


class NotADiagonal(InvalidTriangulation):
    """Edge expected to be a diagonal (interior edge with boundary endpoints) is not."""


class NoSheddingVertex(InvalidTriangulation):
    """No shedding vertex found where theory guarantees one; signals a bug."""


class Violation(NamedTuple):
    code: str
    detail: str


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class PlaneTriangulation:
    """Immutable triangulated disk.

    triangles: ccw vertex triples.
    boundary:  simple cycle of boundary vertex ids, ccw (interior on the left).
    coords:    optional map id -> (x, y) integer lattice point.

    Derived adjacency structures are built lazily and cached; treat instances
    as frozen values (deletion returns a new instance).
    """

    __slots__ = (
        "vertices",
        "triangles",
        "boundary",
        "coords",
        "_third",
        "_adj",
        "_bset",
        "_bsucc",
        "_bpred",
        "_eset",
    )

    def __init__(
        self,
        vertices: Iterable[int],
        triangles: Iterable[Sequence[int]],
        boundary: Sequence[int],
        coords: Optional[Mapping[int, tuple[int, int]]] = None,
    ):
        self.vertices: tuple[int, ...] = tuple(sorted(vertices))
        self.triangles: tuple[tuple[int, int, int], ...] = tuple(
            (t[0], t[1], t[2]) for t in triangles
        )
        self.boundary: tuple[int, ...] = tuple(boundary)
        self.coords: Optional[dict[int, tuple[int, int]]] = (
            dict(coords) if coords is not None else None
        )
        self._third = None
        self._adj = None
        self._bset = None
        self._bsucc = None
        self._bpred = None
        self._eset = None

    # -- basic accessors -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def _key(self):
        c = tuple(sorted(self.coords.items())) if self.coords is not None else None
        return (self.vertices, self.triangles, self.boundary, c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlaneTriangulation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"PlaneTriangulation(n={self.n}, b={len(self.boundary)}, t={len(self.triangles)})"

    def third(self) -> dict[tuple[int, int], int]:
        """Directed edge (u,v) -> the third vertex of the ccw triangle containing it."""
        if self._third is None:
            m: dict[tuple[int, int], int] = {}
            for a, b, c in self.triangles:
                m[(a, b)] = c
                m[(b, c)] = a
                m[(c, a)] = b
            self._third = m
        return self._third

    def adjacency(self) -> dict[int, set[int]]:
        if self._adj is None:
            adj: dict[int, set[int]] = {v: set() for v in self.vertices}
            for a, b, c in self.triangles:
                adj[a].update((b, c))
                adj[b].update((a, c))
                adj[c].update((a, b))
            self._adj = adj
        return self._adj

    def edges(self) -> set[tuple[int, int]]:
        if self._eset is None:
            es = set()
            for a, b, c in self.triangles:
                es.add(edge_key(a, b))
                es.add(edge_key(b, c))
                es.add(edge_key(a, c))
            self._eset = es
        return self._eset

    def boundary_set(self) -> frozenset[int]:
        if self._bset is None:
            self._bset = frozenset(self.boundary)
        return self._bset

    def boundary_succ(self) -> dict[int, int]:
        if self._bsucc is None:
            cyc = self.boundary
            self._bsucc = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
        return self._bsucc

    def boundary_pred(self) -> dict[int, int]:
        if self._bpred is None:
            self._bpred = {s: p for p, s in self.boundary_succ().items()}
        return self._bpred

    def boundary_edges(self) -> set[tuple[int, int]]:
        cyc = self.boundary
        return {edge_key(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}

    def is_boundary_vertex(self, v: int) -> bool:
        return v in self.boundary_set()

    def interior_vertices(self) -> list[int]:
        bs = self.boundary_set()
        return [v for v in self.vertices if v not in bs]

    def diagonals(self) -> list[tuple[int, int]]:
        """Interior edges whose endpoints are both boundary vertices, sorted."""
        bs = self.boundary_set()
        bedges = self.boundary_edges()
        return sorted(
            e for e in self.edges() if e not in bedges and e[0] in bs and e[1] in bs
        )


# -- validation ---------------------------------------------------------------


def validate(G: PlaneTriangulation) -> list[Violation]:
    """Check all triangulated-disk invariants; empty list means valid.

    The checks, in order: well-formed triangles over the vertex set, no
    duplicated faces, consistent orientations (each directed edge in at most
    one triangle), a simple boundary cycle matching triangle orientations,
    the Euler counts #t = 2n - b - 2 and #e = 3n - b - 3, a single fan/cycle
    of faces around every vertex, and connectivity.  Together these certify
    that the complex is a triangulated disk with the declared boundary.
    """
    out: list[Violation] = []
    verts = set(G.vertices)
    n = len(verts)
    if len(G.vertices) != len(set(G.vertices)):
        out.append(Violation("bad-vertices", "duplicate vertex ids"))
        return out
    if n < 3:
        out.append(Violation("too-small", f"n={n} < 3"))
        return out

    for t in G.triangles:
        if len(set(t)) != 3 or not set(t) <= verts:
            out.append(Violation("bad-face", f"triangle {t} malformed"))
            return out
    face_sets = [frozenset(t) for t in G.triangles]
    if len(set(face_sets)) != len(face_sets):
        out.append(Violation("bad-face", "duplicate face"))
        return out

    directed: dict[tuple[int, int], int] = {}
    for a, b, c in G.triangles:
        for e in ((a, b), (b, c), (c, a)):
            if e in directed:
                out.append(Violation("orientation", f"directed edge {e} in two triangles"))
                return out
            directed[e] = 1

    cyc = G.boundary
    b = len(cyc)
    if b < 3 or len(set(cyc)) != b or not set(cyc) <= verts:
        out.append(Violation("bad-boundary", f"boundary cycle {cyc} not simple"))
        return out
    for i in range(b):
        u, v = cyc[i], cyc[(i + 1) % b]
        if (u, v) not in directed:
            out.append(
                Violation("bad-boundary", f"boundary step {u}->{v} not a ccw triangle edge")
            )
            return out
        if (v, u) in directed:
            out.append(
                Violation("bad-boundary", f"boundary edge {u}-{v} has triangles on both sides")
            )
            return out

    # undirected edge census: boundary edges border 1 triangle, interior 2
    und: dict[tuple[int, int], int] = {}
    for e in directed:
        und[edge_key(*e)] = und.get(edge_key(*e), 0) + 1
    bedges = {edge_key(cyc[i], cyc[(i + 1) % b]) for i in range(b)}
    for e, cnt in und.items():
        if e in bedges:
            if cnt != 1:
                out.append(Violation("bad-boundary", f"boundary edge {e} in {cnt} triangles"))
                return out
        elif cnt != 2:
            out.append(Violation("open-edge", f"interior edge {e} in {cnt} triangle(s)"))
            return out

    if len(G.triangles) != 2 * n - b - 2:
        out.append(
            Violation(
                "euler", f"#triangles={len(G.triangles)} != 2n-b-2={2 * n - b - 2}"
            )
        )
        return out
    if len(und) != 3 * n - b - 3:
        out.append(Violation("euler", f"#edges={len(und)} != 3n-b-3={3 * n - b - 3}"))
        return out

    # single fan (boundary vertex) / single cycle (interior vertex) of faces
    succ_at: dict[int, dict[int, int]] = {v: {} for v in verts}
    for a2, b2, c2 in G.triangles:
        succ_at[a2][b2] = c2
        succ_at[b2][c2] = a2
        succ_at[c2][a2] = b2
    bset = set(cyc)
    bsucc = {cyc[i]: cyc[(i + 1) % b] for i in range(b)}
    bpred = {v: u for u, v in bsucc.items()}
    adj = G.adjacency()
    for v in G.vertices:
        nbrs = adj[v]
        if not nbrs:
            out.append(Violation("disconnected", f"isolated vertex {v}"))
            return out
        rot = succ_at[v]
        if v in bset:
            start, stop = bsucc[v], bpred[v]
            seen = {start}
            w = start
            while w != stop:
                w = rot.get(w, -1)
                if w < 0 or w in seen:
                    out.append(Violation("pinched-vertex", f"faces at {v} are not a single fan"))
                    return out
                seen.add(w)
            if seen != nbrs:
                out.append(Violation("pinched-vertex", f"fan at {v} misses neighbors"))
                return out
        else:
            start = next(iter(nbrs))
            seen = {start}
            w = rot.get(start, -1)
            while w >= 0 and w != start:
                if w in seen:
                    break
                seen.add(w)
                w = rot.get(w, -1)
            if w != start or seen != nbrs:
                out.append(
                    Violation("pinched-vertex", f"faces at interior {v} are not a single cycle")
                )
                return out

    # connectivity (the fan conditions make this almost redundant, but cheap)
    stack = [G.vertices[0]]
    reached = {G.vertices[0]}
    while stack:
        for w in adj[stack.pop()]:
            if w not in reached:
                reached.add(w)
                stack.append(w)
    if reached != verts:
        out.append(Violation("disconnected", f"{len(verts) - len(reached)} vertices unreachable"))
        return out

    if G.coords is not None:
        missing = verts - set(G.coords)
        if missing:
            out.append(Violation("bad-coords", f"coords missing for {sorted(missing)[:5]}"))
            return out

    return out


def is_valid(G: PlaneTriangulation) -> bool:
    return not validate(G)


# -- deletion and shedding ----------------------------------------------------


def link_of_boundary_vertex(G: PlaneTriangulation, v: int) -> tuple[int, ...]:
    """Neighbors w_1..w_k of boundary vertex v, ordered left to right.

    "Left" is the ccw-successor side: w_1 is v's successor on the boundary
    cycle, w_k its predecessor, and consecutive w_j, w_{j+1} span a face with v.
    """
    if not G.is_boundary_vertex(v):
        raise NotBoundary(f"vertex {v} is not on the boundary")
    third = G.third()
    w = G.boundary_succ()[v]
    stop = G.boundary_pred()[v]
    link = [w]
    while w != stop:
        w = third[(v, w)]
        link.append(w)
    return tuple(link)


def delete_boundary_vertex(
    G: PlaneTriangulation, v: int
) -> tuple[PlaneTriangulation, tuple[int, ...]]:
    """Remove boundary vertex v; returns (new triangulation, link of v).

    The result is *not* validated here -- that is the caller's business
    (is_shedding_vertex does exactly that).
    """
    link = link_of_boundary_vertex(G, v)
    tris = tuple(t for t in G.triangles if v not in t)
    i = G.boundary.index(v)
    cyc = G.boundary[:i] + tuple(reversed(link[1:-1])) + G.boundary[i + 1 :]
    coords = None
    if G.coords is not None:
        coords = {u: xy for u, xy in G.coords.items() if u != v}
    H = PlaneTriangulation(
        (u for u in G.vertices if u != v), tris, cyc, coords
    )
    return H, link


def is_shedding_vertex(G: PlaneTriangulation, v: int, definitional: bool = False) -> bool:
    """True iff G - {v} is again a plane triangulation.

    Default path: the O(deg v) combinatorial criterion -- no middle vertex of
    v's link lies on the boundary (equivalently, v is not a diagonal
    endpoint).  With definitional=True the literal definition runs instead:
    delete v and validate.  The two must agree everywhere; the test suite
    asserts that on every instance it touches.
    """
    if G.n < 4:
        raise InvalidTriangulation(f"shedding undefined for n={G.n} < 4")
    if not G.is_boundary_vertex(v):
        raise NotBoundary(f"vertex {v} is not on the boundary")
    if definitional:
        H, _ = delete_boundary_vertex(G, v)
        return is_valid(H)
    link = link_of_boundary_vertex(G, v)
    bset = G.boundary_set()
    return not any(w in bset for w in link[1:-1])


@dataclass(frozen=True)
class SheddingSequence:
    """Vertex order a_1..a_n with per-step degrees d_i(a_i) and the base edge.

    Invariants: (a_1, a_2) is a boundary edge of the triangulation the
    sequence belongs to, and for every i >= 4 the vertex a_i is a shedding
    vertex of the prefix triangulation on {a_1..a_i}.
    """

    order: tuple[int, ...]
    degrees: tuple[int, ...]
    base_edge: tuple[int, int]

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def position(self) -> dict[int, int]:
        """Map vertex id -> 1-based index in the order."""
        return {v: i + 1 for i, v in enumerate(self.order)}


def shedding_sequence(G: PlaneTriangulation, u: int, v: int) -> SheddingSequence:
    """Greedy shedding sequence with a_1 = u, a_2 = v.

    Works backward from i = n: among boundary vertices of the current prefix
    other than u and v, deletes the smallest-id shedding vertex.  Existence is
    guaranteed for every valid input; NoSheddingVertex firing means the input
    was invalid or there is a bug.
    """
    if edge_key(u, v) not in G.boundary_edges():
        raise InvalidTriangulation(f"({u},{v}) is not a boundary edge")
    rev: list[int] = []
    degs_rev: list[int] = []
    H = G
    while H.n > 3:
        picked = -1
        for w in H.boundary:
            if w == u or w == v:
                continue
            if (picked < 0 or w < picked) and is_shedding_vertex(H, w):
                picked = w
        if picked < 0:
            raise NoSheddingVertex(f"no shedding vertex at n={H.n}")
        H, link = delete_boundary_vertex(H, picked)
        rev.append(picked)
        degs_rev.append(len(link))
    (w3,) = [w for w in H.vertices if w != u and w != v]
    order = (u, v, w3) + tuple(reversed(rev))
    degrees = (0, 1, 2) + tuple(reversed(degs_rev))
    return SheddingSequence(order, degrees, (u, v))


# -- deletion traces ----------------------------------------------------------


class DeletionStep(NamedTuple):
    i: int
    vertex: int
    link: tuple[int, ...]
    boundary: tuple[int, ...]  # boundary cycle of G_i (before deleting vertex)


@dataclass(frozen=True)
class DeletionTrace:
    """Everything the downstream constructions need about the deletion history.

    steps[j] describes step i = j + 4 (ascending).  boundary(i) is the ccw
    boundary cycle of the prefix triangulation G_i, link(i) the ordered link
    of a_i in G_i.
    """

    G: PlaneTriangulation
    order: tuple[int, ...]
    steps: tuple[DeletionStep, ...]
    base_boundary: tuple[int, ...]  # boundary cycle of G_3

    @property
    def n(self) -> int:
        return len(self.order)

    def position(self) -> dict[int, int]:
        return {v: i + 1 for i, v in enumerate(self.order)}

    def step(self, i: int) -> DeletionStep:
        return self.steps[i - 4]

    def link(self, i: int) -> tuple[int, ...]:
        return self.steps[i - 4].link

    def boundary(self, i: int) -> tuple[int, ...]:
        if i == 3:
            return self.base_boundary
        return self.steps[i - 4].boundary

    def degree(self, i: int) -> int:
        if i <= 3:
            return i - 1
        return len(self.steps[i - 4].link)


def deletion_trace(G: PlaneTriangulation, a: SheddingSequence, check: bool = True) -> DeletionTrace:
    """Replay deleting a_n..a_4 and record links and boundary cycles.

    With check=True (default) each deleted vertex is verified to be a shedding
    vertex of its prefix, i.e. the sequence's own invariant is enforced.
    """
    if set(a.order) != set(G.vertices) or len(a.order) != G.n:
        raise InvalidTriangulation("sequence is not a permutation of the vertices")
    if edge_key(*a.base_edge) not in G.boundary_edges():
        raise InvalidTriangulation("base edge of the sequence is not a boundary edge")
    steps: list[DeletionStep] = []
    H = G
    for i in range(G.n, 3, -1):
        v = a.order[i - 1]
        if check and not is_shedding_vertex(H, v):
            raise InvalidTriangulation(f"a_{i}={v} is not a shedding vertex of G_{i}")
        bnd = H.boundary
        H, link = delete_boundary_vertex(H, v)
        steps.append(DeletionStep(i, v, link, bnd))
    steps.reverse()
    if check and validate(H):
        raise InvalidTriangulation("prefix G_3 is not a triangle")
    return DeletionTrace(G, a.order, tuple(steps), H.boundary)


def prefix_triangulation(trace: DeletionTrace, i: int) -> PlaneTriangulation:
    """The prefix G_i as a standalone value (induced on a_1..a_i)."""
    if not 3 <= i <= trace.n:
        raise ValueError(f"prefix index {i} out of range")
    pos = trace.position()
    keep = set(trace.order[:i])
    tris = [t for t in trace.G.triangles if max(pos[x] for x in t) <= i]
    coords = None
    if trace.G.coords is not None:
        coords = {u: xy for u, xy in trace.G.coords.items() if u in keep}
    return PlaneTriangulation(keep, tris, trace.boundary(i), coords)


# -- diagonals and regions ----------------------------------------------------


def split_by_diagonal(
    G: PlaneTriangulation, diag: tuple[int, int]
) -> tuple[frozenset[int], frozenset[int]]:
    """Vertex sets strictly inside the two components of the disk minus a diagonal.

    Returned deterministically: first the component on the left of the
    directed edge (min id -> max id), then the other.  The diagonal's own
    endpoints belong to neither side.
    """
    u, v = edge_key(*diag)
    bset = G.boundary_set()
    if (
        edge_key(u, v) not in G.edges()
        or edge_key(u, v) in G.boundary_edges()
        or u not in bset
        or v not in bset
    ):
        raise NotADiagonal(f"({u},{v}) is not a diagonal")
    third = G.third()
    # face-dual flood fill from each side of the diagonal
    tri_of: dict[tuple[int, int], tuple[int, int, int]] = {}
    for t in G.triangles:
        a, b, c = t
        tri_of[(a, b)] = t
        tri_of[(b, c)] = t
        tri_of[(c, a)] = t
    bedges = G.boundary_edges()

    def flood(start: tuple[int, int, int]) -> set[tuple[int, int, int]]:
        comp = {start}
        stack = [start]
        while stack:
            a, b, c = stack.pop()
            for d_edge in ((a, b), (b, c), (c, a)):
                ek = edge_key(*d_edge)
                if ek == (u, v) or ek in bedges:
                    continue
                nbr = tri_of.get((d_edge[1], d_edge[0]))
                if nbr is not None and nbr not in comp:
                    comp.add(nbr)
                    stack.append(nbr)
        return comp

    left = flood(tri_of[(u, v)])
    right = flood(tri_of[(v, u)])
    lverts = frozenset(x for t in left for x in t) - {u, v}
    rverts = frozenset(x for t in right for x in t) - {u, v}
    return lverts, rverts


def find_shedding_in_region(
    G: PlaneTriangulation, diag: tuple[int, int], side: int
) -> int:
    """A shedding vertex strictly inside the component of the disk minus
    ``diag`` that contains the vertex ``side``.

    Tie-break: the lexicographically greatest by (y, x) when coordinates
    exist, else the smallest id.  Existence is guaranteed for valid inputs;
    NoSheddingVertex firing signals a bug.
    """
    left, right = split_by_diagonal(G, diag)
    if side in left:
        region = left
    elif side in right:
        region = right
    else:
        raise ValueError(f"vertex {side} is not strictly inside either component")
    cands = [w for w in sorted(region) if G.is_boundary_vertex(w) and is_shedding_vertex(G, w)]
    if not cands:
        raise NoSheddingVertex(f"no shedding vertex strictly inside component of {side}")
    if G.coords is not None:
        return max(cands, key=lambda w: (G.coords[w][1], G.coords[w][0]))
    return cands[0]


def mirror(G: PlaneTriangulation) -> PlaneTriangulation:
    """The reflected triangulation: all orientations reversed.

    Coordinates are dropped -- the mirror is a working copy for the embedding
    pipeline (which never reads input coordinates), not a lattice instance.
    """
    tris = tuple((a, c, b) for a, b, c in G.triangles)
    return PlaneTriangulation(G.vertices, tris, tuple(reversed(G.boundary)), None)

"""Shedding depth: per-sequence profiles, exact minima, and lattice grids.

The depth of a vertex under a shedding sequence is one more than the largest
depth among its earlier neighbors (the first vertex has depth 1); the depth of
the sequence is the maximum over vertices.  Small instances admit exhaustive
minimization over all shedding sequences.  For triangulations of a p x q
lattice rectangle whose edges each fit an ell x ell subgrid, a staged batch
schedule produces a sequence of depth at most 6*ell*(p+q) using at most
ell*(2p+6q) batches of pairwise non-adjacent vertices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .exactgeom import Point2, orient2d
from .triangulation import (
    PlaneTriangulation,
    SheddingSequence,
    delete_boundary_vertex,
    edge_key,
    is_shedding_vertex,
    split_by_diagonal,
    validate,
)


class TooLarge(Exception):
    """Exhaustive search refused: the instance exceeds the hard size limit."""


class BadParams(Exception):
    """Grid parameters out of range (need 2 <= ell <= min(p, q))."""


class InvariantViolation(Exception):
    """A staged-schedule invariant failed; signals a bug, not bad input."""


# -- depth profiles -------------------------------------------------------------


@dataclass(frozen=True)
class TauProfile:
    """Vertex depths along one shedding sequence; tau is their maximum."""

    order: tuple[int, ...]
    depth: dict[int, int]
    tau: int

    def levels(self) -> list[frozenset[int]]:
        """Vertices grouped by depth, ascending; each group is an antichain."""
        by: dict[int, set[int]] = {}
        for v, d in self.depth.items():
            by.setdefault(d, set()).add(v)
        return [frozenset(by[d]) for d in sorted(by)]


def tau_profile(G: PlaneTriangulation, a: SheddingSequence) -> TauProfile:
    """Depths: depth(a_1) = 1, else 1 + max depth over earlier neighbors."""
    pos = a.position()
    adj = G.adjacency()
    depth: dict[int, int] = {}
    for i, v in enumerate(a.order, start=1):
        preds = [u for u in adj[v] if pos[u] < i]
        depth[v] = 1 + max((depth[u] for u in preds), default=0)
    return TauProfile(a.order, depth, max(depth.values()))


def min_tau_exhaustive(G: PlaneTriangulation, limit: int = 9) -> tuple[int, SheddingSequence]:
    """Minimum depth over all shedding sequences of G, with a witness.

    Brute force over every deletion order and every admissible base triple;
    the (depth, order) pair is minimized lexicographically, so the witness is
    deterministic.  Refuses instances with more than ``limit`` vertices.
    """
    if G.n > limit:
        raise TooLarge(f"n={G.n} exceeds the exhaustive-search limit {limit}")
    base_edges = G.boundary_edges()
    best: Optional[tuple[int, tuple[int, ...], SheddingSequence]] = None

    def close(H: PlaneTriangulation, suffix: list[int], degs: list[int]) -> None:
        nonlocal best
        for x, y, z in sorted(permutations(sorted(H.vertices))):
            if edge_key(x, y) not in base_edges:
                continue
            order = (x, y, z) + tuple(reversed(suffix))
            seq = SheddingSequence(order, (0, 1, 2) + tuple(reversed(degs)), (x, y))
            t = tau_profile(G, seq).tau
            if best is None or (t, order) < (best[0], best[1]):
                best = (t, order, seq)

    def search(H: PlaneTriangulation, suffix: list[int], degs: list[int]) -> None:
        if H.n == 3:
            close(H, suffix, degs)
            return
        for w in sorted(H.boundary):
            if is_shedding_vertex(H, w):
                H2, link = delete_boundary_vertex(H, w)
                suffix.append(w)
                degs.append(len(link))
                search(H2, suffix, degs)
                suffix.pop()
                degs.pop()

    search(G, [], [])
    assert best is not None
    return best[0], best[2]


# -- lattice grid triangulations ------------------------------------------------


@dataclass(frozen=True)
class GridTriangulation:
    """A triangulation of the p x q integer lattice rectangle.

    Vertex ids are row-major: the lattice point (x, y), 1-based, has id
    (y-1)*p + (x-1).  Every edge spans at most ell-1 in each coordinate.
    """

    p: int
    q: int
    ell: int
    T: PlaneTriangulation

    def vid(self, x: int, y: int) -> int:
        return (y - 1) * self.p + (x - 1)

    def xy(self, v: int) -> tuple[int, int]:
        return v % self.p + 1, v // self.p + 1


def _rect_boundary(p: int, q: int) -> tuple[int, ...]:
    def vid(x: int, y: int) -> int:
        return (y - 1) * p + (x - 1)

    cyc = [vid(x, 1) for x in range(1, p + 1)]
    cyc += [vid(p, y) for y in range(2, q + 1)]
    cyc += [vid(x, q) for x in range(p - 1, 0, -1)]
    cyc += [vid(1, y) for y in range(q - 1, 1, -1)]
    return tuple(cyc)


def _canon(t: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = t
    if a <= b and a <= c:
        return (a, b, c)
    if b <= a and b <= c:
        return (b, c, a)
    return (c, a, b)


def gen_grid_triangulation(p: int, q: int, ell: int, seed: int = 0) -> GridTriangulation:
    """Random triangulation of the p x q lattice with edges inside ell x ell.

    Each unit cell gets a random diagonal; for ell > 2 roughly 10*p*q random
    edge flips then inject longer edges (a flip is applied only when the
    surrounding quadrilateral is strictly convex and the new edge still fits
    an ell x ell subgrid).  Deterministic for a fixed seed.
    """
    if not 2 <= ell <= min(p, q):
        raise BadParams(f"need 2 <= ell <= min(p, q), got ell={ell}, p={p}, q={q}")
    rng = random.Random(seed)

    def vid(x: int, y: int) -> int:
        return (y - 1) * p + (x - 1)

    def xy(v: int) -> tuple[int, int]:
        return v % p + 1, v // p + 1

    tris: set[tuple[int, int, int]] = set()
    third: dict[tuple[int, int], int] = {}

    def add(t: tuple[int, int, int]) -> None:
        t = _canon(t)
        tris.add(t)
        a, b, c = t
        third[(a, b)] = c
        third[(b, c)] = a
        third[(c, a)] = b

    def drop(t: tuple[int, int, int]) -> None:
        t = _canon(t)
        tris.remove(t)
        a, b, c = t
        del third[(a, b)], third[(b, c)], third[(c, a)]

    for cy in range(1, q):
        for cx in range(1, p):
            a, b = vid(cx, cy), vid(cx + 1, cy)
            c, d = vid(cx + 1, cy + 1), vid(cx, cy + 1)
            if rng.random() < 0.5:
                add((a, b, c))
                add((a, c, d))
            else:
                add((a, b, d))
                add((b, c, d))

    if ell > 2:
        from bisect import insort

        interior = sorted({edge_key(*k) for k in third if (k[1], k[0]) in third})
        pt = {v: Point2(*xy(v)) for v in range(p * q)}
        for _ in range(10 * p * q):
            u, v = interior[rng.randrange(len(interior))]
            c = third[(u, v)]
            d = third[(v, u)]
            nk = edge_key(c, d)
            cx_, cy_ = xy(c)
            dx_, dy_ = xy(d)
            if abs(cx_ - dx_) > ell - 1 or abs(cy_ - dy_) > ell - 1:
                continue
            if nk in third or (nk[1], nk[0]) in third:
                continue
            if orient2d(pt[c], pt[d], pt[u]) * orient2d(pt[c], pt[d], pt[v]) >= 0:
                continue
            if orient2d(pt[u], pt[v], pt[c]) * orient2d(pt[u], pt[v], pt[d]) >= 0:
                continue
            drop((u, v, c))
            drop((v, u, d))
            add((c, u, d))
            add((d, v, c))
            interior.remove((u, v))
            insort(interior, nk)

    T = PlaneTriangulation(
        range(p * q),
        sorted(tris),
        _rect_boundary(p, q),
        {v: xy(v) for v in range(p * q)},
    )
    errs = validate(T)
    if errs:
        raise InvariantViolation(f"generated grid invalid: {errs[0]}")
    return GridTriangulation(p, q, ell, T)


def uniform_grid_triangulation(p: int, q: int) -> GridTriangulation:
    """The all-one-way-diagonals triangulation of the p x q lattice (ell = 2)."""
    if min(p, q) < 2:
        raise BadParams(f"need p, q >= 2, got p={p}, q={q}")

    def vid(x: int, y: int) -> int:
        return (y - 1) * p + (x - 1)

    tris = []
    for cy in range(1, q):
        for cx in range(1, p):
            a, b = vid(cx, cy), vid(cx + 1, cy)
            c, d = vid(cx + 1, cy + 1), vid(cx, cy + 1)
            tris.append(_canon((a, b, c)))
            tris.append(_canon((a, c, d)))
    T = PlaneTriangulation(
        range(p * q),
        sorted(tris),
        _rect_boundary(p, q),
        {v: (v % p + 1, v // p + 1) for v in range(p * q)},
    )
    assert not validate(T)
    return GridTriangulation(p, q, 2, T)


# -- the staged batch schedule ---------------------------------------------------


@dataclass(frozen=True)
class SheddingPlan:
    """A shedding sequence for a grid triangulation, grouped into batches.

    Batches are stored in sequence order (the batch deleted last comes
    first); each batch is a set of pairwise non-adjacent vertices.  stage
    maps every vertex to 0 (base triple), 3, 2 or 1; stages are
    non-increasing along the sequence after the base.
    """

    p: int
    q: int
    ell: int
    sequence: SheddingSequence
    antichains: tuple[frozenset[int], ...]
    stage: dict[int, int]
    tau: int

    @property
    def tau_bound(self) -> int:
        return 6 * self.ell * (self.p + self.q)

    @property
    def antichain_bound(self) -> int:
        return self.ell * (2 * self.p + 6 * self.q)


def grid_dimension_bounds(p: int, q: int, ell: int) -> tuple[int, int, int]:
    """(width, height, max lift height) bounds for grid instances: with
    n = p*q these are 4n^3, 8n^5 and (500 n^8)^(6 ell (p+q))."""
    n = p * q
    return 4 * n**3, 8 * n**5, (500 * n**8) ** (6 * ell * (p + q))


def grid_shedding(gt: GridTriangulation) -> SheddingPlan:
    """The three-stage batch schedule for a lattice grid triangulation.

    Stage 1 repeatedly removes, from every fourth column block of width ell,
    the highest remaining vertex above row ell (or, when that vertex is not
    itself a shedding vertex, the highest shedding vertex strictly inside the
    bottom-avoiding side of one of its diagonals).  Stage 2 does the same for
    tricolumns -- every fourth column block starting at the third together
    with both neighbors, clipped at the walls -- with threshold row 2*ell.
    Stage 3 clears the remaining low strip one vertex at a time.  One vertex
    per active block per round, so every round's removals are pairwise
    non-adjacent (edges span fewer than ell columns, and consecutive
    tricolumns are separated by a full untouched-stage-1 column).
    """
    p, q, ell = gt.p, gt.q, gt.ell
    T = gt.T

    def x_of(v: int) -> int:
        return v % p + 1

    def y_of(v: int) -> int:
        return v // p + 1

    imax = (p + ell - 1) // ell
    group_cols = {
        i: frozenset(range(ell * (i - 1) + 1, min(ell * i, p) + 1)) for i in range(1, imax + 1)
    }
    far_cols = frozenset(
        c for i in range(1, imax + 1) if i % 4 == 3 for c in group_cols[i]
    )

    H = T
    deleted: list[int] = []
    degs: list[int] = []
    batches_del_order: list[frozenset[int]] = []
    stage_of: dict[int, int] = {}

    def greatest_shedding_in(region: set[int]) -> int:
        cands = [w for w in region if H.is_boundary_vertex(w) and is_shedding_vertex(H, w)]
        if not cands:
            raise InvariantViolation("carve region contains no shedding vertex")
        return max(cands, key=lambda v: (y_of(v), x_of(v)))

    def run_stage(blocks: list[frozenset[int]], ymin: int, cand_ok, region_ok, label: int) -> None:
        """One deletion per active block per round; a block finishes its carve
        region before consulting its top vertex again.

        A block is active while it holds a vertex above ymin, but the vertex
        the diagonal argument is applied to is the greatest *admissible* one
        (cand_ok); the block top itself can be tucked under a rim edge that
        enters the block from the side, and an interior vertex meets no
        diagonal.
        """
        nonlocal H
        regions: list[set[int]] = [set() for _ in blocks]
        while True:
            batch: list[int] = []
            for k, cols in enumerate(blocks):
                regions[k] &= set(H.vertices)
                if regions[k]:
                    batch.append(greatest_shedding_in(regions[k]))
                    continue
                block = [v for v in H.vertices if x_of(v) in cols]
                if not any(y_of(v) > ymin for v in block):
                    continue
                cand = [v for v in block if cand_ok(v)]
                if not cand:
                    raise InvariantViolation("active block has no admissible vertex")
                vk = max(cand, key=lambda v: (y_of(v), x_of(v)))
                if not H.is_boundary_vertex(vk):
                    raise InvariantViolation(f"block-top vertex {vk} is interior")
                if is_shedding_vertex(H, vk):
                    batch.append(vk)
                    continue
                partners = [u for e in H.diagonals() if vk in e for u in e if u != vk]
                if not partners:
                    raise InvariantViolation(f"{vk} neither sheds nor meets a diagonal")
                uk = max(partners, key=lambda v: (y_of(v), x_of(v)))
                left, right = split_by_diagonal(H, (vk, uk))
                good = [S for S in (left, right) if region_ok(S)]
                if len(good) != 1:
                    raise InvariantViolation(
                        f"diagonal ({vk},{uk}) has {len(good)} admissible sides"
                    )
                regions[k] = set(good[0])
                batch.append(greatest_shedding_in(regions[k]))
            if not batch:
                return
            adj = H.adjacency()
            for ia in range(len(batch)):
                for ib in range(ia + 1, len(batch)):
                    if batch[ib] in adj[batch[ia]]:
                        raise InvariantViolation(
                            f"batch members {batch[ia]}, {batch[ib]} are adjacent"
                        )
            for w in reversed(batch):
                if not is_shedding_vertex(H, w):
                    raise InvariantViolation(f"batch member {w} stopped shedding")
                H, link = delete_boundary_vertex(H, w)
                deleted.append(w)
                degs.append(len(link))
                stage_of[w] = label
            batches_del_order.append(frozenset(batch))

    def stage1_ok(S) -> bool:
        return all(y_of(w) > 1 and x_of(w) not in far_cols for w in S)

    def stage1_cand(v) -> bool:
        return y_of(v) > 1 and H.is_boundary_vertex(v)

    stage1_blocks = [group_cols[i] for i in range(1, imax + 1) if i % 4 == 1]
    run_stage(stage1_blocks, ell, stage1_cand, stage1_ok, 1)

    for v in T.vertices:
        if x_of(v) in far_cols and v not in H.vertices:
            raise InvariantViolation(f"far-column vertex {v} deleted in stage 1")
    for x in range(1, p + 1):
        if gt.vid(x, 1) not in H.vertices:
            raise InvariantViolation(f"bottom-row vertex at x={x} deleted in stage 1")

    # rows 1..ell must form a connected induced strip before stage 2 trusts it
    low = [v for v in H.vertices if y_of(v) <= ell]
    adj = H.adjacency()
    seen = {low[0]}
    stack = [low[0]]
    lowset = set(low)
    while stack:
        for u in adj[stack.pop()]:
            if u in lowset and u not in seen:
                seen.add(u)
                stack.append(u)
    if seen != lowset:
        raise InvariantViolation("low strip is not connected before stage 2")

    # tricolumns centered on every fourth block starting at the third, kept
    # whenever they are nonempty after clipping to the rectangle -- a clipped
    # trailing tricolumn is what covers the rightmost block when the block
    # count is 2 mod 4
    stage2_blocks = []
    t = 3
    while t - 1 <= imax:
        cols = set()
        for i in (t - 1, t, t + 1):
            if 1 <= i <= imax:
                cols |= group_cols[i]
        if cols:
            stage2_blocks.append(frozenset(cols))
        t += 4

    def stage2_ok(S) -> bool:
        return all(y_of(w) > ell for w in S)

    def stage2_cand(v) -> bool:
        return y_of(v) > 2 * ell

    run_stage(stage2_blocks, 2 * ell, stage2_cand, stage2_ok, 2)

    for v in H.vertices:
        if y_of(v) > 2 * ell:
            raise InvariantViolation(f"vertex {v} above row 2*ell after stage 2")

    while H.n > 3:
        cands = [w for w in H.boundary if is_shedding_vertex(H, w)]
        if not cands:
            raise InvariantViolation("no shedding vertex in stage 3")
        w = max(cands, key=lambda v: (y_of(v), x_of(v)))
        H, link = delete_boundary_vertex(H, w)
        deleted.append(w)
        degs.append(len(link))
        stage_of[w] = 3
        batches_del_order.append(frozenset((w,)))

    base_edges = T.boundary_edges()
    final = sorted(H.vertices, key=lambda v: (y_of(v), x_of(v)))
    order = None
    if edge_key(final[0], final[1]) in base_edges:
        order = tuple(final)
    else:
        for bx, by, bz in sorted(permutations(final)):
            if edge_key(bx, by) in base_edges:
                order = (bx, by, bz)
                break
    if order is None:
        raise InvariantViolation(f"final triangle {final} has no original boundary edge")
    for v in order:
        stage_of[v] = 0

    full = order + tuple(reversed(deleted))
    seq = SheddingSequence(full, (0, 1, 2) + tuple(reversed(degs)), (order[0], order[1]))
    labels = [stage_of[v] for v in full[3:]]
    if any(la < lb for la, lb in zip(labels, labels[1:])):
        raise InvariantViolation("stage labels increase along the sequence")

    tau = tau_profile(T, seq).tau
    plan = SheddingPlan(
        p, q, ell, seq, tuple(reversed(batches_del_order)), dict(stage_of), tau
    )
    if tau > plan.tau_bound:
        raise InvariantViolation(f"depth {tau} exceeds 6*ell*(p+q) = {plan.tau_bound}")
    if len(plan.antichains) > plan.antichain_bound:
        raise InvariantViolation(
            f"{len(plan.antichains)} batches exceed ell*(2p+6q) = {plan.antichain_bound}"
        )
    return plan

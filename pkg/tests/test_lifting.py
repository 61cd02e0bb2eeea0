"""Lifting: greedy minimal integer heights, ceilings, truncation."""

from __future__ import annotations

from dataclasses import replace

import pytest

import oracles
from shedpoly.corpus import (
    gen_stacked,
    pentagon_fan,
    split_square,
    stacked_k4,
    triangle,
)
from shedpoly.embedding import grid_embed
from shedpoly.griddiam import gen_grid_triangulation, grid_shedding
from shedpoly.lifting import (
    BoundaryNotTriangle,
    NotSequentiallyConvex,
    height_bound,
    lift,
    truncate_to_polytope,
)
from shedpoly.triangulation import shedding_sequence


def embed_of(G):
    u, v = G.boundary[0], G.boundary[1]
    a = shedding_sequence(G, u, v)
    return grid_embed(G, a), a


def grid_instances():
    for p, q, ell, seed in ((4, 4, 2, 3), (5, 5, 3, 7), (6, 5, 2, 11)):
        gt = gen_grid_triangulation(p, q, ell, seed)
        plan = grid_shedding(gt)
        yield gt.T, plan.sequence


def small_instances():
    for G in (triangle(), split_square(), stacked_k4(), pentagon_fan(),
              gen_stacked(6, 1), gen_stacked(12, 3), gen_stacked(25, 4)):
        emb, a = embed_of(G)
        yield G, emb, a
    for G, a in grid_instances():
        yield G, grid_embed(G, a), a


def test_height_bound_values():
    assert height_bound(3, 0) == 1
    assert height_bound(4, 1) == 32702465
    assert height_bound(10, 1) == 49900000001


def test_triangle_lift_is_flat():
    G = triangle()
    emb, a = embed_of(G)
    P = lift(emb, a)
    assert P.heights == {0: 0, 1: 0, 2: 0}
    assert P.facets == G.triangles
    assert P.m == {0: 0, 1: 0, 2: 0}
    assert P.max_height == 0


def test_stacked_k4_heights():
    G = stacked_k4()
    emb, a = embed_of(G)
    assert a.order == (0, 1, 3, 2)
    P = lift(emb, a)
    assert P.heights == {0: 0, 1: 0, 3: 0, 2: 1}
    assert P.m[2] == 0


def test_split_square_heights():
    G = split_square()
    emb, a = embed_of(G)
    P = lift(emb, a)
    assert P.heights == {0: 0, 1: 0, 2: 0, 3: 1}


def test_heights_match_global_oracle():
    # the library clears only the faces its predecessors touch; the oracle
    # clears every face of the prefix -- the two must coincide
    for G, emb, a in small_instances():
        P = lift(emb, a)
        want = oracles.greedy_lift_heights(G, a.order, emb.coords)
        assert P.heights == want, f"n={G.n}"


def test_lift_is_convex():
    for G, emb, a in small_instances():
        P = lift(emb, a)
        assert oracles.lift_locally_convex(P), f"n={G.n}"
        if G.n <= 50:
            assert oracles.lift_globally_convex(P), f"n={G.n}"


def test_height_ceilings_recomputed():
    for G, emb, a in small_instances():
        P = lift(emb, a)
        n = G.n
        pos = a.position()
        adj = G.adjacency()
        for i in range(4, n + 1):
            v = a.order[i - 1]
            mi = max(P.heights[u] for u in adj[v] if pos[u] < i)
            assert P.m[v] == mi
            assert P.heights[v] <= 499 * n**8 * mi + 1
        tau = oracles.tau_by_longest_path(G, a.order)
        assert P.max_height <= (500 * n**8) ** tau
        assert P.height_bits() == max(h.bit_length() for h in P.heights.values())


def test_lift_deterministic():
    G = gen_stacked(30, 9)
    emb, a = embed_of(G)
    assert lift(emb, a) == lift(emb, a)


def test_rejects_non_convex_drawing():
    G = split_square()
    emb, a = embed_of(G)
    v4 = a.order[3]
    bad = dict(emb.coords)
    bad[v4] = (emb.coords[v4][0], max(1, emb.coords[v4][1] // 6))
    with pytest.raises(NotSequentiallyConvex):
        lift(replace(emb, coords=bad), a)


def test_truncate_stacked_k4():
    G = stacked_k4()
    emb, a = embed_of(G)
    Q = truncate_to_polytope(lift(emb, a), emb)
    assert Q.truncated == (0, 1, 2)
    assert set(Q.facets) == {(0, 3, 1), (1, 3, 2), (0, 2, 3), (0, 1, 2)}
    edges = set()
    for t in Q.facets:
        for j in range(3):
            u, v = t[j], t[(j + 1) % 3]
            edges.add((min(u, v), max(u, v)))
    assert len(edges) == 6  # tetrahedron: V - E + F = 4 - 6 + 4 = 2


def test_truncate_triangle_boundary_corpus():
    for G in (stacked_k4(), gen_stacked(9, 2), gen_stacked(40, 6)):
        emb, a = embed_of(G)
        P = lift(emb, a)
        Q = truncate_to_polytope(P, emb)
        assert len(Q.facets) == len(P.facets) + 1
        assert Q.heights == P.heights


def test_truncate_needs_triangle_boundary():
    G = split_square()
    emb, a = embed_of(G)
    with pytest.raises(BoundaryNotTriangle):
        truncate_to_polytope(lift(emb, a), emb)
    # a bare triangle closes into a flat doubled face, not a 3-polytope
    emb3, a3 = embed_of(triangle())
    with pytest.raises(BoundaryNotTriangle):
        truncate_to_polytope(lift(emb3, a3), emb3)

from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

import oracles
from shedpoly.corpus import gen_stacked, pentagon_fan, split_square, stacked_k4, triangle
from shedpoly.exactgeom import slope
from shedpoly.reduction import (
    MalformedTreeSequence,
    build_reduced_triangulation,
    build_shedding_trees,
    dump_tree,
    reduce_trees,
    template_edge,
)
from shedpoly.triangulation import (
    deletion_trace,
    edge_key,
    mirror,
    shedding_sequence,
    validate,
)


def seq_of(G):
    return shedding_sequence(G, G.boundary[0], G.boundary[1])


def pipeline(G, a=None):
    a = a or seq_of(G)
    trees = build_shedding_trees(G, a)
    rs = reduce_trees(trees, a)
    return a, trees, rs


def instances():
    yield triangle()
    yield split_square()
    yield stacked_k4()
    yield pentagon_fan()
    for n, seed in [(7, 11), (10, 12), (16, 13), (30, 14)]:
        yield gen_stacked(n, seed)


# -- shedding trees -------------------------------------------------------------


def test_triangle_tree():
    a, trees, _ = pipeline(triangle())
    assert len(trees) == 2
    t3 = trees[-1]
    assert t3.node_count() == 3
    root = t3.root
    assert root.key == (0, 1)
    assert root.left.key == edge_key(2, 0)
    assert root.right.key == edge_key(2, 1)


def test_square_tree():
    a, trees, _ = pipeline(split_square())
    t4 = trees[-1]
    assert a.order == (0, 1, 2, 3)
    assert t4.node_count() == 5
    # vertex 3 attaches over the chain (0, 2): both new nodes hang off (0, 2)
    xi = t4.store.by_key[(0, 2)]
    assert xi.left.key == (0, 3) and xi.left.step == 4
    assert xi.right.key == (2, 3) and xi.right.step == 4
    assert "(0, 2)" in dump_tree(t4)


def test_tree_node_counts():
    for G in instances():
        a, trees, _ = pipeline(G)
        for tree in trees:
            assert tree.node_count() == 1 + 2 * (tree.upto - 2)


def test_tree_matches_prefix_trees():
    # T_i of (G, a) equals the full tree of the prefix instance (G_i, a[:i])
    from shedpoly.triangulation import prefix_triangulation

    G = gen_stacked(12, 99)
    a, trees, _ = pipeline(G)
    trace = deletion_trace(G, a)
    from shedpoly.triangulation import SheddingSequence

    for i in (5, 8, 12):
        P = prefix_triangulation(trace, i)
        pref = SheddingSequence(a.order[:i], a.degrees[:i], a.base_edge)
        ptrees = build_shedding_trees(P, pref)
        assert ptrees[-1].shape() == trees[i - 2].shape()


# -- reduction -------------------------------------------------------------------


def test_reduce_all_degree_two_is_identity():
    G = split_square()
    a, trees, rs = pipeline(G)
    assert a.degrees == (0, 1, 2, 2)
    assert rs.R == (1, 2, 3, 4)
    for i in range(2, 5):
        assert rs.reduced_shape(i) == trees[i - 2].shape()


def test_reduce_stacked_k4():
    G = stacked_k4()
    a, trees, rs = pipeline(G)
    assert a.degrees == (0, 1, 2, 3)
    assert rs.R == (1, 2, 3)
    assert rs.h == (1, 2, 3, 3)
    assert rs.reduced_node_count(4) == 3
    # T*_4 collapses to T_3
    assert rs.reduced_shape(4) == trees[1].shape()
    # the contracted step-4 nodes represent the surviving step-3 edges
    assert rs.rep[(0, 2)] == (0, 3)
    assert rs.rep[(1, 2)] == (1, 3)


def full_binary(shape) -> bool:
    if shape is None:
        return True
    l, r = shape
    if (l is None) != (r is None):
        return False
    return full_binary(l) and full_binary(r)


def test_reduced_trees_full_binary():
    for G in instances():
        _, _, rs = pipeline(G)
        for i in range(2, rs.n + 1):
            assert full_binary(rs.reduced_shape(i))
            expected = 1 if i == 2 else 1 + 2 * (rs.h_of(i) - 2)
            assert rs.reduced_node_count(i) == expected


def test_rho_h_consistency():
    for G in instances():
        _, _, rs = pipeline(G)
        assert rs.R[:3] == (1, 2, 3)
        for i in rs.R:
            assert rs.h_of(i) == rs.rho[i]
        for i in range(1, rs.n + 1):
            assert rs.h_of(i) == sum(1 for r in rs.R if r <= i)


# -- reduced triangulation -------------------------------------------------------


def test_base_case_coordinates():
    for G in (triangle(), stacked_k4()):
        _, _, rs = pipeline(G)
        rt = build_reduced_triangulation(rs)
        assert rt.size == 3
        assert rt.m == 0 and rt.mprime == 0
        assert rt.Gstar.coords == {0: (-1, 0), 1: (1, 0), 2: (0, 1)}


def mirrored_pipeline(G):
    a = seq_of(G)
    M = mirror(G)
    trees = build_shedding_trees(M, a)
    rs = reduce_trees(trees, a)
    return rs


def rt_for(G):
    _, _, rs = pipeline(G)
    try:
        return build_reduced_triangulation(rs)
    except MalformedTreeSequence:
        return build_reduced_triangulation(mirrored_pipeline(G))


def test_left_heavy_raises_and_mirror_recovers():
    G = pentagon_fan()
    _, _, rs = pipeline(G)
    assert rs.internal_counts() == (2, 0)
    with pytest.raises(MalformedTreeSequence):
        build_reduced_triangulation(rs)
    rt = build_reduced_triangulation(mirrored_pipeline(G))
    assert (rt.m, rt.mprime) == (0, 2)
    assert validate(rt.Gstar) == []


def test_reduced_triangulation_properties():
    for G in instances():
        rt = rt_for(G)
        R = rt.size
        Gs = rt.Gstar
        assert validate(Gs) == []
        assert rt.m <= rt.mprime and rt.m + rt.mprime + 3 == R
        xs = [xy[0] for xy in Gs.coords.values()]
        ys = [xy[1] for xy in Gs.coords.values()]
        # bounds: width within 2(R-2), height within C(R-1, 2)
        assert max(xs) - min(xs) == 2 * (rt.mprime + 1) <= 2 * (R - 2)
        assert max(ys) - min(ys) == comb(rt.mprime + 2, 2) <= comb(R - 1, 2)
        # all vertices on the arc y = C(m'+2,2) - C(|x|+1,2)
        for x, y in Gs.coords.values():
            assert y == comb(rt.mprime + 2, 2) - comb(abs(x) + 1, 2)
        # boundary slopes strictly decreasing over the base
        cyc = Gs.boundary
        chain = [0] + [cyc[len(cyc) - 1 - j] for j in range(len(cyc) - 2)] + [1]
        slopes = [
            slope(Gs.coords[chain[j]], Gs.coords[chain[j + 1]])
            for j in range(len(chain) - 1)
        ]
        assert all(s1 > s2 for s1, s2 in zip(slopes, slopes[1:]))
        if rt.m <= rt.mprime:
            assert slopes[0] == Fraction(rt.m + rt.mprime + 2, 2) >= rt.m + 1
        # astar really is a shedding sequence of Gstar
        deletion_trace(Gs, rt.astar, check=True)
        if R <= 7:
            assert oracles.is_shedding_sequence(Gs, rt.astar.order)


def test_template_tree_isomorphism():
    # the shedding trees of G* replay the distinct contracted trees of G
    for G in instances():
        rt = rt_for(G)
        rs = rt.rs
        star_trees = build_shedding_trees(rt.Gstar, rt.astar)
        for i in range(2, rs.n + 1):
            h = rs.h_of(i) if i >= 3 else 1
            if i == 2:
                continue
            assert rs.reduced_shape(i) == star_trees[h - 2].shape(), (repr(G), i)


def test_template_edge_lookup():
    G = stacked_k4()
    a, trees, rs = pipeline(G)
    rt = build_reduced_triangulation(rs)
    assert template_edge(rt, (0, 1)) == (0, 1)
    assert template_edge(rt, (0, 3)) == (2, 0)
    assert template_edge(rt, (1, 3)) == (2, 1)
    # contracted step-4 edges inherit their ancestors' template edges
    assert template_edge(rt, (0, 2)) == (2, 0)
    assert template_edge(rt, (1, 2)) == (2, 1)

"""Shedding trees, their degree-2 reduction, and the convex template triangulation.

Every boundary edge that ever appears while deleting a shedding sequence
becomes a node of a growing binary tree: when step i attaches vertex a_i over
the chain w_1..w_k, the new boundary edge a_i w_1 hangs as the *left* child of
the node for w_1 w_2, and a_i w_k as the *right* child of the node for
w_{k-1} w_k.  Contracting every node created at a step of degree > 2 leaves a
full binary tree whose shape is realizable by a small convex triangulation on
a lattice parabola -- the template that the integer-grid embedding tracks.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .triangulation import (
    DeletionTrace,
    PlaneTriangulation,
    SheddingSequence,
    deletion_trace,
    edge_key,
)

EdgeKey = tuple[int, int]


class MalformedTreeSequence(Exception):
    """Tree-sequence hypotheses (node counts, fullness, balance) violated."""


class TreeNode:
    __slots__ = ("key", "step", "parent", "side", "left", "right")

    def __init__(self, key: EdgeKey, step: int, parent: Optional["TreeNode"], side: Optional[str]):
        self.key = key
        self.step = step
        self.parent = parent
        self.side = side  # 'L' | 'R' | None for the root
        self.left: Optional[TreeNode] = None
        self.right: Optional[TreeNode] = None

    def __repr__(self) -> str:
        return f"TreeNode({self.key}, step={self.step})"


class TreeStore:
    """Shared node store for the whole family T_2..T_n."""

    def __init__(self, root_key: EdgeKey):
        self.root = TreeNode(root_key, 2, None, None)
        self.by_key: dict[EdgeKey, TreeNode] = {root_key: self.root}
        # created[i] = (left-attached node, right-attached node) for step i >= 3
        self.created: dict[int, tuple[TreeNode, TreeNode]] = {}

    def add_pair(self, i: int, nu_key: EdgeKey, xi_key: EdgeKey, nup_key: EdgeKey, xip_key: EdgeKey):
        xi = self.by_key[xi_key]
        xip = self.by_key[xip_key]
        if nu_key in self.by_key or nup_key in self.by_key:
            raise MalformedTreeSequence(f"edge node created twice at step {i}")
        if xi.left is not None or xip.right is not None:
            raise MalformedTreeSequence(f"child slot already taken at step {i}")
        nu = TreeNode(nu_key, i, xi, "L")
        nup = TreeNode(nup_key, i, xip, "R")
        xi.left = nu
        xip.right = nup
        self.by_key[nu_key] = nu
        self.by_key[nup_key] = nup
        self.created[i] = (nu, nup)


@dataclass(frozen=True)
class SheddingTree:
    """View of the tree T_i: the nodes of the shared store with step <= i."""

    store: TreeStore
    upto: int

    @property
    def root(self) -> TreeNode:
        return self.store.root

    def nodes(self) -> list[TreeNode]:
        return [nd for nd in self.store.by_key.values() if nd.step <= self.upto]

    def node_count(self) -> int:
        return sum(1 for nd in self.store.by_key.values() if nd.step <= self.upto)

    def contains(self, key: EdgeKey) -> bool:
        nd = self.store.by_key.get(key)
        return nd is not None and nd.step <= self.upto

    def child(self, node: TreeNode, side: str) -> Optional[TreeNode]:
        c = node.left if side == "L" else node.right
        return c if c is not None and c.step <= self.upto else None

    def shape(self, node: Optional[TreeNode] = None):
        """Canonical nested-tuple form (left, right), None for an absent child."""
        if node is None:
            node = self.root
        l = self.child(node, "L")
        r = self.child(node, "R")
        return (
            self.shape(l) if l is not None else None,
            self.shape(r) if r is not None else None,
        )


def build_shedding_trees(
    G: PlaneTriangulation,
    a: SheddingSequence,
    trace: Optional[DeletionTrace] = None,
) -> tuple[SheddingTree, ...]:
    """The trees T_2..T_n of (G, a).

    T_i records the boundary-edge history of the prefix G_i; node identity is
    the undirected edge.  Left/right is combinatorial (from the boundary-cycle
    orientation), so no embedding is needed.
    """
    if trace is None:
        trace = deletion_trace(G, a)
    n = trace.n
    a1, a2, a3 = trace.order[0], trace.order[1], trace.order[2]
    store = TreeStore(edge_key(a1, a2))
    for i in range(3, n + 1):
        ai = trace.order[i - 1]
        if i == 3:
            cyc = trace.base_boundary
            j = cyc.index(a3)
            link = (cyc[(j + 1) % 3], cyc[(j + 2) % 3])
        else:
            link = trace.link(i)
        w1, w2 = link[0], link[1]
        wk1, wk = link[-2], link[-1]
        store.add_pair(
            i,
            edge_key(ai, w1),
            edge_key(w1, w2),
            edge_key(ai, wk),
            edge_key(wk1, wk),
        )
    return tuple(SheddingTree(store, i) for i in range(2, n + 1))


@dataclass(frozen=True)
class ReducedStructure:
    """Index set R, rank maps, and the edge contraction of the tree family."""

    trees: tuple[SheddingTree, ...]
    R: tuple[int, ...]
    rho: dict[int, int]
    h: tuple[int, ...]  # h[i-1] = #{r in R : r <= i}
    rep: dict[EdgeKey, EdgeKey]
    # pairs[q] = (reduced-parent key, left node key, right node key) for q >= 3,
    # where q = rho(original step)
    pairs: dict[int, tuple[EdgeKey, EdgeKey, EdgeKey]]

    @property
    def store(self) -> TreeStore:
        return self.trees[-1].store

    @property
    def n(self) -> int:
        return self.trees[-1].upto

    def h_of(self, i: int) -> int:
        return self.h[i - 1]

    def original_step(self, q: int) -> int:
        return self.R[q - 1]

    def reduced_node_count(self, i: int) -> int:
        rset = set(self.R)
        return sum(
            1 for nd in self.store.by_key.values() if nd.step <= i and nd.step in rset
        )

    def reduced_children(self, key: EdgeKey, i: int) -> tuple[Optional[EdgeKey], Optional[EdgeKey]]:
        """Left/right child keys of a surviving node in the contracted tree T*_i."""
        for q, (pk, lk, rk) in self.pairs.items():
            if pk == key and self.original_step(q) <= i:
                return lk, rk
        return None, None

    def reduced_shape(self, i: int, key: Optional[EdgeKey] = None):
        if key is None:
            key = self.store.root.key
        lk, rk = self.reduced_children(key, i)
        return (
            self.reduced_shape(i, lk) if lk is not None else None,
            self.reduced_shape(i, rk) if rk is not None else None,
        )

    def internal_counts(self) -> tuple[int, int]:
        """(m, m'): internal nodes strictly left/right of the root in the final
        contracted tree's in-order traversal."""
        order = self._internal_inorder()
        root_rank = order.index(self.store.root.key)
        return root_rank, len(order) - 1 - root_rank

    def _internal_inorder(self) -> list[EdgeKey]:
        """Keys of internal nodes of T*_n, in in-order (left subtree, node, right)."""
        parents = {pk for pk, _, _ in self.pairs.values()}
        out: list[EdgeKey] = []

        def walk(key: EdgeKey):
            lk, rk = self.reduced_children(key, self.n)
            if lk is not None:
                walk(lk)
            if key in parents:
                out.append(key)
            if rk is not None:
                walk(rk)

        walk(self.store.root.key)
        return out


def reduce_trees(trees: tuple[SheddingTree, ...], a: SheddingSequence) -> ReducedStructure:
    """Contract every tree edge whose child node was created at a step of
    degree > 2.  Returns the bookkeeping the template construction needs."""
    store = trees[-1].store
    n = trees[-1].upto
    R = [1, 2, 3] + [i for i in range(4, n + 1) if a.degrees[i - 1] == 2]
    rset = set(R)
    rho = {i: q + 1 for q, i in enumerate(R)}
    h = []
    cnt = 0
    for i in range(1, n + 1):
        if i in rset:
            cnt += 1
        h.append(cnt)

    rep_cache: dict[EdgeKey, EdgeKey] = {}

    def rep(node: TreeNode) -> EdgeKey:
        chain = []
        while node.step not in rset:
            chain.append(node.key)
            node = node.parent
        for k in chain:
            rep_cache[k] = node.key
        rep_cache[node.key] = node.key
        return node.key

    for nd in store.by_key.values():
        rep(nd)

    pairs: dict[int, tuple[EdgeKey, EdgeKey, EdgeKey]] = {}
    seen_parents: set[EdgeKey] = set()
    for i in R:
        if i < 3:
            continue
        nu, nup = store.created[i]
        pk = rep(nu.parent)
        pk2 = rep(nup.parent)
        if pk != pk2:
            raise MalformedTreeSequence(
                f"step {i}: the two new nodes contract to different parents"
            )
        if pk in seen_parents:
            raise MalformedTreeSequence(f"step {i}: parent {pk} already internal")
        seen_parents.add(pk)
        pairs[rho[i]] = (pk, nu.key, nup.key)

    rs = ReducedStructure(trees, tuple(R), rho, tuple(h), rep_cache, pairs)

    # hypothesis checks: every contracted tree is the right size and full
    for i in range(2, n + 1):
        expect = 1 + 2 * (h[i - 1] - 2) if i >= 3 else 1
        got = rs.reduced_node_count(i)
        if got != expect:
            raise MalformedTreeSequence(f"T*_{i} has {got} nodes, expected {expect}")
    return rs


@dataclass(frozen=True)
class ReducedTriangulation:
    """The template G*: a convex triangulation on a lattice parabola whose
    shedding trees are exactly the contracted trees of the instance.

    Vertex id q-1 plays the role of the q-th template vertex; astar is its
    (all-degree-2) shedding sequence.  psi maps every surviving tree node to
    the template edge it stands for.
    """

    Gstar: PlaneTriangulation
    astar: SheddingSequence
    m: int
    mprime: int
    omega: dict[int, int]
    f: dict[int, int]
    g: dict[int, int]
    psi: dict[EdgeKey, tuple[int, int]]
    rs: ReducedStructure = field(repr=False)

    @property
    def size(self) -> int:
        return self.Gstar.n


def build_reduced_triangulation(rs: ReducedStructure) -> ReducedTriangulation:
    """Realize the final contracted tree as a convex lattice triangulation.

    Internal nodes, taken in in-order, get consecutive x positions with the
    root pinned at x=0 (m internals to its left, m' to its right, m <= m'
    required); every vertex sits on the concave lattice arc
    y = C(m'+2, 2) - C(|x|+1, 2), so all boundary slopes strictly decrease.
    Raises MalformedTreeSequence when m > m' -- callers mirror the instance
    and rebuild rather than juggling swapped labels.
    """
    Rn = len(rs.R)
    m, mprime = rs.internal_counts()
    if m > mprime:
        raise MalformedTreeSequence(f"left-heavy tree (m={m} > m'={mprime}); mirror the instance")

    inorder = rs._internal_inorder()
    rank_of_key = {k: r for r, k in enumerate(inorder)}
    # creation order: q = 3 is the root, q >= 4 from pairs
    key_of_q = {3: rs.store.root.key}
    for q, (pk, _, _) in rs.pairs.items():
        if q >= 4:
            key_of_q[q] = pk
    omega = {q: 3 + rank_of_key[key_of_q[q]] for q in range(3, Rn + 1)}

    # f/g: nearest already-present internal to the left/right in the in-order,
    # defaulting to the base vertices 1 and 2
    f: dict[int, int] = {}
    g: dict[int, int] = {}
    present: list[tuple[int, int]] = []  # sorted (omega, q)
    for q in range(3, Rn + 1):
        w = omega[q]
        lo = None
        hi = None
        for w2, q2 in present:
            if w2 < w:
                lo = q2
            elif hi is None:
                hi = q2
                break
        f[q] = lo if lo is not None else 1
        g[q] = hi if hi is not None else 2
        insort(present, (w, q))

    ytop = comb(mprime + 2, 2)

    def point(q: int) -> tuple[int, int]:
        if q == 1:
            return (-(mprime + 1), 0)
        if q == 2:
            return (mprime + 1, 0)
        k = omega[q] - m - 3
        return (k, ytop - comb(abs(k) + 1, 2))

    coords = {q - 1: point(q) for q in range(1, Rn + 1)}
    tris = [(f[q] - 1, g[q] - 1, q - 1) for q in range(3, Rn + 1)]
    chain = sorted(range(3, Rn + 1), key=lambda q: -omega[q])
    boundary = (0, 1) + tuple(q - 1 for q in chain)
    Gstar = PlaneTriangulation(range(Rn), tris, boundary, coords)
    astar = SheddingSequence(
        tuple(range(Rn)), (0, 1) + (2,) * (Rn - 2), (0, 1)
    )

    psi: dict[EdgeKey, tuple[int, int]] = {rs.store.root.key: (0, 1)}
    for q, (_, lk, rk) in rs.pairs.items():
        psi[lk] = (q - 1, f[q] - 1)
        psi[rk] = (q - 1, g[q] - 1)

    return ReducedTriangulation(Gstar, astar, m, mprime, omega, f, g, psi, rs)


def template_edge(rt: ReducedTriangulation, key: EdgeKey) -> tuple[int, int]:
    """Template edge Z(e) for an edge e of G that is a node of some T_i:
    follow the contraction to the surviving node, then psi."""
    return rt.psi[rt.rs.rep[key]]


def dump_tree(tree: SheddingTree) -> str:
    """Stable indented text form of a tree, for debugging."""
    lines: list[str] = []

    def walk(node: TreeNode, depth: int, tag: str):
        lines.append(f"{'  ' * depth}{tag}{node.key} @{node.step}")
        l = tree.child(node, "L")
        r = tree.child(node, "R")
        if l is not None:
            walk(l, depth + 1, "L ")
        if r is not None:
            walk(r, depth + 1, "R ")

    walk(tree.root, 0, "")
    return "\n".join(lines)

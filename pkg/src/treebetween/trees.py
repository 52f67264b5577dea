"""Finite rooted forests as partial orders, and marked join-trees.

The order convention follows ancestor relations: x <= y iff y lies on the
path from a root down to x, so roots are maximal, leaves minimal, and the
join x | y of two nodes of one tree is their lowest common ancestor.  Every
finite rooted tree is a join-tree.

A marked join-tree partitions its nodes into plain nodes V_T and internal
nodes marked "oplus" or "otimes"; the betweenness relation it defines on V_T
suppresses every triple whose outer join is oplus-marked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from treebetween.core import Graph, OPLUS, OTIMES, PLAIN, TernaryStructure


class RootedForest:
    """Rooted forest on nodes 0..n-1 given by a parent map (roots map to None)."""

    __slots__ = ("parent", "_children", "_depth")

    def __init__(self, parents):
        parent = tuple(parents)
        n = len(parent)
        children = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if p is None:
                continue
            if not (0 <= p < n) or p == v:
                raise ValueError(f"bad parent {p} for node {v}")
            children[p].append(v)
        depth = [None] * n
        for v in range(n):
            chain = []
            u = v
            while u is not None and depth[u] is None:
                chain.append(u)
                u = parent[u]
                if len(chain) > n:
                    raise ValueError("parent relation is cyclic")
            base = 0 if u is None else depth[u] + 1
            for w in reversed(chain):
                depth[w] = base
                base += 1
        self.parent = parent
        self._children = tuple(tuple(c) for c in children)
        self._depth = tuple(depth)

    @property
    def n(self):
        return len(self.parent)

    def __eq__(self, other):
        return isinstance(other, RootedForest) and self.parent == other.parent

    def __hash__(self):
        return hash(self.parent)

    def __repr__(self):
        return f"RootedForest({list(self.parent)})"

    def roots(self):
        return tuple(v for v, p in enumerate(self.parent) if p is None)

    def sons(self, v):
        return self._children[v]

    def degree(self, v):
        """Number of sons; 0 exactly for leaves."""
        return len(self._children[v])

    def leaves(self):
        return tuple(v for v in range(self.n) if not self._children[v])

    def depth(self, v):
        return self._depth[v]

    def ancestors(self, v):
        """Chain v, parent(v), ..., root."""
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def is_leq(self, x, y):
        """x <= y iff y is an ancestor of x (or x itself)."""
        while x is not None:
            if x == y:
                return True
            x = self.parent[x]
        return False

    def join(self, x, y):
        """Least upper bound, or None when x and y lie in different trees."""
        up = set(self.ancestors(x))
        v = y
        while v is not None:
            if v in up:
                return v
            v = self.parent[v]
        return None

    def subtree(self, u):
        """Node set of the subtree issued from u."""
        out = []
        stack = [u]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self._children[v])
        return frozenset(out)

    def incomparable(self, x, y):
        return not self.is_leq(x, y) and not self.is_leq(y, x)


class MarkedJoinTree:
    """Single-rooted forest whose nodes carry marks plain / oplus / otimes.

    Marked nodes must be internal.  The tree is *reduced* when no marked node
    has exactly one son; `reduce()` splices such nodes out without changing
    the betweenness structure.
    """

    __slots__ = ("forest", "marks")

    def __init__(self, parents, marks):
        forest = RootedForest(parents)
        marks = tuple(marks)
        if len(marks) != forest.n:
            raise ValueError("one mark per node required")
        if len(forest.roots()) != 1:
            raise ValueError("marked join-tree needs exactly one root")
        for v, m in enumerate(marks):
            if m not in (PLAIN, OPLUS, OTIMES):
                raise ValueError(f"unknown mark {m!r}")
            if m != PLAIN and forest.degree(v) == 0:
                raise ValueError(f"marked node {v} is a leaf")
        self.forest = forest
        self.marks = marks

    @property
    def size(self):
        return self.forest.n

    def __eq__(self, other):
        return (
            isinstance(other, MarkedJoinTree)
            and self.forest == other.forest
            and self.marks == other.marks
        )

    def __hash__(self):
        return hash((self.forest, self.marks))

    def __repr__(self):
        return f"MarkedJoinTree({list(self.forest.parent)}, {list(self.marks)})"

    def root(self):
        return self.forest.roots()[0]

    def plain_nodes(self):
        """Plain nodes in increasing id order; fixes the domain re-indexing."""
        return tuple(v for v in range(self.size) if self.marks[v] == PLAIN)

    def is_reduced(self):
        return all(
            self.marks[v] == PLAIN or self.forest.degree(v) >= 2
            for v in range(self.size)
        )

    def reduce(self):
        """Splice out marked single-son nodes until none remain.

        Returns (reduced tree, kept) where kept[new_id] = old id.  Betweenness
        is unchanged: a single-son marked node is never the join of two
        incomparable plain nodes.
        """
        parent = list(self.forest.parent)
        marks = list(self.marks)
        n = len(parent)
        alive = [True] * n
        children = [set(self.forest.sons(v)) for v in range(n)]
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if alive[v] and marks[v] != PLAIN and len(children[v]) == 1:
                    (child,) = children[v]
                    p = parent[v]
                    parent[child] = p
                    if p is not None:
                        children[p].discard(v)
                        children[p].add(child)
                    alive[v] = False
                    changed = True
        kept = tuple(v for v in range(n) if alive[v])
        index = {old: new for new, old in enumerate(kept)}
        new_parent = [
            None if parent[old] is None else index[parent[old]] for old in kept
        ]
        new_marks = [marks[old] for old in kept]
        return MarkedJoinTree(new_parent, new_marks), kept

    def drop_subtrees(self, cut_nodes):
        """Delete the whole subtrees issued from `cut_nodes` (not the root).

        The inclusion of the remaining nodes is a join-embedding, so the
        betweenness of the result equals the original one restricted to the
        surviving plain nodes.  Returns (tree, kept).
        """
        dead = set()
        for u in cut_nodes:
            dead |= self.forest.subtree(u)
        if self.root() in dead:
            raise ValueError("cannot delete the root subtree")
        kept = tuple(v for v in range(self.size) if v not in dead)
        index = {old: new for new, old in enumerate(kept)}
        parent = [
            None if self.forest.parent[old] is None else index[self.forest.parent[old]]
            for old in kept
        ]
        marks = [self.marks[old] for old in kept]
        tree, kept2 = _without_sonless_marks(parent, marks)
        return tree, tuple(kept[i] for i in kept2)


def _without_sonless_marks(parent, marks):
    """Build a MarkedJoinTree, first deleting marked nodes left sonless.

    A marked node stripped of all its sons is never the join of two plain
    nodes, so removing it keeps the betweenness structure intact.
    """
    n = len(parent)
    children = [set() for _ in range(n)]
    for v, p in enumerate(parent):
        if p is not None:
            children[p].add(v)
    alive = [True] * n
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if alive[v] and marks[v] != PLAIN and not children[v]:
                alive[v] = False
                if parent[v] is not None:
                    children[parent[v]].discard(v)
                changed = True
    kept = tuple(v for v in range(n) if alive[v])
    if not kept:
        raise ValueError("no plain node survives the deletion")
    index = {old: new for new, old in enumerate(kept)}
    new_parent = [None if parent[o] is None else index[parent[o]] for o in kept]
    new_marks = [marks[o] for o in kept]
    return MarkedJoinTree(new_parent, new_marks), kept


def restrict_to_plains(T, keep):
    """Marked tree defining the betweenness of T restricted to plain nodes `keep`.

    Deletes every maximal subtree containing no kept node, turns surviving
    plain nodes outside `keep` into otimes marks (such nodes are internal and
    never oplus-suppress a join), and reduces.  Returns (tree, node_of) with
    node_of mapping each kept original node to its node in the new tree.
    """
    keep = set(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    plains = set(T.plain_nodes())
    if not keep <= plains:
        raise ValueError("keep must consist of plain nodes")
    F = T.forest
    has_kept = [bool(F.subtree(v) & keep) for v in range(T.size)]
    cuts = [
        v
        for v in range(T.size)
        if not has_kept[v] and F.parent[v] is not None and has_kept[F.parent[v]]
    ]
    pruned, kept1 = T.drop_subtrees(cuts)
    marks = [
        OTIMES
        if pruned.marks[v] == PLAIN and kept1[v] not in keep
        else pruned.marks[v]
        for v in range(pruned.size)
    ]
    remarked = MarkedJoinTree(pruned.forest.parent, marks)
    reduced, kept2 = remarked.reduce()
    node_of = {}
    for new, old1 in enumerate(kept2):
        orig = kept1[old1]
        if orig in keep:
            node_of[orig] = new
    return reduced, node_of


def betweenness_forest(F):
    """Betweenness relation of a rooted forest, over all its nodes.

    B(x,y,z) iff x,y,z are pairwise distinct and x < y <= x|z or
    z < y <= x|z; pairs without a join contribute nothing.
    """
    n = F.n
    triples = set()
    for x, z in itertools.combinations(range(n), 2):
        j = F.join(x, z)
        if j is None:
            continue
        for y in range(n):
            if y == x or y == z:
                continue
            if (_strictly_below(F, x, y) or _strictly_below(F, z, y)) and F.is_leq(
                y, j
            ):
                triples.add((x, y, z))
                triples.add((z, y, x))
    return TernaryStructure(n, triples)


def _strictly_below(F, x, y):
    return x != y and F.is_leq(x, y)


def betweenness_marked(T):
    """Betweenness structure of a marked join-tree, over its plain nodes.

    The domain is re-indexed: element i of the result is T.plain_nodes()[i].
    Triples whose outer join is oplus-marked are suppressed.
    """
    plains = T.plain_nodes()
    index = {v: i for i, v in enumerate(plains)}
    F = T.forest
    triples = set()
    for x, z in itertools.combinations(plains, 2):
        j = F.join(x, z)
        if T.marks[j] == OPLUS:
            continue
        for y in plains:
            if y == x or y == z:
                continue
            if (_strictly_below(F, x, y) or _strictly_below(F, z, y)) and F.is_leq(
                y, j
            ):
                triples.add((index[x], index[y], index[z]))
                triples.add((index[z], index[y], index[x]))
    return TernaryStructure(len(plains), triples)


def join(F, x, y):
    """Least common upper bound in a forest, None across trees."""
    return F.join(x, y)


@dataclass(frozen=True)
class JoinCompletion:
    """Join-completion of a forest: nodes are upward-closed lines.

    `sets[i]` is the set of original nodes represented by completion node i;
    `h[x]` embeds original node x as the line of its ancestors.
    """

    forest: RootedForest
    sets: tuple
    h: tuple


def join_completion(F, artificial_top=True):
    """Complete a forest by the intersections of ancestor lines.

    The node set is { L(x) & L(y) : x, y nodes } with L(x) the ancestor line
    of x, ordered by reverse inclusion.  For a multi-tree forest the empty
    intersection acts as an artificial top and makes the result one tree;
    pass artificial_top=False to drop it and keep one tree per input tree.
    """
    lines = [frozenset(F.ancestors(x)) for x in range(F.n)]
    family = set()
    for x in range(F.n):
        for y in range(x, F.n):
            family.add(lines[x] & lines[y])
    if frozenset() in family and not artificial_top:
        family.discard(frozenset())
    nodes = sorted(family, key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(nodes)}
    parent = []
    for s in nodes:
        subs = [t for t in nodes if t < s]
        if subs:
            parent.append(index[max(subs, key=len)])
        else:
            parent.append(None)
    return JoinCompletion(
        RootedForest(parent), tuple(nodes), tuple(index[lines[x]] for x in range(F.n))
    )


def cocomparability(F):
    """Graph on the nodes with an edge exactly between incomparable pairs."""
    edges = [
        (x, y)
        for x, y in itertools.combinations(range(F.n), 2)
        if F.incomparable(x, y)
    ]
    return Graph(F.n, edges)


# ---------------------------------------------------------------------------
# Random generators for tests and demos.
# ---------------------------------------------------------------------------


def random_tree(rng, n):
    """Random recursive tree: node i > 0 hangs under a uniform earlier node."""
    return RootedForest([None] + [rng.randrange(i) for i in range(1, n)])


def random_forest(rng, n, new_root_prob=0.25):
    parents = [None]
    for i in range(1, n):
        parents.append(None if rng.random() < new_root_prob else rng.randrange(i))
    return RootedForest(parents)


def random_marked_tree(rng, n, allow_oplus=True):
    """Random marked join-tree on n nodes; leaves always plain."""
    F = random_tree(rng, n)
    pool = (PLAIN, OPLUS, OTIMES) if allow_oplus else (PLAIN, OTIMES)
    marks = [
        rng.choice(pool) if F.degree(v) > 0 else PLAIN for v in range(n)
    ]
    return MarkedJoinTree(F.parent, marks)

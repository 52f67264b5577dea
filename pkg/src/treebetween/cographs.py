"""Cographs, partitioned probe cographs and probe cographs.

Cographs are the P4-free graphs, generated from single vertices by disjoint
union (oplus) and complete join (otimes).  A partitioned probe cograph
(pp-cograph) is a 2-graph obtained from a cograph by deleting every edge
between two 1-vertices; its six minimal forbidden induced 2-graphs are the
labelled paths of types 11, 2222, 1222, 2122, 21212 and the 5-vertex graph Q
(path of type 12221 plus the chord between the two inner 2-vertices next to
the ends).  A probe cograph admits some labelling making it a pp-cograph.

Recognition here is by the six-bound matcher; `pp_completion` is the
independent constructive route (search for a P4-free completion), kept
deliberately separate so the two can cross-validate each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from treebetween.core import Graph, OPLUS, OTIMES, TwoGraph


@dataclass(frozen=True)
class Leaf:
    """Term leaf naming one vertex; pp-term leaves carry a {1,2} label."""

    vertex: int
    label: int | None = None


@dataclass(frozen=True)
class Node:
    """Internal term node: op is "oplus" or "otimes", arity at least 2."""

    op: str
    children: tuple

    def __post_init__(self):
        if self.op not in (OPLUS, OTIMES):
            raise ValueError(f"unknown operation {self.op!r}")
        if len(self.children) < 2:
            raise ValueError("internal term nodes need at least 2 children")


def oplus(*children):
    return Node(OPLUS, tuple(children))


def otimes(*children):
    return Node(OTIMES, tuple(children))


def term_vertices(t):
    if isinstance(t, Leaf):
        return [t.vertex]
    out = []
    for c in t.children:
        out.extend(term_vertices(c))
    return out


def eval_cograph_term(t):
    """Graph denoted by a term over oplus/otimes.

    Vertices are re-indexed densely in left-to-right leaf order; duplicate
    vertex names are rejected.
    """
    names = term_vertices(t)
    if len(set(names)) != len(names):
        raise ValueError("duplicate vertex name in term")
    index = {v: i for i, v in enumerate(names)}
    edges = []

    def walk(t):
        if isinstance(t, Leaf):
            return [t.vertex]
        parts = [walk(c) for c in t.children]
        if t.op == OTIMES:
            for a, b in itertools.combinations(parts, 2):
                for u, v in itertools.product(a, b):
                    edges.append((index[u], index[v]))
        return [v for p in parts for v in p]

    walk(t)
    return Graph(len(names), edges)


def eval_pp_term(t):
    """2-graph denoted by a pp-term: otimes omits the 1-1 cross edges."""
    names = term_vertices(t)
    if len(set(names)) != len(names):
        raise ValueError("duplicate vertex name in term")
    index = {v: i for i, v in enumerate(names)}
    labels = {}
    edges = []

    def walk(t):
        if isinstance(t, Leaf):
            if t.label not in (1, 2):
                raise ValueError("pp-term leaves need a label in {1, 2}")
            labels[t.vertex] = t.label
            return [t.vertex]
        parts = [walk(c) for c in t.children]
        if t.op == OTIMES:
            for a, b in itertools.combinations(parts, 2):
                for u, v in itertools.product(a, b):
                    if labels[u] == 1 and labels[v] == 1:
                        continue
                    edges.append((index[u], index[v]))
        return [v for p in parts for v in p]

    walk(t)
    return TwoGraph(Graph(len(names), edges), [labels[v] for v in names])


def is_cograph(G):
    """True iff G has no induced P4."""
    return not _has_induced_p4(G)


def _has_induced_p4(G):
    adj = G.adj
    for quad in itertools.combinations(range(G.n), 4):
        degs = []
        cnt = 0
        for v in quad:
            d = 0
            for u in quad:
                if u != v and adj[v] >> u & 1:
                    d += 1
            degs.append(d)
            cnt += d
        if cnt == 6 and sorted(degs) == [1, 1, 2, 2]:
            return True
    return False


def cotree(G):
    """A term over oplus/otimes evaluating to G, or None when G has a P4.

    Recursive split: a disconnected graph is the oplus of its components, a
    co-disconnected one the otimes of its co-components; a graph where
    neither applies and n > 1 is no cograph.
    """

    def build(vertices):
        if len(vertices) == 1:
            return Leaf(vertices[0])
        sub = G.induced(vertices)
        for op, comps in ((OPLUS, sub.components()), (OTIMES, sub.complement().components())):
            if len(comps) > 1:
                parts = tuple(build([vertices[i] for i in c]) for c in comps)
                if any(p is None for p in parts):
                    return None
                return Node(op, parts)
        return None

    if G.n == 0:
        raise ValueError("empty graph has no defining term")
    return build(list(range(G.n)))


# ---------------------------------------------------------------------------
# The six pp-cograph bounds and the induced-pattern scans.
# ---------------------------------------------------------------------------


def labelled_path(type_word):
    """Path whose i-th vertex carries the i-th letter of `type_word`."""
    word = [int(c) for c in str(type_word)]
    return TwoGraph(Graph.path(len(word)), word)


def q_graph():
    """Path a-b-c-d-e of type 12221 augmented with the edge b-d."""
    return TwoGraph(
        Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]), (1, 2, 2, 2, 1)
    )


def pp_bounds():
    """The six minimal forbidden induced 2-graphs of pp-cographs."""
    return [
        labelled_path("11"),
        labelled_path("2222"),
        labelled_path("1222"),
        labelled_path("2122"),
        labelled_path("21212"),
        q_graph(),
    ]


_BAD_P4_TYPES = {"2222", "1222", "2221", "2122", "2212"}


def induced_paths(G, k):
    """Induced paths on k vertices as tuples, one orientation per path."""
    adj = G.adj
    out = []

    def extend(path, used_mask):
        if len(path) == k:
            if path[0] < path[-1]:
                out.append(tuple(path))
            return
        last = path[-1]
        forbid = 0
        for v in path[:-1]:
            forbid |= adj[v]
        for u in range(G.n):
            if used_mask >> u & 1:
                continue
            if adj[last] >> u & 1 and not forbid >> u & 1:
                path.append(u)
                extend(path, used_mask | 1 << u)
                path.pop()

    for v in range(G.n):
        extend([v], 1 << v)
    return out


def induced_bulls(G):
    """Induced copies of the Q shape (triangle b,c,d with pendants a on b and
    e on d), as tuples (a, b, c, d, e) with a < e."""
    adj = G.adj
    out = []
    n = G.n
    for b, c, d in itertools.permutations(range(n), 3):
        if b > d:
            continue
        if not (adj[b] >> c & 1 and adj[c] >> d & 1 and adj[b] >> d & 1):
            continue
        for a in range(n):
            if a in (b, c, d) or not adj[b] >> a & 1:
                continue
            if adj[a] >> c & 1 or adj[a] >> d & 1:
                continue
            for e in range(n):
                if e in (a, b, c, d) or not adj[d] >> e & 1:
                    continue
                if adj[e] >> b & 1 or adj[e] >> c & 1 or adj[e] >> a & 1:
                    continue
                key = (a, b, c, d, e) if a < e else (e, d, c, b, a)
                out.append(key)
    return sorted(set(out))


@dataclass(frozen=True)
class _PatternScan:
    """Per-graph pattern lists reused across many labellings of one graph."""

    p4s: tuple
    p5s: tuple
    bulls: tuple

    @classmethod
    def of(cls, G):
        return cls(
            tuple(induced_paths(G, 4)),
            tuple(induced_paths(G, 5)),
            tuple(induced_bulls(G)),
        )

    def violation(self, labels):
        for p in self.p4s:
            w = "".join(str(labels[v]) for v in p)
            if w in _BAD_P4_TYPES:
                return ("p4", p)
        for p in self.p5s:
            if all(labels[v] == (2 if i % 2 == 0 else 1) for i, v in enumerate(p)):
                return ("p5", p)
        for p in self.bulls:
            if [labels[v] for v in p] == [1, 2, 2, 2, 1]:
                return ("q", p)
        return None


def is_pp_cograph(H):
    """Six-bound test: no 1-1 edge and no induced copy of the other bounds."""
    if not H.ones_independent():
        return False
    scan = _PatternScan.of(H.graph)
    return scan.violation(H.labels) is None


def pp_completion(H):
    """A cograph completion of H adding only 1-1 edges, as a term, or None.

    Searches subsets of the absent pairs of 1-vertices in increasing size.
    None characterizes non-pp-cographs; a 1-1 edge in H is a usage error.
    """
    if not H.ones_independent():
        raise ValueError("2-graph already has an edge between two 1-vertices")
    slots = list(itertools.combinations(H.ones(), 2))
    for size in range(len(slots) + 1):
        for extra in itertools.combinations(slots, size):
            candidate = Graph(H.n, list(H.graph.edges()) + list(extra))
            term = cotree(candidate)
            if term is not None:
                return term
    return None


def good_labellings(G, scan=None):
    """All {1,2}-vectors making G a pp-cograph, in lexicographic order."""
    scan = scan or _PatternScan.of(G)
    out = []
    for labels in itertools.product((1, 2), repeat=G.n):
        ones_mask = 0
        for v in range(G.n):
            if labels[v] == 1:
                ones_mask |= 1 << v
        if any(G.adj[v] & ones_mask for v in range(G.n) if labels[v] == 1):
            continue
        if scan.violation(labels) is None:
            out.append(labels)
    return out


def _component_has_good_labelling(G, comp):
    sub = G.induced(comp)
    if sub.diameter() >= 5 or induced_paths(sub, 6):
        return False
    scan = _PatternScan.of(sub)
    for labels in itertools.product((1, 2), repeat=sub.n):
        ones_mask = 0
        ok = True
        for v in range(sub.n):
            if labels[v] == 1:
                if sub.adj[v] & ones_mask:
                    ok = False
                    break
                ones_mask |= 1 << v
        if ok and scan.violation(labels) is None:
            return True
    return False


def is_p_cograph(G):
    """True iff some labelling of G is a pp-cograph.

    Probe cographs are closed under disjoint union, so each component is
    decided separately; components of diameter 5 or more, or with an induced
    P6, are rejected before the labelling search.
    """
    return all(_component_has_good_labelling(G, comp) for comp in G.components())

"""Finite graphs, 2-graphs and ternary structures.

All structures live on dense 0-based ids and are immutable and hashable, so
they can be cached by canonical form and shipped between worker processes.
Isomorphism is decided through `canonical_form`, a lexicographic minimisation
over vertex permutations with colour-refinement pruning; it is exact but not
nauty-grade, hence the size caps below.

Documented caps:

    canonical_form      graphs / 2-graphs n <= 12, ternary structures n <= 10
    enumerate_graphs    n <= 8
    enumerate_twographs n <= 6
    enumerate_ternary   closure "all" n <= 2, "a1" n <= 3,
                        "a1a2" n <= 4, "a1a2a3" n <= 4
"""

from __future__ import annotations

import itertools
from functools import lru_cache

# Node marks of marked join-trees and operation names of cograph terms share
# this vocabulary: "oplus" is disjoint union, "otimes" is complete join.
PLAIN = "plain"
OPLUS = "oplus"
OTIMES = "otimes"

CANON_CAP = 12
CANON_CAP_TERNARY = 10
ENUM_CAP_GRAPH = 8
ENUM_CAP_TWOGRAPH = 6
TERNARY_CLOSURES = ("all", "a1", "a1a2", "a1a2a3")
ENUM_CAP_TERNARY = {"all": 2, "a1": 3, "a1a2": 4, "a1a2a3": 4}


class CapExceeded(ValueError):
    """Structure is larger than a documented implementation cap."""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Finite simple undirected graph on vertices 0..n-1.

    Adjacency is kept as one bitmask per vertex; no loops, symmetry is
    enforced by construction.
    """

    __slots__ = ("n", "adj")

    def __init__(self, n, edges=()):
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def _from_adj(cls, adj):
        g = object.__new__(cls)
        g.n = len(adj)
        g.adj = tuple(adj)
        return g

    @classmethod
    def empty(cls, n):
        return cls(n)

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n):
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n):
        return cls(n, itertools.combinations(range(n), 2))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph({self.n}, {self.edges()})"

    def __reduce__(self):
        return (Graph, (self.n, self.edges()))

    def edges(self):
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u]) if u < v]

    def num_edges(self):
        return sum(bin(a).count("1") for a in self.adj) // 2

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def degree(self, v):
        return bin(self.adj[v]).count("1")

    def neighbors(self, v):
        return list(_bits(self.adj[v]))

    def induced(self, xs):
        """Induced subgraph on `xs`, re-indexed densely preserving relative order."""
        xs = _checked_subset(self.n, xs)
        index = {x: i for i, x in enumerate(xs)}
        edges = [
            (index[u], index[v])
            for u, v in itertools.combinations(xs, 2)
            if self.has_edge(u, v)
        ]
        return Graph(len(xs), edges)

    def complement(self):
        full = (1 << self.n) - 1
        return Graph._from_adj([(full ^ self.adj[v]) & ~(1 << v) for v in range(self.n)])

    def relabel(self, perm):
        """New graph where old vertex v becomes perm[v]."""
        adj = [0] * self.n
        for v in range(self.n):
            m = 0
            for u in _bits(self.adj[v]):
                m |= 1 << perm[u]
            adj[perm[v]] = m
        return Graph._from_adj(adj)

    def add_vertex(self, neighbor_mask):
        """Extend by one vertex adjacent to the old vertices in `neighbor_mask`."""
        adj = list(self.adj)
        new = self.n
        for u in _bits(neighbor_mask):
            adj[u] |= 1 << new
        adj.append(neighbor_mask)
        return Graph._from_adj(adj)

    def substitute_k2(self, subs):
        """Substitute an adjacent pair for every vertex in `subs`, simultaneously.

        Each a in subs is replaced by adjacent a1-a2; a former edge a-x becomes
        a1-x and a2-x.  The result does not depend on any substitution order.
        """
        subs = set(subs)
        copies = {}
        new_id = 0
        for v in range(self.n):
            k = 2 if v in subs else 1
            copies[v] = list(range(new_id, new_id + k))
            new_id += k
        edges = []
        for u, v in self.edges():
            edges.extend(itertools.product(copies[u], copies[v]))
        for v in subs:
            edges.append(tuple(copies[v]))
        return Graph(new_id, edges)

    def components(self):
        """Connected components as vertex tuples, ordered by least vertex."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in _bits(self.adj[v]):
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self):
        return len(self.components()) <= 1

    def distances_from(self, v):
        """BFS distances; -1 for unreachable vertices."""
        dist = [-1] * self.n
        dist[v] = 0
        frontier = [v]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in _bits(self.adj[u]):
                    if dist[w] < 0:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        return dist

    def diameter(self):
        """Largest distance between two vertices in a common component."""
        best = 0
        for v in range(self.n):
            best = max(best, max(self.distances_from(v), default=0))
        return best


class TwoGraph:
    """Graph with a per-vertex label in {1, 2}."""

    __slots__ = ("graph", "labels")

    def __init__(self, graph, labels):
        labels = tuple(labels)
        if len(labels) != graph.n:
            raise ValueError("one label per vertex required")
        if any(l not in (1, 2) for l in labels):
            raise ValueError("labels must be 1 or 2")
        self.graph = graph
        self.labels = labels

    @property
    def n(self):
        return self.graph.n

    def __eq__(self, other):
        return (
            isinstance(other, TwoGraph)
            and self.graph == other.graph
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.graph, self.labels))

    def __repr__(self):
        return f"TwoGraph({self.graph!r}, {self.labels})"

    def __reduce__(self):
        return (TwoGraph, (self.graph, self.labels))

    def ones(self):
        return [v for v in range(self.n) if self.labels[v] == 1]

    def ones_independent(self):
        """True iff no edge joins two 1-vertices (checked, never assumed)."""
        return all(
            not self.graph.has_edge(u, v)
            for u, v in itertools.combinations(self.ones(), 2)
        )

    def induced(self, xs):
        xs = _checked_subset(self.n, xs)
        return TwoGraph(self.graph.induced(xs), [self.labels[x] for x in xs])

    def relabel(self, perm):
        labels = [0] * self.n
        for v in range(self.n):
            labels[perm[v]] = self.labels[v]
        return TwoGraph(self.graph.relabel(perm), labels)


class TernaryStructure:
    """Finite domain 0..n-1 with a set of ordered triples.

    The relation is stored as an explicit set of ordered triples: no symmetry
    or distinctness is imposed, those are testable properties, and bound
    searches must visit structures violating them.
    """

    __slots__ = ("n", "triples")

    def __init__(self, n, triples=()):
        ts = frozenset(tuple(t) for t in triples)
        for t in ts:
            if len(t) != 3 or any(not (0 <= x < n) for x in t):
                raise ValueError(f"triple {t} out of range for n={n}")
        self.n = n
        self.triples = ts

    def __eq__(self, other):
        return (
            isinstance(other, TernaryStructure)
            and self.n == other.n
            and self.triples == other.triples
        )

    def __hash__(self):
        return hash((self.n, self.triples))

    def __repr__(self):
        return f"TernaryStructure({self.n}, {sorted(self.triples)})"

    def __reduce__(self):
        return (TernaryStructure, (self.n, tuple(sorted(self.triples))))

    def induced(self, xs):
        xs = _checked_subset(self.n, xs)
        keep = set(xs)
        index = {x: i for i, x in enumerate(xs)}
        ts = [
            (index[x], index[y], index[z])
            for (x, y, z) in self.triples
            if x in keep and y in keep and z in keep
        ]
        return TernaryStructure(len(xs), ts)

    def relabel(self, perm):
        return TernaryStructure(
            self.n, [(perm[x], perm[y], perm[z]) for (x, y, z) in self.triples]
        )

    def gaifman(self):
        """Graph with an edge u-v iff u != v share some triple."""
        edges = set()
        for t in self.triples:
            for u, v in itertools.combinations(set(t), 2):
                edges.add((u, v))
        return Graph(self.n, edges)

    def components(self):
        """Partition of the domain into Gaifman components, by least element."""
        return self.gaifman().components()


def _checked_subset(n, xs):
    out = tuple(sorted(xs))
    seen = set()
    for x in out:
        if not 0 <= x < n:
            raise ValueError(f"element {x} out of range [0, {n})")
        if x in seen:
            raise ValueError(f"duplicate element {x}")
        seen.add(x)
    return out


# ---------------------------------------------------------------------------
# Canonical forms.
#
# canonical_form(S) is the lexicographically least relation encoding of S over
# all vertex permutations that respect an isomorphism-invariant colouring
# (two rounds of neighbourhood refinement).  Equal byte strings iff the
# structures are isomorphic: the encoding determines the structure, and the
# restricted permutation set is invariant under isomorphism.
# ---------------------------------------------------------------------------


def _refined_blocks(n, init, nbrs):
    col = list(init)
    for _ in range(2):
        col = [(col[v], tuple(sorted(col[u] for u in nbrs(v)))) for v in range(n)]
    groups = {}
    for v in range(n):
        groups.setdefault(col[v], []).append(v)
    return [groups[c] for c in sorted(groups)]


def _graph_blocks(G, labels=None):
    def init(v):
        d = G.degree(v)
        return (labels[v], d) if labels is not None else (d,)

    return _refined_blocks(G.n, [init(v) for v in range(G.n)], G.neighbors)


def _ternary_blocks(S):
    pos = [[0, 0, 0] for _ in range(S.n)]
    for (x, y, z) in S.triples:
        pos[x][0] += 1
        pos[y][1] += 1
        pos[z][2] += 1
    gf = S.gaifman()
    return _refined_blocks(S.n, [tuple(p) for p in pos], gf.neighbors)


def _search_min(n, blocks, column_of):
    """Branch-and-bound lexicographic minimisation.

    Positions are filled block by block (blocks in canonical order); at each
    position `column_of(v, perm)` yields the newly determined relation bits as
    an int.  Returns (columns, perm) with perm[new_id] = original id.
    """
    pos_block = []
    for b in blocks:
        pos_block.extend([b] * len(b))
    best = None
    best_perm = None
    used = [False] * n
    perm = []
    cols = []

    def rec(loose):
        nonlocal best, best_perm
        pos = len(perm)
        if pos == n:
            if best is None or cols < best:
                best = list(cols)
                best_perm = list(perm)
            return
        for v in pos_block[pos]:
            if used[v]:
                continue
            col = column_of(v, perm)
            child_loose = loose
            if best is not None and not loose:
                b = best[pos]
                if col > b:
                    continue
                child_loose = col < b
            used[v] = True
            perm.append(v)
            cols.append(col)
            rec(child_loose)
            used[v] = False
            perm.pop()
            cols.pop()

    rec(best is None)
    return best, best_perm


def _graph_column(adj):
    def column_of(v, perm):
        col = 0
        row = adj[v]
        for u in perm:
            col = col << 1 | (row >> u & 1)
        return col

    return column_of


@lru_cache(maxsize=None)
def _ternary_patterns(j):
    """Index triples over {0..j} whose maximum is j, in lexicographic order."""
    return tuple(
        t
        for t in itertools.product(range(j + 1), repeat=3)
        if max(t) == j
    )


def _ternary_column(triples):
    def column_of(v, perm):
        j = len(perm)
        full = perm + [v]
        col = 0
        for (a, b, c) in _ternary_patterns(j):
            col = col << 1 | ((full[a], full[b], full[c]) in triples)
        return col

    return column_of


def _pack(kind, n, widths, cols, extra=b""):
    acc = 0
    total = 0
    for w, c in zip(widths, cols):
        acc = acc << w | c
        total += w
    body = acc.to_bytes((total + 7) // 8, "big") if total else b""
    return kind + bytes([n]) + extra + body


def canonical_perm(S):
    """(canonical_form(S), perm) where perm[new_id] = original id."""
    if isinstance(S, Graph):
        if S.n > CANON_CAP:
            raise CapExceeded(f"graph canonicalization capped at n={CANON_CAP}")
        blocks = _graph_blocks(S)
        cols, perm = _search_min(S.n, blocks, _graph_column(S.adj))
        return _pack(b"G", S.n, range(len(perm or [])), cols or [], b""), perm or []
    if isinstance(S, TwoGraph):
        if S.n > CANON_CAP:
            raise CapExceeded(f"2-graph canonicalization capped at n={CANON_CAP}")
        blocks = _graph_blocks(S.graph, S.labels)
        cols, perm = _search_min(S.n, blocks, _graph_column(S.graph.adj))
        labels = bytes(S.labels[v] for v in (perm or []))
        return _pack(b"T", S.n, range(len(perm or [])), cols or [], labels), perm or []
    if isinstance(S, TernaryStructure):
        if S.n > CANON_CAP_TERNARY:
            raise CapExceeded(
                f"ternary canonicalization capped at n={CANON_CAP_TERNARY}"
            )
        blocks = _ternary_blocks(S)
        cols, perm = _search_min(S.n, blocks, _ternary_column(S.triples))
        widths = [len(_ternary_patterns(j)) for j in range(S.n)]
        return _pack(b"B", S.n, widths, cols or []), perm or []
    raise TypeError(f"cannot canonicalize {type(S).__name__}")


def canonical_form(S):
    return canonical_perm(S)[0]


def canonicalize(S):
    """Relabelled copy of S realising its canonical form."""
    _, perm = canonical_perm(S)
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return S.relabel(inv)


def isomorphic(a, b):
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------------------
# Exhaustive enumeration up to isomorphism.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_graphs(n):
    """All graphs on n vertices up to isomorphism, sorted by canonical form."""
    if n > ENUM_CAP_GRAPH:
        raise CapExceeded(f"graph enumeration capped at n={ENUM_CAP_GRAPH}")
    if n == 0:
        return (Graph(0),)
    if n == 1:
        return (Graph(1),)
    reps = {}
    for G in enumerate_graphs(n - 1):
        for mask in range(1 << (n - 1)):
            H = G.add_vertex(mask)
            key = canonical_form(H)
            if key not in reps:
                reps[key] = canonicalize(H)
    return tuple(reps[k] for k in sorted(reps))


@lru_cache(maxsize=None)
def enumerate_twographs(n):
    """All 2-graphs on n vertices up to label-preserving isomorphism."""
    if n > ENUM_CAP_TWOGRAPH:
        raise CapExceeded(f"2-graph enumeration capped at n={ENUM_CAP_TWOGRAPH}")
    reps = {}
    for G in enumerate_graphs(n):
        for labels in itertools.product((1, 2), repeat=n):
            H = TwoGraph(G, labels)
            key = canonical_form(H)
            if key not in reps:
                reps[key] = canonicalize(H)
    return tuple(reps[k] for k in sorted(reps))


def _ternary_labelled(n, closure):
    """All triple sets on n points in the given closure, with repetitions."""
    if closure == "all":
        base = list(itertools.product(range(n), repeat=3))
        for picks in itertools.product((False, True), repeat=len(base)):
            yield frozenset(t for t, p in zip(base, picks) if p)
    elif closure == "a1":
        base = list(itertools.permutations(range(n), 3))
        for picks in itertools.product((False, True), repeat=len(base)):
            yield frozenset(t for t, p in zip(base, picks) if p)
    elif closure == "a1a2":
        orbits = [
            ((x, y, z), (z, y, x))
            for x, z in itertools.combinations(range(n), 2)
            for y in range(n)
            if y != x and y != z
        ]
        for picks in itertools.product((False, True), repeat=len(orbits)):
            ts = set()
            for orb, p in zip(orbits, picks):
                if p:
                    ts.update(orb)
            yield frozenset(ts)
    elif closure == "a1a2a3":
        trios = list(itertools.combinations(range(n), 3))
        options = []
        for trio in trios:
            opts = [()]
            for mid in trio:
                a, b = [v for v in trio if v != mid]
                opts.append(((a, mid, b), (b, mid, a)))
            options.append(opts)
        for picks in itertools.product(*options):
            ts = set()
            for orb in picks:
                ts.update(orb)
            yield frozenset(ts)
    else:
        raise ValueError(f"unknown closure {closure!r}")


@lru_cache(maxsize=None)
def enumerate_ternary(n, closure="a1"):
    """Ternary structures on n points up to isomorphism.

    `closure` restricts the raw space: "all" is every subset of the n^3
    ordered triples, "a1" keeps distinct-coordinate triples only, "a1a2"
    closes under (x,y,z) ~ (z,y,x), "a1a2a3" additionally allows at most one
    middle element per unordered trio.  Caps per closure in ENUM_CAP_TERNARY.
    """
    cap = ENUM_CAP_TERNARY[closure]
    if n > cap:
        raise CapExceeded(f"ternary enumeration ({closure}) capped at n={cap}")
    reps = {}
    for ts in _ternary_labelled(n, closure):
        S = TernaryStructure(n, ts)
        key = canonical_form(S)
        if key not in reps:
            reps[key] = canonicalize(S)
    return tuple(reps[k] for k in sorted(reps))


def enumerate_up_to_iso(kind, n, predicate=None, closure="a1"):
    """One representative per isomorphism class passing `predicate`.

    `predicate` is assumed isomorphism-invariant; it is applied to the chosen
    representative.  Deterministic order: sorted canonical forms.
    """
    if kind == "graph":
        items = enumerate_graphs(n)
    elif kind == "twograph":
        items = enumerate_twographs(n)
    elif kind == "ternary":
        items = enumerate_ternary(n, closure)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    for S in items:
        if predicate is None or predicate(S):
            yield S

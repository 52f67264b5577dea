"""Axioms A1-A8 and membership in the betweenness classes QT, IBQT and IBO.

For finite structures QT = BO, axiomatized by A1-A7; IBQT by A1-A6 plus A8.
IBO membership is decided two independent ways:

* `decide_ibo` runs the structured procedure: guess a root set R, derive a
  candidate order from R and the relation alone, validate that it is a
  compatible forest, build the local 2-graphs over the son classes, and
  accept iff all of them are pp-cographs, in which case a marked join-tree
  witness is assembled bottom-up from completion cotrees.

* `decide_ibo_oracle` exhausts all reduced marked join-trees of size at most
  2n-1 whose plain nodes carry the domain, via a canonical-form table.  It
  shares no decision logic with `decide_ibo`.

Both return a verified `IboWitness` or None.

The abbreviation B+(x1,x2,x3,x4) used by A4-A6 is read as "the four points
are aligned in this order": B holds on every ordered subtriple.  (Reading it
as the two consecutive triples only would make A4 a tautology.)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from treebetween.core import (
    OPLUS,
    OTIMES,
    PLAIN,
    TernaryStructure,
    canonical_perm,
)
from treebetween.cographs import (
    Leaf,
    Node,
    TwoGraph,
    is_pp_cograph,
    pp_completion,
)
from treebetween.trees import MarkedJoinTree, RootedForest, betweenness_marked

AXIOM_NAMES = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8")
QT_AXIOMS = AXIOM_NAMES[:7]
IBQT_AXIOMS = AXIOM_NAMES[:6] + ("A8",)

ORACLE_CAP = 5


def _aligned(B, quad):
    """B+ of four points: B on every ordered subtriple."""
    return all(t in B for t in itertools.combinations(quad, 3))


def _some_order(B, x, y, z):
    """A(x,y,z): one of the three points lies between the two others."""
    return (x, y, z) in B or (y, x, z) in B or (x, z, y) in B


def _check_one(S, name):
    """First failing tuple of one axiom in lexicographic order, or None."""
    B = S.triples
    n = S.n
    worst = None

    def note(t):
        nonlocal worst
        if worst is None or t < worst:
            worst = t

    if name == "A1":
        for t in B:
            if len(set(t)) != 3:
                note(t)
    elif name == "A2":
        for (x, y, z) in B:
            if (z, y, x) not in B:
                note((x, y, z))
    elif name == "A3":
        for (x, y, z) in B:
            if (x, z, y) in B:
                note((x, y, z))
    elif name == "A4":
        by_prefix = {}
        for t in B:
            by_prefix.setdefault((t[0], t[1]), []).append(t[2])
        for (x, y, z) in B:
            for u in by_prefix.get((y, z), ()):
                if not _aligned(B, (x, y, z, u)):
                    note((x, y, z, u))
    elif name == "A5":
        by_ends = {}
        for t in B:
            by_ends.setdefault((t[0], t[2]), []).append(t[1])
        for (x, y, z) in B:
            for u in by_ends.get((x, y), ()):
                if not _aligned(B, (x, u, y, z)):
                    note((x, y, z, u))
    elif name == "A6":
        by_ends = {}
        for t in B:
            by_ends.setdefault((t[0], t[2]), []).append(t[1])
        for (x, z), mids in by_ends.items():
            for y in mids:
                for u in mids:
                    if y == u:
                        continue
                    if not (_aligned(B, (x, u, y, z)) or _aligned(B, (x, y, u, z))):
                        note((x, y, z, u))
    elif name == "A7":
        for x, y, z in itertools.permutations(range(n), 3):
            if _some_order(B, x, y, z):
                continue
            if not any(
                (x, w, y) in B and (y, w, z) in B and (x, w, z) in B
                for w in range(n)
            ):
                return (x, y, z)
    elif name == "A8":
        for (x, y, z) in B:
            if len({x, y, z}) != 3:
                continue
            for u in range(n):
                if u in (x, y, z):
                    continue
                if not _some_order(B, u, y, z) and (x, y, u) not in B:
                    note((x, y, z, u))
    else:
        raise ValueError(f"unknown axiom {name!r}")
    return worst


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts: maps axiom name to None (holds) or a witness tuple."""

    results: dict

    def holds(self, name):
        return self.results[name] is None

    def all_hold(self):
        return all(v is None for v in self.results.values())

    def failing(self):
        return sorted(k for k, v in self.results.items() if v is not None)


def check_axioms(S, axioms=QT_AXIOMS):
    """Exhaustively check the requested axioms on a finite structure."""
    for a in axioms:
        if a not in AXIOM_NAMES:
            raise ValueError(f"unknown axiom {a!r}")
    return AxiomReport({a: _check_one(S, a) for a in axioms})


def in_qt(S):
    """Finite quasi-tree betweenness: A1-A7 (for finite structures QT = BO)."""
    return check_axioms(S, QT_AXIOMS).all_hold()


def in_ibqt(S):
    """Induced betweenness of join-trees: A1-A6 and A8."""
    return check_axioms(S, IBQT_AXIOMS).all_hold()


# ---------------------------------------------------------------------------
# Candidate orders derived from a root set, and their validation.
# ---------------------------------------------------------------------------


def derive_order(S, R):
    """Binary relation defined from a candidate root set R.

    Verbatim disjuncts: x = y; singleton R = {r} with y = r or B(x,y,r);
    y in R with B(x,y,r') for some r' in R; y outside R with B(x,y,r) for
    some r in R.  Validity is not checked here.
    """
    R = frozenset(R)
    if not R or any(not 0 <= r < S.n for r in R):
        raise ValueError("R must be a nonempty subset of the domain")
    B = S.triples
    single = next(iter(R)) if len(R) == 1 else None
    rel = set()
    for x in range(S.n):
        for y in range(S.n):
            if x == y:
                rel.add((x, y))
                continue
            if single is not None and (y == single or (x, y, single) in B):
                rel.add((x, y))
                continue
            if y in R and any((x, y, r) in B for r in R):
                rel.add((x, y))
                continue
            if y not in R and any((x, y, r) in B for r in R):
                rel.add((x, y))
    return frozenset(rel)


def forest_from_order(n, rel):
    """RootedForest of a partial order whose strict up-sets are chains.

    Returns None when rel is not such an order (not antisymmetric, not
    transitive, or some up-set is not a chain).
    """
    for x in range(n):
        if (x, x) not in rel:
            return None
    for (x, y) in rel:
        if x != y and (y, x) in rel:
            return None
    for (x, y) in rel:
        for z in range(n):
            if (y, z) in rel and (x, z) not in rel:
                return None
    parents = []
    for x in range(n):
        up = [y for y in range(n) if y != x and (x, y) in rel]
        for a, b in itertools.combinations(up, 2):
            if (a, b) not in rel and (b, a) not in rel:
                return None
        if not up:
            parents.append(None)
        else:
            low = [y for y in up if all((y, z) in rel for z in up)]
            if len(low) != 1:
                return None
            parents.append(low[0])
    return RootedForest(parents)


def check_compatible(T, S):
    """Compatibility of a rooted forest with a ternary relation.

    (i) every B(x,y,z) puts y strictly above x or above z; (ii) when y is
    above both, y is the join of x and z; (iii) along comparable pairs
    x < z, betweenness is exactly strict interleaving x < y < z.
    """
    B = S.triples
    lt = lambda a, b: a != b and T.is_leq(a, b)
    for (x, y, z) in B:
        if not (lt(x, y) or lt(z, y)):
            return False
        if lt(x, y) and lt(z, y) and T.join(x, z) != y:
            return False
    for x in range(S.n):
        for z in range(S.n):
            if x == z or not lt(x, z):
                continue
            for y in range(S.n):
                if ((x, y, z) in B) != (lt(x, y) and lt(y, z)):
                    return False
    return True


def validate_phi(S, R, rel):
    """phi(R): rel is a partial order defining a forest compatible with B
    whose set of roots is exactly R."""
    T = forest_from_order(S.n, rel)
    if T is None:
        return False
    if set(T.roots()) != set(R):
        return False
    return check_compatible(T, S)


# ---------------------------------------------------------------------------
# Local 2-graphs over son classes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalTwoGraphs:
    """2-graphs carried by the son classes of each internal node and by the
    root set: `per_node[x]` lists (class, TwoGraph) for classes of size >= 2,
    `root` holds (roots, TwoGraph) when there are several roots.

    Vertices with a strict descendant are the 2-vertices; edges come from the
    first-order criterion: y-z iff B(y',y,z) for some y' < y or symmetric.
    """

    per_node: dict
    root: tuple | None

    def all_graphs(self):
        out = [g for entries in self.per_node.values() for (_, g) in entries]
        if self.root is not None:
            out.append(self.root[1])
        return out


def _class_twograph(T, S, members):
    members = tuple(sorted(members))
    B = S.triples
    below = {y: [u for u in range(S.n) if u != y and T.is_leq(u, y)] for y in members}
    labels = [2 if below[y] else 1 for y in members]
    edges = []
    for i, y in enumerate(members):
        for j in range(i + 1, len(members)):
            z = members[j]
            if any((u, y, z) in B for u in below[y]) or any(
                (u, z, y) in B for u in below[z]
            ):
                edges.append((i, j))
    from treebetween.core import Graph

    return members, TwoGraph(Graph(len(members), edges), labels)


def local_2graphs(T, S):
    """Build the local 2-graphs of a compatible forest, or None.

    None signals that some son relation "not B(y_i, x, y_j)" fails to be an
    equivalence, which certifies that no marked tree extends this forest.
    """
    B = S.triples
    per_node = {}
    for x in range(S.n):
        sons = T.sons(x)
        if len(sons) < 2:
            continue
        sim = {
            (a, b): a == b or (a, x, b) not in B
            for a in sons
            for b in sons
        }
        for a, b in itertools.combinations(sons, 2):
            if sim[(a, b)] != sim[(b, a)]:
                return None
        for a, b, c in itertools.permutations(sons, 3):
            if sim[(a, b)] and sim[(b, c)] and not sim[(a, c)]:
                return None
        classes = []
        assigned = {}
        for a in sons:
            for cls in classes:
                if sim[(cls[0], a)]:
                    cls.append(a)
                    assigned[a] = cls
                    break
            else:
                classes.append([a])
        entries = [
            _class_twograph(T, S, cls) for cls in classes if len(cls) >= 2
        ]
        if entries:
            per_node[x] = entries
    roots = T.roots()
    root_entry = _class_twograph(T, S, roots) if len(roots) >= 2 else None
    return LocalTwoGraphs(per_node, root_entry)


def _son_classes(T, S):
    """Son classes of every internal node under the ~x relation, sorted."""
    B = S.triples
    out = {}
    for x in range(S.n):
        sons = sorted(T.sons(x))
        if not sons:
            continue
        classes = []
        for a in sons:
            for cls in classes:
                if (a, x, cls[0]) not in B:
                    cls.append(a)
                    break
            else:
                classes.append([a])
        out[x] = [tuple(c) for c in classes]
    return out


# ---------------------------------------------------------------------------
# Witnesses and the structured decision.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IboWitness:
    """Marked join-tree plus the embedding of the domain into its plain nodes."""

    tree: MarkedJoinTree
    mapping: tuple

    @property
    def size(self):
        return self.tree.size

    def verify(self, S):
        """Pullback of the tree betweenness along the mapping equals S."""
        if sorted(self.mapping) != list(self.tree.plain_nodes()):
            return False
        bt = betweenness_marked(self.tree)
        plains = self.tree.plain_nodes()
        node_to_elem = {self.mapping[e]: e for e in range(S.n)}
        pulled = {
            (
                node_to_elem[plains[x]],
                node_to_elem[plains[y]],
                node_to_elem[plains[z]],
            )
            for (x, y, z) in bt.triples
        }
        return pulled == set(S.triples)


class _Nested:
    """Assembly-time tree node: either a plain domain element or a mark."""

    __slots__ = ("mark", "element", "children")

    def __init__(self, mark, element, children):
        self.mark = mark
        self.element = element
        self.children = children


def _nested_from_term(term, subtree_of):
    if isinstance(term, Leaf):
        return subtree_of[term.vertex]
    mark = OPLUS if term.op == OPLUS else OTIMES
    return _Nested(mark, None, [_nested_from_term(c, subtree_of) for c in term.children])


def _flatten(nested, n_elements):
    parents = []
    marks = []
    mapping = [None] * n_elements

    def walk(node, parent):
        my = len(parents)
        parents.append(parent)
        marks.append(node.mark)
        if node.element is not None:
            mapping[node.element] = my
        for c in node.children:
            walk(c, my)

    walk(nested, None)
    return MarkedJoinTree(parents, marks), tuple(mapping)


def _build_witness_tree(T, S, classes_by_node, completions, root_term):
    """Bottom-up assembly of the marked tree from completion cotrees."""

    def build_elem(x):
        children = []
        for cls in classes_by_node.get(x, []):
            children.append(build_class(x, cls))
        return _Nested(PLAIN, x, children)

    def build_class(x, cls):
        if len(cls) == 1:
            return build_elem(cls[0])
        term = completions[(x, cls)]
        return _nested_from_term(term, {y: build_elem(y) for y in cls})

    roots = T.roots()
    if len(roots) == 1:
        top = build_elem(roots[0])
    else:
        top = _nested_from_term(root_term, {r: build_elem(r) for r in roots})
    return _flatten(top, S.n)


def _decide_connected(S):
    """Witness tree for one Gaifman-connected structure, or None.

    Assumes A1-A6 already hold.  Root sets are tried by increasing size then
    lexicographically; the first R passing phi with all-pp local 2-graphs
    yields the witness.
    """
    n = S.n
    if n == 1:
        return MarkedJoinTree([None], [PLAIN]), (0,)
    for size in range(1, n + 1):
        for R in itertools.combinations(range(n), size):
            rel = derive_order(S, R)
            T = forest_from_order(n, rel)
            if T is None or set(T.roots()) != set(R):
                continue
            if not check_compatible(T, S):
                continue
            local = local_2graphs(T, S)
            if local is None:
                continue
            if not all(is_pp_cograph(g) for g in local.all_graphs()):
                continue
            classes_by_node = _son_classes(T, S)
            completions = {}
            feasible = True
            for x, entries in local.per_node.items():
                for members, g in entries:
                    term = pp_completion(g)
                    if term is None:
                        feasible = False
                        break
                    completions[(x, members)] = _rename_leaves(term, members)
                if not feasible:
                    break
            root_term = None
            if feasible and local.root is not None:
                members, g = local.root
                root_term = pp_completion(g)
                if root_term is None:
                    feasible = False
                else:
                    root_term = _rename_leaves(root_term, members)
            if not feasible:
                continue
            classes = {
                x: [tuple(c) for c in cls] for x, cls in classes_by_node.items()
            }
            tree, mapping = _build_witness_tree(T, S, classes, completions, root_term)
            witness = IboWitness(tree, mapping)
            if witness.verify(S):
                return tree, mapping
    return None


def _rename_leaves(term, members):
    """Map dense completion-leaf ids back to the class members."""
    if isinstance(term, Leaf):
        return Leaf(members[term.vertex], term.label)
    return Node(term.op, tuple(_rename_leaves(c, members) for c in term.children))


def decide_ibo(S):
    """Structured IBO decision with witness construction.

    Rejects unless A1-A6 hold, decomposes into Gaifman components, decides
    each component by root-set enumeration, and reassembles the component
    witnesses under a fresh oplus root.  Every returned witness verifies.
    """
    if S.n == 0:
        raise ValueError("empty domain")
    if not check_axioms(S, AXIOM_NAMES[:6]).all_hold():
        return None
    comps = S.components()
    if len(comps) == 1:
        got = _decide_connected(S)
        if got is None:
            return None
        witness = IboWitness(*got)
        assert witness.verify(S) and witness.size <= max(1, 2 * S.n - 1)
        return witness
    parts = []
    for comp in comps:
        got = _decide_connected(S.induced(comp))
        if got is None:
            return None
        parts.append((comp, got))
    parents = [None]
    marks = [OPLUS]
    mapping = [None] * S.n
    for comp, (tree, sub_mapping) in parts:
        offset = len(parents)
        for v in range(tree.size):
            p = tree.forest.parent[v]
            parents.append(offset + p if p is not None else 0)
            marks.append(tree.marks[v])
        for i, elem in enumerate(comp):
            mapping[elem] = offset + sub_mapping[i]
    witness = IboWitness(MarkedJoinTree(parents, marks), tuple(mapping))
    assert witness.verify(S) and witness.size <= max(1, 2 * S.n - 1)
    return witness


# ---------------------------------------------------------------------------
# The brute-force oracle: exhaustive search over reduced marked join-trees.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tree_shapes(size):
    """Canonical reduced marked tree shapes with `size` nodes.

    A shape is (mark, children) with children a sorted tuple of shapes; marked
    nodes have at least two children.  Shapes are generated in a canonical
    order so the oracle's "first witness" is well defined.
    """
    if size == 1:
        return ((PLAIN, ()),)
    shapes = []
    for children in _forests(size - 1, None):
        shapes.append((PLAIN, children))
        if len(children) >= 2:
            shapes.append((OPLUS, children))
            shapes.append((OTIMES, children))
    return tuple(sorted(shapes))


@lru_cache(maxsize=None)
def _forests(total, bound):
    """Sorted tuples of shapes with sizes summing to `total`, each shape
    <= `bound` in the canonical shape order (None = no bound)."""
    if total == 0:
        return ((),)
    out = []
    for first_size in range(1, total + 1):
        for first in _tree_shapes(first_size):
            if bound is not None and first > bound:
                continue
            for rest in _forests(total - first_size, first):
                out.append((first,) + tuple(rest))
    return tuple(sorted(set(out)))


def _shape_plains(shape):
    mark, children = shape
    return (1 if mark == PLAIN else 0) + sum(_shape_plains(c) for c in children)


def _shape_to_tree(shape):
    parents = []
    marks = []

    def walk(node, parent):
        my = len(parents)
        parents.append(parent)
        marks.append(node[0])
        for c in node[1]:
            walk(c, my)

    walk(shape, None)
    return MarkedJoinTree(parents, marks)


@lru_cache(maxsize=None)
def _ibo_table(n):
    """canonical form of B_T -> (tree, perm) over all reduced marked trees
    with n plain nodes and size <= 2n-1, first tree in shape order kept."""
    table = {}
    max_size = max(1, 2 * n - 1)
    for size in range(n, max_size + 1):
        for shape in _tree_shapes(size):
            if _shape_plains(shape) != n:
                continue
            tree = _shape_to_tree(shape)
            bt = betweenness_marked(tree)
            key, perm = canonical_perm(bt)
            if key not in table:
                table[key] = (tree, tuple(perm))
    return table


def decide_ibo_oracle(S, cap=ORACLE_CAP):
    """Exhaustive marked-tree search, independent of `decide_ibo`.

    Looks the canonical form of S up in the table of betweenness structures
    of all reduced marked join-trees with |domain| plain nodes and size at
    most 2n-1; reconstructs the witness mapping from the canonising
    permutations.
    """
    if S.n > cap:
        raise ValueError(f"oracle capped at n={cap}")
    if S.n == 0:
        raise ValueError("empty domain")
    key, perm_s = canonical_perm(S)
    hit = _ibo_table(S.n).get(key)
    if hit is None:
        return None
    tree, perm_t = hit
    plains = tree.plain_nodes()
    # canonical copies agree: position i holds element perm_s[i] of S and
    # element perm_t[i] of the tree structure.
    mapping = [None] * S.n
    for i in range(S.n):
        mapping[perm_s[i]] = plains[perm_t[i]]
    witness = IboWitness(tree, tuple(mapping))
    assert witness.verify(S)
    return witness

"""Exhaustive search for the bounds of hereditary classes.

A bound of a hereditary class is a finite structure outside the class all of
whose one-point deletions lie inside (hereditariness makes one-point
deletions sufficient for minimality).  Searches run over the exhaustive
enumerations up to isomorphism, decide membership through a canonical-form
cache, and re-verify every reported bound with an independent decider
variant where one exists.

Candidate restrictions, each justified by the span of a violated axiom:

* graph classes closed under disjoint union (cographs, pp- and p-cographs)
  admit only connected candidates;
* the probe-cograph search skips candidates of diameter 5 or more beyond
  n = 6 (the path P6 is the single larger-diameter bound);
* ternary candidates of size n must satisfy every universal axiom whose
  violations span fewer than n points, since a violation surviving a
  deletion disqualifies a bound: size 3 forces distinct-coordinate triples,
  size 4 forces the symmetry and middle-uniqueness closures, sizes beyond
  the cap would force A1-A6.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass

from treebetween.core import (
    CapExceeded,
    Graph,
    TernaryStructure,
    TwoGraph,
    canonical_form,
    enumerate_graphs,
    enumerate_ternary,
    enumerate_twographs,
)
from treebetween.cographs import (
    cotree,
    good_labellings,
    is_p_cograph,
    is_pp_cograph,
    pp_completion,
    _PatternScan,
)
from treebetween.betweenness import decide_ibo, decide_ibo_oracle, in_ibqt


def is_bound(S, decider):
    """S is outside the class while every one-point deletion is inside.

    The empty structure is taken to belong to every class, so one-element
    candidates are bounds exactly when the decider rejects them.
    """
    n = S.n
    if n == 0:
        return False
    for x in range(n):
        rest = [v for v in range(n) if v != x]
        if rest and not decider(S.induced(rest)):
            return False
    return not decider(S)


@dataclass(frozen=True)
class BoundEntry:
    """One bound with its minimality certificate (the one-point deletions)."""

    structure: object

    def deletions(self):
        n = self.structure.n
        return [
            self.structure.induced([v for v in range(n) if v != x])
            for x in range(n)
        ]


@dataclass
class BoundReport:
    """Canonical list of the bounds of one class up to a size cap."""

    class_name: str
    max_n: int
    entries: list

    def structures(self):
        return [e.structure for e in self.entries]

    def verify(self, decider):
        """Re-check minimality of every entry against `decider`."""
        for e in self.entries:
            if decider(e.structure):
                return False
            if not all(decider(d) for d in e.deletions()):
                return False
        return True

    def mutually_minimal(self):
        """No reported bound embeds into another as an induced substructure."""
        ss = self.structures()
        for a, b in itertools.permutations(ss, 2):
            if a.n < b.n and _embeds_induced(a, b):
                return False
        return True

    def summary(self):
        lines = [f"class {self.class_name}  max-n {self.max_n}  bounds {len(self.entries)}"]
        lines.append("size  count")
        by_n = {}
        for e in self.entries:
            by_n.setdefault(e.structure.n, []).append(e)
        for n in sorted(by_n):
            lines.append(f"{n:4d}  {len(by_n[n]):5d}")
        lines.append("size  canonical form")
        for e in self.entries:
            lines.append(f"{e.structure.n:4d}  {canonical_form(e.structure).hex()}")
        return "\n".join(lines)


def _embeds_induced(small, big):
    if isinstance(small, TwoGraph):
        key = canonical_form(small)
        return any(
            canonical_form(big.induced(xs)) == key
            for xs in itertools.combinations(range(big.n), small.n)
        )
    key = canonical_form(small)
    return any(
        canonical_form(big.induced(xs)) == key
        for xs in itertools.combinations(range(big.n), small.n)
    )


# ---------------------------------------------------------------------------
# Class registry: deciders, independent re-verification deciders, candidates.
# ---------------------------------------------------------------------------


def _is_cograph(G):
    return cotree(G) is not None


def _is_cograph_by_scan(G):
    return not _PatternScan.of(G).p4s


def _is_p_by_completion(G):
    """Labelling search routed through pp_completion instead of the matcher."""
    for labels in itertools.product((1, 2), repeat=G.n):
        H = TwoGraph(G, labels)
        if H.ones_independent() and pp_completion(H) is not None:
            return True
    return False


def _is_ibo(S):
    return decide_ibo(S) is not None


def _is_ibo_oracle(S):
    return decide_ibo_oracle(S) is not None


def _graph_candidates(n, connected_only, diameter_cap=None):
    for G in enumerate_graphs(n):
        if connected_only and not G.is_connected():
            continue
        if diameter_cap is not None and n > 6 and G.diameter() > diameter_cap:
            continue
        yield G


def _twograph_candidates(n):
    for H in enumerate_twographs(n):
        if H.graph.is_connected():
            yield H


_TERNARY_CLOSURE_BY_N = {1: "all", 2: "all", 3: "a1", 4: "a1a2a3"}


def _ternary_candidates(n):
    closure = _TERNARY_CLOSURE_BY_N.get(n)
    if closure is None:
        raise CapExceeded("ternary bound search capped at n=4")
    return enumerate_ternary(n, closure)


CLASSES = {
    "cograph": {
        "decider": _is_cograph,
        "independent": _is_cograph_by_scan,
        "candidates": lambda n: _graph_candidates(n, connected_only=True),
        "cap": 7,
    },
    "pp": {
        "decider": is_pp_cograph,
        "independent": lambda H: H.ones_independent() and pp_completion(H) is not None,
        "candidates": _twograph_candidates,
        "cap": 6,
    },
    "p": {
        "decider": is_p_cograph,
        "independent": _is_p_by_completion,
        "candidates": lambda n: _graph_candidates(n, connected_only=True, diameter_cap=4),
        "cap": 7,
    },
    "ibo": {
        "decider": _is_ibo,
        "independent": _is_ibo_oracle,
        "candidates": _ternary_candidates,
        "cap": 4,
    },
    "ibqt": {
        "decider": in_ibqt,
        "independent": None,
        "candidates": _ternary_candidates,
        "cap": 4,
    },
}


def _evaluate_candidates(class_name, candidates, cache):
    """(canonical form, structure) for the candidates that are bounds."""
    decider = CLASSES[class_name]["decider"]

    def cached(S):
        key = canonical_form(S)
        if key not in cache:
            cache[key] = decider(S)
        return cache[key]

    found = []
    for S in candidates:
        if is_bound(S, cached):
            found.append((canonical_form(S), S))
    return found


def _batch_worker(args):
    class_name, payload = args
    candidates = [_thaw(item) for item in payload]
    return [
        (key, _freeze(S))
        for key, S in _evaluate_candidates(class_name, candidates, {})
    ]


def _freeze(S):
    if isinstance(S, Graph):
        return ("graph", S.n, tuple(S.edges()))
    if isinstance(S, TwoGraph):
        return ("twograph", S.graph.n, tuple(S.graph.edges()), S.labels)
    return ("ternary", S.n, tuple(sorted(S.triples)))


def _thaw(item):
    kind = item[0]
    if kind == "graph":
        return Graph(item[1], item[2])
    if kind == "twograph":
        return TwoGraph(Graph(item[1], item[2]), item[3])
    return TernaryStructure(item[1], item[2])


def find_bounds(class_name, max_n, workers=1, checkpoint=None, reverify=True):
    """All bounds of the class with at most `max_n` elements.

    Deterministic output for any worker count: results are merged and sorted
    by (size, canonical form).  With `checkpoint` set, candidate sizes that
    completed are recorded in that JSON file and skipped on resume.
    """
    spec = CLASSES.get(class_name)
    if spec is None:
        raise ValueError(f"unknown class {class_name!r}; one of {sorted(CLASSES)}")
    if max_n > spec["cap"]:
        raise CapExceeded(
            f"bound search for {class_name!r} capped at n={spec['cap']}"
        )
    done, found = _load_checkpoint(checkpoint, class_name, max_n)
    cache = {}
    for n in range(1, max_n + 1):
        if n in done:
            continue
        candidates = list(spec["candidates"](n))
        if workers > 1 and len(candidates) >= 4 * workers:
            import concurrent.futures

            chunks = [candidates[i::workers] for i in range(workers)]
            payload = [
                (class_name, [_freeze(S) for S in chunk]) for chunk in chunks
            ]
            with concurrent.futures.ProcessPoolExecutor(workers) as pool:
                for part in pool.map(_batch_worker, payload):
                    found.extend((key, _thaw(item)) for key, item in part)
        else:
            found.extend(_evaluate_candidates(class_name, candidates, cache))
        done.add(n)
        _save_checkpoint(checkpoint, class_name, max_n, done, found)
    merged = {}
    for key, S in found:
        merged.setdefault((S.n, key), S)
    entries = [BoundEntry(merged[k]) for k in sorted(merged)]
    report = BoundReport(class_name, max_n, entries)
    if reverify and spec["independent"] is not None:
        if not report.verify(spec["independent"]):
            raise AssertionError(
                f"bound report for {class_name} failed independent re-verification"
            )
    return report


def _load_checkpoint(path, class_name, max_n):
    if path is None or not os.path.exists(path):
        return set(), []
    with open(path) as fh:
        data = json.load(fh)
    if data.get("class") != class_name or data.get("max_n") != max_n:
        return set(), []
    found = [(bytes.fromhex(key), _thaw(tuple(_listify(item)))) for key, item in data["found"]]
    return set(data["done"]), found


def _listify(item):
    return [tuple(x) if isinstance(x, list) else x for x in item]


def _save_checkpoint(path, class_name, max_n, done, found):
    if path is None:
        return
    data = {
        "class": class_name,
        "max_n": max_n,
        "done": sorted(done),
        "found": [(key.hex(), _freeze(S)) for key, S in found],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Named probe-cograph bound fixtures.
# ---------------------------------------------------------------------------


def house():
    """Square a-d-b-e with roof apex c over the a-e side (a 5-vertex fan).

    Vertex order (a, b, c, d, e); the apex c is adjacent to a and e.
    """
    return Graph(5, [(0, 2), (2, 4), (0, 4), (0, 3), (3, 1), (1, 4)])


def c6_plus_chord():
    """The 6-cycle a-b-c-d-e-f with the extra chord c-f."""
    return Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (2, 5)])


def probe_bound_fixtures():
    """The named bounds of probe cographs, keyed by construction."""
    h = house()
    return {
        "C5": Graph.cycle(5),
        "P6": Graph.path(6),
        "C6": Graph.cycle(6),
        "co-C6": Graph.cycle(6).complement(),
        "C6+cf": c6_plus_chord(),
        "co-(C6+cf)": c6_plus_chord().complement(),
        "P5[a<-K2]": Graph.path(5).substitute_k2([0]),
        "P5[c<-K2]": Graph.path(5).substitute_k2([2]),
        "P4[a<-K2,b<-K2]": Graph.path(4).substitute_k2([0, 1]),
        "P4[a<-K2,d<-K2]": Graph.path(4).substitute_k2([0, 3]),
        "H[c<-K2]": h.substitute_k2([2]),
        "H[b<-K2,d<-K2]": h.substitute_k2([1, 3]),
    }

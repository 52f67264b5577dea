"""Betweenness in order-theoretic trees, probe cographs and their bounds."""

from treebetween.core import (
    Graph,
    TwoGraph,
    TernaryStructure,
    canonical_form,
    enumerate_up_to_iso,
    isomorphic,
)

__all__ = [
    "Graph",
    "TwoGraph",
    "TernaryStructure",
    "canonical_form",
    "enumerate_up_to_iso",
    "isomorphic",
]

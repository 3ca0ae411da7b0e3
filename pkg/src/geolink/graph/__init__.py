"""Embeddable property graph with chain-pattern queries and a mutation log."""

from geolink.graph.patterns import (
    Binding,
    ChainPattern,
    EdgeStep,
    NodeStep,
    any_dir,
    chain,
    into,
    node,
    out,
)
from geolink.graph.store import Edge, Node, PropertyGraph

__all__ = [
    "PropertyGraph",
    "Node",
    "Edge",
    "ChainPattern",
    "NodeStep",
    "EdgeStep",
    "Binding",
    "chain",
    "node",
    "out",
    "into",
    "any_dir",
]

"""Chain-pattern matching, grouped counting, and shortest-path search."""

from __future__ import annotations

from collections import deque

from geolink.errors import ValidationError
from geolink.graph.patterns import Binding, ChainPattern


def match_chain(graph, pattern: ChainPattern) -> list[Binding]:
    """Every binding satisfying the chain, sorted by its id assignment.

    Nodes and edges may repeat within a binding; the engine imposes no
    uniqueness beyond the pattern itself.
    """
    pattern.validate()
    steps = pattern.steps
    results: list[tuple[str, ...]] = []

    def extend(node, depth: int, acc: tuple[str, ...]) -> None:
        if depth == len(steps) - 1:
            results.append(acc)
            return
        edge_step = steps[depth + 1]
        node_step = steps[depth + 2]
        for edge, neighbor_id in _candidates(graph, node.id, edge_step):
            neighbor = graph.node(neighbor_id)
            if node_step.matches(neighbor):
                extend(neighbor, depth + 2, acc + (edge.id, neighbor.id))

    for start in graph.find_nodes(steps[0].label, dict(steps[0].props)):
        extend(start, 0, (start.id,))
    results.sort()
    return [Binding(assignment=a) for a in results]


def _candidates(graph, node_id: str, edge_step):
    """(edge, neighbor id) pairs leaving ``node_id`` along the step."""
    out = []
    if edge_step.direction in ("out", "any"):
        for edge in graph.out_edges(node_id, edge_step.label):
            out.append((edge, edge.target))
    if edge_step.direction in ("in", "any"):
        for edge in graph.in_edges(node_id, edge_step.label):
            if edge_step.direction == "any" and edge.source == edge.target:
                continue  # self-loop already seen on the out side
            out.append((edge, edge.source))
    return out


def count_groups(graph, pattern: ChainPattern, group_by_steps) -> list[tuple[tuple[str, ...], int]]:
    """Binding counts per distinct node tuple at the grouped steps,
    sorted by descending count, ties by group key."""
    pattern.validate()
    node_indices = set(pattern.node_step_indices)
    for idx in group_by_steps:
        if not isinstance(idx, int) or idx < 0 or idx >= len(pattern.steps):
            raise ValidationError(f"group step {idx} out of range")
        if idx not in node_indices:
            raise ValidationError(f"group step {idx} is not a node step")
    counts: dict[tuple[str, ...], int] = {}
    for binding in match_chain(graph, pattern):
        key = tuple(binding.assignment[i] for i in group_by_steps)
        counts[key] = counts.get(key, 0) + 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def find_path(graph, from_id: str, to_label: str, edge_labels, max_hops: int) -> list[str] | None:
    """One shortest path (breadth-first, neighbors in id order) from the
    start node to any node labeled ``to_label``, using only edges whose
    label is in ``edge_labels``, traversable in either direction.

    Returns alternating node/edge ids, or None when unreachable within
    ``max_hops``.
    """
    if max_hops < 1:
        raise ValidationError("max_hops must be at least 1")
    start = graph.node(from_id)  # raises NotFoundError for unknown ids
    if start.label == to_label:
        return [from_id]
    labels = set(edge_labels)
    visited = {from_id}
    queue: deque[tuple[str, list[str]]] = deque([(from_id, [from_id])])
    while queue:
        node_id, path = queue.popleft()
        hops = len(path) // 2
        if hops >= max_hops:
            continue
        neighbors = []
        for edge in graph.out_edges(node_id):
            if edge.label in labels:
                neighbors.append((edge.id, edge.target))
        for edge in graph.in_edges(node_id):
            if edge.label in labels:
                neighbors.append((edge.id, edge.source))
        neighbors.sort()
        for edge_id, neighbor_id in neighbors:
            if neighbor_id in visited:
                continue
            visited.add(neighbor_id)
            next_path = path + [edge_id, neighbor_id]
            if graph.node(neighbor_id).label == to_label:
                return next_path
            queue.append((neighbor_id, next_path))
    return None

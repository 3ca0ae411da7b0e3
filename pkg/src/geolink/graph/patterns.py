"""Chain-pattern query templates.

A pattern is a linear alternation of node and edge steps, e.g.
``chain(node("Person", name="b"), out("APPEARS_IN"), node("Project"))``.
Property filters are equality tests on scalar values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from geolink.errors import ValidationError

# Chains longer than this are rejected; the queries this engine serves are
# short hops, anything bigger belongs in a real query language.
MAX_NODE_STEPS = 6

DIRECTIONS = ("out", "in", "any")

Scalar = str | int | float | bool


def is_scalar(value) -> bool:
    return isinstance(value, (str, int, float, bool))


@dataclass(frozen=True)
class NodeStep:
    label: str
    props: tuple[tuple[str, Scalar], ...] = ()

    def matches(self, node) -> bool:
        if node.label != self.label:
            return False
        return all(node.properties.get(k) == v for k, v in self.props)


@dataclass(frozen=True)
class EdgeStep:
    label: str | None = None
    direction: str = "any"


@dataclass(frozen=True)
class ChainPattern:
    steps: tuple = field(default_factory=tuple)

    def validate(self) -> None:
        steps = self.steps
        if not steps or len(steps) % 2 == 0:
            raise ValidationError("pattern must alternate node/edge steps and end on a node")
        node_steps = 0
        for i, step in enumerate(steps):
            if i % 2 == 0:
                if not isinstance(step, NodeStep):
                    raise ValidationError(f"step {i} must be a node step")
                if not step.label:
                    raise ValidationError(f"step {i}: empty node label")
                for k, v in step.props:
                    if not is_scalar(v):
                        raise ValidationError(f"step {i}: property filter {k!r} is not scalar")
                node_steps += 1
            else:
                if not isinstance(step, EdgeStep):
                    raise ValidationError(f"step {i} must be an edge step")
                if step.direction not in DIRECTIONS:
                    raise ValidationError(f"step {i}: direction must be one of {DIRECTIONS}")
        if node_steps > MAX_NODE_STEPS:
            raise ValidationError(f"pattern exceeds {MAX_NODE_STEPS} node steps")

    @property
    def node_step_indices(self) -> list[int]:
        return list(range(0, len(self.steps), 2))


def node(label: str, **props) -> NodeStep:
    return NodeStep(label=label, props=tuple(sorted(props.items())))


def out(label: str | None = None) -> EdgeStep:
    return EdgeStep(label=label, direction="out")


def into(label: str | None = None) -> EdgeStep:
    """Edge traversed against its direction (target to source)."""
    return EdgeStep(label=label, direction="in")


def any_dir(label: str | None = None) -> EdgeStep:
    return EdgeStep(label=label, direction="any")


def chain(*steps) -> ChainPattern:
    pattern = ChainPattern(steps=tuple(steps))
    pattern.validate()
    return pattern


@dataclass(frozen=True)
class Binding:
    """One match: ids by step index (node ids at even, edge ids at odd)."""

    assignment: tuple[str, ...]

    @property
    def node_ids(self) -> tuple[str, ...]:
        return self.assignment[0::2]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self.assignment[1::2]

"""Typed multigraph of entities, and the model that constrains it.

A :class:`SystemModel` fixes the vocabulary: entity types, relationship
labels, which labels are symmetric, and which (from-type, to-type,
label) triples an edge may instantiate.  A :class:`SystemGraph` is an
immutable snapshot of entities and labelled edges over such a model.
Mutation helpers return new snapshots, so a graph in hand never changes
and can be shared freely across threads.

Symmetric edges are direction-free: they are stored once, with the
lexicographically smaller endpoint first, and match in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, NamedTuple

__all__ = [
    "GraphError",
    "UnknownEntityError",
    "GraphValidationError",
    "SystemModel",
    "SystemGraph",
    "IncidentEdge",
    "validate_model",
    "validate_graph",
]


class GraphError(Exception):
    pass


class UnknownEntityError(GraphError):
    def __init__(self, entity: str):
        super().__init__(f"unknown entity {entity!r}")
        self.entity = entity


class GraphValidationError(GraphError):
    """Raised when a graph or model is rejected; carries all violations."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid")


Direction = Literal["out", "in", "sym"]

_DIRECTION_RANK = {"out": 0, "in": 1, "sym": 2}


class IncidentEdge(NamedTuple):
    neighbor: str
    label: str
    direction: Direction


@dataclass(frozen=True)
class SystemModel:
    """Vocabulary and typing discipline for system graphs."""

    types: frozenset[str]
    labels: frozenset[str]
    symmetric: frozenset[str]
    permissible: frozenset[tuple[str, str, str]]  # (from_type, to_type, label)

    def __init__(self, types, labels, symmetric=(), permissible=()):
        object.__setattr__(self, "types", frozenset(types))
        object.__setattr__(self, "labels", frozenset(labels))
        object.__setattr__(self, "symmetric", frozenset(symmetric))
        object.__setattr__(self, "permissible", frozenset(tuple(t) for t in permissible))


def validate_model(model: SystemModel) -> list[str]:
    """Internal consistency violations of the model itself, as messages."""
    problems = []
    for label in sorted(model.symmetric - model.labels):
        problems.append(f"symmetric label {label!r} is not a declared label")
    for from_type, to_type, label in sorted(model.permissible):
        if from_type not in model.types:
            problems.append(f"permissible triple ({from_type!r}, {to_type!r}, {label!r}): unknown type {from_type!r}")
        if to_type not in model.types:
            problems.append(f"permissible triple ({from_type!r}, {to_type!r}, {label!r}): unknown type {to_type!r}")
        if label not in model.labels:
            problems.append(f"permissible triple ({from_type!r}, {to_type!r}, {label!r}): unknown label {label!r}")
    return problems


class SystemGraph:
    """Immutable snapshot of the entity multigraph.

    ``entities`` maps entity id to type name; ``edges`` is any iterable
    of (from, to, label) triples.  Duplicate triples collapse.  By
    default construction validates the model and graph and raises
    :class:`GraphValidationError`; pass ``validate=False`` to build an
    unchecked snapshot and inspect :func:`validate_graph` output
    instead.
    """

    __slots__ = ("model", "_types", "_edges", "_incident")

    def __init__(
        self,
        model: SystemModel,
        entities: Mapping[str, str] | Iterable[tuple[str, str]],
        edges: Iterable[tuple[str, str, str]] = (),
        *,
        validate: bool = True,
    ):
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "_types", dict(entities))
        sym = model.symmetric
        stored = set()
        for from_id, to_id, label in edges:
            if label in sym and to_id < from_id:
                from_id, to_id = to_id, from_id
            stored.add((from_id, to_id, label))
        object.__setattr__(self, "_edges", frozenset(stored))
        object.__setattr__(self, "_incident", None)
        if validate:
            problems = validate_model(model) + validate_graph(self)
            if problems:
                raise GraphValidationError(problems)

    def __setattr__(self, name, value):
        raise AttributeError("SystemGraph is immutable; use with_/without_ helpers")

    # -- lookups ---------------------------------------------------------

    @property
    def entity_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._types))

    @property
    def entity_types(self) -> Mapping[str, str]:
        return dict(self._types)

    @property
    def edges(self) -> frozenset[tuple[str, str, str]]:
        """Stored triples; symmetric ones have the smaller endpoint first."""
        return self._edges

    def __contains__(self, entity: str) -> bool:
        return entity in self._types

    def __len__(self) -> int:
        return len(self._types)

    def has_entity(self, entity: str) -> bool:
        return entity in self._types

    def type_of(self, entity: str) -> str:
        try:
            return self._types[entity]
        except KeyError:
            raise UnknownEntityError(entity) from None

    def has_edge(self, from_id: str, to_id: str, label: str) -> bool:
        """Whether the edge holds from ``from_id`` to ``to_id``.

        Symmetric labels hold in both directions; for other labels the
        (from, to, label) and (to, from, label) triples are independent.
        """
        if label in self.model.symmetric and to_id < from_id:
            from_id, to_id = to_id, from_id
        return (from_id, to_id, label) in self._edges

    def edges_incident(self, entity: str) -> tuple[IncidentEdge, ...]:
        """Edges touching ``entity``, in a deterministic order.

        Order: all ``out`` edges, then ``in``, then ``sym``, each group
        sorted by (neighbor, label).  Symmetric edges appear once per
        stored edge, as direction ``sym``.
        """
        if entity not in self._types:
            raise UnknownEntityError(entity)
        index = self._incident_index()
        return index.get(entity, ())

    def _incident_index(self) -> dict[str, tuple[IncidentEdge, ...]]:
        index = self._incident
        if index is None:
            sym = self.model.symmetric
            by_node: dict[str, list[IncidentEdge]] = {}
            for from_id, to_id, label in self._edges:
                if label in sym:
                    by_node.setdefault(from_id, []).append(IncidentEdge(to_id, label, "sym"))
                    if to_id != from_id:
                        by_node.setdefault(to_id, []).append(IncidentEdge(from_id, label, "sym"))
                else:
                    by_node.setdefault(from_id, []).append(IncidentEdge(to_id, label, "out"))
                    by_node.setdefault(to_id, []).append(IncidentEdge(from_id, label, "in"))
            index = {
                node: tuple(sorted(items, key=lambda e: (_DIRECTION_RANK[e.direction], e.neighbor, e.label)))
                for node, items in by_node.items()
            }
            object.__setattr__(self, "_incident", index)
        return index

    # -- functional updates ----------------------------------------------

    def with_entity(self, entity: str, type_name: str) -> "SystemGraph":
        """New snapshot with the entity added; rejects ill-formed additions."""
        problems = []
        if entity in self._types:
            problems.append(f"entity {entity!r} already exists")
        if type_name not in self.model.types:
            problems.append(f"entity {entity!r} has unknown type {type_name!r}")
        if problems:
            raise GraphValidationError(problems)
        entities = dict(self._types)
        entities[entity] = type_name
        return SystemGraph(self.model, entities, self._edges, validate=False)

    def with_edge(self, from_id: str, to_id: str, label: str) -> "SystemGraph":
        """New snapshot with the edge added; rejects ill-formed additions."""
        problems = _edge_problems(self.model, self._types, from_id, to_id, label)
        if problems:
            raise GraphValidationError(problems)
        return SystemGraph(self.model, self._types, self._edges | {(from_id, to_id, label)}, validate=False)

    def without_edge(self, from_id: str, to_id: str, label: str) -> "SystemGraph":
        if label in self.model.symmetric and to_id < from_id:
            from_id, to_id = to_id, from_id
        return SystemGraph(self.model, self._types, self._edges - {(from_id, to_id, label)}, validate=False)

    def without_entity(self, entity: str) -> "SystemGraph":
        """New snapshot with the entity and its incident edges removed."""
        if entity not in self._types:
            raise UnknownEntityError(entity)
        entities = dict(self._types)
        del entities[entity]
        edges = {e for e in self._edges if entity not in (e[0], e[1])}
        return SystemGraph(self.model, entities, edges, validate=False)

    def __repr__(self) -> str:
        return f"SystemGraph({len(self._types)} entities, {len(self._edges)} edges)"


def _edge_problems(model, types, from_id, to_id, label) -> list[str]:
    problems = []
    for endpoint in (from_id, to_id):
        if endpoint not in types:
            problems.append(f"edge ({from_id!r}, {to_id!r}, {label!r}): unknown entity {endpoint!r}")
    if label not in model.labels:
        problems.append(f"edge ({from_id!r}, {to_id!r}, {label!r}): unknown label {label!r}")
    if problems:
        return problems
    from_type, to_type = types[from_id], types[to_id]
    allowed = (from_type, to_type, label) in model.permissible
    if label in model.symmetric:
        # symmetric edges carry no direction, so either typing orientation counts
        allowed = allowed or (to_type, from_type, label) in model.permissible
    if not allowed:
        problems.append(
            f"edge ({from_id!r}, {to_id!r}, {label!r}): "
            f"({from_type!r}, {to_type!r}, {label!r}) is not permissible"
        )
    return problems


def validate_graph(graph: SystemGraph) -> list[str]:
    """Well-formedness violations of the graph under its model.

    Checks entity types against the model and every edge against the
    vocabulary and the permissible triples.  Returns messages; an empty
    list means well-formed.
    """
    problems = []
    types = graph._types
    for entity in sorted(types):
        type_name = types[entity]
        if type_name not in graph.model.types:
            problems.append(f"entity {entity!r} has unknown type {type_name!r}")
        if entity == "*":
            problems.append("entity id '*' is reserved for the wildcard object")
    for from_id, to_id, label in sorted(graph._edges):
        known = all(e in types and types[e] in graph.model.types for e in (from_id, to_id))
        if known:
            problems.extend(_edge_problems(graph.model, types, from_id, to_id, label))
        else:
            for endpoint in (from_id, to_id):
                if endpoint not in types:
                    problems.append(f"edge ({from_id!r}, {to_id!r}, {label!r}): unknown entity {endpoint!r}")
    return problems

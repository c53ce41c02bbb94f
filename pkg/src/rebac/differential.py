"""Randomized differential checking of the matcher against the oracle.

Generates small random graphs and conditions with a seeded RNG and
compares :func:`rebac.matching.match_path` with
:func:`rebac.oracle.oracle_satisfies` on every instance.  The two
deciders share no traversal code, so agreement over large runs is
strong evidence for both.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .graph import SystemGraph, SystemModel
from .matching import match_path
from .oracle import oracle_satisfies
from .paths import (
    DIAMOND,
    Concat,
    EdgeCondition,
    PathCondition,
    Plus,
    Reverse,
    render,
)

__all__ = [
    "random_graph",
    "random_simple_condition",
    "random_condition",
    "Disagreement",
    "DifferentialReport",
    "run_differential",
]

DEFAULT_LABELS = ("a", "b", "c")
DEFAULT_SYMMETRIC = ("c",)


def _model(labels, symmetric) -> SystemModel:
    # a single entity type keeps every random edge permissible
    return SystemModel(
        types=["node"],
        labels=labels,
        symmetric=symmetric,
        permissible=[("node", "node", label) for label in labels],
    )


def random_graph(
    rng: random.Random,
    *,
    max_nodes: int = 8,
    labels=DEFAULT_LABELS,
    symmetric=DEFAULT_SYMMETRIC,
) -> SystemGraph:
    """Random multigraph over a single node type; self-loops included."""
    model = _model(labels, symmetric)
    count = rng.randint(2, max_nodes)
    nodes = [f"n{i}" for i in range(count)]
    edges = set()
    for _ in range(rng.randint(0, 2 * count)):
        edges.add((rng.choice(nodes), rng.choice(nodes), rng.choice(labels)))
    return SystemGraph(model, {n: "node" for n in nodes}, edges)


def random_simple_condition(rng: random.Random, labels=DEFAULT_LABELS, max_length: int = 6) -> PathCondition:
    """Random condition already in simple form (reversal on labels only)."""
    target = rng.randint(0, max_length)
    if target == 0:
        return DIAMOND

    def build(size: int, depth: int) -> PathCondition:
        if depth < 3 and rng.random() < 0.3:
            return Plus(build(size, depth + 1))
        if size == 1:
            return EdgeCondition(rng.choice(labels), rng.random() < 0.4)
        split = rng.randint(1, size - 1)
        return Concat(build(split, depth), build(size - split, depth))

    return build(target, 0)


def random_condition(rng: random.Random, labels=DEFAULT_LABELS, max_size: int = 8) -> PathCondition:
    """Random raw condition: reversal and the empty condition anywhere."""

    def build(budget: int) -> PathCondition:
        roll = rng.random()
        if budget <= 1:
            if roll < 0.15:
                return DIAMOND
            return EdgeCondition(rng.choice(labels), rng.random() < 0.4)
        if roll < 0.35:
            split = rng.randint(1, budget - 1)
            return Concat(build(split), build(budget - split))
        if roll < 0.55:
            return Reverse(build(budget - 1))
        if roll < 0.75:
            return Plus(build(budget - 1))
        if roll < 0.85:
            return DIAMOND
        return EdgeCondition(rng.choice(labels), rng.random() < 0.4)

    return build(rng.randint(1, max_size))


@dataclass
class Disagreement:
    graph: SystemGraph
    source: str
    target: str
    condition: PathCondition
    matcher: bool
    oracle: bool

    def __str__(self) -> str:
        return (
            f"matcher={self.matcher} oracle={self.oracle} for "
            f"({self.source!r}, {self.target!r}) under {render(self.condition, allow_star=True)} "
            f"on {sorted(self.graph.edges)}"
        )


@dataclass
class DifferentialReport:
    trials: int
    agreements: int
    elapsed: float
    first_disagreement: Disagreement | None = None

    @property
    def agreed(self) -> bool:
        return self.agreements == self.trials


def run_differential(
    seed: int,
    trials: int,
    *,
    max_nodes: int = 8,
    labels=DEFAULT_LABELS,
    symmetric=DEFAULT_SYMMETRIC,
    max_length: int = 6,
) -> DifferentialReport:
    """Run seeded random instances through both deciders.

    Stops recording after the first disagreement but keeps counting, so
    the report always reflects the full run.
    """
    rng = random.Random(seed)
    agreements = 0
    first = None
    started = time.perf_counter()
    for _ in range(trials):
        graph = random_graph(rng, max_nodes=max_nodes, labels=labels, symmetric=symmetric)
        condition = random_simple_condition(rng, labels=labels, max_length=max_length)
        nodes = graph.entity_ids
        source, target = rng.choice(nodes), rng.choice(nodes)
        got = match_path(graph, source, target, condition).found
        expected = oracle_satisfies(graph, source, target, condition)
        if got == expected:
            agreements += 1
        elif first is None:
            first = Disagreement(graph, source, target, condition, got, expected)
    return DifferentialReport(trials, agreements, time.perf_counter() - started, first)

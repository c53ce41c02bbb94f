"""Independent decision procedure for path-condition satisfaction.

A condition compiles to a small nondeterministic automaton over edge
conditions; satisfaction between two nodes is reachability in the
product of the graph and the automaton.  This shares no traversal code
with the matcher in :mod:`rebac.matching`; the two are kept separate on
purpose so they can check each other differentially.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import SystemGraph, UnknownEntityError
from .paths import (
    Concat,
    Diamond,
    EdgeCondition,
    PathCondition,
    Plus,
    Star,
    simplify,
)

__all__ = ["PathNfa", "compile_nfa", "oracle_satisfies", "satisfying_targets"]


@dataclass(frozen=True)
class PathNfa:
    """Automaton over edge conditions; ``None`` transitions are epsilon."""

    start: int
    accept: int
    transitions: tuple[tuple[int, EdgeCondition | None, int], ...]
    state_count: int


def compile_nfa(pc: PathCondition) -> PathNfa:
    """Compile a condition (any form; canonicalized first) to an NFA.

    The construction is structural: a label becomes a single labelled
    transition, the empty condition an epsilon, concatenation chains
    fragments, and one-or-more adds a loop back around its fragment, so
    the state count stays within twice the condition size.
    """
    pc = simplify(pc)
    counter = itertools.count()
    transitions: list[tuple[int, EdgeCondition | None, int]] = []

    def fresh() -> int:
        return next(counter)

    def build(node: PathCondition, src: int, dst: int) -> None:
        if isinstance(node, Diamond):
            transitions.append((src, None, dst))
        elif isinstance(node, EdgeCondition):
            transitions.append((src, node, dst))
        elif isinstance(node, Concat):
            mid = fresh()
            build(node.left, src, mid)
            build(node.right, mid, dst)
        elif isinstance(node, (Plus, Star)):
            enter, leave = fresh(), fresh()
            transitions.append((src, None, enter))
            build(node.inner, enter, leave)
            transitions.append((leave, None, dst))
            transitions.append((leave, None, enter))  # repeat
            if isinstance(node, Star):
                transitions.append((src, None, dst))  # zero occurrences
        else:
            raise TypeError(f"not a simple path condition: {node!r}")

    start, accept = fresh(), fresh()
    build(pc, start, accept)
    return PathNfa(start, accept, tuple(transitions), next(counter))


def _product_reach(graph: SystemGraph, source: str, nfa: PathNfa, target: str | None):
    """Graph nodes paired with the accept state, reachable from
    (source, start).  Stops early when ``target`` is among them."""
    epsilon: dict[int, list[int]] = {}
    labelled: dict[int, list[tuple[EdgeCondition, int]]] = {}
    for src, cond, dst in nfa.transitions:
        if cond is None:
            epsilon.setdefault(src, []).append(dst)
        else:
            labelled.setdefault(src, []).append((cond, dst))

    entities = graph.entity_ids
    accepting: set[str] = set()
    seen = {(source, nfa.start)}
    stack = [(source, nfa.start)]
    while stack:
        node, state = stack.pop()
        if state == nfa.accept:
            accepting.add(node)
            if node == target:
                return accepting
        for nxt in epsilon.get(state, ()):
            item = (node, nxt)
            if item not in seen:
                seen.add(item)
                stack.append(item)
        for cond, nxt in labelled.get(state, ()):
            for other in entities:
                if cond.reversed:
                    holds = graph.has_edge(other, node, cond.label)
                else:
                    holds = graph.has_edge(node, other, cond.label)
                if holds:
                    item = (other, nxt)
                    if item not in seen:
                        seen.add(item)
                        stack.append(item)
    return accepting


def oracle_satisfies(graph: SystemGraph, source: str, target: str, pc: PathCondition) -> bool:
    """Ground-truth satisfaction of ``pc`` between two entities."""
    for entity in (source, target):
        if not graph.has_entity(entity):
            raise UnknownEntityError(entity)
    nfa = compile_nfa(pc)
    return target in _product_reach(graph, source, nfa, target)


def satisfying_targets(graph: SystemGraph, source: str, pc: PathCondition) -> frozenset[str]:
    """All entities the condition connects ``source`` to."""
    if not graph.has_entity(source):
        raise UnknownEntityError(source)
    nfa = compile_nfa(pc)
    return frozenset(_product_reach(graph, source, nfa, None))

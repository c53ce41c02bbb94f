"""Principal matching: breadth-first search driven by path conditions.

:func:`match_path` decides whether a condition connects two entities by
exploring (node, residual condition) work items.  Each dequeued item
peels the residual's head edge condition against the node's incident
edges; traversing an edge leaves the residual's suffix to satisfy from
the neighbor.  A residual whose first factor is a zero-or-more
repetition is unfolded on dequeue into its zero branch and its
one-or-more branch, recursively, since zero branches can expose further
repetitions.  A seen set over (node, residual) pairs bounds the work by
|V| * (length + plus_count + 1).

:func:`match_principals` runs an ordered rule list against a request
and collects the principals of matching rules, either stopping at the
first match or evaluating every rule.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Sequence

from .graph import SystemGraph, UnknownEntityError
from .paths import (
    DIAMOND,
    Concat,
    PathCondition,
    Plus,
    Star,
    head,
    length,
    plus_count,
    render,
    simplify,
    suffix,
)

__all__ = [
    "TOP",
    "MatchStrategy",
    "PrincipalMatchingRule",
    "PolicyError",
    "MatchMetrics",
    "MatchResult",
    "RuleEvaluation",
    "PrincipalMatching",
    "match_path",
    "match_principals",
    "validate_policy",
]


class _Top:
    """Catch-all rule condition: applies to every request."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"


TOP = _Top()


class MatchStrategy(str, Enum):
    """How many principal-matching rules a request is evaluated against."""

    FIRST_MATCH = "FirstMatch"
    ALL_MATCH = "AllMatch"


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class PrincipalMatchingRule:
    """Pairs a path condition (or TOP) with the principal it identifies."""

    condition: PathCondition | _Top
    principal: str


@dataclass
class MatchMetrics:
    """Instrumentation for one match_path run.

    ``nodes_visited`` counts distinct graph nodes dequeued,
    ``edges_considered`` counts edge-versus-head comparisons (symmetric
    edges count twice: both traversal senses are attempted), and
    ``pairs_seen`` is the size of the (node, residual) seen set, the
    quantity the termination bound speaks about.
    """

    nodes_visited: int = 0
    edges_considered: int = 0
    queue_peak: int = 0
    pairs_seen: int = 0


class MatchResult(NamedTuple):
    found: bool
    metrics: MatchMetrics


def _unfold(residual: PathCondition) -> list[PathCondition]:
    """Expand leading zero-or-more repetitions into star-free-headed
    branches.  May yield the empty condition (a zero branch that
    consumed the whole residual); duplicates are dropped."""
    out: list[PathCondition] = []
    queue = [residual]
    expanded: set[PathCondition] = set()
    while queue:
        pc = queue.pop()
        if pc in expanded:
            continue
        expanded.add(pc)
        if isinstance(pc, Star):
            starred, rest = pc.inner, DIAMOND
        elif isinstance(pc, Concat) and isinstance(pc.left, Star):
            starred, rest = pc.left.inner, pc.right
        else:
            out.append(pc)
            continue
        queue.append(rest)  # zero occurrences
        plussed = Concat(Plus(starred), rest) if rest != DIAMOND else Plus(starred)
        queue.append(plussed)  # one or more occurrences
    return out


def match_path(
    graph: SystemGraph,
    source: str,
    target: str,
    condition: PathCondition,
    *,
    trace: Callable[[str], None] | None = None,
) -> MatchResult:
    """Decide whether ``condition`` connects ``source`` to ``target``.

    Deterministic: work items are processed first-in first-out and each
    node's incident edges are iterated in their stored order, so
    repeated runs report identical metrics.  ``trace`` receives one line
    per dequeued work item.
    """
    for entity in (source, target):
        if not graph.has_entity(entity):
            raise UnknownEntityError(entity)

    pi = simplify(condition)
    metrics = MatchMetrics()
    if pi == DIAMOND:
        # the empty condition needs no traversal at all
        return MatchResult(source == target, metrics)

    bound = len(graph) * (length(pi) + plus_count(pi) + 1)
    seen: set[tuple[str, PathCondition]] = {(source, pi)}
    queue: deque[tuple[str, PathCondition]] = deque([(source, pi)])
    metrics.queue_peak = 1
    visited: set[str] = set()

    def finish(found: bool) -> MatchResult:
        metrics.nodes_visited = len(visited)
        metrics.pairs_seen = len(seen)
        assert len(seen) <= bound, f"seen {len(seen)} pairs, bound {bound}"
        return MatchResult(found, metrics)

    while queue:
        node, residual = queue.popleft()
        visited.add(node)

        active: list[PathCondition] = []
        for branch in _unfold(residual):
            if branch == DIAMOND:
                # a zero branch consumed everything: target check here
                if node == target:
                    if trace:
                        trace(f"{node}  [{render(residual, allow_star=True)}]  matched {target}")
                    return finish(True)
                continue
            if branch == residual:
                active.append(branch)
            elif (node, branch) not in seen:
                seen.add((node, branch))
                active.append(branch)

        enqueued = 0
        for branch in active:
            want = head(branch)
            rest = suffix(branch)
            for neighbor, label, direction in graph.edges_incident(node):
                if direction == "sym":
                    # a symmetric edge is tried in both senses
                    metrics.edges_considered += 2
                    crossed = want.label == label
                else:
                    metrics.edges_considered += 1
                    crossed = want.label == label and want.reversed == (direction == "in")
                if not crossed:
                    continue
                if rest == DIAMOND:
                    if neighbor == target:
                        if trace:
                            trace(f"{node}  [{render(residual, allow_star=True)}]  matched {target}")
                        return finish(True)
                    continue
                item = (neighbor, rest)
                if item not in seen:
                    seen.add(item)
                    queue.append(item)
                    enqueued += 1
        if len(queue) > metrics.queue_peak:
            metrics.queue_peak = len(queue)
        if trace:
            outcome = f"enqueued {enqueued}" if enqueued else "dead end"
            trace(f"{node}  [{render(residual, allow_star=True)}]  {outcome}")

    return finish(False)


@dataclass
class RuleEvaluation:
    """Record of one rule's run within match_principals."""

    rule_number: int  # 1-based position in the policy
    principal: str
    condition: str  # rendered condition text, or "TOP"
    found: bool
    metrics: MatchMetrics


@dataclass
class PrincipalMatching:
    principals: list[str]
    evaluations: list[RuleEvaluation] = field(default_factory=list)


def validate_policy(rules: Sequence[PrincipalMatchingRule]) -> list[str]:
    """Violations of principal-matching policy shape, as messages."""
    problems = []
    for position, rule in enumerate(rules, start=1):
        if rule.condition is TOP:
            if position != len(rules):
                problems.append(f"rule {position}: TOP is only allowed as the last rule")
        elif isinstance(rule.condition, PathCondition):
            if _contains_star(rule.condition):
                problems.append(f"rule {position}: '*' conditions are internal and not allowed in policies")
        else:
            problems.append(f"rule {position}: condition is neither a path condition nor TOP")
    return problems


def _contains_star(pc: PathCondition) -> bool:
    if isinstance(pc, Star):
        return True
    if isinstance(pc, Concat):
        return _contains_star(pc.left) or _contains_star(pc.right)
    if isinstance(pc, Plus):
        return _contains_star(pc.inner)
    if hasattr(pc, "inner"):
        return _contains_star(pc.inner)
    return False


def match_principals(
    graph: SystemGraph,
    subject: str,
    object_: str,
    rules: Sequence[PrincipalMatchingRule],
    strategy: MatchStrategy = MatchStrategy.ALL_MATCH,
    *,
    trace: Callable[[str], None] | None = None,
) -> PrincipalMatching:
    """Ordered principals whose rules match the (subject, object) pair.

    FirstMatch stops at the first matching rule; AllMatch evaluates the
    whole policy and deduplicates principals, keeping first occurrence.
    A TOP rule (validated to sit last) matches whenever evaluated, so
    under either strategy it acts as the default principal.
    """
    problems = validate_policy(rules)
    if problems:
        raise PolicyError("; ".join(problems))

    principals: list[str] = []
    evaluations: list[RuleEvaluation] = []
    for number, rule in enumerate(rules, start=1):
        if rule.condition is TOP:
            found, metrics = True, MatchMetrics()
            condition_text = "TOP"
        else:
            rule_trace = None
            if trace:
                rule_trace = lambda line, _n=number: trace(f"rule {_n}: {line}")
            found, metrics = match_path(graph, subject, object_, rule.condition, trace=rule_trace)
            condition_text = render(rule.condition)
        evaluations.append(RuleEvaluation(number, rule.principal, condition_text, found, metrics))
        if found:
            if rule.principal not in principals:
                principals.append(rule.principal)
            if strategy is MatchStrategy.FIRST_MATCH:
                break
    return PrincipalMatching(principals, evaluations)

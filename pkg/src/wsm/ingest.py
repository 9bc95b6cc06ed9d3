"""Learning a concept graph from concept streams.

Strengths come from forward-window co-occurrence counts, row-normalized per
source concept; relations come from an ordered rule list (first match wins).
Both learners are plain objects so another estimator can be swapped in
behind the same ``estimate``/``label`` calls.
"""
from __future__ import annotations

import fnmatch
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

from .errors import EmptyModelError, InvalidInputError, InvalidParameterError, ParseError
from .graph import ConceptGraph, RelationVocabulary

CATCH_ALL_RELATION = "co-occurs-with"

Pair = tuple[str, str]


@dataclass
class CooccurrenceTable:
    """Directed pair counts within a forward window.

    ``between`` records, per pair, the tokens seen strictly between the two
    positions; relation rules with a marker token consult it.
    """

    window: int = 1
    counts: Counter = field(default_factory=Counter)
    between: dict[Pair, set[str]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.counts)

    def merge(self, other: CooccurrenceTable) -> CooccurrenceTable:
        """Count-additive merge; associative and commutative."""
        if other.window != self.window:
            raise InvalidParameterError(f"cannot merge tables with windows {self.window} and {other.window}")
        out = CooccurrenceTable(self.window, self.counts + other.counts)
        for table in (self, other):
            for pair, toks in table.between.items():
                out.between.setdefault(pair, set()).update(toks)
        return out

    def rows(self, min_count: int = 1) -> dict[str, dict[str, int]]:
        """Surviving counts grouped by source content."""
        rows: dict[str, dict[str, int]] = {}
        for (a, b), n in sorted(self.counts.items()):
            if n >= min_count:
                rows.setdefault(a, {})[b] = n
        return rows


def _check_stream(stream: Sequence[str]) -> list[str]:
    tokens = list(stream)
    for tok in tokens:
        if not isinstance(tok, str) or not tok:
            raise InvalidInputError(f"stream tokens must be non-empty strings, got {tok!r}")
    return tokens


def accumulate(table: CooccurrenceTable, stream: Sequence[str], window: int | None = None) -> CooccurrenceTable:
    """Add the ordered pairs (tokens[i], tokens[j]) for i < j <= i + window to ``table``.

    Pairs of identical tokens are skipped (a concept never connects to itself).
    The table is updated in place and returned.
    """
    if window is None:
        window = table.window
    if not isinstance(window, int) or window < 1:
        raise InvalidParameterError(f"window must be a positive integer, got {window!r}")
    if window != table.window:
        if table.counts:
            raise InvalidParameterError(f"table was built with window {table.window}, not {window}")
        table.window = window
    tokens = _check_stream(stream)
    for i, a in enumerate(tokens):
        for j in range(i + 1, min(i + window, len(tokens) - 1) + 1):
            b = tokens[j]
            if a == b:
                continue
            table.counts[(a, b)] += 1
            if j > i + 1:
                table.between.setdefault((a, b), set()).update(tokens[i + 1 : j])
    return table


@dataclass(frozen=True)
class RelationRule:
    """``from_pattern`` / ``to_pattern`` are shell-style globs (``*`` matches anything).

    With a marker, the rule only fires if the marker token was observed
    between the two contents inside the window.
    """

    from_pattern: str
    to_pattern: str
    relation: int
    marker: str | None = None

    def matches(self, source: str, target: str, between: Iterable[str] = ()) -> bool:
        if not fnmatch.fnmatchcase(source, self.from_pattern):
            return False
        if not fnmatch.fnmatchcase(target, self.to_pattern):
            return False
        return self.marker is None or self.marker in between


class RuleRelationLabeler:
    def __init__(self, rules: Sequence[RelationRule], vocabulary: RelationVocabulary):
        for rule in rules:
            if rule.relation not in vocabulary:
                raise InvalidParameterError(f"rule relation {rule.relation} not in vocabulary")
        self.rules = list(rules)
        self.vocabulary = vocabulary
        self.fallback = catch_all_index(vocabulary)

    def label(self, source: str, target: str, between: Iterable[str] = ()) -> int:
        between = set(between)
        for rule in self.rules:
            if rule.matches(source, target, between):
                return rule.relation
        return self.fallback


def catch_all_index(vocabulary: RelationVocabulary) -> int:
    """Index of the co-occurrence relation, or the last relation if the vocabulary lacks one."""
    if CATCH_ALL_RELATION in vocabulary.names:
        return vocabulary.index(CATCH_ALL_RELATION)
    return len(vocabulary)


class StrengthLearner(Protocol):
    def estimate(self, table: CooccurrenceTable, min_count: int) -> dict[str, dict[str, int | float]]:
        ...


class CountingStrengthLearner:
    """Raw weight of a -> b is its surviving co-occurrence count; the graph normalizes rows."""

    def estimate(self, table: CooccurrenceTable, min_count: int) -> dict[str, dict[str, int]]:
        return table.rows(min_count)


def parse_rules(text: str, vocabulary: RelationVocabulary) -> list[RelationRule]:
    """Parse ``<from-pattern> <marker|-> <to-pattern> <relation-label>`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(line_no, "rule needs: <from-pattern> <marker|-> <to-pattern> <relation-label>")
        src, marker, dst, label = parts
        if label not in vocabulary.names:
            raise ParseError(line_no, f"unknown relation label {label!r}")
        rules.append(RelationRule(src, dst, vocabulary.index(label), None if marker == "-" else marker))
    return rules


def load_rules(path: str | os.PathLike, vocabulary: RelationVocabulary) -> list[RelationRule]:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read(), vocabulary)


def read_corpus(text: str) -> list[list[str]]:
    """One stream per line, whitespace-separated tokens; blank lines are skipped."""
    return [line.split() for line in text.splitlines() if line.strip()]


def _check_min_count(min_count) -> None:
    if not isinstance(min_count, int) or min_count < 0:
        raise InvalidParameterError(f"min_count must be a non-negative integer, got {min_count!r}")


def _apply_rows(graph: ConceptGraph, table: CooccurrenceTable, rows, labeler: RuleRelationLabeler) -> None:
    for source in sorted(rows):
        sid = graph.add_concept(source)
        raw = []
        for target in sorted(rows[source]):
            tid = graph.add_concept(target)
            relation = labeler.label(source, target, table.between.get((source, target), ()))
            raw.append((tid, rows[source][target], relation))
        graph.set_connections(sid, raw)


def build_graph(
    table: CooccurrenceTable,
    rules: Sequence[RelationRule] = (),
    vocabulary: RelationVocabulary | None = None,
    min_count: int = 1,
    learner: StrengthLearner | None = None,
) -> ConceptGraph:
    """Fresh graph with one concept per content in any pair surviving ``min_count``."""
    _check_min_count(min_count)
    vocabulary = vocabulary or RelationVocabulary()
    learner = learner or CountingStrengthLearner()
    rows = learner.estimate(table, min_count)
    if not rows:
        raise EmptyModelError(f"no co-occurring pairs survive min_count={min_count}")
    graph = ConceptGraph(vocabulary)
    contents = sorted(set(rows) | {t for row in rows.values() for t in row})
    for content in contents:
        graph.add_concept(content)
    _apply_rows(graph, table, rows, RuleRelationLabeler(rules, vocabulary))
    return graph


@dataclass
class IngestReport:
    new_concepts: list[str]
    total_concepts: int
    total_edges: int
    pairs_seen: int
    dropped_pairs: int
    updated_sources: int

    def summary(self) -> str:
        return (
            f"concepts {self.total_concepts} (new {len(self.new_concepts)}) "
            f"edges {self.total_edges} pairs {self.pairs_seen} dropped {self.dropped_pairs} "
            f"updated_sources {self.updated_sources}"
        )


def ingest_corpus(
    graph: ConceptGraph,
    streams: Sequence[Sequence[str]],
    window: int = 2,
    min_count: int = 1,
    rules: Sequence[RelationRule] = (),
    learner: StrengthLearner | None = None,
) -> IngestReport:
    """Re-estimate out-strengths of every source seen in ``streams``, in place.

    Existing ids are kept; sources absent from the corpus keep their edges.
    """
    streams = list(streams)
    if not streams:
        raise InvalidInputError("no streams to ingest")
    _check_min_count(min_count)
    table = CooccurrenceTable(window)
    for stream in streams:
        accumulate(table, stream, window)
    learner = learner or CountingStrengthLearner()
    rows = learner.estimate(table, min_count)
    if not rows:
        raise EmptyModelError(f"no co-occurring pairs survive min_count={min_count}")

    before = graph.concept_count
    contents = sorted(set(rows) | {t for row in rows.values() for t in row})
    for content in contents:
        graph.add_concept(content)
    _apply_rows(graph, table, rows, RuleRelationLabeler(rules, graph.vocabulary))
    surviving = sum(len(r) for r in rows.values())
    return IngestReport(
        new_concepts=[c.content for c in graph.concepts[before:]],
        total_concepts=graph.concept_count,
        total_edges=graph.edge_count,
        pairs_seen=len(table.counts),
        dropped_pairs=len(table.counts) - surviving,
        updated_sources=len(rows),
    )

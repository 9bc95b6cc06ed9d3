"""Concept graph: concepts joined by directed, typed, strength-weighted edges.

Strengths are stored normalized (the out-strengths of a concept are the
probabilities of activating each neighbour and sum to one) and each
connection list is kept sorted strongest-first, ties by ascending target id.
Concept 0 is the self concept and exists in every graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    InvalidContentError,
    InvalidEdgeError,
    InvalidParameterError,
    InvalidVocabularyError,
    UnknownConceptError,
)

SELF_ID = 0
SELF_CONTENT = "self"

DEFAULT_RELATIONS = (
    "is-a",
    "instance-of",
    "part-of",
    "has-attribute",
    "related-to",
    "contrary-of",
    "causes",
    "co-occurs-with",
)

NORMALIZATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RelationVocabulary:
    """Ordered relation labels; label ``names[i - 1]`` has index ``i``."""

    names: tuple[str, ...] = DEFAULT_RELATIONS

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise InvalidVocabularyError("relation vocabulary must not be empty")
        for name in names:
            if not isinstance(name, str) or not name or any(c.isspace() for c in name):
                raise InvalidVocabularyError(f"invalid relation label {name!r}")
        if len(set(names)) != len(names):
            raise InvalidVocabularyError("relation labels must be unique")

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, index) -> bool:
        return isinstance(index, int) and 1 <= index <= len(self.names)

    @property
    def indices(self) -> range:
        return range(1, len(self.names) + 1)

    def index(self, label: str) -> int:
        try:
            return self.names.index(label) + 1
        except ValueError:
            raise InvalidVocabularyError(f"unknown relation label {label!r}") from None

    def label(self, index: int) -> str:
        if index not in self:
            raise InvalidVocabularyError(f"relation index {index} outside 1..{len(self)}")
        return self.names[index - 1]


@dataclass(frozen=True)
class Connection:
    strength: float
    relation: int


@dataclass
class Concept:
    id: int
    content: str
    connections: list[tuple[int, Connection]] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.connections)

    def targets(self) -> list[int]:
        return [t for t, _ in self.connections]


def _ordered(connections: Iterable[tuple[int, Connection]]) -> list[tuple[int, Connection]]:
    return sorted(connections, key=lambda tc: (-tc[1].strength, tc[0]))


class ConceptGraph:
    """The whole concept space: a dense array of concepts plus a relation vocabulary.

    Mutation (``add_concept``, ``set_connections``) needs exclusive access;
    everything else only reads and may be shared across threads.
    """

    def __init__(self, vocabulary: RelationVocabulary | Sequence[str] | None = None):
        if vocabulary is None:
            vocabulary = RelationVocabulary()
        elif not isinstance(vocabulary, RelationVocabulary):
            vocabulary = RelationVocabulary(tuple(vocabulary))
        self.vocabulary = vocabulary
        self.concepts: list[Concept] = [Concept(SELF_ID, SELF_CONTENT)]
        self.content_index: dict[str, int] = {SELF_CONTENT: SELF_ID}

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def concept_count(self) -> int:
        return len(self.concepts)

    @property
    def edge_count(self) -> int:
        return sum(c.degree for c in self.concepts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConceptGraph):
            return NotImplemented
        return self.vocabulary == other.vocabulary and self.concepts == other.concepts

    def __repr__(self) -> str:
        return f"ConceptGraph(concepts={len(self.concepts)}, edges={self.edge_count}, relations={len(self.vocabulary)})"

    def add_concept(self, content: str) -> int:
        if not isinstance(content, str) or not content:
            raise InvalidContentError("concept content must be a non-empty string")
        existing = self.content_index.get(content)
        if existing is not None:
            return existing
        cid = len(self.concepts)
        self.concepts.append(Concept(cid, content))
        self.content_index[content] = cid
        return cid

    def has(self, cid) -> bool:
        return isinstance(cid, int) and 0 <= cid < len(self.concepts)

    def _check(self, cid) -> None:
        if not self.has(cid):
            raise UnknownConceptError(cid)

    def concept(self, cid: int) -> Concept:
        self._check(cid)
        return self.concepts[cid]

    def content(self, cid: int) -> str:
        return self.concept(cid).content

    def find(self, content: str) -> int | None:
        return self.content_index.get(content)

    def id_of(self, content: str) -> int:
        cid = self.content_index.get(content)
        if cid is None:
            raise UnknownConceptError(content)
        return cid

    def connections(self, cid: int) -> list[tuple[int, Connection]]:
        return self.concept(cid).connections

    def set_connections(self, source: int, raw: Iterable[tuple[int, float, int]]) -> None:
        """Replace the out-edges of ``source`` with ``raw`` (target, weight, relation) triples.

        Weights are normalized by their sum. An empty ``raw`` clears the concept's edges.
        """
        self._check(source)
        raw = list(raw)
        seen = set()
        for target, weight, relation in raw:
            self._check(target)
            if target == source:
                raise InvalidEdgeError(f"self-loop on concept {source}")
            if target in seen:
                raise InvalidEdgeError(f"duplicate target {target} from concept {source}")
            seen.add(target)
            if not (weight > 0) or math.isinf(weight):
                raise InvalidEdgeError(f"weight {weight!r} to {target} must be positive and finite")
            if relation not in self.vocabulary:
                raise InvalidEdgeError(f"relation {relation!r} not in vocabulary 1..{len(self.vocabulary)}")
        total = sum(w for _, w, _ in raw)
        self.concepts[source].connections = _ordered(
            (t, Connection(w / total, r)) for t, w, r in raw
        )

    def strength(self, source: int, target: int) -> float:
        self._check(target)
        for t, conn in self.connections(source):
            if t == target:
                return conn.strength
        return 0.0

    def relation(self, source: int, target: int) -> int | None:
        self._check(target)
        for t, conn in self.connections(source):
            if t == target:
                return conn.relation
        return None

    def copy(self) -> ConceptGraph:
        g = ConceptGraph(self.vocabulary)
        g.concepts = [Concept(c.id, c.content, list(c.connections)) for c in self.concepts]
        g.content_index = dict(self.content_index)
        return g

    def check_invariants(self) -> None:
        """Raise AssertionError if any stored-graph invariant is violated."""
        assert self.concepts and self.concepts[0].content == SELF_CONTENT
        assert len(self.content_index) == len(self.concepts)
        for cid, c in enumerate(self.concepts):
            assert c.id == cid
            assert self.content_index[c.content] == cid
            targets = c.targets()
            assert len(set(targets)) == len(targets)
            assert cid not in targets
            for t, conn in c.connections:
                assert self.has(t)
                assert 0 < conn.strength <= 1
                assert conn.relation in self.vocabulary
            assert c.connections == _ordered(c.connections)
            if c.connections:
                total = math.fsum(conn.strength for _, conn in c.connections)
                assert abs(total - 1.0) <= NORMALIZATION_TOLERANCE, total


def new_graph(vocabulary: RelationVocabulary | Sequence[str] | None = None) -> ConceptGraph:
    return ConceptGraph(vocabulary)


def truncate_connections(graph: ConceptGraph, k_prime: int) -> ConceptGraph:
    """Keep each concept's ``k_prime`` strongest connections, renormalized.

    Returns a new graph; ``graph`` is left untouched.
    """
    if not isinstance(k_prime, int) or k_prime < 1:
        raise InvalidParameterError(f"k_prime must be a positive integer, got {k_prime!r}")
    out = graph.copy()
    for c in out.concepts:
        if len(c.connections) <= k_prime:
            continue
        kept = c.connections[:k_prime]
        total = sum(conn.strength for _, conn in kept)
        c.connections = _ordered((t, Connection(conn.strength / total, conn.relation)) for t, conn in kept)
    return out

"""Line-based text format for concept graphs.

::

    wsm-graph v1 <concept_count> <relation_count>
    R <index> <label>
    C <id> <percent-encoded content>
    E <from> <to> <strength> <relation-index>

Edges of one source are written strongest-first. Strengths are written with
17 significant digits so a save/load round trip is exact.
"""
from __future__ import annotations

import io
import math
import os
from typing import IO, Union
from urllib.parse import quote, unquote

from .errors import ParseError
from .graph import (
    NORMALIZATION_TOLERANCE,
    SELF_CONTENT,
    Concept,
    ConceptGraph,
    Connection,
    RelationVocabulary,
)

MAGIC = "wsm-graph"
VERSION = "v1"

PathOrFile = Union[str, os.PathLike, IO[str]]


def _encode(content: str) -> str:
    return quote(content, safe="!$&'()*+,-./:;<=>?@[]^_`{|}~")


def dumps(graph: ConceptGraph) -> str:
    lines = [f"{MAGIC} {VERSION} {graph.concept_count} {len(graph.vocabulary)}"]
    for i, name in enumerate(graph.vocabulary.names, start=1):
        lines.append(f"R {i} {name}")
    for c in graph.concepts:
        lines.append(f"C {c.id} {_encode(c.content)}")
    for c in graph.concepts:
        for target, conn in c.connections:
            lines.append(f"E {c.id} {target} {conn.strength:.16e} {conn.relation}")
    return "\n".join(lines) + "\n"


def save(graph: ConceptGraph, sink: PathOrFile) -> None:
    text = dumps(graph)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)


def _int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"{what} must be an integer, got {token!r}") from None


def loads(text: str) -> ConceptGraph:
    header = None
    relations: dict[int, str] = {}
    contents: dict[int, str] = {}
    edges: dict[int, list[tuple[int, Connection]]] = {}
    edge_lines: dict[int, int] = {}
    seen_contents: set[str] = set()

    for line_no, raw in enumerate(io.StringIO(text), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != MAGIC:
                raise ParseError(line_no, f"expected header '{MAGIC} {VERSION} <concepts> <relations>'")
            if parts[1] != VERSION:
                raise ParseError(line_no, f"unsupported version {parts[1]!r}")
            header = (_int(parts[2], line_no, "concept count"), _int(parts[3], line_no, "relation count"))
            if header[0] < 1 or header[1] < 1:
                raise ParseError(line_no, "concept and relation counts must be positive")
            continue

        tag = parts[0]
        if tag == "R":
            if len(parts) != 3:
                raise ParseError(line_no, "relation record needs: R <index> <label>")
            idx = _int(parts[1], line_no, "relation index")
            if not 1 <= idx <= header[1]:
                raise ParseError(line_no, f"relation index {idx} outside 1..{header[1]}")
            if idx in relations:
                raise ParseError(line_no, f"duplicate relation index {idx}")
            relations[idx] = parts[2]
        elif tag == "C":
            if len(parts) != 3:
                raise ParseError(line_no, "concept record needs: C <id> <content>")
            cid = _int(parts[1], line_no, "concept id")
            if not 0 <= cid < header[0]:
                raise ParseError(line_no, f"concept id {cid} outside 0..{header[0] - 1}")
            if cid in contents:
                raise ParseError(line_no, f"duplicate concept id {cid}")
            content = unquote(parts[2])
            if content in seen_contents:
                raise ParseError(line_no, f"duplicate concept content {content!r}")
            seen_contents.add(content)
            contents[cid] = content
        elif tag == "E":
            if len(parts) != 5:
                raise ParseError(line_no, "edge record needs: E <from> <to> <strength> <relation>")
            src = _int(parts[1], line_no, "edge source")
            dst = _int(parts[2], line_no, "edge target")
            rel = _int(parts[4], line_no, "relation index")
            try:
                strength = float(parts[3])
            except ValueError:
                raise ParseError(line_no, f"strength must be a number, got {parts[3]!r}") from None
            for end in (src, dst):
                if end not in contents:
                    raise ParseError(line_no, f"edge references undefined concept {end}")
            if src == dst:
                raise ParseError(line_no, f"self-loop on concept {src}")
            if not (0 < strength <= 1):
                raise ParseError(line_no, f"strength {parts[3]} outside (0, 1]")
            if rel not in relations:
                raise ParseError(line_no, f"edge references undefined relation {rel}")
            row = edges.setdefault(src, [])
            if any(t == dst for t, _ in row):
                raise ParseError(line_no, f"duplicate edge {src} -> {dst}")
            if row:
                prev_t, prev = row[-1]
                if (prev.strength, -prev_t) < (strength, -dst):
                    raise ParseError(line_no, f"edges of concept {src} are not in descending-strength order")
            row.append((dst, Connection(strength, rel)))
            edge_lines[src] = line_no
        else:
            raise ParseError(line_no, f"unknown record tag {tag!r}")

    if header is None:
        raise ParseError(1, "empty graph file")
    n_concepts, n_relations = header
    if len(relations) != n_relations:
        raise ParseError(line_no, f"header declares {n_relations} relations, found {len(relations)}")
    if len(contents) != n_concepts:
        raise ParseError(line_no, f"header declares {n_concepts} concepts, found {len(contents)}")
    if contents[0] != SELF_CONTENT:
        raise ParseError(line_no, f"concept 0 must be {SELF_CONTENT!r}")
    for src, row in edges.items():
        total = math.fsum(conn.strength for _, conn in row)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ParseError(edge_lines[src], f"out-strengths of concept {src} sum to {total!r}, not 1")

    try:
        vocabulary = RelationVocabulary(tuple(relations[i] for i in range(1, n_relations + 1)))
    except ValueError as exc:
        raise ParseError(1, str(exc)) from None
    graph = ConceptGraph(vocabulary)
    graph.concepts = [Concept(cid, contents[cid], edges.get(cid, [])) for cid in range(n_concepts)]
    graph.content_index = {c.content: c.id for c in graph.concepts}
    return graph


def load(source: PathOrFile) -> ConceptGraph:
    if hasattr(source, "read"):
        return loads(source.read())
    with open(source, encoding="utf-8") as fh:
        return loads(fh.read())

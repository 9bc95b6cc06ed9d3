"""Random fixtures and brute-force oracles shared by the test modules.

The oracles deliberately avoid the library's own traversal code: simple
paths are enumerated directly (recursively over edges, or as node
permutations) and products are formed left to right from the input concept.
"""
import itertools
import math
import random

from wsm.graph import ConceptGraph, RelationVocabulary


def chain_graph():
    """a -> b (0.9), b -> c (0.5); side sinks d, e absorb the remaining strength."""
    g = ConceptGraph()
    a, b, c, d, e = (g.add_concept(x) for x in "abcde")
    g.set_connections(a, [(b, 9, 1), (d, 1, 8)])
    g.set_connections(b, [(c, 5, 1), (e, 5, 8)])
    return g


def random_graph(seed, max_concepts=10, max_out=3, vocabulary=None, min_concepts=2, min_out=0):
    rng = random.Random(seed)
    g = ConceptGraph(vocabulary or RelationVocabulary())
    n = rng.randint(min_concepts, max_concepts)
    ids = [g.add_concept(f"c{i}") for i in range(1, n)] if n > 1 else []
    ids = [0] + ids
    for src in ids:
        others = [t for t in ids if t != src]
        k = rng.randint(min(min_out, len(others)), min(max_out, len(others)))
        targets = rng.sample(others, k)
        raw = [(t, rng.choice([1, 2, 3, 5, 8]) * rng.random() + 0.01, rng.randint(1, len(g.vocabulary))) for t in targets]
        g.set_connections(src, raw)
    return g


def random_corpus(seed, max_tokens=200, vocab_size=12):
    rng = random.Random(seed)
    words = [f"w{i}" for i in range(vocab_size)]
    streams = []
    budget = rng.randint(2, max_tokens)
    while budget > 0:
        length = min(budget, rng.randint(1, 15))
        streams.append([rng.choice(words) for _ in range(length)])
        budget -= length
    return streams


def simple_paths(graph, start, max_edges):
    """Every simple path from ``start`` with 1..max_edges edges, as (nodes, product)."""
    out = []

    def walk(path, prod):
        if len(path) - 1 == max_edges:
            return
        for t, conn in graph.connections(path[-1]):
            if t in path:
                continue
            p = prod * conn.strength
            out.append((path + [t], p))
            walk(path + [t], p)

    walk([start], 1.0)
    return out


def oracle_activation(graph, ics, t_a, max_depth):
    """(acs, best_product) by exhaustive simple-path enumeration."""
    best = {c: 1.0 for c in ics}
    for s in ics:
        for nodes, p in simple_paths(graph, s, max_depth):
            if p >= t_a and p > best.get(nodes[-1], 0.0):
                best[nodes[-1]] = p
    return set(best), best


def oracle_path_sum(graph, ics, members, q_max, within=None):
    """Sum of products over all simple paths, found as node permutations."""
    nodes = [c.id for c in graph.concepts if within is None or c.id in within]
    total = 0.0
    for k in range(2, q_max + 2):
        for seq in itertools.permutations(nodes, k):
            if seq[0] not in ics or seq[-1] not in members:
                continue
            prod = 1.0
            for u, v in zip(seq, seq[1:]):
                s = graph.strength(u, v)
                if s == 0:
                    break
                prod *= s
            else:
                total += prod
    return total


def oracle_loss_s(graph, ics, members, q_max, within=None):
    s = oracle_path_sum(graph, ics, members, q_max, within)
    return 1.0 / s if s > 0 else math.inf

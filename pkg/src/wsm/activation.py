"""Receiving an input stream and spreading activation through the graph.

A concept is activated when some simple path from an input concept has a
strength product of at least ``t_a``. Paths are capped at ``max_depth``
edges. Activation flags live on the :class:`ActivationResult`, never on the
graph, so one graph can serve many queries at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Literal

import numpy as np

from .errors import InvalidInputError, InvalidParameterError, UnknownConceptError
from .graph import ConceptGraph

Mode = Literal["deterministic", "stochastic"]

DEFAULT_MAX_DEPTH = 4


@dataclass(frozen=True)
class ActivationParams:
    t_a: float = 0.1
    mode: Mode = "deterministic"
    seed: int = 0
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if not (0 < self.t_a <= 1):
            raise InvalidParameterError(f"t_a must lie in (0, 1], got {self.t_a!r}")
        if self.mode not in ("deterministic", "stochastic"):
            raise InvalidParameterError(f"unknown activation mode {self.mode!r}")
        if not isinstance(self.max_depth, int) or self.max_depth < 1:
            raise InvalidParameterError(f"max_depth must be a positive integer, got {self.max_depth!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass
class ActivationResult:
    ics: frozenset[int]
    acs: frozenset[int]
    best_product: dict[int, float]
    params: ActivationParams
    # predecessor on the best path found, for witness reconstruction
    parent: dict[int, int | None] = field(default_factory=dict, repr=False)

    @property
    def j(self) -> int:
        return len(self.acs)

    def activation(self, cid: int) -> int:
        return 1 if cid in self.acs else 0

    def witness(self, cid: int) -> list[int]:
        """Path from an input concept to ``cid`` achieving ``best_product[cid]``."""
        if cid not in self.acs:
            raise UnknownConceptError(cid)
        path = [cid]
        while self.parent.get(path[-1]) is not None:
            path.append(self.parent[path[-1]])
        return path[::-1]


def receive(graph: ConceptGraph, contents: Iterable[str]) -> frozenset[int]:
    """Resolve input contents to the input concept set.

    Every unknown token is reported at once; nothing is activated on failure.
    """
    contents = list(contents)
    unknown = [c for c in dict.fromkeys(contents) if graph.find(c) is None]
    if unknown:
        raise UnknownConceptError(unknown)
    return frozenset(graph.id_of(c) for c in contents)


def _check_ics(graph: ConceptGraph, ics) -> frozenset[int]:
    ics = frozenset(ics)
    if not ics:
        raise InvalidInputError("input concept set is empty")
    bad = sorted((c for c in ics if not graph.has(c)), key=str)
    if bad:
        raise UnknownConceptError(bad)
    return ics


def _deterministic(graph: ConceptGraph, ics: frozenset[int], params: ActivationParams) -> ActivationResult:
    # Layered relaxation over walks of <= max_depth edges. Every edge strength is
    # <= 1, so cutting a cycle out of a walk never lowers its product: the best
    # walk product equals the best simple-path product, and pruning below t_a is safe.
    best = {c: 1.0 for c in ics}
    parent: dict[int, int | None] = {c: None for c in ics}
    frontier = dict(best)
    for _ in range(params.max_depth):
        nxt: dict[int, float] = {}
        for u in sorted(frontier):
            pu = frontier[u]
            for v, conn in graph.connections(u):
                p = pu * conn.strength
                if p < params.t_a:
                    # stored order is strongest-first
                    break
                if p > best.get(v, 0.0):
                    best[v] = p
                    parent[v] = u
                    nxt[v] = p
        if not nxt:
            break
        frontier = nxt
    return ActivationResult(ics, frozenset(best), best, params, parent)


def _stochastic(graph: ConceptGraph, ics: frozenset[int], params: ActivationParams) -> ActivationResult:
    rng = np.random.default_rng(params.seed)
    best = {c: 1.0 for c in ics}
    parent: dict[int, int | None] = {c: None for c in ics}
    frontier = sorted(ics)
    for _ in range(params.max_depth):
        nxt = []
        for u in frontier:
            conns = graph.connections(u)
            if not conns:
                continue
            k = _draw(rng, [conn.strength for _, conn in conns])
            v, conn = conns[k]
            if v not in best:
                best[v] = best[u] * conn.strength
                parent[v] = u
                nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return ActivationResult(ics, frozenset(best), best, params, parent)


def _draw(rng: np.random.Generator, strengths, size=None):
    p = np.asarray(strengths, dtype=float)
    return rng.choice(len(p), size=size, p=p / p.sum())


def activate(graph: ConceptGraph, ics: Iterable[int], params: ActivationParams | None = None) -> ActivationResult:
    params = params or ActivationParams()
    ics = _check_ics(graph, ics)
    if params.mode == "stochastic":
        return _stochastic(graph, ics, params)
    return _deterministic(graph, ics, params)


def expand(graph: ConceptGraph, result: ActivationResult, params: ActivationParams | None, t_a_new: float) -> ActivationResult:
    """Loosen the threshold to ``t_a_new`` and recompute the activated set."""
    params = params or result.params
    if params.mode != "deterministic":
        raise InvalidParameterError("expand applies to deterministic activation only")
    if not (0 < t_a_new < params.t_a):
        raise InvalidParameterError(f"t_a_new must lie in (0, {params.t_a}), got {t_a_new!r}")
    return activate(graph, result.ics, replace(params, t_a=t_a_new))


def sample_frequencies(graph: ConceptGraph, concept: int, trials: int, seed: int = 0) -> dict[int, float]:
    """Empirical frequencies of ``trials`` one-step categorical draws over out-edges."""
    conns = graph.connections(concept)
    if not conns:
        raise InvalidInputError(f"concept {concept} has no out-connections")
    if not isinstance(trials, int) or trials < 1:
        raise InvalidInputError(f"trials must be a positive integer, got {trials!r}")
    rng = np.random.default_rng(seed)
    draws = _draw(rng, [conn.strength for _, conn in conns], size=trials)
    counts = np.bincount(draws, minlength=len(conns))
    return {t: int(n) / trials for (t, _), n in zip(conns, counts)}

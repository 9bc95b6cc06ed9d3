"""Choosing an output concept sequence from the activated set.

A candidate is an ordered selection of ``n`` distinct activated concepts,
scored by ``alpha_s * l_s + alpha_r * l_r + alpha_p * l_p``:

* ``l_s``: reciprocal of the summed strength products of every simple path
  (1..q_max edges) running from an input concept to a candidate member;
* ``l_r``: share of consecutive output pairs with no compatible edge between them;
* ``l_p``: an external scorer, zero by default.

Ties are broken by the lexicographically smallest id sequence everywhere.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Literal, Sequence

from .activation import ActivationParams, ActivationResult, activate, receive
from .errors import InvalidInputError, InvalidParameterError, NoAnswerError, SearchTooLargeError
from .graph import ConceptGraph

Scorer = Callable[[Sequence[int]], float]

DEFAULT_ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class LossWeights:
    alpha_s: float = 1.0
    alpha_r: float = 1.0
    alpha_p: float = 0.0
    l_cutoff: float = math.inf
    q_max: int = 4
    epsilon_edge: float = 0.0
    # ordering trick: paths may only use each concept's first k_prime stored
    # edges; surviving strengths are not renormalized
    k_prime: int | None = None

    def __post_init__(self):
        alphas = (self.alpha_s, self.alpha_r, self.alpha_p)
        if any(a < 0 or math.isnan(a) or math.isinf(a) for a in alphas) or not any(a > 0 for a in alphas):
            raise InvalidParameterError(f"alphas must be finite, non-negative and not all zero: {alphas}")
        if not (self.l_cutoff > 0):
            raise InvalidParameterError(f"l_cutoff must be positive, got {self.l_cutoff!r}")
        if not isinstance(self.q_max, int) or self.q_max < 1:
            raise InvalidParameterError(f"q_max must be a positive integer, got {self.q_max!r}")
        if not (0 <= self.epsilon_edge < 1):
            raise InvalidParameterError(f"epsilon_edge must lie in [0, 1), got {self.epsilon_edge!r}")
        if self.k_prime is not None and (not isinstance(self.k_prime, int) or self.k_prime < 1):
            raise InvalidParameterError(f"k_prime must be a positive integer, got {self.k_prime!r}")

    def combine(self, l_s: float, l_r: float, l_p: float) -> float:
        # a zero weight drops its term, so an unreachable l_s = inf never yields nan
        total = 0.0
        for alpha, term in ((self.alpha_s, l_s), (self.alpha_r, l_r), (self.alpha_p, l_p)):
            if alpha:
                total += alpha * term
        return total


@dataclass(frozen=True)
class RelationCompatibility:
    allowed: frozenset[int]

    @classmethod
    def all_of(cls, graph: ConceptGraph) -> RelationCompatibility:
        return cls(frozenset(graph.vocabulary.indices))

    @classmethod
    def from_labels(cls, graph: ConceptGraph, labels: Iterable[str]) -> RelationCompatibility:
        return cls(frozenset(graph.vocabulary.index(label) for label in labels))


@dataclass(frozen=True)
class OutputCandidate:
    sequence: tuple[int, ...]
    l_s: float
    l_r: float
    l_p: float
    total: float

    @property
    def reachable(self) -> bool:
        return math.isfinite(self.l_s)

    @property
    def key(self) -> tuple[float, tuple[int, ...]]:
        return (self.total, self.sequence)


def zero_scorer(sequence: Sequence[int]) -> float:
    return 0.0


def path_weights(
    graph: ConceptGraph,
    ics: Iterable[int],
    weights: LossWeights,
    within: Iterable[int] | None = None,
) -> dict[int, float]:
    """Summed strength products of simple paths from ``ics``, keyed by end concept.

    Every path ends at exactly one concept, so the path sum over a candidate
    set is the sum of these per-endpoint totals. ``within`` restricts every
    concept on a path (inputs included) to the given set.
    """
    allowed = None if within is None else frozenset(within)
    totals: dict[int, float] = {}
    for start in sorted(ics):
        if allowed is not None and start not in allowed:
            continue
        on_path = {start}
        # iterative DFS: (node, product, edges used)
        stack = [(start, 1.0, 0, iter(_edges(graph, start, weights)))]
        while stack:
            node, prod, depth, edges = stack[-1]
            nxt = next(edges, None)
            if nxt is None:
                stack.pop()
                on_path.discard(node)
                continue
            v, s = nxt
            if v in on_path or (allowed is not None and v not in allowed):
                continue
            p = prod * s
            totals[v] = totals.get(v, 0.0) + p
            if depth + 1 < weights.q_max:
                on_path.add(v)
                stack.append((v, p, depth + 1, iter(_edges(graph, v, weights))))
    return totals


def _edges(graph: ConceptGraph, cid: int, weights: LossWeights):
    conns = graph.connections(cid)
    if weights.k_prime is not None:
        conns = conns[: weights.k_prime]
    return [(t, c.strength) for t, c in conns if c.strength > weights.epsilon_edge]


def _ls_from_totals(totals: dict[int, float], members: Iterable[int]) -> float:
    s = 0.0
    for m in sorted(set(members)):
        s += totals.get(m, 0.0)
    return 1.0 / s if s > 0 else math.inf


def loss_s(
    graph: ConceptGraph,
    ics: Iterable[int],
    candidate_set: Iterable[int],
    weights: LossWeights | None = None,
    within: Iterable[int] | None = None,
) -> float:
    weights = weights or LossWeights()
    members = set(candidate_set)
    if not members:
        raise InvalidInputError("candidate set is empty")
    for m in members:
        graph.concept(m)
    return _ls_from_totals(path_weights(graph, ics, weights, within), members)


def _compatible(graph: ConceptGraph, a: int, b: int, allowed: frozenset[int]) -> bool:
    r = graph.relation(a, b)
    if r is not None and r in allowed:
        return True
    r = graph.relation(b, a)
    return r is not None and r in allowed


def loss_r(graph: ConceptGraph, sequence: Sequence[int], compatibility: RelationCompatibility | None = None) -> float:
    if not sequence:
        raise InvalidInputError("sequence is empty")
    if len(sequence) == 1:
        return 0.0
    allowed = (compatibility or RelationCompatibility.all_of(graph)).allowed
    pairs = list(zip(sequence, sequence[1:]))
    missing = sum(1 for a, b in pairs if not _compatible(graph, a, b, allowed))
    return missing / len(pairs)


def loss_p(sequence: Sequence[int], scorer: Scorer | None = None) -> float:
    return float((scorer or zero_scorer)(sequence))


class _Scorer:
    """Scores candidates over one activation result, caching per-set l_s."""

    def __init__(self, graph, activation: ActivationResult, weights, compatibility, scorer):
        self.graph = graph
        self.weights = weights
        self.compatibility = compatibility or RelationCompatibility.all_of(graph)
        self.scorer = scorer or zero_scorer
        self.totals = path_weights(graph, activation.ics, weights, within=activation.acs)
        self._ls: dict[frozenset[int], float] = {}

    def __call__(self, sequence: tuple[int, ...]) -> OutputCandidate:
        key = frozenset(sequence)
        l_s = self._ls.get(key)
        if l_s is None:
            l_s = self._ls[key] = _ls_from_totals(self.totals, key)
        l_r = loss_r(self.graph, sequence, self.compatibility)
        l_p = loss_p(sequence, self.scorer) if self.weights.alpha_p else 0.0
        return OutputCandidate(sequence, l_s, l_r, l_p, self.weights.combine(l_s, l_r, l_p))


def _check_n(n, j: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError(f"output length must be a positive integer, got {n!r}")
    if n > j:
        raise InvalidParameterError(f"output length {n} exceeds activated set size {j}")


def enumerate_candidates(
    graph: ConceptGraph,
    activation: ActivationResult,
    n: int,
    weights: LossWeights | None = None,
    compatibility: RelationCompatibility | None = None,
    scorer: Scorer | None = None,
) -> Iterator[OutputCandidate]:
    """Every ordered selection of ``n`` activated concepts, in lexicographic id order."""
    weights = weights or LossWeights()
    _check_n(n, activation.j)
    score = _Scorer(graph, activation, weights, compatibility, scorer)
    for seq in itertools.permutations(sorted(activation.acs), n):
        yield score(seq)


def brute_force_search(
    graph: ConceptGraph,
    activation: ActivationResult,
    n: int,
    weights: LossWeights | None = None,
    compatibility: RelationCompatibility | None = None,
    scorer: Scorer | None = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> OutputCandidate:
    """Global minimum over all J!/(J-n)! candidates."""
    _check_n(n, activation.j)
    b = math.perm(activation.j, n)
    if b > limit:
        raise SearchTooLargeError(f"{b} permutations exceed the enumeration limit {limit}; use beam search")
    best = None
    for cand in enumerate_candidates(graph, activation, n, weights, compatibility, scorer):
        # lexicographic enumeration: strict < keeps the smallest sequence on ties
        if best is None or cand.total < best.total:
            best = cand
    return best


def beam_search(
    graph: ConceptGraph,
    activation: ActivationResult,
    n: int,
    weights: LossWeights | None = None,
    compatibility: RelationCompatibility | None = None,
    beam_width: int = 32,
    scorer: Scorer | None = None,
) -> OutputCandidate:
    """Keep the ``beam_width`` best partial sequences per position.

    Partials are scored like full candidates (l_s over the placed set, l_r
    over the placed pairs). Every candidate completes at the last position,
    so the best completed one is returned; whether it meets ``l_cutoff`` is
    for the caller to judge.
    """
    weights = weights or LossWeights()
    if not isinstance(beam_width, int) or beam_width < 1:
        raise InvalidParameterError(f"beam_width must be a positive integer, got {beam_width!r}")
    _check_n(n, activation.j)
    score = _Scorer(graph, activation, weights, compatibility, scorer)
    pool = sorted(activation.acs)
    beam: list[OutputCandidate] = [OutputCandidate((), math.inf, 0.0, 0.0, 0.0)]
    for position in range(n):
        last = position == n - 1
        expanded: list[OutputCandidate] = []
        for partial in beam:
            used = set(partial.sequence)
            for cid in pool:
                if cid in used:
                    continue
                expanded.append(score(partial.sequence + (cid,)))
        expanded.sort(key=lambda c: c.key)
        beam = expanded if last else expanded[:beam_width]
    return beam[0]


@dataclass(frozen=True)
class SearchStrategy:
    kind: Literal["beam", "brute"] = "beam"
    beam_width: int = 32
    auto_expand: bool = True
    expand_factor: float = 0.5
    max_retries: int = 3
    limit: int = DEFAULT_ENUMERATION_LIMIT
    scorer: Scorer | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("beam", "brute"):
            raise InvalidParameterError(f"unknown search strategy {self.kind!r}")
        if not isinstance(self.beam_width, int) or self.beam_width < 1:
            raise InvalidParameterError(f"beam_width must be a positive integer, got {self.beam_width!r}")
        if not isinstance(self.limit, int) or self.limit < 1:
            raise InvalidParameterError(f"limit must be a positive integer, got {self.limit!r}")
        if not (0 < self.expand_factor < 1):
            raise InvalidParameterError(f"expand_factor must lie in (0, 1), got {self.expand_factor!r}")
        if not isinstance(self.max_retries, int) or self.max_retries < 0:
            raise InvalidParameterError(f"max_retries must be a non-negative integer, got {self.max_retries!r}")


@dataclass
class Answer:
    candidate: OutputCandidate
    activation: ActivationResult
    t_a: float
    expansions: int


def run_search(graph, activation, n, weights, compatibility, strategy: SearchStrategy) -> OutputCandidate:
    if strategy.kind == "brute":
        return brute_force_search(graph, activation, n, weights, compatibility, strategy.scorer, strategy.limit)
    return beam_search(graph, activation, n, weights, compatibility, strategy.beam_width, strategy.scorer)


def answer(
    graph: ConceptGraph,
    input_contents: Sequence[str],
    n: int,
    activation_params: ActivationParams | None = None,
    weights: LossWeights | None = None,
    compatibility: RelationCompatibility | None = None,
    strategy: SearchStrategy | None = None,
) -> Answer:
    """Receive, activate and search; loosen t_a when no candidate meets the cutoff.

    Expansion multiplies t_a by ``strategy.expand_factor`` up to
    ``strategy.max_retries`` times (deterministic activation only). It is
    also used when the activated set is smaller than ``n``.
    """
    params = activation_params or ActivationParams()
    weights = weights or LossWeights()
    strategy = strategy or SearchStrategy()
    ics = receive(graph, input_contents)
    result = activate(graph, ics, params)
    can_expand = strategy.auto_expand and params.mode == "deterministic"
    best = None
    for attempt in range(strategy.max_retries + 1):
        if result.j >= n:
            cand = run_search(graph, result, n, weights, compatibility, strategy)
            if best is None or cand.key < best.key:
                best = cand
            if cand.total <= weights.l_cutoff:
                return Answer(cand, result, result.params.t_a, attempt)
        elif not can_expand:
            _check_n(n, result.j)
        if not can_expand or attempt == strategy.max_retries:
            break
        result = activate(graph, ics, replace(result.params, t_a=result.params.t_a * strategy.expand_factor))
    raise NoAnswerError(
        f"no candidate of length {n} meets l_cutoff={weights.l_cutoff} (final t_a={result.params.t_a:g})",
        best=best,
    )

"""World-self model reasoning engine: concept graph, activation, search, agent loop."""
from .activation import ActivationParams, ActivationResult, activate, expand, receive, sample_frequencies
from .errors import WSMError
from .graph import (
    DEFAULT_RELATIONS,
    SELF_ID,
    Concept,
    ConceptGraph,
    Connection,
    RelationVocabulary,
    new_graph,
    truncate_connections,
)
from .graphfile import load, loads, save, dumps
from .ingest import CooccurrenceTable, accumulate, build_graph, ingest_corpus
from .search import (
    LossWeights,
    OutputCandidate,
    RelationCompatibility,
    SearchStrategy,
    answer,
    beam_search,
    brute_force_search,
    loss_p,
    loss_r,
    loss_s,
)

__version__ = "0.1.0"

"""Command-line interface.

Exit codes: 0 success, 2 I/O, 3 validation or model error, 4 unknown
concept, 5 no answer.
"""
from __future__ import annotations

import functools
import sys

import click

from . import abstraction, graphfile
from .activation import activate, receive
from .agent import parse_scenario, run_episode
from .config import RunConfig, load_config
from .errors import EmptyModelError, NoAnswerError, WSMError
from .graph import ConceptGraph, RelationVocabulary, truncate_connections
from .ingest import ingest_corpus, load_rules, read_corpus
from .search import Answer, OutputCandidate, RelationCompatibility, answer

EXIT_IO = 2


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NoAnswerError as exc:
            if exc.best is not None:
                click.echo(f"best_total = {exc.best.total!r}", err=True)
            _fail(str(exc), exc.exit_code)
        except WSMError as exc:
            _fail(str(exc), exc.exit_code)
        except OSError as exc:
            name = exc.filename if exc.filename is not None else ""
            _fail(f"{name}: {exc.strerror or exc}", EXIT_IO)

    return wrapper


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _config(path: str | None, **overrides) -> RunConfig:
    base = load_config(path) if path else RunConfig()
    return base.updated(**overrides)


def _require(value, what: str):
    if value is None:
        raise click.UsageError(f"missing {what} (pass it as an argument or set it in the config file)")
    return value


def _sequence(graph: ConceptGraph, seq) -> str:
    return " ".join(graph.content(c) for c in seq)


def format_answer(graph: ConceptGraph, result: Answer) -> str:
    cand: OutputCandidate = result.candidate
    lines = [
        f"answer = {_sequence(graph, cand.sequence)}",
        f"l_s = {cand.l_s!r}",
        f"l_r = {cand.l_r!r}",
        f"l_p = {cand.l_p!r}",
        f"total = {cand.total!r}",
        f"J = {result.activation.j}",
        f"t_a = {result.t_a!r}",
        f"expansions = {result.expansions}",
    ]
    return "\n".join(lines) + "\n"


def format_activation(graph: ConceptGraph, result) -> str:
    lines = [f"J = {result.j}"]
    for cid in sorted(result.acs, key=lambda c: (-result.best_product[c], c)):
        lines.append(f"{graph.content(cid)} {result.best_product[cid]!r}")
    return "\n".join(lines) + "\n"


activation_options = [
    click.option("--t-a", type=float, help="Activation threshold in (0, 1]."),
    click.option("--max-depth", type=int, help="Maximum path length in edges."),
    click.option("--mode", type=click.Choice(["deterministic", "stochastic"])),
    click.option("--seed", type=int, help="Seed for stochastic activation (default 0)."),
]

search_options = [
    click.option("-n", "n", type=int, default=1, show_default=True, help="Output length."),
    click.option("--alpha-s", type=float),
    click.option("--alpha-r", type=float),
    click.option("--alpha-p", type=float),
    click.option("--l-cutoff", type=float),
    click.option("--q-max", type=int),
    click.option("--beam-width", type=int),
    click.option("--k-prime", type=int, help="Use only each concept's K' strongest edges when scoring."),
    click.option("--strategy", type=click.Choice(["beam", "brute"])),
    click.option("--compatible", multiple=True, help="Relation label counted as compatible (repeatable)."),
]


def _apply(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return deco


@click.group()
@click.version_option(package_name="artifact", prog_name="wsm")
def main():
    """Concept-graph reasoning engine."""


@main.command()
@click.argument("corpus", required=False)
@click.option("-o", "--out", required=True, help="Graph file to write.")
@click.option("--rules", "rules_path", help="Relation rules file.")
@click.option("--config", "config_path", help="key = value run configuration.")
@click.option("--window", type=int)
@click.option("--min-count", type=int)
@_guarded
def build(corpus, out, rules_path, config_path, window, min_count):
    """Learn a graph from CORPUS (one whitespace-tokenized stream per line)."""
    cfg = _config(config_path, window=window, min_count=min_count, corpus=corpus, rules=rules_path)
    corpus = _require(cfg.corpus, "corpus file")
    streams = read_corpus(_read(corpus))
    graph = ConceptGraph(RelationVocabulary())
    rules = load_rules(cfg.rules, graph.vocabulary) if cfg.rules else []
    if not streams:
        raise EmptyModelError(f"{corpus}: corpus contains no streams; empty model")
    report = ingest_corpus(graph, streams, cfg.window, cfg.min_count, rules)
    graphfile.save(graph, out)
    click.echo(report.summary())


@main.command(name="answer")
@click.argument("graph_path")
@click.argument("tokens", nargs=-1, required=True)
@click.option("--config", "config_path")
@_apply(activation_options)
@_apply(search_options)
@_guarded
def answer_cmd(graph_path, tokens, config_path, n, compatible, **kw):
    """Answer the input TOKENS with the best N-concept output sequence."""
    cfg = _config(config_path, **kw)
    graph = graphfile.load(graph_path)
    click.echo(format_answer(graph, _run_answer(graph, tokens, n, cfg, compatible)), nl=False)


def _run_answer(graph, tokens, n, cfg: RunConfig, compatible=()) -> Answer:
    compat = RelationCompatibility.from_labels(graph, compatible) if compatible else None
    return answer(
        graph,
        list(tokens),
        n,
        cfg.activation_params(),
        cfg.loss_weights(),
        compat,
        cfg.search_strategy(),
    )


@main.command(name="activate")
@click.argument("graph_path")
@click.argument("tokens", nargs=-1, required=True)
@click.option("--config", "config_path")
@_apply(activation_options)
@_guarded
def activate_cmd(graph_path, tokens, config_path, **kw):
    """Print the activated concepts for the input TOKENS."""
    cfg = _config(config_path, **kw)
    graph = graphfile.load(graph_path)
    result = activate(graph, receive(graph, tokens), cfg.activation_params())
    click.echo(format_activation(graph, result), nl=False)


@main.command()
@click.argument("scenario_path", required=False)
@click.option("--config", "config_path")
@click.option("--max-steps", type=int, help="Override the scenario's step budget.")
@_guarded
def simulate(scenario_path, config_path, max_steps):
    """Run the goal-seeking agent on a gridworld scenario."""
    cfg = _config(config_path, scenario=scenario_path)
    scenario = parse_scenario(_read(_require(cfg.scenario, "scenario file")))
    traj = run_episode(scenario.agent(), scenario.world, max_steps or scenario.max_steps)
    for line in traj.log_lines():
        click.echo(line)


@main.command()
@click.argument("config_path", required=False)
@_guarded
def ladder(config_path):
    """Report information content along the abstraction ladder."""
    config = abstraction.parse_config(_read(config_path)) if config_path else abstraction.LadderConfig()
    click.echo(abstraction.format_report(abstraction.ladder(config)), nl=False)


@main.command()
@click.argument("graph_path")
@click.option("-k", "--k-prime", type=int, required=True)
@click.option("-o", "--out", required=True)
@_guarded
def truncate(graph_path, k_prime, out):
    """Keep each concept's K' strongest edges (renormalized) and save."""
    graph = truncate_connections(graphfile.load(graph_path), k_prime)
    graphfile.save(graph, out)
    click.echo(f"concepts {graph.concept_count} edges {graph.edge_count}")


if __name__ == "__main__":
    main()

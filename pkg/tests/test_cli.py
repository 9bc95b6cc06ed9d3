from pathlib import Path

import pytest
from click.testing import CliRunner

from wsm import cli, graphfile
from wsm.activation import ActivationParams
from wsm.config import RunConfig, parse_config
from wsm.errors import InvalidParameterError, ParseError
from wsm.graph import ConceptGraph
from wsm.ingest import ingest_corpus, load_rules, read_corpus
from wsm.search import answer

from helpers import chain_graph

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.wsm"
    graphfile.save(chain_graph(), path)
    return str(path)


def invoke(runner, *args):
    return runner.invoke(cli.main, [str(a) for a in args])


# ---- build -----------------------------------------------------------------


def test_build_toy_corpus(runner, tmp_path):
    out = tmp_path / "toy.wsm"
    res = invoke(runner, "build", DATA / "toy_corpus.txt", "--rules", DATA / "toy_rules.txt", "-o", out)
    assert res.exit_code == 0, res.output
    # apple banana fruit grows is_a on tree, plus self
    assert res.output.startswith("concepts 8 (new 7)")
    g = graphfile.load(out)
    assert g.concept_count == 8
    assert g.relation(g.id_of("apple"), g.id_of("fruit")) == g.vocabulary.index("is-a")
    assert g.relation(g.id_of("grows"), g.id_of("tree")) == g.vocabulary.index("part-of")


def test_build_missing_corpus(runner, tmp_path):
    missing = tmp_path / "nope.txt"
    res = invoke(runner, "build", missing, "-o", tmp_path / "g.wsm")
    assert res.exit_code == 2
    assert str(missing) in res.output


def test_build_empty_corpus(runner, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n")
    res = invoke(runner, "build", empty, "-o", tmp_path / "g.wsm")
    assert res.exit_code == 3
    assert "empty model" in res.output


def test_build_filtered_to_nothing(runner, tmp_path):
    res = invoke(runner, "build", DATA / "toy_corpus.txt", "--min-count", 5, "-o", tmp_path / "g.wsm")
    assert res.exit_code == 3


def test_build_corpus_from_config(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"corpus = {DATA / 'toy_corpus.txt'}\nwindow = 1\n")
    res = invoke(runner, "build", "--config", cfg, "-o", tmp_path / "g.wsm")
    assert res.exit_code == 0, res.output


# ---- answer / activate -------------------------------------------------------


def test_answer_chain(runner, chain_file):
    res = invoke(runner, "answer", chain_file, "a", "-n", 1)
    assert res.exit_code == 0, res.output
    lines = res.output.splitlines()
    assert lines[0] == "answer = b"
    assert lines[1].startswith("l_s = 1.1111")


def test_answer_unknown_token(runner, chain_file):
    res = invoke(runner, "answer", chain_file, "a", "zzz")
    assert res.exit_code == 4
    assert "zzz" in res.output


def test_answer_no_answer(runner, chain_file):
    res = invoke(runner, "answer", chain_file, "a", "--l-cutoff", 0.01, "--t-a", 0.5)
    assert res.exit_code == 5
    assert "best_total" in res.output


def test_answer_stochastic_deterministic(runner, chain_file):
    args = ("answer", chain_file, "a", "-n", 2, "--mode", "stochastic", "--seed", 7)
    first, second = invoke(runner, *args), invoke(runner, *args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_answer_flags_override_config(runner, chain_file, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t_a = 0.95\nauto_expand = false\n")
    res = invoke(runner, "answer", chain_file, "a", "--config", cfg)
    # only "a" active, no path to itself: infinite loss, still an answer under l_cutoff = inf
    assert res.exit_code == 0
    assert "J = 1" in res.output
    res = invoke(runner, "answer", chain_file, "a", "--config", cfg, "--t-a", 0.6)
    assert "answer = b" in res.output


def test_answer_bad_graph_file(runner, tmp_path):
    bad = tmp_path / "bad.wsm"
    bad.write_text("wsm-graph v1 1 1\nR 1 is-a\nC 0 self\nQ 1\n")
    res = invoke(runner, "answer", bad, "self")
    assert res.exit_code == 3
    assert "line 4" in res.output


def test_activate_prints_acs(runner, chain_file):
    res = invoke(runner, "activate", chain_file, "a", "--t-a", 0.6)
    assert res.exit_code == 0
    assert res.output.splitlines() == ["J = 2", "a 1.0", "b 0.9"]


def test_build_then_answer_equals_in_process(runner, tmp_path):
    out = tmp_path / "toy.wsm"
    assert invoke(runner, "build", DATA / "toy_corpus.txt", "--rules", DATA / "toy_rules.txt", "-o", out).exit_code == 0
    res = invoke(runner, "answer", out, "apple", "banana", "-n", 2)
    assert res.exit_code == 0, res.output

    g = ConceptGraph()
    rules = load_rules(DATA / "toy_rules.txt", g.vocabulary)
    cfg = RunConfig()
    ingest_corpus(g, read_corpus((DATA / "toy_corpus.txt").read_text()), cfg.window, cfg.min_count, rules)
    result = answer(g, ["apple", "banana"], 2, cfg.activation_params(), cfg.loss_weights(), None, cfg.search_strategy())
    assert res.output == cli.format_answer(g, result)


# ---- truncate -------------------------------------------------------------------


def test_truncate_command(runner, tmp_path):
    src = tmp_path / "toy.wsm"
    invoke(runner, "build", DATA / "toy_corpus.txt", "-o", src)
    out = tmp_path / "cut.wsm"
    res = invoke(runner, "truncate", src, "-k", 1, "-o", out)
    assert res.exit_code == 0
    g = graphfile.load(out)
    assert all(len(c.connections) <= 1 for c in g.concepts)


def test_truncate_rejects_zero(runner, chain_file, tmp_path):
    assert invoke(runner, "truncate", chain_file, "-k", 0, "-o", tmp_path / "x").exit_code == 3


# ---- simulate / ladder golden files -------------------------------------------------


def test_simulate_golden(runner):
    res = invoke(runner, "simulate", DATA / "gridworld_5x5.txt")
    assert res.exit_code == 0
    assert res.output == (GOLDEN / "simulate_5x5.txt").read_text()
    assert res.output.splitlines()[-1].startswith("met true steps 8")


def test_simulate_budget(runner):
    res = invoke(runner, "simulate", DATA / "gridworld_5x5.txt", "--max-steps", 3)
    assert res.output.splitlines()[-1].startswith("met false steps 3")


def test_simulate_start_at_goal(runner, tmp_path):
    sc = tmp_path / "s.txt"
    sc.write_text("grid = 3 3\nstart = 1 1\ngoal = 1 1\nmax_steps = 5\n")
    res = invoke(runner, "simulate", sc)
    assert res.output.splitlines() == ["met true steps 0 |D| 0.000000"]


def test_ladder_golden(runner):
    res = invoke(runner, "ladder", DATA / "ladder_apple.cfg")
    assert res.exit_code == 0
    assert res.output == (GOLDEN / "ladder_apple.txt").read_text()
    assert "h_concept = 40 bits" in res.output.splitlines()


def test_ladder_doubled_duration(runner, tmp_path):
    cfg = tmp_path / "l.cfg"
    cfg.write_text((DATA / "ladder_apple.cfg").read_text().replace("duration = 1", "duration = 2"))
    res = invoke(runner, "ladder", cfg)
    assert "h_real = 1.00681e+19 bits" in res.output.splitlines()


def test_ladder_negative_wavelength(runner, tmp_path):
    cfg = tmp_path / "l.cfg"
    cfg.write_text("wavelength = -500e-9\n")
    assert invoke(runner, "ladder", cfg).exit_code == 3


def test_outputs_byte_identical_across_runs(runner, chain_file):
    for args in (("ladder",), ("simulate", DATA / "gridworld_5x5.txt"), ("activate", chain_file, "a")):
        assert invoke(runner, *args).output == invoke(runner, *args).output


# ---- config ---------------------------------------------------------------------------


def test_config_parse_and_defaults():
    cfg = parse_config("t_a = 0.3\nmode = stochastic\nseed = 11\nl_cutoff = inf\nk_prime = none\n")
    assert cfg.activation_params() == ActivationParams(t_a=0.3, mode="stochastic", seed=11)
    assert cfg.k_prime is None
    assert RunConfig().seed == 0


def test_config_unknown_key():
    with pytest.raises(ParseError):
        parse_config("temperature = 3\n")


@pytest.mark.parametrize("text", ["t_a = 2\n", "window = 0\n", "beam_width = 0\n", "min_count = -1\n"])
def test_config_range_validation(text):
    with pytest.raises(InvalidParameterError):
        parse_config(text)

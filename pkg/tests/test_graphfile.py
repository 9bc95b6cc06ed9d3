import io

import pytest

from wsm import graphfile
from wsm.errors import ParseError
from wsm.graph import ConceptGraph

from helpers import random_graph


def three_concepts():
    g = ConceptGraph()
    x, a, b = (g.add_concept(s) for s in ("x", "a b", "50%"))
    g.set_connections(x, [(a, 1, 1), (b, 3, 8)])
    return g


def test_round_trip_small():
    g = three_concepts()
    assert graphfile.loads(graphfile.dumps(g)) == g


def test_round_trip_through_file(tmp_path):
    g = three_concepts()
    path = tmp_path / "g.wsm"
    graphfile.save(g, path)
    assert graphfile.load(path) == g
    buf = io.StringIO()
    graphfile.save(g, buf)
    buf.seek(0)
    assert graphfile.load(buf) == g


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_random(seed):
    g = random_graph(seed)
    back = graphfile.loads(graphfile.dumps(g))
    assert back == g
    for c, d in zip(g.concepts, back.concepts):
        assert [conn.strength for _, conn in c.connections] == [conn.strength for _, conn in d.connections]


def test_format_layout():
    text = graphfile.dumps(three_concepts())
    lines = text.splitlines()
    assert lines[0] == "wsm-graph v1 4 8"
    assert lines[1] == "R 1 is-a"
    assert "C 2 a%20b" in lines
    assert "C 3 50%25" in lines
    edges = [l for l in lines if l.startswith("E ")]
    assert edges[0].split()[:3] == ["E", "1", "3"]
    mantissa = edges[0].split()[3].split("e")[0].replace(".", "")
    assert len(mantissa) >= 12


def _text(*body):
    return "\n".join(["wsm-graph v1 3 1", "R 1 is-a", "C 0 self", "C 1 a", "C 2 b", *body]) + "\n"


@pytest.mark.parametrize(
    "body, line, fragment",
    [
        (["E 1 2 1.5 1"], 6, "outside (0, 1]"),
        (["E 1 7 1.0 1"], 6, "undefined concept 7"),
        (["E 1 2 1.0 3"], 6, "undefined relation"),
        (["X 1 2"], 6, "unknown record tag"),
        (["E 1 2 0.5 1"], 6, "sum to"),
        (["E 1 1 1.0 1"], 6, "self-loop"),
        (["E 1 2 abc 1"], 6, "must be a number"),
    ],
)
def test_parse_errors_name_line(body, line, fragment):
    with pytest.raises(ParseError) as err:
        graphfile.loads(_text(*body))
    assert err.value.line_no == line
    assert fragment in str(err.value)
    assert f"line {line}" in str(err.value)


def test_bad_header():
    with pytest.raises(ParseError) as err:
        graphfile.loads("graph 1 1\n")
    assert err.value.line_no == 1


def test_concept_count_mismatch():
    with pytest.raises(ParseError):
        graphfile.loads("wsm-graph v1 2 1\nR 1 is-a\nC 0 self\n")


def test_edges_out_of_order_rejected():
    text = _text("E 0 1 0.25 1", "E 0 2 0.75 1")
    with pytest.raises(ParseError) as err:
        graphfile.loads(text)
    assert err.value.line_no == 7

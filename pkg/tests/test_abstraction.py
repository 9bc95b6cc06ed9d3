import math
from dataclasses import replace

import pytest

from wsm.abstraction import (
    REFERENCE_BITS,
    LadderConfig,
    format_report,
    ladder,
    parse_config,
    photon_count,
)
from wsm.errors import InvalidInputError, ParseError


def test_photon_count_apple():
    n = photon_count(0.02, 100, 500e-9, 1)
    # independent arithmetic: E = 0.02 * 100 * 1 J; photon energy h c / lambda
    energy = 0.02 * 100 * 1
    per_photon = 6.626e-34 * 2.998e8 / 500e-9
    assert n == pytest.approx(energy / per_photon, rel=1e-12)
    assert 5e18 / 1.1 <= n <= 5e18 * 1.1


def test_photon_count_linear_in_duration():
    assert photon_count(0.02, 100, 500e-9, 2) == pytest.approx(2 * photon_count(0.02, 100, 500e-9, 1), rel=1e-15)


@pytest.mark.parametrize("args", [(0.02, 100, 500e-9, 0), (0.02, 100, -5e-7, 1), (0, 100, 5e-7, 1)])
def test_photon_count_rejects_nonpositive(args):
    with pytest.raises(InvalidInputError):
        photon_count(*args)


def test_ladder_defaults():
    r = ladder()
    assert r.h_retina == 2e8
    assert r.h_nerve == 1e6
    assert r.h_concept == 40
    assert r.total_compression >= 1e17
    assert r.total_compression == r.h_real / r.h_concept


def test_feature_stage_surprisal():
    r = ladder()
    assert -math.log2(0.01) == pytest.approx(6.644, abs=1e-3)
    assert r.h_feature == pytest.approx(66.44, abs=0.01)
    assert REFERENCE_BITS["h_feature"] == 700


def test_stages_strictly_decreasing():
    values = list(ladder().stages.values())
    assert all(b < a for a, b in zip(values, values[1:]))


def test_orders_of_magnitude_match_reference():
    r = ladder()
    for name in ("h_real", "h_retina", "h_nerve", "h_concept"):
        assert 0.5 <= getattr(r, name) / REFERENCE_BITS[name] <= 2


def test_concept_stage_linear_in_text():
    base = ladder(LadderConfig(concept_text="ab")).h_concept
    assert ladder(LadderConfig(concept_text="abcd")).h_concept == 2 * base


@pytest.mark.parametrize(
    "field, value",
    [("retina_pixels", 4e8), ("nerve_channels", 3e6), ("feature_count", 20), ("bits_per_symbol", 16), ("duration", 3)],
)
def test_stage_monotone_in_own_parameter(field, value):
    lo = ladder()
    hi = ladder(replace(LadderConfig(), **{field: value}))
    assert lo.as_dict() != hi.as_dict()
    assert all(getattr(hi, s) >= getattr(lo, s) for s in lo.stages)


def test_invalid_config():
    with pytest.raises(InvalidInputError):
        ladder(LadderConfig(feature_probability=1.5))
    with pytest.raises(InvalidInputError):
        ladder(LadderConfig(wavelength=-1))


def test_parse_config_and_report():
    cfg = parse_config("surface_area = 0.02\nconcept_text = apple\n# comment\nduration = 1\n")
    assert cfg == LadderConfig()
    text = format_report(ladder(cfg))
    assert "h_concept = 40 bits" in text.splitlines()
    assert "h_feature = 66.4386 bits" in text.splitlines()


@pytest.mark.parametrize("text", ["colour = red\n", "duration = fast\n", "duration 1\n"])
def test_parse_config_errors(text):
    with pytest.raises(ParseError):
        parse_config(text)

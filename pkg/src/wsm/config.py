"""Flat ``key = value`` run configuration shared by every CLI command."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Any

from .activation import ActivationParams
from .errors import InvalidParameterError, ParseError
from .search import LossWeights, SearchStrategy


@dataclass(frozen=True)
class RunConfig:
    # activation
    t_a: float = 0.1
    max_depth: int = 4
    mode: str = "deterministic"
    seed: int = 0
    # search
    alpha_s: float = 1.0
    alpha_r: float = 1.0
    alpha_p: float = 0.0
    l_cutoff: float = math.inf
    q_max: int = 4
    epsilon_edge: float = 0.0
    beam_width: int = 32
    k_prime: int | None = None
    strategy: str = "beam"
    auto_expand: bool = True
    expand_factor: float = 0.5
    max_retries: int = 3
    # ingest
    window: int = 2
    min_count: int = 1
    # files
    graph: str | None = None
    corpus: str | None = None
    rules: str | None = None
    scenario: str | None = None

    def __post_init__(self):
        # construct the owning modules' parameter objects to validate ranges
        self.activation_params()
        self.loss_weights()
        self.search_strategy()
        if not isinstance(self.window, int) or self.window < 1:
            raise InvalidParameterError(f"window must be a positive integer, got {self.window!r}")
        if not isinstance(self.min_count, int) or self.min_count < 0:
            raise InvalidParameterError(f"min_count must be a non-negative integer, got {self.min_count!r}")

    def activation_params(self) -> ActivationParams:
        return ActivationParams(t_a=self.t_a, mode=self.mode, seed=self.seed, max_depth=self.max_depth)

    def loss_weights(self) -> LossWeights:
        return LossWeights(
            alpha_s=self.alpha_s,
            alpha_r=self.alpha_r,
            alpha_p=self.alpha_p,
            l_cutoff=self.l_cutoff,
            q_max=self.q_max,
            epsilon_edge=self.epsilon_edge,
            k_prime=self.k_prime,
        )

    def search_strategy(self) -> SearchStrategy:
        return SearchStrategy(
            kind=self.strategy,
            beam_width=self.beam_width,
            auto_expand=self.auto_expand,
            expand_factor=self.expand_factor,
            max_retries=self.max_retries,
        )

    def updated(self, **overrides: Any) -> RunConfig:
        """Copy with the non-None overrides applied (command-line flags win)."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value: str, line_no: int):
    kind = _TYPES[key]
    try:
        if kind == "float":
            return float(value)
        if kind in ("int", "int | None"):
            if kind == "int | None" and value.lower() in ("none", ""):
                return None
            return int(value)
        if kind == "bool":
            if value.lower() not in ("true", "false"):
                raise ValueError(value)
            return value.lower() == "true"
        return value
    except ValueError:
        raise ParseError(line_no, f"invalid value {value!r} for {key}") from None


def parse_config(text: str) -> RunConfig:
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(line_no, "expected 'key = value'")
        if key not in _TYPES:
            raise ParseError(line_no, f"unknown config key {key!r}")
        values[key] = _coerce(key, value, line_no)
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())

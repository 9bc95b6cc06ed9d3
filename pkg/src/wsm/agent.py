"""Goal-driven perceive/act loop.

The agent holds a reflex table (the end-to-end model), optionally a concept
graph, and a self model carrying its goal and current status. Each step it
measures the distance ``goal - status``; a matching reflex fires first,
otherwise every available action is tried on a copy of the (deterministic)
environment and the one leaving the smallest distance is taken.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Protocol, Sequence

from .errors import InvalidInputError, InvalidParameterError, ParseError, StuckError
from .graph import SELF_ID, ConceptGraph

Vector = tuple[float, ...]


def _vector(values: Iterable[float]) -> Vector:
    vec = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in vec):
        raise InvalidInputError(f"vector has non-finite entries: {vec}")
    return vec


def distance(goal: Sequence[float], status: Sequence[float]) -> Vector:
    if len(goal) != len(status):
        raise InvalidInputError(f"goal has {len(goal)} dimensions, status has {len(status)}")
    return tuple(float(g) - float(s) for g, s in zip(goal, status))


def magnitude(vec: Sequence[float]) -> float:
    return math.hypot(*vec)


@dataclass(frozen=True)
class SelfModel:
    goal: Vector
    status: Vector
    concept: int = SELF_ID

    def __post_init__(self):
        object.__setattr__(self, "goal", _vector(self.goal))
        object.__setattr__(self, "status", _vector(self.status))
        if self.concept != SELF_ID:
            raise InvalidParameterError("the self model is always bound to concept 0")
        if len(self.goal) != len(self.status):
            raise InvalidInputError("goal and status shapes differ")

    @property
    def distance(self) -> Vector:
        return distance(self.goal, self.status)


@dataclass(frozen=True)
class ReflexRule:
    percept: str
    action: str


@dataclass(frozen=True)
class EndToEndModel:
    rules: tuple[ReflexRule, ...] = ()

    def match(self, percept: Iterable[str]) -> ReflexRule | None:
        percept = set(percept)
        for rule in self.rules:
            if rule.percept in percept:
                return rule
        return None


class Environment(Protocol):
    deterministic: bool

    def status(self) -> Vector: ...

    def actions(self) -> Sequence[str]: ...

    def percept(self) -> frozenset[str]: ...

    def apply(self, action: str) -> tuple["Environment", frozenset[str]]: ...


MOVES = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}


@dataclass(frozen=True)
class GridWorld:
    """Rectangular grid; moves into walls or obstacles leave the agent in place.

    Percept ``danger-adjacent`` is raised when a hazard cell is a 4-neighbour.
    ``retreat`` returns to the previous cell.
    """

    width: int
    height: int
    position: tuple[int, int]
    obstacles: frozenset[tuple[int, int]] = frozenset()
    hazards: frozenset[tuple[int, int]] = frozenset()
    allow_noop: bool = False
    previous: tuple[int, int] | None = None
    deterministic: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidParameterError("grid dimensions must be positive")
        if not self._free(self.position):
            raise InvalidParameterError(f"start cell {self.position} is outside the grid or blocked")

    def _free(self, cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height and cell not in self.obstacles

    def status(self) -> Vector:
        return (float(self.position[0]), float(self.position[1]))

    def actions(self) -> tuple[str, ...]:
        return tuple(MOVES) + (("stay",) if self.allow_noop else ())

    def percept(self) -> frozenset[str]:
        x, y = self.position
        near = any((x + dx, y + dy) in self.hazards for dx, dy in MOVES.values())
        return frozenset({"danger-adjacent"} if near else ())

    def apply(self, action: str) -> tuple[GridWorld, frozenset[str]]:
        if action in MOVES:
            dx, dy = MOVES[action]
            cell = (self.position[0] + dx, self.position[1] + dy)
            if not self._free(cell):
                cell = self.position
        elif action == "stay":
            cell = self.position
        elif action == "retreat":
            cell = self.previous if self.previous is not None else self.position
        else:
            raise InvalidInputError(f"unknown action {action!r}")
        nxt = replace(self, position=cell, previous=self.position)
        return nxt, nxt.percept()


@dataclass(frozen=True)
class Agent:
    self_model: SelfModel
    eem: EndToEndModel = EndToEndModel()
    wsm: ConceptGraph | None = field(default=None, compare=False)

    @property
    def distance(self) -> Vector:
        return self.self_model.distance

    def with_status(self, status: Sequence[float]) -> Agent:
        return replace(self, self_model=replace(self.self_model, status=_vector(status)))

    def with_goal(self, goal: Sequence[float]) -> Agent:
        return replace(self, self_model=replace(self.self_model, goal=_vector(goal)))


def choose_action(agent: Agent, env: Environment) -> str:
    rule = agent.eem.match(env.percept())
    if rule is not None:
        return rule.action
    actions = list(env.actions())
    if not actions:
        raise StuckError("environment offers no actions")
    best, best_d = None, math.inf
    for action in actions:
        predicted, _ = env.apply(action)
        d = magnitude(distance(agent.self_model.goal, predicted.status()))
        if d < best_d:
            best, best_d = action, d
    return best


def step(agent: Agent, env: Environment) -> tuple[str, Agent, Environment]:
    action = choose_action(agent, env)
    env, _ = env.apply(action)
    return action, agent.with_status(env.status()), env


@dataclass(frozen=True)
class TrajectoryStep:
    t: int
    status: Vector
    action: str
    distance: float


@dataclass
class Trajectory:
    steps: list[TrajectoryStep]
    met: bool
    final_distance: float
    agent: Agent = field(repr=False)
    environment: Environment = field(repr=False)

    @property
    def actions(self) -> list[str]:
        return [s.action for s in self.steps]

    def log_lines(self) -> list[str]:
        lines = []
        for s in self.steps:
            values = " ".join(f"{v:g}" for v in s.status)
            lines.append(f"{s.t} {values} {s.action} {s.distance:.6f}")
        lines.append(f"met {str(self.met).lower()} steps {len(self.steps)} |D| {self.final_distance:.6f}")
        return lines


Hook = Callable[[Agent, Environment, TrajectoryStep], Agent]


def run_episode(agent: Agent, env: Environment, max_steps: int, hook: Hook | None = None) -> Trajectory:
    """Step until the distance reaches zero or ``max_steps`` steps were taken.

    ``hook`` runs after every step and may return an updated agent (new
    reflex table, new goal); the distance is re-evaluated against it.
    """
    if not isinstance(max_steps, int) or max_steps < 1:
        raise InvalidParameterError(f"max_steps must be a positive integer, got {max_steps!r}")
    agent = agent.with_status(env.status())
    steps: list[TrajectoryStep] = []
    d = magnitude(agent.distance)
    while d > 0 and len(steps) < max_steps:
        action, agent, env = step(agent, env)
        record = TrajectoryStep(len(steps) + 1, agent.self_model.status, action, magnitude(agent.distance))
        if hook is not None:
            agent = hook(agent, env, record)
        d = magnitude(agent.distance)
        steps.append(record)
    return Trajectory(steps, d == 0, d, agent, env)


@dataclass
class Scenario:
    world: GridWorld
    goal: Vector
    reflexes: tuple[ReflexRule, ...]
    max_steps: int

    def agent(self) -> Agent:
        return Agent(SelfModel(self.goal, self.world.status()), EndToEndModel(self.reflexes))


def _cells(value: str, line_no: int) -> list[tuple[int, int]]:
    cells = []
    for chunk in value.split(";"):
        chunk = chunk.strip()
        if chunk:
            cells.append(tuple(_ints(chunk, 2, line_no)))
    return cells


def _ints(value: str, count: int, line_no: int) -> list[int]:
    parts = value.replace(",", " ").split()
    try:
        out = [int(p) for p in parts]
    except ValueError:
        raise ParseError(line_no, f"expected {count} integers, got {value!r}") from None
    if len(out) != count:
        raise ParseError(line_no, f"expected {count} integers, got {value!r}")
    return out


def parse_scenario(text: str) -> Scenario:
    """Parse a gridworld scenario.

    ``key = value`` lines: ``grid = W H``, ``start = X Y``, ``goal = X Y``,
    ``max_steps = N``, optional ``obstacles`` / ``hazards`` as ``x y; x y``,
    ``noop = true|false`` and repeatable ``reflex = <percept> <action>``.
    """
    fields: dict[str, object] = {"obstacles": [], "hazards": [], "reflex": [], "noop": False}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError(line_no, "expected 'key = value'")
        if key in ("grid", "start", "goal"):
            fields[key] = _ints(value, 2, line_no)
        elif key == "max_steps":
            fields[key] = _ints(value, 1, line_no)[0]
        elif key in ("obstacles", "hazards"):
            fields[key] += _cells(value, line_no)
        elif key == "reflex":
            parts = value.split()
            if len(parts) != 2:
                raise ParseError(line_no, "reflex needs: <percept> <action>")
            fields["reflex"].append(ReflexRule(*parts))
        elif key == "noop":
            if value.lower() not in ("true", "false"):
                raise ParseError(line_no, f"noop must be true or false, got {value!r}")
            fields["noop"] = value.lower() == "true"
        else:
            raise ParseError(line_no, f"unknown scenario key {key!r}")
    for key in ("grid", "start", "goal", "max_steps"):
        if key not in fields:
            raise ParseError(0, f"scenario is missing {key!r}")
    world = GridWorld(
        width=fields["grid"][0],
        height=fields["grid"][1],
        position=tuple(fields["start"]),
        obstacles=frozenset(fields["obstacles"]),
        hazards=frozenset(fields["hazards"]),
        allow_noop=fields["noop"],
    )
    return Scenario(world, _vector(fields["goal"]), tuple(fields["reflex"]), fields["max_steps"])

"""Key/door grid environment: layout, catalog enumeration, and dynamics.

Coordinates are (x, y) with y increasing downward; "upper" means smaller y.
A vertical internal wall splits the grid into a left room (key) and a right
room (goal); a single door cell in the wall connects them.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple

Cell = tuple[int, int]


class ConfigError(ValueError):
    """Invalid layout or catalog configuration."""


class Orientation(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3


# dx, dy per orientation, indexed by Orientation value
DELTAS = ((0, -1), (1, 0), (0, 1), (-1, 0))


class Action(IntEnum):
    FORWARD = 0
    TURN_LEFT = 1
    TURN_RIGHT = 2
    PICKUP = 3
    OPEN_DOOR = 4


ACTIONS = tuple(Action)


class AgentState(NamedTuple):
    x: int
    y: int
    orientation: int
    has_key: bool
    door_open: bool

    def features(self) -> tuple[int, int, int, int, int]:
        """5-dim node feature vector (x, y, orientation, has_key, door_open)."""
        return (self.x, self.y, int(self.orientation), int(self.has_key),
                int(self.door_open))


@dataclass(frozen=True)
class Environment:
    env_id: int
    key_pos: Cell
    door_pos: Cell


@dataclass(frozen=True)
class LayoutConfig:
    width: int = 8
    height: int = 8
    wall_column: int = 4
    key_region: tuple[Cell, ...] = ()
    door_rows: tuple[int, ...] = ()
    goal: Cell = (6, 6)
    start: Cell = (1, 1)
    start_orientation: Orientation = Orientation.E

    def __post_init__(self):
        if self.width < 5 or self.height < 3:
            raise ConfigError("grid too small for two rooms")
        if not (1 <= self.wall_column <= self.width - 2):
            raise ConfigError("wall_column must be interior")
        if not self.key_region:
            raise ConfigError("key_region is empty")
        if not self.door_rows:
            raise ConfigError("door_rows is empty")
        for (x, y) in self.key_region:
            if not (1 <= x < self.wall_column and 1 <= y <= self.height - 2):
                raise ConfigError(f"key cell {(x, y)} outside the left room")
        for y in self.door_rows:
            if not (1 <= y <= self.height - 2):
                raise ConfigError(f"door row {y} outside the interior")
        gx, gy = self.goal
        if not (self.wall_column < gx <= self.width - 2 and 1 <= gy <= self.height - 2):
            raise ConfigError("goal must be a free cell right of the wall")
        if self.goal in self.key_region:
            raise ConfigError("goal overlaps key_region")
        sx, sy = self.start
        if not (1 <= sx < self.wall_column and 1 <= sy <= self.height - 2):
            raise ConfigError("start must be a free cell left of the wall")

    @classmethod
    def default(cls) -> "LayoutConfig":
        key_region = tuple((x, y) for x in range(1, 4) for y in range(1, 7))
        return cls(key_region=key_region, door_rows=tuple(range(1, 7)))

    def is_wall(self, cell: Cell) -> bool:
        """True for border and internal-wall cells; the door cell is handled
        separately because its passability depends on the door state."""
        x, y = cell
        if x <= 0 or x >= self.width - 1 or y <= 0 or y >= self.height - 1:
            return True
        return x == self.wall_column

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "wall_column": self.wall_column,
            "key_region": [list(c) for c in self.key_region],
            "door_rows": list(self.door_rows),
            "goal": list(self.goal),
            "start": list(self.start),
            "start_orientation": Orientation(self.start_orientation).name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LayoutConfig":
        return cls(
            width=d["width"],
            height=d["height"],
            wall_column=d["wall_column"],
            key_region=tuple(tuple(c) for c in d["key_region"]),
            door_rows=tuple(d["door_rows"]),
            goal=tuple(d["goal"]),
            start=tuple(d["start"]),
            start_orientation=Orientation[d["start_orientation"]],
        )


def build_catalog(layout: LayoutConfig) -> list[Environment]:
    """Enumerate key_region x door_rows, sorted by (key_pos, door_pos)."""
    envs = []
    placements = sorted(
        (key, (layout.wall_column, row))
        for key in layout.key_region
        for row in layout.door_rows
    )
    for env_id, (key, door) in enumerate(placements):
        envs.append(Environment(env_id=env_id, key_pos=key, door_pos=door))
    return envs


def start_state(layout: LayoutConfig) -> AgentState:
    return AgentState(layout.start[0], layout.start[1],
                      int(layout.start_orientation), False, False)


def _passable(layout: LayoutConfig, env: Environment, cell: Cell,
              has_key: bool, door_open: bool) -> bool:
    if cell == env.door_pos:
        return door_open
    if layout.is_wall(cell):
        return False
    if cell == env.key_pos and not has_key:
        # The key occupies its cell until picked up.
        return False
    return True


def _ahead(s: AgentState) -> Cell:
    dx, dy = DELTAS[s.orientation]
    return (s.x + dx, s.y + dy)


def step(layout: LayoutConfig, env: Environment, s: AgentState,
         a: Action) -> AgentState:
    """Deterministic successor; blocked or inapplicable actions are no-ops."""
    if a == Action.FORWARD:
        tx, ty = _ahead(s)
        if _passable(layout, env, (tx, ty), s.has_key, s.door_open):
            return s._replace(x=tx, y=ty)
        return s
    if a == Action.TURN_LEFT:
        return s._replace(orientation=(s.orientation - 1) % 4)
    if a == Action.TURN_RIGHT:
        return s._replace(orientation=(s.orientation + 1) % 4)
    if a == Action.PICKUP:
        if not s.has_key and _ahead(s) == env.key_pos:
            return s._replace(has_key=True)
        return s
    if a == Action.OPEN_DOOR:
        if s.has_key and not s.door_open and _ahead(s) == env.door_pos:
            return s._replace(door_open=True)
        return s
    raise ValueError(f"unknown action {a!r}")


Edge = tuple[AgentState, AgentState]


def _edge(a: AgentState, b: AgentState) -> Edge:
    return (a, b) if a <= b else (b, a)


def reachable(layout: LayoutConfig, env: Environment
              ) -> tuple[frozenset[AgentState], frozenset[Edge]]:
    """Breadth-first closure from the start state under all five actions.

    Transitions are recorded as unordered state pairs; no-op self-loops are
    discarded.
    """
    s0 = start_state(layout)
    seen = {s0}
    edges: set[Edge] = set()
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        for a in ACTIONS:
            t = step(layout, env, s, a)
            if t == s:
                continue
            edges.add(_edge(s, t))
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return frozenset(seen), frozenset(edges)


def catalog_to_dict(layout: LayoutConfig, catalog: Iterable[Environment]) -> dict:
    return {
        "layout": layout.to_dict(),
        "environments": [
            {"env_id": e.env_id, "key": list(e.key_pos), "door": list(e.door_pos)}
            for e in catalog
        ],
    }


def catalog_from_dict(d: dict) -> tuple[LayoutConfig, list[Environment]]:
    layout = LayoutConfig.from_dict(d["layout"])
    catalog = [
        Environment(env_id=e["env_id"], key_pos=tuple(e["key"]),
                    door_pos=tuple(e["door"]))
        for e in d["environments"]
    ]
    return layout, catalog

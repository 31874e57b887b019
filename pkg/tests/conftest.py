"""Shared fixtures: a full default workspace (108 environments, trained
embedding) and a small 4-environment workspace for cheap unit tests."""
import pytest

from wmest.embedding import TrainConfig
from wmest.experiments import Workspace, build_workspace
from wmest.gridworld import LayoutConfig

SMALL_LAYOUT = LayoutConfig(
    width=7, height=5, wall_column=3,
    key_region=((1, 1), (1, 2)),
    door_rows=(1, 2),
    goal=(5, 2), start=(1, 3),
)


@pytest.fixture(scope="session")
def ws() -> Workspace:
    return build_workspace(seed=1)


@pytest.fixture(scope="session")
def small_ws() -> Workspace:
    return build_workspace(layout=SMALL_LAYOUT, seed=3,
                           train_cfg=TrainConfig(seed=3, dim=8, epochs=60))

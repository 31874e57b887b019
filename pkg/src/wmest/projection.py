"""2-D projection export of the embedding space, tagged with placements."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from .embedding import EmbeddingSpace, project_2d
from .gridworld import Environment


def projection_rows(space: EmbeddingSpace,
                    catalog: Sequence[Environment]) -> list[dict]:
    coords = project_2d(space)
    by_id = {e.env_id: e for e in catalog}
    rows = []
    for env_id in space.env_ids():
        e = by_id[env_id]
        x, y = coords[env_id]
        rows.append({
            "env_id": env_id, "x": x, "y": y,
            "key_x": e.key_pos[0], "key_y": e.key_pos[1],
            "door_x": e.door_pos[0], "door_y": e.door_pos[1],
        })
    return rows


def write_projection_csv(rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def read_projection_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as f:
        out = []
        for row in csv.DictReader(f):
            out.append({
                "env_id": int(row["env_id"]),
                "x": float(row["x"]), "y": float(row["y"]),
                "key_x": int(row["key_x"]), "key_y": int(row["key_y"]),
                "door_x": int(row["door_x"]), "door_y": int(row["door_y"]),
            })
        return out

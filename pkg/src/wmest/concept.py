"""Concept vectors in the embedding space: query, user, and language vectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .embedding import EmbeddingSpace
from .gridworld import Action, AgentState, Environment, Orientation
from .policy import Policy, action_prob


class DegenerateQueryError(ValueError):
    """One side of a query/user vector has zero total weight."""


@dataclass(frozen=True)
class Query:
    """The statement "action should be selected in state", with importance
    weight rho."""
    state: AgentState
    action: Action
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("query weight must be > 0")

    def to_dict(self) -> dict:
        s = self.state
        return {
            "state": {"x": s.x, "y": s.y,
                      "orientation": Orientation(s.orientation).name,
                      "has_key": bool(s.has_key),
                      "door_open": bool(s.door_open)},
            "action": Action(self.action).name,
            "weight": self.weight,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Query":
        s = d["state"]
        state = AgentState(s["x"], s["y"],
                           int(Orientation[s["orientation"]]),
                           bool(s["has_key"]), bool(s["door_open"]))
        return cls(state=state, action=Action[d["action"]],
                   weight=d.get("weight", 1.0))


@dataclass
class ConceptVector:
    kind: str  # "query" | "user" | "language"
    v: np.ndarray
    support: int
    label: str | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "support": self.support,
                "label": self.label, "vector": [float(x) for x in self.v]}


def query_vector(space: EmbeddingSpace, q: Query,
                 policies: Mapping[int, Policy],
                 env_ids: Sequence[int] | None = None,
                 temperature: float = 0.0) -> ConceptVector:
    """Direction v_pos - v_neg of the weighted mean embeddings of environments
    that do and do not satisfy the query.

    Environments whose graph lacks the query state are excluded from both
    sides. ``env_ids`` restricts the environments considered (CAV sampling).
    """
    ids = space.env_ids() if env_ids is None else list(env_ids)
    included = []
    probs = []
    for i in ids:
        p = policies[i]
        if not p.contains(q.state) or q.state not in p.optimal_action:
            continue
        included.append(i)
        probs.append(action_prob(p, q.state, q.action, temperature))
    if not included:
        raise DegenerateQueryError("query state absent from every environment")
    w = np.asarray(probs)
    vecs = space.matrix(included)
    pos_total = float(w.sum())
    neg_total = float((1.0 - w).sum())
    if pos_total == 0.0:
        raise DegenerateQueryError("no environment satisfies the query "
                                   "(positive side empty)")
    if neg_total == 0.0:
        raise DegenerateQueryError("every environment satisfies the query "
                                   "(negative side empty)")
    v_pos = (vecs * w[:, None]).sum(axis=0) / pos_total
    v_neg = (vecs * (1.0 - w)[:, None]).sum(axis=0) / neg_total
    return ConceptVector(kind="query", v=v_pos - v_neg, support=len(included))


def user_vector(space: EmbeddingSpace, prior: Mapping[int, float]
                ) -> ConceptVector:
    """Direction encoding the user's prior tendency over environments."""
    ids = sorted(prior)
    p = np.asarray([prior[i] for i in ids], dtype=np.float64)
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("prior values must lie in [0, 1]")
    vecs = space.matrix(ids)
    pos_total = float(p.sum())
    neg_total = float((1.0 - p).sum())
    if pos_total == 0.0 or neg_total == 0.0:
        raise DegenerateQueryError("degenerate prior: one side has zero mass")
    v_pos = (vecs * p[:, None]).sum(axis=0) / pos_total
    v_neg = (vecs * (1.0 - p)[:, None]).sum(axis=0) / neg_total
    return ConceptVector(kind="user", v=v_pos - v_neg, support=len(ids))


def language_vector(space: EmbeddingSpace,
                    pairs: Sequence[tuple[int, int]],
                    label: str) -> ConceptVector:
    """Mean embedding difference over environment pairs sharing a relation."""
    if not pairs:
        raise ValueError(f"no training pairs for label {label!r}")
    diffs = [space.vectors[m] - space.vectors[n] for m, n in pairs]
    return ConceptVector(kind="language", v=np.mean(diffs, axis=0),
                         support=len(pairs), label=label)


LANGUAGE_LABELS = (
    "key upper", "key lower", "key left", "key right",
    "door upper", "door lower", "door left", "door right",
)


def pair_labeler(m: Environment, n: Environment) -> set[str]:
    """All spatial-relation labels consistent with the coordinate differences
    of key and door between m and n. y grows downward, so "upper" means a
    strictly smaller y in m."""
    if m.env_id == n.env_id:
        raise ValueError("pair members must differ")
    labels: set[str] = set()
    for name, (mx, my), (nx, ny) in (("key", m.key_pos, n.key_pos),
                                     ("door", m.door_pos, n.door_pos)):
        if my < ny:
            labels.add(f"{name} upper")
        elif my > ny:
            labels.add(f"{name} lower")
        if mx < nx:
            labels.add(f"{name} left")
        elif mx > nx:
            labels.add(f"{name} right")
    return labels

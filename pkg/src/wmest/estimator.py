"""Scoring of candidate environments and selection of the estimated world
model and language explanation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .concept import ConceptVector, Query, query_vector
from .embedding import EmbeddingSpace, cosine, distance
from .policy import Policy, StateAbsentError, action_prob


class EstimationError(RuntimeError):
    """No candidate environments left to rank."""


class NoDifferenceError(RuntimeError):
    """Estimated and observed embeddings coincide; no explanation applies."""


@dataclass(frozen=True)
class EstimatorConfig:
    lam: float = 0.0
    excluded: frozenset[int] = frozenset()
    mode: str = "cav"  # "cav" | "prob"
    temperature: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        if self.mode not in ("cav", "prob"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class EstimationResult:
    ranking: list[tuple[int, float]]
    env_est: int
    explanation: str | None = None

    def rank_of(self, env_id: int) -> int:
        """1-based position of env_id in the ranking."""
        for pos, (i, _) in enumerate(self.ranking, start=1):
            if i == env_id:
                return pos
        raise KeyError(env_id)

    def to_dict(self) -> dict:
        return {
            "env_est": self.env_est,
            "explanation": self.explanation,
            "ranking": [{"env_id": i, "score": float(s)}
                        for i, s in self.ranking],
        }


def score(v_i: np.ndarray, v_obs: np.ndarray,
          vectors: Sequence[tuple[np.ndarray, float]],
          lam: float) -> float:
    """S = sum_j rho_j cos(v_query_j, v_i - v_obs) - lambda |v_i - v_obs|.

    The cosine terms contribute 0 when v_i equals v_obs (zero-vector
    convention)."""
    v_i = np.asarray(v_i, dtype=np.float64)
    v_obs = np.asarray(v_obs, dtype=np.float64)
    if v_i.shape != v_obs.shape:
        raise ValueError("dimension mismatch between candidate and observed")
    diff = v_i - v_obs
    total = 0.0
    for v, rho in vectors:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != diff.shape:
            raise ValueError("dimension mismatch in query vector")
        total += rho * cosine(v, diff)
    return total - lam * distance(v_i, v_obs)


def score_probabilistic(policy: Policy, v_i: np.ndarray, v_obs: np.ndarray,
                        queries: Sequence[Query], lam: float,
                        temperature: float = 0.0) -> float:
    """Baseline score: sum of query-satisfaction probabilities minus the
    distance penalty; absent query states contribute 0."""
    total = 0.0
    for q in queries:
        if not policy.contains(q.state) or q.state not in policy.optimal_action:
            continue
        total += action_prob(policy, q.state, q.action, temperature)
    return total - lam * distance(v_i, v_obs)


def estimate(space: EmbeddingSpace, obs_env: int, queries: Sequence[Query],
             cfg: EstimatorConfig, policies: Mapping[int, Policy],
             extra_vectors: Sequence[ConceptVector] = (),
             cav_cache: dict | None = None,
             env_ids: Sequence[int] | None = None) -> EstimationResult:
    """Rank all non-excluded environments by the configured score.

    ``extra_vectors`` (e.g. a user vector) join the query vectors in CAV mode.
    ``env_ids`` restricts the environments used to build the CAVs, not the
    candidates ranked.
    """
    candidates = [i for i in space.env_ids() if i not in cfg.excluded]
    if not candidates:
        raise EstimationError("all environments are excluded")
    v_obs = space.vectors[obs_env]

    if cfg.mode == "cav":
        vectors: list[tuple[np.ndarray, float]] = []
        for q in queries:
            key = (q.state, q.action, cfg.temperature,
                   tuple(env_ids) if env_ids else None)
            if cav_cache is not None and key in cav_cache:
                cav = cav_cache[key]
            else:
                cav = query_vector(space, q, policies, env_ids=env_ids,
                                   temperature=cfg.temperature)
                if cav_cache is not None:
                    cav_cache[key] = cav
            vectors.append((cav.v, q.weight))
        for cv in extra_vectors:
            vectors.append((cv.v, 1.0))
        scored = [(i, score(space.vectors[i], v_obs, vectors, cfg.lam))
                  for i in candidates]
    else:
        scored = [
            (i, score_probabilistic(policies[i], space.vectors[i], v_obs,
                                    queries, cfg.lam, cfg.temperature))
            for i in candidates
        ]

    ranking = sorted(scored, key=lambda t: (-t[1], t[0]))
    return EstimationResult(ranking=ranking, env_est=ranking[0][0])


def explain(space: EmbeddingSpace, env_est: int, obs_env: int,
            language_vectors: Sequence[ConceptVector]
            ) -> tuple[str, list[tuple[str, float]]]:
    """Best-matching language label for the estimated-vs-observed difference,
    plus the full similarity-sorted label list."""
    if not language_vectors:
        raise ValueError("no language vectors given")
    diff = space.vectors[env_est] - space.vectors[obs_env]
    if not np.any(diff):
        raise NoDifferenceError("estimated and observed environments coincide")
    sims = [(cv.label or "", cosine(cv.v, diff)) for cv in language_vectors]
    ranked = sorted(sims, key=lambda t: (-t[1], t[0]))
    return ranked[0][0], ranked

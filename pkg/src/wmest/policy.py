"""Exact shortest-path policies per environment and action probabilities."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .gridworld import (ACTIONS, Action, AgentState, Environment, LayoutConfig,
                        reachable, step)


class PlanningError(RuntimeError):
    """Goal unreachable from the start state."""


class StateAbsentError(KeyError):
    """Queried state is not in this environment's reachable set."""


@dataclass
class Policy:
    """Optimal policy over the reachable state graph of one environment.

    ``value[s]`` is the negated number of steps to the goal; ``optimal_action``
    is defined on every reachable non-goal state with ties broken by the fixed
    action order FORWARD < TURN_LEFT < TURN_RIGHT < PICKUP < OPEN_DOOR.
    """
    env_id: int
    layout: LayoutConfig
    env: Environment
    optimal_action: dict[AgentState, Action] = field(repr=False)
    value: dict[AgentState, float] = field(repr=False)

    def contains(self, s: AgentState) -> bool:
        return s in self.value


def plan_optimal(layout: LayoutConfig, env: Environment) -> Policy:
    states, _ = reachable(layout, env)
    succ = {s: tuple(step(layout, env, s, a) for a in ACTIONS) for s in states}

    # Backward BFS from goal states over the reversed transition graph.
    pred: dict[AgentState, list[AgentState]] = {s: [] for s in states}
    for s, ts in succ.items():
        for t in ts:
            if t != s:
                pred[t].append(s)
    goal = layout.goal
    dist: dict[AgentState, int] = {}
    queue = deque()
    for s in states:
        if (s.x, s.y) == goal:
            dist[s] = 0
            queue.append(s)
    if not queue:
        raise PlanningError(f"goal unreachable in environment {env.env_id}")
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in dist:
                dist[s] = dist[t] + 1
                queue.append(s)
    if len(dist) != len(states):
        raise PlanningError(
            f"{len(states) - len(dist)} states cannot reach the goal "
            f"in environment {env.env_id}")

    optimal: dict[AgentState, Action] = {}
    for s in states:
        if (s.x, s.y) == goal:
            continue
        best = min(ACTIONS, key=lambda a: (dist[succ[s][a]], int(a)))
        optimal[s] = best
    value = {s: -float(d) for s, d in dist.items()}
    return Policy(env_id=env.env_id, layout=layout, env=env,
                  optimal_action=optimal, value=value)


def action_prob(p: Policy, s: AgentState, a: Action,
                temperature: float = 0.0) -> float:
    """P(a | environment, s): indicator of the optimal action at temperature 0,
    softmax over Q(s, a) = value(step(s, a)) - 1 otherwise."""
    if s not in p.value:
        raise StateAbsentError(s)
    if (s.x, s.y) == p.layout.goal:
        raise StateAbsentError(s)  # no action defined at the absorbing goal
    if temperature <= 0.0:
        return 1.0 if p.optimal_action[s] == a else 0.0
    qs = []
    for b in ACTIONS:
        t = step(p.layout, p.env, s, b)
        qs.append(p.value[t] - 1.0)
    m = max(qs)
    ws = [math.exp((q - m) / temperature) for q in qs]
    return ws[int(a)] / sum(ws)


def perturb_policy(p: Policy, scale: float,
                   rng: np.random.Generator) -> Policy:
    """Noisy copy of a policy, modeling one learned by approximate methods
    (e.g. reinforcement learning): Gaussian noise of the given scale is added
    to every state value and the greedy action is re-derived from the noisy
    values, earliest action winning near-ties."""
    noise = {s: rng.normal(0.0, scale) for s in p.value}
    value = {s: v + noise[s] for s, v in p.value.items()}
    optimal: dict[AgentState, Action] = {}
    for s in p.optimal_action:
        best, best_q = None, None
        for a in ACTIONS:
            t = step(p.layout, p.env, s, a)
            q = value[t] - 1.0
            if best_q is None or q > best_q + 1e-12:
                best, best_q = a, q
        optimal[s] = best
    return Policy(env_id=p.env_id, layout=p.layout, env=p.env,
                  optimal_action=optimal, value=value)


def perturb_catalog(policies: dict[int, Policy], scale: float,
                    seed: int) -> dict[int, Policy]:
    """Independently perturbed copy of every policy; the RNG stream for each
    environment derives from (seed, env_id)."""
    return {i: perturb_policy(p, scale, np.random.default_rng([seed, i]))
            for i, p in policies.items()}


def sample_action(p: Policy, s: AgentState, temperature: float,
                  rng: np.random.Generator) -> Action:
    """Draw one action from the policy's action distribution at the given
    temperature (the optimal action with probability 1 at temperature 0)."""
    probs = np.array([action_prob(p, s, a, temperature) for a in ACTIONS])
    return ACTIONS[rng.choice(len(ACTIONS), p=probs)]


def rollout(p: Policy, s: AgentState, max_steps: int | None = None
            ) -> list[tuple[AgentState, Action]]:
    """Follow the optimal policy from ``s`` until the goal; returns the visited
    (state, action) pairs."""
    if s not in p.value:
        raise StateAbsentError(s)
    limit = max_steps if max_steps is not None else len(p.value) + 1
    out: list[tuple[AgentState, Action]] = []
    for _ in range(limit):
        if (s.x, s.y) == p.layout.goal:
            return out
        a = p.optimal_action[s]
        out.append((s, a))
        s = step(p.layout, p.env, s, a)
    raise PlanningError("rollout did not terminate")


def plan_catalog(layout: LayoutConfig, catalog: list[Environment]
                 ) -> dict[int, Policy]:
    return {env.env_id: plan_optimal(layout, env) for env in catalog}

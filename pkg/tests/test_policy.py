"""Unit tests for planning, action probabilities, and policy perturbation.

The planner oracle is the Bellman condition on the produced value function,
which is independent of the backward-search implementation.
"""
import numpy as np
import pytest

from wmest.gridworld import (ACTIONS, Action, Environment, LayoutConfig,
                             start_state, step)
from wmest.policy import (StateAbsentError, action_prob, perturb_catalog,
                          perturb_policy, plan_catalog, plan_optimal, rollout,
                          sample_action)

LAYOUT = LayoutConfig.default()
ENV = Environment(env_id=0, key_pos=(1, 1), door_pos=(4, 1))


@pytest.fixture(scope="module")
def policy():
    return plan_optimal(LAYOUT, ENV)


def test_bellman_consistency(policy):
    """value satisfies the shortest-path Bellman equation and optimal_action
    attains it with the earliest action winning ties."""
    for s, v in policy.value.items():
        if (s.x, s.y) == LAYOUT.goal:
            assert v == 0.0
            assert s not in policy.optimal_action
            continue
        qs = [policy.value[step(LAYOUT, ENV, s, a)] - 1.0 for a in ACTIONS]
        best = max(qs)
        assert v == best
        chosen = policy.optimal_action[s]
        assert qs[int(chosen)] == best
        assert all(qs[int(a)] < best for a in ACTIONS if a < chosen)


def test_rollout_reaches_goal(policy):
    s0 = start_state(LAYOUT)
    path = rollout(policy, s0)
    assert len(path) == -policy.value[s0]
    s = s0
    for ps, pa in path:
        assert ps == s
        s = step(LAYOUT, ENV, s, pa)
    assert (s.x, s.y) == LAYOUT.goal


def test_rollout_rejects_absent_state(policy):
    ghost = start_state(LAYOUT)._replace(x=6, y=6, door_open=False)
    with pytest.raises(StateAbsentError):
        rollout(policy, ghost)


def test_action_prob_indicator(policy):
    s = start_state(LAYOUT)
    opt = policy.optimal_action[s]
    for a in ACTIONS:
        assert action_prob(policy, s, a) == (1.0 if a == opt else 0.0)


def test_action_prob_softmax(policy):
    s = start_state(LAYOUT)
    probs = [action_prob(policy, s, a, temperature=0.5) for a in ACTIONS]
    assert abs(sum(probs) - 1.0) < 1e-12
    assert all(p > 0 for p in probs)
    opt = policy.optimal_action[s]
    assert probs[int(opt)] == max(probs)
    # lower temperature concentrates on the optimum
    sharper = action_prob(policy, s, opt, temperature=0.1)
    assert sharper > probs[int(opt)]


def test_action_prob_errors(policy):
    goal_states = [s for s in policy.value if (s.x, s.y) == LAYOUT.goal]
    with pytest.raises(StateAbsentError):
        action_prob(policy, goal_states[0], Action.FORWARD)
    ghost = start_state(LAYOUT)._replace(door_open=True)
    with pytest.raises(StateAbsentError):
        action_prob(policy, ghost, Action.FORWARD)


def test_perturb_zero_scale_is_identity(policy):
    p2 = perturb_policy(policy, 0.0, np.random.default_rng(0))
    assert p2.optimal_action == policy.optimal_action
    assert p2.value == policy.value


def test_perturb_is_deterministic_and_disruptive(policy):
    p1 = perturb_policy(policy, 0.5, np.random.default_rng(4))
    p2 = perturb_policy(policy, 0.5, np.random.default_rng(4))
    assert p1.optimal_action == p2.optimal_action
    assert p1.value == p2.value
    # same support, but the greedy policy changes somewhere
    assert set(p1.optimal_action) == set(policy.optimal_action)
    assert set(p1.value) == set(policy.value)
    assert p1.optimal_action != policy.optimal_action


def test_perturb_catalog_keys_streams_by_env():
    policies = plan_catalog(LAYOUT, [
        ENV, Environment(env_id=1, key_pos=(1, 1), door_pos=(4, 2))])
    pert = perturb_catalog(policies, 0.5, 0)
    pert2 = perturb_catalog(policies, 0.5, 0)
    assert set(pert) == {0, 1}
    for i in pert:
        assert pert[i].value == pert2[i].value
    other = perturb_catalog(policies, 0.5, 1)
    assert any(pert[i].value != other[i].value for i in pert)


def test_sample_action(policy):
    s = start_state(LAYOUT)
    opt = policy.optimal_action[s]
    rng = np.random.default_rng(0)
    assert all(sample_action(policy, s, 0.0, rng) == opt for _ in range(10))
    draws = [sample_action(policy, s, 5.0, rng) for _ in range(300)]
    assert len(set(draws)) >= 3  # high temperature actually explores
    assert opt in set(draws)


def test_plan_catalog_ids():
    envs = [ENV, Environment(env_id=5, key_pos=(2, 2), door_pos=(4, 3))]
    policies = plan_catalog(LAYOUT, envs)
    assert set(policies) == {0, 5}
    assert all(policies[i].env_id == i for i in policies)

"""Unit tests for concept vectors: query, user, and language directions.

Query/user vectors are checked against straight re-computations of the
weighted-mean difference in the test body.
"""
import numpy as np
import pytest

from wmest.concept import (ConceptVector, DegenerateQueryError, Query,
                           LANGUAGE_LABELS, language_vector, pair_labeler,
                           query_vector, user_vector)
from wmest.gridworld import ACTIONS, Action, Environment, Orientation
from wmest.policy import action_prob


def common_states(ws):
    sets = [set(p.optimal_action) for p in ws.policies.values()]
    return sorted(set.intersection(*sets))


def expected_query_vector(ws, q, temperature=0.0):
    weights, vecs = [], []
    for i in sorted(ws.policies):
        p = ws.policies[i]
        if q.state not in p.optimal_action:
            continue
        weights.append(action_prob(p, q.state, q.action, temperature))
        vecs.append(ws.space.vectors[i])
    w = np.array(weights)
    v = np.array(vecs)
    pos = (v * w[:, None]).sum(0) / w.sum()
    neg = (v * (1 - w)[:, None]).sum(0) / (1 - w).sum()
    return pos - neg


def split_query(ws):
    """A (state, action) optimal in some environments but not all."""
    for s in common_states(ws):
        actions = {p.optimal_action[s] for p in ws.policies.values()}
        if len(actions) > 1:
            return Query(state=s, action=sorted(actions)[0])
    raise AssertionError("no splitting query in the small catalog")


def test_query_vector_matches_mean_difference(small_ws):
    q = split_query(small_ws)
    cav = query_vector(small_ws.space, q, small_ws.policies)
    assert cav.kind == "query"
    assert cav.support == len(small_ws.catalog)
    assert np.allclose(cav.v, expected_query_vector(small_ws, q))


def test_query_vector_soft_weights(small_ws):
    q = split_query(small_ws)
    cav = query_vector(small_ws.space, q, small_ws.policies, temperature=0.3)
    assert np.allclose(cav.v,
                       expected_query_vector(small_ws, q, temperature=0.3))
    hard = query_vector(small_ws.space, q, small_ws.policies)
    assert not np.allclose(cav.v, hard.v)


def test_query_vector_env_subset(small_ws):
    q = split_query(small_ws)
    ids = [e.env_id for e in small_ws.catalog]
    full = query_vector(small_ws.space, q, small_ws.policies)
    sub = query_vector(small_ws.space, q, small_ws.policies, env_ids=ids)
    assert np.allclose(full.v, sub.v)


def test_query_vector_degenerate_sides(small_ws):
    s = common_states(small_ws)[0]
    chosen = {p.optimal_action[s] for p in small_ws.policies.values()}
    unused = [a for a in ACTIONS if a not in chosen][0]
    with pytest.raises(DegenerateQueryError):  # positive side empty
        query_vector(small_ws.space, Query(state=s, action=unused),
                     small_ws.policies)
    unanimous = next(s for s in common_states(small_ws)
                     if len({p.optimal_action[s]
                             for p in small_ws.policies.values()}) == 1)
    a = small_ws.policies[0].optimal_action[unanimous]
    with pytest.raises(DegenerateQueryError):  # negative side empty
        query_vector(small_ws.space, Query(state=unanimous, action=a),
                     small_ws.policies)


def test_query_roundtrip_and_validation(small_ws):
    q = split_query(small_ws)
    q2 = Query.from_dict(q.to_dict())
    assert q2 == q
    with pytest.raises(ValueError):
        Query(state=q.state, action=q.action, weight=0.0)


def test_user_vector_uniform_prior_is_zero(small_ws):
    prior = {e.env_id: 0.5 for e in small_ws.catalog}
    uv = user_vector(small_ws.space, prior)
    assert uv.kind == "user"
    assert np.allclose(uv.v, 0.0)


def test_user_vector_matches_mean_difference(small_ws):
    ids = sorted(p.env_id for p in small_ws.catalog)
    prior = {i: 0.25 + 0.5 * (k % 2) for k, i in enumerate(ids)}
    uv = user_vector(small_ws.space, prior)
    p = np.array([prior[i] for i in ids])
    v = np.array([small_ws.space.vectors[i] for i in ids])
    pos = (v * p[:, None]).sum(0) / p.sum()
    neg = (v * (1 - p)[:, None]).sum(0) / (1 - p).sum()
    assert np.allclose(uv.v, pos - neg)


def test_user_vector_validation(small_ws):
    ids = [e.env_id for e in small_ws.catalog]
    with pytest.raises(ValueError):
        user_vector(small_ws.space, {i: 2.0 for i in ids})
    with pytest.raises(DegenerateQueryError):
        user_vector(small_ws.space, {i: 1.0 for i in ids})


def test_language_vector_is_mean_difference(small_ws):
    ids = [e.env_id for e in small_ws.catalog]
    pairs = [(ids[0], ids[1]), (ids[2], ids[3])]
    lv = language_vector(small_ws.space, pairs, "key upper")
    expected = np.mean([small_ws.space.vectors[m] - small_ws.space.vectors[n]
                        for m, n in pairs], axis=0)
    assert np.allclose(lv.v, expected)
    assert lv.label == "key upper"
    assert lv.support == 2
    with pytest.raises(ValueError):
        language_vector(small_ws.space, [], "key upper")


def test_pair_labeler():
    def env(i, key, door):
        return Environment(env_id=i, key_pos=key, door_pos=door)

    m = env(0, (1, 1), (4, 2))
    n = env(1, (1, 4), (4, 2))
    assert pair_labeler(m, n) == {"key upper"}  # y grows downward
    assert pair_labeler(n, m) == {"key lower"}
    n2 = env(2, (2, 1), (4, 5))
    assert pair_labeler(m, n2) == {"key left", "door upper"}
    with pytest.raises(ValueError):
        pair_labeler(m, m)
    assert set(LANGUAGE_LABELS) >= pair_labeler(m, n2)


def test_concept_vector_to_dict():
    cv = ConceptVector(kind="language", v=np.array([1.0, 2.0]), support=3,
                       label="door upper")
    d = cv.to_dict()
    assert d == {"kind": "language", "support": 3, "label": "door upper",
                 "vector": [1.0, 2.0]}

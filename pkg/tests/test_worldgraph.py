"""Unit tests for world graphs and Weisfeiler-Lehman label bags.

The isomorphism-invariance oracle expands compressed label ids back into
explicit subtree structures through the dictionary, so bags produced under
different node orders and names can be compared exactly.
"""
import random
from collections import Counter

import pytest

from wmest.gridworld import Action, Environment, LayoutConfig, step
from wmest.worldgraph import (LabelBag, LabelDictionary, build_label_corpus,
                              build_world_graph, graph_to_dict,
                              phase_crossing_edges, wl_label_bag)

LAYOUT = LayoutConfig.default()
ENV = Environment(env_id=0, key_pos=(1, 1), door_pos=(4, 1))


def expand(label, rev, memo):
    """Decompress a label id into the explicit (feature / subtree) structure
    it denotes; two labels are isomorphic iff their expansions are equal."""
    if label in memo:
        return memo[label]
    key = rev[label]
    if key[0] == "base":
        out = key
    else:
        _, own, neigh = key
        out = ("wl", expand(own, rev, memo),
               tuple(sorted(expand(u, rev, memo) for u in neigh)))
    memo[label] = out
    return out


def expanded_bag(bag: LabelBag, dictionary: LabelDictionary) -> Counter:
    rev = {i: k for k, i in dictionary._ids.items()}
    memo: dict = {}
    return Counter({expand(label, rev, memo): count
                    for label, count in bag.labels.items()})


def random_graph(rng, n=15):
    nodes = list(range(n))
    features = {v: (rng.randrange(3), rng.randrange(2)) for v in nodes}
    edges = {tuple(sorted(rng.sample(nodes, 2))) for _ in range(2 * n)}
    return nodes, features, sorted(edges)


def test_wl_isomorphism_invariance():
    rng = random.Random(7)
    for _ in range(100):
        nodes, features, edges = random_graph(rng)
        perm = list(nodes)
        rng.shuffle(perm)
        mapping = dict(zip(nodes, perm))
        nodes2 = sorted(nodes, key=lambda v: mapping[v])
        features2 = {mapping[v]: features[v] for v in nodes}
        edges2 = [tuple(sorted((mapping[a], mapping[b]))) for a, b in edges]
        d1, d2 = LabelDictionary(), LabelDictionary()
        b1 = wl_label_bag(nodes, features, edges, 3, d1)
        b2 = wl_label_bag(nodes2, features2, edges2, 3, d2)
        assert expanded_bag(b1, d1) == expanded_bag(b2, d2)


def test_wl_bag_size_and_depth0():
    nodes, features, edges = random_graph(random.Random(1))
    d = LabelDictionary()
    for depth in (0, 1, 3):
        bag = wl_label_bag(nodes, features, edges, depth, LabelDictionary())
        assert bag.size() == (depth + 1) * len(nodes)
    bag0 = wl_label_bag(nodes, features, edges, 0, d)
    # depth 0 is exactly the feature multiset under compression
    assert bag0.labels == Counter(d.get_id(("base", features[v]))
                                  for v in nodes)


def test_wl_distinguishes_structure():
    # a path and a cycle on equal uniform-feature node sets
    nodes = list(range(6))
    features = {v: (0,) for v in nodes}
    path = [(i, i + 1) for i in range(5)]
    cycle = path + [(0, 5)]
    d1, d2 = LabelDictionary(), LabelDictionary()
    b1 = wl_label_bag(nodes, features, path, 2, d1)
    b2 = wl_label_bag(nodes, features, cycle, 2, d2)
    assert expanded_bag(b1, d1) != expanded_bag(b2, d2)


def test_wl_rejects_negative_depth():
    with pytest.raises(ValueError):
        wl_label_bag([0], {0: (0,)}, [], -1, LabelDictionary())


def test_world_graph_crossing_edges():
    g = build_world_graph(LAYOUT, ENV)
    assert phase_crossing_edges(g, "door_open") == 1
    pickup_states = sum(
        1 for s in g.nodes
        if not s.has_key and step(LAYOUT, ENV, s, Action.PICKUP) != s)
    assert phase_crossing_edges(g, "has_key") == pickup_states
    assert pickup_states >= 1


def test_label_corpus_shares_dictionary():
    graphs = [build_world_graph(LAYOUT, e) for e in (
        ENV, Environment(env_id=1, key_pos=(1, 1), door_pos=(4, 2)))]
    bags, dictionary = build_label_corpus(graphs, 3)
    assert [b.env_id for b in bags] == [0, 1]
    assert len(dictionary) > 0
    # identical placements yield identical bags under the shared dictionary
    bags2, _ = build_label_corpus([graphs[0], graphs[0]], 3)
    assert bags2[0].labels == bags2[1].labels


def test_graph_to_dict():
    g = build_world_graph(LAYOUT, ENV)
    bags, dictionary = build_label_corpus([g], 2)
    d = graph_to_dict(g, bags[0])
    assert d["env_id"] == 0
    assert len(d["nodes"]) == len(g.nodes)
    assert all(0 <= i < len(g.nodes) and 0 <= j < len(g.nodes)
               for i, j in d["edges"])
    assert len(d["edges"]) == len(g.edges)
    assert sum(d["label_bag"].values()) == bags[0].size()

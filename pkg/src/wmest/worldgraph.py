"""Undirected world-model graphs and Weisfeiler-Lehman label bags."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .gridworld import AgentState, Environment, LayoutConfig, reachable


@dataclass
class WorldGraph:
    """State-transition graph of one environment with 5-dim node features."""
    env_id: int
    nodes: tuple[AgentState, ...]
    edges: frozenset[tuple[AgentState, AgentState]]

    @property
    def features(self) -> dict[AgentState, tuple]:
        return {s: s.features() for s in self.nodes}


@dataclass
class LabelBag:
    """Multiset of compressed WL labels of one graph across depths 0..h."""
    env_id: int
    labels: Counter

    def size(self) -> int:
        return sum(self.labels.values())


class LabelDictionary:
    """Deterministic insertion-ordered compression of WL label keys to ints.

    Keys are either ("base", features) or ("wl", own_label, neighbor_labels);
    the same key always maps to the same id within one corpus run.
    """

    def __init__(self):
        self._ids: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return len(self._ids)

    def get_id(self, key: Hashable) -> int:
        label = self._ids.get(key)
        if label is None:
            label = len(self._ids)
            self._ids[key] = label
        return label


def build_world_graph(layout: LayoutConfig, env: Environment) -> WorldGraph:
    """Nodes are the reachable states, edges the reachable transitions."""
    states, edges = reachable(layout, env)
    return WorldGraph(env_id=env.env_id, nodes=tuple(sorted(states)),
                      edges=edges)


def wl_label_bag(nodes: Sequence[Hashable], features: dict,
                 edges: Iterable[tuple], depth: int,
                 dictionary: LabelDictionary, env_id: int = -1) -> LabelBag:
    """WL relabeling over a generic node set.

    Depth-0 labels compress the raw node features; each refinement compresses
    (own label, sorted multiset of neighbor labels). The bag unions all depths,
    so its size is (depth + 1) * len(nodes).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    adj: dict[Hashable, list] = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    order = list(nodes)
    labels = {v: dictionary.get_id(("base", features[v])) for v in order}
    bag: Counter = Counter(labels.values())
    for _ in range(depth):
        new_labels = {}
        for v in order:
            neigh = tuple(sorted(labels[u] for u in adj[v]))
            new_labels[v] = dictionary.get_id(("wl", labels[v], neigh))
        labels = new_labels
        bag.update(labels.values())
    return LabelBag(env_id=env_id, labels=bag)


def graph_label_bag(g: WorldGraph, depth: int,
                    dictionary: LabelDictionary) -> LabelBag:
    return wl_label_bag(g.nodes, g.features, g.edges, depth, dictionary,
                        env_id=g.env_id)


def build_label_corpus(graphs: Sequence[WorldGraph], depth: int
                       ) -> tuple[list[LabelBag], LabelDictionary]:
    """Label bags for a corpus sharing one dictionary, in env_id order."""
    dictionary = LabelDictionary()
    bags = []
    for g in sorted(graphs, key=lambda g: g.env_id):
        bags.append(graph_label_bag(g, depth, dictionary))
    return bags, dictionary


def phase_crossing_edges(g: WorldGraph, attr: str) -> int:
    """Number of edges whose endpoints differ in ``attr``
    (``has_key`` or ``door_open``)."""
    idx = AgentState._fields.index(attr)
    return sum(1 for a, b in g.edges if a[idx] != b[idx])


def graph_to_dict(g: WorldGraph, bag: LabelBag | None = None) -> dict:
    nodes = [list(s.features()) for s in g.nodes]
    index = {s: i for i, s in enumerate(g.nodes)}
    edges = sorted([index[a], index[b]] for a, b in g.edges)
    d = {"env_id": g.env_id, "nodes": nodes, "edges": edges}
    if bag is not None:
        d["label_bag"] = {str(k): v for k, v in sorted(bag.labels.items())}
    return d

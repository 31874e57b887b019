"""graph2vec-style embedding trainer (PV-DBOW with negative sampling).

Each graph is a document whose "words" are its WL labels. Training maximizes
log sigmoid(v_g . w_l) for observed (graph, label) occurrences against
negatives drawn from the unigram^0.75 label distribution. The SGD loop is
single-threaded and fully determined by the seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .worldgraph import LabelBag


class CorpusError(ValueError):
    """Malformed training corpus (empty, or containing an empty bag)."""


@dataclass(frozen=True)
class TrainConfig:
    seed: int
    dim: int = 16
    epochs: int = 200
    lr_initial: float = 0.025
    lr_final: float = 0.0001
    negatives: int = 5
    subsample_threshold: float | None = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lr_initial <= 0:
            raise ValueError("lr_initial must be > 0")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed, "dim": self.dim, "epochs": self.epochs,
            "lr_initial": self.lr_initial, "lr_final": self.lr_final,
            "negatives": self.negatives,
            "subsample_threshold": self.subsample_threshold,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(**d)


@dataclass
class EmbeddingSpace:
    dim: int
    vectors: dict[int, np.ndarray]
    label_vectors: np.ndarray | None = field(default=None, repr=False)
    trained_loss: float = float("nan")
    epoch_losses: list[float] = field(default_factory=list, repr=False)
    seed: int | None = None

    def env_ids(self) -> list[int]:
        return sorted(self.vectors)

    def matrix(self, env_ids: Sequence[int] | None = None) -> np.ndarray:
        ids = self.env_ids() if env_ids is None else list(env_ids)
        return np.stack([self.vectors[i] for i in ids])

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "seed": self.seed,
            "trained_loss": self.trained_loss,
            "vectors": {str(i): [float(x) for x in self.vectors[i]]
                        for i in self.env_ids()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingSpace":
        vectors = {int(i): np.asarray(v, dtype=np.float64)
                   for i, v in d["vectors"].items()}
        return cls(dim=d["dim"], vectors=vectors, seed=d.get("seed"),
                   trained_loss=d.get("trained_loss", float("nan")))


@njit(cache=True)
def _sgd_epoch(doc_vecs, label_vecs, doc_idx, label_idx, order, negs, lr0,
               lr1, step0, total_steps):
    n = order.shape[0]
    k = negs.shape[1]
    dim = doc_vecs.shape[1]
    loss = 0.0
    grad = np.empty(dim)
    for ii in range(n):
        i = order[ii]
        d = doc_idx[i]
        frac = (step0 + ii) / total_steps
        lr = lr0 + (lr1 - lr0) * frac
        if lr < lr1:
            lr = lr1
        for j in range(dim):
            grad[j] = 0.0
        for t in range(k + 1):
            if t == 0:
                l = label_idx[i]
                target = 1.0
            else:
                l = negs[ii, t - 1]
                if l == label_idx[i]:
                    continue
                target = 0.0
            f = 0.0
            for j in range(dim):
                f += doc_vecs[d, j] * label_vecs[l, j]
            if f > 30.0:
                sig = 1.0
            elif f < -30.0:
                sig = 0.0
            else:
                sig = 1.0 / (1.0 + np.exp(-f))
            # -log sigma(f) for positives, -log sigma(-f) for negatives
            z = f if target == 0.0 else -f
            if z > 30.0:
                loss += z
            else:
                loss += np.log1p(np.exp(z))
            g = (target - sig) * lr
            for j in range(dim):
                grad[j] += g * label_vecs[l, j]
                label_vecs[l, j] += g * doc_vecs[d, j]
        for j in range(dim):
            doc_vecs[d, j] += grad[j]
    return loss / max(n, 1)


def train(corpus: Sequence[LabelBag], cfg: TrainConfig) -> EmbeddingSpace:
    if not corpus:
        raise CorpusError("empty corpus")
    bags = sorted(corpus, key=lambda b: b.env_id)
    for b in bags:
        if b.size() == 0:
            raise CorpusError(f"empty label bag for env {b.env_id}")

    doc_ids = [b.env_id for b in bags]
    doc_index = {e: i for i, e in enumerate(doc_ids)}
    pairs_doc = []
    pairs_label = []
    for b in bags:
        d = doc_index[b.env_id]
        for label, count in sorted(b.labels.items()):
            pairs_doc.extend([d] * count)
            pairs_label.extend([label] * count)
    doc_idx = np.asarray(pairs_doc, dtype=np.int64)
    label_idx = np.asarray(pairs_label, dtype=np.int64)
    n_pairs = doc_idx.shape[0]
    vocab = int(label_idx.max()) + 1

    counts = np.bincount(label_idx, minlength=vocab).astype(np.float64)
    noise = counts ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    keep_prob = None
    if cfg.subsample_threshold is not None:
        freq = counts / n_pairs
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = cfg.subsample_threshold / freq
            keep_prob = np.minimum(1.0, np.sqrt(ratio) + ratio)
        keep_prob[counts == 0] = 0.0

    rng = np.random.default_rng(cfg.seed)
    doc_vecs = (rng.random((len(bags), cfg.dim)) - 0.5) / cfg.dim
    label_vecs = np.zeros((vocab, cfg.dim))

    total_steps = cfg.epochs * n_pairs
    step = 0
    losses = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n_pairs)
        if keep_prob is not None:
            mask = rng.random(n_pairs) < keep_prob[label_idx[order]]
            order = order[mask]
        negs = np.searchsorted(
            noise_cdf, rng.random((order.shape[0], cfg.negatives))
        ).astype(np.int64)
        loss = _sgd_epoch(doc_vecs, label_vecs, doc_idx, label_idx,
                          order.astype(np.int64), negs, cfg.lr_initial,
                          cfg.lr_final, step, total_steps)
        step += n_pairs
        losses.append(float(loss))

    vectors = {e: doc_vecs[i].copy() for e, i in doc_index.items()}
    return EmbeddingSpace(dim=cfg.dim, vectors=vectors,
                          label_vectors=label_vecs, trained_loss=losses[-1],
                          epoch_losses=losses, seed=cfg.seed)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0 by convention if either vector is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)
                                - np.asarray(b, dtype=np.float64)))


def project_2d(space: EmbeddingSpace) -> dict[int, tuple[float, float]]:
    """Top-2 PCA projection with a deterministic sign convention (the
    largest-magnitude loading of each component is positive)."""
    ids = space.env_ids()
    if len(ids) < 2:
        raise ValueError("need at least two environments to project")
    x = space.matrix(ids)
    x = x - x.mean(axis=0)
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    coords = np.zeros((len(ids), 2))
    scale = s[0] if s.size and s[0] > 0 else 1.0
    for c in range(min(2, vt.shape[0])):
        if s[c] / scale < 1e-12:
            continue  # degenerate axis stays zero
        load = vt[c]
        if load[np.argmax(np.abs(load))] < 0:
            load = -load
        coords[:, c] = x @ load
    return {e: (float(coords[i, 0]), float(coords[i, 1]))
            for i, e in enumerate(ids)}

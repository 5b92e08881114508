"""Deterministic k-means over modifier vectors, plus quality diagnostics.

Grouping the modifying words is one route to candidate frames; the groups
still need human review, so everything here is reproducible: seeding comes
from a caller-supplied seed, points are canonically ordered by word before
seeding, and identical inputs give bit-identical results.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .embedding import VectorStore
from .errors import (
    ClusteringError,
    DegenerateInput,
    KTooLarge,
    NoEmbeddableModifiers,
    SingleCluster,
    UnknownEntity,
)
from .extraction import FramingComponent


@dataclass(frozen=True)
class ClusterResult:
    k: int
    assignments: dict[str, int]
    centroids: np.ndarray
    inertia: float
    iterations: int
    seed: int
    inertia_history: tuple[float, ...] = field(default=(), compare=False)


def _pairwise_sq(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=float)
    centers[0] = X[rng.integers(n)]
    for j in range(1, k):
        d2 = _pairwise_sq(X, centers[:j]).min(axis=1)
        total = d2.sum()
        if np.isfinite(total) and total > 0.0:
            # k <= distinct points keeps some mass here in the normal case
            centers[j] = X[rng.choice(n, p=d2 / total)]
        else:
            # squared distances under- or overflowed; take the first point
            # not bitwise-equal to a chosen center (one exists: distinct > j)
            mask = np.ones(n, dtype=bool)
            for c in centers[:j]:
                mask &= ~np.all(X == c, axis=1)
            centers[j] = X[int(np.flatnonzero(mask)[0])]
    return centers


def _assign_and_repair(X: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Assign points to nearest centroids; re-seat empty clusters on the
    farthest point so every cluster stays populated. Both steps can only
    lower the inertia."""
    centroids = centroids.copy()
    d2 = _pairwise_sq(X, centroids)
    labels = d2.argmin(axis=1)
    for j in range(centroids.shape[0]):
        if (labels == j).any():
            continue
        dist = d2[np.arange(len(labels)), labels]
        sizes = np.bincount(labels, minlength=centroids.shape[0])
        eligible = sizes[labels] >= 2
        if not eligible.any():
            continue
        dist = np.where(eligible, dist, -1.0)
        farthest = int(dist.argmax())
        centroids[j] = X[farthest]
        labels[farthest] = j
        d2 = _pairwise_sq(X, centroids)
    inertia = float(d2[np.arange(len(labels)), labels].sum())
    return labels, centroids, inertia


def kmeans(
    words: Sequence[str],
    matrix: np.ndarray,
    k: int,
    seed: int,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> ClusterResult:
    """Lloyd's algorithm with k-means++ seeding from a seeded generator.

    Points are sorted by word before seeding, so the outcome does not depend
    on upstream ordering. Iterates until the largest centroid shift drops
    below ``tol`` or ``max_iter`` is reached; the recorded inertia history is
    non-increasing by construction.
    """
    if len(words) != matrix.shape[0]:
        raise ClusteringError("one word label per matrix row is required")
    if len(set(words)) != len(words):
        raise ClusteringError("word labels must be unique")
    if k < 1:
        raise ClusteringError(f"k must be at least 1, got {k}")
    if max_iter < 1:
        raise ClusteringError(f"max_iter must be at least 1, got {max_iter}")
    if tol <= 0:
        raise ClusteringError(f"tol must be positive, got {tol}")

    order = sorted(range(len(words)), key=lambda i: words[i])
    words = [words[i] for i in order]
    X = np.asarray(matrix, dtype=float)[order]

    distinct = np.unique(X, axis=0).shape[0]
    if distinct == 1 and k > 1:
        raise DegenerateInput(f"all {len(words)} points identical but k={k}")
    if k > distinct:
        raise KTooLarge(k, distinct)

    rng = np.random.default_rng(seed)
    centroids = _kmeanspp(X, k, rng)

    history: list[float] = []
    labels = np.zeros(len(words), dtype=int)
    iterations = 0
    converged = False
    for _ in range(max_iter):
        labels, centroids, inertia = _assign_and_repair(X, centroids)
        history.append(inertia)
        iterations += 1
        means = np.stack([X[labels == j].mean(axis=0) for j in range(k)])
        shift = float(np.linalg.norm(means - centroids, axis=1).max())
        if shift < tol:
            converged = True
            break
        centroids = means
    if not converged:
        labels, centroids, inertia = _assign_and_repair(X, centroids)
        history.append(inertia)

    return ClusterResult(
        k=k,
        assignments={word: int(label) for word, label in zip(words, labels)},
        centroids=centroids,
        inertia=history[-1],
        iterations=iterations,
        seed=seed,
        inertia_history=tuple(history),
    )


def silhouette(matrix: np.ndarray, labels: Sequence[int]) -> tuple[float, list[float]]:
    """Mean silhouette with Euclidean distance, plus per-point values.

    Conventions: a singleton cluster scores 0, and so does any point where
    both the intra and inter distances are 0.
    """
    X = np.asarray(matrix, dtype=float)
    labels = np.asarray(labels, dtype=int)
    clusters = np.unique(labels)
    if len(clusters) < 2 or len(labels) < 2:
        raise SingleCluster(f"silhouette needs at least 2 clusters, got {len(clusters)}")

    dist = np.sqrt(np.maximum(_pairwise_sq(X, X), 0.0))
    scores: list[float] = []
    for i in range(len(labels)):
        own = labels[i]
        same = (labels == own)
        if same.sum() == 1:
            scores.append(0.0)
            continue
        a = dist[i, same].sum() / (same.sum() - 1)
        b = min(dist[i, labels == other].mean() for other in clusters if other != own)
        denom = max(a, b)
        scores.append(0.0 if denom == 0.0 else float((b - a) / denom))
    return float(np.mean(scores)), scores


def silhouette_sweep(
    words: Sequence[str],
    matrix: np.ndarray,
    seed: int,
    kmax: int = 10,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> dict[int, float]:
    """Mean silhouette for each k in 2..min(kmax, n-1), to guide choosing k."""
    n = np.asarray(matrix).shape[0]
    order = sorted(range(len(words)), key=lambda i: words[i])
    X = np.asarray(matrix, dtype=float)[order]
    sorted_words = [words[i] for i in order]
    out: dict[int, float] = {}
    for k in range(2, min(kmax, n - 1) + 1):
        try:
            result = kmeans(words, matrix, k, seed, max_iter=max_iter, tol=tol)
        except (KTooLarge, DegenerateInput):
            break
        labels = [result.assignments[w] for w in sorted_words]
        out[k] = silhouette(X, labels)[0]
    return out


@dataclass(frozen=True)
class ClusterGroup:
    label: str
    modifiers: tuple[tuple[str, int], ...]  # (word, corpus count)
    inertia_share: float


@dataclass(frozen=True)
class ClusterReport:
    entity: str
    k: int
    seed: int
    groups: tuple[ClusterGroup, ...]
    oov: tuple[str, ...]
    silhouette: Optional[float]
    inertia: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "entity": self.entity,
            "k": self.k,
            "seed": self.seed,
            "groups": [
                {
                    "label": g.label,
                    "modifiers": [{"word": w, "count": c} for w, c in g.modifiers],
                    "inertia_share": g.inertia_share,
                }
                for g in self.groups
            ],
            "oov": list(self.oov),
            "silhouette": self.silhouette,
            "inertia": self.inertia,
            "iterations": self.iterations,
        }


def _normalize_rows(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / norms


def cluster_components(
    components: list[FramingComponent],
    store: VectorStore,
    entity: str,
    k: int,
    seed: int,
    relation: Optional[str] = None,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> ClusterReport:
    """Cluster the distinct modifier lemmas of one entity into frame
    candidates.

    Vectors are length-normalized first, so Euclidean k-means orders points
    the way cosine similarity would. Modifiers without a usable vector are
    reported as OOV, never silently dropped. Groups come back sorted by
    total member count, labeled cluster-0, cluster-1, ...
    """
    pool = [c for c in components if c.entity == entity]
    if not pool:
        raise UnknownEntity(entity)
    if relation is not None:
        pool = [c for c in pool if c.relation == relation]
        if not pool:
            raise ClusteringError(f"entity {entity!r} has no {relation!r} components")

    counts = Counter(c.modifier for c in pool)
    words = sorted(counts)
    in_vocab: list[str] = []
    rows: list[np.ndarray] = []
    oov: list[str] = []
    for word in words:
        vec = store.vectors.get(word.lower())
        if vec is None or not np.linalg.norm(vec) > 0.0:
            oov.append(word)
        else:
            in_vocab.append(word)
            rows.append(np.asarray(vec, dtype=float))
    if not in_vocab:
        raise NoEmbeddableModifiers(entity, oov)

    X = _normalize_rows(np.stack(rows))
    result = kmeans(in_vocab, X, k, seed, max_iter=max_iter, tol=tol)

    by_label: dict[int, list[str]] = {}
    for word, label in result.assignments.items():
        by_label.setdefault(label, []).append(word)

    word_index = {w: i for i, w in enumerate(in_vocab)}
    raw_groups = []
    for label, members in by_label.items():
        members_sorted = sorted(members, key=lambda w: (-counts[w], w))
        total = sum(counts[w] for w in members)
        idx = [word_index[w] for w in members]
        within = float(((X[idx] - result.centroids[label]) ** 2).sum())
        share = within / result.inertia if result.inertia > 0 else 0.0
        raw_groups.append((total, members_sorted, share))
    raw_groups.sort(key=lambda g: (-g[0], g[1][0]))

    groups = tuple(
        ClusterGroup(
            label=f"cluster-{i}",
            modifiers=tuple((w, counts[w]) for w in members),
            inertia_share=share,
        )
        for i, (_, members, share) in enumerate(raw_groups)
    )

    sil = None
    if result.k >= 2 and len(in_vocab) >= 2:
        labels = [result.assignments[w] for w in in_vocab]
        sil = silhouette(X, labels)[0]

    return ClusterReport(
        entity=entity,
        k=result.k,
        seed=seed,
        groups=groups,
        oov=tuple(oov),
        silhouette=sil,
        inertia=result.inertia,
        iterations=result.iterations,
    )

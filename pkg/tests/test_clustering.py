import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_fixture
from oracles import oracle_best_2partition, oracle_silhouette

from sufa.clustering import (
    cluster_components,
    kmeans,
    silhouette,
    silhouette_sweep,
)
from sufa.corpus import Leaning
from sufa.embedding import load_vectors
from sufa.errors import (
    ClusteringError,
    DegenerateInput,
    KTooLarge,
    NoEmbeddableModifiers,
    SingleCluster,
    UnknownEntity,
)
from sufa.extraction import MODIFIER_IS_CHILD, FramingComponent


def words_for(n):
    return [f"w{i:02d}" for i in range(n)]


def test_k_equals_distinct_points_zero_inertia():
    X = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [9.0, 9.0]])
    result = kmeans(words_for(4), X, k=4, seed=3)
    assert result.inertia == 0.0
    assert sorted(result.assignments.values()) == [0, 1, 2, 3]


def test_k_one_closed_form():
    X = np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0]])
    result = kmeans(words_for(3), X, k=1, seed=0)
    mean = X.mean(axis=0)
    expected = float(((X - mean) ** 2).sum())
    assert result.inertia == pytest.approx(expected, abs=1e-12)
    assert np.allclose(result.centroids[0], mean)


def test_two_blobs_match_partition_oracle():
    X = np.array([
        [0.0, 0.1], [0.2, -0.1], [-0.1, 0.0],
        [10.0, 10.1], [10.2, 9.9], [9.9, 10.0],
    ])
    words = words_for(6)
    result = kmeans(words, X, k=2, seed=11)
    mine = frozenset({
        frozenset(i for i, w in enumerate(words) if result.assignments[w] == 0),
        frozenset(i for i, w in enumerate(words) if result.assignments[w] == 1),
    })
    oracle_partition, oracle_inertia = oracle_best_2partition([tuple(p) for p in X])
    assert mine == oracle_partition
    assert result.inertia == pytest.approx(oracle_inertia, rel=1e-9)


def test_k_too_large():
    X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(KTooLarge):
        kmeans(words_for(3), X, k=3, seed=0)  # only 2 distinct points


def test_degenerate_input():
    X = np.zeros((4, 2))
    with pytest.raises(DegenerateInput):
        kmeans(words_for(4), X, k=2, seed=0)


def test_invalid_parameters():
    X = np.array([[0.0], [1.0]])
    with pytest.raises(ClusteringError):
        kmeans(words_for(2), X, k=0, seed=0)
    with pytest.raises(ClusteringError):
        kmeans(words_for(2), X, k=1, seed=0, max_iter=0)
    with pytest.raises(ClusteringError):
        kmeans(words_for(2), X, k=1, seed=0, tol=0.0)
    with pytest.raises(ClusteringError):
        kmeans(["a", "a"], X, k=1, seed=0)


matrices = st.integers(min_value=2, max_value=12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.lists(st.floats(min_value=-100, max_value=100), min_size=2, max_size=2),
            min_size=n, max_size=n,
        ),
        st.integers(min_value=0, max_value=2 ** 31),
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_lloyd_inertia_non_increasing(case):
    n, rows, seed = case
    X = np.array(rows)
    distinct = np.unique(X, axis=0).shape[0]
    k = min(3, distinct)
    if distinct == 1 and k > 1:
        return
    result = kmeans(words_for(n), X, k=k, seed=seed)
    history = result.inertia_history
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))
    assert result.inertia == history[-1]
    assert result.inertia >= 0.0


def result_fingerprint(result):
    return json.dumps({
        "assignments": result.assignments,
        "iterations": result.iterations,
        "inertia": repr(result.inertia),
        "centroids": [[repr(v) for v in row] for row in np.asarray(result.centroids)],
    }, sort_keys=True)


def test_identical_runs_bit_identical():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(9, 3))
    first = result_fingerprint(kmeans(words_for(9), X, k=3, seed=42))
    for _ in range(3):
        assert result_fingerprint(kmeans(words_for(9), X, k=3, seed=42)) == first


def test_permutation_changes_labels_not_partition():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(8, 2))
    words = words_for(8)
    base = kmeans(words, X, k=2, seed=9)
    perm = [3, 1, 7, 0, 5, 2, 6, 4]
    shuffled = kmeans([words[i] for i in perm], X[perm], k=2, seed=9)
    groups = lambda r: frozenset(
        frozenset(w for w, l in r.assignments.items() if l == label)
        for label in set(r.assignments.values())
    )
    assert groups(base) == groups(shuffled)


# --- silhouette ---

def test_silhouette_two_far_identical_blobs():
    X = np.array([[0.0, 0.0]] * 3 + [[100.0, 0.0]] * 3)
    labels = [0, 0, 0, 1, 1, 1]
    mean, per_point = silhouette(X, labels)
    assert mean == pytest.approx(1.0, abs=1e-9)
    assert all(s == pytest.approx(1.0, abs=1e-9) for s in per_point)


def test_silhouette_identical_points_zero_convention():
    X = np.zeros((4, 2))
    labels = [0, 0, 1, 1]
    mean, _ = silhouette(X, labels)
    assert mean == pytest.approx(0.0, abs=1e-12)


def test_silhouette_matches_hand_oracle():
    X = np.array([
        [0.0, 0.0], [1.0, 0.0], [0.5, 1.0],
        [10.0, 0.0], [11.0, 0.5], [10.5, -1.0],
    ])
    labels = [0, 0, 0, 1, 1, 1]
    mean, _ = silhouette(X, labels)
    assert mean == pytest.approx(oracle_silhouette([tuple(r) for r in X], labels), abs=1e-12)


def test_silhouette_single_cluster_error():
    with pytest.raises(SingleCluster):
        silhouette(np.zeros((3, 2)), [0, 0, 0])


def test_silhouette_in_range_random():
    rng = np.random.default_rng(3)
    for trial in range(20):
        X = rng.normal(size=(8, 2))
        labels = rng.integers(0, 2, size=8)
        if len(set(labels.tolist())) < 2:
            continue
        mean, per_point = silhouette(X, labels)
        assert -1.0 <= mean <= 1.0
        assert all(-1.0 <= s <= 1.0 for s in per_point)


def test_silhouette_sweep_range():
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(0, 0.1, size=(4, 2)), rng.normal(5, 0.1, size=(4, 2))])
    sweep = silhouette_sweep(words_for(8), X, seed=2)
    assert set(sweep) == set(range(2, 8))
    assert max(sweep, key=sweep.get) == 2


# --- cluster_components ---

def comp(entity="event", modifier="deadly", relation="amod", outlet="CNN",
         leaning=Leaning.LEFT):
    return FramingComponent(
        entity=entity, anchor="shooting", modifier=modifier, relation=relation,
        direction=MODIFIER_IS_CHILD, doc_id="d1", sent_id="s1", outlet=outlet,
        leaning=leaning, anchor_token=2, modifier_token=1,
    )


@pytest.fixture(scope="module")
def blob_store():
    return load_vectors(read_fixture("cluster_vectors.txt"))


def test_single_modifier_k_one(blob_store):
    report = cluster_components([comp()], blob_store, "event", k=1, seed=0)
    assert len(report.groups) == 1
    assert report.groups[0].modifiers == (("deadly", 1),)
    assert report.silhouette is None


def test_all_modifiers_oov(blob_store):
    comps = [comp(modifier="zzz"), comp(modifier="qqq")]
    with pytest.raises(NoEmbeddableModifiers) as exc:
        cluster_components(comps, blob_store, "event", k=1, seed=0)
    assert sorted(exc.value.oov) == ["qqq", "zzz"]


def test_unknown_entity(blob_store):
    with pytest.raises(UnknownEntity):
        cluster_components([comp()], blob_store, "nobody", k=1, seed=0)


def test_blob_fixture_separates_severity_from_age(blob_store):
    comps = (
        [comp(modifier="deadly")] * 3
        + [comp(modifier="deadliest")] * 2
        + [comp(modifier="horrific")]
        + [comp(modifier="young")] * 2
        + [comp(modifier="teenage")]
    )
    report = cluster_components(comps, blob_store, "event", k=2, seed=4)
    member_sets = [frozenset(w for w, _ in g.modifiers) for g in report.groups]
    assert frozenset({"deadly", "deadliest", "horrific"}) in member_sets
    assert frozenset({"young", "teenage"}) in member_sets
    # groups sorted by total count descending, labels renumbered
    assert [g.label for g in report.groups] == ["cluster-0", "cluster-1"]
    assert report.groups[0].modifiers[0] == ("deadly", 3)
    # normalized 2-blob instance must match the exhaustive optimum
    words = sorted({"deadly", "deadliest", "horrific", "young", "teenage"})
    X = np.stack([blob_store.vectors[w] for w in words])
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    oracle_partition, _ = oracle_best_2partition([tuple(r) for r in X])
    named_oracle = frozenset(
        frozenset(words[i] for i in side) for side in oracle_partition
    )
    assert frozenset(member_sets) == named_oracle


def test_report_dict_shape(blob_store):
    comps = [comp(modifier="deadly"), comp(modifier="young")]
    report = cluster_components(comps, blob_store, "event", k=2, seed=1)
    data = report.to_dict()
    assert set(data) == {"entity", "k", "seed", "groups", "oov", "silhouette",
                         "inertia", "iterations"}
    for group in data["groups"]:
        assert set(group) == {"label", "modifiers", "inertia_share"}
    assert data["silhouette"] is not None
    total_share = sum(g["inertia_share"] for g in data["groups"])
    assert total_share == pytest.approx(1.0) or data["inertia"] == 0.0


def test_per_relation_filter(blob_store):
    comps = [comp(modifier="deadly", relation="amod"),
             comp(modifier="young", relation="nummod")]
    report = cluster_components(comps, blob_store, "event", k=1, seed=0, relation="amod")
    assert [g.modifiers for g in report.groups] == [(("deadly", 1),)]
    with pytest.raises(ClusteringError):
        cluster_components(comps, blob_store, "event", k=1, seed=0, relation="poss")

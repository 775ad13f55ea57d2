import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from labelsearch import (
    TaskSpec,
    TrustedSet,
    UnlabeledPool,
    evaluate_mu,
    fit,
    flip_update,
    generate_task,
    labeling_from_array,
    labeling_from_word,
    predict,
)
from labelsearch.learners import nearest_pool_index, predict_points

from conftest import learner_kinds, small_tasks
from oracles import brute_nearest, fsum_class_means


# --- fit --------------------------------------------------------------------

def test_fit_one_point_per_class():
    pool = UnlabeledPool(np.array([[0.0, 0.0], [2.0, 2.0]]))
    state = fit(pool, labeling_from_word(0b10, 2), "centroid")
    assert state.class_counts == (1, 1)
    assert np.array_equal(state.class_sums[0], [0.0, 0.0])
    assert np.array_equal(state.class_sums[1], [2.0, 2.0])


def test_fit_degenerate_all_zero_labels():
    pool = UnlabeledPool(np.arange(10.0)[:, None])
    state = fit(pool, labeling_from_word(0, 10), "centroid")
    assert state.class_counts == (10, 0)
    assert np.array_equal(state.class_sums[1], [0.0])


def test_fit_centroids_match_hand_summation():
    pool = UnlabeledPool(np.array([[1.0, -2.0], [3.5, 0.25], [-4.0, 8.0], [0.5, 0.5]]))
    lab = labeling_from_word(0b0011, 4)  # items 0,1 -> class 1; items 2,3 -> class 0
    state = fit(pool, lab, "centroid")
    expected = fsum_class_means(pool.x, lab.labels())
    for cls in (0, 1):
        got = state.class_sums[cls] / state.class_counts[cls]
        assert np.allclose(got, expected[cls], rtol=1e-15, atol=0)


def test_fit_rejects_unknown_kind():
    pool = UnlabeledPool(np.ones((2, 1)))
    with pytest.raises(ValueError):
        fit(pool, labeling_from_word(0, 2), "svm")


def test_fit_accepts_label_arrays_of_any_length():
    # label sequences work beyond the 63-bit packed-word bound
    pool = UnlabeledPool(np.arange(70.0)[:, None])
    labels = np.zeros(70, dtype=np.int8)
    labels[::2] = 1
    state = fit(pool, labels, "centroid")
    assert state.class_counts == (35, 35)


# --- flip_update ------------------------------------------------------------

def test_flip_emptying_a_class():
    pool = UnlabeledPool(np.arange(5.0)[:, None])
    state = fit(pool, labeling_from_word(0b00100, 5), "centroid")
    state = flip_update(state, pool, 2, 0)
    assert state.class_counts == (5, 0)


def test_flip_then_flip_back_restores_predictions():
    pool = UnlabeledPool(np.array([[0.0, 1.0], [4.0, -1.0], [2.0, 2.0]]))
    trusted = TrustedSet(np.array([[1.0, 1.0], [3.0, 0.0]]), np.array([0, 1]))
    for kind in ("centroid", "onenn"):
        original = fit(pool, labeling_from_word(0b011, 3), kind)
        there = flip_update(original, pool, 1, 0)
        back = flip_update(there, pool, 1, 1)
        assert np.array_equal(predict(back, trusted), predict(original, trusted))


def test_flip_to_same_label_is_a_contract_violation():
    pool = UnlabeledPool(np.ones((3, 1)))
    state = fit(pool, labeling_from_word(0b010, 3), "centroid")
    with pytest.raises(ValueError):
        flip_update(state, pool, 1, 1)


def test_single_flip_matches_refit_on_random_task():
    task = generate_task(TaskSpec(m=5, n=10, d=2, separation=1.5, noise_sigma=1.0, seed=21))
    for kind in ("centroid", "onenn"):
        state = fit(task.pool, labeling_from_word(0b1011001110, 10), kind)
        flipped = flip_update(state, task.pool, 4, 1 - int(state.labels[4]))
        word = 0b1011001110 ^ (1 << 4)
        fresh = fit(task.pool, labeling_from_word(word, 10), kind)
        assert np.array_equal(predict(flipped, task.trusted), predict(fresh, task.trusted))


@given(small_tasks(max_n=16), learner_kinds, st.data())
def test_flip_sequences_equal_refit(task, kind, data):
    n = task.n
    word = data.draw(st.integers(0, (1 << n) - 1))
    state = fit(task.pool, labeling_from_word(word, n), kind)
    for i in data.draw(st.lists(st.integers(0, n - 1), max_size=2 * n)):
        state = flip_update(state, task.pool, i, 1 - int(state.labels[i]))
        word ^= 1 << i
    fresh = fit(task.pool, labeling_from_word(word, n), kind)
    assert np.array_equal(predict(state, task.trusted), predict(fresh, task.trusted))
    if kind == "centroid":
        # generator coordinates sit on a dyadic grid, so running sums are exact
        assert np.array_equal(state.class_sums, fresh.class_sums)
        assert state.class_counts == fresh.class_counts


# --- predict ----------------------------------------------------------------

def test_predict_tie_goes_to_class_zero():
    pool = UnlabeledPool(np.array([[0.0], [2.0]]))
    trusted = TrustedSet(np.array([[1.0]]), np.array([1]))
    state = fit(pool, labeling_from_word(0b10, 2), "centroid")
    assert predict(state, trusted).tolist() == [0]


def test_predict_empty_class_takes_nonempty_side():
    pool = UnlabeledPool(np.array([[0.0], [1.0], [2.0]]))
    trusted = TrustedSet(np.array([[-5.0], [9.0]]), np.array([0, 1]))
    all_ones = fit(pool, labeling_from_word(0b111, 3), "centroid")
    assert predict(all_ones, trusted).tolist() == [1, 1]
    all_zeros = fit(pool, labeling_from_word(0, 3), "centroid")
    assert predict(all_zeros, trusted).tolist() == [0, 0]


def test_predict_separable_blobs_reach_zero_error():
    # blob centers 10 apart, every point within 1 of its center: the
    # margin dominates, so the true labeling classifies A perfectly
    rng = np.random.default_rng(3)
    centers = np.array([[-5.0, 0.0], [5.0, 0.0]])
    pool_labels = np.array([0, 0, 0, 1, 1, 1], dtype=np.int8)
    pool_x = centers[pool_labels] + rng.uniform(-0.5, 0.5, size=(6, 2))
    a_labels = np.array([0, 1, 0, 1], dtype=np.int8)
    a_x = centers[a_labels] + rng.uniform(-0.5, 0.5, size=(4, 2))
    for kind in ("centroid", "onenn"):
        state = fit(UnlabeledPool(pool_x), pool_labels, kind)
        result = evaluate_mu(predict(state, TrustedSet(a_x, a_labels)), TrustedSet(a_x, a_labels))
        assert result.mu == 0.0
    # direct distance verification: each A point is nearer its own centroid
    c0 = pool_x[pool_labels == 0].mean(axis=0)
    c1 = pool_x[pool_labels == 1].mean(axis=0)
    for point, label in zip(a_x, a_labels):
        own, other = (c0, c1) if label == 0 else (c1, c0)
        assert ((point - own) ** 2).sum() < ((point - other) ** 2).sum()


@given(small_tasks(max_n=10), learner_kinds, st.data())
def test_label_swap_symmetry(task, kind, data):
    # swapping class names everywhere (pool labels and trusted labels)
    # leaves the error rate unchanged
    word = data.draw(st.integers(0, (1 << task.n) - 1))
    swapped_word = word ^ ((1 << task.n) - 1)
    mu = evaluate_mu(
        predict(fit(task.pool, labeling_from_word(word, task.n), kind), task.trusted),
        task.trusted,
    ).mu
    swapped_trusted = TrustedSet(task.trusted.x, 1 - task.trusted.y)
    mu_swapped = evaluate_mu(
        predict(fit(task.pool, labeling_from_word(swapped_word, task.n), kind), swapped_trusted),
        swapped_trusted,
    ).mu
    assert mu == mu_swapped


# --- nearest-neighbor machinery ---------------------------------------------

@given(small_tasks(max_n=10))
def test_nearest_pool_index_matches_brute_force(task):
    got = nearest_pool_index(task.pool.x, task.trusted.x)
    expected = brute_nearest(task.pool.x, task.trusted.x)
    assert np.array_equal(got, expected)
    assert np.all((got >= 0) & (got < task.n))


def test_nearest_tie_resolves_to_lowest_index():
    pool_x = np.array([[1.0], [1.0], [3.0]])
    queries = np.array([[1.0], [2.0]])
    assert nearest_pool_index(pool_x, queries).tolist() == [0, 0]


def test_one_nn_flip_changes_only_mapped_points():
    task = generate_task(TaskSpec(m=9, n=12, d=2, separation=1.0, noise_sigma=1.0, seed=17))
    nn = nearest_pool_index(task.pool.x, task.trusted.x)
    state = fit(task.pool, labeling_from_word(0b101010101010, 12), "onenn")
    before = predict(state, task.trusted)
    for i in range(task.n):
        after = predict(flip_update(state, task.pool, i, 1 - int(state.labels[i])), task.trusted)
        changed = np.flatnonzero(after != before)
        assert set(changed) == set(np.flatnonzero(nn == i))


def test_predict_points_on_external_queries():
    task = generate_task(TaskSpec(m=4, n=8, d=2, separation=6.0, noise_sigma=0.5, seed=2))
    state = fit(task.pool, task.ground_truth, "centroid")
    assert np.array_equal(predict_points(state, task.pool.x), task.ground_truth)

"""Cheap classifiers trained on (pool, labeling) pairs.

Two learner kinds, both supporting exact single-flip updates so a search
can move through labeling space without retraining from scratch:

* ``centroid`` (nearest class centroid): the state holds per-class
  running coordinate sums and counts; a flip moves one item's vector
  between the class sums.
* ``onenn`` (one nearest neighbor): a query point takes the current
  label of its nearest pool item, so the labeling itself is the model
  and a flip is free.

Determinism rules, fixed here and relied on by every caller: distance
comparisons use squared Euclidean distance; centroid distance ties
predict class 0; an empty centroid class predicts the nonempty class
for every query; nearest-item ties resolve to the lowest pool index.

On coordinates from the generator's dyadic grid (see ``core.COORD_GRID``)
all sums below are exact in float64, so incrementally updated states
match refit states bit-for-bit; on arbitrary float data they agree to
about 1e-9 relative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Labeling, TrustedSet, UnlabeledPool

CENTROID = "centroid"
ONE_NN = "onenn"
KINDS = (CENTROID, ONE_NN)

_NN_CHUNK = 65536


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown learner kind {kind!r}; expected one of {KINDS}")


def _as_label_array(labels, n: int) -> np.ndarray:
    """Normalize a Labeling or 0/1 sequence to an (n,) int8 array."""
    if isinstance(labels, Labeling):
        if labels.n != n:
            raise ValueError(f"labeling width {labels.n} != pool size {n}")
        return labels.labels()
    arr = np.asarray(labels, dtype=np.int8)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"expected {n} labels, got shape {arr.shape}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("labels must be 0/1")
    return arr.copy()


def class_sums_and_counts(pool_x: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, tuple[int, int]]:
    """Per-class coordinate sums (2, d) and counts, in pool index order."""
    mask1 = labels == 1
    sums = np.empty((2, pool_x.shape[1]), dtype=np.float64)
    sums[0] = pool_x[~mask1].sum(axis=0)
    sums[1] = pool_x[mask1].sum(axis=0)
    n1 = int(np.count_nonzero(mask1))
    return sums, (pool_x.shape[0] - n1, n1)


def squared_distances(x: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from each row of x to one point.

    Accumulates coordinates in ascending index order so every code path
    that scores the same operands rounds identically.
    """
    diff = x[:, 0] - point[0]
    acc = diff * diff
    for k in range(1, x.shape[1]):
        diff = x[:, k] - point[k]
        acc = acc + diff * diff
    return acc


def centroid_predictions(class_sums: np.ndarray, class_counts: tuple[int, int], x: np.ndarray) -> np.ndarray:
    """Predict rows of x against the centroids implied by sums/counts."""
    n0, n1 = class_counts
    if n0 == 0:
        return np.ones(x.shape[0], dtype=np.int8)
    if n1 == 0:
        return np.zeros(x.shape[0], dtype=np.int8)
    c0 = class_sums[0] / n0
    c1 = class_sums[1] / n1
    d0 = squared_distances(x, c0)
    d1 = squared_distances(x, c1)
    return (d1 < d0).astype(np.int8)  # tie -> class 0


def nearest_pool_index(pool_x: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Index of each query's nearest pool item (ties -> lowest index)."""
    nq = queries.shape[0]
    best = np.full(nq, np.inf)
    best_idx = np.zeros(nq, dtype=np.int64)
    for start in range(0, pool_x.shape[0], _NN_CHUNK):
        chunk = pool_x[start : start + _NN_CHUNK]
        diff = queries[:, 0, None] - chunk[None, :, 0]
        dist = diff * diff
        for k in range(1, pool_x.shape[1]):
            diff = queries[:, k, None] - chunk[None, :, k]
            dist = dist + diff * diff
        local = np.argmin(dist, axis=1)
        local_best = dist[np.arange(nq), local]
        better = local_best < best  # strict keeps the earliest chunk on ties
        best_idx[better] = local[better] + start
        best[better] = local_best[better]
    return best_idx


def nearest_two_gap(pool_x: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Second-nearest minus nearest squared distance per query.

    A single-item pool has no runner-up; the gap is 0 for every query
    (all equally confident).
    """
    if pool_x.shape[0] < 2:
        return np.zeros(queries.shape[0])
    diff = queries[:, 0, None] - pool_x[None, :, 0]
    dist = diff * diff
    for k in range(1, pool_x.shape[1]):
        diff = queries[:, k, None] - pool_x[None, :, k]
        dist = dist + diff * diff
    two = np.partition(dist, 1, axis=1)[:, :2]
    return two[:, 1] - two[:, 0]


@dataclass(frozen=True)
class LearnerState:
    """An immutable trained model: the pool, its current labels, and for
    the centroid kind the per-class running sums and counts."""

    kind: str
    pool_x: np.ndarray
    labels: np.ndarray
    class_sums: np.ndarray | None = None
    class_counts: tuple[int, int] | None = None

    @property
    def n(self) -> int:
        return self.pool_x.shape[0]


def fit(pool: UnlabeledPool, labels, kind: str = CENTROID) -> LearnerState:
    """Train a fresh state on the pool under the given labeling.

    Degenerate single-class labelings are valid states. Deterministic
    for fixed inputs.
    """
    _check_kind(kind)
    lab = _as_label_array(labels, pool.n)
    lab.setflags(write=False)
    if kind == CENTROID:
        sums, counts = class_sums_and_counts(pool.x, lab)
        sums.setflags(write=False)
        return LearnerState(kind=kind, pool_x=pool.x, labels=lab, class_sums=sums, class_counts=counts)
    return LearnerState(kind=kind, pool_x=pool.x, labels=lab)


def flip_update(state: LearnerState, pool: UnlabeledPool, item_index: int, new_label: int) -> LearnerState:
    """Return the state after relabeling one pool item.

    Exactly equivalent to refitting on the flipped labeling (bit-for-bit
    on dyadic-grid coordinates). Flipping to the item's current label is
    a contract violation.
    """
    if not 0 <= item_index < state.n:
        raise ValueError(f"item index {item_index} out of range for pool of {state.n}")
    new_label = int(new_label)
    if new_label not in (0, 1):
        raise ValueError("new label must be 0 or 1")
    old = int(state.labels[item_index])
    if new_label == old:
        raise ValueError(f"item {item_index} already has label {new_label}")
    lab = state.labels.copy()
    lab[item_index] = new_label
    lab.setflags(write=False)
    if state.kind == CENTROID:
        x_i = pool.x[item_index]
        sums = state.class_sums.copy()
        sums[old] -= x_i
        sums[new_label] += x_i
        sums.setflags(write=False)
        n0, n1 = state.class_counts
        counts = (n0 - 1, n1 + 1) if new_label == 1 else (n0 + 1, n1 - 1)
        return LearnerState(kind=state.kind, pool_x=state.pool_x, labels=lab,
                            class_sums=sums, class_counts=counts)
    return LearnerState(kind=state.kind, pool_x=state.pool_x, labels=lab)


def predict_points(state: LearnerState, x: np.ndarray) -> np.ndarray:
    """Predict 0/1 labels for the rows of an arbitrary query matrix."""
    if x.shape[1] != state.pool_x.shape[1]:
        raise ValueError(f"query dimension {x.shape[1]} != pool dimension {state.pool_x.shape[1]}")
    if state.kind == CENTROID:
        return centroid_predictions(state.class_sums, state.class_counts, x)
    nn = nearest_pool_index(state.pool_x, x)
    return state.labels[nn]


def predict(state: LearnerState, trusted: TrustedSet) -> np.ndarray:
    """Predict the trusted set's points; returns an (m,) int8 array."""
    return predict_points(state, trusted.x)

"""Compiled neighbor-scan kernels shared by the KNN and kMC-KNN recognizers.

Both kernels compute squared distances as the sum over dimensions, in order, of
``(sample - query) ** 2`` and keep neighbors sorted by (distance, training index),
so the two recognizers agree bit-for-bit whenever they scan the same samples.
"""

import numpy as np
from numba import njit

VOTE_RULES = ("weighted", "count", "literal")
VOTE_EPSILON = 1e-9


@njit(cache=True)
def _distance(sample, query):
    d = 0.0
    for k in range(query.shape[0]):
        diff = sample[k] - query[k]
        d += diff * diff
    return d


@njit(cache=True)
def _push(best_d, best_i, filled, d, i):
    """Insert (d, i) into the ascending top-K buffers; returns the new fill count."""
    size = best_d.shape[0]
    if filled == size:
        last = size - 1
        if d > best_d[last] or (d == best_d[last] and i > best_i[last]):
            return filled
        pos = last
    else:
        pos = filled
        filled += 1
    while pos > 0 and (best_d[pos - 1] > d or (best_d[pos - 1] == d and best_i[pos - 1] > i)):
        best_d[pos] = best_d[pos - 1]
        best_i[pos] = best_i[pos - 1]
        pos -= 1
    best_d[pos] = d
    best_i[pos] = i
    return filled


@njit(cache=True)
def _vote(best_d, best_i, filled, labels, rule, eps, scores, counts):
    """Score each label over the neighbors and return the winner.

    Rule 0 weights a neighbor by 1 / (d + eps), rule 1 counts neighbors and rule 2
    sums the squared distances. Ties go to the label with more neighbors, then to
    the lower label index; labels without neighbors never win.
    """
    scores[:] = 0.0
    counts[:] = 0
    for m in range(filled):
        label = labels[best_i[m]]
        counts[label] += 1
        if rule == 0:
            scores[label] += 1.0 / (best_d[m] + eps)
        elif rule == 1:
            scores[label] += 1.0
        else:
            scores[label] += best_d[m]
    winner = -1
    for label in range(scores.shape[0]):
        if counts[label] == 0:
            continue
        if (
            winner < 0
            or scores[label] > scores[winner]
            or (scores[label] == scores[winner] and counts[label] > counts[winner])
        ):
            winner = label
    return winner


@njit(cache=True)
def knn_scan(queries, train, labels, K, n_labels, rule, eps):
    """Exhaustive K-nearest-neighbor vote for every query.

    Returns (labels, scores, distance evaluations).
    """
    n_queries = queries.shape[0]
    out_labels = np.empty(n_queries, dtype=np.int64)
    out_scores = np.empty((n_queries, n_labels), dtype=np.float64)
    best_d = np.empty(K, dtype=np.float64)
    best_i = np.empty(K, dtype=np.int64)
    counts = np.empty(n_labels, dtype=np.int64)
    for qi in range(n_queries):
        query = queries[qi]
        filled = 0
        for n in range(train.shape[0]):
            filled = _push(best_d, best_i, filled, _distance(train[n], query), n)
        out_labels[qi] = _vote(best_d, best_i, filled, labels, rule, eps, out_scores[qi], counts)
    return out_labels, out_scores, n_queries * train.shape[0]


@njit(cache=True)
def kmc_scan(
    queries,
    centers,
    class_offsets,
    member_offsets,
    members,
    member_index,
    labels,
    K,
    n_labels,
    rule,
    eps,
):
    """Nearest sub-cluster per class, then a K-nearest-neighbor vote over their members.

    ``centers`` are grouped by class (class c owns rows class_offsets[c] to
    class_offsets[c + 1]); sub-cluster s owns member rows member_offsets[s] to
    member_offsets[s + 1], whose training indices are ``member_index``. Returns
    (labels, scores, distance evaluations, candidate count per query).
    """
    n_queries = queries.shape[0]
    n_classes = class_offsets.shape[0] - 1
    out_labels = np.empty(n_queries, dtype=np.int64)
    out_scores = np.empty((n_queries, n_labels), dtype=np.float64)
    out_candidates = np.empty(n_queries, dtype=np.int64)
    best_d = np.empty(K, dtype=np.float64)
    best_i = np.empty(K, dtype=np.int64)
    counts = np.empty(n_labels, dtype=np.int64)
    selected = np.empty(n_classes, dtype=np.int64)
    evals = 0
    for qi in range(n_queries):
        query = queries[qi]
        candidates = 0
        for c in range(n_classes):
            nearest = -1
            nearest_d = 0.0
            for s in range(class_offsets[c], class_offsets[c + 1]):
                d = _distance(centers[s], query)
                if nearest < 0 or d < nearest_d:
                    nearest = s
                    nearest_d = d
            selected[c] = nearest
            candidates += member_offsets[nearest + 1] - member_offsets[nearest]
        evals += centers.shape[0] + candidates

        # K is clipped to the candidate count
        limit = min(K, candidates)
        top_d = best_d[:limit]
        top_i = best_i[:limit]
        filled = 0
        for c in range(n_classes):
            s = selected[c]
            for m in range(member_offsets[s], member_offsets[s + 1]):
                d = _distance(members[m], query)
                filled = _push(top_d, top_i, filled, d, member_index[m])
        out_candidates[qi] = candidates
        out_labels[qi] = _vote(best_d, best_i, filled, labels, rule, eps, out_scores[qi], counts)
    return out_labels, out_scores, evals, out_candidates


def warm_up() -> None:
    """Compile both kernels on a toy problem so timed runs exclude JIT cost."""
    points = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
    labels = np.array([0, 1], dtype=np.int64)
    knn_scan(points, points, labels, 1, 2, 0, VOTE_EPSILON)
    kmc_scan(
        points,
        points,
        np.array([0, 1, 2], dtype=np.int64),
        np.array([0, 1, 2], dtype=np.int64),
        points,
        np.array([0, 1], dtype=np.int64),
        labels,
        1,
        2,
        0,
        VOTE_EPSILON,
    )

"""Compiled kernels for decision-tree building and batch prediction.

Trees live in flat parallel arrays (feature, threshold, left, right, class
counts) so they can be built and walked inside numba kernels and serialized
as plain lists.  Split selection is exhaustive over a per-split random
feature subset, scored by weighted Gini impurity; ties break toward the
lowest feature index, then the lowest threshold, which the scan order
guarantees (features ascending, thresholds ascending, strict improvement
required).
"""

from __future__ import annotations

import numpy as np
from numba import njit

LEAF = -1


@njit(cache=True)
def build_tree_arrays(X, y, max_depth, min_samples_leaf, n_sub_features, seed):
    """Grow one tree on (X, y) with y in {0, 1}; returns flat node arrays.

    Node 0 is the root.  Internal nodes route x[feature] <= threshold to
    ``left``.  Every node carries its class histogram so any node can act
    as a leaf.
    """
    n, d = X.shape
    max_nodes = 2 * n + 1
    feature = np.full(max_nodes, LEAF, np.int64)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, LEAF, np.int64)
    right = np.full(max_nodes, LEAF, np.int64)
    count0 = np.zeros(max_nodes, np.int64)
    count1 = np.zeros(max_nodes, np.int64)

    np.random.seed(seed)
    idx = np.arange(n)
    scratch = np.empty(n, np.int64)
    values = np.empty(n, np.float64)
    perm = np.empty(d, np.int64)

    # each stack row: node id, segment start, segment end, depth
    stack = np.empty((max_nodes, 4), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        size = end - start

        c1 = 0
        for k in range(start, end):
            c1 += y[idx[k]]
        c0 = size - c1
        count0[node] = c0
        count1[node] = c1

        if depth >= max_depth or size < 2 * min_samples_leaf or c0 == 0 or c1 == 0:
            continue

        n_sub = n_sub_features if n_sub_features < d else d
        for j in range(d):
            perm[j] = j
        for k in range(n_sub):
            swap = k + np.random.randint(0, d - k)
            tmp = perm[k]
            perm[k] = perm[swap]
            perm[swap] = tmp
        chosen = np.sort(perm[:n_sub])

        # maximize q = sum over sides of (c0^2 + c1^2) / n_side, which is
        # equivalent to minimizing weighted Gini impurity
        best_q = -1.0
        best_feature = -1
        best_threshold = 0.0

        for fi in range(n_sub):
            f = chosen[fi]
            for k in range(size):
                values[k] = X[idx[start + k], f]
            order = np.argsort(values[:size], kind="mergesort")

            l0 = 0
            l1 = 0
            for k in range(size - 1):
                row = idx[start + order[k]]
                if y[row] == 1:
                    l1 += 1
                else:
                    l0 += 1
                v_here = values[order[k]]
                v_next = values[order[k + 1]]
                if v_next <= v_here:
                    continue
                n_left = k + 1
                n_right = size - n_left
                if n_left < min_samples_leaf or n_right < min_samples_leaf:
                    continue
                r0 = c0 - l0
                r1 = c1 - l1
                q = (l0 * l0 + l1 * l1) / n_left + (r0 * r0 + r1 * r1) / n_right
                if q > best_q:
                    best_q = q
                    best_feature = f
                    best_threshold = (v_here + v_next) / 2.0

        if best_feature < 0:
            continue

        pos = 0
        for k in range(start, end):
            if X[idx[k], best_feature] <= best_threshold:
                scratch[pos] = idx[k]
                pos += 1
        n_left = pos
        for k in range(start, end):
            if X[idx[k], best_feature] > best_threshold:
                scratch[pos] = idx[k]
                pos += 1
        for k in range(size):
            idx[start + k] = scratch[k]

        feature[node] = best_feature
        threshold[node] = best_threshold
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        left[node] = left_id
        right[node] = right_id

        stack[top, 0] = right_id
        stack[top, 1] = start + n_left
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = left_id
        stack[top, 1] = start
        stack[top, 2] = start + n_left
        stack[top, 3] = depth + 1
        top += 1

    return (
        feature[:n_nodes],
        threshold[:n_nodes],
        left[:n_nodes],
        right[:n_nodes],
        count0[:n_nodes],
        count1[:n_nodes],
    )


@njit(cache=True)
def accumulate_leaf_fractions(X, feature, threshold, left, right, count0, count1, out):
    """Add each row's leaf trustworthy-fraction to ``out`` (length n)."""
    for i in range(X.shape[0]):
        node = 0
        while feature[node] != LEAF:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += count1[node] / (count0[node] + count1[node])


@njit(cache=True)
def pegasos_sweep(X, y_signed, order, lam):
    """Pegasos subgradient descent over a precomputed visiting order.

    Step size at global step t is 1/(lam*t); the L2 shrink applies to the
    weights only, never the bias.
    """
    n, d = X.shape
    w = np.zeros(d, np.float64)
    b = 0.0
    for t in range(1, order.size + 1):
        i = order[t - 1]
        eta = 1.0 / (lam * t)
        m = b
        for j in range(d):
            m += w[j] * X[i, j]
        shrink = 1.0 - eta * lam
        if y_signed[i] * m < 1.0:
            step = eta * y_signed[i]
            for j in range(d):
                w[j] = w[j] * shrink + step * X[i, j]
            b += step
        else:
            for j in range(d):
                w[j] = w[j] * shrink
    return w, b

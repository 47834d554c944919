"""Brute-force flow existence by meet in the middle, independent of the DFS solver.

Every weight vector in {±1..±(width-1)}^b is covered: the point sums of all
assignments to the first half of the blocks are matched against the negated
sums of all assignments to the second half.
"""

import itertools

import numpy as np

from tsflow.design import incidence_matrix


def _half_sums(cols, values):
    if cols.shape[1] == 0:
        return np.zeros((1, cols.shape[0]), dtype=np.int64), [()]
    assign = np.array(list(itertools.product(values, repeat=cols.shape[1])), dtype=np.int64)
    return assign @ cols.T, assign


def brute_force_flow(design, width):
    """A zero-sum flow as a tuple of weights, or None if none exists."""
    n = np.array(incidence_matrix(design).entries, dtype=np.int64)
    values = [s * a for a in range(1, width) for s in (1, -1)]
    mid = design.b // 2
    left, left_assign = _half_sums(n[:, :mid], values)
    right, right_assign = _half_sums(n[:, mid:], values)
    index = {}
    for i, row in enumerate(right):
        index.setdefault(row.tobytes(), i)
    for i, row in enumerate(left):
        j = index.get((-row).tobytes())
        if j is not None:
            return tuple(int(x) for x in left_assign[i]) + tuple(int(x) for x in right_assign[j])
    return None

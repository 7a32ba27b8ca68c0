"""Independent brute-force references for the fast paths.

Nothing here imports the routine it checks.
"""

import itertools
from math import gcd

import numpy as np


def closed_walk_classes(quiver, max_len):
    """Every closed walk of length 1..max_len, bucketed by its set of rotations."""
    buckets = set()
    arrows = quiver.arrows
    for length in range(1, max_len + 1):
        frontier = [(i,) for i in range(len(arrows))]
        for _ in range(length - 1):
            frontier = [w + (j,) for w in frontier for j in range(len(arrows)) if arrows[w[-1]][1] == arrows[j][0]]
        for w in frontier:
            if arrows[w[-1]][1] == arrows[w[0]][0]:
                buckets.add(frozenset(w[k:] + w[:k] for k in range(length)))
    return buckets


def _phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def necklace_count(quiver, max_len):
    """Number of rotation classes via Burnside: (1/l) sum_{d|l} phi(l/d) tr(A^d)."""
    A = np.array(quiver.adjacency(), dtype=object)
    traces = [None]
    P = np.identity(quiver.n, dtype=object)
    for _ in range(max_len):
        P = P.dot(A)
        traces.append(sum(P[i, i] for i in range(quiver.n)))
    total = 0
    for length in range(1, max_len + 1):
        s = sum(_phi(length // d) * traces[d] for d in range(1, length + 1) if length % d == 0)
        assert s % length == 0
        total += s // length
    return total


def closed_walk_total(quiver, max_len):
    """Number of closed walks with a marked start, lengths 1..max_len."""
    A = np.array(quiver.adjacency(), dtype=object)
    P = np.identity(quiver.n, dtype=object)
    total = 0
    for _ in range(max_len):
        P = P.dot(A)
        total += sum(P[i, i] for i in range(quiver.n))
    return total


def inversions(perm):
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])


def demazure_by_subwords(letters, n):
    """Demazure product as the Bruhat-maximal product over all subwords.

    Exponential; only for short words.
    """
    best = tuple(range(n))
    for mask in itertools.product((0, 1), repeat=len(letters)):
        w = list(range(n))
        for bit, i in zip(mask, letters):
            if bit:
                w[i - 1], w[i] = w[i], w[i - 1]
        w = tuple(w)
        if inversions(w) > inversions(best):
            best = w
    return best


def matrix_product_2x2_blocks(letters, zs, n):
    """Plain nested-list product of the B_i(z) factors, no polynomial types."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, z in zip(letters, zs):
        B = [[int(r == c) for c in range(n)] for r in range(n)]
        a = i - 1
        B[a][a], B[a][a + 1], B[a + 1][a], B[a + 1][a + 1] = z, 1, 1, 0
        M = [[sum(M[r][k] * B[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
    return M

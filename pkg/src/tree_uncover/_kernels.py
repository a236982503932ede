"""Compiled inner loops for batch simulation.

All kernels work on 0-based labels; the public API converts to 1-based.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def decode_prufer(seq, n, out_u, out_v):
    # linear-time decode, smallest leaf first
    if n == 1:
        return
    degree = np.ones(n, np.int64)
    for x in seq:
        degree[x] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    e = 0
    for x in seq:
        out_u[e] = leaf
        out_v[e] = x
        e += 1
        degree[x] -= 1
        if x < ptr and degree[x] == 1:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    out_u[e] = leaf
    out_v[e] = n - 1


@njit(cache=True, nogil=True)
def decode_batch(seqs, n):
    b = seqs.shape[0]
    us = np.empty((b, n - 1), np.int64)
    vs = np.empty((b, n - 1), np.int64)
    for i in range(b):
        decode_prufer(seqs[i], n, us[i], vs[i])
    return us, vs


@njit(cache=True, nogil=True)
def uncover_increments(us, vs, n):
    """Edge counts revealed at each step; row i, column j-1 holds k_j - k_{j-1}."""
    b = us.shape[0]
    inc = np.zeros((b, n), np.int64)
    for i in range(b):
        for e in range(us.shape[1]):
            top = max(us[i, e], vs[i, e])
            inc[i, top] += 1
    return inc


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def cluster_batch(us, vs, n, k, roots):
    """Union the edges induced by labels < k (0-based) for every tree in the batch.

    Returns root-cluster sizes (0 for covered roots), largest component sizes
    and the summed histogram of component sizes (index r counts components of
    size r over the whole batch).
    """
    b = us.shape[0]
    root_size = np.zeros(b, np.int64)
    largest = np.zeros(b, np.int64)
    hist = np.zeros(n + 1, np.int64)
    parent = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    for i in range(b):
        for v in range(n):
            parent[v] = v
            size[v] = 1
        for e in range(us.shape[1]):
            u = us[i, e]
            v = vs[i, e]
            if u < k and v < k:
                ru = _find(parent, u)
                rv = _find(parent, v)
                if size[ru] < size[rv]:
                    ru, rv = rv, ru
                parent[rv] = ru
                size[ru] += size[rv]
        best = 0
        for v in range(k):
            if parent[v] == v:
                hist[size[v]] += 1
                if size[v] > best:
                    best = size[v]
        largest[i] = best
        r = roots[i]
        if r < k:
            root_size[i] = size[_find(parent, r)]
    return root_size, largest, hist

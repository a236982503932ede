"""The uncover process: vertices of a labeled tree are revealed in label order.

When vertex ``j`` is revealed, every edge to an already revealed neighbour is
revealed with it. ``k_j`` counts the edges induced by ``1..j``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from tree_uncover.trees import LabeledTree, as_generator


@dataclass(frozen=True)
class UncoverPath:
    """Edge counts ``k_1..k_n``; ``k[j - 1]`` is ``k_j``."""

    n: int
    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        if len(self.k) != self.n:
            raise ValueError(f"path of length {len(self.k)} for n={self.n}")

    def at(self, j: int) -> int:
        """``K_j`` with the convention ``K_0 = 0``."""
        if j == 0:
            return 0
        if not 1 <= j <= self.n:
            raise IndexError(j)
        return self.k[j - 1]

    def as_array(self) -> np.ndarray:
        """Length ``n + 1`` array with ``K_0 = 0`` prepended."""
        return np.concatenate(([0], np.asarray(self.k, dtype=np.int64)))

    def components(self) -> tuple[int, ...]:
        return tuple(j - kj for j, kj in enumerate(self.k, start=1))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["j", "k_j"])
        writer.writerows((j, kj) for j, kj in enumerate(self.k, start=1))
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(list(self.k))


@dataclass(frozen=True)
class ClusterReport:
    n: int
    k: int
    sizes: tuple[int, ...]
    root_cluster: int
    largest: int

    def multiplicity(self, r: int) -> int:
        """Number of components of size ``r``."""
        return sum(1 for s in self.sizes if s == r)

    def to_json(self) -> str:
        return json.dumps(
            {"k": self.k, "sizes": list(self.sizes), "root_cluster": self.root_cluster,
             "largest": self.largest}
        )


def uncover_path(t: LabeledTree) -> UncoverPath:
    # an edge appears at the step of its larger endpoint
    inc = [0] * (t.n + 1)
    for _, v in t.edges:
        inc[v] += 1
    k, total = [], 0
    for j in range(1, t.n + 1):
        total += inc[j]
        k.append(total)
    return UncoverPath(t.n, tuple(k))


def uncover_snapshots(t: LabeledTree, ks, root: int | None = None):
    """One incremental pass returning the path and a :class:`ClusterReport` per ``k``.

    Vertices are added in label order and merged with earlier neighbours by
    union-find (union by size, path halving).
    """
    n = t.n
    ks = [int(k) for k in ks]
    for k in ks:
        if not 0 <= k <= n:
            raise ValueError(f"k={k} outside 0..{n}")
    if root is not None and not 1 <= root <= n:
        raise ValueError(f"root {root} outside 1..{n}")
    wanted = set(ks)
    adj = t.neighbors()
    parent = list(range(n + 1))
    size = [1] * (n + 1)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def snapshot(k):
        sizes = sorted((size[v] for v in range(1, k + 1) if parent[v] == v), reverse=True)
        rc = size[find(root)] if root is not None and root <= k else 0
        return ClusterReport(n, k, tuple(sizes), rc, sizes[0] if sizes else 0)

    reports = {}
    if 0 in wanted:
        reports[0] = snapshot(0)
    path, edges = [], 0
    for j in range(1, n + 1):
        for w in adj[j]:
            if w < j:
                edges += 1
                a, b = find(j), find(w)
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
        path.append(edges)
        if j in wanted:
            reports[j] = snapshot(j)
    return UncoverPath(n, tuple(path)), [reports[k] for k in ks]


def cluster_report(t: LabeledTree, k: int, root: int | None = None) -> ClusterReport:
    if k > t.n:
        raise ValueError(f"k={k} exceeds n={t.n}")
    return uncover_snapshots(t, [k], root)[1][0]


def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")


def interpolated_Z(p: UncoverPath, t: float) -> float:
    """Centered, sqrt(n)-scaled, linearly interpolated edge count at time ``t``."""
    _check_t(t)
    n = p.n
    tn = t * n
    lo = math.floor(tn)
    hi = math.ceil(tn)
    k_tilde = (1 + lo - tn) * p.at(lo) + (tn - lo) * p.at(hi)
    return (k_tilde - t * t * n) / math.sqrt(n)


def z_on_grid(paths: np.ndarray, grid) -> np.ndarray:
    """Vectorised :func:`interpolated_Z` for a batch of paths.

    ``paths`` has shape ``(batch, n + 1)`` and includes ``K_0 = 0``.
    """
    paths = np.atleast_2d(paths)
    n = paths.shape[1] - 1
    grid = np.asarray(grid, dtype=float)
    if np.any((grid < 0) | (grid > 1)):
        raise ValueError("grid values must lie in [0, 1]")
    tn = grid * n
    lo = np.floor(tn).astype(np.int64)
    hi = np.ceil(tn).astype(np.int64)
    frac = tn - lo
    k_tilde = (1 - frac) * paths[:, lo] + frac * paths[:, hi]
    return (k_tilde - grid**2 * n) / math.sqrt(n)


def sup_abs_Z(paths: np.ndarray) -> np.ndarray:
    """Exact ``sup_t |Z(t)|`` for each path (shape ``(batch, n + 1)``, with ``K_0``).

    Between grid points ``Z`` is concave, so besides the nodes only the
    stationary point of each segment can carry the maximum.
    """
    paths = np.atleast_2d(paths).astype(float)
    n = paths.shape[1] - 1
    j = np.arange(n + 1, dtype=float)
    nodes = np.abs(paths - j**2 / n).max(axis=1)
    dk = np.diff(paths, axis=1)
    eta = n * dk / 2.0 - j[:-1]
    inside = (eta > 0) & (eta < 1)
    eta = np.clip(eta, 0.0, 1.0)
    interior = paths[:, :-1] + eta * dk - (j[:-1] + eta) ** 2 / n
    interior = np.where(inside, interior, -np.inf)
    return np.maximum(nodes, interior.max(axis=1)) / math.sqrt(n)


def martingale_Y(p: UncoverPath, j: int) -> float:
    if not 1 <= j <= p.n - 1:
        raise ValueError(f"j={j} outside 1..{p.n - 1}")
    n = p.n
    return (p.at(j) - j * (j - 1) / n) / (n - j)


def recursive_model_sampler(n: int, rng, size: int | None = None):
    """Sample edge-count paths from the increment recursion, without building trees.

    ``K_{j+1} = K_j + Ber((j+1)/n) + Bin(j - 1 - K_j, 1/(n-j))`` with fresh
    independent draws at every step. With ``size`` given, returns an integer
    array of shape ``(size, n)``; otherwise a single :class:`UncoverPath`.
    """
    if n < 2:
        raise ValueError("recursive model needs n >= 2")
    gen = as_generator(rng)
    m = 1 if size is None else size
    out = np.zeros((m, n), dtype=np.int64)
    kj = np.zeros(m, dtype=np.int64)
    for j in range(1, n):
        new = gen.random(m) < (j + 1) / n
        pending = j - 1 - kj
        late = gen.binomial(pending, 1.0 / (n - j))
        kj = kj + new + late
        out[:, j] = kj
    if size is None:
        return UncoverPath(n, tuple(out[0].tolist()))
    return out


"""Labeled trees, Prüfer coding and uniform sampling.

Labels are 1-based throughout the public API. A tree is stored as a sorted
tuple of ``(u, v)`` pairs with ``u < v``, which doubles as its canonical form.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

import numpy as np

from tree_uncover import _kernels


class InvalidTreeError(ValueError):
    pass


def _canonical(edges) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(u, v), max(u, v)) for u, v in edges))


@dataclass(frozen=True)
class LabeledTree:
    """A labeled tree on the vertex set ``1..n``."""

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise InvalidTreeError(f"n must be >= 1, got {self.n}")
        edges = _canonical(self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.n - 1:
            raise InvalidTreeError(f"expected {self.n - 1} edges, got {len(edges)}")
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            if u == v or not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InvalidTreeError(f"bad edge {(u, v)} for n={self.n}")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InvalidTreeError(f"edge {(u, v)} closes a cycle")
            parent[ru] = rv

    def neighbors(self) -> list[list[int]]:
        """Adjacency lists indexed by label (index 0 unused)."""
        adj = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def to_dict(self, root: int | None = None) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "root": root}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledTree":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))


@dataclass(frozen=True)
class RootedTree:
    tree: LabeledTree
    root: int

    def __post_init__(self):
        if not 1 <= self.root <= self.tree.n:
            raise InvalidTreeError(f"root {self.root} outside 1..{self.tree.n}")

    @property
    def n(self) -> int:
        return self.tree.n

    def to_json(self) -> str:
        return json.dumps(self.tree.to_dict(self.root))

    @classmethod
    def from_json(cls, text: str) -> "RootedTree":
        data = json.loads(text)
        return cls(LabeledTree.from_dict(data), int(data["root"]))


@dataclass(frozen=True)
class PrueferSeq:
    n: int
    seq: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(int(x) for x in self.seq))
        if self.n < 2:
            raise ValueError("Prüfer sequences need n >= 2")
        if len(self.seq) != self.n - 2:
            raise ValueError(f"expected length {self.n - 2}, got {len(self.seq)}")
        bad = [x for x in self.seq if not 1 <= x <= self.n]
        if bad:
            raise ValueError(f"labels {bad} outside 1..{self.n}")


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id; both 64-bit. Backed by a Philox counter generator.

    The 128-bit Philox key is ``seed + 2**64 * stream_id``, so distinct
    streams never share a key and the pair fully determines every draw.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed + (self.stream_id << 64)))

    def spawn(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator()
    raise TypeError(f"cannot make a generator from {type(rng).__name__}")


def prufer_decode(p: PrueferSeq) -> LabeledTree:
    n = p.n
    degree = [1] * (n + 1)
    for x in p.seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in p.seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return LabeledTree(n, tuple(edges))


def prufer_encode(t: LabeledTree) -> PrueferSeq:
    # LabeledTree validates connectivity/acyclicity on construction
    if not isinstance(t, LabeledTree):
        t = LabeledTree(*t)
    n = t.n
    if n < 2:
        raise ValueError("Prüfer sequences need n >= 2")
    adj = [set(a) for a in t.neighbors()]
    leaves = [v for v in range(1, n + 1) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        seq.append(nb)
        adj[nb].discard(leaf)
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return PrueferSeq(n, tuple(seq))


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def sample_prufer_batch(n: int, size: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``size`` uniform trees at once; returns 0-based endpoint arrays."""
    _check_n(n)
    gen = as_generator(rng)
    if n == 1:
        return np.zeros((size, 0), np.int64), np.zeros((size, 0), np.int64)
    seqs = gen.integers(0, n, size=(size, n - 2), dtype=np.int64)
    return _kernels.decode_batch(seqs, n)


def sample_uniform_tree(n: int, rng) -> LabeledTree:
    """Uniform tree on ``1..n``: every one of the ``n**(n-2)`` trees is equally likely."""
    _check_n(n)
    if n == 1:
        return LabeledTree(1, ())
    if n == 2:
        return LabeledTree(2, ((1, 2),))
    gen = as_generator(rng)
    seq = gen.integers(1, n + 1, size=n - 2)
    return prufer_decode(PrueferSeq(n, tuple(seq.tolist())))


def sample_uniform_rooted_tree(n: int, rng) -> RootedTree:
    _check_n(n)
    gen = as_generator(rng)
    tree = sample_uniform_tree(n, gen)
    return RootedTree(tree, int(gen.integers(1, n + 1)))

"""Block assignments with incrementally maintained sufficient statistics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

# Slot-count convention for the within-block diagonal.  "simple" counts
# unordered loop-free pairs n_s(n_s-1)/2; "literal" keeps the n_s^2 of the
# printed affinity-product formula for cross-checking other codebases.
SIMPLE = "simple"
LITERAL = "literal"
CONVENTIONS = (SIMPLE, LITERAL)


def slot_count(sizes, s, t, convention=SIMPLE) -> int:
    """Number of potential edge slots N_st between blocks s and t."""
    if s != t:
        return int(sizes[s]) * int(sizes[t])
    ns = int(sizes[s])
    if convention == LITERAL:
        return ns * ns
    return ns * (ns - 1) // 2


def slot_matrix(sizes, convention=SIMPLE) -> np.ndarray:
    """k x k matrix of slot counts (symmetric, diagonal per convention)."""
    sizes = np.asarray(sizes, dtype=np.int64)
    mat = np.outer(sizes, sizes)
    if convention == SIMPLE:
        np.fill_diagonal(mat, sizes * (sizes - 1) // 2)
    return mat


@dataclass
class StatDelta:
    """Changed sufficient statistics for one vertex move, old -> new."""

    vertex: int
    source: int
    target: int
    sizes: dict = field(default_factory=dict)
    degrees: dict = field(default_factory=dict)
    pair_edges: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not (self.sizes or self.degrees or self.pair_edges)


class BlockState:
    """Assignment g plus (n_s, m_st, D_s), updated in O(d_u + k) per move.

    Empty blocks are permitted and k is fixed for the lifetime of a state.
    ``pair_edges`` is a symmetric k x k matrix whose diagonal counts each
    within-block edge once.
    """

    def __init__(self, graph: Graph, labels, k: int):
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (graph.n,):
            raise ValueError(f"labels must have length {graph.n}")
        if k < 1:
            raise ValueError("k must be >= 1")
        if graph.n and (labels.min() < 0 or labels.max() >= k):
            raise ValueError("label out of range [0, k)")
        self.graph = graph
        self.k = int(k)
        self.labels = labels.copy()
        self.block_sizes = np.bincount(labels, minlength=k).astype(np.int64)
        self.block_degrees = np.zeros(k, dtype=np.int64)
        np.add.at(self.block_degrees, labels, graph.degrees)
        self.pair_edges = np.zeros((k, k), dtype=np.int64)
        for u, v in graph.edges:
            s, t = labels[u], labels[v]
            self.pair_edges[s, t] += 1
            if s != t:
                self.pair_edges[t, s] += 1

    @classmethod
    def from_labels(cls, graph: Graph, labels, k: int) -> "BlockState":
        return cls(graph, labels, k)

    def copy(self) -> "BlockState":
        new = object.__new__(BlockState)
        new.graph = self.graph
        new.k = self.k
        new.labels = self.labels.copy()
        new.block_sizes = self.block_sizes.copy()
        new.block_degrees = self.block_degrees.copy()
        new.pair_edges = self.pair_edges.copy()
        return new

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def pair_count(self, s: int, t: int) -> int:
        """Edges between blocks s and t (within-block counted once)."""
        return int(self.pair_edges[s, t])

    def slots(self, s: int, t: int, convention=SIMPLE) -> int:
        return slot_count(self.block_sizes, s, t, convention)

    def neighbor_block_counts(self, u: int) -> np.ndarray:
        """Number of neighbors of u in each block."""
        counts = np.zeros(self.k, dtype=np.int64)
        labels = self.labels
        for v in self.graph.adjacency[u]:
            counts[labels[v]] += 1
        return counts

    def move_vertex(self, u: int, t: int) -> StatDelta:
        """Relabel vertex u to block t, updating statistics in place."""
        if not 0 <= u < self.graph.n:
            raise ValueError(f"vertex {u} out of range")
        if not 0 <= t < self.k:
            raise ValueError(f"target block {t} out of range")
        s = int(self.labels[u])
        delta = StatDelta(vertex=u, source=s, target=t)
        if t == s:
            return delta
        d_u = int(self.graph.degrees[u])
        counts = self.neighbor_block_counts(u)

        delta.sizes[s] = (int(self.block_sizes[s]), int(self.block_sizes[s]) - 1)
        delta.sizes[t] = (int(self.block_sizes[t]), int(self.block_sizes[t]) + 1)
        delta.degrees[s] = (int(self.block_degrees[s]),
                            int(self.block_degrees[s]) - d_u)
        delta.degrees[t] = (int(self.block_degrees[t]),
                            int(self.block_degrees[t]) + d_u)

        pe = self.pair_edges
        changes = {}
        for c in range(self.k):
            e = int(counts[c])
            if e == 0:
                continue
            a, b = (s, c) if s <= c else (c, s)
            changes[(a, b)] = changes.get((a, b), 0) - e
            a, b = (t, c) if t <= c else (c, t)
            changes[(a, b)] = changes.get((a, b), 0) + e
        for (a, b), diff in changes.items():
            if diff == 0:
                continue
            old = int(pe[a, b])
            pe[a, b] = old + diff
            if a != b:
                pe[b, a] = old + diff
            delta.pair_edges[(a, b)] = (old, old + diff)

        self.block_sizes[s] -= 1
        self.block_sizes[t] += 1
        self.block_degrees[s] -= d_u
        self.block_degrees[t] += d_u
        self.labels[u] = t
        return delta

    def check_invariants(self):
        """Raise AssertionError if statistics disagree with a recount."""
        fresh = BlockState(self.graph, self.labels, self.k)
        assert np.array_equal(fresh.block_sizes, self.block_sizes)
        assert np.array_equal(fresh.block_degrees, self.block_degrees)
        assert np.array_equal(fresh.pair_edges, self.pair_edges)
        assert int(self.block_sizes.sum()) == self.graph.n
        assert int(self.block_degrees.sum()) == 2 * self.graph.m
        assert int(np.triu(self.pair_edges).sum()) == self.graph.m


def labels_to_json(labels) -> str:
    return json.dumps([int(x) for x in labels])


def load_labels(text, n=None) -> np.ndarray:
    """Read a label vector from JSON or two-column 'vertex label' text."""
    if hasattr(text, "read"):
        text = text.read()
    stripped = text.strip()
    if stripped.startswith("["):
        labels = np.asarray(json.loads(stripped), dtype=np.int64)
    else:
        pairs = {}
        for lineno, line in enumerate(stripped.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: expected 'vertex label'")
            pairs[int(tokens[0])] = int(tokens[1])
        if not pairs:
            return np.zeros(0, dtype=np.int64)
        size = max(pairs) + 1
        if set(pairs) != set(range(size)):
            raise ValueError("label file must cover vertices 0..n-1")
        labels = np.array([pairs[i] for i in range(size)], dtype=np.int64)
    if n is not None and labels.shape != (n,):
        raise ValueError(f"expected {n} labels, got {labels.shape[0]}")
    return labels

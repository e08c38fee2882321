"""Immutable simple undirected graphs loaded from edge-list text."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np


class GraphFormatError(ValueError):
    """Edge-list input violates the simple-graph contract."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with dense 0-based vertex ids.

    ``id_map[i]`` records the original id of internal vertex i when the
    input used sparse or shifted ids.
    """

    n: int
    edges: tuple
    adjacency: tuple
    degrees: np.ndarray
    id_map: tuple = field(default=())

    @property
    def m(self) -> int:
        return len(self.edges)

    def __post_init__(self):
        self.degrees.setflags(write=False)


def from_edges(n, edges, id_map=None) -> Graph:
    """Build a validated Graph from unordered vertex pairs."""
    canon = []
    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"endpoint out of range: ({u}, {v})")
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        canon.append((u, v))
    canon.sort()
    adj = [[] for _ in range(n)]
    for u, v in canon:
        adj[u].append(v)
        adj[v].append(u)
    degrees = np.array([len(a) for a in adj], dtype=np.int64)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    if id_map is None:
        id_map = tuple(range(n))
    return Graph(n=n, edges=tuple(canon), adjacency=adjacency,
                 degrees=degrees, id_map=tuple(id_map))


def load_edge_list(text, one_indexed=False, drop_duplicates=False) -> Graph:
    """Parse whitespace-delimited edge-list text into a Graph.

    Lines starting with '#' are comments.  Vertex ids are compacted to
    0..n-1 (first-seen order) when the id set is not already dense.
    """
    if hasattr(text, "read"):
        text = text.read()
    raw_edges = []
    ids = []
    id_set = set()
    seen_pairs = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise GraphFormatError(
                f"line {lineno}: expected two integer tokens, got {len(tokens)}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token") from None
        if one_indexed:
            u -= 1
            v -= 1
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            if drop_duplicates:
                continue
            raise GraphFormatError(f"line {lineno}: duplicate edge {key}")
        seen_pairs.add(key)
        raw_edges.append((u, v))
        for w in (u, v):
            if w not in id_set:
                id_set.add(w)
                ids.append(w)

    if not ids:
        return from_edges(0, [], id_map=())

    if id_set == set(range(max(id_set) + 1)):
        # already dense: keep ids as-is
        n = max(id_set) + 1
        return from_edges(n, raw_edges, id_map=range(n))

    index = {orig: i for i, orig in enumerate(ids)}
    n = len(ids)
    edges = [(index[u], index[v]) for u, v in raw_edges]
    return from_edges(n, edges, id_map=ids)


def to_edge_text(g: Graph) -> str:
    """Serialize a Graph back to edge-list text (internal ids)."""
    return "\n".join(f"{u} {v}" for u, v in g.edges) + ("\n" if g.edges else "")


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties are broken by the component containing the smallest vertex id.
    Vertex ids are recompacted preserving their relative order.
    """
    if g.n == 0:
        raise ValueError("largest_component of an empty graph")
    comp = np.full(g.n, -1, dtype=np.int64)
    comps = []
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        cid = len(comps)
        comp[start] = cid
        members = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if comp[v] < 0:
                    comp[v] = cid
                    members.append(v)
                    queue.append(v)
        comps.append(members)
    # max size; ties go to the component seen first (smallest min id)
    best = max(range(len(comps)), key=lambda c: (len(comps[c]), -min(comps[c])))
    members = sorted(comps[best])
    index = {orig: i for i, orig in enumerate(members)}
    edges = [(index[u], index[v]) for u, v in g.edges
             if comp[u] == best and comp[v] == best]
    id_map = [g.id_map[u] for u in members]
    return from_edges(len(members), edges, id_map=id_map)

"""Candidate sets as K-uniform hypergraphs, feedback-driven edge deletion,
and strong colouring.

An edge is a sorted K-tuple of 1-based vertex ids. The vertex set 1..N never
changes; reduction only removes edges.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import networkx as nx
import numpy as np

from .core import (
    AccessMatrix,
    Feedback,
    InvalidInput,
    PartitionVector,
    StatusVector,
    or_channel,
)

Edge = tuple[int, ...]

MAX_DELETION_EDGES = 24


class NotColorable(ValueError):
    """The hypergraph has no strong colouring with the requested colours."""


@dataclass(frozen=True)
class Hypergraph:
    n_vertices: int
    k_uniform: int
    edges: frozenset[Edge]

    def __post_init__(self):
        edges = frozenset(tuple(sorted(int(v) for v in e)) for e in self.edges)
        for e in edges:
            if len(e) != self.k_uniform or len(set(e)) != self.k_uniform:
                raise InvalidInput(f"edge {e} is not a set of {self.k_uniform} distinct vertices")
            if e[0] < 1 or e[-1] > self.n_vertices:
                raise InvalidInput(f"edge {e} leaves the vertex range 1..{self.n_vertices}")
        object.__setattr__(self, "edges", edges)

    def __len__(self):
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def with_edges(self, edges: Iterable[Edge]) -> "Hypergraph":
        return Hypergraph(self.n_vertices, self.k_uniform, frozenset(edges))

    def adjacency(self) -> dict[int, set[int]]:
        """Vertices sharing at least one edge (the 2-section graph)."""
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n_vertices + 1)}
        for e in self.edges:
            for a, b in combinations(e, 2):
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def to_dot(self, name: str = "H") -> str:
        """Graphviz source for a 2-uniform hypergraph; isolated vertices are kept."""
        if self.k_uniform != 2:
            raise InvalidInput("DOT export is only defined for graphs (K=2)")
        lines = [f"graph {name} {{"]
        lines += [f"  {v};" for v in range(1, self.n_vertices + 1)]
        lines += [f"  {a} -- {b};" for a, b in self.sorted_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def complete(n: int, k: int) -> Hypergraph:
    if not 1 <= k <= n:
        raise InvalidInput(f"need 1 <= K <= N, got N={n}, K={k}")
    return Hypergraph(n, k, frozenset(combinations(range(1, n + 1), k)))


def apply_slot(h: Hypergraph, writers: Iterable[int], y: int | bool) -> Hypergraph:
    """Delete the edges ruled out by one slot of feedback.

    y = 0: no active user wrote, so every edge touching a writer goes.
    y = 1: some active user wrote, so every edge made only of non-writers goes.
    """
    writers = frozenset(writers)
    if writers and (min(writers) < 1 or max(writers) > h.n_vertices):
        raise InvalidInput(f"writers must lie in 1..{h.n_vertices}")
    if y:
        kept = (e for e in h.edges if not writers.isdisjoint(e))
    else:
        kept = (e for e in h.edges if writers.isdisjoint(e))
    return h.with_edges(kept)


def _check_dims(n: int, x: AccessMatrix, y: Feedback):
    if x.n_users != n:
        raise InvalidInput(f"matrix has N={x.n_users}, expected {n}")
    if len(y) != x.n_slots:
        raise InvalidInput(f"feedback has {len(y)} slots, matrix has {x.n_slots}")


def reduce(n: int, k: int, x: AccessMatrix, y: Feedback) -> Hypergraph:
    """Fold ``apply_slot`` over all slots, starting from the complete hypergraph."""
    _check_dims(n, x, y)
    h = complete(n, k)
    for t in range(x.n_slots):
        h = apply_slot(h, x.writers(t), y.bits[t])
    return h


def candidate_set(n: int, k: int, x: AccessMatrix, y: Feedback) -> set[StatusVector]:
    """All K-subsets of users whose OR of codewords reproduces ``y`` (brute force)."""
    _check_dims(n, x, y)
    out = set()
    for active in combinations(range(1, n + 1), k):
        s = StatusVector(n, active)
        if or_channel(x, s) == y:
            out.add(s)
    return out


def _bipartite_colors(adj: dict[int, set[int]], vertices: Iterable[int]) -> dict[int, int] | None:
    """BFS 2-colouring of the listed vertices' components; None on an odd cycle."""
    color: dict[int, int] = {}
    for root in vertices:
        if root in color:
            continue
        color[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 3 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def _backtrack_colors(adj: dict[int, set[int]], vertices: list[int], k: int) -> dict[int, int] | None:
    order = sorted(vertices, key=lambda v: (-len(adj[v]), v))
    color: dict[int, int] = {}

    def extend(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {color[w] for w in adj[v] if w in color}
        # a fresh colour is interchangeable with any other fresh one
        for c in range(1, min(used + 1, k) + 1):
            if c in taken:
                continue
            color[v] = c
            if extend(i + 1, max(used, c)):
                return True
            del color[v]
        return False

    return color if extend(0, 0) else None


def strong_color(h: Hypergraph, k: int) -> PartitionVector:
    """A strong colouring of ``h`` with colours 1..k, returned as a partition in Z_{k;N}.

    Non-isolated vertices are coloured by BFS parity when k = 2 and by
    backtracking otherwise. Isolated vertices get colours round-robin from 1;
    if some colour is still unused it is moved onto a vertex whose colour
    class has a spare member.
    """
    n = h.n_vertices
    if not 1 <= k <= n:
        raise InvalidInput(f"need 1 <= K <= N, got N={n}, K={k}")
    if h.edges and h.k_uniform > k:
        raise NotColorable(f"{h.k_uniform}-vertex edges need more than {k} colours")
    adj = h.adjacency()
    busy = [v for v in range(1, n + 1) if adj[v]]
    color = _bipartite_colors(adj, busy) if k == 2 else _backtrack_colors(adj, busy, k)
    if color is None:
        raise NotColorable(f"no strong {k}-colouring exists")
    nxt = 0
    for v in range(1, n + 1):
        if v not in color:
            color[v] = nxt % k + 1
            nxt += 1
    counts = Counter(color.values())
    for c in range(1, k + 1):
        if counts[c]:
            continue
        v = next(v for v in range(n, 0, -1) if counts[color[v]] > 1)
        counts[color[v]] -= 1
        color[v] = c
        counts[c] = 1
    return PartitionVector(tuple(color[v] for v in range(1, n + 1)), k)


def is_strong_coloring(h: Hypergraph, z: PartitionVector) -> bool:
    return all(len({z.labels[v - 1] for v in e}) == len(e) for e in h.edges)


def _colorable(h: Hypergraph, k: int) -> PartitionVector | None:
    try:
        return strong_color(h, k)
    except NotColorable:
        return None


def min_deletion_colorable(
    h: Hypergraph, k: int, max_edges: int = MAX_DELETION_EDGES
) -> tuple[Hypergraph, PartitionVector]:
    """Largest strongly k-colourable sub-hypergraph, by exhaustive search.

    Tries every set of 0, 1, 2, ... deleted edges. Exponential in |E|, so
    refuses instances with more than ``max_edges`` edges.
    """
    if len(h) > max_edges:
        raise InvalidInput(f"{len(h)} edges exceeds the exhaustive-search limit {max_edges}")
    edges = h.sorted_edges()
    for d in range(len(edges) + 1):
        for dropped in combinations(edges, d):
            sub = h.with_edges(set(edges).difference(dropped))
            z = _colorable(sub, k)
            if z is not None:
                return sub, z
    raise AssertionError("the empty hypergraph is always colourable")


def _require_graph(g: Hypergraph):
    if g.k_uniform != 2:
        raise InvalidInput("odd-cycle queries need a 2-uniform hypergraph")


def has_odd_cycle(g: Hypergraph) -> bool:
    _require_graph(g)
    adj = g.adjacency()
    return _bipartite_colors(adj, range(1, g.n_vertices + 1)) is None


def has_one_odd_cycle(g: Hypergraph, u: int, v: int) -> bool:
    """Whether some odd cycle passes through edge (u, v).

    Every edge of a non-bipartite 2-connected block lies on an odd cycle and
    no cycle leaves its block, so the test is bipartiteness of the block
    that contains (u, v).
    """
    _require_graph(g)
    if (u, v) not in g:
        raise InvalidInput(f"edge ({u}, {v}) is not in the graph")
    G = nx.Graph(list(g.edges))
    target = frozenset((u, v))
    for block in nx.biconnected_component_edges(G):
        if any(frozenset(e) == target for e in block):
            sub = Hypergraph(g.n_vertices, 2, frozenset(block))
            return has_odd_cycle(sub)
    raise AssertionError("every edge belongs to a block")


def odd_cycle_census(g: Hypergraph, active: Edge = (1, 2), max_length: int | None = None) -> Counter:
    """Count simple odd cycles by how they meet the true active pair.

    Keys: ``"one_odd"`` (uses the edge between the active pair), ``1`` (both
    active vertices on the cycle), ``2`` (exactly one), ``3`` (neither).
    Enumerates cycles, so meant for small graphs.
    """
    _require_graph(g)
    a, b = active
    G = nx.Graph(list(g.edges))
    census: Counter = Counter()
    for cyc in nx.simple_cycles(G, length_bound=max_length):
        if len(cyc) % 2 == 0:
            continue
        hits = (a in cyc) + (b in cyc)
        census[{2: 1, 1: 2, 0: 3}[hits]] += 1
        if hits == 2:
            i, j = cyc.index(a), cyc.index(b)
            if abs(i - j) in (1, len(cyc) - 1):
                census["one_odd"] += 1
    return census


def graph_from_survivors(n: int, x: AccessMatrix, y: Feedback) -> Hypergraph:
    """Reduced graph for K = 2 without touching the complete graph.

    A vertex survives iff it never writes in a silent slot; two survivors stay
    joined iff in every busy slot at least one of them writes. Equal to
    ``reduce(n, 2, x, y)`` but costs O(survivors^2 * T) instead of O(N^2 * T).
    """
    _check_dims(n, x, y)
    bits, busy = x.bits, y.bits
    alive = np.flatnonzero(~bits[:, ~busy].any(axis=1))
    silent = ~bits[alive][:, busy]
    joined = ~(silent[:, None, :] & silent[None, :, :]).any(axis=2)
    ii, jj = np.nonzero(np.triu(joined, 1))
    edges = zip((alive[ii] + 1).tolist(), (alive[jj] + 1).tolist())
    return Hypergraph(n, 2, frozenset(edges))

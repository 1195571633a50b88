"""Static matching oracles used as ground truth by the audits.

These are test fixtures, not deliverable algorithms: clarity over speed.
`max_matching` dispatches to Hopcroft-Karp when a bipartition is known
and to an augmenting-path search with blossom contraction otherwise.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import DynamicGraph, Edge, edge_key


def _adjacency(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for lst in adj:
        lst.sort()
    return adj


def hopcroft_karp(n: int, edges: Iterable[Edge], side: Sequence[int]) -> set[Edge]:
    """Maximum bipartite matching; `side[v]` in {0,1} for every node."""
    adj = _adjacency(n, edges)
    left = [v for v in range(n) if side[v] == 0]
    match = [-1] * n
    INF = float("inf")
    dist: dict[int, float] = {}

    def bfs() -> bool:
        dist.clear()
        q = deque()
        for u in left:
            if match[u] == -1:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match[v]
                if w == -1:
                    found = True
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match[v]
            if w == -1 or (dist.get(w, INF) == dist.get(u, INF) + 1 and dfs(w)):
                match[u] = v
                match[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if match[u] == -1:
                dfs(u)
    return {edge_key(u, match[u]) for u in left if match[u] != -1}


def blossom_matching(
    n: int, edges: Iterable[Edge], init_mate: Optional[dict[int, int]] = None
) -> set[Edge]:
    """Maximum matching in a general graph (textbook O(V^3) blossom search).

    `init_mate` warm-starts the search from a valid matching; augmenting
    from it never removes an edge that lies on no augmenting path.
    """
    adj = _adjacency(n, edges)
    match = [-1] * n
    if init_mate:
        for u, v in init_mate.items():
            match[u] = v
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        used = [False] * n
        while True:
            a = base[a]
            used[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if used[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        for i in range(n):
            parent[i] = -1
            base[i] = i
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    b = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, b, to, blossom)
                    mark_path(to, b, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = b
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    q.append(match[to])
        return -1

    for v in range(n):
        if match[v] == -1:
            u = find_path(v)
            while u != -1:
                pv = parent[u]
                ppv = match[pv]
                match[u] = pv
                match[pv] = u
                u = ppv
    return {edge_key(v, match[v]) for v in range(n) if match[v] > v}


def max_matching_edges(
    n: int,
    edges: Iterable[Edge],
    side: Optional[Sequence[int]] = None,
    init_mate: Optional[dict[int, int]] = None,
) -> set[Edge]:
    edges = list(edges)
    if side is not None and not init_mate:
        return hopcroft_karp(n, edges, side)
    return blossom_matching(n, edges, init_mate)


def max_matching(g: DynamicGraph, side: Optional[Sequence[int]] = None) -> set[Edge]:
    return max_matching_edges(g.n, g.edges(), side)


def greedy_maximal_edges(edges: Iterable[Edge]) -> set[Edge]:
    """Deterministic maximal matching: scan edges in canonical sorted order."""
    used: set[int] = set()
    out: set[Edge] = set()
    for u, v in sorted(edge_key(a, b) for a, b in edges):
        if u not in used and v not in used:
            out.add((u, v))
            used.add(u)
            used.add(v)
    return out


def greedy_maximal(g: DynamicGraph) -> set[Edge]:
    return greedy_maximal_edges(g.edges())


def is_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u in seen or v in seen or u == v:
            return False
        seen.add(u)
        seen.add(v)
    return True


def ratio(
    maintained: Iterable[Edge],
    g: DynamicGraph,
    side: Optional[Sequence[int]] = None,
) -> Fraction:
    """|maximum matching| / max(1, |maintained|), with validity checks."""
    kept = [edge_key(u, v) for u, v in maintained]
    if not is_matching(kept):
        raise ValueError("maintained edge set is not a matching")
    for u, v in kept:
        if not g.has_edge(u, v):
            raise ValueError(f"maintained edge {(u, v)} is not live")
    best = len(max_matching(g, side))
    return Fraction(best, max(1, len(kept)))

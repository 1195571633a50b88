"""(1+eps)-approximate matching on a dynamic degree-bounded edge set.

Between rebuilds the matcher is lazy: an inserted edge joins the matching
only if both endpoints are free, and a deleted matched edge just leaves.
Each update can cost at most one matched edge, so after a rebuild to a
maximum matching of size s the ratio stays within (1+eps) for the next
(eps/3)*s updates; crossing that budget triggers the next rebuild.  The
rebuild augments from the current matching, so edges that already lie on
no augmenting path are kept as-is.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from .core import Edge, EventKind, edge_key
from .oracle import max_matching_edges


class Matching:
    """Integral matching stored as a symmetric partner map."""

    def __init__(self, mate: dict[int, int] | None = None):
        self.mate: dict[int, int] = dict(mate) if mate else {}

    def edges(self) -> set[Edge]:
        return {edge_key(u, v) for u, v in self.mate.items() if u < v}

    def __len__(self) -> int:
        return len(self.mate) // 2

    def __contains__(self, v: int) -> bool:
        return v in self.mate


class BoundedDegreeMatcher:
    def __init__(self, d_max: int, eps: Fraction):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.d_max = d_max
        self.eps = Fraction(eps)
        self.adj: dict[int, set[int]] = defaultdict(set)
        self.m = 0
        self.mate: dict[int, int] = {}
        self.updates_since_rebuild = 0
        self.size_at_rebuild = 0
        self.rebuild_count = 0
        self.edge_touches = 0

    def apply(self, kind: EventKind, e: Edge) -> list[tuple[str, Edge]]:
        u, v = e
        delta: list[tuple[str, Edge]] = []
        self.edge_touches += 1
        if kind is EventKind.INSERT:
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.m += 1
            if len(self.adj[u]) > self.d_max or len(self.adj[v]) > self.d_max:
                raise ValueError(f"degree bound {self.d_max} exceeded at {e}")
            if u not in self.mate and v not in self.mate:
                self.mate[u] = v
                self.mate[v] = u
                delta.append(("+", e))
        else:
            self.adj[u].remove(v)
            self.adj[v].remove(u)
            self.m -= 1
            if self.mate.get(u) == v:
                del self.mate[u]
                del self.mate[v]
                delta.append(("-", e))
        self.updates_since_rebuild += 1
        if self.updates_since_rebuild * 3 > self.eps * self.size_at_rebuild:
            delta.extend(self.rebuild())
        return delta

    def rebuild(self) -> list[tuple[str, Edge]]:
        """Augment the current matching to a maximum one."""
        self.rebuild_count += 1
        nodes = sorted(v for v in self.adj if self.adj[v])
        index = {v: k for k, v in enumerate(nodes)}
        edges = [
            (index[u], index[v])
            for u in nodes
            for v in self.adj[u]
            if u < v
        ]
        self.edge_touches += len(edges)
        init = {
            index[u]: index[v]
            for u, v in self.mate.items()
            if u in index and v in index
        }
        best = max_matching_edges(len(nodes), edges, init_mate=init)
        new_mate: dict[int, int] = {}
        for a, b in best:
            u, v = nodes[a], nodes[b]
            new_mate[u] = v
            new_mate[v] = u
        old = {edge_key(u, v) for u, v in self.mate.items() if u < v}
        new = {edge_key(u, v) for u, v in new_mate.items() if u < v}
        delta = [("-", e) for e in sorted(old - new)]
        delta += [("+", e) for e in sorted(new - old)]
        self.mate = new_mate
        self.updates_since_rebuild = 0
        self.size_at_rebuild = len(new_mate) // 2
        return delta

    def matching(self) -> Matching:
        return Matching(self.mate)

    def check(self) -> None:
        """Internal consistency: M is a live matching."""
        for u, v in self.mate.items():
            if self.mate.get(v) != u:
                raise AssertionError(f"partner map broken at {u}")
            if v not in self.adj[u]:
                raise AssertionError(f"matched edge {(u, v)} not live")


def is_valid_matching(edges: Iterable[Edge], adj: dict[int, set[int]]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u in seen or v in seen or v not in adj.get(u, ()):
            return False
        seen.add(u)
        seen.add(v)
    return True

"""Hierarchical level partition of a dynamic graph.

Nodes carry levels in {-1, 0, ..., L}; an edge lives in the bucket of its
higher endpoint and weighs 1/d_i there.  Two invariants are maintained
after every update:

  1. no edge has both endpoints at level -1;
  2. node weights W(v) = sum_i deg(v, E_i)/d_i stay in [1/(alpha*beta), 1]
     for nodes at level >= 0 and at most 1 for nodes at level -1.

All weights are exact Fractions, so the threshold comparisons that drive
level changes are never subject to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .audit import AuditReport
from .core import DynamicGraph, Edge, EventKind, UpdateEvent, edge_key
from .params import Params


@dataclass
class ChangeLog:
    """Exact delta of one level_update call, consumed by the skeleton cascade."""

    level_moves: list[tuple[int, int, int]] = field(default_factory=list)
    # (edge, old_level, new_level); None marks absence (insert/delete).
    bucket_moves: list[tuple[Edge, int | None, int | None]] = field(
        default_factory=list
    )
    touched: set[int] = field(default_factory=set)


class LevelPartition:
    """Levels, buckets and weights for one graph instance.

    `level_update` must be called after the event has been applied to the
    underlying graph; the partition keeps its own degree counters and only
    reads the graph's adjacency when a node changes level.
    """

    def __init__(self, params: Params, g: DynamicGraph):
        self.params = params
        self.g = g
        self.L = params.L
        self.d = [params.d_of(i) for i in range(self.L + 1)]
        self.low = 1 / (params.alpha * params.beta)
        self.level = [-1] * g.n
        self.bucket: list[set[Edge]] = [set() for _ in range(self.L + 1)]
        self.edge_level: dict[Edge, int] = {}
        self.deg = [[0] * (self.L + 1) for _ in range(g.n)]
        self.weight = [Fraction(0)] * g.n
        self.edge_touches = 0

    def deg_at(self, v: int, i: int) -> int:
        return self.deg[v][i]

    def _place(self, e: Edge, lev: int, log: ChangeLog, old: int | None) -> None:
        u, v = e
        self.bucket[lev].add(e)
        self.edge_level[e] = lev
        w = 1 / self.d[lev]
        for x in (u, v):
            self.deg[x][lev] += 1
            self.weight[x] += w
        log.bucket_moves.append((e, old, lev))
        self.edge_touches += 1

    def _remove(self, e: Edge, log: ChangeLog, new: int | None) -> int:
        lev = self.edge_level.pop(e)
        self.bucket[lev].remove(e)
        w = 1 / self.d[lev]
        for x in e:
            self.deg[x][lev] -= 1
            self.weight[x] -= w
        if new is None:
            log.bucket_moves.append((e, lev, None))
        self.edge_touches += 1
        return lev

    def _set_level(self, v: int, new: int, log: ChangeLog) -> None:
        old = self.level[v]
        self.level[v] = new
        log.level_moves.append((v, old, new))
        log.touched.add(v)
        for w in self.g.adjacency[v]:
            e = edge_key(v, w)
            lev = self.edge_level.get(e)
            if lev is None:
                # the edge being inserted right now; placed by the caller
                continue
            want = max(new, self.level[w], 0)
            if want != lev:
                self._remove(e, log, want)
                self._place(e, want, log, lev)
                log.touched.add(w)

    def _settle(self, log: ChangeLog) -> None:
        work = set(log.touched)
        while work:
            raise_c = [v for v in work if self.weight[v] > 1]
            if raise_c:
                v = min(raise_c, key=lambda x: (-self.level[x], x))
                if self.level[v] >= self.L:
                    raise AssertionError(f"node {v} forced above top level")
                self._set_level(v, self.level[v] + 1, log)
                work |= set(self.g.adjacency[v])
                continue
            lower_c = [
                v for v in work if self.level[v] >= 0 and self.weight[v] < self.low
            ]
            if lower_c:
                v = min(lower_c, key=lambda x: (-self.level[x], x))
                self._set_level(v, self.level[v] - 1, log)
                work |= set(self.g.adjacency[v])
                continue
            break

    def level_update(self, ev: UpdateEvent) -> ChangeLog:
        log = ChangeLog()
        u, v = ev.edge
        if ev.kind is EventKind.INSERT:
            if self.level[u] < 0 and self.level[v] < 0:
                # Invariant 1: at least one endpoint must sit at level >= 0.
                self._set_level(min(u, v), 0, log)
            lev = max(self.level[u], self.level[v])
            self._place(ev.edge, lev, log, None)
        else:
            self._remove(ev.edge, log, None)
        log.touched.update((u, v))
        self._settle(log)
        return log

    def fractional_value(self) -> Fraction:
        return sum(
            (Fraction(len(b)) / self.d[i] for i, b in enumerate(self.bucket)),
            Fraction(0),
        )


def check_partition_invariants(p: LevelPartition, g: DynamicGraph) -> AuditReport:
    rep = AuditReport("partition")
    for name in (
        "inv1-no-level-minus1-edges",
        "bucket-is-max-endpoint-level",
        "degree-counters-consistent",
        "weights-consistent",
        "inv2-upper",
        "inv2-lower",
        "degree-threshold",
        "double-counting",
    ):
        rep.clause(name)

    deg = [[0] * (p.L + 1) for _ in range(g.n)]
    live = set()
    for e in g.edges():
        u, v = e
        lev = p.edge_level.get(e)
        live.add(e)
        if lev is None:
            rep.fail("bucket-is-max-endpoint-level", f"edge {e} missing from buckets")
            continue
        want = max(p.level[u], p.level[v])
        if want < 0:
            rep.fail("inv1-no-level-minus1-edges", f"edge {e}")
        elif lev != want:
            rep.fail(
                "bucket-is-max-endpoint-level", f"edge {e} at {lev}, expected {want}"
            )
        deg[u][lev] += 1
        deg[v][lev] += 1
    for e in p.edge_level:
        if e not in live:
            rep.fail("bucket-is-max-endpoint-level", f"stale bucketed edge {e}")

    total_w = Fraction(0)
    for v in range(g.n):
        if p.deg[v] != deg[v]:
            rep.fail("degree-counters-consistent", f"node {v}")
        w = sum(
            (Fraction(deg[v][i]) / p.d[i] for i in range(p.L + 1)), Fraction(0)
        )
        total_w += w
        if w != p.weight[v]:
            rep.fail("weights-consistent", f"node {v}: cached {p.weight[v]} != {w}")
        if w > 1:
            rep.fail("inv2-upper", f"node {v}: W={w}")
        if p.level[v] >= 0 and w < p.low:
            rep.fail("inv2-lower", f"node {v} at level {p.level[v]}: W={w}")
        for i in range(p.L + 1):
            if deg[v][i] > p.d[i]:
                rep.fail("degree-threshold", f"node {v} level {i}: {deg[v][i]}")

    if p.fractional_value() * 2 != total_w:
        rep.fail("double-counting", f"w(E)*2={p.fractional_value() * 2} != {total_w}")
    return rep

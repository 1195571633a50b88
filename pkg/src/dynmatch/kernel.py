"""Bipartite kernel pipeline: tight nodes, kernel edges and residual edges.

A kernel (T, H) keeps deg(v, H) <= d everywhere, >= (1-eps_k)*d on the
tight set T, and forces every live edge between two non-tight nodes into
H.  Non-tight nodes are classified big/small by their kernel degree with
a hysteresis band, the residual candidates E^r are the live tight-small
edges, and M^r is a maximal sub-b-matching of E^r with capacity 1 at
tight nodes and 2 at small nodes.  H u M^r is what the bounded-degree
matcher consumes.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Sequence

from .audit import AuditReport
from .core import DynamicGraph, Edge, EventKind, UpdateEvent, edge_key


class KernelState:
    def __init__(
        self,
        n: int,
        side: Sequence[int],
        d: int | None = None,
        eps_k: Fraction = Fraction(1, 2000),
        delta_k: Fraction = Fraction(1, 20),
    ):
        self.n = n
        self.side = list(side)
        self.d = d if d is not None else max(1, int(n**0.5))
        self.eps_k = Fraction(eps_k)
        self.delta_k = Fraction(delta_k)
        self.tight_floor = (1 - self.eps_k) * self.d
        self.small_cap = 2 * self.delta_k * self.d / (1 - self.delta_k)
        self.big_floor = (2 * self.delta_k - self.eps_k) * self.d / (1 - self.delta_k)

        self.adj: dict[int, set[int]] = defaultdict(set)
        self.H: set[Edge] = set()
        self.degH: dict[int, int] = defaultdict(int)
        self.tight: set[int] = set()
        self.big: set[int] = set()  # small = non-tight, non-big
        self.Mr: set[Edge] = set()
        self.degMr: dict[int, int] = defaultdict(int)
        self.edge_touches = 0

    # -- classes ---------------------------------------------------------

    def is_small(self, v: int) -> bool:
        return v not in self.tight and v not in self.big

    def _reclassify(self, v: int) -> None:
        """Hysteresis: flip big/small only outside the closed overlap band."""
        if v in self.tight:
            return
        deg = self.degH.get(v, 0)
        if v in self.big:
            if deg < self.big_floor:
                self.big.discard(v)
        elif deg > self.small_cap:
            self.big.add(v)

    def _enter_nontight(self, v: int) -> None:
        if self.degH.get(v, 0) > self.small_cap:
            self.big.add(v)
        else:
            self.big.discard(v)

    # -- kernel edge moves -------------------------------------------------

    def _h_add(self, e: Edge) -> None:
        self.H.add(e)
        self.edge_touches += 1
        for x in e:
            self.degH[x] += 1
        for x in e:
            if x not in self.tight and self.degH[x] == self.d:
                self.tight.add(x)
                self.big.discard(x)
            else:
                self._reclassify(x)

    def _h_remove(self, e: Edge) -> None:
        self.H.remove(e)
        self.edge_touches += 1
        for x in e:
            self.degH[x] -= 1
            self._reclassify(x)

    def _refill(self, x: int) -> None:
        """Tight node fell below its floor: rescan incident live edges."""
        for y in sorted(self.adj[x]):
            if self.degH[x] >= self.d:
                break
            e = edge_key(x, y)
            if e in self.H:
                continue
            if self.degH.get(y, 0) < self.d:
                self._h_add(e)
        if self.degH[x] < self.tight_floor:
            self.tight.discard(x)
            self._enter_nontight(x)

    # -- events -----------------------------------------------------------

    def apply(self, ev: UpdateEvent) -> None:
        u, v = ev.edge
        if self.side[u] == self.side[v]:
            raise ValueError(f"non-bipartite edge {ev.edge}")
        if ev.kind is EventKind.INSERT:
            self.adj[u].add(v)
            self.adj[v].add(u)
            if u not in self.tight and v not in self.tight:
                self._h_add(ev.edge)
        else:
            self.adj[u].remove(v)
            self.adj[v].remove(u)
            if ev.edge in self.H:
                self._h_remove(ev.edge)
                for x in ev.edge:
                    if x in self.tight and self.degH[x] < self.tight_floor:
                        self._refill(x)
        self._repair_residual()

    # -- residual edges ----------------------------------------------------

    def residual_candidates(self) -> set[Edge]:
        out: set[Edge] = set()
        for x in self.tight:
            for y in self.adj[x]:
                if self.is_small(y):
                    out.add(edge_key(x, y))
        return out

    def _cap(self, v: int) -> int:
        if v in self.tight:
            return 1
        if self.is_small(v):
            return 2
        return 0

    def _repair_residual(self) -> None:
        er = self.residual_candidates()
        self.edge_touches += len(er)
        kept = sorted(self.Mr & er)
        self.Mr.clear()
        self.degMr.clear()
        for e in kept:
            if all(self.degMr[x] < self._cap(x) for x in e):
                self.Mr.add(e)
                for x in e:
                    self.degMr[x] += 1
        for e in sorted(er - self.Mr):
            if all(self.degMr[x] < self._cap(x) for x in e):
                self.Mr.add(e)
                for x in e:
                    self.degMr[x] += 1

    def kernel_edges(self) -> set[Edge]:
        return self.H | self.Mr


def check_kernel_invariants(st: KernelState, g: DynamicGraph) -> AuditReport:
    rep = AuditReport("kernel")
    for name in (
        "k1-degree-cap",
        "k2-tight-floor",
        "k3-nontight-edges-in-H",
        "H-live",
        "degree-counters",
        "bs-small-cap",
        "bs-big-floor",
        "bs-disjoint",
        "residual-subset",
        "residual-caps",
        "residual-maximal",
        "combined-degree-cap",
    ):
        rep.clause(name)

    degh: dict[int, int] = defaultdict(int)
    for e in st.H:
        u, v = e
        if not g.has_edge(u, v):
            rep.fail("H-live", f"edge {e}")
        degh[u] += 1
        degh[v] += 1
    for v in range(st.n):
        if degh.get(v, 0) != st.degH.get(v, 0):
            rep.fail("degree-counters", f"node {v}")
        if degh.get(v, 0) > st.d:
            rep.fail("k1-degree-cap", f"node {v}: {degh.get(v, 0)}")
        if v in st.tight and degh.get(v, 0) < st.tight_floor:
            rep.fail("k2-tight-floor", f"node {v}: {degh.get(v, 0)}")
        if v in st.tight and v in st.big:
            rep.fail("bs-disjoint", f"node {v}")
        if st.is_small(v) and degh.get(v, 0) > st.small_cap:
            rep.fail("bs-small-cap", f"node {v}: {degh.get(v, 0)}")
        if v in st.big and degh.get(v, 0) < st.big_floor:
            rep.fail("bs-big-floor", f"node {v}: {degh.get(v, 0)}")
    for e in g.edges():
        u, v = e
        if u not in st.tight and v not in st.tight and e not in st.H:
            rep.fail("k3-nontight-edges-in-H", f"edge {e}")

    er = st.residual_candidates()
    degmr: dict[int, int] = defaultdict(int)
    for e in st.Mr:
        if e not in er:
            rep.fail("residual-subset", f"edge {e}")
        for x in e:
            degmr[x] += 1
    for v, c in degmr.items():
        cap = 1 if v in st.tight else 2
        if c > cap:
            rep.fail("residual-caps", f"node {v}: {c} > {cap}")
    for e in sorted(er - st.Mr):
        if all(degmr.get(x, 0) < st._cap(x) for x in e):
            rep.fail("residual-maximal", f"admissible edge {e} left out")
    for v in set(degh) | set(degmr):
        if degh.get(v, 0) + degmr.get(v, 0) > st.d + 2:
            rep.fail("combined-degree-cap", f"node {v}")
    return rep

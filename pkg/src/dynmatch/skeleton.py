"""Per-level critical and laminar structures with degree-split skeletons.

Each instantiated level i maintains, over its edge bucket E_i:

  * a critical structure (A, P, D_c, H): active/passive node classes with
    hysteresis thresholds eps*d/L^2 and 3*eps*d/L^2, a c-dirty set D_c of
    nodes that crossed their class threshold, and H = all bucket edges
    touching an active node;
  * a laminar structure H_0 >= H_1 >= ... >= H_Ld produced by repeated
    degree splitting, with per-layer l-dirty sets D_l0 <= ... <= D_lLd
    recording nodes whose layer degrees left the halving band.

The exported skeleton is (B, T, S, X) with S = D_c u D_lLd and X = H_Ld.

Degree splitting cannot halve within a multiplicative band at very small
degrees (a clean node of layer degree 1 has no admissible integer image),
so every REBUILD ends with a sweep that moves band violators into the
l-dirty sets; when that pushes a layer over its cardinality budget the
rebuild escalates to an earlier layer and ultimately to a REVAMP.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from .audit import AuditReport
from .core import Edge, edge_key
from .params import Params

AUX = -1


def split(edges: Iterable[Edge]) -> list[Edge]:
    """Keep alternate edges of an Euler tour; every node keeps deg/2 +- 1.

    An auxiliary node is joined to all odd-degree nodes so every node of
    the augmented graph has even degree; tours start at the auxiliary node
    when present (anchoring the odd-circuit parity slack there) and at the
    smallest node id otherwise.  Deterministic for a fixed edge set.
    """
    es = sorted(edge_key(u, v) for u, v in edges)
    if not es:
        return []
    deg: dict[int, int] = defaultdict(int)
    for u, v in es:
        deg[u] += 1
        deg[v] += 1
    all_edges: list[Edge] = list(es)
    for v in sorted(deg):
        if deg[v] % 2:
            all_edges.append((AUX, v))
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for eid, (u, v) in enumerate(all_edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    for lst in adj.values():
        lst.sort()

    used = [False] * len(all_edges)
    ptr: dict[int, int] = defaultdict(int)
    visited: set[int] = set()
    kept: list[Edge] = []
    starts = [AUX] if AUX in adj else []
    starts += sorted(x for x in adj if x != AUX)
    for s in starts:
        if s in visited:
            continue
        circuit: list[int] = []
        stack: list[tuple[int, int | None]] = [(s, None)]
        while stack:
            v, ein = stack[-1]
            visited.add(v)
            advanced = False
            while ptr[v] < len(adj[v]):
                w, eid = adj[v][ptr[v]]
                ptr[v] += 1
                if not used[eid]:
                    used[eid] = True
                    stack.append((w, eid))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if ein is not None:
                    circuit.append(ein)
        for k in range(0, len(circuit), 2):
            eid = circuit[k]
            if eid < len(es):
                kept.append(all_edges[eid])
    return sorted(kept)


class LevelSkeletonState:
    """Critical + laminar machinery for one level's bucket graph."""

    def __init__(self, params: Params, i: int):
        info = params.level_info(i)
        self.i = i
        self.d: Fraction = info.d
        self.Ld: int = info.n_layers
        self.lam: Fraction = info.lam
        self.eps = params.eps
        self.gamma = params.gamma
        self.delta = params.delta
        self.L = params.L
        self.target = params.skel_target
        self.thr_active = self.eps * self.d / (self.L * self.L)
        self.thr_passive = 3 * self.thr_active
        self.eta = 1 + Fraction(self.gamma) / self.Ld

        self.active: set[int] = set()
        self.dirty_c: set[int] = set()
        self.adj: dict[int, set[int]] = defaultdict(set)
        self.m = 0
        self.H: list[set[Edge]] = [set() for _ in range(self.Ld + 1)]
        self.degH: list[dict[int, int]] = [
            defaultdict(int) for _ in range(self.Ld + 1)
        ]
        self.dirty_l: list[set[int]] = [set() for _ in range(self.Ld + 1)]

        self.split_calls = 0
        self.rebuild_calls = 0
        self.revamp_calls = 0
        self.edge_touches = 0
        self.halving_violations: list[str] = []
        self.last_layer_dirty = False
        self._blocked: tuple[int, ...] | None = None

    # -- degree helpers ------------------------------------------------

    def deg_e(self, v: int) -> int:
        return len(self.adj[v]) if v in self.adj else 0

    def _layer_add(self, j: int, e: Edge) -> None:
        self.H[j].add(e)
        for x in e:
            self.degH[j][x] += 1
        self.edge_touches += 1
        if j == self.Ld:
            self.last_layer_dirty = True

    def _layer_remove(self, j: int, e: Edge) -> None:
        self.H[j].remove(e)
        for x in e:
            self.degH[j][x] -= 1
        self.edge_touches += 1
        if j == self.Ld:
            self.last_layer_dirty = True

    # -- event entry points ---------------------------------------------

    def apply_insert(self, e: Edge) -> None:
        u, v = e
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1
        if u in self.active or v in self.active:
            self._layer_add(0, e)
        self._steps(e)

    def apply_delete(self, e: Edge) -> None:
        u, v = e
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self.m -= 1
        for j in range(self.Ld + 1):
            if e in self.H[j]:
                self._layer_remove(j, e)
        self._steps(e)

    def _steps(self, e: Edge) -> None:
        # Step I: threshold crossings become c-dirty marks.
        newdirty = []
        for x in e:
            if x in self.dirty_c:
                continue
            deg = self.deg_e(x)
            if x in self.active:
                if deg <= self.thr_active:
                    self.dirty_c.add(x)
                    newdirty.append(x)
            elif deg >= self.thr_passive:
                self.dirty_c.add(x)
                newdirty.append(x)
        # Step II: terminate the phase when D_c outgrows its budget.
        if len(self.dirty_c) * (self.Ld + 1) > self.delta * len(self.active):
            self.revamp()
            return
        # Step III: propagate dirt to every layer, then repair lazily.
        for x in newdirty:
            if x in self.active:
                for j in range(self.Ld + 1):
                    self.dirty_l[j].add(x)
        self.cleanup(e[0])
        self.cleanup(e[1])
        self.verify()

    # -- laminar repair --------------------------------------------------

    def _band_ok(self, v: int, j: int) -> bool:
        a = self.degH[j - 1].get(v, 0)
        b = self.degH[j].get(v, 0)
        return 2 * self.eta * b >= a and 2 * b <= self.eta * a

    def cleanup(self, x: int) -> None:
        if x not in self.active:
            return
        for j in range(1, self.Ld + 1):
            if x in self.dirty_l[j]:
                return
            if not self._band_ok(x, j):
                for k in range(j, self.Ld + 1):
                    self.dirty_l[k].add(x)
                return

    def _l4_threshold_ok(self, j: int) -> bool:
        return len(self.dirty_l[j]) * (self.Ld + 1) <= self.delta * (j + 1) * len(
            self.active
        )

    def _first_l4_violation(self) -> int | None:
        for j in range(1, self.Ld + 1):
            if not self._l4_threshold_ok(j):
                return j
        return None

    def verify(self) -> None:
        sizes = tuple(len(s) for s in self.dirty_l)
        if self._blocked == sizes:
            return
        self._blocked = None
        j = self._first_l4_violation()
        if j is not None:
            self._rebuild_repair(j, allow_revamp=True)

    def _rebuild(self, j: int) -> None:
        self.rebuild_calls += 1
        for k in range(j, self.Ld + 1):
            new = set(split(self.H[k - 1]))
            self.split_calls += 1
            self.edge_touches += len(self.H[k - 1]) + len(new)
            old_deg = self.degH[k - 1]
            ndeg: dict[int, int] = defaultdict(int)
            for u, v in new:
                ndeg[u] += 1
                ndeg[v] += 1
            for v in set(old_deg) | set(ndeg):
                a, b = old_deg.get(v, 0), ndeg.get(v, 0)
                if not (a - 2 <= 2 * b <= a + 2):
                    self.halving_violations.append(
                        f"level {self.i} layer {k} node {v}: {a} -> {b}"
                    )
            self.H[k] = new
            self.degH[k] = ndeg
            self.dirty_l[k] = set(self.dirty_l[j - 1])
        self.last_layer_dirty = True
        # Post-rebuild sweep: small-degree clean nodes whose split landed
        # outside the halving band are charged to the l-dirty sets.
        for k in range(max(1, j), self.Ld + 1):
            for v in sorted(self.active - self.dirty_l[k]):
                if not self._band_ok(v, k):
                    for m in range(k, self.Ld + 1):
                        self.dirty_l[m].add(v)

    def _rebuild_repair(self, j0: int, allow_revamp: bool) -> None:
        j = j0
        while True:
            self._rebuild(j)
            bad = self._first_l4_violation()
            if bad is None:
                self._blocked = None
                return
            if j > 1:
                j = min(j - 1, bad)
                continue
            if allow_revamp:
                self.revamp()
                return
            # Residual budget violation: freeze until the dirty sets move.
            self._blocked = tuple(len(s) for s in self.dirty_l)
            return

    def revamp(self) -> None:
        self.revamp_calls += 1
        for v in sorted(self.dirty_c):
            deg = self.deg_e(v)
            if v in self.active:
                if deg < self.thr_passive:
                    self.active.discard(v)
            elif deg > self.thr_active:
                self.active.add(v)
        self.dirty_c.clear()
        h0: set[Edge] = set()
        for v in self.active:
            for w in self.adj[v]:
                h0.add(edge_key(v, w))
        self.edge_touches += self.m + len(h0)
        self.H[0] = h0
        deg0: dict[int, int] = defaultdict(int)
        for u, v in h0:
            deg0[u] += 1
            deg0[v] += 1
        self.degH[0] = deg0
        self.dirty_l[0] = set()
        self._blocked = None
        self._rebuild_repair(1, allow_revamp=False)

    # -- skeleton export ---------------------------------------------------

    def spurious(self) -> set[int]:
        return self.dirty_c | self.dirty_l[self.Ld]

    def big_nodes(self) -> set[int]:
        s = self.spurious()
        return (self.active - s) | {v for v in s if self.deg_e(v) > self.thr_active}

    def last_layer(self) -> set[Edge]:
        return self.H[self.Ld]


def check_level_state(st: LevelSkeletonState, n: int) -> AuditReport:
    """Audit critical conditions, laminar invariants and skeleton conditions."""
    rep = AuditReport(f"level-{st.i}")
    for name in (
        "crit1-active-clean-degree",
        "crit2-passive-clean-degree",
        "crit3-cdirty-budget",
        "crit4-H-is-active-edges",
        "crit5-partition",
        "L1-laminar-nesting",
        "L2-dirty-containment",
        "L3-halving-band",
        "L4-dirty-budget",
        "layer-degree-bound",
        "degree-counters",
        "s1-BT-partition",
        "s2-big-degree",
        "s3-tiny-degree",
        "s4-spurious-budget",
        "s5-clean-scaling",
        "s6-skeleton-degree-cap",
        "s7-tiny-skeleton-degree",
    ):
        rep.clause(name)

    nodes = set(st.active) | set(st.dirty_c) | {v for v in st.adj if st.adj[v]}
    edges = {edge_key(u, v) for u in st.adj for v in st.adj[u]}

    for v in sorted(nodes):
        deg = st.deg_e(v)
        if v in st.active and v not in st.dirty_c and not deg > st.thr_active:
            rep.fail("crit1-active-clean-degree", f"node {v}: deg {deg}")
        if v not in st.active and v not in st.dirty_c and not deg < st.thr_passive:
            rep.fail("crit2-passive-clean-degree", f"node {v}: deg {deg}")
    if len(st.dirty_c) * (st.Ld + 1) > st.delta * len(st.active):
        rep.fail("crit3-cdirty-budget", f"|D_c|={len(st.dirty_c)} |A|={len(st.active)}")
    want_h = {e for e in edges if e[0] in st.active or e[1] in st.active}
    if st.H[0] != want_h:
        rep.fail(
            "crit4-H-is-active-edges",
            f"diff {sorted(st.H[0] ^ want_h)[:5]}",
        )
    if not st.active <= set(range(n)):
        rep.fail("crit5-partition", "active set contains foreign ids")

    for j in range(1, st.Ld + 1):
        if not st.H[j] <= st.H[j - 1]:
            rep.fail("L1-laminar-nesting", f"layer {j}: {sorted(st.H[j] - st.H[j-1])[:3]}")
        if not st.dirty_l[j - 1] <= st.dirty_l[j]:
            rep.fail("L2-dirty-containment", f"layer {j}")
    if st.dirty_l[0] != (st.active & st.dirty_c):
        rep.fail("L2-dirty-containment", "D_l0 != A & D_c")
    for j in range(st.Ld + 1):
        if not st.dirty_l[j] <= st.active:
            rep.fail("L2-dirty-containment", f"layer {j} dirty outside A")
        if len(st.dirty_l[j]) * (st.Ld + 1) > st.delta * (j + 1) * len(st.active):
            rep.fail(
                "L4-dirty-budget",
                f"layer {j}: {len(st.dirty_l[j])} vs |A|={len(st.active)}",
            )
    for j in range(1, st.Ld + 1):
        for v in sorted(st.active - st.dirty_l[j]):
            if not st._band_ok(v, j):
                a = st.degH[j - 1].get(v, 0)
                b = st.degH[j].get(v, 0)
                rep.fail("L3-halving-band", f"layer {j} node {v}: {a} -> {b}")

    for j in range(st.Ld + 1):
        recount: dict[int, int] = defaultdict(int)
        for u, v in st.H[j]:
            recount[u] += 1
            recount[v] += 1
        for v in set(recount) | {k for k, c in st.degH[j].items() if c}:
            if recount.get(v, 0) != st.degH[j].get(v, 0):
                rep.fail("degree-counters", f"layer {j} node {v}")
            bound = st.d / 2**j + 2
            if recount.get(v, 0) > bound:
                rep.fail(
                    "layer-degree-bound",
                    f"layer {j} node {v}: {recount.get(v, 0)} > {bound}",
                )
        if not st.H[j] <= edges:
            rep.fail("L1-laminar-nesting", f"layer {j} holds dead edges")

    s = st.spurious()
    big = st.big_nodes()
    x = st.H[st.Ld]
    degx: dict[int, int] = defaultdict(int)
    for u, v in x:
        degx[u] += 1
        degx[v] += 1
    scale = float(st.lam * st.target / st.d)
    lo, hi = math.exp(-float(st.gamma)), math.exp(float(st.gamma))
    for v in sorted(nodes | big):
        deg = st.deg_e(v)
        dx = degx.get(v, 0)
        if v in big:
            if not deg > st.thr_active:
                rep.fail("s2-big-degree", f"node {v}: deg {deg}")
        else:
            if not deg < st.thr_passive:
                rep.fail("s3-tiny-degree", f"node {v}: deg {deg}")
        if v in big and v not in s:
            if not (lo * scale * deg <= dx <= hi * scale * deg):
                rep.fail(
                    "s5-clean-scaling",
                    f"node {v}: deg(X)={dx} deg(E)={deg} scale={scale:.4f}",
                )
        if dx > st.lam * st.target + 2:
            rep.fail("s6-skeleton-degree-cap", f"node {v}: {dx}")
        if v not in big and v not in s:
            if dx > 3 * st.eps * st.lam * st.target / (st.L * st.L) + 2:
                rep.fail("s7-tiny-skeleton-degree", f"node {v}: {dx}")
    if len(s) * 1 > 4 * st.delta * len(big) and s:
        rep.fail("s4-spurious-budget", f"|S|={len(s)} |B|={len(big)}")
    # s1 is structural (T = V \ B) but assert the classes stay inside V.
    if not big <= set(range(n)):
        rep.fail("s1-BT-partition", "big set contains foreign ids")
    return rep

"""End-to-end pipelines and the replay driver that produces stats reports.

GeneralPipeline: level partition -> per-level skeletons -> candidate edge
set X u Y -> bounded-degree matcher.  KernelPipeline: bipartite kernel ->
H u M^r -> bounded-degree matcher.  `replay` runs a stream through either
pipeline with periodic invariant audits and oracle checkpoints and
returns a JSON-serializable report.
"""

from __future__ import annotations

import time
from collections import defaultdict
from fractions import Fraction
from typing import Optional

from .audit import AuditReport
from .core import DynamicGraph, Edge, EventKind, UpdateStream
from .degmatch import BoundedDegreeMatcher
from .kernel import KernelState, check_kernel_invariants
from .levels import LevelPartition, check_partition_invariants
from .oracle import greedy_maximal_edges, max_matching
from .params import Params, derive_params
from .skeleton import LevelSkeletonState, check_level_state


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class GeneralPipeline:
    def __init__(self, n: int, params: Params, eps_dm: Optional[Fraction] = None):
        self.n = n
        self.params = params
        self.g = DynamicGraph(n)
        self.partition = LevelPartition(params, self.g)
        self.states: dict[int, LevelSkeletonState] = {
            i: LevelSkeletonState(params, i) for i in params.skeleton_levels
        }
        self.x_mirror: dict[int, set[Edge]] = {i: set() for i in self.states}
        self.cand: set[Edge] = set()
        self.cand_deg: dict[int, int] = defaultdict(int)
        if params.levels:
            lam_max = max(lv.lam for lv in params.levels)
            bound = (params.L - params.Lprime + 1) * (
                lam_max * params.skel_target + 2
            ) + (params.Lprime + 1) * params.d_of(params.Lprime)
        else:
            bound = Fraction(n)
        self.cand_bound = min(_ceil_frac(Fraction(bound)), n - 1)
        self.matcher = BoundedDegreeMatcher(
            self.cand_bound, Fraction(eps_dm if eps_dm is not None else params.eps)
        )

    def _is_candidate(self, e: Edge) -> bool:
        lev = self.partition.edge_level.get(e)
        if lev is None:
            return False
        if lev < self.params.Lprime:
            return True
        return e in self.states[lev].H[self.states[lev].Ld]

    def apply(self, ev) -> None:
        self.g.apply_event(ev)
        log = self.partition.level_update(ev)

        # Coalesce per-edge bucket moves to their net effect, then feed the
        # per-level states deletions first so transient bucket degrees never
        # exceed the level threshold.
        first_old: dict[Edge, int | None] = {}
        last_new: dict[Edge, int | None] = {}
        order: list[Edge] = []
        for e, old, new in log.bucket_moves:
            if e not in first_old:
                first_old[e] = old
                order.append(e)
            last_new[e] = new
        for e in order:
            old = first_old[e]
            if old is not None and old != last_new[e] and old in self.states:
                self.states[old].apply_delete(e)
        for e in order:
            new = last_new[e]
            if new is not None and new != first_old[e] and new in self.states:
                self.states[new].apply_insert(e)

        changed: set[Edge] = set(order)
        for i, st in self.states.items():
            if st.last_layer_dirty:
                new_x = set(st.last_layer())
                changed |= new_x ^ self.x_mirror[i]
                self.x_mirror[i] = new_x
                st.last_layer_dirty = False

        adds: list[Edge] = []
        rems: list[Edge] = []
        for e in sorted(changed):
            want = self._is_candidate(e)
            have = e in self.cand
            if want and not have:
                adds.append(e)
            elif have and not want:
                rems.append(e)
        for e in rems:
            self.cand.discard(e)
            for x in e:
                self.cand_deg[x] -= 1
            self.matcher.apply(EventKind.DELETE, e)
        for e in adds:
            self.cand.add(e)
            for x in e:
                self.cand_deg[x] += 1
            self.matcher.apply(EventKind.INSERT, e)

    def audit(self) -> AuditReport:
        rep = AuditReport("general")
        rep.merge(check_partition_invariants(self.partition, self.g))
        for i in sorted(self.states):
            rep.merge(check_level_state(self.states[i], self.n))
        rep.clause("halving")
        for i, st in self.states.items():
            for w in st.halving_violations:
                rep.fail("halving", w)
        rep.clause("candidate-set")
        want = {
            e
            for e, lev in self.partition.edge_level.items()
            if lev < self.params.Lprime or e in self.states[lev].H[self.states[lev].Ld]
        }
        if want != self.cand:
            rep.fail("candidate-set", f"diff {sorted(want ^ self.cand)[:5]}")
        rep.clause("matching-valid")
        try:
            self.matcher.check()
        except AssertionError as exc:
            rep.fail("matching-valid", str(exc))
        rep.clause("candidate-degree-bound")
        for v, c in self.cand_deg.items():
            if c > self.cand_bound:
                rep.fail("candidate-degree-bound", f"node {v}: {c}")
        return rep

    def matching_size(self) -> int:
        return len(self.matcher.matching())

    def counters(self) -> dict:
        return {
            "edge_touches": self.partition.edge_touches
            + sum(st.edge_touches for st in self.states.values())
            + self.matcher.edge_touches,
            "split_calls": sum(st.split_calls for st in self.states.values()),
            "rebuild_calls": sum(st.rebuild_calls for st in self.states.values()),
            "revamp_calls": sum(st.revamp_calls for st in self.states.values()),
            "rebuilds": {
                "levels": 0,
                "skeleton": sum(st.rebuild_calls for st in self.states.values()),
                "degmatch": self.matcher.rebuild_count,
            },
        }


class KernelPipeline:
    def __init__(
        self,
        n: int,
        side: list[int],
        d: Optional[int] = None,
        eps_k: Fraction = Fraction(1, 2000),
        delta_k: Fraction = Fraction(1, 20),
        eps_dm: Fraction = Fraction(1, 3),
    ):
        self.n = n
        self.side = side
        self.g = DynamicGraph(n)
        self.kernel = KernelState(n, side, d=d, eps_k=eps_k, delta_k=delta_k)
        self.matcher = BoundedDegreeMatcher(self.kernel.d + 2, Fraction(eps_dm))
        self.mirror: set[Edge] = set()

    def apply(self, ev) -> None:
        self.g.apply_event(ev)
        self.kernel.apply(ev)
        new = self.kernel.kernel_edges()
        for e in sorted(self.mirror - new):
            self.matcher.apply(EventKind.DELETE, e)
        for e in sorted(new - self.mirror):
            self.matcher.apply(EventKind.INSERT, e)
        self.mirror = new

    def audit(self) -> AuditReport:
        rep = AuditReport("kernel-run")
        rep.merge(check_kernel_invariants(self.kernel, self.g))
        rep.clause("matching-valid")
        try:
            self.matcher.check()
        except AssertionError as exc:
            rep.fail("matching-valid", str(exc))
        return rep

    def matching_size(self) -> int:
        return len(self.matcher.matching())

    def counters(self) -> dict:
        return {
            "edge_touches": self.kernel.edge_touches + self.matcher.edge_touches,
            "split_calls": 0,
            "rebuild_calls": 0,
            "revamp_calls": 0,
            "rebuilds": {"levels": 0, "skeleton": 0, "degmatch": self.matcher.rebuild_count},
        }


def replay(
    stream: UpdateStream,
    algo: str = "general",
    eps: Fraction = Fraction(1, 3),
    gamma: Optional[Fraction] = None,
    delta: Optional[Fraction] = None,
    skel_target: Optional[Fraction] = None,
    d: Optional[int] = None,
    eps_k: Fraction = Fraction(1, 2000),
    delta_k: Fraction = Fraction(1, 20),
    eps_dm: Optional[Fraction] = None,
    audit_every: int = 100,
    oracle_every: int = 25,
    with_audits: bool = True,
    with_oracle: bool = True,
    timings: bool = False,
) -> dict:
    """Replay a stream and return the stats report dictionary."""
    if audit_every < 1 or oracle_every < 1:
        raise ValueError("cadences must be >= 1")
    t0 = time.monotonic()
    flags: list[str] = []
    if algo == "general":
        params = derive_params(
            stream.n, Fraction(eps), gamma=gamma, delta=delta, skel_target=skel_target
        )
        pipe: GeneralPipeline | KernelPipeline = GeneralPipeline(
            stream.n, params, eps_dm=eps_dm
        )
        flags.extend(params.deviation_flags)
        eps_m = pipe.matcher.eps
        bound = params.general_ratio_bound()
        assert_ratio = params.preconditions_ok and not flags
        fallback = float(2 * (1 + eps_m) / (1 - eps_m)) if eps_m < 1 else None
        footer_params = params.to_dict()
        side = stream.side
    elif algo == "kernel":
        if not stream.bipartite or stream.side is None:
            raise ValueError("algo=kernel requires a bipartite stream")
        if eps_k != Fraction(1, 2000):
            flags.append("eps-k-override")
        if delta_k != Fraction(1, 20):
            flags.append("delta-k-override")
        default_d = max(1, int(stream.n**0.5))
        if d is not None and d != default_d:
            flags.append("d-override")
        pipe = KernelPipeline(
            stream.n,
            stream.side,
            d=d,
            eps_k=eps_k,
            delta_k=delta_k,
            eps_dm=eps_dm if eps_dm is not None else Fraction(1, 3),
        )
        eps_m = pipe.matcher.eps
        bound = float(2 * (1 + eps_m) / (1 + Fraction(delta_k) / 4))
        assert_ratio = True
        fallback = None
        footer_params = {
            "n": stream.n,
            "d": pipe.kernel.d,
            "eps_k": str(eps_k),
            "delta_k": str(delta_k),
            "eps_dm": str(eps_m),
        }
        side = stream.side
    else:
        raise ValueError(f"unknown algo {algo!r}")

    checkpoints: list[dict] = []
    failures = 0
    total = len(stream.events)
    event_times: list[float] = []
    for ev in stream:
        if timings:
            te = time.perf_counter()
            pipe.apply(ev)
            event_times.append(time.perf_counter() - te)
        else:
            pipe.apply(ev)
        idx = ev.seq
        last = idx == total - 1
        do_audit = with_audits and ((idx + 1) % audit_every == 0 or last)
        do_oracle = with_oracle and ((idx + 1) % oracle_every == 0 or last)
        if not (do_audit or do_oracle):
            continue
        rec: dict = {
            "event_index": idx,
            "matching_size": pipe.matching_size(),
            "oracle_size": None,
            "ratio": None,
            "theoretical_ratio_bound": bound,
            "ratio_asserted": assert_ratio,
            "audit": None,
            "work_counters": pipe.counters(),
        }
        if do_audit:
            rep = pipe.audit()
            rec["audit"] = rep.to_dict()
            if not rep.passed:
                failures += 1
        if do_oracle:
            opt = len(max_matching(pipe.g, side))
            rec["oracle_size"] = opt
            size = rec["matching_size"]
            r = opt / max(1, size)
            rec["ratio"] = r
            if assert_ratio and bound is not None and r > bound:
                failures += 1
                rec["ratio_violation"] = True
            if algo == "general" and fallback is not None:
                rec["fallback_ratio_bound"] = fallback
                rec["fallback_ratio_ok"] = r <= fallback
        checkpoints.append(rec)
    if not checkpoints:
        checkpoints.append(
            {
                "event_index": -1,
                "matching_size": 0,
                "oracle_size": 0,
                "ratio": 1.0,
                "theoretical_ratio_bound": bound,
                "ratio_asserted": assert_ratio,
                "audit": None,
                "work_counters": pipe.counters(),
            }
        )

    if algo == "general":
        ok = params.preconditions_ok
    else:
        ok = True
    result_extra: dict = {}
    if timings and event_times:
        ts = sorted(event_times)
        pct = lambda q: ts[min(len(ts) - 1, int(q * len(ts)))]  # noqa: E731
        result_extra["event_time_percentiles"] = {
            "p50": pct(0.50),
            "p90": pct(0.90),
            "p99": pct(0.99),
            "mean": sum(ts) / len(ts),
        }
    return result_extra | {
        "algo": algo,
        "events": total,
        "checkpoints": checkpoints,
        "parameters": footer_params,
        "preconditions_ok": ok,
        "deviation_flags": flags,
        "audit_failures": failures,
        "wall_time_s": time.monotonic() - t0,
    }


def greedy_candidate_size(pipe: GeneralPipeline) -> int:
    """Size of a deterministic maximal matching on the candidate set."""
    return len(greedy_maximal_edges(pipe.cand))

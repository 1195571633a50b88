"""Deterministic update-stream generators for benchmarks and tests."""

from __future__ import annotations

import random
from collections import deque
from typing import Optional

from .core import Edge, EventKind, UpdateEvent, UpdateStream, edge_key

KINDS = ("random", "sliding-window", "delete-heavy", "bipartite-random")


def _pick_new_edge(
    rng: random.Random,
    n: int,
    live: set[Edge],
    side: Optional[list[int]] = None,
    max_degree: Optional[int] = None,
    deg: Optional[list[int]] = None,
) -> Optional[Edge]:
    for _ in range(400):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        if side is not None and side[u] == side[v]:
            continue
        e = edge_key(u, v)
        if e in live:
            continue
        if max_degree is not None and deg is not None:
            if deg[u] >= max_degree or deg[v] >= max_degree:
                continue
        return e
    return None


def generate_stream(
    kind: str,
    n: int,
    events: int,
    seed: int,
    density: float = 4.0,
    window: Optional[int] = None,
    max_degree: Optional[int] = None,
) -> UpdateStream:
    """Build a validated stream; byte-reproducible for a fixed seed."""
    if kind not in KINDS:
        raise ValueError(f"unknown stream kind {kind!r}")
    if n < 2 or events < 0:
        raise ValueError("need n >= 2 and events >= 0")
    rng = random.Random(seed)
    bipartite = kind == "bipartite-random"
    side: Optional[list[int]] = None
    if bipartite:
        side = [rng.randint(0, 1) for _ in range(n)]
        side[0], side[1] = 0, 1  # both sides nonempty
    target = max(1, int(density * n / 2))
    if window is None:
        window = target

    live: set[Edge] = set()
    fifo: deque[Edge] = deque()
    deg = [0] * n
    out: list[UpdateEvent] = []

    def emit(kind_: EventKind, e: Edge) -> None:
        u, v = e
        if kind_ is EventKind.INSERT:
            live.add(e)
            fifo.append(e)
            deg[u] += 1
            deg[v] += 1
        else:
            live.remove(e)
            deg[u] -= 1
            deg[v] -= 1
        out.append(UpdateEvent(kind_, e, len(out)))

    while len(out) < events:
        if kind == "sliding-window":
            want_insert = len(live) < window
        elif kind == "delete-heavy":
            warmup = len(out) < int(events * 0.4)
            p = 0.9 if warmup else 0.3
            want_insert = not live or rng.random() < p
        else:
            if not live:
                want_insert = True
            else:
                p = 0.5 + 0.5 * (target - len(live)) / target
                want_insert = rng.random() < max(0.05, min(0.95, p))
        if want_insert:
            e = _pick_new_edge(rng, n, live, side=side, max_degree=max_degree, deg=deg)
            if e is not None:
                emit(EventKind.INSERT, e)
                continue
            if not live:
                raise ValueError("cannot place any edge with the given constraints")
        if kind == "sliding-window":
            while fifo and fifo[0] not in live:
                fifo.popleft()
            e = fifo.popleft()
        else:
            e = rng.choice(sorted(live))
        emit(EventKind.DELETE, e)

    return UpdateStream(n=n, bipartite=bipartite, side=side, events=out)

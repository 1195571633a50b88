"""Dynamic simple-graph representation and the edge-update stream format."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) key for an undirected edge."""
    if u == v:
        raise ValueError(f"self-loop ({u},{v})")
    return (u, v) if u < v else (v, u)


class EventKind(Enum):
    INSERT = "+"
    DELETE = "-"


@dataclass(frozen=True)
class UpdateEvent:
    kind: EventKind
    edge: Edge
    seq: int


class StreamError(ValueError):
    """Raised on malformed or invariant-violating stream text."""


@dataclass
class UpdateStream:
    n: int
    bipartite: bool
    side: Optional[list[int]]  # per-node 0/1, bipartite only
    events: list[UpdateEvent] = field(default_factory=list)

    def __iter__(self) -> Iterator[UpdateEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)


HEADER = "dynmatch-stream v1"


def parse_stream(text: str | bytes) -> UpdateStream:
    """Parse and validate stream text.

    Checks the grammar line by line, then replays the events to enforce
    the presence invariants (no duplicate insert, no delete of an absent
    edge) and, for bipartite streams, that every edge crosses the sides.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    pos = 0

    def next_line() -> tuple[int, str]:
        nonlocal pos
        while pos < len(lines):
            raw = lines[pos]
            pos += 1
            s = raw.strip()
            if s and not s.startswith("#"):
                return pos, s
        return 0, ""

    lineno, line = next_line()
    if line != HEADER:
        raise StreamError(f"line {lineno or 1}: expected header {HEADER!r}")

    lineno, line = next_line()
    parts = line.split()
    if len(parts) != 3 or parts[0] != "n" or parts[2] not in ("general", "bipartite"):
        raise StreamError(f"line {lineno}: expected 'n <N> <general|bipartite>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise StreamError(f"line {lineno}: bad node count {parts[1]!r}") from None
    if n < 1:
        raise StreamError(f"line {lineno}: node count must be >= 1")
    bipartite = parts[2] == "bipartite"

    side: Optional[list[int]] = None
    events: list[UpdateEvent] = []
    live: set[Edge] = set()
    seq = 0

    if bipartite:
        side = [-1] * n
        while True:
            lineno, line = next_line()
            if not line.startswith("side"):
                break
            parts = line.split()
            if len(parts) != 3:
                raise StreamError(f"line {lineno}: expected 'side <v> <0|1>'")
            v, b = int(parts[1]), int(parts[2])
            if not (0 <= v < n) or b not in (0, 1):
                raise StreamError(f"line {lineno}: bad side record")
            side[v] = b
        missing = [v for v in range(n) if side[v] < 0]
        if missing:
            raise StreamError(f"bipartite stream missing side for node {missing[0]}")
    else:
        lineno, line = next_line()

    # `line` now holds the first event record (or "" at EOF).
    while line:
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("+", "-"):
            raise StreamError(f"line {lineno}: expected '+ u v' or '- u v'")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise StreamError(f"line {lineno}: bad node id") from None
        if not (0 <= u < n and 0 <= v < n):
            raise StreamError(f"line {lineno}: node id out of range [0,{n})")
        if u == v:
            raise StreamError(f"line {lineno}: self-loop")
        e = edge_key(u, v)
        kind = EventKind.INSERT if parts[0] == "+" else EventKind.DELETE
        if kind is EventKind.INSERT:
            if e in live:
                raise StreamError(f"line {lineno}: duplicate insert at event {seq}")
            if bipartite and side is not None and side[e[0]] == side[e[1]]:
                raise StreamError(f"line {lineno}: edge inside one side at event {seq}")
            live.add(e)
        else:
            if e not in live:
                raise StreamError(f"line {lineno}: delete of absent edge at event {seq}")
            live.remove(e)
        events.append(UpdateEvent(kind, e, seq))
        seq += 1
        lineno, line = next_line()

    return UpdateStream(n=n, bipartite=bipartite, side=side, events=events)


def format_stream(stream: UpdateStream) -> str:
    out = [HEADER, f"n {stream.n} {'bipartite' if stream.bipartite else 'general'}"]
    if stream.bipartite and stream.side is not None:
        out.extend(f"side {v} {b}" for v, b in enumerate(stream.side))
    for ev in stream.events:
        out.append(f"{ev.kind.value} {ev.edge[0]} {ev.edge[1]}")
    return "\n".join(out) + "\n"


class DynamicGraph:
    """Adjacency-set graph over a fixed node set [0, n)."""

    def __init__(self, n: int):
        self.n = n
        self.adjacency: list[set[int]] = [set() for _ in range(n)]
        self.m = 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def apply_event(self, ev: UpdateEvent) -> None:
        u, v = ev.edge
        if ev.kind is EventKind.INSERT:
            if v in self.adjacency[u]:
                raise ValueError(f"insert of live edge {ev.edge} at event {ev.seq}")
            self.adjacency[u].add(v)
            self.adjacency[v].add(u)
            self.m += 1
        else:
            if v not in self.adjacency[u]:
                raise ValueError(f"delete of absent edge {ev.edge} at event {ev.seq}")
            self.adjacency[u].remove(v)
            self.adjacency[v].remove(u)
            self.m -= 1

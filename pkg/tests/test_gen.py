"""Stream generators: validity, determinism, per-kind shape properties."""

import pytest

from dynmatch.core import EventKind, format_stream, parse_stream
from dynmatch.gen import KINDS, generate_stream


@pytest.mark.parametrize("kind", KINDS)
def test_generated_streams_parse_back(kind):
    stream = generate_stream(kind, 25, 400, seed=1)
    back = parse_stream(format_stream(stream))
    assert len(back.events) == 400
    assert back.bipartite == (kind == "bipartite-random")


@pytest.mark.parametrize("kind", KINDS)
def test_byte_reproducible(kind):
    a = format_stream(generate_stream(kind, 20, 300, seed=42))
    b = format_stream(generate_stream(kind, 20, 300, seed=42))
    assert a == b
    c = format_stream(generate_stream(kind, 20, 300, seed=43))
    assert a != c


def test_max_degree_respected():
    stream = generate_stream("random", 20, 500, seed=5, density=8.0, max_degree=4)
    deg = [0] * 20
    for ev in stream:
        u, v = ev.edge
        if ev.kind is EventKind.INSERT:
            deg[u] += 1
            deg[v] += 1
            assert deg[u] <= 4 and deg[v] <= 4
        else:
            deg[u] -= 1
            deg[v] -= 1


def test_sliding_window_caps_live_edges():
    stream = generate_stream("sliding-window", 15, 400, seed=2, window=10)
    live = set()
    for ev in stream:
        if ev.kind is EventKind.INSERT:
            live.add(ev.edge)
        else:
            live.remove(ev.edge)
        assert len(live) <= 10


def test_delete_heavy_shrinks_after_warmup():
    stream = generate_stream("delete-heavy", 30, 1000, seed=3, density=10.0)
    size = 0
    peak = 0
    for ev in stream:
        size += 1 if ev.kind is EventKind.INSERT else -1
        if ev.seq < 400:
            peak = max(peak, size)
    assert size < peak


def test_bipartite_sides_nonempty_and_crossing():
    stream = generate_stream("bipartite-random", 12, 200, seed=7)
    assert 0 in stream.side and 1 in stream.side
    for ev in stream.events:
        u, v = ev.edge
        assert stream.side[u] != stream.side[v]


def test_input_validation():
    with pytest.raises(ValueError, match="unknown stream kind"):
        generate_stream("zipf", 10, 10, seed=0)
    with pytest.raises(ValueError):
        generate_stream("random", 1, 10, seed=0)
    with pytest.raises(ValueError, match="cannot place"):
        generate_stream("random", 2, 10, seed=0, max_degree=0)

"""Stream grammar, presence replay, and the dynamic graph container."""

import pytest

from dynmatch.core import (
    DynamicGraph,
    EventKind,
    StreamError,
    UpdateEvent,
    edge_key,
    format_stream,
    parse_stream,
)
from dynmatch.gen import generate_stream


def test_edge_key_canonical():
    assert edge_key(3, 1) == (1, 3)
    assert edge_key(1, 3) == (1, 3)
    with pytest.raises(ValueError):
        edge_key(2, 2)


def test_roundtrip_general():
    stream = generate_stream("random", 30, 200, seed=7)
    text = format_stream(stream)
    back = parse_stream(text)
    assert back.n == stream.n
    assert back.bipartite is False
    assert back.events == stream.events
    assert format_stream(back) == text


def test_roundtrip_bipartite():
    stream = generate_stream("bipartite-random", 20, 150, seed=3)
    back = parse_stream(format_stream(stream))
    assert back.bipartite is True
    assert back.side == stream.side
    assert back.events == stream.events


def test_parse_skips_comments_and_blanks():
    text = "# header comment\n\ndynmatch-stream v1\nn 4 general\n# ev\n+ 0 1\n\n- 0 1\n"
    s = parse_stream(text)
    assert s.n == 4
    assert [ev.kind for ev in s.events] == [EventKind.INSERT, EventKind.DELETE]


def test_parse_rejects_bad_header():
    with pytest.raises(StreamError, match="expected header"):
        parse_stream("not-a-stream\nn 3 general\n")


def test_parse_rejects_bad_shape_line():
    with pytest.raises(StreamError, match="general|bipartite"):
        parse_stream("dynmatch-stream v1\nn 3 directed\n")
    with pytest.raises(StreamError, match="node count"):
        parse_stream("dynmatch-stream v1\nn x general\n")


def test_parse_rejects_duplicate_insert():
    text = "dynmatch-stream v1\nn 3 general\n+ 0 1\n+ 1 0\n"
    with pytest.raises(StreamError, match="duplicate insert at event 1"):
        parse_stream(text)


def test_parse_rejects_absent_delete():
    text = "dynmatch-stream v1\nn 3 general\n- 0 1\n"
    with pytest.raises(StreamError, match="delete of absent edge at event 0"):
        parse_stream(text)


def test_parse_rejects_out_of_range_and_loops():
    with pytest.raises(StreamError, match="out of range"):
        parse_stream("dynmatch-stream v1\nn 3 general\n+ 0 3\n")
    with pytest.raises(StreamError, match="self-loop"):
        parse_stream("dynmatch-stream v1\nn 3 general\n+ 1 1\n")


def test_parse_bipartite_requires_all_sides():
    text = "dynmatch-stream v1\nn 3 bipartite\nside 0 0\nside 1 1\n+ 0 1\n"
    with pytest.raises(StreamError, match="missing side for node 2"):
        parse_stream(text)


def test_parse_bipartite_rejects_same_side_edge():
    text = (
        "dynmatch-stream v1\nn 3 bipartite\n"
        "side 0 0\nside 1 0\nside 2 1\n+ 0 1\n"
    )
    with pytest.raises(StreamError, match="edge inside one side at event 0"):
        parse_stream(text)


def test_dynamic_graph_apply_and_edges():
    g = DynamicGraph(4)
    g.apply_event(UpdateEvent(EventKind.INSERT, (0, 1), 0))
    g.apply_event(UpdateEvent(EventKind.INSERT, (1, 2), 1))
    assert g.m == 2
    assert g.degree(1) == 2
    assert sorted(g.edges()) == [(0, 1), (1, 2)]
    g.apply_event(UpdateEvent(EventKind.DELETE, (0, 1), 2))
    assert g.m == 1
    with pytest.raises(ValueError):
        g.apply_event(UpdateEvent(EventKind.DELETE, (0, 1), 3))
    with pytest.raises(ValueError):
        g.apply_event(UpdateEvent(EventKind.INSERT, (1, 2), 4))

"""End-to-end pipelines and the replay report."""

from fractions import Fraction

import pytest

from dynmatch.gen import generate_stream
from dynmatch.params import derive_params
from dynmatch.pipeline import (
    GeneralPipeline,
    KernelPipeline,
    greedy_candidate_size,
    replay,
)

CONFIG_A = dict(
    eps=Fraction(9, 10),
    gamma=Fraction(2),
    delta=Fraction(9, 10),
    skel_target=Fraction(12),
)


def test_general_pipeline_candidate_set_matches_recompute():
    params = derive_params(200, **CONFIG_A)
    pipe = GeneralPipeline(200, params)
    stream = generate_stream("random", 200, 1200, seed=0, density=30.0)
    for ev in stream:
        pipe.apply(ev)
        if (ev.seq + 1) % 100 == 0:
            rep = pipe.audit()
            assert rep.passed, str(rep)
    assert pipe.matching_size() > 0
    assert greedy_candidate_size(pipe) > 0
    counters = pipe.counters()
    assert counters["edge_touches"] > 0
    assert counters["split_calls"] > 0


def test_general_pipeline_skeleton_sparsifies():
    params = derive_params(200, **CONFIG_A)
    pipe = GeneralPipeline(200, params)
    stream = generate_stream("random", 200, 2000, seed=1, density=30.0)
    for ev in stream:
        pipe.apply(ev)
    # the candidate set must be a strict sparsification of the live graph
    assert len(pipe.cand) < pipe.g.m
    assert all(deg <= pipe.cand_bound for deg in pipe.cand_deg.values())


def test_default_eps_has_no_skeleton_levels():
    # at eps=1/3 the default skel_target L^4 exceeds n, so every edge is a
    # candidate and the pipeline degenerates to partition + matcher
    params = derive_params(50, Fraction(1, 3))
    assert len(params.levels) == 0
    pipe = GeneralPipeline(50, params)
    stream = generate_stream("random", 50, 400, seed=2)
    for ev in stream:
        pipe.apply(ev)
    assert pipe.cand == set(pipe.g.edges())
    rep = pipe.audit()
    assert rep.passed, str(rep)


def test_kernel_pipeline_audits_and_matches():
    stream = generate_stream("bipartite-random", 60, 800, seed=3, density=8.0)
    pipe = KernelPipeline(60, stream.side, eps_k=Fraction(1, 10))
    for ev in stream:
        pipe.apply(ev)
        if (ev.seq + 1) % 100 == 0:
            rep = pipe.audit()
            assert rep.passed, str(rep)
    assert pipe.matching_size() > 0
    assert pipe.mirror == pipe.kernel.kernel_edges()


def test_replay_general_report_shape():
    stream = generate_stream("random", 50, 300, seed=4)
    report = replay(stream, algo="general", audit_every=100, oracle_every=50)
    assert report["algo"] == "general"
    assert report["events"] == 300
    assert report["audit_failures"] == 0
    assert report["preconditions_ok"] is False  # expected at this scale
    assert report["deviation_flags"] == []
    cps = report["checkpoints"]
    assert cps[-1]["event_index"] == 299
    audited = [c for c in cps if c["audit"] is not None]
    assert audited and all(c["audit"]["passed"] for c in audited)
    oracled = [c for c in cps if c["oracle_size"] is not None]
    for c in oracled:
        assert c["ratio"] == c["oracle_size"] / max(1, c["matching_size"])
        assert c["ratio_asserted"] is False
        assert c["fallback_ratio_ok"] is True


def test_replay_kernel_report_shape():
    stream = generate_stream("bipartite-random", 49, 300, seed=5, density=6.0)
    report = replay(stream, algo="kernel", audit_every=50, oracle_every=25)
    assert report["audit_failures"] == 0
    assert report["parameters"]["d"] == 7
    bound = report["checkpoints"][0]["theoretical_ratio_bound"]
    assert bound == pytest.approx(float(2 * (1 + Fraction(1, 3)) / (1 + Fraction(1, 20) / 4)))
    for c in report["checkpoints"]:
        if c["ratio"] is not None:
            assert c["ratio"] <= bound
            assert c["ratio_asserted"] is True


def test_replay_flags_overrides():
    stream = generate_stream("bipartite-random", 30, 100, seed=6)
    report = replay(stream, algo="kernel", eps_k=Fraction(1, 10), d=4)
    assert set(report["deviation_flags"]) >= {"eps-k-override", "d-override"}


def test_replay_rejects_bad_arguments():
    stream = generate_stream("random", 20, 50, seed=7)
    with pytest.raises(ValueError, match="bipartite"):
        replay(stream, algo="kernel")
    with pytest.raises(ValueError, match="unknown algo"):
        replay(stream, algo="exact")
    with pytest.raises(ValueError, match="cadences"):
        replay(stream, audit_every=0)


def test_replay_timings_percentiles():
    stream = generate_stream("random", 20, 100, seed=8)
    report = replay(stream, with_audits=False, with_oracle=False, timings=True)
    pct = report["event_time_percentiles"]
    assert set(pct) == {"p50", "p90", "p99", "mean"}
    assert pct["p50"] <= pct["p99"]

import json

import pytest


from permlab.errors import PermlabError, SearchStateError
from permlab.matrix_io import parse_matrix
from permlab.search import BLOCK, TARGETS, SearchConfig, SearchState, Target, search


def test_same_seed_same_state():
    a = search(SearchConfig("chollet", 3, seed=7, top_k=8), 200)
    b = search(SearchConfig("chollet", 3, seed=7, top_k=8), 200)
    assert a.dumps() == b.dumps()
    c = search(SearchConfig("chollet", 3, seed=8, top_k=8), 200)
    assert c.dumps() != a.dumps()


@pytest.mark.parametrize("target,n", [("pot", 3), ("bapat_sunder", 3), ("drury", 4), ("compression", 3)])
def test_resume_equivalence(target, n):
    cfg = SearchConfig(target, n, seed=2, top_k=6)
    whole = search(cfg, 120)
    part = search(cfg, 50)
    resumed = search(SearchState.from_json(json.loads(part.dumps())), 70)
    assert resumed.dumps() == whole.dumps()


def test_workers_do_not_change_result():
    cfg = SearchConfig("chollet_self", 3, seed=4, top_k=5)
    assert search(cfg, 150, workers=2).dumps() == search(cfg, 150).dumps()


def test_time_budget_stops_on_block_boundary():
    s = search(SearchConfig("chollet", 2, seed=1), 10**6, max_seconds=0.01)
    assert 0 < s.next_iteration < 10**6
    assert s.next_iteration % BLOCK == 0
    assert s.counters["evaluated"] == s.next_iteration


def test_pot_three_no_violations():
    s = search(SearchConfig("pot", 3, seed=0), 1000)
    assert s.violations == []
    assert s.counters["confirmed"] == 0


def test_chollet_two_no_violations():
    s = search(SearchConfig("chollet", 2, seed=0), 2000)
    assert s.violations == []


def test_pinned_drury():
    s = search(SearchConfig("bapat_sunder", 7, pinned="builtin:drury"), 3)
    (c,) = s.candidates
    assert c["status"] == "confirmed" and c["exact_ratio"] == "1237/1152"
    assert s.counters["confirmed"] == 3
    A = parse_matrix(c["matrices"][0])
    assert A.field == "cycN:40"


def test_float_flags_need_exact_confirmation(monkeypatch):
    # a screen that calls everything a violation
    fake = Target("chollet", "psd2", lambda A, B: (2.0, 1.0), TARGETS["chollet"].exact)
    monkeypatch.setitem(TARGETS, "chollet", fake)
    s = search(SearchConfig("chollet", 2, seed=3, top_k=4), 40)
    assert s.counters["flagged"] == 40
    assert s.counters["confirmed"] == 0 and s.counters["cleared"] == 40
    assert s.violations == []
    assert all(c["status"] == "cleared" for c in s.candidates)


def test_candidates_carry_exact_matrices():
    s = search(SearchConfig("drury_linear", 3, seed=5, top_k=3), 30)
    assert len(s.candidates) == 3
    ratios = [c["ratio"] for c in s.candidates]
    assert ratios == sorted(ratios, reverse=True)
    for c in s.candidates:
        A = parse_matrix(c["matrices"][0])
        assert A.n == 3 and A.field == "gaussian"


def test_real_target_uses_rational_field():
    s = search(SearchConfig("real_chollet", 3, seed=1, top_k=2), 20)
    assert all(parse_matrix(c["matrices"][0]).field == "rational" for c in s.candidates)


def test_config_validation():
    with pytest.raises(PermlabError):
        SearchConfig("nope", 3).validate()
    with pytest.raises(PermlabError):
        SearchConfig("drury", 2).validate()
    with pytest.raises(PermlabError):
        SearchConfig("pot", 3, rank=4).validate()
    with pytest.raises(PermlabError):
        search(SearchConfig("pot", 3), -1)


def test_state_file_round_trip(tmp_path):
    s = search(SearchConfig("pot", 2, seed=1, top_k=3), 25)
    p = tmp_path / "state.json"
    s.save(p)
    t = SearchState.load(p)
    assert t.dumps() == s.dumps()
    assert t.next_iteration == 25


@pytest.mark.parametrize("content", [
    "not json",
    "[]",
    json.dumps({"format": "other"}),
    json.dumps({"format": "permlab-search-state", "version": 99}),
    json.dumps({"format": "permlab-search-state", "version": 1, "config": {"target": "pot"}}),
])
def test_corrupt_state(tmp_path, content):
    p = tmp_path / "s.json"
    p.write_text(content)
    with pytest.raises(SearchStateError):
        SearchState.load(p)


def test_missing_candidate_field(tmp_path):
    s = search(SearchConfig("pot", 2, seed=1, top_k=1), 3)
    data = s.to_json()
    del data["candidates"][0]["digest"]
    with pytest.raises(SearchStateError):
        SearchState.from_json(data)

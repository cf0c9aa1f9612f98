import io
import json
import random

import pytest

from helly_lab.bounds import binomial
from helly_lab.canon import canonical_label, family_canonical_label
from helly_lab.constructions import boundary_tuza_family, layered_extremal_graph, pendant_clique_graph
from helly_lab.errors import BudgetExceeded, DomainError
from helly_lab.family import SetFamily, triviality
from helly_lab.graph import Graph, decode_graph6, encode_graph6, pair_family_from_graph
from helly_lab.helly import is_union_q_efficient
from helly_lab.search import (
    Hypothesis,
    internal_graph_count,
    max_covering_pm_graph,
    max_union_q_efficient,
    min_edge_graph,
    sample_union_q_efficient,
    verify_claim_ledger,
)

import oracles


def _content(res):
    d = res.to_dict()
    d.pop("explored")
    return d


# ------------------------------------------------------------ max family


def test_max_family_q2k3():
    res = max_union_q_efficient(6, 3, 2)
    assert res.exhaustive
    assert res.optimum == binomial(4, 3) + 2
    assert len(res.witnesses) == 1
    assert family_canonical_label(res.witnesses[0]) == family_canonical_label(boundary_tuza_family(2, 3))


def test_max_family_pairs():
    res = max_union_q_efficient(6, 2, 3)
    assert res.exhaustive and res.optimum == 6
    ref = family_canonical_label(pair_family_from_graph(pendant_clique_graph(3)))
    assert [family_canonical_label(w) for w in res.witnesses] == [ref]
    res = max_union_q_efficient(4, 2, 2)
    assert res.optimum == 4
    assert family_canonical_label(res.witnesses[0]) == family_canonical_label(pair_family_from_graph(Graph.cycle(4)))


def test_max_family_witnesses_are_valid():
    for n, k, q in ((5, 2, 2), (5, 2, 3), (6, 3, 2), (5, 3, 2)):
        res = max_union_q_efficient(n, k, q)
        for w in res.witnesses:
            assert len(w) == res.optimum
            assert oracles.union_efficient(w, q)
            assert not triviality(w).union_trivial


def test_max_family_trivial_allowed_is_at_least_as_large():
    # on [5] every cover by pairs needs three of them, so q=2 has no non-trivial family
    assert max_union_q_efficient(5, 2, 2).optimum is None
    assert max_union_q_efficient(5, 2, 2, require_nontrivial=False).optimum is not None
    a = max_union_q_efficient(5, 2, 3)
    b = max_union_q_efficient(5, 2, 3, require_nontrivial=False)
    assert b.optimum >= a.optimum


def test_max_family_matches_naive_search_small():
    # every family of 2-sets on [4]
    from itertools import combinations

    cands = [m for m in range(16) if bin(m).count("1") == 2]
    for q in (2, 3):
        best = 0
        for r in range(len(cands) + 1):
            for combo in combinations(cands, r):
                f = SetFamily(4, combo, 2)
                if not triviality(f).union_trivial and oracles.union_efficient(f, q):
                    best = max(best, r)
        assert max_union_q_efficient(4, 2, q).optimum == best


def test_max_family_domain():
    with pytest.raises(DomainError):
        max_union_q_efficient(6, 3, 1)
    with pytest.raises(DomainError):
        max_union_q_efficient(3, 4, 2)


def test_max_family_budget_gives_lower_bound():
    res = max_union_q_efficient(6, 3, 2, budget=40)
    assert not res.exhaustive
    full = max_union_q_efficient(6, 3, 2)
    assert res.optimum is None or res.optimum <= full.optimum


def test_max_family_large_space_defaults_to_budget():
    res = max_union_q_efficient(7, 3, 2, budget=2000)
    assert res.params["budget"] == 2000
    assert not res.exhaustive


def test_max_family_jobs_determinism():
    one = max_union_q_efficient(6, 3, 2, jobs=1)
    two = max_union_q_efficient(6, 3, 2, jobs=2)
    assert one.to_json() == two.to_json()
    one = max_union_q_efficient(6, 2, 3, jobs=1)
    four = max_union_q_efficient(6, 2, 3, jobs=4)
    assert _content(one) == _content(four)


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.json"
    first = max_union_q_efficient(6, 3, 2, checkpoint=ck)
    saved = json.loads(ck.read_text())
    assert set(saved["chunks"]) == {"ii", "ix", "xi", "xx"}
    # drop two chunks and resume
    for cid in ("ix", "xx"):
        del saved["chunks"][cid]
    ck.write_text(json.dumps(saved))
    again = max_union_q_efficient(6, 3, 2, checkpoint=ck)
    assert again.to_json() == first.to_json()
    assert len(json.loads(ck.read_text())["chunks"]) == 4


def test_checkpoint_rejects_other_task(tmp_path):
    ck = tmp_path / "ck.json"
    max_union_q_efficient(5, 2, 2, checkpoint=ck)
    with pytest.raises(DomainError, match="different task"):
        max_union_q_efficient(5, 2, 3, checkpoint=ck)


def test_pruning_heredity_audit():
    rng = random.Random(7)
    events = []
    for n, k, q in ((6, 3, 2), (6, 2, 3), (5, 2, 2)):
        res = max_union_q_efficient(n, k, q, audit=400)
        events.extend((n, k, q, fam, c) for fam, c in res.audit)
    assert len(events) >= 1000
    for n, k, q, fam, c in rng.sample(events, 1000):
        base = set(fam) | {c}
        assert not is_union_q_efficient(SetFamily(n, tuple(base), k), q).holds
        pool = [m for m in range(1 << n) if bin(m).count("1") == k and m not in base]
        extra = rng.sample(pool, rng.randint(0, min(4, len(pool))))
        sup = SetFamily(n, tuple(base | set(extra)), k)
        assert not oracles.union_efficient(sup, q)


def test_sample_union_q_efficient():
    for seed in range(10):
        f = sample_union_q_efficient(9, 3, 3, random.Random(seed))
        assert not triviality(f).union_trivial
        assert is_union_q_efficient(f, 3).holds
    with pytest.raises(DomainError):
        sample_union_q_efficient(8, 3, 3, random.Random(0))


# ----------------------------------------------------- covering matching


def test_pm_graph_q3():
    res = max_covering_pm_graph(3)
    assert res.optimum == 6
    assert [canonical_label(w) for w in res.witnesses] == [canonical_label(pendant_clique_graph(3))]
    assert max_covering_pm_graph(3, require_connected=False).optimum == 6


def test_pm_graph_small_q():
    assert max_covering_pm_graph(1).optimum == 1
    res = max_covering_pm_graph(2)
    assert res.optimum == 4
    assert [canonical_label(w) for w in res.witnesses] == [canonical_label(Graph.cycle(4))]


def test_pm_graph_witnesses_valid():
    for q in (2, 3):
        for w in max_covering_pm_graph(q).witnesses:
            assert oracles.covering_pm(w)


@pytest.mark.parametrize("q", [2, 3])
def test_pm_graph_agrees_with_family_search(q):
    assert max_covering_pm_graph(q).optimum == max_union_q_efficient(2 * q, 2, q).optimum


def test_pm_graph_domain_and_budget():
    with pytest.raises(DomainError):
        max_covering_pm_graph(5)
    with pytest.raises(BudgetExceeded):
        max_covering_pm_graph(3, budget=10)


# ------------------------------------------------------------ min edges


def test_hypothesis_parse():
    assert str(Hypothesis.parse("self2+triangle")) == "self2+triangle"
    h = Hypothesis.parse("rad2+cliqueCN(2)")
    assert (h.kind, h.t) == ("rad2+cliqueCN", 2)
    h = Hypothesis.parse("rad2 + sizeCN(3) + mindeg(4)")
    assert (h.t, h.d) == (3, 4)
    assert str(h) == "rad2+sizeCN(3)+mindeg(4)"
    for bad in ("", "self2", "rad2+cliqueCN(x)", "radius2+triangle"):
        with pytest.raises(DomainError):
            Hypothesis.parse(bad)


def test_min_edge_small():
    assert min_edge_graph(5, "self2+triangle").optimum is None
    for n in range(1, 5):
        assert min_edge_graph(n, "self2+triangle").optimum is None


def test_min_edge_n6():
    res = min_edge_graph(6, "self2+triangle")
    assert res.exhaustive
    assert res.optimum == 9
    labels = {canonical_label(w) for w in res.witnesses}
    assert canonical_label(layered_extremal_graph(6, 3)) in labels
    for w in res.witnesses:
        ecc = oracles.eccentricities(w)
        assert min(ecc) == max(ecc) == 2


def test_min_edge_clique_hypothesis_matches_layered_bound():
    # q = 3: cliqueCN(1) is a common neighbour for every pair
    res = min_edge_graph(6, "rad2+cliqueCN(1)")
    assert res.optimum is not None and res.optimum >= 2 * 6 - 3


def test_min_edge_jobs_determinism_and_checkpoint(tmp_path):
    one = min_edge_graph(6, "self2+triangle", jobs=1)
    two = min_edge_graph(6, "self2+triangle", jobs=2, checkpoint=tmp_path / "g.json")
    assert one.to_json() == two.to_json()
    again = min_edge_graph(6, "self2+triangle", checkpoint=tmp_path / "g.json")
    assert again.to_json() == one.to_json()


def test_min_edge_budget_and_limit():
    res = min_edge_graph(6, "self2+triangle", budget=100)
    assert not res.exhaustive
    assert internal_graph_count(5, 10) == 1 << 10
    with pytest.raises(BudgetExceeded):
        min_edge_graph(9, "self2+triangle")


def _stream_lines():
    lines = [encode_graph6(layered_extremal_graph(6, 3)), encode_graph6(Graph.complete(6)),
             encode_graph6(Graph.cycle(6)), encode_graph6(Graph.complete(5))]
    # a relabelled copy must not add a witness class
    g = layered_extremal_graph(6, 3).relabel([5, 4, 3, 2, 1, 0])
    lines.append(encode_graph6(g))
    return lines


def test_min_edge_stream_iterable():
    res = min_edge_graph(6, "self2+triangle", _stream_lines())
    assert res.optimum == 9
    assert len(res.witnesses) == 1
    assert res.explored == 5
    assert res.params["source"] == "stream"


def test_min_edge_stream_file_and_stdin(tmp_path, monkeypatch):
    path = tmp_path / "g.g6"
    path.write_text(">>graph6<<\n" + "\n".join(_stream_lines()) + "\n")
    assert min_edge_graph(6, "self2+triangle", path).optimum == 9
    monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(_stream_lines()) + "\n"))
    assert min_edge_graph(6, "self2+triangle", "-").optimum == 9


def test_min_edge_stream_without_solution():
    res = min_edge_graph(6, "self2+triangle", [encode_graph6(Graph.complete(6))])
    assert res.optimum is None and res.witnesses == []


def test_graph6_witness_encoding_roundtrip():
    res = min_edge_graph(6, "self2+triangle")
    for entry, w in zip(res.to_dict()["witnesses"], res.witnesses):
        assert decode_graph6(entry["graph6"]) == w
        assert entry["edges"] == 9


# ---------------------------------------------------------- claim ledger


@pytest.mark.parametrize("q, k", [(3, 3), (3, 4)])
def test_claim_ledger_boundary(q, k):
    rep = verify_claim_ledger(boundary_tuza_family(q, k), q, k)
    assert rep.passed, rep.to_dict()
    assert set(rep.checks) == {
        "no_covering_link_union", "link_size_bound", "min_degree", "max_degree", "clique_common_neighborhoods",
    }
    lo, hi = rep.details["degree_range"]
    assert q - 1 <= lo and hi <= (q - 1) * k


def test_claim_ledger_sampled():
    for seed in range(5):
        f = sample_union_q_efficient(9, 3, 3, random.Random(100 + seed))
        assert verify_claim_ledger(f, 3, 3).passed


def test_claim_ledger_preconditions():
    f = boundary_tuza_family(3, 3)
    with pytest.raises(DomainError, match="n = q\\*k"):
        verify_claim_ledger(f, 2, 3)
    with pytest.raises(DomainError, match="uniform"):
        verify_claim_ledger(SetFamily(9, f.sets + (0b11,)), 3, 3)
    with pytest.raises(DomainError, match="trivial"):
        verify_claim_ledger(SetFamily(9, f.sets[3:], 3), 3, 3)
    # all 3-sets of [9]: three disjoint blocks plus any other set form a 4-member minimal cover
    from helly_lab.family import k_subsets

    with pytest.raises(DomainError, match="efficient"):
        verify_claim_ledger(SetFamily(9, tuple(k_subsets(9, 3)), 3), 3, 3)

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helly_lab.constructions import boundary_tuza_family, milner_family
from helly_lab.errors import BudgetExceeded, FamilyError
from helly_lab.family import (
    SetFamily,
    complement_family,
    elements,
    intersection_of,
    is_q_linked,
    popcount,
    union_of,
)
from helly_lab.helly import (
    DEFAULT_MEMBER_BUDGET,
    find_r_simplex,
    find_special_simplex,
    has_pq_property,
    has_simplex_at_least,
    helly_number,
    is_intersection_q_efficient,
    is_k4_3_free,
    is_q_helly_berge_duchet,
    is_q_helly_bruteforce,
    is_simplex,
    is_union_q_efficient,
    is_union_q_efficient_via_helly,
    member_budget,
)

import oracles
from strategies import families, uniform_families

TRI = SetFamily.from_sets(3, [[1, 2], [2, 3], [1, 3]], 2)
K4_3 = SetFamily.from_sets(4, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]], 3)
STAR4 = SetFamily(4, tuple(m for m in range(16) if m & 1))


# ----------------------------------------------------------- worked examples


def test_bruteforce_examples():
    v = is_q_helly_bruteforce(TRI, 2)
    assert not v.holds and v.subfamily == (0, 1, 2)
    for q in (1, 2, 3, 4):
        assert is_q_helly_bruteforce(STAR4, q).holds
    comp = complement_family(boundary_tuza_family(3, 3))
    assert len(comp) == 23
    assert is_q_helly_bruteforce(comp, 3).holds


def test_berge_duchet_examples():
    v = is_q_helly_berge_duchet(TRI, 2)
    assert not v.holds and elements(v.element_set) == [1, 2, 3]
    assert is_q_helly_berge_duchet(STAR4, 2).holds
    m5 = milner_family(5)
    assert is_q_helly_berge_duchet(m5, 3).holds
    assert is_q_helly_bruteforce(m5, 3, budget=len(m5)).holds


def test_berge_duchet_q_at_least_n_is_vacuous():
    assert is_q_helly_berge_duchet(TRI, 3).holds
    assert is_q_helly_bruteforce(TRI, 3).holds


def test_bruteforce_budget():
    big = SetFamily(5, tuple(range(DEFAULT_MEMBER_BUDGET + 1)))
    with pytest.raises(BudgetExceeded):
        is_q_helly_bruteforce(big, 2)
    assert is_q_helly_bruteforce(big, 2, budget=len(big)).holds is False


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("HELLY_LAB_BUDGET", "3")
    assert member_budget() == 3
    with pytest.raises(BudgetExceeded):
        is_intersection_q_efficient(K4_3, 3)
    monkeypatch.delenv("HELLY_LAB_BUDGET")
    assert member_budget() == DEFAULT_MEMBER_BUDGET


def test_intersection_efficiency_examples():
    v = is_intersection_q_efficient(K4_3, 3)
    assert not v.holds and v.witness == (0, 1, 2, 3)
    assert is_intersection_q_efficient(TRI, 3).holds
    assert is_intersection_q_efficient(STAR4, 2).holds
    with pytest.raises(FamilyError):
        is_intersection_q_efficient(TRI, 1)


def test_union_efficiency_examples():
    assert is_union_q_efficient(boundary_tuza_family(3, 3), 3).holds
    assert is_union_q_efficient(SetFamily.from_sets(4, [[1, 2], [3, 4], [1, 3]]), 2).holds
    k6 = SetFamily(6, tuple(m for m in range(64) if popcount(m) == 2), 2)
    # A spanning star K_{1,5} is a minimal cover of five edges, so K_6 fails.
    v = is_union_q_efficient(k6, 3)
    assert not v.holds and not oracles.union_efficient(k6, 3)
    assert union_of(k6, v.witness) == k6.full and len(v.witness) > 3
    v = is_union_q_efficient(SetFamily.from_sets(4, [[1, 2], [1, 3], [1, 4]]), 2)
    assert not v.holds and v.witness == (0, 1, 2)


def test_simplex_examples():
    w = find_r_simplex(K4_3, 3)
    assert w is not None and w.members == (0, 1, 2, 3) and w.r == 3
    assert find_r_simplex(TRI, 2).members == (0, 1, 2)
    for r in (1, 2, 3):
        assert find_r_simplex(STAR4, r) is None
    assert has_simplex_at_least(K4_3, 3)
    assert not has_simplex_at_least(K4_3, 4)
    assert not any(find_r_simplex(K4_3, r) for r in range(4, 8))
    assert not has_simplex_at_least(STAR4, 1)
    assert not has_simplex_at_least(milner_family(5), 3)


def test_helly_number_examples():
    assert helly_number(STAR4) == 1
    assert helly_number(TRI) == 3
    assert helly_number(K4_3) == 4


def test_pq_examples():
    singles = SetFamily.from_sets(3, [[1], [2], [3]])
    assert not has_pq_property(singles, 3, 2)
    assert has_pq_property(TRI, 3, 2)
    with pytest.raises(FamilyError):
        has_pq_property(TRI, 1, 2)


def test_special_simplex_examples():
    f = SetFamily.from_sets(3, [[2, 3], [1, 3], [1, 2]])
    idx, core = find_special_simplex(f, 2)
    assert idx == (0, 1, 2) and elements(core) == [1, 2, 3]
    g = SetFamily.from_sets(6, [[2, 3, 4], [1, 3, 5], [1, 2, 6]])
    idx, core = find_special_simplex(g, 2)
    assert elements(core) == [1, 2, 3] and len(idx) == 3
    assert find_special_simplex(STAR4, 2) is None
    assert find_special_simplex(STAR4, 1) is None


def test_k4_examples():
    assert not is_k4_3_free(K4_3)
    assert is_k4_3_free(SetFamily.from_sets(4, [[1, 2, 3], [1, 2, 4], [1, 3, 4]], 3))
    with pytest.raises(FamilyError):
        is_k4_3_free(TRI)


# ------------------------------------------------- oracle equivalences


@settings(max_examples=300, deadline=None)
@given(families(max_n=5, max_size=7), st.integers(1, 4))
def test_bruteforce_matches_definition(f, q):
    assert is_q_helly_bruteforce(f, q).holds == oracles.helly(f, q)


@settings(max_examples=300, deadline=None)
@given(families(max_n=6, max_size=9), st.integers(1, 4))
def test_berge_duchet_matches_bruteforce(f, q):
    assert is_q_helly_berge_duchet(f, q).holds == is_q_helly_bruteforce(f, q).holds


@settings(max_examples=300, deadline=None)
@given(families(max_n=5, max_size=7), st.integers(2, 4))
def test_efficiency_matches_definition(f, q):
    assert is_intersection_q_efficient(f, q).holds == oracles.intersection_efficient(f, q)
    assert is_union_q_efficient(f, q).holds == oracles.union_efficient(f, q)


@settings(max_examples=300, deadline=None)
@given(families(max_n=7, max_size=12), st.integers(2, 4))
def test_four_way_equivalence(f, q):
    verdicts = {
        not has_simplex_at_least(f, q),
        is_q_helly_bruteforce(f, q).holds,
        is_q_helly_berge_duchet(f, q).holds,
        is_intersection_q_efficient(f, q).holds,
        is_union_q_efficient(complement_family(f), q).holds,
        is_union_q_efficient_via_helly(complement_family(f), q),
    }
    assert len(verdicts) == 1


@settings(max_examples=200, deadline=None)
@given(families(max_n=5, max_size=7), st.integers(1, 3))
def test_simplex_search_matches_definition(f, q):
    assert has_simplex_at_least(f, q) == oracles.has_simplex_at_least(f, q)
    found = any(find_r_simplex(f, r) for r in range(q, len(f)))
    assert found == oracles.has_simplex_at_least(f, q)


@settings(max_examples=200, deadline=None)
@given(families(max_n=6, max_size=9), st.integers(1, 4))
def test_helly_monotone_in_q(f, q):
    if is_q_helly_berge_duchet(f, q).holds:
        assert is_q_helly_berge_duchet(f, q + 1).holds


@settings(max_examples=200, deadline=None)
@given(families(max_n=6, max_size=9), st.integers(1, 3), st.data())
def test_helly_hereditary(f, q, data):
    if not is_q_helly_bruteforce(f, q).holds:
        return
    keep = [i for i in range(len(f)) if data.draw(st.booleans())]
    assert is_q_helly_bruteforce(f.subfamily(keep), q).holds


@settings(max_examples=300, deadline=None)
@given(families(max_n=6, max_size=9), st.integers(1, 4))
def test_witnesses_revalidate(f, q):
    v = is_q_helly_bruteforce(f, q)
    assert (v.witness is None) == v.holds
    if not v.holds:
        assert intersection_of(f, v.subfamily) == 0
        assert is_q_linked(f.subfamily(v.subfamily), q)
        assert len(v.subfamily) > q
    b = is_q_helly_berge_duchet(f, q)
    assert (b.witness is None) == b.holds
    if not b.holds:
        a = b.element_set
        assert popcount(a) == q + 1
        acc = f.full
        for s in f.sets:
            if popcount(s & a) >= q:
                acc &= s
        assert acc == 0
    if q >= 2:
        e = is_intersection_q_efficient(f, q)
        if not e.holds:
            assert intersection_of(f, e.witness) == 0 and len(e.witness) > q
            assert all(intersection_of(f, tuple(c)) for c in combinations(e.witness, len(e.witness) - 1))
        u = is_union_q_efficient(f, q)
        if not u.holds:
            assert union_of(f, u.witness) == f.full and len(u.witness) > q
            assert all(union_of(f, tuple(c)) != f.full for c in combinations(u.witness, len(u.witness) - 1))
    for r in range(1, 4):
        w = find_r_simplex(f, r)
        if w is not None:
            assert len(w.members) == r + 1 and is_simplex(f, w.members)


@settings(max_examples=200, deadline=None)
@given(families(max_n=5, max_size=7), st.integers(1, 4))
def test_pp_property_is_linkedness(f, p):
    assert has_pq_property(f, p, p) == is_q_linked(f, p)


@settings(max_examples=200, deadline=None)
@given(families(max_n=5, max_size=7), st.integers(1, 4), st.integers(1, 4))
def test_pq_matches_definition(f, p, q):
    if p < q:
        p, q = q, p
    assert has_pq_property(f, p, q) == oracles.pq(f, p, q)


@settings(max_examples=300, deadline=None)
@given(uniform_families(3, max_n=7, max_size=14))
def test_k4_free_iff_intersection_3_efficient(f):
    assert is_k4_3_free(f) == is_intersection_q_efficient(f, 3).holds


@settings(max_examples=200, deadline=None)
@given(families(max_n=6, max_size=8), st.integers(1, 3))
def test_special_simplex_conditions(f, q):
    found = find_special_simplex(f, q)
    if found is None:
        return
    idx, core = found
    assert len(idx) == q + 1 and popcount(core) == q + 1
    parts = [f.sets[i] for i in idx]
    missing = sorted((core & ~(p & core)).bit_length() - 1 for p in parts)
    assert all(popcount(core & ~p) == 1 for p in parts)
    assert missing == sorted(set(missing))
    tails = [p & ~core for p in parts]
    for a, b in combinations(tails, 2):
        assert a & b == 0


def test_helly_number_is_minimal():
    for f in (TRI, K4_3, STAR4, milner_family(4)):
        h = helly_number(f)
        assert is_q_helly_berge_duchet(f, h).holds
        if h > 1:
            assert not is_q_helly_berge_duchet(f, h - 1).holds

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from sldcodes.code import Code
from sldcodes.verifier import (
    Mode, SearchBudgetExceeded, Witness, check_witness, colex_subsets, covered_others,
    max_size_search, sum_over_set, verify,
)
import sldcodes.verifier as verifier_mod

small_codes = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=3, max_size=6).map(
        lambda cols: Code.from_columns(n, cols)))


def row_existence_ok(code, s, L, mode):
    """Definition-level check over every disjoint (S, Lambda) pair."""
    t = code.t
    for S in itertools.combinations(range(t), s):
        rest = [j for j in range(t) if j not in S]
        for lam in itertools.combinations(rest, L):
            found = False
            for i in range(code.n):
                row = [(code.columns[j] >> i) & 1 for j in range(t)]
                for j in lam:
                    if all(row[k] == 0 for k in S) and row[j] == 1:
                        found = True
                    if mode is Mode.SLD and all(row[k] == 1 for k in S) and row[j] == 0:
                        found = True
            if not found:
                return False
    return True


def brute_max_size(n, s, L, mode):
    """Largest subset of {0,1}^n with the property, by trying all subsets."""
    words = list(range(1 << n))
    best = 0
    for mask in range(1, 1 << len(words)):
        cols = [w for k, w in enumerate(words) if (mask >> k) & 1]
        if len(cols) <= best:
            continue
        c = Code.from_columns(n, cols)
        if c.t <= s or verify(c, s, L, mode) is None:
            best = len(cols)
    return best


def test_colex_order():
    assert list(colex_subsets(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert sorted(colex_subsets(6, 3)) == list(itertools.combinations(range(6), 3))


def test_sum_over_set_examples(id3):
    assert str(sum_over_set(id3, [0, 1], "sld")) == "**0"
    assert str(sum_over_set(id3, [0, 1], "ld")) == "110"
    assert str(sum_over_set(id3, [2], "sld")) == "001"
    assert str(sum_over_set(id3, [2], "ld")) == "001"


def test_covered_others_examples(id3):
    assert covered_others(id3, [0, 1], "sld") == ()
    c = Code.from_columns(2, ["10", "01", "11"])
    assert covered_others(c, [0, 1], "ld") == (2,)


@given(small_codes, st.data())
def test_covered_others_ld_is_definition(c, data):
    S = data.draw(st.sets(st.integers(0, c.t - 1), min_size=1, max_size=c.t).map(sorted))
    acc = 0
    for j in S:
        acc |= c.columns[j]
    expect = tuple(j for j in range(c.t) if j not in S and c.columns[j] & ~acc == 0)
    assert covered_others(c, S, "ld") == expect


def test_verify_identity(id3):
    assert verify(id3, 2, 1, "sld") is None
    assert verify(id3, 2, 1, "ld") is None


def test_verify_all_ones_column_ld():
    c = Code.from_columns(3, ["100", "010", "001", "111"])
    w = verify(c, 2, 1, "ld")
    assert w is not None
    assert 3 in w.S or 3 in w.covered_others
    assert check_witness(c, w, 1, "ld")


def test_verify_witness_is_first_in_colex():
    c = Code.from_columns(2, ["00", "11", "01", "10"])
    w = verify(c, 2, 1, "sld")
    assert w == Witness((0, 1), (2, 3))


def test_verify_rejects_large_s(id3):
    with pytest.raises(ValueError):
        verify(id3, 3, 1, "sld")


@settings(max_examples=300, deadline=None)
@given(small_codes, st.integers(2, 3), st.integers(1, 3), st.sampled_from(list(Mode)))
def test_counting_matches_row_existence(c, s, L, mode):
    if s >= c.t:
        return
    assert (verify(c, s, L, mode) is None) == row_existence_ok(c, s, L, mode)


@settings(max_examples=200, deadline=None)
@given(small_codes, st.integers(2, 3), st.integers(1, 3))
def test_ld_implies_sld(c, s, L):
    if s >= c.t:
        return
    if verify(c, s, L, "ld") is None:
        assert verify(c, s, L, "sld") is None


@settings(max_examples=200, deadline=None)
@given(small_codes, st.integers(2, 3), st.integers(1, 2), st.sampled_from(list(Mode)))
def test_witness_rechecks(c, s, L, mode):
    if s >= c.t:
        return
    w = verify(c, s, L, mode)
    if w is not None:
        assert check_witness(c, w, L, mode)
        assert len(w.S) == s


@settings(max_examples=150, deadline=None)
@given(small_codes, st.integers(2, 3), st.integers(1, 2), st.randoms(use_true_random=False))
def test_sld_invariances(c, s, L, rnd):
    if s >= c.t:
        return
    ok = verify(c, s, L, "sld") is None
    order = list(range(c.t))
    rnd.shuffle(order)
    assert (verify(c.permute_columns(order), s, L, "sld") is None) == ok
    assert (verify(c.negate(), s, L, "sld") is None) == ok


def test_parallel_verify_agrees(monkeypatch):
    monkeypatch.setattr(verifier_mod, "PARALLEL_THRESHOLD", 1)
    rng = random.Random(3)
    for _ in range(5):
        c = Code.from_columns(6, [rng.randrange(64) for _ in range(9)])
        for mode in Mode:
            assert verify(c, 2, 1, mode, jobs=2) == verify(c, 2, 1, mode, jobs=1)


@pytest.mark.parametrize("mode", list(Mode))
@pytest.mark.parametrize("n,s,L", [(2, 2, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1), (2, 2, 2)])
def test_search_matches_subset_brute_force(n, s, L, mode):
    res = max_size_search(n, s, L, mode)
    assert res.best_t == brute_max_size(n, s, L, mode)
    if res.best_t > s:
        assert verify(res.example_code, s, L, mode) is None


def test_search_n2_value():
    # any three distinct words of {0,1}^2 contain a complementary pair
    assert max_size_search(2, 2, 1, "sld").best_t == 2


@pytest.mark.parametrize("mode", list(Mode))
def test_search_n4_matches_brute_force(mode):
    assert max_size_search(4, 2, 1, mode).best_t == brute_max_size(4, 2, 1, mode)


@pytest.mark.parametrize("mode", list(Mode))
@pytest.mark.parametrize("n", [3, 4, 5])
def test_search_monotone(n, mode):
    t = {(s, L): max_size_search(n, s, L, mode).best_t for s in (2, 3) for L in (1, 2)}
    assert t[(3, 1)] <= t[(2, 1)] and t[(3, 2)] <= t[(2, 2)]
    assert t[(2, 1)] <= t[(2, 2)] and t[(3, 1)] <= t[(3, 2)]


def test_search_ld_never_beats_sld():
    for n in (3, 4, 5):
        assert max_size_search(n, 2, 1, "ld").best_t <= max_size_search(n, 2, 1, "sld").best_t


def test_search_budget():
    with pytest.raises(SearchBudgetExceeded):
        max_size_search(6, 2, 2, "sld", budget=10)

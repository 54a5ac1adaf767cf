from math import comb

import pytest

from delsubrecon.balls import (
    BallSpec,
    WordSet,
    XiQuery,
    enum_del_ball,
    enum_ds_ball,
    enum_sub_ball,
    sub2_intersection_size,
    union_all,
    xi_02_deleted_closed,
    xi_0s,
    xi_d2_closed,
    xi_ds,
)
from delsubrecon.errors import DomainError, GuardrailError, SpecError
from delsubrecon.words import Word, word


def _codes(ws):
    return {tuple(w.symbols) for w in ws}


def test_wordset_algebra():
    a = WordSet.from_words([word("00"), word("01")])
    b = WordSet.from_words([word("01"), word("11")])
    assert (a | b).strings() == ["00", "01", "11"]
    assert (a & b).strings() == ["01"]
    assert (a - b).strings() == ["00"]
    assert word("01") in a and word("10") not in a
    assert (a & b).issubset(a)
    assert (a - b).isdisjoint(b)
    assert union_all([a, b, WordSet.empty(2, 2)], 2, 2) == a | b


@pytest.mark.parametrize("s", ["0", "0110", "0201", "3120"])
@pytest.mark.parametrize("radius", [0, 1, 2, 3])
def test_sub_ball_matches_naive(oracle, s, radius):
    q = 4 if "3" in s else 3
    u = word(s, q)
    assert _codes(enum_sub_ball(u, radius)) == oracle.sub_ball(u, radius)


@pytest.mark.parametrize("s,q,t,r", [("0000", 2, 1, 2), ("0110", 2, 1, 1), ("012", 3, 1, 1), ("01101", 2, 2, 1), ("21021", 3, 1, 2)])
def test_ds_ball_matches_naive(oracle, s, q, t, r):
    x = word(s, q)
    assert _codes(enum_ds_ball(x, BallSpec(t, r))) == oracle.ds_ball(x, t, r)


def test_small_ball_counts():
    assert len(enum_ds_ball(word("0000"), BallSpec(1, 2))) == 7
    assert len(enum_ds_ball(word("0110"), BallSpec(1, 1))) == 7
    assert len(enum_ds_ball(word("012", 3), BallSpec(1, 1))) == 8


def test_deletion_ball_is_distinct_run_deletions():
    x = word("0011010")
    assert len(enum_del_ball(x, 1)) == 5


def test_spec_needs_room():
    with pytest.raises(SpecError):
        enum_ds_ball(word("000"), BallSpec(1, 2))


def test_guardrail():
    with pytest.raises(GuardrailError):
        enum_sub_ball(Word((0,) * 25, 2), 1)
    assert len(enum_sub_ball(Word((0,) * 25, 2), 1, force=True)) == 26


def test_xi_0s_is_ball_volume():
    for q in (2, 3, 5):
        for n in range(1, 9):
            for s in range(4):
                assert xi_0s(q, n, s) == sum(comb(n, k) * (q - 1) ** k for k in range(min(s, n) + 1))


@pytest.mark.parametrize(
    "q,n,d,s,size",
    [(2, 6, 1, 2, 12), (2, 6, 2, 2, 12), (2, 6, 3, 2, 6), (2, 6, 4, 2, 6), (3, 5, 2, 2, 21), (3, 6, 1, 2, 33), (4, 5, 3, 2, 18), (3, 6, 3, 3, 99)],
)
def test_xi_ds_frozen(q, n, d, s, size):
    assert xi_ds(q, n, d, s) == size
    assert XiQuery(q, n, d, s).evaluate() == size


def test_xi_ds_against_naive(oracle):
    for q, n in [(2, 5), (3, 4), (4, 4)]:
        for s in (1, 2):
            u = Word((0,) * n, q)
            base = oracle.sub_ball(u, s)
            for d in range(1, min(n, 2 * s) + 1):
                up = Word((1,) * d + (0,) * (n - d), q)
                assert xi_ds(q, n, d, s) == len(base & oracle.sub_ball(up, s))


def test_xi_ds_domain():
    with pytest.raises(DomainError):
        xi_ds(2, 6, 0, 2)
    with pytest.raises(DomainError):
        xi_ds(2, 6, 5, 2)
    with pytest.raises(DomainError):
        xi_ds(2, 3, 4, 2)


def test_closed_forms_agree_with_sums():
    for q in range(2, 7):
        for length in range(4, 30):
            for d in range(1, 5):
                assert xi_d2_closed(q, length, d) == xi_ds(q, length, d, 2)
            assert xi_02_deleted_closed(q, length + 1) == xi_0s(q, length, 2)


def test_binary_specializations():
    for length in range(4, 20):
        assert xi_d2_closed(2, length, 1) == xi_d2_closed(2, length, 2) == 2 * length
        assert xi_d2_closed(2, length, 3) == xi_d2_closed(2, length, 4) == 6


def test_ternary_d2_value():
    # hand check: 2(q-1)n + q^2 - 6q + 6 with q=3, n=8
    assert xi_d2_closed(3, 7, 2) == 29


def test_sub2_intersection_size_edges():
    assert sub2_intersection_size(2, 6, 0) == xi_0s(2, 6, 2)
    assert sub2_intersection_size(2, 6, 5) == 0
    assert sub2_intersection_size(3, 6, 3) == 12

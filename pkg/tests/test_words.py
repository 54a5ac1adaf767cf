import pytest

from delsubrecon.errors import DimensionError, EmptySupportError, WordIndexError
from delsubrecon.words import Word, delete_at, hamming, run_index_of, run_profile, support_diff, word


def test_parse_round_trip():
    w = word("0120", 3)
    assert w.symbols == (0, 1, 2, 0)
    assert str(w) == "0120"
    assert Word.from_code(w.code, 4, 3) == w


def test_code_order_matches_lex_order():
    ws = sorted([word("110"), word("011"), word("101"), word("000")])
    assert [w.code for w in ws] == sorted(w.code for w in ws)


def test_symbol_out_of_alphabet():
    with pytest.raises(DimensionError):
        word("012", 2)


def test_empty_word_rejected():
    with pytest.raises(DimensionError):
        Word((), 2)


def test_hamming_and_support():
    x, y = word("01101"), word("11100")
    assert hamming(x, y) == 2
    assert support_diff(x, y).indices == (1, 5)


def test_support_of_equal_words():
    with pytest.raises(EmptySupportError):
        support_diff(word("010"), word("010"))


def test_length_mismatch():
    with pytest.raises(DimensionError):
        hamming(word("01"), word("010"))


def test_delete_at_is_one_based():
    assert str(delete_at(word("01234", 5), 1)) == "1234"
    assert str(delete_at(word("01234", 5), 5)) == "0123"
    with pytest.raises(WordIndexError):
        delete_at(word("01"), 3)


def test_run_profile():
    p = run_profile(word("0011120", 3))
    assert p.boundaries == (2, 5, 6, 7)
    assert p.run_lengths == (2, 3, 1, 1)
    assert p.m == 4


def test_run_profile_expand_round_trip():
    for s in ["0", "0101", "000111", "2201100"]:
        w = word(s, 3)
        assert run_profile(w).expand() == w


def test_run_index_of():
    x = word("001101")
    assert [run_index_of(x, i) for i in range(1, 7)] == [1, 1, 2, 2, 3, 4]

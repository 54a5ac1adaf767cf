import pytest

from delsubrecon.errors import CapacityError, DomainError, GuardrailError, LoadError
from delsubrecon.recon import (
    Code,
    ReadSet,
    ball_as_readset,
    channel_sample,
    decode,
    intersection_readset,
    is_reconstruction_code,
    load_code,
    membership_matrix,
    min_hamming_distance,
    parse_code_text,
    read_coverage,
    sample_distinct_reads,
    simulate,
)
from delsubrecon.words import word

REP = Code.from_strings(["0000", "1111"])


def test_parse_with_header_and_comments():
    c = parse_code_text("# demo\nq=3 n=4\n0120\n2101  # trailing\n\n")
    assert c.q == 3 and c.n == 4 and len(c) == 2
    assert not c.q_inferred


def test_parse_infers_alphabet():
    c = parse_code_text("0120\n1111\n")
    assert c.q == 3 and c.q_inferred
    assert parse_code_text("0000\n1111").q == 2


@pytest.mark.parametrize(
    "text",
    ["", "0000\n0000\n", "000\n1111\n", "q=2 n=4\n0120\n", "q=2 n=5\n0000\n", "0000\nq=2\n", "q=two\n0000\n"],
)
def test_parse_errors(text):
    with pytest.raises(LoadError):
        parse_code_text(text)


def test_parse_conflicting_q():
    with pytest.raises(LoadError):
        parse_code_text("q=3 n=4\n0000\n", q=2)


def test_load_missing(tmp_path):
    with pytest.raises(LoadError):
        load_code(tmp_path / "nope.txt")
    p = tmp_path / "c.txt"
    p.write_text("0000\n1111\n")
    assert load_code(p).words == REP.words


def test_min_distance():
    assert min_hamming_distance(REP) == 4
    assert min_hamming_distance(Code.even_weight(6)) == 2


def test_repetition_coverage(oracle):
    cov = read_coverage(REP)
    assert cov.nu == 6 and cov.threshold == 7 and cov.exact
    assert cov.nu == len(oracle.ds_ball(word("0000"), 1, 2) & oracle.ds_ball(word("1111"), 1, 2))
    assert is_reconstruction_code(REP, 7) and not is_reconstruction_code(REP, 6)


def test_even_weight_coverage():
    cov = read_coverage(Code.even_weight(8))
    assert cov.nu == 78
    assert cov.pairs_checked == 128 * 127 // 2


def test_coverage_needs_budget_when_large(monkeypatch):
    import delsubrecon.recon as r

    monkeypatch.setattr(r, "EXACT_PAIR_LIMIT", 10)
    C = Code.even_weight(6)
    with pytest.raises(GuardrailError):
        read_coverage(C)
    cov = read_coverage(C, sample_budget=20, rng_seed=4)
    assert not cov.exact and cov.pairs_checked == 20
    assert cov.nu <= read_coverage(C, exhaustive=True).nu


def test_readset_distinct():
    with pytest.raises(DomainError):
        ReadSet((word("000"), word("000")))


def test_decode_small():
    reads = ReadSet((word("001"), word("010")))
    assert decode(reads, REP) == {word("0000"), word("1111")}
    assert decode(ReadSet((word("000"),)), REP) == {word("0000")}


def test_membership_matches_balls():
    C = Code.from_strings(["010110", "111000", "001011"])
    src = word("010110")
    reads = list(ball_as_readset(src))
    mat = membership_matrix(reads, C)
    assert mat[C.words.index(src)].all()
    for i, c in enumerate(C.words):
        inter = set(intersection_readset(src, c)) if c != src else set(reads)
        assert {r for r, hit in zip(reads, mat[i]) if hit} == inter


def test_whole_intersection_is_ambiguous():
    reads = intersection_readset(word("0000"), word("1111"))
    assert len(reads) == 6
    assert decode(reads, REP) == set(REP.words)


def test_sampling_is_seeded():
    x = word("0110")
    a = sample_distinct_reads(x, 5, rng_seed=9)
    b = sample_distinct_reads(x, 5, rng_seed=9)
    assert a.reads == b.reads and len(a) == 5
    ball = set(ball_as_readset(x))
    assert set(a) <= ball
    assert channel_sample(x, "process", 3) in ball


def test_process_mode_stays_in_ball():
    x = word("01101", 3)
    r = sample_distinct_reads(x, 10, "process", 2)
    assert set(r) <= set(ball_as_readset(x))


def test_capacity_and_seed_errors():
    with pytest.raises(CapacityError) as e:
        sample_distinct_reads(word("0000"), 8, rng_seed=1)
    assert e.value.ball_size == 7
    with pytest.raises(DomainError):
        sample_distinct_reads(word("0000"), 3, rng_seed=None)
    with pytest.raises(DomainError):
        channel_sample(word("0000"), "bogus", 1)


def test_simulate_guarantee_and_ambiguity():
    ok = simulate(REP, 7, 200, seed=1)
    assert ok.unique_correct == 200 and ok.wrong == 0
    low = simulate(REP, 2, 200, seed=1)
    assert low.wrong == 0 and low.ambiguous > 0
    assert low.unique_correct + low.ambiguous == 200


def test_simulate_reproducible():
    a = simulate(REP, 3, 50, seed=8, mode="process")
    b = simulate(REP, 3, 50, seed=8, mode="process")
    assert a == b

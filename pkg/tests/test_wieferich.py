import random

import pytest
from hypothesis import given, strategies as st

import oracles
from barkerpairs.wieferich import (
    CheckpointMismatch,
    SearchTask,
    WieferichPair,
    format_pairs,
    is_wieferich,
    read_pairs,
    search_descending,
    search_pairs,
)


def test_is_wieferich_examples():
    assert is_wieferich(5, 53471161)
    assert is_wieferich(41, 138200401)
    assert not is_wieferich(3, 5)


def test_fermat_quotient_style_matches_plain_pow():
    rng = random.Random(3)
    ps = oracles.primes(3, 10**6)
    for _ in range(10**4):
        p, q = rng.choice(ps), rng.choice(ps)
        if p == q:
            continue
        # q^(p-1) = 1 mod p^2 iff the Fermat quotient vanishes mod p
        fq = (pow(q, p - 1, p * p) - 1) // p % p
        assert is_wieferich(q, p) == (fq == 0)


def test_search_examples():
    found = search_pairs(SearchTask((3, 100), (3, 1000)))
    assert WieferichPair(3, 11) in found
    filtered = search_pairs(SearchTask((3, 100), (3, 1000), (1, 4)))
    assert all(p % 4 == 1 and q % 4 == 1 for q, p in filtered)
    assert search_pairs(SearchTask((3, 100), (20, 10))) == []


def test_search_matches_double_loop_reduced_range():
    task = SearchTask((3, 3000), (3, 10**5), segment_size=12345)
    got = search_pairs(task)
    want = oracles.wieferich_pairs(oracles.primes(3, 3000), oracles.primes(3, 10**5))
    assert [tuple(x) for x in got] == want


@given(
    st.integers(min_value=2, max_value=500),
    st.integers(min_value=0, max_value=300),
    st.integers(min_value=2, max_value=5000),
    st.integers(min_value=0, max_value=5000),
    st.sampled_from([None, (1, 4), (3, 4), (1, 2)]),
    st.integers(min_value=1, max_value=3000),
)
def test_search_matches_double_loop(qlo, qw, plo, pw, cong, seg):
    task = SearchTask((qlo, qlo + qw), (plo, plo + pw), cong, seg)
    want = oracles.wieferich_pairs(
        [q for q in oracles.primes(qlo, qlo + qw, cong) if q > 2],
        [p for p in oracles.primes(plo, plo + pw, cong) if p > 2],
    )
    assert [tuple(x) for x in search_pairs(task)] == want


def test_search_descending_examples():
    assert (71, 3) in search_descending(71, 71)
    assert search_descending(1000003, 3) == []
    q = 138200401
    got = search_descending(q, 10**4, (1, 4))
    want = [(q, p) for p in oracles.primes(3, 10**4 - 1, (1, 4)) if pow(q, p - 1, p * p) == 1]
    assert [tuple(x) for x in got] == want


TASK = SearchTask((3, 400), (3, 60000), segment_size=5000)


def test_interrupt_resume_byte_identical(tmp_path):
    ref = tmp_path / "ref.txt"
    search_pairs(TASK, ref, tmp_path / "ref.ckpt")
    out, ck = tmp_path / "pairs.txt", tmp_path / "pairs.ckpt"
    for k in (1, 2, 3):
        search_pairs(TASK, out, ck, resume=k > 1, max_segments=k)
    # simulate a crash mid-segment: junk after the last committed boundary
    with open(out, "a") as fh:
        fh.write("3 59999\n")
    search_pairs(TASK, out, ck, resume=True)
    assert out.read_bytes() == ref.read_bytes()
    assert ck.read_text().split()[1] == str(60001)


def test_resume_against_other_task_refused(tmp_path):
    out, ck = tmp_path / "pairs.txt", tmp_path / "pairs.ckpt"
    search_pairs(TASK, out, ck, max_segments=2)
    other = SearchTask((3, 401), (3, 60000), segment_size=5000)
    with pytest.raises(CheckpointMismatch):
        search_pairs(other, out, ck, resume=True)


def test_worker_count_does_not_change_output(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    search_pairs(TASK, a, tmp_path / "a.ckpt", workers=1)
    search_pairs(TASK, b, tmp_path / "b.ckpt", workers=3)
    assert a.read_bytes() == b.read_bytes()


def test_pairs_file_roundtrip(tmp_path):
    pairs = search_pairs(TASK)
    path = tmp_path / "p.txt"
    path.write_text(format_pairs(pairs))
    assert read_pairs(path) == pairs
    assert pairs == sorted(pairs, key=lambda pr: (pr.p, pr.q))

import numpy as np
import pytest

from lzhybrid import KernelMatch, SuffixArrayIndex, build_inner, locate_approx, locate_exact
from oracles import approx_occurrences, occurrences


def naive_sa(text: bytes):
    return [i + 1 for i in sorted(range(len(text)), key=lambda i: text[i:])]


@pytest.mark.parametrize("text", [b"ab", b"banana", b"aaaa", b"mississippi"])
def test_suffix_array_small(text):
    assert build_inner(text).suffix_array.tolist() == naive_sa(text)


def test_suffix_array_random():
    rng = np.random.default_rng(4)
    for n in (1, 2, 17, 300):
        text = bytes(rng.integers(0, 3, n).astype(np.uint8))
        assert build_inner(text).suffix_array.tolist() == naive_sa(text)


def test_banana_locate():
    idx = build_inner(b"banana")
    assert locate_exact(idx, b"ana") == [KernelMatch(2, 4, 0), KernelMatch(4, 6, 0)]
    assert idx.exact_starts(b"x").size == 0
    assert idx.exact_starts(b"bananas").size == 0
    with pytest.raises(ValueError):
        idx.exact_starts(b"")


def test_reference_kernel_locate(bottles):
    from lzhybrid import HybridIndex
    kernel = HybridIndex(max_length=4, max_edits=1).fit(bottles).filtered_.kernel
    assert build_inner(kernel).exact_starts(b"99-b").tolist() == [1, 32]


def test_sa_bytes_round_trip():
    idx = build_inner(b"abracadabra" * 30)
    assert idx.entry_bytes == 2
    back = SuffixArrayIndex.from_sa_bytes(idx.text, idx.sa_bytes())
    assert np.array_equal(back.suffix_array, idx.suffix_array)
    with pytest.raises(ValueError):
        SuffixArrayIndex.from_sa_bytes(idx.text, idx.sa_bytes()[:-1])


def test_exact_vs_scan():
    rng = np.random.default_rng(9)
    text = bytes(rng.choice(list(b"ab#"), 2000).tolist())
    idx = build_inner(text)
    for m in (1, 2, 5, 9):
        for _ in range(20):
            s = int(rng.integers(0, len(text) - m))
            pat = text[s:s + m]
            want = [l for l, _ in occurrences(text, pat)]
            assert idx.exact_starts(pat).tolist() == want


def test_approx_vs_brute_force():
    rng = np.random.default_rng(12)
    text = bytes(rng.choice(list(b"acg#"), 250).tolist())
    for k in (0, 1, 2):
        for m in (1, 2, 4, 7):
            pat = bytes(rng.choice(list(b"acg"), m).tolist())
            got = [(h.i, h.j) for h in locate_approx(text, pat, k)]
            assert got == approx_occurrences(text, pat, k)
            for h in locate_approx(text, pat, k):
                assert h.dist <= k


def test_approx_bounds():
    from lzhybrid import QueryBoundsError
    with pytest.raises(QueryBoundsError):
        locate_approx(b"abc", b"abcd", 1, max_length=3, max_edits=1)
    with pytest.raises(QueryBoundsError):
        locate_approx(b"abc", b"ab", 2, max_length=3, max_edits=1)

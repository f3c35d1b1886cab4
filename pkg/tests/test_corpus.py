import numpy as np
import pytest

from lzhybrid.corpus import generate, mutate, perturb, random_text, sample_patterns
from lzhybrid.scan import find_approx, find_exact
from oracles import approx_occurrences, edit_distance, occurrences


def test_generate_deterministic():
    assert generate(1000, 4, 0.01, seed=3) == generate(1000, 4, 0.01, seed=3)
    assert generate(1000, 4, 0.01, seed=3) != generate(1000, 4, 0.01, seed=4)
    assert set(generate(1000, 2, 0.05)) <= set(b"ACGT")


def test_generate_edge_cases():
    assert generate(500, 1) == generate(500, 1, rate=0.5)
    assert len(generate(500, 1)) == 500
    exact = generate(500, 3, rate=0.0)
    assert exact == exact[:500] * 3
    with pytest.raises(ValueError):
        generate(10, 2, rate=1.5)
    with pytest.raises(ValueError):
        generate(0)


def test_mutate_rate():
    rng = np.random.default_rng(0)
    codes = rng.integers(0, 4, 20_000)
    out = mutate(codes, 0.01, 4, rng)
    assert abs(out.size - codes.size) < 200
    assert np.array_equal(mutate(codes, 0.0, 4, rng), codes)


def test_random_text():
    t = random_text(1000, seed=1, alphabet=b"xy")
    assert len(t) == 1000 and set(t) == set(b"xy")


def test_sample_patterns_non_unary():
    rng = np.random.default_rng(1)
    text = b"aaaaaaaaab" + b"c" * 50
    for p in sample_patterns(text, 5, 200, rng):
        assert len(p) == 5 and len(set(p)) > 1
        assert p in text
    assert all(len(p) == 1 for p in sample_patterns(text, 1, 20, rng))
    with pytest.raises(ValueError):
        sample_patterns(b"aaaa", 3, 1, rng)
    with pytest.raises(ValueError):
        sample_patterns(b"ab", 3, 1, rng)


def test_perturb():
    rng = np.random.default_rng(2)
    for _ in range(200):
        q = perturb(b"ACGTAC", 2, rng)
        assert 1 <= len(q) and edit_distance(q, b"ACGTAC") <= 2
    assert perturb(b"A", 5, rng)


def test_scan_exact():
    rng = np.random.default_rng(3)
    text = bytes(rng.choice(list(b"ab"), 500).tolist())
    for pat in (b"a", b"ab", b"abb", b"babab"):
        s, e = find_exact(text, pat)
        assert list(zip(s.tolist(), e.tolist())) == occurrences(text, pat)
    assert find_exact(b"ab", b"abc")[0].size == 0


def test_scan_approx_vs_dp():
    rng = np.random.default_rng(4)
    text = bytes(rng.choice(list(b"abc"), 300).tolist())
    for k in (1, 2, 3):
        for m in (1, 2, 3, 6):
            pat = bytes(rng.choice(list(b"abc"), m).tolist())
            s, e = find_approx(text, pat, k)
            assert list(zip(s.tolist(), e.tolist())) == approx_occurrences(text, pat, k)

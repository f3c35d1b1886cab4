import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzhybrid import (FilterParams, SourceGrid, build_filtered, build_grid, covering_sources,
                      expand_secondaries, parse)
from oracles import brute_cover, is_primary, naive_parse, occurrences, phrase_boundaries


def grid_for(text, g=2, b=4, block_size=4):
    p = parse(text)
    ft = build_filtered(text, p, FilterParams(4, 0, sep=0), g, b)
    return p, build_grid(p, ft.L, g, b, block_size=block_size)


def naive_points(text):
    """(x, y, phrase start) for every copy phrase, sorted by x then parse order."""
    pts = []
    pos = 1
    for ph in naive_parse(text):
        if ph[0] == "C":
            pts.append((ph[1], ph[1] + ph[2] - 1, pos))
            pos += ph[2]
        else:
            pos += 1
    return sorted(pts, key=lambda t: t[0])


def test_reference_points(bottles):
    _, grid = grid_for(bottles)
    assert grid.points()[:3] == [(1, 1, 2), (1, 19, 32), (1, 1, 84)]
    assert grid.covering_sources(4, 10) == [(1, 32), (3, 86), (3, 200), (3, 314)]


def test_no_copies():
    _, grid = grid_for(b"ab")
    assert len(grid) == 0
    assert grid.points() == []
    assert grid.covering_sources(1, 1) == []
    occ = grid.expand([1], [1])
    assert list(occ) == [(1, 1, "primary")]


def test_points_and_y():
    rng = np.random.default_rng(0)
    text = bytes(rng.choice(list(b"ab"), 600).tolist())
    _, grid = grid_for(text)
    assert grid.points() == naive_points(text)
    for t, (x, y, s) in enumerate(grid.points(), 1):
        assert grid.y_at(t) == y
        assert grid.satellite(t) == s


def test_covering_vs_brute_force():
    rng = np.random.default_rng(1)
    text = bytes(rng.choice(list(b"abc"), 3000).tolist())
    text = text + text[:1000] + b"c" + text[1001:2500]
    _, grid = grid_for(text, g=4, b=8, block_size=8)
    pts = grid.points()
    for _ in range(500):
        l = int(rng.integers(1, len(text) + 1))
        r = l + int(rng.integers(0, 40))
        assert sorted(covering_sources(grid, l, r)) == brute_cover(pts, l, r)


def expand_and_compare(text, pat, grid):
    starts, literals = phrase_boundaries(naive_parse(text))
    occ = occurrences(text, pat)
    prim = [(l, r) for l, r in occ if is_primary(starts, literals, l, r)]
    out = expand_secondaries(grid, prim) if prim else None
    got = [] if out is None else [(l, r) for l, r, _ in out]
    assert len(got) == len(set(got)), "duplicate occurrence"
    assert sorted(got) == occ
    if out is not None:
        tags = [t for _, _, t in out]
        assert tags == ["primary"] * len(prim) + ["secondary"] * (len(got) - len(prim))


def test_expand_matches_naive():
    rng = np.random.default_rng(2)
    base = bytes(rng.choice(list(b"acgt"), 500).tolist())
    text = base + base[:200] + b"a" + base[201:] + base + base[::-1]
    _, grid = grid_for(text)
    for _ in range(300):
        m = int(rng.integers(1, 12))
        s = int(rng.integers(0, len(text) - m))
        expand_and_compare(text, text[s:s + m], grid)


def test_serialization_sections(bottles):
    p, grid = grid_for(bottles)
    back = SourceGrid.from_sections(grid.X, grid.satellites_bytes(), grid.rmq.to_bytes(), grid.L)
    assert back.points() == grid.points()
    assert back.satellites_bytes() == grid.satellites_bytes()
    with pytest.raises(ValueError):
        SourceGrid.from_sections(grid.X, grid.satellites_bytes()[:-1], grid.rmq.to_bytes(), grid.L)


def test_satellite_count_checked(bottles):
    p, grid = grid_for(bottles)
    with pytest.raises(ValueError):
        SourceGrid(grid.X, grid.satellites()[:-1], grid.L)


@pytest.mark.property
@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from(b"ab"), min_size=1, max_size=400).map(bytes),
       st.integers(1, 9), st.data())
def test_covering_sources_vs_filter(text, bs, data):
    _, grid = grid_for(text, block_size=bs)
    pts = grid.points()
    assert pts == naive_points(text)
    l = data.draw(st.integers(1, len(text)))
    r = data.draw(st.integers(l, len(text)))
    assert sorted(grid.covering_sources(l, r)) == brute_cover(pts, l, r)


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(b"abc"), min_size=2, max_size=300).map(bytes), st.data())
def test_expansion_complete(text, data):
    _, grid = grid_for(text)
    l = data.draw(st.integers(1, len(text)))
    r = data.draw(st.integers(l, min(len(text), l + 6)))
    expand_and_compare(text, text[l - 1:r], grid)

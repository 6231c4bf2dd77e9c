import pytest

from eqpath.brouwer import (
    ColoringError,
    basic_coloring,
    compile_dgp_coloring,
    corridor_coloring,
    follow_chromatic_path,
    scan_panchromatic,
)
from eqpath.instances import follow_line, gen_path_instance, gen_random_instance


def test_exterior_rule():
    col = basic_coloring(3)
    assert col.color(0, 5, 5) == 1
    assert col.color(3, 0, 7) == 2
    assert col.color(4, 2, 0) == 3
    assert col.color(7, 3, 3) == 0
    assert col.color(3, 7, 3) == 0
    assert col.color(2, 2, 2) == 0


def test_exterior_rule_exhaustive():
    col = basic_coloring(3)
    N = col.N
    for i in range(N):
        for j in range(N):
            for k in range(N):
                c = col.color(i, j, k)
                if i == 0:
                    assert c == 1
                elif j == 0:
                    assert c == 2
                elif k == 0:
                    assert c == 3
                elif N - 1 in (i, j, k):
                    assert c == 0
                else:
                    assert c == 0  # basic: interior all 0


def test_basic_unique_panchromatic():
    for m in (2, 3, 4):
        assert scan_panchromatic(basic_coloring(m)) == [(1, 1, 1)]


def test_basic_rejected_by_walker():
    with pytest.raises(ColoringError):
        follow_chromatic_path(basic_coloring(3))


def test_corridor_panchromatic_scan():
    col, emb = corridor_coloring(4, 3)
    assert scan_panchromatic(col) == sorted(emb.planned_pan)
    assert emb.b(0) == (1, 1, 0)
    assert emb.b(3) == (7, 1, 1)
    assert scan_panchromatic(col) == [(7, 1, 1)]


def test_corridor_walker():
    col, emb = corridor_coloring(4, 2)
    assert follow_chromatic_path(col) == (5, 1, 1)
    assert emb.b_inv((5, 1, 1)) == 2


def _check_dgp(g, reversal=False):
    col, emb = compile_dgp_coloring(g, reversal_mode=reversal)
    end = follow_line(g)
    pans = scan_panchromatic(col)
    assert pans == sorted(emb.planned_pan), (pans, sorted(emb.planned_pan))
    assert emb.b(0) == (1, 1, 0)
    walked = follow_chromatic_path(col)
    assert walked == emb.b(end)
    assert emb.b_inv(walked) == end
    return col, emb


def test_dgp_single_arc():
    g = gen_path_instance(3, list(range(8)), 1)
    col, emb = _check_dgp(g)
    assert scan_panchromatic(col) == [emb.b(1)]


def test_dgp_two_arc_path():
    g = gen_path_instance(3, [0, 3, 5, 1, 2, 4, 6, 7], 2)
    _check_dgp(g)


def test_dgp_random_paths():
    for seed in (1, 2, 5):
        g = gen_random_instance(3, 2 + seed, seed=seed)
        _check_dgp(g)


def test_dgp_reversal_mode():
    g = gen_path_instance(3, list(range(8)), 2)
    col, emb = _check_dgp(g, reversal=True)
    assert emb.planned_traversals == 4


def test_dgp_longest_n3():
    g = gen_random_instance(3, 7, seed=42)
    _check_dgp(g)


def test_dgp_n4():
    g = gen_random_instance(4, 9, seed=9)
    col, emb = compile_dgp_coloring(g)
    end = follow_line(g)
    assert follow_chromatic_path(col) == emb.b(end)
    assert scan_panchromatic(col) == sorted(emb.planned_pan)

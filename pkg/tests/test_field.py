import random
from fractions import Fraction

import pytest

from eqpath.brouwer import BrouwerColoring, basic_coloring, corridor_coloring
from eqpath.field import (
    GateCircuit,
    CircuitError,
    const_circuit,
    alpha_for,
    delta_vectors,
    implement_coloring,
    modify_reversals,
    homotopy_eval,
    homotopy_circuit,
)
from eqpath.rational import rat, linf, vsub


def F(a, b=1):
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# Gate circuits


def test_const_circuit():
    c = const_circuit((F(1, 2), F(1, 2), F(1, 2)))
    assert c.eval((0, 1, F(1, 3))) == (F(1, 2), F(1, 2), F(1, 2))


def test_sum_clips():
    c = GateCircuit()
    s = c.add("SUM", 0, 1)
    c.set_outputs(s, s, s)
    assert c.eval((F(3, 4), F(1, 2), 0))[0] == 1


def test_diff_clips_at_zero():
    c = GateCircuit()
    d = c.add("DIFF", 0, 1)
    c.set_outputs(d, d, d)
    assert c.eval((F(1, 4), F(3, 4), 0))[0] == 0
    assert c.eval((F(3, 4), F(1, 4), 0))[0] == F(1, 2)


def test_comparator():
    c = GateCircuit()
    g = c.add("COMPARATOR", 0, 1)
    c.set_outputs(g, g, g)
    assert c.eval((F(1, 4), F(3, 4), 0))[0] == 0
    assert c.eval((F(3, 4), F(1, 4), 0))[0] == 1
    # ties resolve to 1
    assert c.eval((F(1, 2), F(1, 2), 0))[0] == 1


def test_scale_and_minmax():
    c = GateCircuit()
    s = c.add("SCALE", 0, const=F(1, 3))
    mx = c.add("MAX", s, 1)
    mn = c.add("MIN", s, 1)
    c.set_outputs(s, mx, mn)
    got = c.eval((F(3, 4), F(1, 8), 0))
    assert got == (F(1, 4), F(1, 4), F(1, 8))


def test_json_roundtrip():
    c = GateCircuit()
    s = c.add("SCALE", 0, const=F(2, 7))
    k = c.add("CONST", const=F(1, 3))
    m = c.add("MAX", s, k)
    c.set_outputs(m, m, k)
    c2 = GateCircuit.from_json(c.to_json())
    for _ in range(20):
        x = tuple(F(random.randrange(0, 101), 100) for _ in range(3))
        assert c.eval(x) == c2.eval(x)


def test_bad_gates_rejected():
    c = GateCircuit()
    with pytest.raises(CircuitError):
        c.add("SUM", 0)
    with pytest.raises(CircuitError):
        c.add("SCALE", 0, const=2)
    with pytest.raises(CircuitError):
        c.add("SUM", 0, 99)


# ---------------------------------------------------------------------------
# Interpolated fields


def rand_point(rng, denom=997):
    return tuple(F(rng.randrange(0, denom + 1), denom) for _ in range(3))


def test_center_displacements():
    col = basic_coloring(3)
    f = implement_coloring(col)
    a = alpha_for(3)
    h = F(1, 8)
    # center of an i=0 cubelet: exterior color 1
    x = (h / 2, h * 3 + h / 2, h * 4 + h / 2)
    assert vsub(f.eval(x), x) == (a, 0, 0)
    # interior center: color 0
    x = (h * 3 + h / 2, h * 3 + h / 2, h * 4 + h / 2)
    assert vsub(f.eval(x), x) == (-a, -a, -a)


def test_vertex_all_zero_neighbors():
    col = basic_coloring(3)
    f = implement_coloring(col)
    a = alpha_for(3)
    # all 8 cubelets around (4,4,4)/8 are interior, hence colored 0
    x = (F(1, 2), F(1, 2), F(1, 2))
    assert f.displacement(x) == (-a, -a, -a)


def test_edge_midpoint_between_colors_1_and_2():
    # Paint two 3x3 slabs of colors 1 and 2; the midpoint of the segment
    # joining two facing centers sees half of each displacement.
    paint = {}
    for j in range(2, 5):
        for k in range(2, 5):
            paint[(3, j, k)] = 1
            paint[(4, j, k)] = 2
    col = BrouwerColoring(3, "test", paint=paint)
    f = implement_coloring(col)
    a = alpha_for(3)
    h = F(1, 8)
    x = (h * 4, h * 3 + h / 2, h * 3 + h / 2)
    assert f.displacement(x) == (a / 2, a / 2, 0)


def test_weights_are_local_convex_combination():
    col, _ = corridor_coloring(4, 5)
    f = implement_coloring(col)
    rng = random.Random(7)
    for _ in range(60):
        x = rand_point(rng)
        w = f.weights(x)
        assert sum(w.values()) == 1
        assert all(wi >= 0 for wi in w.values())
        home = f.locate(x)
        recon = (rat(0), rat(0), rat(0))
        for cell, wi in w.items():
            assert all(abs(cell[a] - home[a]) <= 1 for a in range(3))
            d = f.center_disp(cell)
            recon = tuple(r + wi * di for r, di in zip(recon, d))
        assert recon == f.displacement(x)


def test_face_value_agrees_from_both_sides():
    col, _ = corridor_coloring(4, 6)
    f = implement_coloring(col)
    h = F(1, 16)
    rng = random.Random(3)
    for _ in range(25):
        i = rng.randrange(1, 15)
        x = (h * i,
             h * rng.randrange(0, 16) + h * F(rng.randrange(1, 7), 7),
             h * rng.randrange(0, 16) + h * F(rng.randrange(1, 7), 7))
        cell_lo = (i - 1, int(x[1] / h), int(x[2] / h))
        cell_hi = (i, cell_lo[1], cell_lo[2])
        assert f.displacement(x, cell=cell_lo) == f.displacement(x, cell=cell_hi)


def test_affine_piece_matches_displacement():
    col, _ = corridor_coloring(4, 4)
    f = implement_coloring(col)
    rng = random.Random(11)
    for _ in range(40):
        x = rand_point(rng)
        A, b = f.affine_piece(x)
        got = tuple(sum(A[r][c] * x[c] for c in range(3)) + b[r]
                    for r in range(3))
        assert got == f.displacement(x)


def test_lipschitz_bound_samples():
    col, _ = corridor_coloring(4, 5)
    f0 = implement_coloring(basic_coloring(4))
    f1 = implement_coloring(col)
    bound = 2 * F(1, 16)
    rng = random.Random(5)
    for _ in range(50):
        x = rand_point(rng)
        y = rand_point(rng)
        t = F(rng.randrange(0, 11), 10)
        dx = vsub(homotopy_eval(f0, f1, t, x), x)
        dy = vsub(homotopy_eval(f0, f1, t, y), y)
        lhs = linf(vsub(dx, dy))
        rhs = bound * linf(vsub(x, y))
        assert lhs <= rhs


def test_homotopy_endpoints_exact():
    f0 = implement_coloring(basic_coloring(3))
    f1 = implement_coloring(corridor_coloring(3, 3)[0])
    rng = random.Random(9)
    for _ in range(100):
        x = rand_point(rng)
        assert homotopy_eval(f0, f1, 0, x) == f0.eval(x)
        assert homotopy_eval(f0, f1, 1, x) == f1.eval(x)


def test_homotopy_worked_value():
    # coordinate value max(min(1/4, 3/4), clip(1/4 - 1/2) + clip(3/4 - 1/2))
    f0 = const_circuit((F(1, 4), F(1, 4), F(1, 4)))
    f1 = const_circuit((F(3, 4), F(3, 4), F(3, 4)))
    got = homotopy_eval(f0, f1, F(1, 2), (0, 0, 0))
    assert got == (F(1, 4), F(1, 4), F(1, 4))


def test_homotopy_circuit_matches_eval():
    f0 = GateCircuit()
    s = f0.add("SCALE", 0, const=F(1, 2))
    k = f0.add("CONST", const=F(2, 3))
    f0.set_outputs(s, k, 2)
    f1 = GateCircuit()
    d = f1.add("DIFF", 1, 0)
    m = f1.add("MAX", d, 2)
    f1.set_outputs(d, m, m)
    rng = random.Random(13)
    for _ in range(40):
        x = rand_point(rng, denom=53)
        for tnum in range(0, 11):
            t = F(tnum, 10)
            hc = homotopy_circuit(f0, f1, t)
            assert hc.eval(x) == homotopy_eval(f0, f1, t, x)


def test_homotopy_above_pointwise_min():
    f0 = implement_coloring(basic_coloring(3))
    f1 = implement_coloring(corridor_coloring(3, 3)[0])
    rng = random.Random(17)
    for _ in range(50):
        x = rand_point(rng)
        t = F(rng.randrange(0, 101), 100)
        y = homotopy_eval(f0, f1, t, x)
        y0 = f0.eval(x)
        y1 = f1.eval(x)
        assert all(c >= min(a, b) for c, a, b in zip(y, y0, y1))


def test_reversal_scaling():
    col = basic_coloring(5)
    f = modify_reversals(implement_coloring(col))
    a = alpha_for(5)
    h = F(1, 32)
    # center in the x10 slab (k=11), exterior color 1 at i=0
    x = (h / 2, h * 5 + h / 2, h * 11 + h / 2)
    assert vsub(f.eval(x), x) == (10 * a, 0, 0)
    # center in the x1/10 slab (k=21), exterior color 2 at j=0, i>0
    x = (h * 5 + h / 2, h / 2, h * 21 + h / 2)
    assert vsub(f.eval(x), x) == (0, a / 10, 0)
    # center outside both slabs: unchanged
    x = (h / 2, h * 5 + h / 2, h * 15 + h / 2)
    assert vsub(f.eval(x), x) == (a, 0, 0)

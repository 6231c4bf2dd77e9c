"""Tests for the homotopy path follower, decoding, and reversal counting."""

from eqpath.brouwer import (
    basic_coloring,
    compile_dgp_coloring,
    refine_coloring,
    scan_panchromatic,
)
from eqpath.field import homotopy_eval, implement_coloring
from eqpath.fixpath import (
    PathTrace,
    check_band_claims,
    count_reversals,
    decode_fixpoint,
    find_f0_fixpoint,
    follow_browder_path,
    grid_bfs,
    linear_parameter,
)
from eqpath.instances import follow_line, gen_path_instance, gen_random_instance
from eqpath.pipeline import instance_fields, solve_instance
from eqpath.rational import linf, rat, vsub


def test_f0_fixpoint_exact():
    f0 = implement_coloring(basic_coloring(3))
    x = find_f0_fixpoint(f0)
    h = rat(1, 8)
    assert linf(vsub(x, (h, h, h))) <= h
    assert f0.eval(x) == x


def test_trivial_homotopy_keeps_start():
    f0 = implement_coloring(basic_coloring(3))
    x0 = find_f0_fixpoint(f0)
    end, trace = follow_browder_path(f0, f0)
    assert end == x0
    assert all(p[1:] == x0 for p in trace.points)


def test_grid_oracle_trivial_homotopy():
    f0 = implement_coloring(basic_coloring(3))
    end, _ = grid_bfs(f0, f0, pitch_div=1, max_nodes=100_000)
    x0 = find_f0_fixpoint(f0)
    assert linf(vsub(end, x0)) <= f0.alpha


def test_single_arc_follow_and_decode():
    g = gen_path_instance(3, list(range(8)), 1)
    f0, f1, fcol, femb = instance_fields(g)
    x, trace = follow_browder_path(f0, f1, verify=True)
    # endpoint is an exact fixpoint of the target field
    assert f1.eval(x) == x
    assert set(scan_panchromatic(fcol)) == set(femb.planned_pan)
    assert decode_fixpoint(x, fcol, femb) == 1
    assert trace.points[0][0] == 0 and trace.points[-1][0] == 1


def test_random_instances_decode_to_line_end():
    for seed in range(3):
        g = gen_random_instance(3, 2 + seed, seed=seed)
        line, x, trace = solve_instance(g)
        assert line == follow_line(g)


def test_trace_records_residual_and_step():
    g = gen_path_instance(3, list(range(8)), 1)
    f0, f1, _, _ = instance_fields(g)
    x, trace = follow_browder_path(f0, f1)
    assert trace.max_record_step() <= trace.alpha
    # every junction is an exact fixpoint of the homotopy
    for t, *p in trace.points[:: max(1, len(trace.points) // 40)]:
        p = tuple(p)
        assert homotopy_eval(f0, f1, t, p) == p


def test_count_reversals_examples():
    lo, hi = rat(1, 10), rat(9, 10)

    def tr(ts):
        return PathTrace(3, [(t, 0, 0, 0) for t in ts])

    assert count_reversals(tr([rat(0), rat(1, 2), rat(1)])) == 1
    assert count_reversals(tr([lo, hi, lo, hi])) == 3
    assert count_reversals(tr([lo, rat(1, 2), lo])) == 0


def test_linear_parameter_endpoints():
    alpha = rat(1, 64)
    assert linear_parameter(rat(1), alpha) == 1
    assert linear_parameter(rat(1) - alpha, alpha) == rat(1, 2)


def test_reversal_instance_bands_and_count():
    arcs = 2
    g = gen_random_instance(3, arcs, seed=7)
    line, x, trace = solve_instance(g, reversal_mode=True)
    assert line == follow_line(g)
    assert count_reversals(trace) >= 2 * arcs
    bands = check_band_claims(trace)
    assert bands["ok"]
    assert bands["r1_max_t"] <= rat(1, 4)
    assert bands["r2_min_t"] >= rat(3, 4)


def test_decode_tolerates_offset_points():
    g = gen_path_instance(3, list(range(8)), 1)
    col, emb = compile_dgp_coloring(g)
    fcol, femb = refine_coloring(col, emb, 1)
    (v,) = femb.planned_pan
    h = rat(1, fcol.N)
    x = tuple(h * c for c in v)
    assert decode_fixpoint(x, fcol, femb) == 1
    x2 = tuple(c + h / 2 for c in x)
    assert decode_fixpoint(x2, fcol, femb) == 1

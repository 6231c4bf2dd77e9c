import pytest

from eqpath.instances import (
    BooleanCircuit,
    InstanceError,
    circuit_from_table,
    eval_circuit,
    follow_line,
    gen_path_instance,
    gen_random_instance,
    int_to_bits,
    load_instance,
    save_instance,
)


def test_eval_not_gate():
    c = BooleanCircuit(1, [("INPUT", 0), ("NOT", 0)], [1])
    assert eval_circuit(c, (1,)) == (0,)
    assert eval_circuit(c, (0,)) == (1,)


def test_eval_identity_circuit():
    c = BooleanCircuit(3, [("INPUT", 0), ("INPUT", 1), ("INPUT", 2)], [0, 1, 2])
    assert eval_circuit(c, (0, 1, 1)) == (0, 1, 1)


def test_eval_arity_mismatch():
    c = BooleanCircuit(2, [("INPUT", 0), ("INPUT", 1)], [0, 1])
    with pytest.raises(InstanceError):
        eval_circuit(c, (0, 1, 0))


def test_truth_table_circuit_roundtrip():
    table = [3, 0, 2, 1]
    c = circuit_from_table(table, 2)
    for v in range(4):
        bits = eval_circuit(c, int_to_bits(v, 2))
        assert sum(b << i for i, b in enumerate(bits)) == table[v]


def test_gen_path_smallest():
    g = gen_path_instance(2, [0, 1, 2, 3], 1)
    assert g.arcs() == [(0, 1)]
    assert g.S(0) == 1
    assert follow_line(g) == 1


def test_gen_path_permuted():
    g = gen_path_instance(2, [0, 3, 1, 2], 2)
    assert sorted(g.arcs()) == [(0, 3), (3, 1)]
    assert follow_line(g) == 1


def test_gen_path_invariants_random():
    g = gen_random_instance(3, 5, seed=7)
    g.validate()
    path = g.path_from_zero()
    assert len(path) == 6
    assert follow_line(g) == path[-1]


def test_gen_path_rejects_bad_perm():
    with pytest.raises(InstanceError):
        gen_path_instance(2, [1, 0, 2, 3], 1)
    with pytest.raises(InstanceError):
        gen_path_instance(2, [0, 1, 2, 3], 4)


def test_degree_bounds_exhaustive():
    for seed in range(10):
        g = gen_random_instance(3, 4 + seed % 4, seed=seed)
        indeg = {}
        outdeg = {}
        for v, w in g.arcs():
            outdeg[v] = outdeg.get(v, 0) + 1
            indeg[w] = indeg.get(w, 0) + 1
        assert all(d <= 1 for d in indeg.values())
        assert all(d <= 1 for d in outdeg.values())


def test_follow_line_terminates_within_bound():
    g = gen_random_instance(4, 11, seed=3)
    assert len(g.path_from_zero()) <= 1 << 4


def test_instance_json_roundtrip(tmp_path):
    g = gen_random_instance(3, 6, seed=11)
    p = tmp_path / "inst.json"
    save_instance(g, p)
    g2 = load_instance(p)
    assert g2.n == g.n
    for v in range(8):
        assert g2.S(v) == g.S(v)
        assert g2.P(v) == g.P(v)
    assert follow_line(g2) == follow_line(g)

"""Tests for graphical games, gate gadgets, switches, and bipartition."""

import random

from eqpath.field import const_circuit
from eqpath.graphgames import (
    GraphicalGame,
    GraphicalGameError,
    add_affine_gadget,
    add_switch,
    bias_player,
    build_gate_gadget,
    build_simulating_game,
    eval_profile_expression,
    is_epsilon_ne,
    make_bipartite,
    random_reader_game,
)
from eqpath.rational import rat

import pytest


def _clip(v):
    return min(max(v, rat(0)), rat(1))


def _settle(gg, fixed):
    """Fixed-point iterate the affine-gadget outputs from `fixed` until
    the profile stabilizes; works for feed-forward gadget networks."""
    profile = {p: rat(0) for p in gg.players}
    profile.update(fixed)
    outs = [p for p in gg.players
            if p + "#aux" in gg.players and p not in fixed]
    for _ in range(len(gg.players) + 2):
        changed = False
        for v in outs:
            val = eval_profile_expression(gg, profile, v)
            expr = gg.expected_payoff(v + "#aux", 1, profile)
            # the auxiliary is strict when the expression clips past the
            # cube and indifferent (play 1/2) otherwise
            aux = rat(1) if expr > 1 else rat(0) if expr < 0 else rat(1, 2)
            if profile[v] != val or profile[v + "#aux"] != aux:
                changed = True
            profile[v] = val
            profile[v + "#aux"] = aux
        if not changed:
            return profile
    raise AssertionError("gadget network did not settle")


def test_affine_gadget_exact_ne():
    gg = GraphicalGame()
    gg.add_player("a")
    gg.add_player("b")
    add_affine_gadget(gg, "out", ["a", "b"], [rat(1, 2), rat(1, 3)],
                      rat(1, 8))
    gg.validate()
    for pa, pb in [(rat(0), rat(0)), (rat(1), rat(1)),
                   (rat(1, 4), rat(3, 4)), (rat(7, 8), rat(1, 16))]:
        profile = _settle(gg, {"a": pa, "b": pb})
        assert profile["out"] == _clip(rat(1, 8) + pa / 2 + pb / 3)
        ok, reg = is_epsilon_ne(gg, profile, rat(0),
                                players=["out", "out#aux"])
        assert ok, reg


@pytest.mark.parametrize("op,a,b,const,expect", [
    ("SUM", rat(1, 3), rat(1, 4), None, rat(7, 12)),
    ("SUM", rat(3, 4), rat(1, 2), None, rat(1)),      # clipped
    ("DIFF", rat(1, 4), rat(3, 4), None, rat(0)),     # clipped
    ("DIFF", rat(3, 4), rat(1, 4), None, rat(1, 2)),
    ("SCALE", rat(1, 3), None, rat(3, 2), rat(1, 2)),
    ("CONST", None, None, rat(2, 7), rat(2, 7)),
    ("MAX", rat(1, 3), rat(2, 3), None, rat(2, 3)),
    ("MAX", rat(7, 8), rat(1, 8), None, rat(7, 8)),
    ("MIN", rat(1, 3), rat(2, 3), None, rat(1, 3)),
    ("MIN", rat(7, 8), rat(1, 8), None, rat(1, 8)),
    ("COMPARATOR", rat(1, 4), rat(3, 4), None, rat(0)),
    ("COMPARATOR", rat(3, 4), rat(1, 4), None, rat(1)),
])
def test_gate_gadget_equilibrium_values(op, a, b, const, expect):
    gg = GraphicalGame()
    ins = []
    fixed = {}
    for name, val in (("a", a), ("b", b)):
        if val is not None:
            gg.add_player(name)
            ins.append(name)
            fixed[name] = val
    build_gate_gadget(gg, op, ins, "out", const=const)
    gg.validate()
    if op == "COMPARATOR":
        profile = dict(fixed)
        profile["out"] = expect
    else:
        profile = _settle(gg, fixed)
    assert profile["out"] == expect
    movers = [p for p in gg.players if p not in fixed]
    ok, reg = is_epsilon_ne(gg, profile, rat(0), players=movers)
    assert ok, (op, reg)


def test_simulating_game_fixpoint_is_ne():
    point = (rat(1, 3), rat(2, 5), rat(7, 8))
    gg, coords = build_simulating_game(const_circuit(point))
    profile = _settle(gg, {})
    for c, v in zip(coords, point):
        assert profile[c] == v
    ok, reg = is_epsilon_ne(gg, profile, rat(0))
    assert ok, reg


def _pin(value, reference):
    """Equilibrium value and aux value of a rewired source coordinate
    whose auxiliary compares its constant expression against the combined
    coordinate `reference`."""
    if value > reference:
        return rat(1), rat(1)
    if value < reference:
        return rat(0), rat(0)
    return value, rat(1, 2)


def _switch_equilibrium(gg, switch, s, coords0, x0, coords1, x1, targets):
    """Exact equilibrium of a switched pair of constant-map games, given
    the intended combined coordinate values `targets`."""
    fixed = {switch: s}
    for cs, xs in ((coords0, x0), (coords1, x1)):
        for c, v, p in zip(cs, xs, targets):
            fixed[c], fixed[c + "#aux"] = _pin(v, p)
    return _settle(gg, fixed)


@pytest.mark.parametrize("s,pick", [(rat(0), 0), (rat(1), 1),
                                    (rat(1, 3), None)])
def test_switch_combined_coordinates(s, pick):
    x0 = (rat(1, 4), rat(1, 4), rat(1, 4))
    x1 = (rat(3, 4), rat(1, 2), rat(5, 8))
    gg1, coords1 = build_simulating_game(const_circuit(x1), prefix="g1/")
    gg0, coords0 = build_simulating_game(const_circuit(x0), prefix="g0/")
    gg, coords, switch = add_switch(gg1, coords1, gg0, coords0, "s")
    gg.validate()
    # at s=0 the combined coordinates carry the first map's values, at
    # s=1 the second's; strictly between two separated values they sit
    # at s itself (the clipped combination's interior fixed point)
    if pick is None:
        want = tuple(s for _ in coords)
        assert all(a < s < b for a, b in zip(x0, x1))
    else:
        want = (x0, x1)[pick]
    profile = _switch_equilibrium(gg, switch, s, coords0, x0, coords1, x1,
                                  want)
    assert tuple(profile[c] for c in coords) == want
    movers = [p for p in gg.players if p != switch]
    ok, reg = is_epsilon_ne(gg, profile, rat(0), players=movers)
    assert ok, (s, reg)


def test_bias_player_moves_best_response():
    gg = GraphicalGame()
    gg.add_player("p")
    bias_player(gg, "p", 1, rat(1, 4))
    # with a pure positive bias on action 1, only p=1 is a best response
    ok, _ = is_epsilon_ne(gg, {"p": rat(1)}, rat(0))
    assert ok
    ok, _ = is_epsilon_ne(gg, {"p": rat(0)}, rat(0))
    assert not ok


def test_make_bipartite_breaks_odd_cycle():
    gg = GraphicalGame()
    for name in "abc":
        gg.add_player(name)
    # odd cycle: a reads b, b reads c, c reads a
    gg.add_term("a", "b", [[rat(0), rat(0)], [rat(0), rat(1)]])
    gg.add_term("b", "c", [[rat(0), rat(0)], [rat(0), rat(1)]])
    gg.add_term("c", "a", [[rat(0), rat(1)], [rat(0), rat(0)]])
    gg2 = make_bipartite(gg)
    gg2.validate()
    assert gg2.bipartition is not None
    gg2.check_bipartition()
    for p in gg2.players:
        for q in gg2.neighbors.get(p, []):
            assert gg2.side(p) != gg2.side(q)


def test_random_reader_game_is_single_reader_bipartite():
    rng = random.Random(7)
    for _ in range(10):
        gg = random_reader_game(rng, 4)
        gg.validate()
        assert gg.bipartition is not None
        gg.check_bipartition()
        for p in gg.players:
            assert len(gg.neighbors.get(p, [])) <= 1


def test_validate_rejects_dangling_neighbor():
    gg = GraphicalGame()
    gg.add_player("a")
    gg.add_term("a", "ghost", [[rat(0), rat(0)], [rat(0), rat(1)]])
    with pytest.raises(GraphicalGameError):
        gg.validate()


def test_json_round_trip():
    rng = random.Random(3)
    gg = random_reader_game(rng, 5)
    gg2 = GraphicalGame.from_json(gg.to_json())
    assert gg2.players == gg.players
    assert gg2.base == gg.base
    assert gg2.neighbors == gg.neighbors
    assert gg2.terms == gg.terms
    assert gg2.bipartition == gg.bipartition

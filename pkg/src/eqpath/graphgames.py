"""Two-action graphical games and the gate-gadget library.

Players have two pure actions (0 and 1) and at most three neighbors; a
player's payoff is a base constant per own action plus a sum of pairwise
terms, one per neighbor (the "linear graphical game" shape: exactly the
payoffs needed to simulate clipped arithmetic gates).  ``p[v]`` denotes
the probability that player v plays 1.

Every arithmetic gate is realized by a two-player fragment: an output
player v who wants to match an auxiliary player w, and w who is paid the
gate's affine input expression for playing 1 and ``p[v]`` for playing 0.
At every exact Nash equilibrium of any game containing the fragment,
``p[v]`` equals the expression clipped to [0, 1].  MAX and MIN compose
from clipped sums and differences; the comparator is a single brittle
threshold player.

`build_simulating_game` compiles a :class:`~eqpath.field.GateCircuit`
gate by gate, identifying the circuit's output nodes with its input
nodes, so equilibria are exactly the circuit's fixpoints.  `add_switch`
and `add_two_switches` splice in the clipped switch combination

    p[vbar+] = (p[v0] - p[vs]) + (p[v1] - (1 - p[vs]))
    p[v+]    = max(p[vbar+], min(p[v0], p[v1]))

(with every operator clipped to [0,1]) so a constant-payoff switch
player interpolates between the two simulated functions.
"""

from .rational import rat, rat_str, clip01

__all__ = [
    "GraphicalGameError",
    "GraphicalGame",
    "build_gate_gadget",
    "build_simulating_game",
    "add_switch",
    "add_two_switches",
    "bias_player",
    "is_epsilon_ne",
    "eval_profile_expression",
    "make_bipartite",
    "random_reader_game",
]


class GraphicalGameError(ValueError):
    pass


class GraphicalGame:
    """Two-action graphical game with pairwise payoff structure.

    For player p with neighbors (u_1, ..., u_k), k <= 3:

        payoff(p, a | b_1, ..., b_k) = base[p][a] + sum_i term[p][i][a][b_i]

    ``bipartition`` (player -> 0/1), when set, must put every player's
    neighbors on the opposite side.
    """

    MAX_DEGREE = 3

    def __init__(self):
        self.players = []           # insertion order
        self.base = {}              # p -> [b0, b1]
        self.neighbors = {}         # p -> list of player ids
        self.terms = {}             # p -> list of 2x2 payoff tables
        self.bipartition = None     # p -> 0/1, optional

    # -- construction -------------------------------------------------------

    def add_player(self, name, base=(0, 0)):
        if name in self.base:
            raise GraphicalGameError("duplicate player %r" % (name,))
        self.players.append(name)
        self.base[name] = [rat(base[0]), rat(base[1])]
        self.neighbors[name] = []
        self.terms[name] = []
        return name

    def add_term(self, player, neighbor, table):
        """Append a pairwise payoff term: table[a][b] paid to `player`
        when it plays a and `neighbor` plays b."""
        if player not in self.base:
            raise GraphicalGameError("unknown player")
        if neighbor == player:
            raise GraphicalGameError("no self-loops")
        if len(self.neighbors[player]) >= self.MAX_DEGREE:
            raise GraphicalGameError("player %r would exceed degree %d"
                                     % (player, self.MAX_DEGREE))
        self.neighbors[player].append(neighbor)
        self.terms[player].append([[rat(table[0][0]), rat(table[0][1])],
                                   [rat(table[1][0]), rat(table[1][1])]])

    def validate(self):
        """Check that every neighbor reference resolves to a player.
        Forward references are allowed during construction (feedback
        loops of circuit simulations need them)."""
        for p in self.players:
            for u in self.neighbors[p]:
                if u not in self.base:
                    raise GraphicalGameError(
                        "player %r reads unknown player %r" % (p, u))
        return self

    def add_bias(self, player, action, bonus):
        self.base[player][action] += rat(bonus)

    # -- payoff evaluation --------------------------------------------------

    def expected_payoff(self, player, action, profile):
        """Exact expected payoff of playing `action` when every neighbor u
        independently plays 1 with probability profile[u]."""
        total = self.base[player][action]
        for u, tab in zip(self.neighbors[player], self.terms[player]):
            q = rat(profile[u])
            total += tab[action][0] * (1 - q) + tab[action][1] * q
        return total

    def regret(self, player, profile):
        p = rat(profile[player])
        e0 = self.expected_payoff(player, 0, profile)
        e1 = self.expected_payoff(player, 1, profile)
        have = (1 - p) * e0 + p * e1
        return max(e0, e1) - have

    # -- structure ----------------------------------------------------------

    def check_bipartition(self):
        if self.bipartition is None:
            return True
        for p in self.players:
            for u in self.neighbors[p]:
                if self.bipartition[p] == self.bipartition[u]:
                    raise GraphicalGameError(
                        "player %r reads %r on its own side" % (p, u))
        return True

    def side(self, side_index):
        return [p for p in self.players
                if self.bipartition is not None
                and self.bipartition[p] == side_index]

    # -- serialization ------------------------------------------------------

    def to_json(self):
        return {
            "players": list(self.players),
            "base": {p: [rat_str(b) for b in self.base[p]]
                     for p in self.players},
            "neighbors": {p: list(self.neighbors[p]) for p in self.players},
            "terms": {p: [[[rat_str(x) for x in row] for row in tab]
                          for tab in self.terms[p]] for p in self.players},
            "bipartition": self.bipartition,
        }

    @classmethod
    def from_json(cls, obj):
        gg = cls()
        for p in obj["players"]:
            gg.add_player(p, [rat(x) for x in obj["base"][p]])
        for p in obj["players"]:
            for u, tab in zip(obj["neighbors"][p], obj["terms"][p]):
                gg.add_term(p, u, [[rat(x) for x in row] for row in tab])
        gg.bipartition = obj.get("bipartition")
        return gg


# ---------------------------------------------------------------------------
# The affine gadget: the primitive behind every gate

def add_affine_gadget(gg, out, ins, coeffs, const):
    """Add players `out` and `out`+"#aux" realizing, at every exact NE,

        p[out] = clip(const + sum_i coeffs[i] * p[ins[i]])

    The auxiliary is paid the affine expression for playing 1 and p[out]
    for playing 0; `out` is paid 1 for matching the auxiliary.  With two
    gate inputs the auxiliary reads three players, the maximum degree.
    """
    if len(ins) > 2:
        raise GraphicalGameError("affine gadget takes at most 2 inputs")
    aux = out + "#aux"
    gg.add_player(out)
    gg.add_player(aux, base=(0, const))
    gg.add_term(out, aux, [[1, 0], [0, 1]])
    for u, c in zip(ins, coeffs):
        gg.add_term(aux, u, [[0, 0], [0, rat(c)]])
    gg.add_term(aux, out, [[0, 1], [0, 0]])
    return out


def gadget_side_hints(gg):
    """2-coloring hints: outputs/inputs one side, auxiliaries the other."""
    return {p: (1 if p.endswith("#aux") else 0) for p in gg.players}


def build_gate_gadget(gg, op, inputs, out, const=None):
    """Splice the named gate into `gg`; returns the output player id.

    op in {SUM, DIFF, SCALE, CONST, MAX, MIN, COMPARATOR}.  MAX and MIN
    are two chained affine gadgets (max(a,b) = a + clip(b - a) clipped,
    min(a,b) = a - clip(a - b)); the comparator is a single player paid
    p[a] for playing 1 and p[b] for playing 0, so its value is the strict
    comparison and is unconstrained on ties.
    """
    if op == "SUM":
        a, b = inputs
        return add_affine_gadget(gg, out, [a, b], [1, 1], 0)
    if op == "DIFF":
        a, b = inputs
        return add_affine_gadget(gg, out, [a, b], [1, -1], 0)
    if op == "SCALE":
        (a,) = inputs
        return add_affine_gadget(gg, out, [a], [rat(const)], 0)
    if op == "CONST":
        return add_affine_gadget(gg, out, [], [], rat(const))
    if op == "MAX":
        a, b = inputs
        d = add_affine_gadget(gg, out + "#d", [b, a], [1, -1], 0)
        return add_affine_gadget(gg, out, [a, d], [1, 1], 0)
    if op == "MIN":
        a, b = inputs
        d = add_affine_gadget(gg, out + "#d", [a, b], [1, -1], 0)
        return add_affine_gadget(gg, out, [a, d], [1, -1], 0)
    if op == "COMPARATOR":
        a, b = inputs
        gg.add_player(out)
        gg.add_term(out, a, [[0, 0], [0, 1]])
        gg.add_term(out, b, [[0, 1], [0, 0]])
        return out
    raise GraphicalGameError("unsupported gate op %r" % (op,))


# ---------------------------------------------------------------------------
# Circuit simulation

def build_simulating_game(circuit, prefix=""):
    """Graphical game whose exact Nash equilibria are the fixpoints of the
    circuit (a :class:`GateCircuit` mapping the cube to itself).

    Every circuit node becomes a player; the three output nodes are
    identified with the three input nodes, closing the feedback loop, so
    the coordinate players are the players of the output gates.  Returns
    (game, (vx, vy, vz)) with the coordinate player names.
    """
    if circuit.outputs is None:
        raise GraphicalGameError("circuit outputs not set")
    gg = GraphicalGame()
    names = {}
    # Input node i reads the player of output node outputs[i].
    for i in range(3):
        names[i] = "%sn%d" % (prefix, circuit.outputs[i])
    for idx, (op, a, b, const) in enumerate(circuit.gates):
        node = idx + 3
        names[node] = "%sn%d" % (prefix, node)
    for idx, (op, a, b, const) in enumerate(circuit.gates):
        node = idx + 3
        ins = [names[x] for x in (a, b) if x is not None]
        build_gate_gadget(gg, op, ins, names[node], const=const)
    coords = tuple(names[o] for o in circuit.outputs)
    if len(set(coords)) != 3:
        raise GraphicalGameError("output nodes must be three distinct gates")
    gg.validate()
    return gg, coords


def _merge_into(dst, src):
    for p in src.players:
        dst.add_player(p, src.base[p])
    for p in src.players:
        for u, tab in zip(src.neighbors[p], src.terms[p]):
            dst.add_term(p, u, tab)


def _rewire(gg, old, new):
    """Point every reader of `old` at `new` instead."""
    for p in gg.players:
        gg.neighbors[p] = [new if u == old else u
                           for u in gg.neighbors[p]]


def add_switch(gg1, coords1, gg0, coords0, switch="v_switch"):
    """Combine the f1-simulating game `gg1` and the f0-simulating game
    `gg0` into one game with a constant-payoff switch player.

    Adds, per coordinate, the clipped switch combination players
    (vbar+, v+); consumers of the old coordinate players in both
    sub-games are rewired to read v+.  Returns (game, v+ coords, switch).
    """
    gg = GraphicalGame()
    _merge_into(gg, gg0)
    _merge_into(gg, gg1)
    gg.add_player(switch)              # constant payoffs: free dial
    plus = []
    for i, (v0, v1) in enumerate(zip(coords0, coords1)):
        d1 = add_affine_gadget(gg, "%s#d0_%d" % (switch, i),
                               [v0, switch], [1, -1], 0)
        d2 = add_affine_gadget(gg, "%s#d1_%d" % (switch, i),
                               [v1, switch], [1, 1], -1)
        vbar = add_affine_gadget(gg, "%s#bar_%d" % (switch, i),
                                 [d1, d2], [1, 1], 0)
        mn = build_gate_gadget(gg, "MIN", [v0, v1], "%s#mn_%d" % (switch, i))
        vp = build_gate_gadget(gg, "MAX", [vbar, mn], "%s#plus_%d" % (switch, i))
        plus.append(vp)
    for i, (v0, v1) in enumerate(zip(coords0, coords1)):
        for old in (v0, v1):
            for p in gg.players:
                if p.startswith(switch + "#"):
                    continue           # the combination itself keeps reading
                gg.neighbors[p] = [plus[i] if u == old else u
                                   for u in gg.neighbors[p]]
    return gg, tuple(plus), switch


def add_two_switches(gg1, coords1, gg0, coords0,
                     switch="v_switch", switch2="v_switch2"):
    """Two-switch combination: simulates f1 only when both constant-payoff
    switches play 1, and f0 when either plays 0 (second clipped layer on
    top of the single-switch combination)."""
    gg, plus, s1 = add_switch(gg1, coords1, gg0, coords0, switch=switch)
    gg.add_player(switch2)
    pp = []
    for i, (v0, vp) in enumerate(zip(coords0, plus)):
        d1 = add_affine_gadget(gg, "%s#d0_%d" % (switch2, i),
                               [v0, switch2], [1, -1], 0)
        d2 = add_affine_gadget(gg, "%s#d1_%d" % (switch2, i),
                               [vp, switch2], [1, 1], -1)
        vbar = add_affine_gadget(gg, "%s#bar_%d" % (switch2, i),
                                 [d1, d2], [1, 1], 0)
        mn = build_gate_gadget(gg, "MIN", [v0, vp], "%s#mn_%d" % (switch2, i))
        v2 = build_gate_gadget(gg, "MAX", [vbar, mn],
                               "%s#plus_%d" % (switch2, i))
        pp.append(v2)
    return gg, tuple(pp), (s1, switch2)


def bias_player(gg, player, action, bonus):
    """Add `bonus` to `player`'s payoff for `action`, uniformly over
    neighbor behavior.  Returns the game (mutated in place)."""
    gg.add_bias(player, action, bonus)
    return gg


# ---------------------------------------------------------------------------
# Checking

def is_epsilon_ne(gg, profile, eps=0, players=None):
    """(ok, max_regret): every listed player's exact regret is <= eps."""
    worst = rat(0)
    for p in (players if players is not None else gg.players):
        r = gg.regret(p, profile)
        if r > worst:
            worst = r
    return worst <= rat(eps), worst


def eval_profile_expression(gg, profile, player):
    """The auxiliary-comparison value a gadget output would settle at:
    clip of its aux's action-1 expression under `profile` (diagnostics)."""
    aux = player + "#aux"
    if aux not in gg.base:
        raise GraphicalGameError("%r is not an affine-gadget output" % player)
    return clip01(gg.expected_payoff(aux, 1, profile))


# ---------------------------------------------------------------------------
# Bipartite structure

def make_bipartite(gg, hints=None):
    """2-color the players so every payoff edge crosses sides, inserting
    identity copy gadgets (which flip an edge's parity) where the reading
    graph has an odd cycle.  Copy outputs equal their sources at every
    exact NE, so projected equilibrium values are unchanged.  Sets
    gg.bipartition and returns gg."""
    color = dict(hints or {})
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        if guard > 3 * len(gg.players) + 9:
            raise GraphicalGameError("bipartite repair did not converge")
        color = _two_color(gg, color)
        if color is None:
            # find one conflicting edge and break it with a copy gadget
            color = dict(hints or {})
            edge = _find_odd_edge(gg)
            p, idx = edge
            src = gg.neighbors[p][idx]
            cp = "%s#copy%d" % (src, guard)
            add_affine_gadget(gg, cp, [src], [1], 0)
            gg.neighbors[p][idx] = cp
            changed = True
    gg.bipartition = color
    gg.check_bipartition()
    return gg


def _edges(gg):
    for p in gg.players:
        for i, u in enumerate(gg.neighbors[p]):
            yield p, i, u


def _two_color(gg, seed):
    color = dict(seed)
    adj = {p: set() for p in gg.players}
    for p, _, u in _edges(gg):
        adj[p].add(u)
        adj[u].add(p)
    for start in gg.players:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            p = stack.pop()
            for u in adj[p]:
                if u not in color:
                    color[u] = 1 - color[p]
                    stack.append(u)
    for p, _, u in _edges(gg):
        if color[p] == color[u]:
            return None
    return color


def _find_odd_edge(gg):
    """An edge whose removal-and-reinsertion-via-copy can fix 2-coloring:
    pick any edge inside a conflicted component (greedy BFS coloring and
    return the first conflict)."""
    color = {}
    adj = {p: set() for p in gg.players}
    for p, _, u in _edges(gg):
        adj[p].add(u)
        adj[u].add(p)
    for start in gg.players:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            q = stack.pop()
            for u in adj[q]:
                if u not in color:
                    color[u] = 1 - color[q]
                    stack.append(u)
    for p, i, u in _edges(gg):
        if color[p] == color[u]:
            return (p, i)
    raise GraphicalGameError("no conflicting edge found")


# ---------------------------------------------------------------------------
# Random corpus games

def random_reader_game(rng, n_players=4, denominator=16):
    """Random bipartite game where each player reads at most one player on
    the opposite side (plus unconditional constants).

    For this class the two-player encoding of `encode_graphical` recovers
    source equilibria exactly: a player's payoff comparison scales by the
    single positive block marginal of the player it reads, preserving
    signs and zeroes.
    """
    if n_players < 2:
        raise GraphicalGameError("need at least two players")
    gg = GraphicalGame()
    names = ["p%d" % i for i in range(n_players)]
    sides = {}
    for i, name in enumerate(names):
        sides[name] = i % 2
        q = denominator

        def rnd():
            return rat(rng.randrange(-q, q + 1), q)

        gg.add_player(name, base=(rnd(), rnd()))
    for name in names:
        opposite = [u for u in names if sides[u] != sides[name]]
        if opposite and rng.random() < 0.9:
            u = rng.choice(opposite)
            q = denominator
            tab = [[rat(rng.randrange(-q, q + 1), q) for _ in range(2)]
                   for _ in range(2)]
            gg.add_term(name, u, tab)
    gg.bipartition = sides
    gg.check_bipartition()
    return gg

"""(S,P)-graph instances: boolean circuits, generators, and the line oracle.

An (S,P)-graph on n-bit vertex ids is given by two boolean circuits S
(successor) and P (predecessor).  There is an arc (v, w) exactly when
S(v) = w and P(w) = v.  Vertex 0 has an outgoing arc and no incoming arc,
and the task solved by the rest of this package is to find the other end
of the path that starts at 0.

Instances are represented by explicit truth tables compiled into trivial
minterm circuits, which keeps every invariant exhaustively checkable at
the sizes we work with.
"""

import json
import random

__all__ = [
    "BooleanCircuit",
    "SPGraph",
    "InstanceError",
    "eval_circuit",
    "circuit_from_table",
    "gen_path_instance",
    "gen_random_instance",
    "follow_line",
    "save_instance",
    "load_instance",
]


class InstanceError(ValueError):
    pass


class BooleanCircuit:
    """A DAG of AND/OR/NOT/INPUT/CONST gates with fan-in <= 2.

    Gates are tuples: ("INPUT", i), ("CONST", b), ("NOT", a),
    ("AND", a, b), ("OR", a, b) where a, b are gate indices strictly
    smaller than the gate's own index (so the list order is topological).
    """

    def __init__(self, arity, gates, outputs):
        self.arity = arity
        self.gates = list(gates)
        self.outputs = list(outputs)
        self._check()

    def _check(self):
        for idx, g in enumerate(self.gates):
            kind = g[0]
            if kind == "INPUT":
                if not 0 <= g[1] < self.arity:
                    raise InstanceError("input index out of range")
            elif kind == "CONST":
                if g[1] not in (0, 1):
                    raise InstanceError("const must be a bit")
            elif kind in ("NOT",):
                if not 0 <= g[1] < idx:
                    raise InstanceError("gate reference not topological")
            elif kind in ("AND", "OR"):
                if not (0 <= g[1] < idx and 0 <= g[2] < idx):
                    raise InstanceError("gate reference not topological")
            else:
                raise InstanceError("unknown gate kind %r" % (kind,))
        for o in self.outputs:
            if not 0 <= o < len(self.gates):
                raise InstanceError("output reference missing")


def eval_circuit(c, bits):
    """Evaluate a BooleanCircuit on a bit tuple, returning a bit tuple."""
    if len(bits) != c.arity:
        raise InstanceError(
            "expected %d input bits, got %d" % (c.arity, len(bits))
        )
    val = []
    for g in c.gates:
        kind = g[0]
        if kind == "INPUT":
            v = bits[g[1]]
        elif kind == "CONST":
            v = g[1]
        elif kind == "NOT":
            v = 1 - val[g[1]]
        elif kind == "AND":
            v = val[g[1]] & val[g[2]]
        else:  # OR
            v = val[g[1]] | val[g[2]]
        val.append(v)
    return tuple(val[o] for o in c.outputs)


def int_to_bits(v, n):
    """Little-endian bit tuple of v (bit 0 = least significant)."""
    return tuple((v >> i) & 1 for i in range(n))


def bits_to_int(bits):
    return sum(b << i for i, b in enumerate(bits))


def circuit_from_table(table, n):
    """Compile a truth table (list of 2^n ints) into a minterm circuit."""
    if len(table) != 1 << n:
        raise InstanceError("truth table has wrong length")
    gates = []
    inputs = []
    for i in range(n):
        gates.append(("INPUT", i))
        inputs.append(len(gates) - 1)
    nots = []
    for i in range(n):
        gates.append(("NOT", inputs[i]))
        nots.append(len(gates) - 1)
    zero_gate = None
    outputs = []
    for bit in range(n):
        minterms = []
        for v in range(1 << n):
            if (table[v] >> bit) & 1 == 0:
                continue
            # AND chain over the literals of v.
            cur = None
            for i in range(n):
                lit = inputs[i] if (v >> i) & 1 else nots[i]
                if cur is None:
                    cur = lit
                else:
                    gates.append(("AND", cur, lit))
                    cur = len(gates) - 1
            minterms.append(cur)
        if not minterms:
            if zero_gate is None:
                gates.append(("CONST", 0))
                zero_gate = len(gates) - 1
            outputs.append(zero_gate)
            continue
        cur = minterms[0]
        for m in minterms[1:]:
            gates.append(("OR", cur, m))
            cur = len(gates) - 1
        outputs.append(cur)
    return BooleanCircuit(n, gates, outputs)


class SPGraph:
    """An (S,P)-graph over n-bit vertices, validated exhaustively."""

    def __init__(self, n, succ, pred, validate=True):
        self.n = n
        self.succ = succ
        self.pred = pred
        if validate:
            self.validate()

    def S(self, v):
        return bits_to_int(eval_circuit(self.succ, int_to_bits(v, self.n)))

    def P(self, v):
        return bits_to_int(eval_circuit(self.pred, int_to_bits(v, self.n)))

    def has_arc(self, v, w):
        return self.S(v) == w and self.P(w) == v

    def arcs(self):
        out = []
        for v in range(1 << self.n):
            w = self.S(v)
            if self.P(w) == v and w != v:
                out.append((v, w))
        return out

    def validate(self):
        if len(self.succ.outputs) != self.n or len(self.pred.outputs) != self.n:
            raise InstanceError("circuit output arity must equal n")
        nverts = 1 << self.n
        indeg = [0] * nverts
        outdeg = [0] * nverts
        for v, w in self.arcs():
            outdeg[v] += 1
            indeg[w] += 1
        for v in range(nverts):
            if indeg[v] > 1 or outdeg[v] > 1:
                raise InstanceError("degree bound violated at %d" % v)
        if indeg[0] != 0:
            raise InstanceError("vertex 0 must have no incoming arc")
        if outdeg[0] != 1:
            raise InstanceError("vertex 0 must have an outgoing arc")

    def path_from_zero(self):
        """The vertex sequence of the path starting at 0."""
        path = [0]
        seen = {0}
        v = 0
        while True:
            w = self.S(v)
            if w == v or self.P(w) != v:
                return path
            if w in seen:
                raise InstanceError("cycle through vertex 0")
            path.append(w)
            seen.add(w)
            v = w


def gen_path_instance(n, perm, length):
    """SPGraph whose only line is perm[0] -> perm[1] -> ... -> perm[length].

    perm must be a permutation of {0,...,2^n - 1} with perm[0] = 0.  All
    other vertices are isolated (their S/P fixed points give them a
    self-arc, which keeps every degree bound intact without creating any
    end-of-line solution).
    """
    nverts = 1 << n
    if sorted(perm) != list(range(nverts)) or perm[0] != 0:
        raise InstanceError("perm must be a permutation fixing 0")
    if not 1 <= length < nverts:
        raise InstanceError("path length out of range")
    s_table = list(range(nverts))
    p_table = list(range(nverts))
    for i in range(length):
        s_table[perm[i]] = perm[i + 1]
        p_table[perm[i + 1]] = perm[i]
    # End vertex: successor points to itself but its predecessor differs,
    # so no self-arc forms.  Start vertex: P(0)=0 while S(0)!=0.
    succ = circuit_from_table(s_table, n)
    pred = circuit_from_table(p_table, n)
    return SPGraph(n, succ, pred)


def gen_random_instance(n, length, seed):
    """Random path instance of the given length (generator for corpora)."""
    rng = random.Random(seed)
    rest = list(range(1, 1 << n))
    rng.shuffle(rest)
    perm = [0] + rest
    return gen_path_instance(n, perm, length)


def follow_line(g):
    """Brute-force oracle: the other end of the line that starts at 0."""
    return g.path_from_zero()[-1]


def save_instance(g, path):
    nverts = 1 << g.n
    data = {
        "n": g.n,
        "S": [g.S(v) for v in range(nverts)],
        "P": [g.P(v) for v in range(nverts)],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_instance(path):
    with open(path) as fh:
        data = json.load(fh)
    n = data["n"]
    succ = circuit_from_table(data["S"], n)
    pred = circuit_from_table(data["P"], n)
    return SPGraph(n, succ, pred)

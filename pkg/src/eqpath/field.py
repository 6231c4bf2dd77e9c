"""Clipped linear arithmetic circuits and interpolated cubelet fields.

Two function representations share one evaluation contract (exact rational
points of the unit cube in, points out):

* :class:`GateCircuit` -- an explicit DAG of fan-in-two gates (sum,
  difference, max, min, constant scale, constant, comparator) whose outputs
  are clipped to [0,1].  Serializes to a JSON gate list.

* :class:`InterpolatedField` -- the canonical continuous implementation of
  a cubelet coloring: at the center of a cubelet colored c the displacement
  F(x)-x equals the color vector delta_c, at lattice vertices it is the
  average of the incident center displacements, and on each cubelet it is
  linear over the 12 tetrahedra spanned by the center and the half-face
  triangles.  Every value it computes is a convex combination of nearby
  center displacements, and the piece structure (affine maps, barycentric
  weights) is exposed for the path follower.

`homotopy_eval` combines two such functions into the clipped homotopy

    F_t = max(min(F0, F1), clip(F0 - t) + clip(F1 - (1-t)))

coordinatewise; `homotopy_circuit` emits the same combination as a genuine
gate DAG when both endpoints are gate DAGs.  `modify_reversals` rescales
center displacements inside two fixed z-slabs (x10 and x1/10), which is
what forces the homotopy parameter to oscillate along the fixpoint path.
"""


from .rational import rat, clip01, vadd, vsub, vscale, solve_linear

__all__ = [
    "CircuitError",
    "GateCircuit",
    "InterpolatedField",
    "alpha_for",
    "delta_vectors",
    "implement_coloring",
    "modify_reversals",
    "reversal_scale",
    "homotopy_eval",
    "homotopy_circuit",
]


class CircuitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gate circuits

_OPS = ("SUM", "DIFF", "MAX", "MIN", "SCALE", "CONST", "COMPARATOR")
_ARITY = {"SUM": 2, "DIFF": 2, "MAX": 2, "MIN": 2, "SCALE": 1, "CONST": 0,
          "COMPARATOR": 2}


class GateCircuit:
    """A DAG of clipped arithmetic gates mapping [0,1]^3 to [0,1]^3.

    Node ids 0, 1, 2 are the inputs; each `add` call appends a gate and
    returns its node id.  Every gate output is clipped to [0,1]; the
    comparator returns 1 when its first input is >= the second (ties
    resolve to 1), else 0.
    """

    def __init__(self):
        self.gates = []          # list of (op, a, b, const)
        self.outputs = None      # tuple of 3 node ids

    @property
    def n_nodes(self):
        return 3 + len(self.gates)

    def add(self, op, a=None, b=None, const=None):
        if op not in _OPS:
            raise CircuitError("unknown gate op %r" % (op,))
        arity = _ARITY[op]
        ins = [x for x in (a, b) if x is not None]
        if len(ins) != arity:
            raise CircuitError("%s takes %d inputs" % (op, arity))
        for x in ins:
            if not 0 <= x < self.n_nodes:
                raise CircuitError("input %r not yet defined" % (x,))
        if op in ("SCALE", "CONST"):
            const = rat(const)
            if op == "SCALE" and not 0 <= const <= 1:
                raise CircuitError("scale constant must lie in [0,1]")
        elif const is not None:
            raise CircuitError("%s takes no constant" % (op,))
        self.gates.append((op, a, b, const))
        return self.n_nodes - 1

    def set_outputs(self, a, b, c):
        for x in (a, b, c):
            if not 0 <= x < self.n_nodes:
                raise CircuitError("output %r not defined" % (x,))
        self.outputs = (a, b, c)

    def eval(self, x):
        if self.outputs is None:
            raise CircuitError("outputs not set")
        vals = [clip01(rat(c)) for c in x]
        if len(vals) != 3:
            raise CircuitError("points are 3-dimensional")
        for op, a, b, const in self.gates:
            if op == "SUM":
                v = vals[a] + vals[b]
            elif op == "DIFF":
                v = vals[a] - vals[b]
            elif op == "MAX":
                v = max(vals[a], vals[b])
            elif op == "MIN":
                v = min(vals[a], vals[b])
            elif op == "SCALE":
                v = const * vals[a]
            elif op == "CONST":
                v = const
            else:  # COMPARATOR
                v = rat(1) if vals[a] >= vals[b] else rat(0)
            vals.append(clip01(v))
        return tuple(vals[i] for i in self.outputs)

    # -- serialization ------------------------------------------------------

    def to_json(self):
        from .rational import rat_str
        return {
            "inputs": 3,
            "gates": [
                {"op": op, "in1": a, "in2": b,
                 "const": None if const is None else rat_str(const)}
                for op, a, b, const in self.gates
            ],
            "outputs": list(self.outputs) if self.outputs else None,
        }

    @classmethod
    def from_json(cls, obj):
        c = cls()
        for g in obj["gates"]:
            const = g.get("const")
            c.add(g["op"], g.get("in1"), g.get("in2"),
                  None if const is None else rat(const))
        if obj.get("outputs"):
            c.set_outputs(*obj["outputs"])
        return c


def const_circuit(point):
    """The constant map x -> point, as a three-gate circuit."""
    c = GateCircuit()
    ids = [c.add("CONST", const=p) for p in point]
    c.set_outputs(*ids)
    return c


# ---------------------------------------------------------------------------
# Interpolated fields

def alpha_for(m):
    """Displacement magnitude for grid parameter m: half a cubelet side,
    squared -- 2^(-2m)."""
    return rat(1, 1 << (2 * m))


def delta_vectors(alpha):
    """Color displacement vectors: colors 1,2,3 push along +x,+y,+z by
    alpha; color 0 pulls back along all three axes."""
    a = rat(alpha)
    z = rat(0)
    return {
        0: (-a, -a, -a),
        1: (a, z, z),
        2: (z, a, z),
        3: (z, z, a),
    }


def _face_triangles():
    """The 12 (triangle, face) cases of the per-cubelet decomposition.

    For each of the six faces of the unit cubelet, the face square is split
    along the diagonal through its lexicographically smallest corner; each
    half, together with the cubelet center, spans one tetrahedron.  Returns
    a list of 12 triples of unit-corner offsets in a fixed case order.
    """
    out = []
    for axis in range(3):
        for side in (0, 1):
            corners = []
            for u in (0, 1):
                for v in (0, 1):
                    c = [0, 0, 0]
                    c[axis] = side
                    c[(axis + 1) % 3] = u
                    c[(axis + 2) % 3] = v
                    corners.append(tuple(c))
            corners.sort()
            lo = corners[0]
            opp = next(c for c in corners[1:]
                       if sum(abs(a - b) for a, b in zip(c, lo)) == 2)
            rest = [c for c in corners if c not in (lo, opp)]
            for other in rest:
                out.append((lo, opp, other))
    return out


_TRIANGLES = _face_triangles()


class InterpolatedField:
    """The continuous implementation of a cubelet coloring.

    Displacements are the color vectors at cubelet centers (optionally
    rescaled per z-layer via `kscale`), averages of incident center
    displacements at lattice vertices, and linear over the 12 tetrahedra
    of each cubelet elsewhere.
    """

    def __init__(self, coloring, kscale=None):
        self.coloring = coloring
        self.m = coloring.m
        self.N = coloring.N
        self.h = rat(1, self.N)
        self.alpha = alpha_for(self.m)
        self.delta = delta_vectors(self.alpha)
        self.kscale = kscale
        self._vertex_cache = {}
        self._piece_cache = {}
        self._canon_cache = {}

    # -- pointwise data -----------------------------------------------------

    def center(self, cell):
        i, j, k = cell
        h = self.h
        return (h * i + h / 2, h * j + h / 2, h * k + h / 2)

    def center_disp(self, cell):
        d = self.delta[self.coloring.color(*cell)]
        if self.kscale is not None:
            s = self.kscale(cell[2])
            if s != 1:
                d = vscale(rat(s), d)
        return d

    def vertex_disp(self, v):
        d = self._vertex_cache.get(v)
        if d is None:
            cells = self.coloring.incident_cubelets(v)
            acc = (rat(0), rat(0), rat(0))
            for c in cells:
                acc = vadd(acc, self.center_disp(c))
            d = vscale(rat(1, len(cells)), acc)
            self._vertex_cache[v] = d
        return d

    def locate(self, x):
        """Cubelet index containing x (points on shared faces resolve to
        the lower-index cubelet; interpolation agrees on both sides)."""
        out = []
        for c in x:
            c = rat(c)
            if not 0 <= c <= 1:
                raise CircuitError("point outside the unit cube")
            i = int(c * self.N)
            out.append(min(i, self.N - 1))
        return tuple(out)

    # -- piece structure ----------------------------------------------------

    def _piece_matrix(self, cell, tri):
        """Barycentric solver for one tetrahedron: a 4x4 matrix Binv with
        weights(x) = Binv . (1, x), plus the four corner values."""
        key = (cell, tri)
        hit = self._piece_cache.get(key)
        if hit is not None:
            return hit
        h = self.h
        corners = [self.center(cell)]
        values = [self.center_disp(cell)]
        for off in _TRIANGLES[tri]:
            v = tuple(cell[a] + off[a] for a in range(3))
            corners.append((h * v[0], h * v[1], h * v[2]))
            values.append(self.vertex_disp(v))
        # The tetra shape is the same in every cubelet, so the barycentric
        # matrix is the canonical one translated by the cubelet's corner.
        binv0 = self._canon_matrix(tri)
        t = (h * cell[0], h * cell[1], h * cell[2])
        binv = [[row[0] - row[1] * t[0] - row[2] * t[1] - row[3] * t[2],
                 row[1], row[2], row[3]] for row in binv0]
        hit = (binv, corners, values)
        self._piece_cache[key] = hit
        return hit

    def _canon_matrix(self, tri):
        hit = self._canon_cache.get(tri)
        if hit is not None:
            return hit
        h = self.h
        corners = [(h / 2, h / 2, h / 2)]
        for off in _TRIANGLES[tri]:
            corners.append((h * off[0], h * off[1], h * off[2]))
        # Solve B w = (1, x) where B's columns are (1, corner).
        B = [[rat(1)] * 4] + [[corners[j][a] for j in range(4)]
                              for a in range(3)]
        binv_cols = []
        for j in range(4):
            e = [rat(1) if i == j else rat(0) for i in range(4)]
            binv_cols.append(solve_linear([row[:] for row in B], e))
        binv = [[binv_cols[j][i] for j in range(4)] for i in range(4)]
        self._canon_cache[tri] = binv
        return binv

    def _bary(self, binv, x):
        rhs = (rat(1),) + tuple(rat(c) for c in x)
        return [sum(binv[i][j] * rhs[j] for j in range(4)) for i in range(4)]

    def piece(self, x, cell=None):
        """Locate the tetrahedron containing x.

        Returns (cell, tri_index, corner_weights, values); on boundaries
        the lowest-index case wins.  `cell` may force a particular cubelet
        when x lies on a shared face.
        """
        if cell is None:
            cell = self.locate(x)
        best = None
        for tri in range(12):
            binv, corners, values = self._piece_matrix(cell, tri)
            w = self._bary(binv, x)
            if all(wi >= 0 for wi in w):
                return cell, tri, w, values
            slack = min(w)
            if best is None or slack > best[0]:
                best = (slack, tri)
        raise CircuitError("no containing tetrahedron for %r (best %r)"
                           % (x, best))

    def displacement(self, x, cell=None):
        _, _, w, values = self.piece(x, cell=cell)
        acc = (rat(0), rat(0), rat(0))
        for wi, vi in zip(w, values):
            if wi:
                acc = vadd(acc, vscale(wi, vi))
        return acc

    def eval(self, x):
        y = vadd(tuple(rat(c) for c in x), self.displacement(x))
        return tuple(clip01(c) for c in y)

    def affine_piece(self, x, cell=None):
        """The affine map of the piece containing x: (A, b) with
        displacement(y) = A y + b throughout the tetrahedron."""
        cell, tri, _, _ = self.piece(x, cell=cell)
        return self.affine_on(cell, tri)

    def affine_on(self, cell, tri):
        """(A, b) of the displacement on one tetrahedron."""
        binv, _, values = self._piece_matrix(cell, tri)
        A = [[sum(values[i][r] * binv[i][1 + c] for i in range(4))
              for c in range(3)] for r in range(3)]
        b = tuple(sum(values[i][r] * binv[i][0] for i in range(4))
                  for r in range(3))
        return A, b

    def bary_forms(self, cell, tri):
        """The four barycentric weights of one tetrahedron as affine forms
        (const, x-gradient); weight_j(x) = const_j + grad_j . x."""
        binv, _, _ = self._piece_matrix(cell, tri)
        return [(row[0], tuple(row[1:4])) for row in binv]

    def weights(self, x):
        """Expand displacement(x) as a convex combination of cubelet-center
        displacements.  Returns {cell: weight}; every cell in the support
        touches the cubelet containing x, so its center lies within
         3/2 * 2^-m of x and its cubelet within 2^-m."""
        cell, tri, w, _ = self.piece(x)
        out = {}
        out[cell] = out.get(cell, rat(0)) + w[0]
        for wi, off in zip(w[1:], _TRIANGLES[tri]):
            if not wi:
                continue
            v = tuple(cell[a] + off[a] for a in range(3))
            cells = self.coloring.incident_cubelets(v)
            share = wi * rat(1, len(cells))
            for c in cells:
                out[c] = out.get(c, rat(0)) + share
        return out


def implement_coloring(coloring, kscale=None):
    return InterpolatedField(coloring, kscale=kscale)


# The two rescaled z-slabs of the reversal construction, in cubelet
# k-coordinates of the grid the routing layout was drawn on (a compiled
# coloring records that grid as `base_m`; refinements keep it): layer R1
# (x10) sits below the main routing plane, layer R2 (x1/10) between the
# detour depth and the plane.  The rescaled region is padded by one layout
# cubelet on each side of the claimed slab so that interpolation inside the
# slab mixes only rescaled centers (the interpolation support reaches one
# fine cell past a point's cubelet).
BASE_M = 6
R1_RANGE = (10, 12)
R2_RANGE = (20, 22)
_PAD = 1


def reversal_scale(k, shift=0):
    """Scale factor for cubelet layer k, where k is a fine-grid index and
    shift is the number of refinement halvings since the layout grid."""
    k >>= shift
    if R1_RANGE[0] - _PAD <= k <= R1_RANGE[1] + _PAD:
        return rat(10)
    if R2_RANGE[0] - _PAD <= k <= R2_RANGE[1] + _PAD:
        return rat(1, 10)
    return rat(1)


def modify_reversals(field):
    """Rescale a field's center displacements x10 in the R1 slab and x1/10
    in the R2 slab, recomputing the interpolation."""
    if not isinstance(field, InterpolatedField):
        raise CircuitError("reversal scaling applies to interpolated fields")
    m = field.coloring.m
    shift = m - getattr(field.coloring, "base_m", m)
    return InterpolatedField(field.coloring,
                             kscale=lambda k: reversal_scale(k, shift))


# ---------------------------------------------------------------------------
# The clipped homotopy

def homotopy_eval(f0, f1, t, x):
    """Coordinatewise max(min(F0,F1), clip(F0 - t) + clip(F1 - (1-t)))."""
    t = rat(t)
    if not 0 <= t <= 1:
        raise CircuitError("homotopy parameter must lie in [0,1]")
    y0 = f0.eval(x)
    y1 = f1.eval(x)
    out = []
    for a, b in zip(y0, y1):
        bar = clip01(clip01(a - t) + clip01(b - (1 - t)))
        out.append(max(min(a, b), bar))
    return tuple(out)


def homotopy_circuit(c0, c1, t):
    """Emit the clipped homotopy of two gate circuits as one gate circuit,
    with t supplied by constant gates."""
    t = rat(t)
    out = GateCircuit()
    def splice(src):
        base = out.n_nodes
        remap = {0: 0, 1: 1, 2: 2}
        for idx, (op, a, b, const) in enumerate(src.gates):
            nid = out.add(op,
                          None if a is None else remap[a],
                          None if b is None else remap[b],
                          const)
            remap[3 + idx] = nid
        return tuple(remap[o] for o in src.outputs)
    o0 = splice(c0)
    o1 = splice(c1)
    tc = out.add("CONST", const=t)
    uc = out.add("CONST", const=1 - t)
    outs = []
    for a, b in zip(o0, o1):
        d0 = out.add("DIFF", a, tc)
        d1 = out.add("DIFF", b, uc)
        bar = out.add("SUM", d0, d1)
        mn = out.add("MIN", a, b)
        outs.append(out.add("MAX", mn, bar))
    out.set_outputs(*outs)
    return out

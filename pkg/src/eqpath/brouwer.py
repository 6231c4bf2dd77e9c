"""Cubelet colorings of the unit cube and the tube router.

The unit cube is split into 2^(3m) cubelets of side 2^-m, each carrying a
color in {0,1,2,3}.  Exterior cubelets are colored by a fixed rule; a
"basic" coloring leaves every interior cubelet at 0, which forces a single
panchromatic lattice vertex at 2^-m (1,1,1).  A "dgp" coloring embeds an
(S,P)-graph: every graph vertex gets a {1,2,3}-chromatic lattice vertex
b(v), every arc a colored tube connecting the homes, and the panchromatic
vertices are exactly the b-images of the degree-deficient graph vertices
other than 0.

Tubes have a 2x2 cubelet cross-section wound with colors 1,2,2,3 around a
lattice-line axis.  Straight legs use fixed per-direction patterns; the
eight cubelets around each turn of the axis are solved by a small exact
search validated against the local chromatic-path conditions.
"""

import itertools
from functools import lru_cache

__all__ = [
    "BrouwerColoring",
    "EmbeddingMap",
    "ColoringError",
    "basic_coloring",
    "corridor_coloring",
    "compile_dgp_coloring",
    "scan_panchromatic",
    "follow_chromatic_path",
    "chromatic_vertices_near",
]


class ColoringError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Colorings


class BrouwerColoring:
    """A (possibly sparse) coloring of the 2^m x 2^m x 2^m cubelet grid.

    `paint` maps interior cubelet indices to colors; everything else is
    covered by the exterior rule or defaults to 0.
    """

    def __init__(self, m, kind, paint=None, defined_on=None):
        if m < 2:
            raise ColoringError("grid parameter must be at least 2")
        self.m = m
        self.N = 1 << m
        self.kind = kind
        self.paint = dict(paint or {})
        self.defined_on = defined_on
        for (i, j, k), c in self.paint.items():
            if self._exterior(i, j, k) is not None:
                raise ColoringError("painted cubelet %r is exterior" % ((i, j, k),))
            if c not in (0, 1, 2, 3):
                raise ColoringError("invalid color %r" % (c,))

    def _exterior(self, i, j, k):
        """Exterior-rule color, or None for interior cubelets."""
        N1 = self.N - 1
        if i == 0:
            return 1
        if j == 0:
            return 2
        if k == 0:
            return 3
        if i == N1 or j == N1 or k == N1:
            return 0
        return None

    def in_grid(self, cell):
        i, j, k = cell
        return 0 <= i < self.N and 0 <= j < self.N and 0 <= k < self.N

    def color(self, i, j, k):
        if not self.in_grid((i, j, k)):
            raise ColoringError("cubelet %r out of grid" % ((i, j, k),))
        c = self._exterior(i, j, k)
        if c is not None:
            return c
        return self.paint.get((i, j, k), 0)

    def incident_cubelets(self, v):
        x, y, z = v
        out = []
        for i in (x - 1, x):
            for j in (y - 1, y):
                for k in (z - 1, z):
                    if self.in_grid((i, j, k)):
                        out.append((i, j, k))
        return out

    def incident_colors(self, v):
        return set(self.color(*c) for c in self.incident_cubelets(v))

    def is_chromatic(self, v):
        """{1,2,3}-chromatic: colors 1, 2 and 3 all incident."""
        return {1, 2, 3} <= self.incident_colors(v)

    def is_panchromatic(self, v):
        return self.incident_colors(v) == {0, 1, 2, 3}


def basic_coloring(m):
    return BrouwerColoring(m, "basic")


class EmbeddingMap:
    """Maps graph vertices to lattice homes and back."""

    def __init__(self, m, b, planned_pan, planned_traversals=0, polylines=None):
        self.m = m
        self.b_map = dict(b)
        self.inv = {pos: v for v, pos in self.b_map.items()}
        self.planned_pan = set(planned_pan)
        self.planned_traversals = planned_traversals
        self.polylines = polylines or []

    def b(self, v):
        return self.b_map[v]

    def b_inv(self, pos):
        return self.inv.get(tuple(pos))


def corridor_coloring(m, length):
    """Edge-corridor coloring for a path instance of `length` arcs.

    The tube runs along the lattice line (y,z) = (1,1) using only color-1
    cubelets; the exterior rule supplies the 2/2/3 part of the pattern.
    Homes: b(0) = (1,1,0) and b(v) = (2v+1, 1, 1).  The unique
    panchromatic vertex sits at b(length).
    """
    N = 1 << m
    ncells = 2 * length
    if ncells > N - 2:
        raise ColoringError("corridor does not fit the grid")
    paint = {(i, 1, 1): 1 for i in range(1, ncells + 1)}
    col = BrouwerColoring(m, "dgp", paint)
    b = {0: (1, 1, 0)}
    for v in range(1, length + 1):
        b[v] = (2 * v + 1, 1, 1)
    emb = EmbeddingMap(
        m,
        b,
        planned_pan={(ncells + 1, 1, 1)},
        polylines=[[(1, 1, 0)] + [(i, 1, 1) for i in range(1, ncells + 2)]],
    )
    return col, emb


# ---------------------------------------------------------------------------
# Straight-leg patterns

AXES = {(1, 0, 0): 0, (-1, 0, 0): 0, (0, 1, 0): 1, (0, -1, 0): 1,
        (0, 0, 1): 2, (0, 0, -1): 2}

# Right-handed transverse frame (a1, a2) per travel direction, so the
# winding of the colors around the axis is the same for every direction.
FRAMES = {
    (1, 0, 0): (1, 2),   # +x: (y, z)
    (-1, 0, 0): (2, 1),  # -x: (z, y)
    (0, 1, 0): (2, 0),   # +y: (z, x)
    (0, -1, 0): (0, 2),  # -y: (x, z)
    (0, 0, 1): (0, 1),   # +z: (x, y)
    (0, 0, -1): (1, 0),  # -z: (y, x)
}

# Quadrant colors in the (a1, a2) frame, offsets 0 = positive side of the
# axis lattice line, -1 = negative side.
QUADRANT_COLORS = {(0, 0): 1, (-1, 0): 2, (-1, -1): 2, (0, -1): 3}


def leg_pattern(d):
    """Map transverse offset pair -> color, as {(o_ax1, o_ax2): color} with
    axes in the frame order FRAMES[d]."""
    return dict(QUADRANT_COLORS)


# A +y lane running along the k=0 floor: the z=0 exterior cells are
# colored 3, so the interior pair carries {1,2}.  Offsets are in the
# FRAMES[(0,1,0)] axes (z, x); (-1, *) are the floor cells.
FLOOR_LANE_PATTERN = {(0, 0): 2, (-1, 0): 3, (-1, -1): 3, (0, -1): 1}

# A riser climbing straight off the k=0 floor: rotated a half turn so the
# base corner against the floor lane and the top corner into a standard
# lane both admit colorings.
RISER_FROM_FLOOR_PATTERN = {(0, 0): 2, (-1, 0): 3, (-1, -1): 1, (0, -1): 2}


def slice_cells(p, d, pattern=None):
    """The 4 cubelets of the tube slice between axis points p and p+d.

    Returns a list of (cell, color) using the given pattern (offsets in
    the FRAMES[d] axes), defaulting to the standard leg pattern.
    """
    ax = AXES[d]
    a1, a2 = FRAMES[d]
    along = p[ax] if sum(d) > 0 else p[ax] - 1
    out = []
    for (o1, o2), color in (pattern or QUADRANT_COLORS).items():
        cell = [0, 0, 0]
        cell[ax] = along
        cell[a1] = p[a1] + o1
        cell[a2] = p[a2] + o2
        out.append((tuple(cell), color))
    return out


def cells_incident(v):
    x, y, z = v
    return [
        (i, j, k)
        for i in (x - 1, x)
        for j in (y - 1, y)
        for k in (z - 1, z)
    ]


# ---------------------------------------------------------------------------
# Corner solver

_corner_cache = {}


def _block_pattern(Q, d):
    """Leg pattern of direction d over the whole 2x2x2 block around Q."""
    ax = AXES[d]
    a1, a2 = FRAMES[d]
    out = {}
    for along in (Q[ax] - 1, Q[ax]):
        for (o1, o2), color in QUADRANT_COLORS.items():
            cell = [0, 0, 0]
            cell[ax] = along
            cell[a1] = Q[a1] + o1
            cell[a2] = Q[a2] + o2
            out[tuple(cell)] = color
    return out


def solve_corner(colorfn, Q, d_in, d_out, in_grid, require_axis=True,
                 extra_free=()):
    """Color the 8 cubelets around turn point Q.

    colorfn(cell) -> color for already-decided cells, None for the free
    ones (exterior cells are fixed by the exterior rule and are not free).
    The candidate coloring is validated locally: within Chebyshev distance
    2 of Q the {1,2,3}-chromatic vertices must form a simple unit-step
    path from Q - 2*d_in to Q + 2*d_out (through Q when require_axis),
    with no panchromatic vertex anywhere near the corner.

    extra_free lists already-painted cells (the leg slices adjacent to the
    block) that may be repainted if the block cells alone do not admit a
    valid coloring; their current colors seed the wider search.  Unpainted
    interior cells diagonally between the two legs may additionally be
    filled in (or left blank), searched over colors {0,1,2,3}.
    """
    block = cells_incident(Q)
    free = [(c, (1, 2, 3)) for c in block if in_grid(c) and colorfn(c) is None]
    widened = [(c, (1, 2, 3)) for c in extra_free
               if in_grid(c) and colorfn(c) is not None]
    # Candidate fill cells sit around the inner corner vertex.
    fill = []
    taken = {c for c, _ in free} | {c for c, _ in widened}
    v = tuple(Q[i] - d_in[i] + d_out[i] for i in range(3))
    for c in cells_incident(v):
        if (c not in taken and in_grid(c) and colorfn(c) == 0):
            fill.append((c, (0, 1, 2, 3)))
            taken.add(c)
    A = tuple(Q[i] - 2 * d_in[i] for i in range(3))
    B = tuple(Q[i] + 2 * d_out[i] for i in range(3))

    def attempt(free):
        cells = [c for c, _ in free]
        fixed_ctx = []
        for dc in itertools.product(range(-4, 5), repeat=3):
            cell = (Q[0] + dc[0], Q[1] + dc[1], Q[2] + dc[2])
            if cell in cells:
                continue
            fixed_ctx.append((dc, colorfn(cell) if in_grid(cell) else -1))
        key = (
            d_in,
            d_out,
            require_axis,
            tuple(sorted(((c[0] - Q[0], c[1] - Q[1], c[2] - Q[2]), dom)
                         for c, dom in free)),
            tuple(sorted(fixed_ctx)),
        )
        if key in _corner_cache:
            sol = _corner_cache[key]
            if sol is None:
                return None
            return {(Q[0] + dc[0], Q[1] + dc[1], Q[2] + dc[2]): c
                    for dc, c in sol}
        ctx = {(Q[0] + dc[0], Q[1] + dc[1], Q[2] + dc[2]): c
               for dc, c in fixed_ctx}
        solution = _corner_search(
            free, ctx, Q, d_in, d_out, A, B, require_axis, colorfn)
        if solution is None:
            _corner_cache[key] = None
        else:
            _corner_cache[key] = tuple(
                ((c[0] - Q[0], c[1] - Q[1], c[2] - Q[2]), solution[c])
                for c, _ in free)
        return solution

    solution = attempt(free)
    if solution is None and fill:
        solution = attempt(free + fill)
    if solution is None and widened:
        solution = attempt(free + widened + fill)
    if solution is None:
        raise ColoringError(
            "no corner coloring for turn %r -> %r" % (d_in, d_out))
    return solution


def _corner_search(free, ctx, Q, d_in, d_out, A, B, require_axis, colorfn):

    def validate(assign):
        memo = {}

        def colors_at(v):
            s = memo.get(v)
            if s is None:
                s = set()
                for cell in cells_incident(v):
                    c = assign.get(cell)
                    if c is None:
                        c = ctx.get(cell, 0)
                    if c >= 0:
                        s.add(c)
                memo[v] = s
            return s

        def chromatic(v):
            return {1, 2, 3} <= colors_at(v)

        if not chromatic(A) or not chromatic(B):
            return False
        if require_axis and not chromatic(Q):
            return False
        inner = set()
        for dv in itertools.product(range(-2, 3), repeat=3):
            v = (Q[0] + dv[0], Q[1] + dv[1], Q[2] + dv[2])
            cs = colors_at(v)
            if cs >= {0, 1, 2, 3}:
                return False
            if {1, 2, 3} <= cs:
                inner.add(v)
        # Unit-step flood from A must reach B and cover every chromatic
        # vertex of the inner box, each with exactly two chromatic
        # unit-neighbors (a simple path).
        seen = {A}
        stack = [A]
        while stack:
            v = stack.pop()
            for ax in range(3):
                for s in (-1, 1):
                    w = list(v)
                    w[ax] += s
                    w = tuple(w)
                    if w in inner and w not in seen:
                        seen.add(w)
                        stack.append(w)
        if B not in seen or seen != inner:
            return False
        if require_axis and Q not in seen:
            return False
        for v in inner:
            deg = 0
            for ax in range(3):
                for s in (-1, 1):
                    w = list(v)
                    w[ax] += s
                    if chromatic(tuple(w)):
                        deg += 1
            if deg != 2:
                return False
        return True

    # Pattern-consistent seeds first: extend one leg's pattern through the
    # block and overwrite with the other leg's entry slice.  Cells outside
    # the block (widened search) seed with their current color.
    free = sorted(free)
    cells = [c for c, _ in free]
    seeds = []
    full_in = _block_pattern(Q, d_in)
    full_out = _block_pattern(Q, d_out)
    out_slice = dict(slice_cells(Q, d_out))
    ax_in = AXES[d_in]
    in_along = Q[ax_in] - 1 if sum(d_in) > 0 else Q[ax_in]
    in_slice = {c: col for c, col in full_in.items() if c[ax_in] == in_along}
    for base, top in ((full_in, out_slice), (full_out, in_slice)):
        seed = dict(base)
        seed.update(top)
        for c in cells:
            if c not in seed:
                cur = colorfn(c)
                if cur is None:
                    break
                seed[c] = cur
        else:
            seeds.append(tuple(seed[c] for c in cells))

    for cand in seeds:
        assign = dict(zip(cells, cand))
        if validate(assign):
            return assign

    # Backtracking over the free cells with incremental panchromatic
    # pruning: as soon as every cubelet incident to some vertex is
    # decided, a vertex showing all of {0,1,2,3} kills the branch.
    doms = []
    for c, dom in free:
        cur = colorfn(c)
        if cur in dom:
            doms.append((cur,) + tuple(x for x in dom if x != cur))
        else:
            doms.append(tuple(dom))
    vfixed = {}
    vfree = {}
    for idx, c in enumerate(cells):
        for dv in itertools.product((0, 1), repeat=3):
            v = (c[0] + dv[0], c[1] + dv[1], c[2] + dv[2])
            vfree.setdefault(v, []).append(idx)
    cellset = set(cells)
    for v, idxs in vfree.items():
        s = set()
        for cell in cells_incident(v):
            if cell not in cellset:
                col = ctx.get(cell, 0)
                if col is not None and col >= 0:
                    s.add(col)
        vfixed[v] = s
    # The A-Q-B path lives in the plane spanned by d_in and d_out; any
    # vertex off that plane must stay non-chromatic, which prunes hard.
    # Color sets are bitmasks: bit c set when color c is incident.
    lat_ax = 3 - AXES[d_in] - AXES[d_out]
    trigger = [[] for _ in cells]
    for v, idxs in vfree.items():
        fmask = 0
        for c in vfixed[v]:
            fmask |= 1 << c
        bad = 15 if v[lat_ax] == Q[lat_ax] else 14
        trigger[max(idxs)].append((fmask, tuple(idxs), bad))

    n = len(cells)
    dom_masks = [tuple((val, 1 << val) for val in dom) for dom in doms]
    assign_vals = [None] * n
    assign_masks = [0] * n
    budget = [600_000]

    def dfs(i):
        if i == n:
            assign = dict(zip(cells, assign_vals))
            return assign if validate(assign) else None
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        for val, vmask in dom_masks[i]:
            assign_vals[i] = val
            assign_masks[i] = vmask
            ok = True
            for fmask, idxs, bad in trigger[i]:
                m = fmask
                for j in idxs:
                    m |= assign_masks[j]
                if m & bad == bad:
                    ok = False
                    break
            if ok:
                r = dfs(i + 1)
                if r is not None:
                    return r
        return None

    return dfs(0)


# ---------------------------------------------------------------------------
# Router

X0 = 4          # x-slab of vertex 0's effective column
PITCH = 5       # slab / lane spacing
YH = 6          # home y
ZH = 25         # home z
R1_LO, R1_HI = 10, 12   # slow layer (displacements x10)
R2_LO, R2_HI = 20, 22   # fast layer (displacements x1/10)
DETOUR_Z = 9    # bottom of the reversal detour


def _xc(v):
    return X0 + PITCH * v


def _ya(a):
    return YH + PITCH * (a + 1)


def _za(a):
    return ZH + PITCH * (a + 1)


def _direction(p, q):
    d = tuple(q[i] - p[i] for i in range(3))
    nz = [i for i in range(3) if d[i] != 0]
    if len(nz) != 1:
        raise ColoringError("polyline step not axis-aligned: %r -> %r" % (p, q))
    ax = nz[0]
    step = [0, 0, 0]
    step[ax] = 1 if d[ax] > 0 else -1
    return tuple(step)


def _arc_waypoints(v, w, a, reversal_mode):
    """Axis waypoints for the tube of arc (v, w) with arc index a."""
    xv, xw = _xc(v), _xc(w)
    ya, za = _ya(a), _za(a)
    pts = []
    if v == 0:
        # Intro from the domain corner: along the (y,z)=(1,1) edge, across
        # the floor to the home y, then up an interior riser.
        pts += [(1, 1, 1), (X0, 1, 1), (X0, YH, 1), (X0, YH, ZH),
                (X0, ya, ZH)]
    else:
        pts += [(xv, YH, ZH), (xv, ya, ZH)]
    if reversal_mode:
        # Down-and-up excursion through the R2 and R1 layers.
        pts += [
            (xv, ya, DETOUR_Z),
            (xv, ya + PITCH, DETOUR_Z),
            (xv, ya + PITCH, za),
            (xv, ya, za),
        ]
    else:
        pts += [(xv, ya, za)]
    pts += [(xw, ya, za), (xw, YH, za), (xw, YH, ZH)]
    return pts


def _order_arcs(g):
    """Arcs ordered along their lines, the 0-line first."""
    arcs = g.arcs()
    succ = {v: w for v, w in arcs}
    has_in = {w for _, w in arcs}
    ordered = []
    starts = [0] + sorted(v for v, _ in arcs if v not in has_in and v != 0)
    seen = set()
    for s in starts:
        v = s
        while v in succ and v not in seen:
            seen.add(v)
            ordered.append((v, succ[v]))
            v = succ[v]
    if len(ordered) != len(arcs):
        raise ColoringError("arc set is not a union of simple lines")
    return ordered


def compile_dgp_coloring(g, reversal_mode=False, m=None):
    """Compile an (S,P)-graph into a tube coloring plus embedding map.

    Returns (BrouwerColoring, EmbeddingMap).  When reversal_mode is set,
    every arc's tube makes a z-excursion crossing the R2 and R1 layers on
    the way down and again on the way up.
    """
    arcs = _order_arcs(g)
    narcs = len(arcs)
    nverts = 1 << g.n
    extent = max(
        _xc(nverts - 1) + 2,
        _ya(narcs - 1) + PITCH + 2 if narcs else YH + 2,
        _za(narcs - 1) + 2 if narcs else ZH + 2,
    )
    need = extent + 2
    mm = 2
    while (1 << mm) < need:
        mm += 1
    if m is None:
        m = mm
    elif (1 << m) < need:
        raise ColoringError("grid 2^%d too small to route (need %d)" % (m, need))

    col = BrouwerColoring(m, "dgp")
    paint = col.paint
    in_grid = col.in_grid

    # Build line polylines (concatenate consecutive arcs of each line).
    succ = {v: w for v, w in arcs}
    has_in = {w for _, w in arcs}
    has_out = {v for v, _ in arcs}
    lines = []
    starts = [0] if 0 in succ else []
    starts += sorted(v for v in succ if v not in has_in and v != 0)
    arc_index = {vw: i for i, vw in enumerate(arcs)}
    for s in starts:
        pts = []
        v = s
        while v in succ:
            w = succ[v]
            wp = _arc_waypoints(v, w, arc_index[(v, w)], reversal_mode)
            if pts:
                if pts[-1] != wp[0]:
                    raise ColoringError("arc waypoints do not chain at %r" % (v,))
                pts += wp[1:]
            else:
                pts = wp
            v = w
        lines.append((s, pts))

    # Paint straight legs first (skipping cells around interior turn
    # points and exterior cells, which the fixed rule already colors).
    turn_info = []  # (Q, d_in, d_out)
    corner_cells = set()
    for _, pts in lines:
        for i in range(1, len(pts) - 1):
            d_in = _direction(pts[i - 1], pts[i])
            d_out = _direction(pts[i], pts[i + 1])
            turn_info.append((pts[i], d_in, d_out))
            for cell in cells_incident(pts[i]):
                corner_cells.add(cell)

    for _, pts in lines:
        for i in range(len(pts) - 1):
            d = _direction(pts[i], pts[i + 1])
            p = pts[i]
            pattern = None
            if d == (0, 1, 0) and p[2] == 1:
                pattern = FLOOR_LANE_PATTERN
            elif d == (0, 0, 1) and p[2] == 1:
                pattern = RISER_FROM_FLOOR_PATTERN
            steps = sum(abs(pts[i + 1][ax] - pts[i][ax]) for ax in range(3))
            for _s in range(steps):
                for cell, color in slice_cells(p, d, pattern):
                    if not in_grid(cell):
                        raise ColoringError("tube leaves the grid at %r" % (cell,))
                    if cell in corner_cells:
                        continue
                    ext = col._exterior(*cell)
                    if ext is not None:
                        if ext != color:
                            raise ColoringError(
                                "leg pattern clashes with exterior at %r" % (cell,)
                            )
                        continue
                    prev = paint.get(cell)
                    if prev is not None and prev != color:
                        raise ColoringError("tube collision at %r" % (cell,))
                    paint[cell] = color
                p = tuple(p[ax] + d[ax] for ax in range(3))

    # Solve the corners.
    for Q, d_in, d_out in turn_info:
        def colorfn(cell, _Q=Q):
            ext = col._exterior(*cell)
            if ext is not None:
                return ext
            if cell in paint:
                return paint[cell]
            if cell in cells_incident(_Q):
                return None
            return 0

        # If the block cells alone cannot be completed, the solver may also
        # repaint the leg slices just outside the block on both sides.
        in_slice_pos = tuple(Q[ax] - 2 * d_in[ax] for ax in range(3))
        out_slice_pos = tuple(Q[ax] + d_out[ax] for ax in range(3))
        extra = [c for c, _ in slice_cells(in_slice_pos, d_in)]
        extra += [c for c, _ in slice_cells(out_slice_pos, d_out)]
        extra = [c for c in extra
                 if c not in corner_cells and col._exterior(*c) is None]
        sol = solve_corner(colorfn, Q, d_in, d_out, in_grid, extra_free=extra)
        for cell, color in sol.items():
            ext = col._exterior(*cell)
            if ext is not None:
                if ext != color:
                    raise ColoringError("corner clashes with exterior at %r" % (cell,))
                continue
            paint[cell] = color

    # Homes and expected panchromatic vertices.
    b = {0: (1, 1, 0)}
    for v in range(1, nverts):
        b[v] = (_xc(v), YH, ZH)
    planned_pan = set()
    for v in range(1, nverts):
        touched = v in has_in or v in has_out
        deficient = touched and not (v in has_in and v in has_out)
        if deficient:
            planned_pan.add(b[v])

    traversals = 2 * narcs if reversal_mode else 0
    emb = EmbeddingMap(m, b, planned_pan, planned_traversals=traversals,
                       polylines=[pts for _, pts in lines])
    # b(0) bridges to the first axis point through the exterior colors.
    return col, emb


def refine_coloring(col, emb=None, factor=1):
    """Subdivide every cubelet 2^factor times per axis, keeping its color.

    Refinement makes every color patch at least two cells thick, so the
    interpolation support of any point (the cells around one lattice
    vertex) spans at most one block of original cubelets sharing an
    original vertex; displacement cancellations then require an original
    panchromatic vertex.  Cells whose parent is exterior but which are
    interior at the finer grid are painted with the parent color where the
    finer exterior rule does not already supply it.  Returns the refined
    coloring (and the rescaled embedding when one is given).
    """
    if factor < 1:
        return (col, emb) if emb is not None else col
    s = 1 << factor
    m2 = col.m + factor
    fine = BrouwerColoring(m2, col.kind)
    N = col.N
    nonzero = dict(col.paint)
    for a in range(N):
        for b in range(N):
            for parent in ((0, a, b), (a, 0, b), (a, b, 0)):
                c = col._exterior(*parent)
                if c:
                    nonzero[parent] = c
    paint = {}
    offs = list(itertools.product(range(s), repeat=3))
    for (i, j, k), c in nonzero.items():
        for di, dj, dk in offs:
            child = (s * i + di, s * j + dj, s * k + dk)
            if fine._exterior(*child) is None:
                paint[child] = c
    out = BrouwerColoring(m2, col.kind, paint=paint)
    # Remember the grid the layout constants (routing planes, reversal
    # slabs) are expressed in.
    out.base_m = getattr(col, "base_m", col.m)
    if emb is None:
        return out
    emb2 = EmbeddingMap(
        m2,
        {v: tuple(s * c for c in pos) for v, pos in emb.b_map.items()},
        {tuple(s * c for c in pos) for pos in emb.planned_pan},
        planned_traversals=emb.planned_traversals,
        polylines=[[tuple(s * c for c in p) for p in line]
                   for line in emb.polylines],
    )
    return out, emb2


# ---------------------------------------------------------------------------
# Oracles

def scan_panchromatic(col):
    """All panchromatic lattice vertices, by scan.

    Brute force over every lattice vertex for small grids; for larger
    sparse colorings only vertices near painted or corner cubelets can be
    panchromatic, so the scan restricts to those candidates.
    """
    out = []
    if col.N <= 32:
        rng = range(col.N + 1)
        for v in itertools.product(rng, repeat=3):
            if col.is_panchromatic(v):
                out.append(v)
        return sorted(out)
    # A panchromatic vertex needs colors 1, 2 and 3 incident; away from the
    # domain corner at least one of those must come from a painted cubelet,
    # so candidates are the corners of painted cubelets plus the corner
    # vertex (1,1,1) that the exterior rule alone can complete.
    cands = {(1, 1, 1)}
    for (i, j, k) in col.paint:
        for dv in itertools.product((0, 1), repeat=3):
            cands.add((i + dv[0], j + dv[1], k + dv[2]))
    for v in sorted(cands):
        if all(0 <= c <= col.N for c in v) and col.is_panchromatic(v):
            out.append(v)
    return sorted(out)


def chromatic_vertices_near(col, cells):
    """{1,2,3}-chromatic vertices incident to any of the given cubelets."""
    cands = set()
    for (i, j, k) in cells:
        for dv in itertools.product((0, 1), repeat=3):
            cands.add((i + dv[0], j + dv[1], k + dv[2]))
    return sorted(v for v in cands if col.is_chromatic(v))


def follow_chromatic_path(col, start=(1, 1, 0), max_steps=None):
    """Walk the {1,2,3}-chromatic line from b(0) to its panchromatic end.

    Moves along unit lattice steps between chromatic vertices without
    backtracking; raises ColoringError when the next step is ambiguous or
    missing.  Serves as the mid-level oracle between the line-following
    oracle on the graph and the homotopy follower.
    """
    if col.kind != "dgp":
        raise ColoringError("chromatic path requires a dgp coloring")
    if max_steps is None:
        max_steps = 64 * col.N * col.N
    cur = tuple(start)
    prev = None
    if not col.is_chromatic(cur):
        raise ColoringError("start vertex is not chromatic")
    for _ in range(max_steps):
        if col.is_panchromatic(cur):
            return cur
        nxt = []
        for ax in range(3):
            for s in (-1, 1):
                w = list(cur)
                w[ax] += s
                w = tuple(w)
                if w == prev:
                    continue
                if all(0 <= c <= col.N for c in w) and col.is_chromatic(w):
                    nxt.append(w)
        if len(nxt) != 1:
            raise ColoringError(
                "chromatic path %s at %r" % (
                    "branches" if nxt else "dead-ends", cur)
            )
        prev, cur = cur, nxt[0]
    raise ColoringError("chromatic path did not terminate")

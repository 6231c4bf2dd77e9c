"""Exact follower for the fixpoint path of the clipped homotopy.

The homotopy F_t of two interpolated fields over the same cubelet grid is
piecewise affine in (t, x): both fields are affine on each tetrahedron of
the shared per-cubelet decomposition, and within a fixed sign pattern of
the clip/min/max branches the three coordinate maps are affine.  The set
F_t(x) = x is therefore a one-dimensional polygonal path through "cells"
(tetrahedron x branch pattern), followed here door-in/door-out: inside a
cell the direction spans the kernel of the 3x4 linear part, the exit point
is the first cell inequality to become tight, and the next cell is chosen
among the tetrahedra/branch assignments consistent at the exit point with
a direction that does not backtrack.

The path starts at the unique exact fixpoint of the basic field at t = 0
and ends when t reaches 1; the endpoint rounds to a panchromatic lattice
vertex and decodes through the embedding back to a graph vertex.  A
breadth-first search over a fine (t, x) lattice restricted to small
residual serves as an independent oracle at tiny grid sizes.
"""

from itertools import product
from collections import deque

from .rational import rat, vsub, linf, null_direction, solve_linear
from .field import BASE_M, homotopy_eval

__all__ = [
    "PathError",
    "PathTrace",
    "find_f0_fixpoint",
    "follow_browder_path",
    "grid_bfs",
    "decode_fixpoint",
    "count_reversals",
    "check_band_claims",
    "LOW_BAND",
    "HIGH_BAND",
]

LOW_BAND = rat(1, 4)
HIGH_BAND = rat(3, 4)


class PathError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Affine forms over z = (t, x1, x2, x3): value = grad . z + const.

def _aval(f, z):
    g, c = f
    return g[0] * z[0] + g[1] * z[1] + g[2] * z[2] + g[3] * z[3] + c


def _asub(f, g):
    (gf, cf), (gg, cg) = f, g
    return (tuple(a - b for a, b in zip(gf, gg)), cf - cg)


def _aadd(f, g):
    (gf, cf), (gg, cg) = f, g
    return (tuple(a + b for a, b in zip(gf, gg)), cf + cg)


_ZERO = ((0, 0, 0, 0), 0)


def _field_rows(field, cell, tri):
    """Coordinate maps of F on a tetrahedron, as affine forms in z."""
    A, b = field.affine_on(cell, tri)
    rows = []
    for i in range(3):
        g = [rat(0)] * 4
        for c in range(3):
            g[1 + c] = A[i][c]
        g[1 + i] += 1
        rows.append((tuple(g), b[i]))
    return rows


def _cell_system(f0, f1, cell, tri, bits):
    """Equations and inequalities of one linearity cell.

    bits maps ('c0', i) / ('c1', i) / ('mn', i) / ('mx', i) to 0 or 1: the
    lower-clip activity of F0 - t and F1 - (1-t), whether min(F0,F1) picks
    F1, and whether the outer max picks the min term.  Returns (eqs, cons):
    three affine forms that vanish on the path, and the oriented >= 0
    inequalities delimiting the cell.
    """
    r0 = _field_rows(f0, cell, tri)
    r1 = _field_rows(f1, cell, tri)
    tform = ((rat(1), rat(0), rat(0), rat(0)), rat(0))
    one = ((rat(0),) * 4, rat(1))
    eqs = []
    cons = [
        tform,                      # t >= 0
        _asub(one, tform),          # t <= 1
    ]
    for const, grad in f0.bary_forms(cell, tri):
        cons.append(((rat(0), grad[0], grad[1], grad[2]), const))
    for i in range(3):
        phi0 = _asub(r0[i], tform)            # F0_i - t
        phi1 = _asub(_aadd(r1[i], tform), one)  # F1_i - (1 - t)
        mu = _asub(r0[i], r1[i])              # F0_i - F1_i
        s = _ZERO
        if bits[("c0", i)]:
            s = _aadd(s, phi0)
            cons.append(phi0)
        else:
            cons.append(_asub(_ZERO, phi0))
        if bits[("c1", i)]:
            s = _aadd(s, phi1)
            cons.append(phi1)
        else:
            cons.append(_asub(_ZERO, phi1))
        if bits[("mn", i)]:
            mn = r1[i]
            cons.append(mu)
        else:
            mn = r0[i]
            cons.append(_asub(_ZERO, mu))
        nu = _asub(mn, s)
        if bits[("mx", i)]:
            g = mn
            cons.append(nu)
        else:
            g = s
            cons.append(_asub(_ZERO, nu))
        gx = [rat(0)] * 4
        gx[1 + i] = rat(1)
        eqs.append(_asub(g, (tuple(gx), rat(0))))
    return eqs, cons


def _branch_values(f0, f1, cell, tri, z):
    """Values of the four branch functions per coordinate at z."""
    r0 = _field_rows(f0, cell, tri)
    r1 = _field_rows(f1, cell, tri)
    t = z[0]
    out = {}
    for i in range(3):
        v0 = _aval(r0[i], z)
        v1 = _aval(r1[i], z)
        phi0 = v0 - t
        phi1 = v1 - (1 - t)
        out[("c0", i)] = phi0
        out[("c1", i)] = phi1
        out[("mn", i)] = v0 - v1
        c0 = max(phi0, 0)
        c1 = max(phi1, 0)
        out[("mx", i)] = min(v0, v1) - (c0 + c1)
    return out


def _tetra_candidates(field, x):
    """All (cell, tri) whose closed tetrahedron contains x."""
    N = field.N
    axes = []
    for c in x:
        q = rat(c) * N
        i = int(q)
        opts = set()
        if q == i:  # on a grid plane
            if i - 1 >= 0:
                opts.add(i - 1)
            if i <= N - 1:
                opts.add(i)
        else:
            opts.add(i)
        opts = {o for o in opts if 0 <= o < N}
        if not opts:
            raise PathError("point outside grid")
        axes.append(sorted(opts))
    out = []
    for cell in product(*axes):
        for tri in range(12):
            binv, _, _ = field._piece_matrix(cell, tri)
            w = field._bary(binv, x)
            if all(wi >= 0 for wi in w):
                out.append((cell, tri))
    return out


def _dot4(a, b):
    return sum(x * y for x, y in zip(a, b))


def _antiparallel(a, b):
    """True when a is a negative scalar multiple of b."""
    if _dot4(a, b) >= 0:
        return False
    for i in range(4):
        for j in range(i + 1, 4):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


def _enter_cell(f0, f1, z, u_prev):
    """Choose the cell and direction with which the path leaves z.

    Candidates range over containing tetrahedra and tie-branch
    assignments; a candidate is accepted when the cell equations vanish at
    z, the kernel direction is one-dimensional, it points into the cell at
    every tight inequality, and it is not exactly anti-parallel to u_prev
    (which would re-traverse the segment just walked; genuine turns by
    more than 90 degrees are allowed).
    """
    x = z[1:]
    fallback = None
    for cell, tri in _tetra_candidates(f0, x):
        vals = _branch_values(f0, f1, cell, tri, z)
        fixed = {}
        ties = []
        for key, v in sorted(vals.items()):
            if v > 0:
                fixed[key] = 1
            elif v < 0:
                fixed[key] = 0
            else:
                ties.append(key)
        for combo in product((1, 0), repeat=len(ties)):
            bits = dict(fixed)
            bits.update(zip(ties, combo))
            eqs, cons = _cell_system(f0, f1, cell, tri, bits)
            if any(_aval(e, z) != 0 for e in eqs):
                continue
            v = null_direction([list(e[0]) for e in eqs])
            if v is None:
                continue
            for u in (v, tuple(-c for c in v)):
                ok = True
                for con in cons:
                    if _aval(con, z) == 0 and _dot4(con[0], u) < 0:
                        ok = False
                        break
                if not ok:
                    continue
                if _antiparallel(u, u_prev):
                    continue
                if _dot4(u, u_prev) > 0:
                    return eqs, cons, u
                if fallback is None:
                    fallback = (eqs, cons, u)
    if fallback is not None:
        return fallback
    raise PathError("no cell admits the path at %r" % (z,))


def _max_step(cons, z, u):
    lam = None
    for con in cons:
        slope = _dot4(con[0], u)
        if slope >= 0:
            continue
        val = _aval(con, z)
        if val < 0:
            raise PathError("left the cell")
        step = val / -slope
        if lam is None or step < lam:
            lam = step
    if lam is None or lam <= 0:
        raise PathError("no positive step out of cell at %r" % (z,))
    return lam


class PathTrace:
    """The followed path: junction points plus derived records.

    `points` are the exact cell-exit points (t, x1, x2, x3), which all lie
    on the path so their residual is zero.  `records()` subdivides every
    segment so that consecutive records are at most alpha apart in (t, x)
    L-infinity distance.
    """

    def __init__(self, m, points, base_m=None):
        self.m = m
        self.base_m = BASE_M if base_m is None else base_m
        self.alpha = rat(1, 1 << (2 * m))
        self.points = list(points)

    def records(self):
        T = 0
        prev = None
        for a, b in zip(self.points, self.points[1:]):
            if prev is None:
                yield (T, a[0], a[1:], rat(0))
                T += 1
            gap = linf(vsub(b, a))
            nsub = max(1, -(-gap // self.alpha))  # ceil division
            nsub = int(nsub)
            for s in range(1, nsub + 1):
                lam = rat(s, nsub)
                p = tuple(ai + lam * (bi - ai) for ai, bi in zip(a, b))
                yield (T, p[0], p[1:], rat(0))
                T += 1
            prev = b
        if not self.points[1:] and self.points:
            a = self.points[0]
            yield (0, a[0], a[1:], rat(0))

    def max_record_step(self):
        worst = rat(0)
        prev = None
        for _, t, x, _ in self.records():
            cur = (t,) + tuple(x)
            if prev is not None:
                worst = max(worst, linf(vsub(cur, prev)))
            prev = cur
        return worst

    def t_values(self):
        return [p[0] for p in self.points]


def find_f0_fixpoint(f0):
    """The exact fixpoint of the basic field, near 2^-m (1,1,1)."""
    N = f0.N
    h = f0.h
    for cell in product(range(min(3, N)), repeat=3):
        for tri in range(12):
            A, b = f0.affine_on(cell, tri)
            x = solve_linear([row[:] for row in A], [-bi for bi in b])
            if x is None:
                continue
            binv, _, _ = f0._piece_matrix(cell, tri)
            w = f0._bary(binv, x)
            if all(wi >= 0 for wi in w):
                x = tuple(x)
                if linf(vsub(x, (h, h, h))) > h:
                    raise PathError("fixpoint of the basic field strayed "
                                    "from 2^-m (1,1,1): %r" % (x,))
                return x
    raise PathError("basic field has no fixpoint near 2^-m (1,1,1)")


def follow_browder_path(f0, f1, max_steps=2_000_000, verify=True):
    """Follow the fixpoint path of the homotopy from t=0 to t=1.

    Returns (endpoint x at t=1, PathTrace).  With verify, every junction
    is independently re-checked against the pointwise homotopy evaluator.
    """
    x0 = find_f0_fixpoint(f0)
    z = (rat(0),) + x0
    u = (rat(1), rat(0), rat(0), rat(0))
    pts = [z]
    for _ in range(max_steps):
        eqs, cons, u = _enter_cell(f0, f1, z, u)
        lam = _max_step(cons, z, u)
        z = tuple(zi + lam * ui for zi, ui in zip(z, u))
        pts.append(z)
        if z[0] == 1:
            break
        if z[0] == 0:
            raise PathError("path returned to t=0")
    else:
        raise PathError("step limit exceeded")
    base_m = getattr(f1.coloring, "base_m", None) \
        if hasattr(f1, "coloring") else None
    trace = PathTrace(f0.m, pts, base_m=base_m)
    if verify:
        for t, *x in pts:
            x = tuple(x)
            if homotopy_eval(f0, f1, t, x) != x:
                raise PathError("junction fails the pointwise fixpoint "
                                "check at t=%s" % (t,))
    return z[1:], trace


# ---------------------------------------------------------------------------
# Decoding and reversal counting

def decode_fixpoint(x, coloring, emb):
    """Find the panchromatic lattice vertex nearest x (the field zero can
    sit up to 1.5 cells away from it) and map it back through the
    embedding."""
    N = coloring.N
    base = tuple(int(rat(c) * N + rat(1, 2)) for c in x)
    best = None
    for dv in product(range(-2, 3), repeat=3):
        v = tuple(b + d for b, d in zip(base, dv))
        if not all(0 <= c <= N for c in v):
            continue
        if not coloring.is_panchromatic(v):
            continue
        dist = max(abs(rat(c) * N - vi) for c, vi in zip(x, v))
        if best is None or dist < best[0]:
            best = (dist, v)
    if best is None:
        raise PathError("no panchromatic lattice vertex near %r" % (base,))
    out = emb.b_inv(best[1])
    if out is None:
        raise PathError("panchromatic vertex %r has no preimage" % (best[1],))
    return out


def count_reversals(trace):
    """Number of alternations between the bands t <= 1/4 and t >= 3/4
    visited along the trace (a monotone 0 -> 1 trace counts 1)."""
    seq = []
    for t in trace.t_values():
        band = "L" if t <= LOW_BAND else ("H" if t >= HIGH_BAND else None)
        if band and (not seq or seq[-1] != band):
            seq.append(band)
    return max(0, len(seq) - 1)


def check_band_claims(trace, r1_range=(10, 12), r2_range=(20, 22)):
    """Verify the slab claims: every path point whose z-coordinate lies in
    the x10 slab has t <= 1/4, every point in the x1/10 slab has t >= 3/4.

    Slab ranges are cubelet layers of the routing layout grid (the trace's
    base_m), independent of any grid refinement of the followed field.
    Works segment-exactly (t and x3 are affine along each segment; for
    traces produced by convert_reversal_trace the slab faces coincide with
    record points, so only record values are used).
    Returns {"r1_max_t", "r2_min_t", "ok"}.
    """
    h = rat(1, 1 << trace.base_m)
    slabs = {
        "r1": (r1_range[0] * h, (r1_range[1] + 1) * h),
        "r2": (r2_range[0] * h, (r2_range[1] + 1) * h),
    }
    extreme = {"r1": None, "r2": None}
    for a, b in zip(trace.points, trace.points[1:]):
        for name, (lo, hi) in slabs.items():
            za, zb = a[3], b[3]
            # parameter interval of the segment portion inside the slab
            lo_l, hi_l = rat(0), rat(1)
            for bound, sense in ((lo, 1), (hi, -1)):
                va = sense * (za - bound)
                vb = sense * (zb - bound)
                if va < 0 and vb < 0:
                    lo_l, hi_l = rat(1), rat(0)
                    break
                if va < 0:
                    lo_l = max(lo_l, va / (va - vb))
                elif vb < 0:
                    hi_l = min(hi_l, va / (va - vb))
            if lo_l > hi_l:
                continue
            for lam in (lo_l, hi_l):
                t = a[0] + lam * (b[0] - a[0])
                cur = extreme[name]
                if name == "r1":
                    extreme[name] = t if cur is None else max(cur, t)
                else:
                    extreme[name] = t if cur is None else min(cur, t)
    ok = ((extreme["r1"] is None or extreme["r1"] <= LOW_BAND)
          and (extreme["r2"] is None or extreme["r2"] >= HIGH_BAND))
    return {"r1_max_t": extreme["r1"], "r2_min_t": extreme["r2"], "ok": ok}


def linear_parameter(t, alpha):
    """Map the clipped-homotopy parameter to the linear-homotopy one.

    Over the region where the reference field's displacement is the
    constant delta_0 = -alpha(1,1,1) (everywhere except within one cell of
    the boundary faces), both homotopies have the same fixpoint locus: the
    points where the target field's displacement is c(1,1,1) for some
    c >= 0, reached at t = 1-c under the clipped combination and at
    t = alpha/(alpha+c) under (1-t)F0 + tF1.  The slab alternation claims
    are statements about the linear parameter.
    """
    return alpha / (alpha + 1 - t)


def convert_reversal_trace(trace, r1_range=(10, 12), r2_range=(20, 22)):
    """Reparameterize a followed trace to the linear-homotopy parameter.

    Inserts an extra record at every crossing of a claimed slab face
    (computed exactly in the affine source parameterization) so that no
    converted segment straddles a face; the converted t is monotone within
    each segment, which makes record-based band checks exact.
    """
    h = rat(1, 1 << trace.base_m)
    bounds = sorted({r1_range[0] * h, (r1_range[1] + 1) * h,
                     r2_range[0] * h, (r2_range[1] + 1) * h})
    pts = []
    for a, b in zip(trace.points, trace.points[1:]):
        pts.append(a)
        za, zb = a[3], b[3]
        if za != zb:
            lams = sorted((bd - za) / (zb - za) for bd in bounds
                          if min(za, zb) < bd < max(za, zb))
            for lam in lams:
                pts.append(tuple(ai + lam * (bi - ai)
                                 for ai, bi in zip(a, b)))
    pts.append(trace.points[-1])
    alpha = trace.alpha
    conv = [(linear_parameter(p[0], alpha),) + p[1:] for p in pts]
    return PathTrace(trace.m, conv, base_m=trace.base_m)


def follow_reversal_path(f0, f1m, max_steps=2_000_000, verify=True):
    """Follow the homotopy path of a reversal-modified field and return
    (endpoint, trace) with the trace in the linear-homotopy parameter."""
    x, trace = follow_browder_path(f0, f1m, max_steps=max_steps,
                                   verify=verify)
    return x, convert_reversal_trace(trace)


# ---------------------------------------------------------------------------
# Grid oracle

def grid_bfs(f0, f1, pitch_div=8, eps=None, max_nodes=5_000_000):
    """Breadth-first search over the (t, x) lattice of pitch alpha/pitch_div
    restricted to residual <= eps, from the rounded basic fixpoint to the
    first point with t = 1.  Exponential; an oracle for tiny grids only.
    """
    alpha = f0.alpha
    eps = rat(alpha, 5) if eps is None else rat(eps)
    p = rat(alpha, pitch_div)
    M = int(1 / p)

    def residual(it, ix):
        t = p * it
        x = tuple(p * c for c in ix)
        return linf(vsub(homotopy_eval(f0, f1, t, x), x))

    x0 = find_f0_fixpoint(f0)
    sx = tuple(int(c / p + rat(1, 2)) for c in x0)
    start = (0,) + sx
    if residual(0, sx) > eps:
        raise PathError("rounded start infeasible at this pitch")
    seen = {start}
    q = deque([start])
    while q:
        node = q.popleft()
        if node[0] == M:
            return tuple(p * c for c in node[1:]), len(seen)
        for axis in range(4):
            for d in (-1, 1):
                nxt = list(node)
                nxt[axis] += d
                if not 0 <= nxt[axis] <= M:
                    continue
                nxt = tuple(nxt)
                if nxt in seen:
                    continue
                if residual(nxt[0], nxt[1:]) > eps:
                    continue
                seen.add(nxt)
                if len(seen) > max_nodes:
                    raise PathError("grid search exceeded node budget")
                q.append(nxt)
    raise PathError("grid search exhausted without reaching t=1")

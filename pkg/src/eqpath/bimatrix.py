"""Bimatrix games: the graphical-game encoder, support enumeration, and
the linear tracing procedure.

Everything is exact: payoffs, equilibria, and traced path points are
rational numbers, and every reported equilibrium is verified against the
best-response conditions before being returned.

The encoder (`encode_graphical`) turns a bipartite two-action graphical
game into a two-player game: each graphical player becomes a block of
two strategies of the corresponding matrix player, blocks are padded so
both sides have the same count m, and a generalized matching-pennies
game at scale M (row rewarded for matching blocks, column for shifting
one block cyclically) forces every block's marginal probability into
[1/m - 2a/M, 1/m + 2a(m-1)/M], where a bounds the graphical payoffs.
With M >= 8*m*a every block marginal is at least 3/(4m) >= 1/(2n).
The graphical payoff terms ride on top of the pennies: a player's term
against a neighbor is added to the encoding entries of the neighbor's
block, and the player's base constants are attached to its first
neighbor's block (or spread over all opposite strategies when it has no
neighbors).  For players that read at most one opposite player the
within-block payoff comparison of the encoding is the graphical
comparison scaled by one positive block marginal, so normalizing block-
conditional probabilities recovers an exact equilibrium of the source.

The tracing procedure (`trace_equilibrium_path`) follows the equilibrium
path of the convex combination (1-t)*G0 + t*G1 from the unique
equilibrium of G0 at t=0 to an equilibrium of G1 at t=1.  Support
breakpoints can be irrational, so the tracer never represents them: it
visits an increasing sequence of rational t values, certifying an exact
equilibrium with the current support at each visited point, shrinks its
step near a breakpoint, and pivots to a nearby support just past it.
Requested sample values of t are forced into the visit sequence, so the
reported equilibria at those t are exact.
"""

import json

from .rational import rat, rat_str

__all__ = [
    "BimatrixError",
    "TracingError",
    "BimatrixGame",
    "EncodeMap",
    "encode_graphical",
    "best_response_payoff",
    "is_exact_ne",
    "support_enumerate_ne",
    "build_g0",
    "build_g1",
    "mix_games",
    "rescale_game",
    "trace_equilibrium_path",
    "TracingResult",
    "normalize_restricted",
    "build_uniform_start",
    "build_vdet_extension",
    "build_hvde_extension",
]


class BimatrixError(ValueError):
    pass


class TracingError(RuntimeError):
    pass


class BimatrixGame:
    """Two-player game in strategic form; R[i][j] / C[i][j] are the row and
    column player payoffs, exact rationals."""

    def __init__(self, R, C, row_labels=None, col_labels=None):
        self.R = [[rat(x) for x in row] for row in R]
        self.C = [[rat(x) for x in row] for row in C]
        m = len(self.R)
        n = len(self.R[0]) if m else 0
        if len(self.C) != m or any(len(r) != n for r in self.R + self.C):
            raise BimatrixError("payoff matrices must have equal shape")
        self.row_labels = row_labels or ["r%d" % i for i in range(m)]
        self.col_labels = col_labels or ["c%d" % j for j in range(n)]

    @property
    def shape(self):
        return (len(self.R), len(self.R[0]) if self.R else 0)

    def payoffs(self, x, y):
        """(row expected payoff, column expected payoff)."""
        pr = sum(xi * sum(rij * yj for rij, yj in zip(ri, y))
                 for xi, ri in zip(x, self.R))
        pc = sum(xi * sum(cij * yj for cij, yj in zip(ci, y))
                 for xi, ci in zip(x, self.C))
        return pr, pc

    def to_json(self):
        return {
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "R": [[rat_str(x) for x in row] for row in self.R],
            "C": [[rat_str(x) for x in row] for row in self.C],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["R"], obj["C"],
                   row_labels=obj.get("row_labels"),
                   col_labels=obj.get("col_labels"))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Equilibrium checking and enumeration

def best_response_payoff(game, x, y):
    """(row max payoff vs y, column max payoff vs x)."""
    row_vals = [sum(rij * yj for rij, yj in zip(ri, y)) for ri in game.R]
    col_vals = [sum(xi * game.C[i][j] for i, xi in enumerate(x))
                for j in range(len(game.C[0]))]
    return max(row_vals), max(col_vals), row_vals, col_vals


def is_exact_ne(game, x, y):
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        return False
    if sum(x) != 1 or sum(y) != 1:
        return False
    rmax, cmax, row_vals, col_vals = best_response_payoff(game, x, y)
    for xi, v in zip(x, row_vals):
        if xi > 0 and v != rmax:
            return False
    for yj, v in zip(y, col_vals):
        if yj > 0 and v != cmax:
            return False
    return True


def _gauss_particular(rows, ncols):
    """Particular solution of the linear system given as augmented rows
    (each row: ncols coefficients + rhs).  Free variables are set to 0.
    Returns the solution list or None when inconsistent."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for k in range(r, len(rows)):
            if rows[k][c] != 0:
                pr = k
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for k in range(r, len(rows)):
        if rows[k][ncols] != 0:
            return None
    sol = [rat(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol


def solve_support(game, row_support, col_support):
    """Exact equilibrium with the given supports, or None.

    Solves the two indifference systems (column mixture making the row
    support indifferent, and vice versa), sets free variables to zero,
    and verifies the full best-response conditions, so any returned pair
    is an exact equilibrium whose supports are contained in the given
    sets."""
    m, n = game.shape
    Sr = sorted(row_support)
    Sc = sorted(col_support)
    if not Sr or not Sc:
        return None
    # y over Sc and the row value u:  (R y)_i = u for i in Sr; sum y = 1
    rows = []
    for i in Sr:
        rows.append([game.R[i][j] for j in Sc] + [rat(-1), rat(0)])
    rows.append([rat(1)] * len(Sc) + [rat(0), rat(1)])
    sol = _gauss_particular(rows, len(Sc) + 1)
    if sol is None:
        return None
    y = [rat(0)] * n
    for j, v in zip(Sc, sol[:-1]):
        y[j] = v
    rows = []
    for j in Sc:
        rows.append([game.C[i][j] for i in Sr] + [rat(-1), rat(0)])
    rows.append([rat(1)] * len(Sr) + [rat(0), rat(1)])
    sol = _gauss_particular(rows, len(Sr) + 1)
    if sol is None:
        return None
    x = [rat(0)] * m
    for i, v in zip(Sr, sol[:-1]):
        x[i] = v
    if is_exact_ne(game, x, y):
        return (x, y)
    return None


def _subsets(indices, max_size):
    out = [[]]
    for i in indices:
        out += [s + [i] for s in out if len(s) < max_size]
    return [s for s in out if s]


def support_enumerate_ne(game, max_support=10, equal_sizes_only=False):
    """All exact equilibria found by support enumeration.

    Every support pair up to `max_support` per side is tried; each
    consistent indifference system contributes its particular solution
    (free variables zero), filtered by exact best-response checks and
    deduplicated.  For nondegenerate games (where equilibria have equal
    support sizes and fully determined systems) this is the complete
    equilibrium list; `equal_sizes_only` restricts to that case for
    speed."""
    m, n = game.shape
    if m > 10 or n > 10:
        raise BimatrixError("support enumeration is for games up to 10x10")
    found = []
    seen = set()
    row_subsets = _subsets(range(m), min(m, max_support))
    col_subsets = _subsets(range(n), min(n, max_support))
    for Sr in row_subsets:
        for Sc in col_subsets:
            if equal_sizes_only and len(Sr) != len(Sc):
                continue
            res = solve_support(game, Sr, Sc)
            if res is None:
                continue
            key = (tuple(res[0]), tuple(res[1]))
            if key not in seen:
                seen.add(key)
                found.append(res)
    return found


# ---------------------------------------------------------------------------
# Encoding graphical games

class EncodeMap:
    """Bookkeeping for a graphical-game encoding: block layout, the
    pennies scale M, and the exact marginal lower bound."""

    def __init__(self, row_players, col_players, n_real, M, a_max):
        self.row_players = row_players    # block index -> player or None pad
        self.col_players = col_players
        self.n_real = n_real
        self.M = M
        self.a_max = a_max
        self.m_blocks = len(row_players)
        self.marginal_bound = rat(1, 2 * n_real)

    def strategy_index(self, player, action):
        for side in (self.row_players, self.col_players):
            if player in side:
                return 2 * side.index(player) + action
        raise BimatrixError("player %r not in encoding" % (player,))

    def strategy_side(self, player):
        return 0 if player in self.row_players else 1

    def block_marginals(self, x, y):
        """player -> total probability of its block."""
        out = {}
        for blocks, dist in ((self.row_players, x), (self.col_players, y)):
            for i, p in enumerate(blocks):
                if p is not None:
                    out[p] = dist[2 * i] + dist[2 * i + 1]
        return out

    def decode_profile(self, x, y):
        """(graphical profile, block marginals): profile[v] is the
        conditional probability of action 1 within v's block."""
        marg = self.block_marginals(x, y)
        profile = {}
        for blocks, dist in ((self.row_players, x), (self.col_players, y)):
            for i, p in enumerate(blocks):
                if p is None:
                    continue
                if marg[p] == 0:
                    raise BimatrixError(
                        "block of %r has zero probability" % (p,))
                profile[p] = dist[2 * i + 1] / marg[p]
        return profile, marg


def encode_graphical(gg, tightness=1):
    """Encode a bipartite two-action graphical game as a bimatrix game.

    Returns (game, EncodeMap).  Requires gg.bipartition; every neighbor
    must sit on the opposite side.  The pennies scale is
    M = 8 * m * a_max * tightness (raise `tightness` when downstream
    consumers need block marginals closer to uniform)."""
    gg.validate()
    if gg.bipartition is None:
        raise BimatrixError("encoding needs a bipartition")
    gg.check_bipartition()
    side0 = [p for p in gg.players if gg.bipartition[p] == 0]
    side1 = [p for p in gg.players if gg.bipartition[p] == 1]
    if not side0 or not side1:
        raise BimatrixError("both sides must be nonempty")
    m = max(len(side0), len(side1))
    row_players = side0 + [None] * (m - len(side0))
    col_players = side1 + [None] * (m - len(side1))
    a_max = rat(1)
    for p in gg.players:
        tot = max(abs(gg.base[p][0]), abs(gg.base[p][1]))
        for tab in gg.terms[p]:
            tot += max(abs(v) for row in tab for v in row)
        if tot > a_max:
            a_max = tot
    M = 8 * m * a_max * tightness
    if M != int(M):
        M = int(M) + 1
    M = rat(int(M))
    size = 2 * m
    R = [[rat(0)] * size for _ in range(size)]
    C = [[rat(0)] * size for _ in range(size)]
    for i in range(m):
        for j in range(m):
            pennies_r = M if i == j else rat(0)
            pennies_c = M if j == (i + 1) % m else rat(0)
            for a in range(2):
                for b in range(2):
                    R[2 * i + a][2 * j + b] += pennies_r
                    C[2 * i + a][2 * j + b] += pennies_c

    def attach(player, my_blocks, opp_blocks, mat):
        i = my_blocks.index(player)
        nbrs = gg.neighbors[player]
        for u, tab in zip(nbrs, gg.terms[player]):
            j = opp_blocks.index(u)
            for a in range(2):
                for b in range(2):
                    mat(2 * i + a, 2 * j + b, tab[a][b])
        if nbrs:
            j = opp_blocks.index(nbrs[0])
            for a in range(2):
                for b in range(2):
                    mat(2 * i + a, 2 * j + b, gg.base[player][a])
        else:
            for a in range(2):
                for q in range(size):
                    mat(2 * i + a, q, gg.base[player][a])

    for p in side0:
        attach(p, row_players, col_players,
               lambda i, j, v: R[i].__setitem__(j, R[i][j] + v))
    for p in side1:
        attach(p, col_players, row_players,
               lambda j, i, v: C[i].__setitem__(j, C[i][j] + v))
    labels_r = []
    labels_c = []
    for blocks, labels in ((row_players, labels_r), (col_players, labels_c)):
        for i, p in enumerate(blocks):
            name = p if p is not None else "pad%d" % i
            labels.append("%s:0" % name)
            labels.append("%s:1" % name)
    game = BimatrixGame(R, C, row_labels=labels_r, col_labels=labels_c)
    emap = EncodeMap(row_players, col_players, len(gg.players), M, a_max)
    return game, emap


# ---------------------------------------------------------------------------
# The tracing construction

def build_g0(n):
    """(n+1)x(n+1) anchor game: both players are paid 1 for their first
    strategy and 0 otherwise; the unique equilibrium is (0, 0)."""
    R = [[rat(1) if i == 0 else rat(0) for _ in range(n + 1)]
         for i in range(n + 1)]
    C = [[rat(1) if j == 0 else rat(0) for j in range(n + 1)]
         for _ in range(n + 1)]
    return BimatrixGame(R, C)


def build_g1(game, k, delta):
    """Border the n x n game (payoffs must lie in [9/10, 11/10]) with a
    first strategy per side: entry (0,0) pays (0,-1), row 0 pays the
    column player 3/4 (plus `delta` at interior column k), and column 0
    pays (-1, 3/4) to interior rows.  Interior strategy j of the result
    is strategy j-1 of the input."""
    m, n = game.shape
    if m != n:
        raise BimatrixError("interior game must be square")
    lo, hi = rat(9, 10), rat(11, 10)
    for mat in (game.R, game.C):
        for row in mat:
            for v in row:
                if not lo <= v <= hi:
                    raise BimatrixError(
                        "interior payoffs must lie in [9/10, 11/10]; "
                        "rescale first")
    if not 1 <= k <= n:
        raise BimatrixError("k must be an interior column index")
    delta = rat(delta)
    R = [[rat(0)] * (n + 1) for _ in range(n + 1)]
    C = [[rat(0)] * (n + 1) for _ in range(n + 1)]
    C[0][0] = rat(-1)
    for j in range(1, n + 1):
        C[0][j] = rat(3, 4) + (delta if j == k else rat(0))
    for i in range(1, n + 1):
        R[i][0] = rat(-1)
        C[i][0] = rat(3, 4)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            R[i][j] = game.R[i - 1][j - 1]
            C[i][j] = game.C[i - 1][j - 1]
    labels_r = ["start"] + ["%s" % s for s in game.row_labels]
    labels_c = ["start"] + ["%s" % s for s in game.col_labels]
    return BimatrixGame(R, C, row_labels=labels_r, col_labels=labels_c)


def mix_games(g0, g1, t):
    """(1-t) * g0 + t * g1, entrywise."""
    if g0.shape != g1.shape:
        raise BimatrixError("mixed games must have equal shape")
    t = rat(t)
    s = 1 - t
    R = [[s * a + t * b for a, b in zip(r0, r1)]
         for r0, r1 in zip(g0.R, g1.R)]
    C = [[s * a + t * b for a, b in zip(c0, c1)]
         for c0, c1 in zip(g0.C, g1.C)]
    return BimatrixGame(R, C, row_labels=g1.row_labels,
                        col_labels=g1.col_labels)


def rescale_game(game, lo, hi):
    """Positive affine rescale of each player's payoffs onto [lo, hi]
    (equilibria are unchanged)."""
    lo, hi = rat(lo), rat(hi)
    if hi <= lo:
        raise BimatrixError("empty target interval")

    def scale(mat):
        vals = [v for row in mat for v in row]
        vmin, vmax = min(vals), max(vals)
        if vmin == vmax:
            mid = (lo + hi) / 2
            return [[mid for _ in row] for row in mat]
        f = (hi - lo) / (vmax - vmin)
        return [[lo + (v - vmin) * f for v in row] for row in mat]

    return BimatrixGame(scale(game.R), scale(game.C),
                        row_labels=game.row_labels,
                        col_labels=game.col_labels)


class TracingResult:
    """Outcome of a traced equilibrium path: `points` is a list of
    (t, x, y) with exact equilibria of the t-mixture, increasing in t and
    including every requested sample; `supports` logs the support pivots
    as (t, row_support, col_support)."""

    def __init__(self, points, supports):
        self.points = points
        self.supports = supports

    @property
    def final(self):
        return self.points[-1]

    def at(self, t):
        t = rat(t)
        for tt, x, y in self.points:
            if tt == t:
                return (x, y)
        raise TracingError("no recorded point at t=%s" % rat_str(t))


def _support_of(v):
    return frozenset(i for i, vi in enumerate(v) if vi > 0)


def _neighbor_supports(Sr, Sc, m, n, tier):
    """Candidate support pairs near (Sr, Sc).  Tier 1: at most one
    add/drop per side.  Tier 2: additionally same-side swaps combined
    with at most one change on the other side."""
    def side_ops(S, size, swaps):
        ops = [S]
        for i in range(size):
            if i in S:
                if len(S) > 1:
                    ops.append(S - {i})
            else:
                ops.append(S | {i})
        if swaps:
            for i in S:
                for j in range(size):
                    if j not in S:
                        ops.append((S - {i}) | {j})
        return ops

    swaps = tier >= 2
    out = []
    for a in side_ops(Sr, m, swaps):
        for b in side_ops(Sc, n, swaps):
            if a != Sr or b != Sc:
                out.append((a, b))
    return out


def trace_equilibrium_path(g0, g1, samples=(), resolution=rat(1, 2 ** 30),
                           step0=rat(1, 64), max_pivots=4000):
    """Follow the equilibrium path of t -> (1-t)*g0 + t*g1 from the
    unique equilibrium of g0 to t=1.

    Visits an increasing sequence of rational t, certifying an exact
    equilibrium with the current support at every visited point.  The
    step doubles while the support stays valid and halves when it fails;
    once it falls below `resolution` the tracer pivots to the nearest
    valid support just past the breakpoint (preferring the candidate
    whose equilibrium is closest in L-infinity to the current one).
    Values in `samples` are forced into the visit sequence.  Raises
    TracingError when the path cannot be continued to t=1."""
    if g0.shape != g1.shape:
        raise BimatrixError("traced games must have equal shape")
    m, n = g0.shape
    samples = sorted(set(rat(s) for s in samples))
    if any(not 0 <= s <= 1 for s in samples):
        raise TracingError("samples must lie in [0, 1]")

    # both start constructions (anchor game, uniform-start game) have a
    # unique equilibrium and it is pure, so a pure scan suffices
    start = []
    for i in range(m):
        for j in range(n):
            x0 = [rat(1) if a == i else rat(0) for a in range(m)]
            y0 = [rat(1) if b == j else rat(0) for b in range(n)]
            if is_exact_ne(g0, x0, y0):
                start.append((x0, y0))
    if len(start) != 1:
        raise TracingError("g0 must have a unique pure equilibrium")
    x, y = start[0]
    Sr, Sc = _support_of(x), _support_of(y)
    t = rat(0)
    points = [(t, x, y)]
    supports = [(t, Sr, Sc)]

    def attempt(tt, sr, sc):
        return solve_support(mix_games(g0, g1, tt), sr, sc)

    res = attempt(t, Sr, Sc)
    if res is None:
        raise TracingError("start support invalid at t=0")
    step = step0
    pivots = 0
    while t < 1:
        pivots += 1
        if pivots > max_pivots:
            raise TracingError("pivot budget exhausted")
        target = min(t + step, rat(1))
        for s in samples:
            if t < s < target:
                target = s
                break
        res = attempt(target, Sr, Sc)
        if res is not None:
            t, (x, y) = target, res
            points.append((t, x, y))
            if target not in samples:
                step = step * 2
            continue
        if step > resolution:
            step = step / 2
            continue
        # breakpoint just past t: pivot support at t + resolution (never
        # jumping past a requested sample, which must be visited exactly)
        th = min(t + resolution, rat(1))
        for s in samples:
            if t < s < th:
                th = s
                break
        best = None
        for tier in (1, 2):
            for sr, sc in _neighbor_supports(Sr, Sc, m, n, tier):
                cand = attempt(th, sr, sc)
                if cand is None:
                    continue
                dist = max(max(abs(a - b) for a, b in zip(cand[0], x)),
                           max(abs(a - b) for a, b in zip(cand[1], y)))
                key = (dist, tuple(sorted(sr)), tuple(sorted(sc)))
                if best is None or key < best[0]:
                    best = (key, sr, sc, cand)
            if best is not None:
                break
        if best is None:
            raise TracingError(
                "no support continuation at t=%s" % rat_str(th))
        _, Sr, Sc, (x, y) = best
        Sr, Sc = _support_of(x) or Sr, _support_of(y) or Sc
        t = th
        points.append((t, x, y))
        supports.append((t, Sr, Sc))
        step = step0
    # exact solves at the samples are already in `points` (targets);
    # make sure t=1 and all samples present
    have = {tt for tt, _, _ in points}
    missing = [s for s in samples if s not in have]
    if missing:
        raise TracingError("samples not reached: %s"
                           % ", ".join(rat_str(s) for s in missing))
    return TracingResult(points, supports)


def normalize_restricted(x, y, k=None, delta=None):
    """Strip the border strategies (index 0) and renormalize.

    Returns (x_hat, y_hat, bias): the interior profile and the exact
    column bonus delta * x[0] / (1 - x[0]) that the interior game's
    column k carries at an equilibrium with row border weight x[0]
    (zero at x[0] = 0, where the normalized pair is an equilibrium of
    the unmodified interior game).  `bias` is None when `delta` is."""
    if x[0] == 1 or y[0] == 1:
        raise BimatrixError("profile is entirely on the border strategies")
    sx = sum(x[1:])
    sy = sum(y[1:])
    x_hat = [v / sx for v in x[1:]]
    y_hat = [v / sy for v in y[1:]]
    bias = None
    if delta is not None:
        bias = rat(delta) * x[0] / (1 - x[0])
    return x_hat, y_hat, bias


# ---------------------------------------------------------------------------
# Extensions with balancing dummy strategies

DUMMY_PAYOFF = rat(-10)


def _extend(game, row_target, col_target):
    m, n = game.shape
    R = [row[:] + [rat(0)] for row in game.R] + [[rat(0)] * (n + 1)]
    C = [row[:] + [rat(0)] for row in game.C] + [[rat(0)] * (n + 1)]
    bound = rat(max(m, n) + 1)
    for j in range(n):
        v = (m + 1) * col_target[j] - sum(game.C[i][j] for i in range(m))
        if abs(v) > bound:
            raise BimatrixError("balancing payoff %s exceeds %s"
                                % (rat_str(v), rat_str(bound)))
        C[m][j] = v
        R[m][j] = DUMMY_PAYOFF
    for i in range(m):
        v = (n + 1) * row_target[i] - sum(game.R[i][j] for j in range(n))
        if abs(v) > bound:
            raise BimatrixError("balancing payoff %s exceeds %s"
                                % (rat_str(v), rat_str(bound)))
        R[i][n] = v
        C[i][n] = DUMMY_PAYOFF
    R[m][n] = DUMMY_PAYOFF
    C[m][n] = DUMMY_PAYOFF
    ext = BimatrixGame(R, C,
                       row_labels=list(game.row_labels) + ["dummy"],
                       col_labels=list(game.col_labels) + ["dummy"])
    # the dummy rows/columns must be strictly dominated so they never
    # appear in any equilibrium
    if min(v for i in range(m) for v in R[i]) <= DUMMY_PAYOFF:
        raise BimatrixError("dummy row is not strictly dominated")
    if min(C[i][j] for j in range(n) for i in range(m + 1)) <= DUMMY_PAYOFF:
        raise BimatrixError("dummy column is not strictly dominated")
    return ext


def build_vdet_extension(game):
    """Extend with one dummy strategy per side so that against the uniform
    mixture of the extended opponent side, payoffs are exactly
    (1, 0, ..., 0): the first strategy is the strict initial best
    response.  The dummy's own payoff is -10 everywhere (strictly
    dominated); balancing payoffs are checked against the size bound."""
    m, n = game.shape
    row_target = [rat(1) if i == 0 else rat(0) for i in range(m)]
    col_target = [rat(1) if j == 0 else rat(0) for j in range(n)]
    return _extend(game, row_target, col_target)


def build_hvde_extension(game, floor=rat(1, 4)):
    """Like `build_vdet_extension` but the uniform-mixture payoff vector
    is (1, floor, ..., floor): the first strategy keeps a strict gap
    while the remaining ones stay level."""
    m, n = game.shape
    row_target = [rat(1) if i == 0 else rat(floor) for i in range(m)]
    col_target = [rat(1) if j == 0 else rat(floor) for j in range(n)]
    return _extend(game, row_target, col_target)


def build_uniform_start(game):
    """Constant game whose payoffs are the originals against the uniform
    opponent mixture; its equilibria are exactly the pairs of best
    responses to uniform play."""
    m, n = game.shape
    u_r = rat(1, m)
    u_c = rat(1, n)
    R = [[sum(row) * u_c for _ in range(n)] for row in game.R]
    C = [[sum(game.C[i][j] for i in range(m)) * u_r for j in range(n)]
         for _ in range(m)]
    return BimatrixGame(R, C, row_labels=game.row_labels,
                        col_labels=game.col_labels)

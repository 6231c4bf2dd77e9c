"""Lemke-Howson pivoting and the two-copy block embedding.

`lh_solve` runs the classical complementary pivoting algorithm with a
lexicographic ratio test (so degenerate games cannot cycle), entirely in
exact rational arithmetic, and verifies the returned profile against the
best-response conditions.  The pivot ordinal T doubles as the path
parameter: each recorded vertex profile along the way is the equilibrium
of a bonus-modified game, which is what makes the algorithm a homotopy
method.

`build_lh_embedding` wraps an n x n game G (rescaled to [0.4, 0.6]) in a
(2n+2)-square block game: two copies of G on the diagonal (row blocks
A', B' against column blocks A, B), off-diagonal blocks paying (1, 0), a
2x2 matching-pennies corner at scale M between the corner strategies
(C, D columns; C', D' rows) and the block structure, and a small bonus e
paid to each side's first in-copy strategy when the opponent plays a
corner strategy.  Consequences (checked by `check_lemma_bounds`):

* at every equilibrium of the full embedding the corner probabilities
  Pr[C], Pr[D], Pr[C'], Pr[D'] are at most 1/M each, so the statistic
  X = Pr[C] + Pr[D] + Pr[C'] + Pr[D'] ends at most 4/M <= 1/25;
* whenever X <= 1/4 along the pivot path, each of the four blocks
  carries probability at least 1/10, so the copy of G avoiding the
  dropped label stays live and its normalized profile is an equilibrium
  of a first-strategy-biased version of G;
* the first-strategy bonus in the bottom-right copy equals
  e * (Pr[C]+Pr[D]) / Pr[B'] for the row player (and symmetrically),
  which vanishes at the end of the path, releasing the switch strategies.
"""

from .rational import rat, rat_str
from .bimatrix import BimatrixGame, BimatrixError, is_exact_ne, rescale_game

__all__ = [
    "LHError",
    "LHResult",
    "lh_solve",
    "lh_all_labels",
    "LHEmbedding",
    "build_lh_embedding",
    "decode_lh",
    "check_lemma_bounds",
    "x_statistic",
    "bonus_bookkeeping",
    "x_crossing_report",
]


class LHError(RuntimeError):
    pass


class LHResult:
    """Outcome of one Lemke-Howson run: the exact equilibrium (x, y),
    the dropped label, the pivot count, and the vertex path as a list of
    (T, x, y) with normalized profiles (entries where one side is still
    the zero vector are skipped)."""

    def __init__(self, x, y, dropped_label, pivots, path):
        self.x = x
        self.y = y
        self.dropped_label = dropped_label
        self.pivots = pivots
        self.path = path


def _positive_shift(game):
    shift_r = 1 - min(v for row in game.R for v in row)
    shift_c = 1 - min(v for row in game.C for v in row)
    R = [[v + shift_r for v in row] for row in game.R]
    C = [[v + shift_c for v in row] for row in game.C]
    return R, C


class _Dictionary:
    """One polytope's simplex dictionary: rows are basic variables, the
    lexicographic ratio test uses the constant column followed by the
    initial slack columns."""

    def __init__(self, coeff_rows, strat_kind, slack_kind):
        # coeff_rows[r][v] for strategy variables v; slack r is basic
        self.n_strat = len(coeff_rows[0])
        self.n_rows = len(coeff_rows)
        self.strat_kind = strat_kind
        self.slack_kind = slack_kind
        self.rows = []
        for r, cs in enumerate(coeff_rows):
            row = [rat(1)] + [rat(c) for c in cs] + [rat(0)] * self.n_rows
            row[1 + self.n_strat + r] = rat(1)
            self.rows.append(row)
        self.basic = [(slack_kind, r) for r in range(self.n_rows)]

    def _col(self, var):
        kind, idx = var
        if kind == self.strat_kind:
            return 1 + idx
        return 1 + self.n_strat + idx

    def pivot(self, entering):
        """Bring `entering` into the basis; returns the leaving variable.
        Raises LHError on ray termination."""
        c = self._col(entering)
        best = None
        for r in range(self.n_rows):
            a = self.rows[r][c]
            if a <= 0:
                continue
            key = tuple(v / a for v in
                        [self.rows[r][0]] +
                        self.rows[r][1 + self.n_strat:])
            if best is None or key < best[0]:
                best = (key, r)
        if best is None:
            raise LHError("ray termination: unbounded pivot direction")
        r = best[1]
        leaving = self.basic[r]
        pv = self.rows[r][c]
        self.rows[r] = [v / pv for v in self.rows[r]]
        for k in range(self.n_rows):
            if k != r and self.rows[k][c] != 0:
                f = self.rows[k][c]
                self.rows[k] = [a - f * b
                                for a, b in zip(self.rows[k], self.rows[r])]
        self.basic[r] = entering
        return leaving

    def solution(self):
        vals = {}
        for r, var in enumerate(self.basic):
            vals[var] = self.rows[r][0]
        return vals


def lh_solve(game, dropped_label, record_path=True, max_pivots=100000):
    """Lemke-Howson from the artificial equilibrium, dropping the given
    label (0..m-1 are row strategies, m..m+n-1 column strategies).

    Returns an :class:`LHResult` whose (x, y) is verified to be an exact
    equilibrium of `game`."""
    m, n = game.shape
    if not 0 <= dropped_label < m + n:
        raise LHError("label out of range")
    R, C = _positive_shift(game)
    # P-polytope: slacks s_j = 1 - (C^T x)_j, strategy vars x_i
    P = _Dictionary([[C[i][j] for i in range(m)] for j in range(n)],
                    "x", "s")
    # Q-polytope: slacks r_i = 1 - (R y)_i, strategy vars y_j
    Q = _Dictionary([[R[i][j] for j in range(n)] for i in range(m)],
                    "y", "r")

    def label_of(var):
        kind, idx = var
        if kind in ("x", "r"):
            return idx
        return m + idx

    def complement(var):
        kind, idx = var
        return {"x": ("r", idx), "r": ("x", idx),
                "y": ("s", idx), "s": ("y", idx)}[kind]

    def extract():
        pv = P.solution()
        qv = Q.solution()
        x = [pv.get(("x", i), rat(0)) for i in range(m)]
        y = [qv.get(("y", j), rat(0)) for j in range(n)]
        sx, sy = sum(x), sum(y)
        if sx == 0 or sy == 0:
            return None
        return ([v / sx for v in x], [v / sy for v in y])

    entering = (("x", dropped_label) if dropped_label < m
                else ("y", dropped_label - m))
    path = []
    pivots = 0
    while True:
        pivots += 1
        if pivots > max_pivots:
            raise LHError("pivot budget exhausted")
        dic = P if entering[0] in ("x", "s") else Q
        leaving = dic.pivot(entering)
        if record_path:
            prof = extract()
            if prof is not None:
                path.append((pivots, prof[0], prof[1]))
        if label_of(leaving) == dropped_label:
            break
        entering = complement(leaving)
    prof = extract()
    if prof is None:
        raise LHError("terminated at the artificial equilibrium")
    x, y = prof
    if not is_exact_ne(game, x, y):
        raise LHError("pivoting returned a non-equilibrium profile")
    return LHResult(x, y, dropped_label, pivots, path)


def lh_all_labels(game, record_path=True):
    """label -> LHResult for every label of the game."""
    m, n = game.shape
    return {k: lh_solve(game, k, record_path=record_path)
            for k in range(m + n)}


# ---------------------------------------------------------------------------
# The two-copy block embedding

class LHEmbedding:
    """Layout of the block embedding.  Row strategies: the A' block
    (n entries), the B' block, then C', D'.  Column strategies: A, B,
    then C, D.  `game` is the (2n+2)-square embedding; `inner` the
    rescaled copy of the embedded game."""

    def __init__(self, game, inner, n, M, e):
        self.game = game
        self.inner = inner
        self.n = n
        self.M = M
        self.e = e

    def blocks(self, x, y):
        """Block probabilities: dict with keys A, B, C, D, Ap, Bp, Cp, Dp."""
        n = self.n
        return {
            "A": sum(y[:n]), "B": sum(y[n:2 * n]),
            "C": y[2 * n], "D": y[2 * n + 1],
            "Ap": sum(x[:n]), "Bp": sum(x[n:2 * n]),
            "Cp": x[2 * n], "Dp": x[2 * n + 1],
        }

    def copy_slices(self, copy):
        """(row slice, column slice) of the chosen copy (0 = top-left
        A' x A, 1 = bottom-right B' x B)."""
        n = self.n
        if copy == 0:
            return slice(0, n), slice(0, n)
        return slice(n, 2 * n), slice(n, 2 * n)

    def label_block(self, label):
        """Which block a label's strategy belongs to."""
        n = self.n
        size = 2 * n + 2
        if label < size:
            i = label
            return ("Ap" if i < n else
                    "Bp" if i < 2 * n else
                    "Cp" if i == 2 * n else "Dp")
        j = label - size
        return ("A" if j < n else
                "B" if j < 2 * n else
                "C" if j == 2 * n else "D")


def build_lh_embedding(game, M=1000, e=1):
    """Embed the square game into the (2n+2)-square two-copy block game
    (payoffs of `game` are rescaled to [0.4, 0.6] first)."""
    m, n = game.shape
    if m != n:
        raise BimatrixError("embedded game must be square")
    M, e = rat(M), rat(e)
    if M < 100 or e > 1:
        raise BimatrixError("need M >= 100 and e <= 1")
    inner = rescale_game(game, rat(2, 5), rat(3, 5))
    size = 2 * n + 2
    R = [[rat(0)] * size for _ in range(size)]
    C = [[rat(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            # diagonal copies of the inner game
            R[i][j] = inner.R[i][j]
            C[i][j] = inner.C[i][j]
            R[n + i][n + j] = inner.R[i][j]
            C[n + i][n + j] = inner.C[i][j]
            # off-diagonal blocks: row player 1, column player 0
            R[i][n + j] = rat(1)
            R[n + i][j] = rat(1)
    cC, cD = 2 * n, 2 * n + 1
    for i in range(n):
        first = e if i == 0 else rat(0)
        # A' rows vs corner columns
        R[i][cC], C[i][cC] = -M + first, M
        R[i][cD], C[i][cD] = M + first, -M
        # B' rows vs corner columns
        R[n + i][cC], C[n + i][cC] = M + first, -M
        R[n + i][cD], C[n + i][cD] = -M + first, M
        # corner rows vs A and B columns
        R[cC][i], C[cC][i] = -M, M + first
        R[cC][n + i], C[cC][n + i] = M, -M + first
        R[cD][i], C[cD][i] = M, -M + first
        R[cD][n + i], C[cD][n + i] = -M, M + first
    # corner vs corner: plain matching pennies at scale M
    R[cC][cC], C[cC][cC] = -M, M
    R[cC][cD], C[cC][cD] = M, -M
    R[cD][cC], C[cD][cC] = M, -M
    R[cD][cD], C[cD][cD] = -M, M
    labels_r = (["Ap:%s" % s for s in inner.row_labels] +
                ["Bp:%s" % s for s in inner.row_labels] + ["Cp", "Dp"])
    labels_c = (["A:%s" % s for s in inner.col_labels] +
                ["B:%s" % s for s in inner.col_labels] + ["C", "D"])
    emb = BimatrixGame(R, C, row_labels=labels_r, col_labels=labels_c)
    return LHEmbedding(emb, inner, n, M, e)


def x_statistic(emb, x, y):
    b = emb.blocks(x, y)
    return b["C"] + b["D"] + b["Cp"] + b["Dp"]


def check_lemma_bounds(emb, x, y, terminal=True):
    """Bound report for one profile of the embedding.

    `corner_ok` checks the end-of-path bounds (each corner probability
    at most 1/M, X at most 4/M <= 1/25); `blocks_ok` checks that all
    four block probabilities are at least 1/10, which must hold whenever
    X <= 1/4 (and is only asserted then)."""
    b = emb.blocks(x, y)
    X = b["C"] + b["D"] + b["Cp"] + b["Dp"]
    inv_m = 1 / emb.M
    corner_ok = all(b[k] <= inv_m for k in ("C", "D", "Cp", "Dp")) \
        and X <= rat(1, 25)
    tenth = rat(1, 10)
    blocks_ok = all(b[k] >= tenth for k in ("A", "B", "Ap", "Bp"))
    report = {
        "blocks": b,
        "X": X,
        "corner_ok": corner_ok,
        "blocks_ok": blocks_ok if X <= rat(1, 4) else None,
    }
    if terminal and not corner_ok:
        report["violation"] = "terminal corner bounds"
    return report


def bonus_bookkeeping(emb, x, y):
    """The exact first-strategy bonuses induced by the corner columns and
    rows: the row player's extra payoff for the first row of each copy is
    e * (Pr[C] + Pr[D]); normalized within a copy of weight w it becomes
    e * (Pr[C] + Pr[D]) / w (and symmetrically for the column player)."""
    b = emb.blocks(x, y)
    raw_row = emb.e * (b["C"] + b["D"])
    raw_col = emb.e * (b["Cp"] + b["Dp"])
    out = {"row_raw": raw_row, "col_raw": raw_col}
    if b["Bp"] > 0:
        out["row_in_copy1"] = raw_row / b["Bp"]
    if b["B"] > 0:
        out["col_in_copy1"] = raw_col / b["B"]
    if b["Ap"] > 0:
        out["row_in_copy0"] = raw_row / b["Ap"]
    if b["A"] > 0:
        out["col_in_copy0"] = raw_col / b["A"]
    return out


def decode_lh(emb, result):
    """Project an LH equilibrium of the embedding onto the copy of the
    inner game that avoids the dropped label.

    Returns (x_hat, y_hat, report): the normalized in-copy profile (an
    equilibrium of the first-strategy-biased inner game; at the end of
    the path the biases are at most e * X / Pr[block], vanishing with X)
    and the bound report.  Raises LHError when the required bounds fail
    or the chosen copy carries no probability."""
    x, y = result.x, result.y
    block = emb.label_block(result.dropped_label)
    copy = 1 if block in ("Ap", "A") else 0 if block in ("Bp", "B") else 1
    report = check_lemma_bounds(emb, x, y, terminal=True)
    if not report["corner_ok"]:
        raise LHError("terminal corner bounds violated: X=%s"
                      % rat_str(report["X"]))
    if report["blocks_ok"] is False:
        raise LHError("block lower bounds violated at X <= 1/4")
    rs, cs = emb.copy_slices(copy)
    xs, ys = x[rs], y[cs]
    wx, wy = sum(xs), sum(ys)
    if wx == 0 or wy == 0:
        raise LHError("chosen copy carries no probability")
    report["copy"] = copy
    report["bonuses"] = bonus_bookkeeping(emb, x, y)
    return [v / wx for v in xs], [v / wy for v in ys], report


def x_crossing_report(emb, path):
    """How X(T) behaves along a pivot path: (first T with X <= 1/4 that
    is never exceeded later, final X).  The final X must be small by the
    terminal bounds; the report documents the single effective crossing
    of the 1/4 threshold in the terminal segment."""
    quarter = rat(1, 4)
    xs = [(T, x_statistic(emb, x, y)) for T, x, y in path]
    t_prime = None
    for T, X in xs:
        if X > quarter:
            t_prime = None
        elif t_prime is None:
            t_prime = T
    return {"T_prime": t_prime, "final_X": xs[-1][1] if xs else None,
            "series": xs}

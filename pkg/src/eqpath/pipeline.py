"""End-to-end drivers: instance -> coloring -> fields -> path -> answer,
plus the game-side constructions that decode an instance through Nash
equilibrium computations.

`instance_fields` compiles an instance to a refined grid coloring and the
pair of interpolated fields (the basic reference field and the instance
field); `solve_instance` follows the homotopy path between them and decodes
the endpoint back to the line the instance's successor walk reaches.

The game builders work at desk scale with constant-endpoint circuits: the
basic field's fixpoint x0 and the instance coloring's unique panchromatic
vertex x1 are computed up front, and the graphical games interpolate
between them under switch-player control.  The switches are the live
dials; the downstream bimatrix constructions (tracing border, two-copy
block embedding) drive them exactly the way the full-scale reduction
would, so the terminal equilibria still decode through the coloring.

* `build_tracing_instance`: a single-switch game where each coordinate
  player settles at x0 + (x1 - x0) * p[switch].  Encoded, rescaled to
  [9/10, 11/10], and bordered with the start strategies; the switch's
  action-0 strategy is interior column k, carrying the delta bonus that
  holds the switch at 0 until the border weight decays.
* `build_embedding_instance`: a two-switch game.  The row-side switch is
  biased toward 1 and read (via a threshold player and a steep AND
  gadget) together with the column-side switch, so the coordinates
  settle at x1 exactly when both switches play 1.  The block embedding's
  corner bonuses press the switches' first strategies while the corner
  probabilities are live and release them at the end of the pivot path.
"""

import csv
import json
import os
import time

from .rational import rat, rat_str
from .brouwer import (basic_coloring, compile_dgp_coloring, refine_coloring,
                      scan_panchromatic)
from .field import implement_coloring, modify_reversals
from .fixpath import (decode_fixpoint, find_f0_fixpoint, follow_browder_path,
                      follow_reversal_path)
from .instances import follow_line, load_instance
from .graphgames import GraphicalGame, add_affine_gadget, bias_player
from .bimatrix import (BimatrixGame, build_g0, build_g1, build_uniform_start,
                       build_vdet_extension, build_hvde_extension,
                       encode_graphical, is_exact_ne, normalize_restricted,
                       rescale_game, trace_equilibrium_path, TracingError)
from .lemke_howson import build_lh_embedding, decode_lh, lh_all_labels

__all__ = [
    "instance_fields", "solve_instance",
    "instance_anchors",
    "build_switch_game", "build_two_switch_game",
    "TracingInstance", "build_tracing_instance",
    "EmbeddingInstance", "build_embedding_instance",
    "PipelineConfig", "VerificationReport",
    "run_pipeline", "verify_instance", "export_trace", "append_report",
]


def instance_fields(g, reversal_mode=False, refine=1):
    """Build (f0, f1, coloring, embedding) for an instance.

    The compiled coloring is refined by the given number of factor-2 steps
    so that interpolation zeros occur only at planned panchromatic
    vertices.  With reversal_mode the instance field carries the slab
    rescaling that forces the path through the low/high t bands.
    """
    col, emb = compile_dgp_coloring(g, reversal_mode=reversal_mode)
    fcol, femb = refine_coloring(col, emb, refine)
    f0 = implement_coloring(basic_coloring(fcol.m))
    f1 = implement_coloring(fcol)
    if reversal_mode:
        f1 = modify_reversals(f1)
    return f0, f1, fcol, femb


def solve_instance(g, reversal_mode=False, verify=False, max_steps=2_000_000):
    """Follow the homotopy path for an instance and decode its endpoint.

    Returns (line, endpoint, trace): the line index the path's t=1
    endpoint decodes to, the exact endpoint, and the full path trace.  In
    reversal mode the trace carries the linear-homotopy parameter, which is
    the one the slab alternation claims are about.
    """
    f0, f1, fcol, femb = instance_fields(g, reversal_mode=reversal_mode)
    if reversal_mode:
        x, trace = follow_reversal_path(f0, f1, max_steps=max_steps,
                                        verify=verify)
    else:
        x, trace = follow_browder_path(f0, f1, max_steps=max_steps,
                                       verify=verify)
    line = decode_fixpoint(x, fcol, femb)
    return line, x, trace


# ---------------------------------------------------------------------------
# Anchors: the two cube points the desk-scale games interpolate between

def instance_anchors(g, refine=1):
    """(x0, x1, coloring, embedding): the basic field's fixpoint and the
    instance coloring's unique panchromatic vertex (as a cube point).

    The games built from these anchors must decode through the same
    coloring the full pipeline uses, so the refined coloring and its
    embedding map are returned alongside."""
    col, emb = compile_dgp_coloring(g)
    fcol, femb = refine_coloring(col, emb, refine)
    pans = scan_panchromatic(fcol)
    if len(pans) != 1:
        raise ValueError("expected a unique panchromatic vertex, found %d"
                         % len(pans))
    N = fcol.N
    x1 = tuple(rat(c, N) for c in pans[0])
    f0 = implement_coloring(basic_coloring(fcol.m))
    x0 = find_f0_fixpoint(f0)
    return x0, x1, fcol, femb


# ---------------------------------------------------------------------------
# Switch-controlled graphical games

SWITCH_BIAS = rat(1, 4)


def build_switch_game(x0, x1):
    """Single-switch game: coordinate players F0, F1, F2 settle, at every
    exact equilibrium, at x0 + (x1 - x0) * p[v_switch].  The switch has
    constant payoffs plus a small bias toward action 1, so it plays 1
    unless an external bonus (the tracing border's delta channel) holds
    its action-0 strategy.  Bipartite: switch and coordinates on the
    column side, gadget auxiliaries on the row side."""
    gg = GraphicalGame()
    gg.add_player("v_switch")
    coords = []
    for i in range(3):
        out = add_affine_gadget(gg, "F%d" % i, ["v_switch"],
                                [rat(x1[i]) - rat(x0[i])], rat(x0[i]))
        coords.append(out)
    bias_player(gg, "v_switch", 1, SWITCH_BIAS)
    gg.bipartition = {p: (0 if p.endswith("#aux") else 1)
                      for p in gg.players}
    gg.check_bipartition()
    return gg, tuple(coords), "v_switch"


def build_two_switch_game(x0, x1):
    """Two-switch game for the block embedding.  The row-side switch is
    live; the column-side switch has constant payoffs and is read by a
    threshold player r (r plays 1 exactly when the column switch favors
    1).  A steep AND gadget q = clip(5/2 p[switch_r] + 5/2 p[r] - 7/2)
    is 1 only when both switches play 1, and the coordinates settle at
    x0 + (x1 - x0) * p[q].  Both switches are biased toward 1; each
    side's switch occupies the first block of its side, so the embedding
    corner bonuses press exactly their action-0 strategies."""
    gg = GraphicalGame()
    gg.add_player("switch_r")
    gg.add_player("switch_c")
    gg.add_player("r")
    gg.add_term("r", "switch_c", [[1, 0], [0, 1]])
    add_affine_gadget(gg, "q", ["switch_r", "r"],
                      [rat(5, 2), rat(5, 2)], rat(-7, 2))
    coords = []
    for i in range(3):
        out = add_affine_gadget(gg, "F%d" % i, ["q"],
                                [rat(x1[i]) - rat(x0[i])], rat(x0[i]))
        coords.append(out)
    bias_player(gg, "switch_r", 1, SWITCH_BIAS)
    bias_player(gg, "switch_c", 1, SWITCH_BIAS)
    gg.bipartition = {}
    for p in gg.players:
        if p == "switch_c" or p.endswith("#aux"):
            gg.bipartition[p] = 1
        else:
            gg.bipartition[p] = 0
    gg.check_bipartition()
    return gg, tuple(coords), ("switch_r", "switch_c")


def _decode_point(profile, coords, fcol, femb):
    point = tuple(profile[c] for c in coords)
    return decode_fixpoint(point, fcol, femb)


# ---------------------------------------------------------------------------
# Linear tracing instances

class TracingInstance:
    """Bundle for one tracing construction: thin wrappers around the
    games plus the decode chain back to the instance's line."""

    def __init__(self, g, g0, g1, encoded, rescaled, emap, gg, coords,
                 switch, k, delta, x0, x1, fcol, femb):
        self.g = g
        self.g0 = g0
        self.g1 = g1
        self.encoded = encoded
        self.rescaled = rescaled
        self.emap = emap
        self.gg = gg
        self.coords = coords
        self.switch = switch
        self.k = k
        self.delta = delta
        self.x0 = x0
        self.x1 = x1
        self.fcol = fcol
        self.femb = femb

    def interior_profile(self, x, y):
        """Normalize a bordered profile onto the interior game and decode
        the graphical profile; returns (x_hat, y_hat, bias, profile)."""
        x_hat, y_hat, bias = normalize_restricted(x, y, k=self.k,
                                                  delta=self.delta)
        profile, _ = self.emap.decode_profile(x_hat, y_hat)
        return x_hat, y_hat, bias, profile

    def decode(self, x, y):
        """Instance answer encoded by a terminal (t=1) profile."""
        _, _, _, profile = self.interior_profile(x, y)
        return _decode_point(profile, self.coords, self.fcol, self.femb)

    def trace(self, samples=(rat(1, 2), rat(3, 5), rat(1))):
        return trace_equilibrium_path(self.g0, self.g1, samples=samples)


def build_tracing_instance(g, delta=rat(1, 256), tightness=1024, refine=1,
                           calibrate=True):
    """Tracing construction for an instance: switch game -> encoding ->
    rescale to [9/10, 11/10] -> border.  Interior column k is the
    switch's action-0 strategy.  With `calibrate`, delta doubles (up to a
    cap) until the traced path pins the switch at t=1/2, i.e. the
    equilibrium there puts zero weight on interior column k+1."""
    x0, x1, fcol, femb = instance_anchors(g, refine=refine)
    gg, coords, switch = build_switch_game(x0, x1)
    encoded, emap = encode_graphical(gg, tightness=tightness)
    rescaled = rescale_game(encoded, rat(9, 10), rat(11, 10))
    n = encoded.shape[0]
    k = emap.strategy_index(switch, 0) + 1
    delta = rat(delta)
    g0 = build_g0(n)
    last_err = None
    for _ in range(12):
        g1 = build_g1(rescaled, k, delta)
        inst = TracingInstance(g, g0, g1, encoded, rescaled, emap, gg,
                               coords, switch, k, delta, x0, x1, fcol, femb)
        if not calibrate:
            return inst
        try:
            tr = inst.trace(samples=(rat(1, 2),))
            x_half, y_half = tr.at(rat(1, 2))
            if y_half[k + 1] == 0:
                return inst
            last_err = "switch not pinned at t=1/2 (delta=%s)" \
                % rat_str(delta)
        except TracingError as exc:
            last_err = str(exc)
        delta = delta * 2
        if delta > 1:
            break
    raise TracingError("delta calibration failed: %s" % last_err)


# ---------------------------------------------------------------------------
# Block-embedding instances

class EmbeddingInstance:
    """Bundle for one block-embedding construction."""

    def __init__(self, g, embedding, encoded, emap, gg, coords, switches,
                 x0, x1, fcol, femb):
        self.g = g
        self.embedding = embedding
        self.encoded = encoded
        self.emap = emap
        self.gg = gg
        self.coords = coords
        self.switches = switches
        self.x0 = x0
        self.x1 = x1
        self.fcol = fcol
        self.femb = femb

    def decode(self, result):
        """Instance answer encoded by one lh_solve result."""
        x_hat, y_hat, report = decode_lh(self.embedding, result)
        profile, _ = self.emap.decode_profile(x_hat, y_hat)
        answer = _decode_point(profile, self.coords, self.fcol, self.femb)
        return answer, report

    def solve_all(self):
        return lh_all_labels(self.embedding.game)


def build_embedding_instance(g, tightness=1024, refine=1, M=1000, e=1):
    """Two-copy block embedding of an instance's two-switch game."""
    x0, x1, fcol, femb = instance_anchors(g, refine=refine)
    gg, coords, switches = build_two_switch_game(x0, x1)
    encoded, emap = encode_graphical(gg, tightness=tightness)
    embedding = build_lh_embedding(encoded, M=M, e=e)
    # the corner bonuses must press exactly the switches' first strategies
    if emap.strategy_index(switches[0], 0) != 0:
        raise ValueError("row switch must occupy the first row block")
    if emap.strategy_index(switches[1], 0) != 0:
        raise ValueError("column switch must occupy the first column block")
    return EmbeddingInstance(g, embedding, encoded, emap, gg, coords,
                             switches, x0, x1, fcol, femb)


# ---------------------------------------------------------------------------
# Reports, exports, orchestration

class PipelineConfig:
    """What to run: instance path (or preloaded instance), targets among
    {homotopy, tracing, lemke_howson, vdet, hvde}, mode flags."""

    TARGETS = ("homotopy", "tracing", "lemke_howson", "vdet", "hvde")

    def __init__(self, instance=None, instance_path=None,
                 targets=("homotopy",), reversal_mode=False,
                 output_dir=None, seed=None, verify=False):
        self.instance = instance
        self.instance_path = instance_path
        self.targets = tuple(targets)
        for t in self.targets:
            if t not in self.TARGETS:
                raise ValueError("unknown target %r" % (t,))
        if reversal_mode and set(self.targets) - {"homotopy"}:
            raise ValueError("reversal mode applies to the homotopy target")
        self.reversal_mode = reversal_mode
        self.output_dir = output_dir or os.environ.get("EQPATH_OUT", ".")
        self.seed = seed
        self.verify = verify

    def load(self):
        if self.instance is None:
            if self.instance_path is None:
                raise ValueError("no instance given")
            self.instance = load_instance(self.instance_path)
        return self.instance


class VerificationReport:
    """One instance's outcomes across targets, JSON-serializable."""

    def __init__(self, instance_id, oracle):
        self.instance_id = instance_id
        self.oracle = oracle
        self.answers = {}
        self.agreement = {}
        self.suites = {}
        self.timings = {}

    def record(self, target, answer, seconds):
        self.answers[target] = answer
        self.agreement[target] = (answer == self.oracle)
        self.timings[target] = round(seconds, 3)

    def record_suite(self, name, passed, failed):
        self.suites[name] = {"passed": passed, "failed": failed}

    @property
    def all_agree(self):
        return all(self.agreement.values())

    def to_json(self):
        return {
            "instance": self.instance_id,
            "oracle": self.oracle,
            "answers": self.answers,
            "agreement": self.agreement,
            "suites": self.suites,
            "timings": self.timings,
        }


def append_report(report, path):
    """Append one report as a JSON line (corpus sweeps accumulate)."""
    with open(path, "a") as fh:
        fh.write(json.dumps(report.to_json(), sort_keys=True) + "\n")


def _dec12(v):
    """Fixed 12-digit decimal rendering for plotting columns."""
    return "%.12f" % float(rat(v))


def export_trace(trace, fmt, path):
    """Write a followed-path trace (CSV or JSON): exact rationals plus a
    12-digit decimal column per coordinate for plotting."""
    records = list(trace.records())
    if not records:
        raise ValueError("empty trace")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["T", "t", "x1", "x2", "x3", "residual",
                        "t_dec", "x1_dec", "x2_dec", "x3_dec"])
            for T, t, x, res in records:
                w.writerow([T, rat_str(t)] + [rat_str(c) for c in x] +
                           [rat_str(res), _dec12(t)] +
                           [_dec12(c) for c in x])
    elif fmt == "json":
        data = [{"T": T, "t": rat_str(t),
                 "x": [rat_str(c) for c in x], "residual": rat_str(res)}
                for T, t, x, res in records]
        with open(path, "w") as fh:
            json.dump(data, fh)
    else:
        raise ValueError("unknown trace format %r" % (fmt,))
    return path


def export_lh_trace(result, path):
    """Pivot-path CSV for one Lemke-Howson run: T, basis marker, profile."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "basis", "profile"])
        for T, x, y in result.path:
            w.writerow([T, "pivot%d" % T,
                        ";".join(rat_str(v) for v in x) + "|" +
                        ";".join(rat_str(v) for v in y)])
    return path


def export_tracing_trace(tracing_result, path):
    """CSV of a traced equilibrium path: t plus the exact profile."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "t_dec", "x", "y"])
        for t, x, y in tracing_result.points:
            w.writerow([rat_str(t), _dec12(t),
                        ";".join(rat_str(v) for v in x),
                        ";".join(rat_str(v) for v in y)])
    return path


def run_pipeline(cfg):
    """Run every enabled target for one instance and compare each decoded
    answer against the successor-walk oracle."""
    g = cfg.load()
    inst_id = cfg.instance_path or ("n%d-seeded" % g.n)
    report = VerificationReport(inst_id, follow_line(g))
    tracing = None
    for target in cfg.targets:
        t0 = time.time()
        if target == "homotopy":
            line, _, _ = solve_instance(g, reversal_mode=cfg.reversal_mode,
                                        verify=cfg.verify)
            report.record(target, line, time.time() - t0)
        elif target == "tracing":
            tracing = build_tracing_instance(g)
            tr = tracing.trace()
            x1p, y1p = tr.at(rat(1))
            report.record(target, tracing.decode(x1p, y1p),
                          time.time() - t0)
        elif target == "lemke_howson":
            emb = build_embedding_instance(g)
            results = emb.solve_all()
            answers = set()
            for res in results.values():
                answer, _ = emb.decode(res)
                answers.add(answer)
            if len(answers) != 1:
                raise RuntimeError("labels decode to %r" % (answers,))
            report.record(target, answers.pop(), time.time() - t0)
        elif target in ("vdet", "hvde"):
            if tracing is None:
                tracing = build_tracing_instance(g)
            build = (build_vdet_extension if target == "vdet"
                     else build_hvde_extension)
            ext = build(tracing.g1)
            start = build_uniform_start(ext)
            tr = trace_equilibrium_path(start, ext, samples=(rat(1),))
            x1p, y1p = tr.at(rat(1))
            # the dominated dummies carry no weight; decode the restriction
            report.record(target, tracing.decode(x1p[:-1], y1p[:-1]),
                          time.time() - t0)
    return report


def verify_instance(cfg):
    """Run the invariant suites on one instance's artifacts; failures are
    report entries, not exceptions."""
    from .field import homotopy_eval
    import random
    g = cfg.load()
    inst_id = cfg.instance_path or ("n%d-seeded" % g.n)
    report = VerificationReport(inst_id, follow_line(g))
    f0, f1, fcol, femb = instance_fields(g, reversal_mode=cfg.reversal_mode)
    rng = random.Random(cfg.seed or 0)

    # exterior coloring rule, restated independently: faces take colors
    # 1/2/3/0 with precedence i=0, j=0, k=0, then the far faces
    passed = failed = 0
    N = fcol.N
    for _ in range(200):
        cell = tuple(rng.choice([0, 1, rng.randrange(N), N - 1])
                     for _ in range(3))
        i, j, k = cell
        expect = (1 if i == 0 else 2 if j == 0 else 3 if k == 0 else
                  0 if N - 1 in cell else None)
        got = fcol.color(i, j, k)
        if expect is None or got == expect:
            passed += 1
        else:
            failed += 1
    report.record_suite("boundary", passed, failed)

    def rnd_point():
        return tuple(rat(rng.randrange(0, 513), 512) for _ in range(3))

    passed = failed = 0
    for _ in range(100):
        x = rnd_point()
        if homotopy_eval(f0, f1, rat(0), x) == f0.eval(x):
            passed += 1
        else:
            failed += 1
        if homotopy_eval(f0, f1, rat(1), x) == f1.eval(x):
            passed += 1
        else:
            failed += 1
    report.record_suite("endpoint-identities", passed, failed)

    lip = 2 * rat(1, 1 << g.n)
    passed = failed = 0
    for _ in range(100):
        x, y = rnd_point(), rnd_point()
        dx = max(abs(a - b) for a, b in zip(x, y))
        fx = f1.eval(x)
        fy = f1.eval(y)
        disp = max(abs((a - c) - (b - d))
                   for a, b, c, d in zip(fx, fy, x, y))
        if disp <= lip * dx:
            passed += 1
        else:
            failed += 1
    report.record_suite("displacement-lipschitz", passed, failed)
    return report

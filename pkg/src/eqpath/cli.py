"""Command-line interface.

One verb per pipeline stage; all file formats are the owning modules'
JSON/CSV formats with rationals rendered as "p/q".  The output directory
defaults to the current directory and can be set with EQPATH_OUT.
"""

import argparse
import json
import os
import struct
import sys

from .rational import rat, rat_str
from .instances import (gen_random_instance, follow_line, load_instance,
                        save_instance)
from .brouwer import BrouwerColoring, compile_dgp_coloring, refine_coloring, \
    scan_panchromatic
from .field import GateCircuit, const_circuit
from .fixpath import count_reversals
from .graphgames import GraphicalGame, build_simulating_game
from .bimatrix import (BimatrixGame, encode_graphical, support_enumerate_ne,
                       trace_equilibrium_path)
from .lemke_howson import lh_solve, lh_all_labels
from .pipeline import (PipelineConfig, run_pipeline, verify_instance,
                       export_trace, export_lh_trace, export_tracing_trace,
                       append_report, build_tracing_instance,
                       build_switch_game, build_two_switch_game,
                       instance_anchors, solve_instance, instance_fields)


def _outpath(args, name):
    base = getattr(args, "out", None)
    if base:
        return base
    outdir = os.environ.get("EQPATH_OUT", ".")
    return os.path.join(outdir, name)


def save_coloring_dense(col, path):
    """Dense export: 4-byte little-endian grid parameter, then one color
    byte per cubelet in i-major order."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", col.m))
        N = col.N
        for i in range(N):
            for j in range(N):
                fh.write(bytes(col.color(i, j, k) for k in range(N)))


def load_coloring_dense(path):
    with open(path, "rb") as fh:
        (m,) = struct.unpack("<I", fh.read(4))
        col = BrouwerColoring(m, "dense")
        N = col.N
        for i in range(N):
            for j in range(N):
                row = fh.read(N)
                for k, c in enumerate(row):
                    if col._exterior(i, j, k) is None and c:
                        col.paint[(i, j, k)] = c
        return col


def cmd_gen(args):
    g = gen_random_instance(args.n, args.len, args.seed)
    path = _outpath(args, "instance-n%d-s%d.json" % (args.n, args.seed))
    save_instance(g, path)
    print(path)


def cmd_oracle(args):
    g = load_instance(args.instance)
    print(follow_line(g))


def cmd_compile_bmf(args):
    g = load_instance(args.instance)
    col, emb = compile_dgp_coloring(g, reversal_mode=args.reversals)
    path = _outpath(args, "coloring.bin")
    save_coloring_dense(col, path)
    print(path)


def cmd_scan(args):
    col = load_coloring_dense(args.coloring)
    for v in scan_panchromatic(col):
        print("%d %d %d" % v)


def cmd_compile_circuit(args):
    g = load_instance(args.instance)
    x0, x1, fcol, _ = instance_anchors(g)
    point = x0 if args.basic else x1
    c = const_circuit(point)
    path = _outpath(args, "circuit.json")
    with open(path, "w") as fh:
        json.dump(c.to_json(), fh, indent=1)
    print(path)


def cmd_eval(args):
    with open(args.circuit) as fh:
        c = GateCircuit.from_json(json.load(fh))
    point = tuple(rat(s) for s in args.point.split(","))
    print(",".join(rat_str(v) for v in c.eval(point)))


def cmd_follow(args):
    g = load_instance(args.instance)
    if args.mode == "grid":
        from .fixpath import grid_bfs
        f0, f1, fcol, femb = instance_fields(g,
                                             reversal_mode=args.reversals)
        result = grid_bfs(f0, f1)
        print(result)
        return
    line, x, trace = solve_instance(g, reversal_mode=args.reversals)
    if args.reversals:
        print("reversals: %d" % count_reversals(trace))
    if args.trace:
        export_trace(trace, "csv", args.trace)
    print("answer: %d  endpoint: %s" %
          (line, ",".join(rat_str(c) for c in x)))


def cmd_build_gg(args):
    g = load_instance(args.instance)
    x0, x1, fcol, femb = instance_anchors(g)
    if args.two_switches:
        gg, coords, _ = build_two_switch_game(x0, x1)
    elif args.switch:
        gg, coords, _ = build_switch_game(x0, x1)
    else:
        gg, coords = build_simulating_game(const_circuit(x1))
    path = _outpath(args, "graphical.json")
    with open(path, "w") as fh:
        json.dump({"game": gg.to_json(), "coords": list(coords)}, fh,
                  indent=1)
    print(path)


def cmd_encode_gg(args):
    with open(args.gg) as fh:
        obj = json.load(fh)
    gg = GraphicalGame.from_json(obj["game"] if "game" in obj else obj)
    game, emap = encode_graphical(gg, tightness=args.tightness)
    path = _outpath(args, "encoded.json")
    game.save(path)
    print(path)


def cmd_build_tracing(args):
    g = load_instance(args.instance)
    kwargs = {}
    if args.delta is not None:
        kwargs = {"delta": rat(args.delta), "calibrate": False}
    inst = build_tracing_instance(g, **kwargs)
    base = _outpath(args, "tracing")
    inst.g0.save(base + "-g0.json")
    inst.g1.save(base + "-g1.json")
    with open(base + "-meta.json", "w") as fh:
        json.dump({"k": inst.k, "delta": rat_str(inst.delta)}, fh)
    print(base + "-g0.json")
    print(base + "-g1.json")


def cmd_trace(args):
    g0 = BimatrixGame.load(args.g0)
    g1 = BimatrixGame.load(args.g1)
    samples = [rat(s) for s in args.samples.split(",")] if args.samples \
        else [rat(1, 2), rat(3, 5), rat(1)]
    if args.t_grid:
        # fallback: support enumeration at each grid point, warm-started
        from .bimatrix import mix_games
        prev = None
        rows = []
        for i in range(args.t_grid + 1):
            t = rat(i, args.t_grid)
            nes = support_enumerate_ne(mix_games(g0, g1, t))
            if not nes:
                raise SystemExit("no equilibrium at t=%s" % rat_str(t))
            if prev is None:
                pick = nes[0]
            else:
                pick = min(nes, key=lambda e: max(
                    max(abs(a - b) for a, b in zip(e[0], prev[0])),
                    max(abs(a - b) for a, b in zip(e[1], prev[1]))))
            prev = pick
            rows.append((t, pick[0], pick[1]))

        class _R:
            points = rows
        result = _R()
    else:
        result = trace_equilibrium_path(g0, g1, samples=samples)
    path = _outpath(args, "trace.csv")
    export_tracing_trace(result, path)
    print(path)


def cmd_lh(args):
    game = BimatrixGame.load(args.game)
    if args.all:
        results = lh_all_labels(game)
        for k in sorted(results):
            res = results[k]
            print("label %d: pivots=%d x=%s y=%s" %
                  (k, res.pivots,
                   ";".join(rat_str(v) for v in res.x),
                   ";".join(rat_str(v) for v in res.y)))
        return
    res = lh_solve(game, args.label)
    if args.trace:
        export_lh_trace(res, args.trace)
    print("pivots=%d" % res.pivots)
    print("x=" + ";".join(rat_str(v) for v in res.x))
    print("y=" + ";".join(rat_str(v) for v in res.y))


def cmd_enumerate(args):
    game = BimatrixGame.load(args.game)
    for x, y in support_enumerate_ne(game):
        print(";".join(rat_str(v) for v in x) + "|" +
              ";".join(rat_str(v) for v in y))


def cmd_verify(args):
    cfg = PipelineConfig(instance_path=args.instance,
                         reversal_mode=args.reversals, seed=args.seed)
    report = verify_instance(cfg)
    if args.report:
        append_report(report, args.report)
    print(json.dumps(report.to_json(), sort_keys=True))


def cmd_sweep(args):
    import random
    rng = random.Random(args.seed)
    targets = tuple(args.targets.split(","))
    outdir = os.environ.get("EQPATH_OUT", ".")
    report_path = args.report or os.path.join(outdir, "sweep.jsonl")
    ok = 0
    for i in range(args.count):
        seed = rng.randrange(1 << 30)
        length = rng.randrange(2, min(8, 1 << args.n))
        g = gen_random_instance(args.n, length, seed)
        cfg = PipelineConfig(instance=g, targets=targets, seed=seed)
        report = run_pipeline(cfg)
        report.instance_id = "n%d-seed%d-len%d" % (args.n, seed, length)
        append_report(report, report_path)
        ok += report.all_agree
    print("%d/%d agree -> %s" % (ok, args.count, report_path))


def main(argv=None):
    ap = argparse.ArgumentParser(prog="eqpath")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="generate a random path instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force line endpoint")
    p.add_argument("--instance", required=True)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("compile-bmf", help="instance -> dense coloring")
    p.add_argument("--instance", required=True)
    p.add_argument("--reversals", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compile_bmf)

    p = sub.add_parser("scan", help="panchromatic vertices of a coloring")
    p.add_argument("--coloring", required=True)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("compile-circuit",
                       help="instance -> anchor gate circuit")
    p.add_argument("--instance", required=True)
    p.add_argument("--basic", action="store_true",
                   help="emit the basic-field anchor instead")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compile_circuit)

    p = sub.add_parser("eval", help="evaluate a gate circuit at a point")
    p.add_argument("--circuit", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("follow", help="follow the homotopy fixpoint path")
    p.add_argument("--instance", required=True)
    p.add_argument("--reversals", action="store_true")
    p.add_argument("--mode", choices=("pl", "grid"), default="pl")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_follow)

    p = sub.add_parser("build-gg", help="instance -> graphical game")
    p.add_argument("--instance", required=True)
    p.add_argument("--switch", action="store_true")
    p.add_argument("--two-switches", dest="two_switches",
                   action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_build_gg)

    p = sub.add_parser("encode-gg", help="graphical game -> bimatrix game")
    p.add_argument("--gg", required=True)
    p.add_argument("--tightness", type=int, default=1024)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_encode_gg)

    p = sub.add_parser("build-tracing",
                       help="instance -> (G0, G1) tracing pair")
    p.add_argument("--instance", required=True)
    p.add_argument("--delta", help="override the calibrated delta")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_build_tracing)

    p = sub.add_parser("trace", help="trace the equilibrium path")
    p.add_argument("--g0", required=True)
    p.add_argument("--g1", required=True)
    p.add_argument("--samples")
    p.add_argument("--t-grid", dest="t_grid", type=int,
                   help="fallback grid mode with this many steps")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("lh", help="run Lemke-Howson")
    p.add_argument("--game", required=True)
    p.add_argument("--label", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_lh)

    p = sub.add_parser("enumerate", help="support-enumerate equilibria")
    p.add_argument("--game", required=True)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--instance", required=True)
    p.add_argument("--reversals", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="generate and verify a corpus")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--targets", default="homotopy")
    p.add_argument("--report")
    p.set_defaults(fn=cmd_sweep)

    args = ap.parse_args(argv)
    args.fn(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())

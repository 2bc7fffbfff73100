"""Batch driver: play games, replay transcripts, tabulate bounds, run oracles.

Exit codes: 0 success (including negative findings), 1 usage error,
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from . import bounds as bounds_mod
from . import digraph as digraph_mod
from . import oracle as oracle_mod
from .builders import (
    Builder2,
    BuilderGeneral,
    BuilderRandom,
    BuilderScript,
    StrategyError,
    arena_size,
    builder2_move_bound,
    builder_general_move_bound,
    hierarchy_for,
)
from .game import GameError, GameParams, ParamError, Transcript, run_match
from .painters import (
    Painter2,
    PainterGeneral,
    PainterGreedy,
    PainterRandom,
    PainterSpite,
)

USAGE_ERROR = 1
INVARIANT_ERROR = 2


def make_builder(name: str):
    if name == "paper-k2":
        return Builder2()
    if name in ("paper-general", "paper-loose"):
        return BuilderGeneral()
    if name.startswith("random:"):
        return BuilderRandom(int(name.split(":", 1)[1]))
    if name.startswith("script:"):
        return BuilderScript(Transcript.load(name.split(":", 1)[1]))
    raise ParamError(f"unknown builder {name!r}")


def make_painter(name: str):
    if name == "paper-k2":
        return Painter2()
    if name == "paper-general":
        return PainterGeneral()
    if name == "offline-witness":
        return PainterGeneral(naming="linext")
    if name.startswith("random:"):
        return PainterRandom(int(name.split(":", 1)[1]))
    if name == "greedy":
        return PainterGreedy()
    if name == "spite":
        return PainterSpite()
    raise ParamError(f"unknown painter {name!r}")


def _parse_m(text: str, t: int):
    parts = [int(x) for x in text.split(",")]
    if len(parts) == 1:
        parts = parts * t
    return tuple(parts)


def _game_params(args) -> GameParams:
    m = _parse_m(args.m, args.t)
    mode = args.mode
    n = args.n
    if mode == "fixed" and n is None:
        if args.builder == "paper-k2":
            n = math.prod(m) + 1
        elif args.builder in ("paper-general", "paper-loose"):
            probe = GameParams(k=args.k, ell=args.l, t=args.t, m=m)
            n = arena_size(probe, hierarchy_for(probe))
        else:
            raise ParamError("fixed mode needs --n for this builder")
    return GameParams(k=args.k, ell=args.l, t=args.t, m=m, mode=mode, n_fixed=n)


def cmd_play(args) -> int:
    params = _game_params(args)
    builder = make_builder(args.builder)
    painter = make_painter(args.painter)
    result = run_match(params, builder, painter, max_rounds=args.rounds)
    flags = []
    if args.builder == "paper-k2":
        bound = builder2_move_bound(params.m)
        flags.append(f"k2_bound={bound} ok={result.rounds <= bound}")
    elif args.builder in ("paper-general", "paper-loose"):
        hier = hierarchy_for(params)
        h = params.h
        if h == 1:
            bound = hier[0].size + 1
        else:
            bound = (
                hier[h - 1].size
                * hier[h - 2].size
                * math.prod(hier[i].width() for i in range(h - 1))
            )
        sharper = builder_general_move_bound(params, hier)
        flags.append(
            f"upper_bound={bound} sharper={sharper} ok={result.rounds <= bound}"
        )
    if args.out:
        result.transcript.save(args.out)
    winner = result.winner or "none"
    print(
        f"winner={winner} rounds={result.rounds} stop={result.stop_reason} "
        + " ".join(flags)
    )
    return 0


def cmd_replay(args) -> int:
    tr = Transcript.load(args.transcript)
    state = tr.replay(verify=True)
    win = state.check_win()
    winner = "builder" if win else "none"
    print(f"replayed rounds={state.round} winner={winner}")
    return 0


def cmd_bounds(args) -> int:
    m = _parse_m(args.m, args.t)
    report = bounds_mod.online_bounds(args.k, args.l, m, args.t)
    rows = [report.row()]
    _emit_table(rows, args.csv)
    return 0


def cmd_oracle(args) -> int:
    params = GameParams(k=args.k, ell=args.l, t=args.t, m=_parse_m(args.m, args.t))
    result = oracle_mod.exact_online_value(
        params, n_budget=args.n_budget, move_budget=args.move_budget,
        cache_path=args.cache,
    )
    for n in sorted(result.values):
        val = result.values[n]
        shown = val if val is not None else f">{result.move_budget}"
        print(f"n={n} value={shown}")
    print(f"stabilized={result.stabilized} nodes={result.nodes}")
    return 0


def cmd_offline_check(args) -> int:
    params = GameParams(k=args.k, ell=args.l, t=args.t, m=_parse_m(args.m, args.t))
    res = oracle_mod.offline_force_check(params, args.n, node_budget=args.node_budget)
    verdict = {True: "forced", False: "not-forced", None: "indeterminate"}[res.forced]
    print(f"n={args.n} {verdict} ({res.reason}, nodes={res.nodes})")
    return 0


def cmd_digraph_lb(args) -> int:
    if args.host_file:
        arcs = []
        with open(args.host_file) as fh:
            for line in fh:
                if line.strip():
                    u, v = map(int, line.split())
                    arcs.append((u, v))
        n = max(max(a) for a in arcs)
        g = digraph_mod.Digraph(n=n, arcs=tuple(arcs))
        labels = bounds_mod.middle_level_vectors((args.m,) * args.t)
        assignment = digraph_mod.degeneracy_label(g, labels)
        _, ok = digraph_mod.paint_and_verify(g, assignment, args.m, args.t)
        print(f"host-file edges={len(g.underlying_edges())} verified={ok}")
        return 0 if ok else INVARIANT_ERROR
    bad = 0
    for i in range(args.hosts):
        _, _, _, ok = digraph_mod.labeled_boundary_run(args.m, args.t, args.seed + i)
        bad += 0 if ok else 1
    lo, hi, ours = digraph_mod.sdir_sandwich(args.m, args.t)
    print(
        f"hosts={args.hosts} failures={bad} "
        f"sdir: published=[{lo:.4g}, {hi:.4g}] ours={ours}"
    )
    return 0 if bad == 0 else INVARIANT_ERROR


def cmd_sweep(args) -> int:
    ks = [int(x) for x in args.k_list.split(",")]
    ms = [int(x) for x in args.m_list.split(",")]
    ts = [int(x) for x in args.t_list.split(",")]
    ls = [int(x) for x in args.l_list.split(",")]
    painters = args.painters.split(",") if args.painters else []
    grid = [
        (k, ell, m, t)
        for k in ks
        for ell in ls
        if ell <= k
        for m in ms
        for t in ts
    ]
    if args.jobs > 1 and len(grid) > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(
                pool.map(_sweep_cell_star, [(c, painters, args.rounds) for c in grid])
            )
    else:
        rows = [_sweep_cell(*cell, painters, args.rounds) for cell in grid]
    _emit_table(rows, args.csv)
    return 0


def _sweep_cell_star(packed):
    cell, painters, rounds = packed
    return _sweep_cell(*cell, painters, rounds)


def _sweep_cell(k, ell, m, t, painters, rounds):
    report = bounds_mod.online_bounds(k, ell, (m,) * t, t)
    report.check_sandwich()
    row = report.row()
    h, s, value = bounds_mod.loose_value(k, ell, m, t)
    row["offline_value"] = value
    builder_name = "paper-k2" if (k == 2 and ell == 1) else "paper-loose"
    for pname in painters:
        probe = GameParams.diagonal(k=k, ell=ell, m=m, t=t)
        if builder_name == "paper-k2":
            n = m ** t + 1
            builder = Builder2()
        else:
            n = arena_size(probe, hierarchy_for(probe))
            builder = BuilderGeneral()
        params = GameParams.diagonal(k=k, ell=ell, m=m, t=t, mode="fixed", n_fixed=n)
        res = run_match(params, builder, make_painter(pname), max_rounds=rounds)
        row[f"rounds[{pname}]"] = res.rounds if res.builder_won else f">{rounds}"
    return row


def _emit_table(rows, csv_path=None):
    if not rows:
        print("(empty table)")
        return
    cols = []
    for row in rows:
        for key in row:
            if key not in cols:
                cols.append(key)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(rows)
    widths = {c: max(len(str(c)), max(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    print("  ".join(str(c).ljust(widths[c]) for c in cols))
    for row in rows:
        print("  ".join(str(row.get(c, "")).ljust(widths[c]) for c in cols))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathramsey")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_game_args(p):
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--l", type=int, default=1)
        p.add_argument("--t", type=int, default=2)
        p.add_argument("--m", type=str, default="2",
                       help="forbidden length, or comma list per color")

    p = sub.add_parser("play", help="run one builder-vs-painter game")
    add_game_args(p)
    p.add_argument("--builder", default="paper-k2")
    p.add_argument("--painter", default="greedy")
    p.add_argument("--mode", choices=("free", "append", "fixed"), default="fixed")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--rounds", type=int, default=10_000)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("replay", help="replay a transcript and verify it")
    p.add_argument("transcript")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bounds", help="closed-form bound table for one tuple")
    add_game_args(p)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", help="exact minimax game value on a vertex budget")
    add_game_args(p)
    p.add_argument("--n-budget", type=int, default=5)
    p.add_argument("--move-budget", type=int, default=None)
    p.add_argument("--cache", type=str, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("offline-check", help="exhaustive forcing check at n vertices")
    add_game_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--node-budget", type=int, default=4_000_000)
    p.set_defaults(func=cmd_offline_check)

    p = sub.add_parser("digraph-lb", help="randomized digraph lower-bound certification")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--hosts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host-file", type=str, default=None)
    p.set_defaults(func=cmd_digraph_lb)

    p = sub.add_parser("sweep", help="bound/game table over a parameter grid")
    p.add_argument("--k-list", default="2")
    p.add_argument("--m-list", default="2,3")
    p.add_argument("--t-list", default="2")
    p.add_argument("--l-list", default="1")
    p.add_argument("--painters", default="")
    p.add_argument("--rounds", type=int, default=10_000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParamError, StrategyError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except GameError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return INVARIANT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: check, ltl, compose, simulate, plot.
Exit codes: 0 success, 1 domain failure (type error, failed validation,
missed goal under --expect-goal), 2 usage / I-O / parse failure.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import ltl as ltl_mod
from .hybrid import (
    compose_parallel, compose_sequential, directed_to_doc, load_directed,
    save_directed, validate_directed,
)
from .hybrid.compose import ComposeError
from .nav import (
    AtGoal, NavParams, WorldGenParams, generate_violation_world,
    generate_world, load_world, render_svg, run_controller, save_svg,
    save_trace_csv, load_trace_positions,
)
from .syntax import HdtSyntaxError, parse_module, print_type
from .typechecker import check_decl_file, want_color

OK, DOMAIN_FAILURE, USAGE = 0, 1, 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    try:
        source = _read(args.file)
        decls = parse_module(source)
    except OSError as e:
        print(f"error: cannot read {args.file}: {e}", file=sys.stderr)
        return USAGE
    except HdtSyntaxError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return USAGE
    report = check_decl_file(decls, allow_holes=args.allow_holes,
                             filename=args.file)
    color = want_color(sys.stderr)
    for result in report.results:
        if not result.ok and not args.quiet:
            for d in result.diagnostics:
                print(d.render(color), file=sys.stderr)
    if not args.quiet:
        passed = sum(r.ok for r in report.results)
        print(f"{args.file}: {passed}/{len(report.results)} declarations check")
        for hole in report.holes:
            print(f"  hole ?{hole.name} : {print_type(hole.goal)}")
    return OK if report.ok else DOMAIN_FAILURE


# ---------------------------------------------------------------------------
# ltl
# ---------------------------------------------------------------------------

def cmd_ltl(args) -> int:
    try:
        env_decls = parse_module(_read(args.env))
    except OSError as e:
        print(f"error: cannot read {args.env}: {e}", file=sys.stderr)
        return USAGE
    except HdtSyntaxError as e:
        print(f"{args.env}:{e}", file=sys.stderr)
        return USAGE
    env = ltl_mod.atom_env_from_decls(env_decls)
    try:
        formula = ltl_mod.parse_ltl(args.formula)
    except ltl_mod.LtlSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    try:
        ty = ltl_mod.translate_ltl(formula, env)
    except ltl_mod.UnknownAtom as e:
        print(f"error: {e}", file=sys.stderr)
        return DOMAIN_FAILURE
    print(print_type(ty))
    return OK


# ---------------------------------------------------------------------------
# compose
# ---------------------------------------------------------------------------

def cmd_compose(args) -> int:
    try:
        systems = [load_directed(p) for p in args.files]
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except Exception as e:  # malformed document
        print(f"error: bad system file: {e}", file=sys.stderr)
        return USAGE
    corr = None
    if args.match:
        corr = dict(pair.split("=", 1) for pair in args.match.split(","))
    try:
        combined = systems[0]
        for nxt in systems[1:]:
            if args.op == "seq":
                combined = compose_sequential(combined, nxt, corr)
            else:
                combined = compose_parallel(combined, nxt)
    except ComposeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return DOMAIN_FAILURE
    code = OK
    if args.validate:
        report = validate_directed(combined, eps=args.eps,
                                   horizon=args.horizon, grid=args.grid)
        print(report.render())
        if not report.ok:
            code = DOMAIN_FAILURE
    if args.out:
        save_directed(combined, args.out)
    else:
        import yaml
        print(yaml.safe_dump(directed_to_doc(combined), sort_keys=False))
    print(f"vertices={len(combined.apex.vertices)} "
          f"edges={len(combined.apex.edges)}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# simulate / plot
# ---------------------------------------------------------------------------

def _nav_params(args) -> NavParams:
    return NavParams(
        safety_radius=args.safety_radius, sensor_range=args.sensor_range,
        rays=args.rays, goal_eps=args.goal_eps, gain=args.gain, dt=args.dt,
        max_steps=args.max_steps, noise=args.noise)


def _parse_seed_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(text)]


def cmd_simulate(args) -> int:
    params = _nav_params(args)
    runs: list[tuple[str, object]] = []
    gen = WorldGenParams(safety_radius=args.safety_radius)
    if args.world:
        try:
            world = load_world(args.world)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return USAGE
        runs.append(("world", world))
    elif args.seeds is not None:
        for seed in _parse_seed_range(args.seeds):
            make = generate_violation_world if args.violation else generate_world
            runs.append((f"seed{seed}", make(seed, gen)))
    else:
        print("error: give a world file or --seeds", file=sys.stderr)
        return USAGE

    outcomes = {}
    for tag, world in runs:
        outcome, trace = run_controller(world, world.start, world.goal, params,
                                        strict_clearance=not args.lenient)
        outcomes[tag] = outcome
        header = {"tag": tag, "generator": gen.describe() if args.seeds else None}
        if args.out:
            if len(runs) == 1:
                path = args.out
            else:
                os.makedirs(args.out, exist_ok=True)
                path = os.path.join(args.out, f"trace-{tag}.csv")
            save_trace_csv(trace, path, header)
        if args.plot:
            save_svg(args.plot if len(runs) == 1 else
                     os.path.join(args.out or ".", f"trace-{tag}.svg"),
                     trace.positions, world, trace.final_polygon)
    at_goal = sum(isinstance(o, AtGoal) for o in outcomes.values())
    by_kind: dict[str, int] = {}
    for o in outcomes.values():
        by_kind[type(o).__name__] = by_kind.get(type(o).__name__, 0) + 1
    summary = " ".join(f"{k}={v}" for k, v in sorted(by_kind.items()))
    print(f"runs={len(runs)} at_goal={at_goal} [{summary}]")
    if args.expect_goal and at_goal != len(runs):
        return DOMAIN_FAILURE
    return OK


def cmd_plot(args) -> int:
    try:
        positions = load_trace_positions(args.trace)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    world = None
    if args.world:
        try:
            world = load_world(args.world)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return USAGE
    svg = render_svg(positions, world)
    if args.out:
        with open(args.out, "w") as f:
            f.write(svg)
    else:
        print(svg)
    return OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hydranav",
        description="type checking, funnel composition, temporal translation, "
                    "and navigation simulation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="type-check a .hdt declaration file")
    p.add_argument("file")
    p.add_argument("--allow-holes", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("ltl", help="translate a temporal formula to a type")
    p.add_argument("formula")
    p.add_argument("--env", required=True, help=".hdt file mapping atoms to types")
    p.set_defaults(fn=cmd_ltl)

    p = sub.add_parser("compose", help="compose directed systems")
    p.add_argument("files", nargs="+")
    p.add_argument("--op", choices=["seq", "par"], default="seq")
    p.add_argument("--match", help="interface vertex correspondence a=b,c=d")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--horizon", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("simulate", help="run the navigation controller")
    p.add_argument("world", nargs="?", help="world YAML file")
    p.add_argument("--seeds", help="generate worlds for seeds, e.g. 0..49")
    p.add_argument("--violation", action="store_true",
                   help="generate worlds that break the separation hypothesis")
    p.add_argument("--out", help="trace CSV path (or directory for batches)")
    p.add_argument("--plot", help="SVG path for a single run")
    p.add_argument("--expect-goal", action="store_true")
    p.add_argument("--lenient", action="store_true",
                   help="downgrade the initial 2R clearance check to a warning")
    p.add_argument("--safety-radius", type=float, default=0.5)
    p.add_argument("--sensor-range", type=float, default=5.0)
    p.add_argument("--rays", type=int, default=64)
    p.add_argument("--goal-eps", type=float, default=0.05)
    p.add_argument("--gain", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--max-steps", type=int, default=100_000)
    p.add_argument("--noise", type=float, default=0.0)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("plot", help="render a trace CSV as SVG")
    p.add_argument("trace")
    p.add_argument("--world")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: simulate, solve, verify, export-lp, strategies, serve.

Exit codes: 0 success, 1 domain failure (bad inputs, counterexample found),
2 usage error.  With --json exactly one document goes to standard output;
identical invocations with identical seeds print identical bytes, which is
why solver wall times stay out of the JSON.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from .expansion import (
    HallHypothesis,
    check_first_shell,
    check_front_growth,
    check_growth_L3,
    check_hall_trajectory,
    check_octant_claim,
    check_sigma_claim,
)
from .lattice import LatticeSpec, box_lattice, octant_graph, path_grid, quotient_root
from .optimize import (
    SearchBudget,
    build_deadline_model,
    build_min_burn_model,
    export_lp,
    extract_strategy,
    solve,
)
from .simulation import (
    PlacementSchedule,
    SimulationError,
    is_contained,
    run,
    saved_vertices,
)
from .strategies import REGISTRY, firewall_strategy, greedy_frontier_policy, optimal_2d_strategy


class DomainError(Exception):
    """Invalid input or a failed verification; maps to exit code 1."""


def _parse_spec(text: str) -> LatticeSpec:
    parts = text.split(":")
    try:
        if parts[0] == "box" and len(parts) == 3:
            return box_lattice(int(parts[1]), int(parts[2]))
        if parts[0] == "grid" and len(parts) == 3:
            return path_grid(int(parts[1]), int(parts[2]))
        if parts[0] == "octant" and len(parts) == 3:
            return octant_graph(int(parts[1]), int(parts[2]))
        if parts[0] == "quotient" and len(parts) == 4:
            return quotient_root(int(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise DomainError(f"bad spec {text!r}: {exc}") from exc
    raise DomainError(
        f"bad spec {text!r}; expected box:D:R, grid:D:N, octant:D:R, "
        "or quotient:D:SHELL:GUARD"
    )


def _parse_outbreak(text: str) -> list[tuple[int, ...]]:
    try:
        return [
            tuple(int(c) for c in chunk.split(","))
            for chunk in text.split(";")
            if chunk
        ]
    except ValueError as exc:
        raise DomainError(f"bad outbreak {text!r}: {exc}") from exc


def _parse_sizes(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError as exc:
        raise DomainError(f"bad size range {text!r}; expected LO..HI") from exc


def _print_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _read_json(path: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


# -- simulate -----------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace) -> int:
    strategy: Optional[PlacementSchedule] = None
    spec: Optional[LatticeSpec] = None
    horizon = args.horizon
    f = args.f

    if args.strategy is not None and args.schedule is not None:
        raise DomainError("give either --schedule or --strategy, not both")
    if args.strategy == "optimal-2d":
        strategy = optimal_2d_strategy()
        spec = box_lattice(2, 6)
        horizon = 9 if horizon is None else horizon
    elif args.strategy == "firewall":
        if args.n is None:
            raise DomainError("--strategy firewall needs --n")
        plan = firewall_strategy(args.n)
        strategy = plan.schedule
        spec = path_grid(3, args.n)
        horizon = 3 * (args.n - 1) if horizon is None else horizon
    elif args.strategy == "greedy":
        if args.spec is None or horizon is None:
            raise DomainError("--strategy greedy needs --spec and --horizon")
        spec = _parse_spec(args.spec)
        strategy = greedy_frontier_policy(spec, f if f is not None else 1, horizon)
    elif args.strategy is not None:
        raise DomainError(f"unknown strategy {args.strategy!r}")
    elif args.schedule is not None:
        strategy = PlacementSchedule.from_json(_read_json(args.schedule))

    if spec is None:
        if args.spec is None:
            raise DomainError("need --spec (or a strategy that implies one)")
        spec = _parse_spec(args.spec)
    if horizon is None:
        raise DomainError("need --horizon")
    if f is None:
        f = strategy.f if strategy is not None else 0

    outbreak = (
        _parse_outbreak(args.outbreak) if args.outbreak else [spec.root]
    )
    trace = run(spec, outbreak, strategy, f, horizon)
    doc = trace.to_json()
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(doc, handle, indent=2, sort_keys=True)
    if args.json:
        _print_json(doc)
    else:
        state = trace.final_state
        phase = (
            "contained"
            if is_contained(state)
            else "boundary-contaminated"
            if state.boundary_contaminated
            else "active"
        )
        print(
            f"burnt {len(state.burnt)} defended {len(state.defended)} "
            f"saved {len(saved_vertices(state))} "
            f"contained_at {trace.contained_at} [{phase}]"
        )
    return 0


# -- solve / export-lp --------------------------------------------------------


def _auto_warm_start(args: argparse.Namespace, mode: str) -> Optional[PlacementSchedule]:
    if args.no_warm_start:
        return None
    if (args.l, args.T, args.f) != (6, 9, 2):
        return None
    if mode == "deadline" and args.deadline < 8:
        return None  # the stored schedule still places on step 8
    return optimal_2d_strategy()


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.mode == "min-burn":
        model = build_min_burn_model(args.l, args.T, args.f)
    else:
        model = build_deadline_model(args.l, args.T, args.f, args.deadline)
    if args.export_lp:
        with open(args.export_lp, "w") as handle:
            handle.write(export_lp(model))
    limits = None
    if args.node_limit is not None or args.time_limit is not None:
        limits = SearchBudget(args.node_limit, args.time_limit)
    solution = solve(
        model,
        limits,
        warm_start=_auto_warm_start(args, args.mode),
        workers=args.workers,
    )
    doc = solution.to_json(model)
    del doc["wall_time"]
    if args.json:
        _print_json(doc)
    else:
        print(
            f"{solution.status}: objective {solution.objective_value} "
            f"(lower bound {solution.lower_bound}, {solution.nodes} nodes)"
        )
        schedule = extract_strategy(solution, model)
        for t, group in enumerate(schedule.steps, start=1):
            if group:
                print(f"  step {t}: " + " ".join(str(v) for v in group))
    if args.solution_out:
        with open(args.solution_out, "w") as handle:
            json.dump(doc, handle, indent=2, sort_keys=True)
    return 0


def _cmd_export_lp(args: argparse.Namespace) -> int:
    if args.mode == "min-burn":
        model = build_min_burn_model(args.l, args.T, args.f)
    else:
        model = build_deadline_model(args.l, args.T, args.f, args.deadline)
    text = export_lp(model)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# -- verify -------------------------------------------------------------------


def _finish_report(report, as_json: bool, human: str) -> int:
    if as_json:
        _print_json(report.to_json())
    else:
        print(human)
    return 0 if report.ok else 1


def _cmd_verify_first_shell(args: argparse.Namespace) -> int:
    report = check_first_shell(args.d)
    human = (
        f"no counterexample ({report.subsets_checked} subsets)"
        if report.ok
        else f"counterexample: {report.counterexample}"
    )
    return _finish_report(report, args.json, human)


def _cmd_verify_front_growth(args: argparse.Namespace) -> int:
    lo, hi = _parse_sizes(args.sizes)
    report = check_front_growth(
        args.d,
        args.k,
        lo,
        hi,
        budget=args.budget,
        orthant_only=args.orthant,
        seed=args.seed,
        workers=args.workers,
    )
    mode = "exhaustive" if report.exhaustive else "sampled"
    human = (
        f"no counterexample ({report.subsets_checked} subsets, {mode})"
        if report.ok
        else f"counterexample: {report.counterexample}"
    )
    return _finish_report(report, args.json, human)


def _cmd_verify_growth_l3(args: argparse.Namespace) -> int:
    report = check_growth_L3(args.f, args.k, args.size_max, budget=args.budget)
    human = (
        f"no counterexample ({report.subsets_checked} subsets)"
        if report.ok
        else f"counterexample: {report.counterexample}"
    )
    return _finish_report(report, args.json, human)


def _cmd_verify_sigma(args: argparse.Namespace) -> int:
    report = check_sigma_claim(args.f, args.max_len, args.max_val)
    human = (
        f"no counterexample ({report.sequences_checked} sequences)"
        if report.ok
        else f"counterexample: {report.counterexample}"
    )
    return _finish_report(report, args.json, human)


def _cmd_verify_hall(args: argparse.Namespace) -> int:
    config = _read_json(args.config)
    try:
        spec = _parse_spec(config["spec"]) if "spec" in config else box_lattice(
            int(config.get("dimension", 3)), int(config.get("radius", 10))
        )
        hyp = HallHypothesis(int(config["f"]), tuple(int(x) for x in config["a"]))
        horizon = args.horizon or int(config.get("horizon", 8))
        policies = args.policies or int(config.get("policies", 100))
    except (KeyError, ValueError) as exc:
        raise DomainError(f"bad hall config: {exc}") from exc
    seeds = range(args.seed, args.seed + policies)
    report = check_hall_trajectory(spec, hyp, seeds, horizon)
    human = (
        f"bound held on {report.traces_run} traces ({report.steps_checked} steps)"
        if report.ok
        else f"violations: {len(report.violations)}"
    )
    return _finish_report(report, args.json, human)


def _cmd_verify_octant(args: argparse.Namespace) -> int:
    seeds = range(args.seed, args.seed + args.policies)
    report = check_octant_claim(args.n, seeds)
    human = (
        f"bound held on {report.traces_run} traces ({report.steps_checked} steps)"
        if report.ok
        else f"violations: {len(report.violations)}"
    )
    return _finish_report(report, args.json, human)


# -- strategies / serve -------------------------------------------------------


def _cmd_strategies(args: argparse.Namespace) -> int:
    if args.json:
        _print_json(
            {
                "schema": 1,
                "strategies": [
                    {"name": s.name, "description": s.description}
                    for s in REGISTRY.values()
                ],
            }
        )
    else:
        for s in REGISTRY.values():
            print(f"{s.name}: {s.description}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(session_log_dir=args.session_log_dir, static_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firebreak",
        description="Fire containment on square lattices: simulate, verify, solve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the spread with a schedule or strategy")
    p.add_argument("--spec", help="box:D:R, grid:D:N, octant:D:R, quotient:D:S:G")
    p.add_argument("--schedule", help="schedule JSON file")
    p.add_argument("--strategy", help="named strategy: " + ", ".join(REGISTRY))
    p.add_argument("--n", type=int, help="side length for --strategy firewall")
    p.add_argument("--f", type=int, help="defenders per step")
    p.add_argument("--horizon", type=int)
    p.add_argument("--outbreak", help='initial fires, e.g. "0,0;1,0"')
    p.add_argument("--out", help="write the trace JSON to a file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("solve", help="exact optimization on the 2D box")
    solve_sub = p.add_subparsers(dest="mode", required=True)
    for mode in ("min-burn", "deadline"):
        q = solve_sub.add_parser(mode)
        q.add_argument("--l", type=int, default=6, help="box radius")
        q.add_argument("--T", type=int, default=9, help="horizon")
        q.add_argument("--f", type=int, default=2, help="defenders per step")
        if mode == "deadline":
            q.add_argument("--deadline", type=int, required=True)
        q.add_argument("--export-lp", dest="export_lp", help="also write LP text")
        q.add_argument("--node-limit", type=int)
        q.add_argument("--time-limit", type=float)
        q.add_argument("--workers", type=int, default=1)
        q.add_argument("--no-warm-start", action="store_true")
        q.add_argument("--solution-out", help="write solution JSON to a file")
        q.add_argument("--json", action="store_true")
        q.set_defaults(func=_cmd_solve)

    p = sub.add_parser("export-lp", help="emit the 0-1 program as LP text")
    lp_sub = p.add_subparsers(dest="mode", required=True)
    for mode in ("min-burn", "deadline"):
        q = lp_sub.add_parser(mode)
        q.add_argument("--l", type=int, default=6)
        q.add_argument("--T", type=int, default=9)
        q.add_argument("--f", type=int, default=2)
        if mode == "deadline":
            q.add_argument("--deadline", type=int, required=True)
        q.add_argument("--out")
        q.set_defaults(func=_cmd_export_lp)

    p = sub.add_parser("verify", help="machine checks of the expansion bounds")
    ver = p.add_subparsers(dest="check", required=True)

    q = ver.add_parser("lemma-first-shell")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_first_shell)

    q = ver.add_parser("lemma-front-growth")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--sizes", required=True, help="LO..HI subset sizes")
    q.add_argument("--orthant", action="store_true")
    q.add_argument("--budget", type=int, default=10_000_000)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_front_growth)

    q = ver.add_parser("lemma-growth-l3")
    q.add_argument("--f", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--size-max", type=int, required=True)
    q.add_argument("--budget", type=int, default=10_000_000)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_growth_l3)

    q = ver.add_parser("sigma")
    q.add_argument("--f", type=int, required=True)
    q.add_argument("--max-len", type=int, default=5)
    q.add_argument("--max-val", type=int, default=5)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_sigma)

    q = ver.add_parser("hall")
    q.add_argument("--config", required=True, help="JSON hypothesis file")
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--policies", type=int)
    q.add_argument("--horizon", type=int)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_hall)

    q = ver.add_parser("octant")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--policies", type=int, default=100)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_verify_octant)

    p = sub.add_parser("strategies", help="list the named strategies")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_strategies)

    p = sub.add_parser("serve", help="run the turn-based play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--session-log-dir", help="append-only per-session turn logs")
    p.add_argument("--ui-dir", help="directory with the built web UI to serve at /ui")
    p.set_defaults(func=_cmd_serve)

    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("FIREBREAK_LOG", "WARNING").upper())
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, SimulationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

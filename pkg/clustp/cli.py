"""
Command-line entry point.

    clustp solve <instance> [--gamma R] [--seed U64] [--runs N] [--selector randomized|greedy] [--out csv|md|json]
    clustp sweep <instance> --gammas 1,5,10,20,30,40,50 [--runs N] [--seed U64]
    clustp compare <results.csv> <baselines.csv>
    clustp generate (grid --n --rows --cols | clustered --n --k --spread) --seed --out <file>
    clustp oracle <instance>
    clustp check <instance> <solution>

Exit codes: 0 ok, 1 usage error, 2 data error, 3 infeasible or over the oracle cap.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional

from clustp import settings
from clustp.bench import (
    DEFAULT_GAMMAS,
    compare_with_baselines,
    gamma_sweep,
    render_comparison_markdown,
    render_markdown,
    render_sweep_markdown,
    run_trials,
    summarize_pi,
)
from clustp.errors import ClustpError, DataError, InfeasibleError, UsageError
from clustp.fileio import (
    load_instance,
    parse_solution,
    read_baselines_csv,
    read_results_csv,
    save_text,
    write_instance,
    write_report_json,
    write_results_csv,
    write_solution,
)
from clustp.gen import generate_clustered, generate_grid
from clustp.nrga import SELECTORS, NrgaParams, make_selector, nrga_run
from clustp.objective import check_feasible, total_cost
from clustp.oracle import brute_force_optimum
from clustp.rng import MASK64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError(f"{value} is outside the unsigned 64-bit range")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be at least 1")
    return value


def _gammas(text: str) -> List[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of numbers") from None
    if not values:
        raise argparse.ArgumentTypeError("at least one gamma is required")
    return values


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


# ---------------------- handlers ----------------------
def _solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    report = run_trials(
        inst, args.gamma, args.runs, args.seed,
        threads=args.threads, rescan_all=args.rescan_all, selector=args.selector,
    )
    if args.solution_out:
        params = NrgaParams(gamma=args.gamma, seed=report.best_seed, rescan_all=args.rescan_all)
        tree = nrga_run(inst, params, selector=make_selector(args.selector))
        save_text(args.solution_out, write_solution(tree, total_cost(tree)))
        settings.log(f"[cli] best tree written to {args.solution_out}")
    renderers = {
        "csv": write_results_csv,
        "md": render_markdown,
        "json": write_report_json,
    }
    _emit(renderers[args.out]([report]))
    return 0


def _sweep(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    reports = gamma_sweep(
        inst, args.gammas, args.runs, args.seed,
        threads=args.threads, rescan_all=args.rescan_all, selector=args.selector,
    )
    _emit(write_results_csv(reports) if args.out == "csv" else render_sweep_markdown(reports))
    return 0


def _compare(args: argparse.Namespace) -> int:
    results = read_results_csv(Path(args.results).read_text(encoding="utf-8"))
    baselines = read_baselines_csv(Path(args.baselines).read_text(encoding="utf-8"))
    comparison = compare_with_baselines(results, baselines, gamma=args.gamma)
    if comparison.empty:
        raise DataError("no instance appears in both the results and the baselines")
    by = ("type", "algorithm") if "type" in comparison.columns else ("algorithm",)
    _emit(render_comparison_markdown(comparison, summarize_pi(comparison, by=by)))
    return 0


def _generate(args: argparse.Namespace) -> int:
    if args.family == "grid":
        inst = generate_grid(args.n, args.rows, args.cols, args.extent, args.seed, name=args.name)
    else:
        inst = generate_clustered(args.n, args.k, args.spread, args.extent, args.seed, name=args.name)
    path = save_text(args.out, write_instance(inst))
    _emit(f"[gen] wrote {inst.name} (n={inst.n}, k={inst.k}) -> {path}\n")
    return 0


def _oracle(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    cost, witness = brute_force_optimum(inst)
    _emit(write_solution(witness, cost))
    return 0


def _check(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    tree, claimed = parse_solution(Path(args.solution).read_text(encoding="utf-8"), inst)
    violations = check_feasible(tree, inst)
    if violations:
        _emit("infeasible\n" + "".join(f"  {v}\n" for v in violations))
        return InfeasibleError.exit_code
    cost = total_cost(tree, inst)
    _emit(f"feasible cost={cost:.6f}\n")
    if not math.isclose(cost, claimed, rel_tol=1e-9, abs_tol=1e-9):
        raise DataError(f"solution claims cost {claimed!r} but the tree costs {cost!r}")
    return 0


# ---------------------- parser ----------------------
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clustp", description="Clustered shortest-path tree solver and benchmark harness.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def trial_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("instance", help="Instance file")
        p.add_argument("--seed", type=_u64, default=0, help="Master seed (default 0)")
        p.add_argument("--runs", type=_positive_int, default=settings.DEFAULT_RUNS, help="Runs per gamma")
        p.add_argument("--threads", type=_positive_int, default=None, help="Worker cap (default CLUSTP_THREADS or CPU count)")
        p.add_argument("--rescan-all", action="store_true", help="Score edges from every attached cluster each step")
        p.add_argument(
            "--selector", choices=sorted(SELECTORS), default="randomized",
            help="Edge choice: randomized (gamma-weighted) or greedy (smallest reward)",
        )

    solve = sub.add_parser("solve", help="Repeated seeded runs at one gamma")
    trial_flags(solve)
    solve.add_argument("--gamma", type=float, default=settings.DEFAULT_GAMMA, help="Greediness (default 50)")
    solve.add_argument("--out", choices=["csv", "md", "json"], default="csv")
    solve.add_argument("--solution-out", help="Write the best run's tree to this file")
    solve.set_defaults(handler=_solve)

    sweep = sub.add_parser("sweep", help="Repeated runs over a list of gammas")
    trial_flags(sweep)
    sweep.add_argument(
        "--gammas", type=_gammas, default=list(DEFAULT_GAMMAS), help="Comma-separated gammas"
    )
    sweep.add_argument("--out", choices=["csv", "md"], default="csv")
    sweep.set_defaults(handler=_sweep)

    compare = sub.add_parser("compare", help="PI table against published baselines")
    compare.add_argument("results", help="Results CSV written by solve/sweep")
    compare.add_argument("baselines", help="CSV: instance,algorithm,best_found,average")
    compare.add_argument("--gamma", type=float, default=None, help="Only use result rows at this gamma")
    compare.set_defaults(handler=_compare)

    generate = sub.add_parser("generate", help="Write a synthetic instance")
    families = generate.add_subparsers(dest="family", required=True, parser_class=_Parser)
    grid = families.add_parser("grid", help="Uniform points, grid-cell clusters")
    grid.add_argument("--n", type=int, required=True)
    grid.add_argument("--rows", type=int, required=True)
    grid.add_argument("--cols", type=int, required=True)
    clustered = families.add_parser("clustered", help="Gaussian clouds around random centers")
    clustered.add_argument("--n", type=int, required=True)
    clustered.add_argument("--k", type=int, required=True)
    clustered.add_argument("--spread", type=float, required=True)
    for p in (grid, clustered):
        p.add_argument("--seed", type=_u64, required=True)
        p.add_argument("--out", required=True, help="Instance file to write")
        p.add_argument("--extent", type=float, default=1000.0, help="Square side length")
        p.add_argument("--name", default=None, help="Instance name (default derived from n, k)")
        p.set_defaults(handler=_generate)

    oracle = sub.add_parser("oracle", help="Exhaustive optimum (tiny instances only)")
    oracle.add_argument("instance")
    oracle.set_defaults(handler=_oracle)

    check = sub.add_parser("check", help="Feasibility verdict and cost of a solution file")
    check.add_argument("instance")
    check.add_argument("solution")
    check.set_defaults(handler=_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            settings.set_verbose(True)
        return args.handler(args)
    except UsageError as exc:
        print(f"[cli] usage error: {exc}", file=sys.stderr)
        return UsageError.exit_code
    except ClustpError as exc:
        print(f"[cli] {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"[cli] {type(exc).__name__}: {exc}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

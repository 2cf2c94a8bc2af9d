#!/usr/bin/env python3
"""
Larger gamma should mean cheaper trees on average. Generates a fixed suite of
complete Euclidean instances (n in 50..105, k >= 5), sweeps gamma on each and
writes the per-gamma results to data/trend_<YYYYMMDD>.csv.
"""

from __future__ import annotations

import argparse
from datetime import datetime
from typing import List

from clustp import settings
from clustp.bench import gamma_sweep, gamma_trend
from clustp.core import ClusteredInstance
from clustp.fileio import save_text, write_results_csv
from clustp.gen import generate_clustered, generate_grid
from clustp.rng import make_rng


def trend_instances(count: int, seed: int) -> List[ClusteredInstance]:
    rng = make_rng(seed)
    suite = []
    for i in range(count):
        n = int(rng.integers(50, 106))
        inst_seed = int(rng.integers(0, 2**63))
        if i % 2 == 0:
            rows, cols = int(rng.integers(2, 5)), int(rng.integers(3, 6))
            suite.append(generate_grid(n, rows, cols, seed=inst_seed, name=f"grid{i}-{rows * cols}rand{n}"))
        else:
            k = int(rng.integers(5, 26))
            suite.append(generate_clustered(n, k, 40.0, seed=inst_seed, name=f"clu{i}-{k}rand{n}"))
    return suite


def _cli() -> int:
    parser = argparse.ArgumentParser(description="Check that average cost falls as gamma grows.")
    parser.add_argument("--instances", type=int, default=20)
    parser.add_argument("--runs", type=int, default=settings.DEFAULT_RUNS)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gammas", default="1,50", help="Comma-separated; must include 1 and 50")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args()
    if args.verbose:
        settings.set_verbose(True)

    gammas = [float(tok) for tok in args.gammas.split(",") if tok.strip()]
    reports = []
    for inst in trend_instances(args.instances, args.seed):
        reports.extend(gamma_sweep(inst, gammas, args.runs, args.seed, threads=args.threads))

    out = settings.DATA_DIR / f"trend_{datetime.utcnow().strftime('%Y%m%d')}.csv"
    save_text(out, write_results_csv(reports))
    summary = gamma_trend(reports)
    print(f"[trend] wrote {len(reports)} rows to {out}")
    print(
        f"[trend] mean Avg gamma=1: {summary['mean_avg_low']:.1f}  gamma=50: {summary['mean_avg_high']:.1f}  "
        f"not worse on {summary['share_not_worse']:.0%} of {summary['instances']} instances"
    )
    holds = summary["mean_avg_high"] <= summary["mean_avg_low"] and summary["share_not_worse"] >= 0.8
    return 0 if holds else 1


if __name__ == "__main__":
    raise SystemExit(_cli())

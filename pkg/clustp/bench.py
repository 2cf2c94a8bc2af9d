from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from clustp import settings
from clustp.core import ClusteredInstance
from clustp.errors import DataError, NonpositiveReferenceError
from clustp.nrga import NrgaParams, make_selector, nrga_run
from clustp.objective import total_cost
from clustp.rng import trial_seed
from clustp.spt import CostSptTable

DEFAULT_GAMMAS: Tuple[float, ...] = (1, 5, 10, 20, 30, 40, 50)
BASELINE_KEYS = ("instance", "algorithm", "best_found", "average")
SUMMARY_COLUMNS = ["instances", "mean_pi_best", "max_pi_best", "max_pi_instance", "mean_pi_average"]
_GROUP_HEADERS = {"algorithm": "Baseline", "type": "Type"}


class TrialReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance: str
    gamma: float
    runs: int = Field(ge=1)
    costs: List[float]
    seeds: List[int]
    best_found: float
    average: float
    seconds_per_run: float = Field(ge=0)
    master_seed: int

    @model_validator(mode="after")
    def _consistent(self) -> "TrialReport":
        if len(self.costs) != self.runs or len(self.seeds) != self.runs:
            raise ValueError(f"expected {self.runs} costs and seeds")
        if self.best_found != min(self.costs):
            raise ValueError("best_found must be the smallest cost")
        mean = math.fsum(self.costs) / self.runs
        if abs(self.average - mean) > 1e-9 * max(1.0, abs(mean)):
            raise ValueError("average must be the mean cost")
        return self

    @classmethod
    def from_runs(
        cls,
        instance: str,
        gamma: float,
        master_seed: int,
        costs: Sequence[float],
        seeds: Sequence[int],
        seconds: Sequence[float],
    ) -> "TrialReport":
        runs = len(costs)
        return cls(
            instance=instance,
            gamma=gamma,
            runs=runs,
            costs=list(costs),
            seeds=list(seeds),
            best_found=min(costs),
            average=math.fsum(costs) / runs,
            seconds_per_run=math.fsum(seconds) / runs,
            master_seed=master_seed,
        )

    @property
    def best_seed(self) -> int:
        return self.seeds[self.costs.index(self.best_found)]


def _shared_costs(inst: ClusteredInstance) -> Optional[CostSptTable]:
    if CostSptTable.worth_precomputing(inst):
        return CostSptTable(inst).precompute()
    return None


def run_trials(
    inst: ClusteredInstance,
    gamma: float,
    runs: int,
    master_seed: int,
    *,
    threads: Optional[int] = None,
    rescan_all: bool = False,
    selector: str = "randomized",
    costs: Optional[CostSptTable] = None,
) -> TrialReport:
    """``runs`` independent seeded runs; trial t uses trial_seed(master_seed, t) whatever the thread count."""
    if runs < 1:
        raise DataError(f"runs must be >= 1 (got {runs})")
    select = make_selector(selector)
    shared = costs if costs is not None else _shared_costs(inst)
    seeds = [trial_seed(master_seed, t) for t in range(runs)]

    def one(seed: int) -> Tuple[float, float]:
        params = NrgaParams(gamma=gamma, seed=seed, rescan_all=rescan_all)
        start = time.perf_counter()
        tree = nrga_run(inst, params, selector=select, costs=shared)
        cost = total_cost(tree, inst)
        return cost, time.perf_counter() - start

    workers = min(settings.worker_count(threads), runs)
    if workers == 1:
        outcomes = [one(seed) for seed in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, seeds))

    report = TrialReport.from_runs(
        inst.name,
        gamma,
        master_seed,
        [c for c, _ in outcomes],
        seeds,
        [s for _, s in outcomes],
    )
    settings.log(
        f"[bench] {inst.name} gamma={gamma:g}: BF={report.best_found:.1f} "
        f"Avg={report.average:.1f} over {runs} runs ({workers} workers)"
    )
    return report


def gamma_sweep(
    inst: ClusteredInstance,
    gammas: Sequence[float],
    runs: int,
    master_seed: int,
    *,
    threads: Optional[int] = None,
    rescan_all: bool = False,
    selector: str = "randomized",
) -> List[TrialReport]:
    """One report per gamma; every gamma replays the same per-run seeds."""
    if not gammas:
        raise DataError("gamma sweep needs at least one gamma")
    shared = _shared_costs(inst)
    return [
        run_trials(
            inst, g, runs, master_seed,
            threads=threads, rescan_all=rescan_all, selector=selector, costs=shared,
        )
        for g in gammas
    ]


def gamma_trend(reports: Sequence[TrialReport], low: float = 1, high: float = 50) -> Dict[str, float]:
    """Mean Avg at ``low`` and ``high`` and the share of instances whose Avg does not rise between them."""
    low, high = float(low), float(high)
    frame = pd.DataFrame([{"instance": r.instance, "gamma": r.gamma, "average": r.average} for r in reports])
    if frame.empty:
        raise DataError("no reports to summarize")
    pivot = frame.pivot_table(index="instance", columns="gamma", values="average", aggfunc="mean")
    missing = [g for g in (low, high) if g not in pivot.columns]
    if missing:
        raise DataError(f"reports have no rows at gamma {missing}")
    pivot = pivot[[low, high]].dropna()
    return {
        "instances": int(len(pivot)),
        "mean_avg_low": float(pivot[low].mean()),
        "mean_avg_high": float(pivot[high].mean()),
        "share_not_worse": float((pivot[high] <= pivot[low]).mean()),
    }


def performance_improvement(cost_a: float, cost_b: float) -> float:
    """PI(A, B) = (C_B - C_A) / C_B * 100; positive when A is cheaper."""
    if cost_b <= 0:
        raise NonpositiveReferenceError(f"reference cost must be positive (got {cost_b})")
    return (cost_b - cost_a) / cost_b * 100.0


def _pi_or_nan(a: float, b: float) -> float:
    if pd.isna(a) or pd.isna(b):
        return float("nan")
    return performance_improvement(a, b)


def compare_with_baselines(
    results: pd.DataFrame,
    baselines: pd.DataFrame,
    gamma: Optional[float] = None,
) -> pd.DataFrame:
    """PI of our results against every (instance, algorithm) baseline row that shares an instance."""
    res = results
    if gamma is not None:
        res = res[np.isclose(res["gamma"].astype(float), gamma)]
    res = (
        res.sort_values(["instance", "best_found"], kind="stable")
        .drop_duplicates("instance", keep="first")[["instance", "best_found", "average"]]
        .rename(columns={"best_found": "nrga_best", "average": "nrga_average"})
    )
    # an optional instance-family column (e.g. "type") rides along for grouped summaries
    extra = [c for c in baselines.columns if c not in BASELINE_KEYS and c not in res.columns]
    base = baselines[["instance", *extra, "algorithm", "best_found", "average"]].rename(
        columns={"best_found": "baseline_best", "average": "baseline_average"}
    )
    merged = base.merge(res, on="instance", how="inner")
    merged["pi_best"] = [_pi_or_nan(a, b) for a, b in zip(merged["nrga_best"], merged["baseline_best"])]
    merged["pi_average"] = [
        _pi_or_nan(a, b) for a, b in zip(merged["nrga_average"], merged["baseline_average"])
    ]
    columns = [
        "instance", "algorithm",
        "nrga_best", "baseline_best", "pi_best",
        "nrga_average", "baseline_average", "pi_average",
        *extra,
    ]
    return merged[columns].reset_index(drop=True)


def summarize_pi(comparison: pd.DataFrame, by: Sequence[str] = ("algorithm",)) -> pd.DataFrame:
    """Mean and highest best-found PI per group (per baseline algorithm unless ``by`` says otherwise)."""
    keys = list(by)
    missing = [k for k in keys if k not in comparison.columns]
    if missing:
        raise DataError(f"comparison has no column(s) {missing}")
    rows = []
    for group_key, group in comparison.groupby(keys, sort=True):
        pis = group["pi_best"].dropna()
        if pis.empty:
            continue
        top = group.loc[pis.idxmax()]
        averages = group["pi_average"].dropna()
        rows.append(
            {
                **dict(zip(keys, group_key if isinstance(group_key, tuple) else (group_key,))),
                "instances": int(pis.size),
                "mean_pi_best": float(pis.mean()),
                "max_pi_best": float(pis.max()),
                "max_pi_instance": top["instance"],
                "mean_pi_average": float(averages.mean()) if not averages.empty else float("nan"),
            }
        )
    return pd.DataFrame(rows, columns=keys + SUMMARY_COLUMNS)


# ---------------------- Markdown tables ----------------------
def _cell(x: float, digits: int = 1) -> str:
    if x is None or pd.isna(x):
        return "-"
    return f"{x:.{digits}f}"


def _table(header: List[str], align: List[str], rows: List[List[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(align) + "|",
    ]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def render_markdown(reports: Sequence[TrialReport]) -> str:
    rows = [
        [r.instance, f"{r.gamma:g}", _cell(r.best_found), _cell(r.average), _cell(r.seconds_per_run, 2)]
        for r in reports
    ]
    return _table(["Instances", "γ", "BF", "Avg", "Time (s)"], ["---", "---:", "---:", "---:", "---:"], rows)


def render_sweep_markdown(reports: Sequence[TrialReport]) -> str:
    """One row per instance, a BF/Avg column pair per gamma."""
    gammas: List[float] = []
    by_instance: dict = {}
    for r in reports:
        if r.gamma not in gammas:
            gammas.append(r.gamma)
        by_instance.setdefault(r.instance, {})[r.gamma] = r
    header = ["Instances"]
    for g in gammas:
        header += [f"γ = {g:g} BF", f"γ = {g:g} Avg"]
    rows = []
    for name, per_gamma in by_instance.items():
        row = [name]
        for g in gammas:
            r = per_gamma.get(g)
            row += [_cell(r.best_found), _cell(r.average)] if r else ["-", "-"]
        rows.append(row)
    return _table(header, ["---"] + ["---:"] * (len(header) - 1), rows)


def render_comparison_markdown(comparison: pd.DataFrame, summary: Optional[pd.DataFrame] = None) -> str:
    rows = [
        [
            rec.instance, rec.algorithm,
            _cell(rec.baseline_best), _cell(rec.nrga_best), _cell(rec.pi_best),
            _cell(rec.baseline_average), _cell(rec.nrga_average), _cell(rec.pi_average),
        ]
        for rec in comparison.itertuples(index=False)
    ]
    text = _table(
        ["Instances", "Baseline", "Baseline BF", "NRGA BF", "PI BF (%)", "Baseline Avg", "NRGA Avg", "PI Avg (%)"],
        ["---", "---"] + ["---:"] * 6,
        rows,
    )
    if summary is not None and not summary.empty:
        keys = [c for c in summary.columns if c not in SUMMARY_COLUMNS]
        summary_rows = [
            [str(getattr(rec, k)) for k in keys]
            + [str(rec.instances), _cell(rec.mean_pi_best), _cell(rec.max_pi_best), rec.max_pi_instance]
            for rec in summary.itertuples(index=False)
        ]
        text += "\n" + _table(
            [_GROUP_HEADERS.get(k, k) for k in keys] + ["Instances", "Average PI (%)", "Highest PI (%)", "On"],
            ["---"] * len(keys) + ["---:", "---:", "---:", "---"],
            summary_rows,
        )
    return text

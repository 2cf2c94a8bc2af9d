"""
Instance, solution and results files.

Instance format (1-based vertex ids on disk, 0-based in memory)::

    NAME: 10rand52
    TYPE: CLUSTP
    DIMENSION: 52
    CLUSTERS: 10
    SOURCE_VERTEX: 1
    EDGE_WEIGHT_TYPE: EUC_2D            (or EXPLICIT)
    NODE_COORD_SECTION                  (EUC_2D: "<id> <x> <y>")
    EDGE_WEIGHT_SECTION                 (EXPLICIT: upper-triangle rows, INF = no edge)
    CLUSTER_SECTION                     ("<cluster-id> <v1> <v2> ... -1")
    EOF
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from clustp import settings
from clustp.core import ClusteredInstance, EdgeRef, WeightKind, build_instance
from clustp.errors import MissingSectionError, ParseError
from clustp.objective import SolutionTree

if TYPE_CHECKING:
    from clustp.bench import TrialReport

RESULT_COLUMNS = ["instance", "gamma", "runs", "best_found", "average", "seconds_per_run", "master_seed"]
BASELINE_COLUMNS = ["instance", "algorithm", "best_found", "average"]

_HEADER_KEYS = ("NAME", "TYPE", "DIMENSION", "CLUSTERS", "SOURCE_VERTEX", "EDGE_WEIGHT_TYPE")
_SECTIONS = {"NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "CLUSTER_SECTION", "LOCAL_ROOT_SECTION", "EDGE_SECTION"}

Rows = List[Tuple[int, List[str]]]


def _fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "INF"
    return repr(x)


def _number(token: str, line: int) -> float:
    if token.upper() == "INF":
        return math.inf
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line) from None


def _integer(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", line) from None


def _split_document(text: str) -> Tuple[Dict[str, Tuple[int, str]], Dict[str, Rows]]:
    header: Dict[str, Tuple[int, str]] = {}
    sections: Dict[str, Rows] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if line in _SECTIONS:
            if line in sections:
                raise ParseError(f"section {line} appears twice", lineno)
            current = line
            sections[current] = []
            continue
        if current is None:
            if ":" not in line:
                raise ParseError(f"expected 'KEY: value', got {line!r}", lineno)
            key, value = line.split(":", 1)
            header[key.strip().upper()] = (lineno, value.strip())
        else:
            sections[current].append((lineno, line.split()))
    return header, sections


def _require(header: Dict[str, Tuple[int, str]], key: str) -> Tuple[int, str]:
    if key not in header:
        raise MissingSectionError(key)
    return header[key]


def parse_instance(text: str) -> ClusteredInstance:
    header, sections = _split_document(text)
    for key in _HEADER_KEYS:
        _require(header, key)
    lineno, kind = header["TYPE"]
    if kind.upper() != "CLUSTP":
        raise ParseError(f"TYPE must be CLUSTP, got {kind!r}", lineno)
    n = _integer(header["DIMENSION"][1], header["DIMENSION"][0])
    k = _integer(header["CLUSTERS"][1], header["CLUSTERS"][0])
    source = _integer(header["SOURCE_VERTEX"][1], header["SOURCE_VERTEX"][0]) - 1
    lineno, weight_type = header["EDGE_WEIGHT_TYPE"]
    if n < 1:
        raise ParseError(f"DIMENSION must be positive, got {n}", header["DIMENSION"][0])

    coords = weights = None
    if weight_type == WeightKind.EUCLIDEAN_2D.value:
        coords = _parse_coords(sections, n)
    elif weight_type == WeightKind.EXPLICIT.value:
        weights = _parse_weights(sections, n)
    else:
        raise ParseError(f"EDGE_WEIGHT_TYPE must be EUC_2D or EXPLICIT, got {weight_type!r}", lineno)

    clusters = _parse_clusters(sections, k)
    inst = build_instance(header["NAME"][1], clusters, source, coords=coords, weights=weights)
    settings.log(f"[io] parsed {inst.name}: n={inst.n} k={inst.k}")
    return inst


def _parse_coords(sections: Dict[str, Rows], n: int) -> np.ndarray:
    if "NODE_COORD_SECTION" not in sections:
        raise MissingSectionError("NODE_COORD_SECTION")
    coords = np.full((n, 2), np.nan)
    rows = sections["NODE_COORD_SECTION"]
    for lineno, tokens in rows:
        if len(tokens) != 3:
            raise ParseError("coordinate lines are '<id> <x> <y>'", lineno)
        vid = _integer(tokens[0], lineno) - 1
        if not 0 <= vid < n:
            raise ParseError(f"vertex id {vid + 1} outside 1..{n}", lineno)
        if not np.isnan(coords[vid, 0]):
            raise ParseError(f"vertex {vid + 1} listed twice", lineno)
        coords[vid] = (_number(tokens[1], lineno), _number(tokens[2], lineno))
    if len(rows) != n:
        raise ParseError(f"NODE_COORD_SECTION has {len(rows)} lines, expected {n}", rows[-1][0] if rows else None)
    return coords


def _parse_weights(sections: Dict[str, Rows], n: int) -> np.ndarray:
    if "EDGE_WEIGHT_SECTION" not in sections:
        raise MissingSectionError("EDGE_WEIGHT_SECTION")
    rows = sections["EDGE_WEIGHT_SECTION"]
    values = [(lineno, tok) for lineno, tokens in rows for tok in tokens]
    expected = n * (n - 1) // 2
    if len(values) != expected:
        last = rows[-1][0] if rows else None
        raise ParseError(f"EDGE_WEIGHT_SECTION has {len(values)} values, expected {expected}", last)
    weights = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    upper = [_number(tok, lineno) for lineno, tok in values]
    weights[iu, ju] = upper
    weights[ju, iu] = upper
    return weights


def _parse_clusters(sections: Dict[str, Rows], k: int) -> List[List[int]]:
    if "CLUSTER_SECTION" not in sections:
        raise MissingSectionError("CLUSTER_SECTION")
    rows = sections["CLUSTER_SECTION"]
    found: Dict[int, List[int]] = {}
    for lineno, tokens in rows:
        if len(tokens) < 2 or tokens[-1] != "-1":
            raise ParseError("cluster lines are '<cluster-id> <v1> ... -1'", lineno)
        cid = _integer(tokens[0], lineno)
        if not 1 <= cid <= k:
            raise ParseError(f"cluster id {cid} outside 1..{k}", lineno)
        if cid in found:
            raise ParseError(f"cluster {cid} listed twice", lineno)
        found[cid] = [_integer(tok, lineno) - 1 for tok in tokens[1:-1]]
    if len(found) != k:
        raise ParseError(f"CLUSTER_SECTION has {len(found)} clusters, expected {k}", rows[-1][0] if rows else None)
    return [found[cid] for cid in range(1, k + 1)]


def write_instance(inst: ClusteredInstance) -> str:
    lines = [
        f"NAME: {inst.name}",
        "TYPE: CLUSTP",
        f"DIMENSION: {inst.n}",
        f"CLUSTERS: {inst.k}",
        f"SOURCE_VERTEX: {inst.source + 1}",
        f"EDGE_WEIGHT_TYPE: {inst.weight_kind.value}",
    ]
    if inst.weight_kind is WeightKind.EUCLIDEAN_2D:
        lines.append("NODE_COORD_SECTION")
        for v, (x, y) in enumerate(inst.coords.tolist()):
            lines.append(f"{v + 1} {_fmt(x)} {_fmt(y)}")
    else:
        lines.append("EDGE_WEIGHT_SECTION")
        matrix = inst.explicit_weights.tolist()
        for i in range(inst.n - 1):
            lines.append(" ".join(_fmt(w) for w in matrix[i][i + 1:]))
    lines.append("CLUSTER_SECTION")
    for cid, members in enumerate(inst.clusters, start=1):
        lines.append(" ".join([str(cid)] + [str(v + 1) for v in members] + ["-1"]))
    lines.append("EOF")
    return "\n".join(lines) + "\n"


# ---------------------- solutions ----------------------
def write_solution(tree: SolutionTree, cost: float) -> str:
    inst = tree.instance
    lines = [
        f"NAME: {inst.name}",
        "TYPE: CLUSTP_SOLUTION",
        f"DIMENSION: {inst.n}",
        f"COST: {_fmt(cost)}",
        "LOCAL_ROOT_SECTION",
    ]
    for cluster, root in sorted(tree.local_roots.items()):
        lines.append(f"{cluster + 1} {root + 1}")
    lines.append("-1")
    lines.append("EDGE_SECTION")
    for u, v in sorted(e.normalized() for e in tree.edges):
        lines.append(f"{u + 1} {v + 1}")
    lines.append("-1")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _pairs(rows: Rows) -> List[Tuple[int, int]]:
    pairs = []
    for lineno, tokens in rows:
        if tokens == ["-1"]:
            break
        if len(tokens) != 2:
            raise ParseError("expected two ids per line", lineno)
        pairs.append((_integer(tokens[0], lineno) - 1, _integer(tokens[1], lineno) - 1))
    return pairs


def parse_solution(text: str, inst: ClusteredInstance) -> Tuple[SolutionTree, float]:
    header, sections = _split_document(text)
    lineno, kind = _require(header, "TYPE")
    if kind.upper() != "CLUSTP_SOLUTION":
        raise ParseError(f"TYPE must be CLUSTP_SOLUTION, got {kind!r}", lineno)
    lineno, dim = _require(header, "DIMENSION")
    if _integer(dim, lineno) != inst.n:
        raise ParseError(f"solution is for {dim} vertices, instance has {inst.n}", lineno)
    lineno, raw_cost = _require(header, "COST")
    cost = _number(raw_cost, lineno)
    if "EDGE_SECTION" not in sections:
        raise MissingSectionError("EDGE_SECTION")

    tree = SolutionTree.from_edges(inst, _pairs(sections["EDGE_SECTION"]))
    if "LOCAL_ROOT_SECTION" in sections:
        tree.local_roots = dict(sorted(_pairs(sections["LOCAL_ROOT_SECTION"])))
    return tree, cost


# ---------------------- results tables ----------------------
def write_results_csv(reports: Sequence["TrialReport"]) -> str:
    rows = [
        {
            "instance": r.instance,
            "gamma": f"{r.gamma:g}",
            "runs": r.runs,
            "best_found": f"{r.best_found:.6f}",
            "average": f"{r.average:.6f}",
            "seconds_per_run": f"{r.seconds_per_run:.2f}",
            "master_seed": r.master_seed,
        }
        for r in reports
    ]
    df = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    return df.to_csv(index=False, lineterminator="\n")


def _read_table(text: str, columns: Sequence[str]) -> pd.DataFrame:
    df = pd.read_csv(io.StringIO(text), dtype={"instance": str})
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ParseError(f"CSV is missing columns {missing}", 1)
    df["instance"] = df["instance"].astype(str).str.strip()
    return df


def read_results_csv(text: str) -> pd.DataFrame:
    df = _read_table(text, RESULT_COLUMNS)
    for col in ("gamma", "best_found", "average", "seconds_per_run"):
        df[col] = pd.to_numeric(df[col], errors="coerce")
    return df


def read_baselines_csv(text: str) -> pd.DataFrame:
    df = _read_table(text, BASELINE_COLUMNS)
    df["algorithm"] = df["algorithm"].astype(str).str.strip()
    for col in ("best_found", "average"):
        df[col] = pd.to_numeric(df[col], errors="coerce")
    return df


def write_report_json(reports: Sequence["TrialReport"]) -> str:
    # timings at the same 2-decimal resolution as the CSV
    rows = [{**r.model_dump(), "seconds_per_run": round(r.seconds_per_run, 2)} for r in reports]
    return json.dumps(rows, indent=2) + "\n"


# ---------------------- files ----------------------
def load_instance(path) -> ClusteredInstance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_text(path, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return target

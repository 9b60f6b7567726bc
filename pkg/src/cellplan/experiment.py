"""Algorithm comparison matrix over datasets, cell ranges and seeds."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .core import ConvergenceError
from .dimensioning import CellParams
from .mapmodel import MapError, load_map
from .planner import AlgorithmChoice, InfeasibleCapacityError, plan

CSV_HEADER = [
    "dataset", "algorithm", "method", "cell_range_m", "subs_per_cell", "seed",
    "num_bs", "total_cost", "feasible", "rounds", "ms", "error",
]


@dataclass
class ExperimentConfig:
    datasets: list[str]
    algorithms: list[AlgorithmChoice]
    cell_ranges: list[float]
    subscribers_per_cell: int
    seeds: list[int]
    output: str | None = None

    def __post_init__(self):
        for name in ("datasets", "algorithms", "cell_ranges", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"experiment config: {name} must be non-empty")


def algorithm_from_dict(d: dict) -> AlgorithmChoice:
    kind = d.get("kind") or d.get("algorithm")
    return AlgorithmChoice(kind, k=d.get("k"), method=d.get("method"))


def algorithm_to_dict(a: AlgorithmChoice) -> dict:
    d = {"kind": a.kind}
    if a.k is not None:
        d["k"] = a.k
    if a.method is not None:
        d["method"] = a.method
    return d


def load_config(path) -> ExperimentConfig:
    """Read a JSON config; dataset and output paths resolve against the config's directory."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent
    missing = {"datasets", "algorithms", "cell_ranges", "subscribers_per_cell", "seeds"} - doc.keys()
    if missing:
        raise ValueError(f"experiment config missing keys: {sorted(missing)}")
    cfg = ExperimentConfig(
        datasets=[str(base / p) for p in doc["datasets"]],
        algorithms=[algorithm_from_dict(a) for a in doc["algorithms"]],
        cell_ranges=[float(r) for r in doc["cell_ranges"]],
        subscribers_per_cell=int(doc["subscribers_per_cell"]),
        seeds=[int(s) for s in doc["seeds"]],
        output=str(base / doc["output"]) if doc.get("output") else None,
    )
    for p in cfg.datasets:
        load_map(p)
    return cfg


@dataclass
class Row:
    dataset: str
    algorithm: str
    method: int | None
    cell_range_m: float
    subs_per_cell: int
    seed: int
    num_bs: int | None = None
    total_cost: float | None = None
    feasible: bool | None = None
    rounds: int | None = None
    ms: float | None = None
    error: str = ""
    medoids: tuple[int, ...] = field(default=(), compare=False)

    def key(self):
        return (self.dataset, self.cell_range_m, self.seed)


def _run_one(task):
    dataset_path, algorithm, cell_range, spc, seed, timing = task
    row = Row(Path(dataset_path).stem, algorithm.kind, algorithm.method, cell_range, spc, seed)
    try:
        pmap = load_map(dataset_path)
        params = CellParams(cell_range, spc)
        t0 = time.perf_counter()
        result = plan(pmap, params, algorithm, seed)
        elapsed = (time.perf_counter() - t0) * 1000.0
    except (InfeasibleCapacityError, ConvergenceError, MapError, ValueError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    row.num_bs = result.num_base_stations
    row.total_cost = result.total_cost
    row.feasible = result.feasible
    row.rounds = result.adjustment_rounds
    row.medoids = result.medoids
    if timing:
        row.ms = round(elapsed, 3)
    return row


def run_experiment(config: ExperimentConfig, *, timing: bool = False, workers: int = 1) -> list[Row]:
    """One row per (dataset, algorithm, cell range, seed), in that nesting order.

    Wall time is recorded only with ``timing=True`` so that untimed runs are
    reproducible byte for byte.
    """
    tasks = [
        (ds, alg, cr, config.subscribers_per_cell, seed, timing)
        for ds in config.datasets
        for alg in config.algorithms
        for cr in config.cell_ranges
        for seed in config.seeds
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


def method_comparison(rows: list[Row]) -> list[dict]:
    """Pair CWN-PAM method 1 and method 2 rows and flag the one with fewer base stations."""
    by_key: dict = {}
    for r in rows:
        if r.algorithm == "cwn-pam" and r.num_bs is not None:
            by_key.setdefault(r.key(), {})[r.method] = r
    out = []
    for key, pair in by_key.items():
        if 1 not in pair or 2 not in pair:
            continue
        b1, b2 = pair[1].num_bs, pair[2].num_bs
        better = "tie" if b1 == b2 else ("method2" if b2 < b1 else "method1")
        out.append({
            "dataset": key[0], "cell_range_m": key[1], "seed": key[2],
            "bs_method1": b1, "bs_method2": b2, "fewer_bs": better,
        })
    return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(getattr(r, col)) for col in CSV_HEADER])
    return buf.getvalue()


def emit_csv(rows: list[Row], path) -> None:
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8")


def _parse(col, text):
    if text == "":
        return "" if col == "error" else None
    if col in ("dataset", "algorithm", "error"):
        return text
    if col in ("cell_range_m", "total_cost", "ms"):
        return float(text)
    if col == "feasible":
        return text == "true"
    return int(text)


def rows_from_csv(text: str) -> list[Row]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    return [Row(**{c: _parse(c, v) for c, v in zip(header, rec)}) for rec in reader]


def rows_to_json(rows: list[Row]) -> str:
    recs = []
    for r in rows:
        d = {c: getattr(r, c) for c in CSV_HEADER}
        d["medoids"] = list(r.medoids)
        recs.append(d)
    return json.dumps(recs, sort_keys=True, separators=(",", ":")) + "\n"

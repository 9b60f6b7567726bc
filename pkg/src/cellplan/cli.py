"""Command-line entry point: ``cellplan {plan,generate,compare}``.

Exit codes: 0 success, 1 usage or input error, 2 infeasible capacity,
3 internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .core import ConvergenceError
from .dimensioning import CellParams
from .experiment import (ExperimentConfig, load_config, method_comparison, rows_to_csv,
                         rows_to_json, run_experiment)
from .mapmodel import MapError, emit_map, load_map
from .planner import AlgorithmChoice, InfeasibleCapacityError, plan
from .synth import SyntheticSpec, generate_map

log = logging.getLogger("cellplan")

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _algorithm(args) -> AlgorithmChoice:
    if args.algorithm == "pam":
        if args.k is None:
            raise UsageError("--k is required with --algorithm pam")
        return AlgorithmChoice.pam(args.k)
    if args.k is not None:
        raise UsageError("--k applies to --algorithm pam only")
    if args.algorithm == "mpam":
        return AlgorithmChoice.mpam()
    return AlgorithmChoice.cwnpam(args.method)


def _write(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_plan(args) -> int:
    pmap = load_map(args.map)
    params = CellParams(args.cell_range_m, args.subs_per_cell)
    result = plan(pmap, params, _algorithm(args), args.seed)
    if args.format == "json":
        text = result.to_json(pmap)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["medoid_id", "bs_x", "bs_y", "members", "load_sum", "max_dist_m", "feasible"])
        for c in result.clusters:
            w.writerow([c.medoid_id, repr(c.bs_x), repr(c.bs_y), len(c.members),
                        c.feasibility.load_sum, repr(c.feasibility.max_dist),
                        "true" if c.feasible else "false"])
        text = buf.getvalue()
    _write(text, args.out)
    log.info("%s: %d base stations, cost %.6g, %d adjustment rounds",
             result.algorithm.label, result.num_base_stations, result.total_cost,
             result.adjustment_rounds)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = SyntheticSpec(
        node_count=args.nodes,
        target_total_subscribers=args.subscribers,
        target_area_m2=args.area_m2,
        density_mode=args.density,
        hotspot_count=args.hotspot_count,
        hotspot_share=args.hotspot_share,
        seed=args.seed,
    )
    _write(emit_map(generate_map(spec)), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        if not args.map or not args.cell_range_m or args.subs_per_cell is None:
            raise UsageError("compare needs --config, or --map, --cell-range-m and --subs-per-cell")
        algorithms = []
        for name in args.algorithm or ["mpam", "cwn-pam"]:
            if name == "cwn-pam":
                methods = args.method or [1, 2]
                algorithms += [AlgorithmChoice.cwnpam(m) for m in methods]
            elif name == "pam":
                if args.k is None:
                    raise UsageError("--k is required with --algorithm pam")
                algorithms.append(AlgorithmChoice.pam(args.k))
            else:
                algorithms.append(AlgorithmChoice.mpam())
        cfg = ExperimentConfig(args.map, algorithms, args.cell_range_m, args.subs_per_cell,
                               args.seed or [0])
    rows = run_experiment(cfg, timing=args.timing, workers=args.workers)
    text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
    _write(text, args.out or cfg.output)

    for c in method_comparison(rows):
        print(f"{c['dataset']} R={c['cell_range_m']:g}m seed={c['seed']}: "
              f"method1={c['bs_method1']} method2={c['bs_method2']} fewer={c['fewer_bs']}",
              file=sys.stderr)
    for r in rows:
        if r.error:
            print(f"row error [{r.dataset} {r.algorithm} R={r.cell_range_m:g} seed={r.seed}]: {r.error}",
                  file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cellplan", description="Base-station placement by load-weighted k-medoids.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pp = sub.add_parser("plan", help="plan base stations for one map")
    pp.add_argument("--map", required=True)
    pp.add_argument("--algorithm", choices=["pam", "mpam", "cwn-pam"], default="cwn-pam")
    pp.add_argument("--method", type=int, choices=[1, 2], default=2)
    pp.add_argument("--k", type=int)
    pp.add_argument("--cell-range-m", type=float, required=True)
    pp.add_argument("--subs-per-cell", type=int, required=True)
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--out")
    pp.add_argument("--format", choices=["json", "csv"], default="json")
    pp.set_defaults(func=cmd_plan)

    pg = sub.add_parser("generate", help="write a synthetic map")
    pg.add_argument("--nodes", type=int, required=True)
    pg.add_argument("--subscribers", type=int, required=True)
    pg.add_argument("--area-m2", type=float, required=True)
    pg.add_argument("--density", choices=["homogeneous", "heterogeneous"], default="homogeneous")
    pg.add_argument("--hotspot-count", type=int)
    pg.add_argument("--hotspot-share", type=float, default=0.6)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out")
    pg.set_defaults(func=cmd_generate)

    pc = sub.add_parser("compare", help="run the algorithm comparison matrix")
    pc.add_argument("--config")
    pc.add_argument("--map", action="append")
    pc.add_argument("--algorithm", action="append", choices=["pam", "mpam", "cwn-pam"])
    pc.add_argument("--method", type=int, action="append", choices=[1, 2])
    pc.add_argument("--k", type=int)
    pc.add_argument("--cell-range-m", type=float, action="append")
    pc.add_argument("--subs-per-cell", type=int)
    pc.add_argument("--seed", type=int, action="append")
    pc.add_argument("--out")
    pc.add_argument("--format", choices=["json", "csv"], default="csv")
    pc.add_argument("--timing", action="store_true", help="record wall time per row (breaks byte-identical reruns)")
    pc.add_argument("--workers", type=int, default=1)
    pc.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleCapacityError as exc:
        print(f"cellplan: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, MapError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"cellplan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"cellplan: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("unexpected failure")
        print(f"cellplan: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

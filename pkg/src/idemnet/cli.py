"""Command-line interface: seeded experiments with reproducible reports.

Every subcommand maps onto one library operation and writes a canonical
JSON report (stdout or ``--json-out``); histogram-producing commands also
write ``distance,fraction`` CSV and, unless ``--no-figures`` is given, a
PNG rendering next to it. Re-running any command with the same arguments
reproduces all JSON/CSV artifacts byte for byte.

Exit codes: 0 success, 1 usage/config error, 2 data error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import figures, reports
from .analytics import (companion_matrix, dominant_eigenvalue, predict_ell,
                        recurrence_c, recurrence_c_general,
                        verify_longrange_lower_bound)
from .edgelist import EdgeListError, parse_edge_list, write_edge_list
from .generators import ModelSpec, generate, validate_spec
from .graph import GraphError, largest_component
from .idemetric import (concentration_report, default_num_pairs, fed_check,
                        idemetric_scan, pump_check, sample_pair_distances,
                        us_proxy)
from .routing import (UnroutableError, build_beacon_tables, compact_route_sim,
                      compact_scheme_build, distributed_beacon_sim,
                      memory_account, stretch_report)
from .rng import derive_seed, make_rng, STREAM_GENERATE, STREAM_BEACONS

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


_MODEL_ALIASES = {
    "er": "erdos_renyi",
    "ws": "watts_strogatz",
    "kleinberg": "kleinberg",
    "ba": "barabasi_albert",
    "config": "configuration",
}


def _add_model_args(sp, with_input=True):
    grp = sp.add_argument_group("graph source")
    grp.add_argument("--model", choices=sorted(_MODEL_ALIASES))
    if with_input:
        grp.add_argument("--edges-in", metavar="FILE",
                         help="read the graph from an edge-list file instead")
    grp.add_argument("--n", type=int, help="node count")
    grp.add_argument("--mean-degree", type=float, help="er: expected degree")
    grp.add_argument("--m", type=int, help="ws: neighbors per side")
    grp.add_argument("--p", type=float, help="ws: rewiring probability")
    grp.add_argument("--r", type=float, help="kleinberg: distance exponent")
    grp.add_argument("--p-local", type=int, default=1,
                     help="kleinberg: local arc radius (default 1)")
    grp.add_argument("--q-long", type=int, default=1,
                     help="kleinberg: long-range arcs per node (default 1)")
    grp.add_argument("--m-attach", type=int, help="ba: edges per new node")
    grp.add_argument("--tau", type=float, help="config: power-law exponent")


def _spec_from_args(args, n=None, require_n=True):
    if args.model is None:
        raise UsageError("--model is required (or pass --edges-in)")
    model = _MODEL_ALIASES[args.model]
    n = n if n is not None else args.n
    if n is None:
        if require_n:
            raise UsageError("--n is required with --model")
        n = 0
    need = {
        "erdos_renyi": {"mean_degree": args.mean_degree},
        "watts_strogatz": {"m": args.m, "p_rewire": args.p},
        "kleinberg": {"r": args.r, "p_local": args.p_local,
                      "q_long": args.q_long},
        "barabasi_albert": {"m_attach": args.m_attach},
        "configuration": {"tau": args.tau},
    }[model]
    missing = [k for k, v in need.items() if v is None]
    if missing:
        raise UsageError(f"model {args.model} needs {', '.join(missing)}")
    spec = ModelSpec(model=model, n=n, seed=derive_seed(args.seed, STREAM_GENERATE),
                     params=need)
    if require_n:
        try:
            validate_spec(spec)
        except ValueError as exc:
            raise UsageError(str(exc))
    return spec


def _load_graph(args):
    """Graph plus a JSON-ready description of where it came from."""
    if getattr(args, "edges_in", None):
        try:
            with open(args.edges_in) as fh:
                g = parse_edge_list(fh)
        except OSError as exc:
            raise DataError(f"cannot read {args.edges_in}: {exc}")
        return g, {"edges_in": args.edges_in, "n": g.n,
                   "directed": g.directed}
    spec = _spec_from_args(args)
    return generate(spec), {"model": spec.model, "n": spec.n,
                            "params": dict(spec.params),
                            "generator_seed": spec.seed}


def _emit(args, report):
    text = reports.canonical_json(_jsonable(report))
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)  # "inf"/"-inf"/"nan": JSON has no such numbers
    if obj is None or isinstance(obj, (int, float, str, bool)):
        return obj
    return str(obj)


def _figure_path(csv_path):
    return str(Path(csv_path).with_suffix(".png"))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args):
    spec = _spec_from_args(args)
    with reports.timed("generate"):
        g = generate(spec)
    with open(args.edges_out, "w") as fh:
        write_edge_list(g, fh)
    report = reports.make_report("generate", {
        "model": spec.model, "n": spec.n, "params": dict(spec.params),
        "seed": args.seed, "edges_out": args.edges_out,
    }, {"n": g.n, "directed": g.directed, "num_edges": g.num_edges})
    _emit(args, report)


def cmd_distances(args):
    g, source = _load_graph(args)
    pairs = args.pairs if args.pairs else default_num_pairs(g.n)
    with reports.timed("distances"):
        hist = sample_pair_distances(g, pairs, args.seed, scope=args.scope)
        conc = concentration_report(hist)
    if args.csv_out:
        reports.write_histogram_csv(args.csv_out, hist.counts)
        if not args.no_figures:
            figures.render_distance_histogram(
                hist.counts, _figure_path(args.csv_out),
                title=f"pair distances ({source.get('model', 'ingested')})")
    report = reports.make_report("distances", {
        "source": source, "pairs": pairs, "seed": args.seed,
        "scope": args.scope,
    }, {"histogram": hist.to_dict(), "concentration": conc.to_dict()})
    _emit(args, report)


def cmd_idemetric_scan(args):
    sizes = args.sizes
    spec = _spec_from_args(args, n=sizes[0])
    with reports.timed("idemetric-scan"):
        scan = idemetric_scan(spec, sizes, args.seed, num_pairs=args.pairs,
                              scope=args.scope)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for n, hist in zip(scan.sizes, scan.histograms):
            reports.write_histogram_csv(out / f"hist_n{n}.csv", hist.counts)
        if not args.no_figures:
            masses = {b: [r.window_mass[b] for r in scan.reports]
                      for b in scan.reports[0].window_mass}
            figures.render_scan_trend(scan.sizes, masses, out / "scan.png",
                                      title=f"{spec.model} window mass")
    report = reports.make_report("idemetric-scan", {
        "model": spec.model, "params": dict(spec.params),
        "sizes": sizes, "pairs": args.pairs, "seed": args.seed,
        "scope": args.scope,
    }, scan.to_dict())
    _emit(args, report)


def cmd_pump_check(args):
    g, source = _load_graph(args)
    with reports.timed("pump-check"):
        rep = pump_check(g, args.eps, args.centers, args.alpha_threshold,
                         args.seed)
    report = reports.make_report("pump-check", {
        "source": source, "eps": args.eps, "centers": args.centers,
        "alpha_threshold": args.alpha_threshold, "seed": args.seed,
    }, rep.to_dict())
    _emit(args, report)


def cmd_us_check(args):
    g, source = _load_graph(args)
    rep = us_proxy(g, args.mu)
    report = reports.make_report("us-check", {
        "source": source, "mu": args.mu, "seed": args.seed,
    }, rep.to_dict())
    _emit(args, report)


def cmd_fed_check(args):
    sizes = args.sizes
    spec = _spec_from_args(args, n=sizes[0])
    with reports.timed("fed-check"):
        rep = fed_check(spec, sizes, args.seed)
    if args.figure_out and not args.no_figures:
        figures.render_degree_laws(rep.laws, rep.sizes, args.figure_out,
                                   analytic=rep.analytic_reference,
                                   title=f"{spec.model} degree law")
    report = reports.make_report("fed-check", {
        "model": spec.model, "params": dict(spec.params),
        "sizes": sizes, "seed": args.seed,
    }, rep.to_dict())
    _emit(args, report)


def cmd_predict(args):
    p, q = args.p, args.q
    if p < 1 or q < 1:
        raise UsageError(f"need p, q >= 1, got p={p}, q={q}")
    mat = companion_matrix(p, q)
    est = dominant_eigenvalue(mat)
    if p == 1 and q == 1:
        series = recurrence_c(args.i_max)
        values = series.values
    else:
        series = recurrence_c_general(p, q, args.i_max)
        values = [str(v) for v in series.values]
    results = {
        "alpha": est.alpha,
        "alpha_power_iteration": est.power_alpha,
        "alpha_bisection": est.bisection_alpha,
        "residual": est.residual,
        "companion_first_row": list(mat.first_row),
        "c_values": values[: args.i_max + 1],
        "c_ratio_tail": series.ratios[-5:],
    }
    if args.n:
        results["ell"] = {str(n): predict_ell(n, est.alpha) for n in args.n}
    report = reports.make_report("predict", {"p": p, "q": q,
                                             "i_max": args.i_max}, results)
    _emit(args, report)


def cmd_verify_bound(args):
    try:
        chk = verify_longrange_lower_bound(args.n, args.r)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = reports.make_report("verify-bound", {"n": args.n, "r": args.r}, {
        "z": chk.z, "max_distance": chk.max_distance,
        "min_prob": chk.min_prob, "bound": chk.bound, "holds": chk.holds,
    })
    _emit(args, report)


def _pick_beacon(args, g):
    if args.beacon is not None:
        if not 0 <= args.beacon < g.n:
            raise UsageError(f"beacon {args.beacon} out of range")
        return args.beacon
    rng = make_rng(args.seed, STREAM_BEACONS)
    return int(rng.integers(0, g.n))


def cmd_route_beacon(args):
    g, source = _load_graph(args)
    beacon = _pick_beacon(args, g)
    pairs = args.pairs if args.pairs else default_num_pairs(g.n)
    with reports.timed("route-beacon"):
        tables = build_beacon_tables(g, beacon)
        rep = stretch_report(g, tables, pairs, args.seed)
    if args.figure_out and not args.no_figures:
        figures.render_stretch_cdf(rep.stretches, args.figure_out,
                                   title=f"stretch via beacon {beacon}")
    report = reports.make_report("route-beacon", {
        "source": source, "beacon": beacon, "pairs": pairs, "seed": args.seed,
    }, rep.to_dict())
    _emit(args, report)


def cmd_route_compact(args):
    g, source = _load_graph(args)
    beacon = _pick_beacon(args, g)
    with reports.timed("route-compact"):
        try:
            scheme = compact_scheme_build(g, beacon)
        except ValueError as exc:
            raise DataError(str(exc))
        mem = memory_account(scheme)
        rng = make_rng(args.seed, STREAM_BEACONS, 1)
        delivered = 0
        hops_ok = 0
        for _ in range(args.pairs):
            u = int(rng.integers(0, g.n))
            v = int(rng.integers(0, g.n))
            tr = compact_route_sim(scheme, u, v)
            delivered += tr.delivered
            expect = int(scheme.dist_from_beacon[u] + scheme.dist_from_beacon[v])
            hops_ok += (tr.hops == (expect if u != v else 0))
    trace_result = None
    if args.trace:
        u, v = args.trace
        trace_result = compact_route_sim(scheme, u, v)
        text = trace_result.dump() + "\n"
        if args.trace_out:
            Path(args.trace_out).write_text(text)
        else:
            sys.stdout.write(text)
    results = {
        "beacon": beacon,
        "memory": mem.to_dict(),
        "delivery_check": {"pairs": args.pairs, "delivered": delivered,
                           "hops_consistent": hops_ok},
    }
    if trace_result is not None:
        results["trace"] = {"source": trace_result.source,
                            "destination": trace_result.destination,
                            "hops": trace_result.hops,
                            "delivered": trace_result.delivered}
    report = reports.make_report("route-compact", {
        "source": source, "beacon": beacon, "pairs": args.pairs,
        "seed": args.seed,
    }, results)
    _emit(args, report)


def cmd_route_distributed(args):
    g, source = _load_graph(args)
    beacons = args.beacons
    prob = args.beacon_prob
    if beacons is None and prob is None:
        base = math.log2(g.n) if args.log_base == "2" else math.log(g.n)
        prob = base / g.n
    with reports.timed("route-distributed"):
        rep = distributed_beacon_sim(g, beacons=beacons,
                                     beacon_probability=prob,
                                     max_rounds=args.max_rounds,
                                     seed=args.seed)
    report = reports.make_report("route-distributed", {
        "source": source, "beacons": beacons, "beacon_prob": prob,
        "max_rounds": args.max_rounds, "seed": args.seed,
        "log_base": args.log_base,
    }, rep.to_dict())
    _emit(args, report)


def cmd_ingest(args):
    try:
        with open(args.edges_in) as fh:
            g = parse_edge_list(fh, directed=True if args.directed else None)
    except OSError as exc:
        raise DataError(f"cannot read {args.edges_in}: {exc}")
    if args.canonical_out:
        with open(args.canonical_out, "w") as fh:
            write_edge_list(g, fh)
    comp = largest_component(g)
    degs = g.degrees()
    report = reports.make_report("ingest", {
        "edges_in": args.edges_in, "directed": g.directed,
        "canonical_out": args.canonical_out,
    }, {
        "n": g.n, "num_edges": g.num_edges, "directed": g.directed,
        "largest_component_size": comp.largest_size,
        "largest_component_fraction": comp.largest_fraction,
        "num_components": comp.num_components,
        "degree_min": int(degs.min()), "degree_max": int(degs.max()),
        "degree_mean": float(degs.mean()),
    })
    _emit(args, report)


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def _pair(text):
    parts = _int_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'u,v'")
    return parts


def build_parser():
    parser = _Parser(prog="idemnet",
                     description="small-world distance concentration and "
                                 "beacon routing experiments")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json-out", metavar="FILE")
        sp.add_argument("--no-figures", action="store_true")
        return sp

    sp = add("generate", cmd_generate, "generate a model graph as an edge list")
    _add_model_args(sp, with_input=False)
    sp.add_argument("--edges-out", required=True, metavar="FILE")

    sp = add("distances", cmd_distances, "sample pair distances")
    _add_model_args(sp)
    sp.add_argument("--pairs", type=int)
    sp.add_argument("--scope", choices=["all", "giant"], default="all")
    sp.add_argument("--csv-out", metavar="FILE")

    sp = add("idemetric-scan", cmd_idemetric_scan,
             "concentration trend across sizes")
    _add_model_args(sp, with_input=False)
    sp.add_argument("--sizes", type=_int_list, required=True,
                    metavar="N1,N2,...")
    sp.add_argument("--pairs", type=int)
    sp.add_argument("--scope", choices=["all", "giant"], default="all")
    sp.add_argument("--out-dir", metavar="DIR")

    sp = add("pump-check", cmd_pump_check, "ball-expansion check")
    _add_model_args(sp)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--centers", type=int, default=100)
    sp.add_argument("--alpha-threshold", type=float, default=0.05)

    sp = add("us-check", cmd_us_check, "top-degree mass check")
    _add_model_args(sp)
    sp.add_argument("--mu", type=float, default=0.01)

    sp = add("fed-check", cmd_fed_check, "degree-law stability across sizes")
    _add_model_args(sp, with_input=False)
    sp.add_argument("--sizes", type=_int_list, required=True,
                    metavar="N1,N2,...")
    sp.add_argument("--figure-out", metavar="FILE")

    sp = add("predict", cmd_predict, "growth constants and distance scale")
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--i-max", type=int, default=60)
    sp.add_argument("--n", type=int, action="append",
                    help="predict the distance scale for this size (repeatable)")

    sp = add("verify-bound", cmd_verify_bound,
             "worst-case long-range probability vs its floor")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=float, required=True)

    sp = add("route-beacon", cmd_route_beacon, "beacon routing stretch")
    _add_model_args(sp)
    sp.add_argument("--beacon", type=int)
    sp.add_argument("--pairs", type=int)
    sp.add_argument("--figure-out", metavar="FILE")

    sp = add("route-compact", cmd_route_compact,
             "compact port/header scheme: memory and delivery")
    _add_model_args(sp)
    sp.add_argument("--beacon", type=int)
    sp.add_argument("--pairs", type=int, default=1000)
    sp.add_argument("--trace", type=_pair, metavar="U,V",
                    help="dump the full trace for one pair")
    sp.add_argument("--trace-out", metavar="FILE")

    sp = add("route-distributed", cmd_route_distributed,
             "synchronous distance-vector simulation")
    _add_model_args(sp)
    sp.add_argument("--beacons", type=_int_list, metavar="B1,B2,...")
    sp.add_argument("--beacon-prob", type=float)
    sp.add_argument("--log-base", choices=["e", "2"], default="e")
    sp.add_argument("--max-rounds", type=int, default=1000)

    sp = add("ingest", cmd_ingest, "parse an external edge list")
    sp.add_argument("--edges-in", required=True, metavar="FILE")
    sp.add_argument("--directed", action="store_true")
    sp.add_argument("--canonical-out", metavar="FILE")

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EdgeListError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GraphError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnroutableError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: serve the workload, bench it, compare two runs."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ExperimentAborted, ExperimentConfig, compute_reduction, run_experiment
from .reporting import (
    emit_plot_data,
    render_comparison,
    render_hit_miss,
    render_report,
    report_from_json,
)
from .server import ServerConfig, run_server


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cachelab",
        description="TTL-cache performance laboratory: workload server, benchmark client, reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the workload HTTP server")
    serve.add_argument("--mode", choices=["uncached", "cached"], required=True)
    serve.add_argument("--delay-ms", type=int, default=1000,
                       help="simulated computation time per miss (default: 1000)")
    serve.add_argument("--ttl-ms", type=int, default=None,
                       help="cache TTL; required with --mode cached, invalid otherwise")
    serve.add_argument("--port", type=int, default=8080)

    bench = sub.add_parser("bench", help="replay the fixed-interval request protocol")
    bench.add_argument("--url", required=True, help="target endpoint, e.g. http://127.0.0.1:8080/compute")
    bench.add_argument("--requests", type=int, default=10)
    bench.add_argument("--interval-ms", type=int, default=250)
    bench.add_argument("--label", default="")
    bench.add_argument("--out", type=Path, default=None, help="also write the report here")
    bench.add_argument("--format", choices=["csv", "md", "json"], default="csv")

    compare = sub.add_parser("compare", help="tabulate and plot two bench runs (JSON reports)")
    compare.add_argument("--baseline", type=Path, required=True, help="uncached run, bench --format json")
    compare.add_argument("--treated", type=Path, required=True, help="cached run, bench --format json")
    compare.add_argument("--out-dir", type=Path, required=True)
    compare.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    return parser


def _cmd_serve(args, parser: argparse.ArgumentParser) -> int:
    config = ServerConfig(mode=args.mode, delay_ms=args.delay_ms, ttl_ms=args.ttl_ms, port=args.port)
    try:
        config.validate()
    except ValueError as exc:
        parser.error(str(exc))  # exits 2 with usage
    run_server(config)
    return 0


def _cmd_bench(args, parser: argparse.ArgumentParser) -> int:
    config = ExperimentConfig(
        target_url=args.url,
        num_requests=args.requests,
        interval_ms=args.interval_ms,
        label=args.label,
    )
    try:
        config.validate()
    except ValueError as exc:
        parser.error(str(exc))
    try:
        report = run_experiment(config)
    except ExperimentAborted as exc:
        document = render_report(exc.partial_report(), args.format)
        if args.out:
            args.out.write_text(document)
        sys.stdout.write(document)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    document = render_report(report, args.format)
    if args.out:
        args.out.write_text(document)
    sys.stdout.write(document)
    return 0


def _cmd_compare(args) -> int:
    try:
        baseline = report_from_json(args.baseline.read_text())
        treated = report_from_json(args.treated.read_text())
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load reports: {exc}", file=sys.stderr)
        return 1

    out_dir: Path = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "comparison.csv").write_text(render_comparison(baseline, treated, "csv"))
    sys.stdout.write(render_comparison(baseline, treated, "md"))

    has_outcomes = treated.hit_count + treated.miss_count == len(treated.samples)
    if has_outcomes:
        (out_dir / "hit_miss.csv").write_text(render_hit_miss(treated, "csv"))
        sys.stdout.write("\n" + render_hit_miss(treated, "md"))

    emit_plot_data(baseline, treated, out_dir)

    if not args.no_figures:
        from .figures import save_comparison_figure, save_hit_miss_figure

        save_comparison_figure(baseline, treated, out_dir / "response_times.png")
        if has_outcomes:
            save_hit_miss_figure(treated, out_dir / "hit_miss.png")

    reduction = compute_reduction(baseline, treated)
    print(
        f"\noverall reduction: {reduction.overall_pct:.1f}%"
        f" (baseline mean {reduction.baseline_mean_ms:.1f} ms,"
        f" treated mean {reduction.treated_mean_ms:.1f} ms)"
    )
    if reduction.hit_only_pct is None:
        print("hit-only reduction: undefined (treated run has no cache hits)")
    else:
        print(
            f"hit-only reduction: {reduction.hit_only_pct:.1f}%"
            f" (treated hit mean {reduction.treated_hit_mean_ms:.1f} ms)"
        )
    summary = {
        "baseline_label": baseline.config.label,
        "treated_label": treated.config.label,
        "baseline_mean_ms": reduction.baseline_mean_ms,
        "treated_mean_ms": reduction.treated_mean_ms,
        "treated_hit_mean_ms": reduction.treated_hit_mean_ms,
        "overall_reduction_pct": reduction.overall_pct,
        "hit_only_reduction_pct": reduction.hit_only_pct,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args, parser)
    if args.command == "bench":
        return _cmd_bench(args, parser)
    return _cmd_compare(args)


def entrypoint() -> None:
    sys.exit(main())

"""Command line entry point: ``p2panon {gen-topology,run,learn-subgraph,summarize}``.

Exit codes: 0 on success, 2 for configuration errors, 3 for runtime errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import Scheme, load_config
from .exceptions import AnonymityError, ConfigError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _config(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError([("--seed", "must be an unsigned 64-bit integer")])
        cfg = cfg.with_seed(args.seed)
    return cfg


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise AnonymityError(f"cannot write {out}: {exc.strerror}") from None


def cmd_gen_topology(args):
    from .graph.generators import derive_privacy_subgraph, generate_k_regular
    from .graph.snapshot import dump_topology
    from .ln.experiment import ln_topology
    from .ln.routing import CostModel
    from .scenario import adversary_seed, place_adversaries, run_topology, topology_seed

    cfg = _config(args)
    if cfg.scheme is Scheme.LN:
        t = ln_topology(cfg, args.run)
        t = place_adversaries(t, cfg.adversary, adversary_seed(cfg, args.run),
                              CostModel(cfg.amount, cfg.rf, cfg.bias))
    elif cfg.scheme is Scheme.SUBGRAPH_LEARNING:
        t = generate_k_regular(cfg.topology.n, cfg.topology.out_k, topology_seed(cfg, args.run))
        if args.privacy_subgraph:
            t = derive_privacy_subgraph(t, cfg.topology.psg_out_k, topology_seed(cfg, args.run))
    else:
        t = run_topology(cfg, args.run)
    _write(dump_topology(t), args.out)


def cmd_run(args):
    from .report import emit_report
    from .runner import default_workers, run

    cfg = _config(args)
    if cfg.scheme is Scheme.SUBGRAPH_LEARNING:
        return cmd_learn(args, cfg)
    report = run(cfg, args.workers or default_workers(), timing=args.timing)
    fmt = args.format or cfg.output.format
    out = args.out or cfg.output.path
    docs = emit_report(report, fmt, out)
    if out is None:
        if fmt == "csv":
            sys.stdout.write(docs["records"])
            sys.stderr.write(docs["metadata"])
        else:
            sys.stdout.write(docs["report"])


def cmd_learn(args, cfg=None):
    from .runner import default_workers, learning_report

    cfg = cfg or _config(args)
    if cfg.scheme is not Scheme.SUBGRAPH_LEARNING:
        raise ConfigError([("scheme", "learn-subgraph needs scheme 'subgraph-learning'")])
    import time
    start = time.perf_counter()
    report = learning_report(cfg, args.workers or default_workers())
    doc = {"config": cfg.echo(), "artifact": report.metadata()["artifact"], **report.extra}
    if args.timing:
        doc["wall_clock_seconds"] = time.perf_counter() - start
    _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out or cfg.output.path)


def cmd_summarize(args):
    from .metrics import QUANTILE_METHOD, summarize
    from .report import read_records_csv

    try:
        text = Path(args.records).read_text()
    except OSError as exc:
        raise AnonymityError(f"cannot read {args.records}: {exc.strerror}") from None
    records = read_records_csv(text)
    doc = {"record_count": len(records), "quantile_method": QUANTILE_METHOD,
           "summary": summarize([r.entropy_bits for r in records]).as_dict() if records else None,
           "min_entropy_summary": summarize([r.min_entropy_bits for r in records]).as_dict()
           if records else None}
    _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="p2panon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=True):
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="output path (default: config output.path or stdout)")
        if workers:
            p.add_argument("--workers", type=int, help="worker processes (default: all cores)")
            p.add_argument("--timing", action="store_true",
                           help="record wall-clock time (makes output non-reproducible)")

    p = sub.add_parser("gen-topology", help="write the topology of one run as JSON")
    common(p, workers=False)
    p.add_argument("--run", type=int, default=0, help="run index (default 0)")
    p.add_argument("--privacy-subgraph", action="store_true",
                   help="subgraph-learning: emit the privacy subgraph instead of the base graph")
    p.set_defaults(func=cmd_gen_topology)

    p = sub.add_parser("run", help="run an experiment and emit its report")
    common(p)
    p.add_argument("--format", choices=("csv", "structured"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("learn-subgraph", help="run the privacy-subgraph learning attack")
    common(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("summarize", help="recompute aggregates from a records CSV")
    p.add_argument("records", help="records CSV written by 'run'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", None) is not None and args.workers < 1:
        print("error: --workers: must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AnonymityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

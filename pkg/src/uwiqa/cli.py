"""Command line: ``uwiqa evaluate | measure | checker``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, is_dataclass, replace
from pathlib import Path

from .checker import evaluate_checker, load_reference, parse_annotations
from .config import load_config
from .generic import entropy, visible_edge_count
from .image import load_image, preprocess
from .nr_metrics import ccf, uciqe, uiqm
from .report import MEASURES, discover_layout, evaluate_batch, render_report

SINGLE_IMAGE_MEASURES = ("uciqe", "uiqm", "ccf", "entropy", "edges")


def _measure_list(text):
    names = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in names if m not in MEASURES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown measures: {', '.join(unknown)}")
    return names


def _jsonable(obj):
    return asdict(obj) if is_dataclass(obj) else obj


def _write(data: bytes, out):
    if out is None or str(out) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def cmd_evaluate(args):
    config = load_config(args.config)
    if args.preprocess_quarter:
        config = replace(config, preprocess_quarter=True)
    layout = discover_layout(args.root)
    report = evaluate_batch(
        layout, config, args.measures, reference_chart=args.reference_chart, workers=args.workers
    )
    _write(render_report(report, args.format), args.out)
    if report.has_errors:
        n = sum(c.status == "error" for c in report.cells.values())
        print(f"uwiqa: {n} cell(s) failed; see the report", file=sys.stderr)
        return 1
    return 0


def cmd_measure(args):
    config = load_config(args.config)
    img = preprocess(load_image(args.image), quarter=args.preprocess_quarter)
    c = config.constants
    name = args.measure
    if name == "uciqe":
        result = uciqe(img, c)
    elif name == "uiqm":
        result = uiqm(img, c)
    elif name == "ccf":
        result = ccf(img, c)
    elif name == "entropy":
        result = {"value": entropy(img)}
    else:
        edges = visible_edge_count(img, c.edge_threshold)
        result = {"value": edges.count, "count": edges.count, "ratio": edges.ratio}
    payload = {"image": str(args.image), "measure": name, **_jsonable(result)}
    print(json.dumps(payload, indent=2))
    return 0


def cmd_checker(args):
    config = load_config(args.config)
    img = preprocess(load_image(args.image), quarter=args.preprocess_quarter)
    reference = load_reference(args.reference_chart)
    s = config.checker
    scores = evaluate_checker(
        img,
        parse_annotations(args.annotations),
        reference,
        erosion=s.erosion,
        statistic=s.statistic,
        phi_mode=s.phi_mode,
        phi_all_patches=s.phi_all_patches,
    )
    if args.format == "json":
        print(json.dumps([sc.to_dict() for sc in scores], indent=2))
    else:
        print(f"{'patch':<16} {'R':>7} {'G':>7} {'B':>7} {'phi':>7} {'dE00':>7}")
        for sc in scores:
            r, g, b = sc.measured_rgb
            phi = "" if sc.phi_degrees is None else f"{sc.phi_degrees:.2f}"
            print(f"{sc.label:<16} {r:7.2f} {g:7.2f} {b:7.2f} {phi:>7} {sc.delta_e00:7.2f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="uwiqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="score a folder of scenes and write a comparison report")
    ev.add_argument("--root", required=True, help="dataset root with one folder per scene")
    ev.add_argument("--measures", type=_measure_list, default=["uciqe", "uiqm", "ccf"],
                    help="comma-separated: " + ",".join(MEASURES))
    ev.add_argument("--config", help="TOML or JSON settings file")
    ev.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    ev.add_argument("--out", help="output file (default: stdout)")
    ev.add_argument("--preprocess-quarter", action="store_true",
                    help="bilinear resize to a quarter of each side before measuring")
    ev.add_argument("--reference-chart", help="chart JSON for scenes without reference.json")
    ev.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    ev.set_defaults(func=cmd_evaluate)

    me = sub.add_parser("measure", help="score one image with one no-reference measure")
    me.add_argument("--image", required=True)
    me.add_argument("--measure", required=True, choices=SINGLE_IMAGE_MEASURES)
    me.add_argument("--config")
    me.add_argument("--preprocess-quarter", action="store_true")
    me.set_defaults(func=cmd_measure)

    ch = sub.add_parser("checker", help="score annotated colour-checker patches in one image")
    ch.add_argument("--image", required=True)
    ch.add_argument("--annotations", required=True, help="LabelMe JSON with one polygon per patch")
    ch.add_argument("--reference-chart", help="chart JSON (default: classic 24-patch chart)")
    ch.add_argument("--config")
    ch.add_argument("--format", choices=("table", "json"), default="table")
    ch.add_argument("--preprocess-quarter", action="store_true")
    ch.set_defaults(func=cmd_checker)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"uwiqa: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

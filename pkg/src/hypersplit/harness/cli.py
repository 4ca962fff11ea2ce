"""Command-line interface: ``hypersplit <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 model or format error, 3 an
unsplittable fault in ``split --strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from hypersplit.decoders import DECODERS, get_decoder
from hypersplit.decoding_graph import DecodingGraph
from hypersplit.errors import HypersplitError, UnsplittableFaultError
from hypersplit.fault_model import load_model, save_model
from hypersplit.generators import FAMILIES, GeneratorSpec
from hypersplit.harness.distance import effective_distance, model_distance
from hypersplit.harness.sampling import sample
from hypersplit.splitting import METHODS, SplitReport, split

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_UNSPLITTABLE = 0, 1, 2, 3

# generator options: (flag, parameter name, type)
GEN_OPTIONS = [
    ("--n", "n", int), ("--d", "d", int), ("--T", "T", int), ("--Lx", "Lx", int),
    ("--Ly", "Ly", int), ("--m", "m", int), ("--p", "p", float),
    ("--p-x", "p_x", float), ("--p-y", "p_y", float), ("--p-z", "p_z", float),
    ("--p-meas", "p_meas", float),
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypersplit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a built-in fault model")
    g.add_argument("family", choices=sorted(FAMILIES))
    for flag, name, typ in GEN_OPTIONS:
        g.add_argument(flag, dest=name, type=typ, default=None)
    g.add_argument("-o", "--output", required=True)

    s = sub.add_parser("split", help="split a model into a graph-like model")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--method", choices=METHODS, default="decoder")
    s.add_argument("--decoder", choices=sorted(DECODERS), default="mwpm")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--report", help="write the split report JSON here")
    s.add_argument("--strict", action="store_true",
                   help="fail with exit code 3 if any fault cannot be split")

    d = sub.add_parser("decode", help="decode one syndrome on a split model")
    d.add_argument("-i", "--input", required=True)
    d.add_argument("--split", required=True)
    d.add_argument("--syndrome", required=True, help='checks, e.g. "D1 D4"')
    d.add_argument("--decoder", choices=sorted(DECODERS), default="mwpm")
    d.add_argument("--json", action="store_true")

    m = sub.add_parser("sample", help="Monte-Carlo logical failure rate")
    m.add_argument("-i", "--input", required=True)
    m.add_argument("--report", required=True)
    m.add_argument("--decoder", choices=sorted(DECODERS), default="mwpm")
    m.add_argument("--shots", type=int, default=10000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=None,
                   help="process count (default from HYPERSPLIT_WORKERS; 0 = all CPUs)")
    m.add_argument("--json", action="store_true")

    t = sub.add_parser("distance", help="exhaustive model distance")
    t.add_argument("-i", "--input", required=True)
    t.add_argument("--max-weight", type=int, required=True)
    t.add_argument("--json", action="store_true")

    e = sub.add_parser("effective-distance", help="minimum failing weight of a split decoder")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("--report", required=True)
    e.add_argument("--decoder", choices=sorted(DECODERS), default="mwpm")
    e.add_argument("--max-weight", type=int, required=True)
    e.add_argument("--distance-max-weight", type=int, default=None,
                   help="bound for the model-distance search (default 2 * max-weight)")
    e.add_argument("--json", action="store_true")
    return p


def _emit(doc: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    width = max(len(k) for k in doc)
    for k in sorted(doc):
        out.write(f"{k:<{width}}  {doc[k]}\n")


def _load_report(path: str) -> SplitReport:
    text = Path(path).read_text()
    doc = json.loads(text)
    rel = doc.get("split_model_path")
    if not rel:
        raise HypersplitError(f"{path}: report does not name its split model")
    model_path = Path(path).parent / rel
    return SplitReport.from_json(text, load_model(model_path))


def _parse_syndrome(text: str) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        body = tok[1:] if tok[:1] in "Dd" else tok
        if not body.isdigit():
            raise UsageError(f"bad syndrome token {tok!r}")
        out.append(int(body))
    return out


def _cmd_gen(args, out) -> int:
    params = {name: getattr(args, name) for _, name, _ in GEN_OPTIONS
              if getattr(args, name) is not None}
    model = GeneratorSpec(args.family, params).build()
    save_model(model, args.output)
    out.write(f"wrote {args.output}: {model.check_count} checks, {len(model)} faults\n")
    return EXIT_OK


def _cmd_split(args, out) -> int:
    model = load_model(args.input)
    try:
        report = split(model, args.method, args.decoder, strict=args.strict)
    except UnsplittableFaultError as exc:
        sys.stderr.write(f"hypersplit: {exc}\n")
        return EXIT_UNSPLITTABLE
    save_model(report.split_model, args.output)
    if args.report:
        rel = os.path.relpath(Path(args.output).resolve(), Path(args.report).resolve().parent)
        Path(args.report).write_text(report.to_json(rel) + "\n")
    out.write(f"split {len(model)} faults into {len(report.split_model)} graph-like "
              f"faults; {len(report.unsplittable)} unsplittable, "
              f"{len(report.warnings)} warnings\n")
    return EXIT_OK


def _cmd_decode(args, out) -> int:
    model = load_model(args.input)
    split_model = load_model(args.split)
    if split_model.check_count != model.check_count:
        raise HypersplitError("model and split model disagree on the number of checks")
    graph = DecodingGraph(split_model)
    result = get_decoder(args.decoder)(graph, _parse_syndrome(args.syndrome))
    doc = {
        "correction": sorted(result.correction),
        "predicted_observables": sorted(result.predicted_observables),
        "augmented_syndrome": list(result.augmented_syndrome),
    }
    if args.json:
        _emit(doc, True, out)
    else:
        out.write("correction: " + " ".join(f"f{i}" for i in doc["correction"]) + "\n")
        out.write("predicted observables: "
                  + " ".join(f"L{i}" for i in doc["predicted_observables"]) + "\n")
    return EXIT_OK


def _cmd_sample(args, out) -> int:
    model = load_model(args.input)
    report = _load_report(args.report)
    stats = sample(model, report, args.decoder, args.shots, args.seed, args.workers)
    _emit(stats.to_dict(include_time=not args.json), args.json, out)
    return EXIT_OK


def _cmd_distance(args, out) -> int:
    model = load_model(args.input)
    rep = model_distance(model, args.max_weight)
    doc = {k: v for k, v in rep.to_dict().items()
           if k in ("model_distance", "model_distance_status", "model_witness",
                    "distance_max_weight")}
    _emit(doc, args.json, out)
    return EXIT_OK


def _cmd_effective(args, out) -> int:
    model = load_model(args.input)
    report = _load_report(args.report)
    bound = args.distance_max_weight or 2 * args.max_weight
    dist = model_distance(model, bound)
    rep = effective_distance(model, report, args.decoder, args.max_weight, distance=dist)
    _emit(rep.to_dict(), args.json, out)
    return EXIT_OK


COMMANDS = {
    "gen": _cmd_gen, "split": _cmd_split, "decode": _cmd_decode, "sample": _cmd_sample,
    "distance": _cmd_distance, "effective-distance": _cmd_effective,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"hypersplit: {exc}\n")
        return EXIT_USAGE
    except UnsplittableFaultError as exc:
        sys.stderr.write(f"hypersplit: {exc}\n")
        return EXIT_UNSPLITTABLE
    except (HypersplitError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"hypersplit: {exc}\n")
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: generate datasets, infer intents, evaluate, sweep k."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from anime.config import load_feature, save_feature
from anime.datasets import (AccessControlSpec, FatTreeSpec, IspSpec, gen_access_control,
                            gen_fattree, gen_isp, observe_subset)
from anime.errors import AnimeError
from anime.features import FeatureType, TupleFeature
from anime.hre import HreFeature
from anime.inference import InferenceConfig, infer, infer_many
from anime.metrics import evaluate

log = logging.getLogger("anime")

SWEEP_COLUMNS = ["k", "seed", "tp", "fn", "fp", "fp_exact", "precision", "recall",
                 "f_score", "runtime_ms"]


class CliError(Exception):
    """Bad invocation or unreadable input; exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


# -- file formats --------------------------------------------------------------


def format_record(feature: FeatureType, label):
    """Path record: tuples keyed by component, HRE paths as label lists."""
    if isinstance(feature, TupleFeature):
        return feature.format_record(label)
    if isinstance(feature, HreFeature):
        return [feature.base.format(t) for t in feature.tokens(label)]
    return feature.format(label)


def write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def read_jsonl(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CliError(f"{path}:{lineno}: {exc}") from None
    return out


def read_paths(path, feature: FeatureType) -> list:
    return [feature.check_path(feature.parse(rec)) for rec in read_jsonl(path)]


def read_intents(path, feature: FeatureType) -> list:
    out = []
    for rec in read_jsonl(path):
        if isinstance(rec, dict) and "intent" in rec:
            rec = rec["intent"]
        out.append(feature.check(feature.parse(rec)))
    return out


# -- commands -----------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.kind == "access-control":
        ds = gen_access_control(AccessControlSpec(
            n=args.n, g=args.g, min_size=args.min, max_size=args.max, m=args.m,
            seed=args.seed))
    elif args.kind == "isp":
        ds = gen_isp(IspSpec(nodes=args.nodes, egresses=args.egresses,
                             destinations=args.destinations, seed=args.seed))
    else:
        ds = gen_fattree(FatTreeSpec(
            c=args.c, f=args.f, p=args.p, l=args.l, r=args.r, s=args.s, g=args.g,
            i=args.i, d=args.d, seed=args.seed, rack_labels=not args.no_rack_labels,
            self_pairs=args.self_pairs))
    if args.observe < 1.0:
        ds = observe_subset(ds, args.observe, args.seed)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    f = ds.feature
    write_jsonl(out / "paths.jsonl", (format_record(f, p) for p in ds.observed))
    write_jsonl(out / "possible.jsonl", (format_record(f, p) for p in ds.possible))
    save_feature(f, out / "feature.json")
    (out / "truth.json").write_text(
        json.dumps([f.format(t) for t in ds.truth], indent=2) + "\n", encoding="utf-8")
    if ds.flat_feature is not None:
        save_feature(ds.flat_feature, out / "feature_flat.json")
    print(f"{len(ds.observed)} observed, {len(ds.possible)} possible paths -> {out}")
    return 0


def cmd_infer(args) -> int:
    feature = load_feature(args.feature)
    paths = read_paths(args.paths, feature)
    res = infer(paths, feature, InferenceConfig(k=args.k, b=args.b, seed=args.seed),
                trace=args.trace)
    sizes = [0] * len(res.intents)
    for a in res.assignments:
        sizes[a] += 1
    records = [{"intent": feature.format(i), "members": n, "cost": feature.cost(i)}
               for i, n in zip(res.intents, sizes)]
    if args.out:
        write_jsonl(args.out, records)
    else:
        for rec in records:
            print(json.dumps(rec))
    if args.trace:
        for step in res.trace:
            print(step.format(feature), file=sys.stderr)
    log.info("%d intents, total cost %g, %.1f ms", len(res.intents), res.total_cost,
             res.runtime_ms)
    return 0


def cmd_eval(args) -> int:
    feature = load_feature(args.feature)
    intents = read_intents(args.intents, feature)
    reference = read_paths(args.reference, feature)
    report = evaluate(intents, reference, feature)
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(feature), indent=2) + "\n",
                                  encoding="utf-8")
    print(report.summary())
    return 0


def cmd_sweep(args) -> int:
    if args.k_min > args.k_max or args.k_min < 1 or args.k_step < 1:
        raise CliError("need 1 <= k-min <= k-max and a positive k-step")
    feature = load_feature(args.feature)
    paths = read_paths(args.paths, feature)
    reference = read_paths(args.reference, feature)
    ks = list(range(args.k_min, args.k_max + 1, args.k_step))
    rows = []
    for seed in args.seeds:
        results = infer_many(paths, feature, InferenceConfig(k=ks[0], b=args.b, seed=seed), ks)
        for k in ks:
            rep = evaluate(results[k].intents, reference, feature)
            rows.append([k, seed, rep.tp, rep.fn_, rep.fp, rep.fp_exact,
                         f"{rep.precision:.6f}", f"{rep.recall:.6f}", f"{rep.f_score:.6f}",
                         f"{results[k].runtime_ms:.3f}"])
    rows.sort(key=lambda r: (r[0], r[1]))
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(SWEEP_COLUMNS)
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# -- argument parsing -----------------------------------------------------------


def _batch(text: str):
    if text.lower() in ("none", "all", "inf", "0"):
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid batch size {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anime", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a synthetic dataset")
    kinds = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, required=True)
    common.add_argument("--out-dir", required=True)
    common.add_argument("--observe", type=float, default=1.0,
                        help="keep this share of the observed paths")

    ac = kinds.add_parser("access-control", parents=[common])
    ac.add_argument("--n", type=int, default=100)
    ac.add_argument("--g", type=int, default=5)
    ac.add_argument("--min", type=int, default=5)
    ac.add_argument("--max", type=int, default=30)
    ac.add_argument("--m", type=int, default=10)

    isp = kinds.add_parser("isp", parents=[common])
    isp.add_argument("--nodes", type=int, default=25)
    isp.add_argument("--egresses", type=int, default=5)
    isp.add_argument("--destinations", type=int, default=100)

    ft = kinds.add_parser("fattree", parents=[common])
    for flag, default in (("c", 2), ("f", 2), ("p", 2), ("l", 2), ("r", 1), ("s", 2),
                          ("g", 2), ("i", 2), ("d", 8)):
        ft.add_argument(f"--{flag}", type=int, default=default)
    ft.add_argument("--no-rack-labels", action="store_true")
    ft.add_argument("--self-pairs", action="store_true")
    gen.set_defaults(func=cmd_generate)

    inf = sub.add_parser("infer", help="infer at most k intents from a path file")
    inf.add_argument("--paths", required=True)
    inf.add_argument("--feature", required=True)
    inf.add_argument("--k", type=int, required=True)
    inf.add_argument("--b", type=_batch, default=None, help="batch size (default: all)")
    inf.add_argument("--seed", type=int, required=True)
    inf.add_argument("--trace", action="store_true", help="print merge steps to stderr")
    inf.add_argument("--out")
    inf.set_defaults(func=cmd_infer)

    ev = sub.add_parser("eval", help="precision and recall of an intent file")
    ev.add_argument("--intents", required=True)
    ev.add_argument("--reference", required=True)
    ev.add_argument("--feature", required=True)
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    sw = sub.add_parser("sweep", help="evaluate a range of k over several seeds")
    sw.add_argument("--paths", required=True)
    sw.add_argument("--reference", required=True)
    sw.add_argument("--feature", required=True)
    sw.add_argument("--k-min", type=int, required=True)
    sw.add_argument("--k-max", type=int, required=True)
    sw.add_argument("--k-step", type=int, default=1)
    sw.add_argument("--b", type=_batch, default=None)
    sw.add_argument("--seeds", type=int, nargs="+", required=True)
    sw.add_argument("--csv")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return args.func(args)
    except (CliError, AnimeError, OSError) as exc:
        print(f"anime: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except Exception as exc:  # an invariant broke somewhere
        log.exception("internal error")
        print(f"anime: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line orchestration of the pipeline, one subcommand per stage.

    augscope augment  --in m.jsonl --technique hflip --out DIR
    augscope extract  --in m.jsonl --backend reference --out feats.augf
    augscope compare  --a real.augf --b syn.augf --mode cross --stats s.csv
    augscope plan     --real m.jsonl --pool aug.jsonl --seed 7 --out DIR
    augscope report   --stats s.csv --reference table2

Exit codes: 0 success, 1 runtime error (single machine-parsable line on
stderr), 2 usage error. AUGSCOPE_SEED overrides --seed when set.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import features, images, manifest, planner, report, similarity, store
from .errors import AugscopeError


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "compare":
        if args.mode == "within" and args.b is not None:
            parser.error("within mode compares --a with itself; drop --b")
        if args.mode == "cross" and args.b is None:
            parser.error("cross mode needs --b")
    try:
        return args.handler(args)
    except AugscopeError as exc:
        _fail(exc)
        return 1
    except ValueError as exc:
        _fail(exc)
        return 1


def _fail(exc: Exception) -> None:
    message = " ".join(str(exc).split())
    print(f"error: {type(exc).__name__}: {message}", file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="augscope",
                                     description="dataset similarity and augmentation planning")
    sub = parser.add_subparsers(dest="command", required=True)

    p_aug = sub.add_parser("augment", help="apply one transform to every manifest image")
    p_aug.add_argument("--in", dest="manifest_in", required=True)
    p_aug.add_argument("--technique", required=True, choices=images.TECHNIQUE_KINDS)
    p_aug.add_argument("--factor", type=float, default=1.5,
                       help="contrast stretch factor (contrast technique only)")
    p_aug.add_argument("--out", required=True, help="directory for transformed PNGs")
    p_aug.add_argument("--manifest-out", default=None,
                       help="output manifest path (default OUT/manifest.jsonl)")
    p_aug.set_defaults(handler=_cmd_augment)

    p_ext = sub.add_parser("extract", help="embed every manifest image into a feature store")
    p_ext.add_argument("--in", dest="manifest_in", required=True)
    p_ext.add_argument("--backend", default="reference",
                       help="'reference' or 'neural:<model.onnx>'")
    p_ext.add_argument("--means", default=None,
                       help="preprocessing channel means as R,G,B (neural backend)")
    p_ext.add_argument("--out", required=True, help="feature store file (.augf)")
    p_ext.set_defaults(handler=_cmd_extract)

    p_cmp = sub.add_parser("compare", help="score image pairs and summarize the distribution")
    p_cmp.add_argument("--a", required=True, help="feature store A")
    p_cmp.add_argument("--b", default=None, help="feature store B (cross mode)")
    p_cmp.add_argument("--mode", required=True, choices=("within", "cross"))
    p_cmp.add_argument("--bins", type=int, default=20)
    p_cmp.add_argument("--range", dest="value_range", default="-1,1",
                       help="histogram range as LO,HI")
    p_cmp.add_argument("--name", default=None, help="comparison name for the output rows")
    p_cmp.add_argument("--stats", required=True, help="output stats CSV")
    p_cmp.add_argument("--hist", default=None, help="output histogram JSON")
    p_cmp.set_defaults(handler=_cmd_compare)

    p_plan = sub.add_parser("plan", help="build seeded split + injection schedule manifests")
    p_plan.add_argument("--real", required=True, help="manifest of real images")
    p_plan.add_argument("--pool", required=True, help="manifest of augmented/synthetic records")
    p_plan.add_argument("--train-count", type=int, default=458)
    p_plan.add_argument("--test-count", type=int, default=200)
    p_plan.add_argument("--proportions", default="10,25,50,75",
                        help="percent levels, e.g. 10,25,50,75")
    p_plan.add_argument("--test-mode", default="real",
                        help="'real' or 'mixed:<real_count>,<synthetic_count>'")
    p_plan.add_argument("--seed", type=int, default=0)
    p_plan.add_argument("--out", required=True, help="output directory")
    p_plan.set_defaults(handler=_cmd_plan)

    p_rep = sub.add_parser("report", help="compare computed stats against a reference table")
    p_rep.add_argument("--stats", required=True, help="stats CSV produced by compare")
    p_rep.add_argument("--reference", required=True, choices=report.REFERENCE_TABLE_NAMES)
    p_rep.add_argument("--tol-mean", type=float, default=0.01)
    p_rep.add_argument("--tol-sd", type=float, default=0.01)
    p_rep.add_argument("--tol-skew", type=float, default=0.05)
    p_rep.set_defaults(handler=_cmd_report)

    return parser


def _cmd_augment(args) -> int:
    m = manifest.read_manifest(args.manifest_in)
    factor = args.factor if args.technique == "contrast" else None
    technique = images.AugmentationTechnique(kind=args.technique, contrast_factor=factor)
    out = images.augment_manifest(m, technique, args.out)
    manifest_out = Path(args.manifest_out) if args.manifest_out else Path(args.out) / "manifest.jsonl"
    manifest.write_manifest(out, manifest_out)
    print(f"augmented {len(out)} images -> {args.out} (manifest: {manifest_out})")
    return 0


def _cmd_extract(args) -> int:
    m = manifest.read_manifest(args.manifest_in)
    means = features.DEFAULT_CHANNEL_MEANS
    if args.means is not None:
        parts = [float(v) for v in args.means.split(",")]
        if len(parts) != 3:
            raise ValueError(f"--means needs three values, got {args.means!r}")
        means = tuple(parts)
    backend = features.make_backend(args.backend, means=means)
    vectors = [features.extract(backend, images.load_image(rec.path), rec.id) for rec in m]
    store.write_feature_store(vectors, m.labels(), args.out)
    print(f"extracted {len(vectors)} vectors ({backend.kind} backend) -> {args.out}")
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--range needs LO,HI, got {text!r}")
    return float(parts[0]), float(parts[1])


def _cmd_compare(args) -> int:
    store_a = store.read_feature_store(args.a)
    if args.mode == "within":
        pairs = similarity.enumerate_pairs("within", store_a.labeled_ids())
        combined = store_a
        default_name = Path(args.a).stem
    else:
        store_b = store.read_feature_store(args.b)
        pairs = similarity.enumerate_pairs("cross", store_a.labeled_ids(), store_b.labeled_ids())
        combined = _merge_stores(store_a, store_b)
        default_name = f"{Path(args.a).stem}_vs_{Path(args.b).stem}"
    name = args.name or default_name

    scores = similarity.score_pairs(pairs, combined)
    grouped = similarity.scores_by_class(pairs, scores)
    rows = []
    for label in sorted(grouped):
        if len(grouped[label]) >= 3:
            stats = similarity.distribution_stats(grouped[label])
            rows.append(report.StatsRow(args.mode, name, label, stats.sample_size,
                                        stats.mean, stats.sd, stats.skewness))
    pooled = similarity.distribution_stats(scores)
    rows.append(report.StatsRow(args.mode, name, "pooled", pooled.sample_size,
                                pooled.mean, pooled.sd, pooled.skewness))
    report.emit_stats_csv(rows, args.stats)

    if args.hist is not None:
        bins = similarity.histogram(scores, args.bins, _parse_range(args.value_range))
        report.emit_histogram_json(name, bins, args.hist)
        print(f"compared {len(pairs)} pairs -> {args.stats}, {args.hist}")
    else:
        print(f"compared {len(pairs)} pairs -> {args.stats}")
    return 0


def _merge_stores(a: store.FeatureStore, b: store.FeatureStore) -> store.FeatureStore:
    labels = dict(a.labels)
    labels.update(b.labels)
    return store.FeatureStore(vectors=list(a.vectors) + list(b.vectors), labels=labels)


def _parse_test_mode(text: str) -> tuple[str, tuple[int, int] | None]:
    if text == "real":
        return "real", None
    if text.startswith("mixed:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ValueError(f"--test-mode mixed needs mixed:<real>,<synthetic>, got {text!r}")
        return "mixed", (int(parts[0]), int(parts[1]))
    raise ValueError(f"--test-mode must be 'real' or 'mixed:R,S', got {text!r}")


def _cmd_plan(args) -> int:
    seed = args.seed
    env_seed = os.environ.get("AUGSCOPE_SEED")
    if env_seed is not None:
        seed = int(env_seed)

    real = manifest.read_manifest(args.real)
    pool = manifest.read_manifest(args.pool)
    proportions = [float(v) / 100.0 for v in args.proportions.split(",")]
    mode, mixed_counts = _parse_test_mode(args.test_mode)

    plan = planner.build_plan(real, pool, seed, args.train_count, args.test_count,
                              proportions, test_mode=mode, mixed_counts=mixed_counts)
    written = planner.emit_plan(plan, args.out)
    print(f"plan seed={seed}: wrote {len(written)} files to {args.out}")
    return 0


def _cmd_report(args) -> int:
    rows = report.parse_stats_csv(args.stats)
    table = report.load_reference_table(args.reference)
    tolerances = report.Tolerances(mean=args.tol_mean, sd=args.tol_sd, skewness=args.tol_skew)

    pooled = [row for row in rows if row.class_ == "pooled"]
    matched = [row for row in pooled if row.name in table]
    if not matched:
        have = ", ".join(sorted({row.name for row in pooled})) or "(none)"
        raise report.UnknownComparison(
            f"no stats row matches a {args.reference} comparison; stats names: {have}")

    print("name,field,computed,reference,delta,tolerance,status")
    for row in matched:
        stats = similarity.DistributionStats(sample_size=row.sample_size, mean=row.mean,
                                             sd=row.sd, skewness=row.skewness)
        row_report = report.compare_to_reference(stats, table[row.name], tolerances)
        for check in row_report.checks:
            status = "pass" if check.passed else "fail"
            print(f"{row.name},{check.field},{check.computed!r},{check.reference!r},"
                  f"{check.delta!r},{check.tolerance!r},{status}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

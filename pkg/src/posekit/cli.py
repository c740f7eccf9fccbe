"""Command-line pipeline: ingest, synth, augment, featurize, train, eval,
run, and report subcommands.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 training
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import (
    RunConfig,
    SEED_ENV_VAR,
    config_from_dict,
    load_config,
    parse_angles,
    resolve_seed,
)
from .errors import (
    ConfigError,
    EmptyInputError,
    InvalidTrainingSetError,
    ManifestMismatchError,
    MissingJointError,
    MissingPivotError,
    ModelFormatError,
    ParseError,
    PoseKitError,
    SchemaError,
)
from .estimators import ClassifierKind, HyperParams, load_model, save_model, train
from .features import FeatureLayout, export_csv, featurize_all
from .keypoints import (
    ActivityClass,
    class_histogram,
    dump_jsonl,
    load_jsonl,
    resolve_mask,
    select_joints,
)
from .metrics import RunMeta, evaluate
from .reporting import (
    accuracy_grid_svg,
    confusion_svg,
    render_table3,
    render_table4,
    reports_from_json,
    reports_to_csv,
    reports_to_json,
    sha256_file,
    table4_csv,
    write_manifest,
)
from .rotation import PivotPolicy, augment_dataset
from .synth import generate_dataset


class TrainingError(PoseKitError):
    """Wrapper that maps classifier-stage failures to exit code 4."""


def _hp_from_args(args) -> HyperParams:
    fields = {}
    for name in (
        "epochs",
        "learning_rate",
        "l2_lambda",
        "knn_k",
        "rbf_gamma",
        "tree_max_depth",
    ):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if "rbf_gamma" in fields and fields["rbf_gamma"] != "scale":
        fields["rbf_gamma"] = float(fields["rbf_gamma"])
    try:
        return HyperParams(**fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _add_hyperparam_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--learning-rate", dest="learning_rate", type=float)
    parser.add_argument("--l2-lambda", dest="l2_lambda", type=float)
    parser.add_argument("--knn-k", dest="knn_k", type=int)
    parser.add_argument("--rbf-gamma", dest="rbf_gamma")
    parser.add_argument("--tree-max-depth", dest="tree_max_depth", type=int)


def _parse_standardize(text: str | None) -> bool | None:
    if text is None or text == "auto":
        return None
    if text in ("true", "1", "yes"):
        return True
    if text in ("false", "0", "no"):
        return False
    raise ConfigError("--standardize must be auto, true, or false")


def cmd_ingest(args) -> int:
    seqs = load_jsonl(args.input)
    histogram = {c.key: n for c, n in class_histogram(seqs).items()}
    summary = {
        "sequences": len(seqs),
        "frames": sum(s.frame_count for s in seqs),
        "labels": histogram,
        "joints": sorted({j.key for s in seqs for j in s.joints}),
    }
    if args.canonical_out:
        dump_jsonl(seqs, args.canonical_out)
        summary["canonical_out"] = str(args.canonical_out)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_synth(args) -> int:
    if args.classes == "all":
        per_class = args.per_class
    else:
        wanted = {c.strip() for c in args.classes.split(",")}
        unknown = wanted - {c.key for c in ActivityClass}
        if unknown:
            raise ConfigError(f"unknown classes: {sorted(unknown)}")
        per_class = args.per_class
    yaws = [float(v) for v in args.yaws.split(",")] if args.yaws else [0.0]
    seed = resolve_seed(args.seed, None)
    seqs = generate_dataset(
        per_class=per_class,
        yaws=yaws,
        frames=args.frames,
        noise_std=args.noise_std,
        seed=seed,
    )
    if args.classes != "all":
        seqs = [s for s in seqs if s.label is not None and s.label.key in wanted]
    dump_jsonl(seqs, args.out)
    print(f"wrote {len(seqs)} sequences to {args.out}")
    return 0


def cmd_augment(args) -> int:
    seqs = load_jsonl(args.input)
    angles = parse_angles(args.angles) if args.angles else None
    out = augment_dataset(seqs, angles, pivot=PivotPolicy(args.pivot))
    dump_jsonl(out, args.out)
    print(f"wrote {len(out)} sequences to {args.out}")
    return 0


def cmd_featurize(args) -> int:
    seqs = load_jsonl(args.input)
    try:
        mask = resolve_mask(args.joints)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    selected = [select_joints(s, mask) for s in seqs]
    layout = FeatureLayout.from_mask(mask, args.frame_count)
    vectors = featurize_all(selected, layout)
    export_csv(vectors, args.out)
    print(f"wrote {len(vectors)} x {layout.dimension} feature matrix to {args.out}")
    return 0


def cmd_train(args) -> int:
    seqs = load_jsonl(args.train)
    try:
        kind = ClassifierKind(args.classifier)
    except ValueError:
        raise ConfigError(f"unknown classifier '{args.classifier}'") from None
    hp = _hp_from_args(args)
    seed = resolve_seed(args.seed, None)
    try:
        mask = resolve_mask(args.joints)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    layout = FeatureLayout.from_mask(mask, args.frame_count)
    selected = [select_joints(s, mask) for s in seqs]
    if args.augment:
        angles = parse_angles(args.angles) if args.angles else None
        selected = augment_dataset(selected, angles, pivot=PivotPolicy(args.pivot))
    vectors = featurize_all(selected, layout)
    try:
        model = train(
            kind,
            vectors,
            hp=hp,
            seed=seed,
            standardize=_parse_standardize(args.standardize),
        )
    except (InvalidTrainingSetError, ValueError) as exc:
        raise TrainingError(str(exc)) from exc
    Path(args.out).write_bytes(save_model(model))
    print(f"wrote {kind.value} model to {args.out}")
    return 0


def cmd_eval(args) -> int:
    model = load_model(Path(args.model).read_bytes())
    seqs = load_jsonl(args.test)
    selected = [select_joints(s, set(model.layout.joints)) for s in seqs]
    vectors = featurize_all(selected, model.layout)
    meta = RunMeta(
        kind=model.kind.value,
        augmented=args.augmented_label,
        mask=args.mask_label,
        seed=model.seed,
    )
    try:
        report = evaluate(model, vectors, run_meta=meta)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(reports_to_json([report]), "utf-8")
    (out_dir / "report.csv").write_text(reports_to_csv([report]), "utf-8")
    (out_dir / "report.txt").write_text(render_table3([report]), "utf-8")
    (out_dir / f"confusion_{model.kind.value}.svg").write_text(
        confusion_svg(report.matrix), "utf-8"
    )
    print(f"accuracy {report.accuracy:.4f}; artifacts in {out_dir}")
    return 0


def _regimes(config: RunConfig) -> tuple[bool, ...]:
    if config.augment == "both":
        return (False, True)
    return (bool(config.augment),)


def cmd_run(args) -> int:
    augment_override = None
    if args.augment is not None:
        augment_override = {"true": True, "false": False, "both": "both"}[args.augment]
    standardize_override = None
    if args.standardize is not None:
        standardize_override = {"auto": "auto", "true": True, "false": False}.get(
            args.standardize
        )
        if standardize_override is None:
            raise ConfigError("--standardize must be auto, true, or false")
    overrides = {
        "output_dir": args.output_dir,
        "seed": args.seed,
        "augment": augment_override,
        "joints": args.joints,
        "frame_count": args.frame_count,
        "standardize": standardize_override,
    }
    if args.angles:
        overrides["angles"] = args.angles
    if args.classifiers:
        overrides["classifiers"] = args.classifiers.split(",")
    config = load_config(args.config, overrides)

    train_seqs = load_jsonl(config.train_path)
    test_seqs = load_jsonl(config.test_path)

    out_dir = config.output_dir
    (out_dir / "models").mkdir(parents=True, exist_ok=True)
    (out_dir / "reports").mkdir(parents=True, exist_ok=True)
    artifacts: list[Path] = []

    effective = out_dir / "effective_config.json"
    effective.write_text(
        json.dumps(config.to_dict(), sort_keys=True, indent=2) + "\n", "utf-8"
    )
    artifacts.append(effective)

    train_sel = [select_joints(s, config.joints) for s in train_seqs]
    test_sel = [select_joints(s, config.joints) for s in test_seqs]
    layout = FeatureLayout.from_mask(config.joints, config.frame_count)
    test_vecs = featurize_all(test_sel, layout)

    reports = []
    train_sizes: dict[str, int] = {}
    for augmented in _regimes(config):
        regime_seqs = (
            augment_dataset(train_sel, config.angles, pivot=config.pivot)
            if augmented
            else train_sel
        )
        train_vecs = featurize_all(regime_seqs, layout)
        train_sizes["augmented" if augmented else "baseline"] = len(train_vecs)
        for kind in config.classifiers:
            try:
                model = train(
                    kind,
                    train_vecs,
                    hp=config.hyperparams,
                    seed=config.seed,
                    standardize=config.standardize,
                )
            except (InvalidTrainingSetError, ValueError) as exc:
                raise TrainingError(f"{kind.value}: {exc}") from exc
            meta = RunMeta(
                kind=kind.value,
                augmented=augmented,
                mask=config.mask_name,
                seed=config.seed,
            )
            report = evaluate(model, test_vecs, run_meta=meta)
            reports.append(report)
            suffix = "aug" if augmented else "noaug"
            model_path = out_dir / "models" / f"{kind.value}_{suffix}.json"
            model_path.write_bytes(save_model(model))
            artifacts.append(model_path)
            svg_path = out_dir / "reports" / f"confusion_{kind.value}_{suffix}.svg"
            svg_path.write_text(confusion_svg(report.matrix), "utf-8")
            artifacts.append(svg_path)

    report_json = out_dir / "reports" / "report.json"
    report_json.write_text(reports_to_json(reports), "utf-8")
    report_csv = out_dir / "reports" / "report.csv"
    report_csv.write_text(reports_to_csv(reports), "utf-8")
    report_txt = out_dir / "reports" / "report.txt"
    report_txt.write_text(render_table3(reports), "utf-8")
    artifacts.extend([report_json, report_csv, report_txt])

    write_manifest(
        out_dir,
        config=config.to_dict(),
        seed=config.seed,
        train_size=train_sizes,
        test_hash=sha256_file(config.test_path),
        artifacts=artifacts,
    )
    print(f"{len(reports)} report rows; artifacts in {out_dir}")
    return 0


def cmd_report(args) -> int:
    runs = []
    test_hash = None
    for run_dir in args.runs:
        run_dir = Path(run_dir)
        manifest_path = run_dir / "manifest.json"
        if not manifest_path.is_file():
            raise SchemaError(f"no manifest.json in {run_dir}")
        manifest = json.loads(manifest_path.read_text("utf-8"))
        if test_hash is None:
            test_hash = manifest["test_hash"]
        elif manifest["test_hash"] != test_hash:
            raise ManifestMismatchError(
                f"{run_dir} was evaluated on a different test set; refusing to merge"
            )
        report_path = run_dir / "reports" / "report.json"
        if not report_path.is_file():
            raise SchemaError(f"no reports/report.json in {run_dir}")
        runs.extend(reports_from_json(report_path.read_text("utf-8")))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    masks = sorted({r.run_meta.mask for r in runs if r.run_meta})
    (out_dir / "table3.txt").write_text(render_table3(runs), "utf-8")
    (out_dir / "table3.csv").write_text(reports_to_csv(runs), "utf-8")
    (out_dir / "table4.txt").write_text(render_table4(runs, masks), "utf-8")
    (out_dir / "table4.csv").write_text(table4_csv(runs, masks), "utf-8")
    (out_dir / "table4.svg").write_text(accuracy_grid_svg(runs, masks), "utf-8")
    print(f"merged {len(runs)} runs into {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posekit",
        description="View-robust exercise classification from pose keypoints",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and summarize a keypoint JSONL file")
    p.add_argument("--input", required=True)
    p.add_argument("--canonical-out", dest="canonical_out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate synthetic keypoint sequences")
    p.add_argument("--out", required=True)
    p.add_argument("--classes", default="all")
    p.add_argument("--per-class", dest="per_class", type=int, default=1)
    p.add_argument("--yaws", default="0")
    p.add_argument("--frames", type=int, default=120)
    p.add_argument("--noise-std", dest="noise_std", type=float, default=0.01)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("augment", help="apply the rotation sweep to a JSONL file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--angles", help="e.g. -180..179, -45..45:5, or 0,90,180")
    p.add_argument(
        "--pivot",
        choices=[p.value for p in PivotPolicy],
        default=PivotPolicy.HIP_MIDPOINT.value,
    )
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("featurize", help="flatten sequences into a CSV matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--joints", default="all12")
    p.add_argument("--frame-count", dest="frame_count", type=int, default=50)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="train one classifier")
    p.add_argument("--train", required=True)
    p.add_argument(
        "--classifier", required=True, choices=[k.value for k in ClassifierKind]
    )
    p.add_argument("--out", required=True)
    p.add_argument("--augment", action="store_true")
    p.add_argument("--angles")
    p.add_argument(
        "--pivot",
        choices=[p.value for p in PivotPolicy],
        default=PivotPolicy.HIP_MIDPOINT.value,
    )
    p.add_argument("--joints", default="all12")
    p.add_argument("--frame-count", dest="frame_count", type=int, default=50)
    p.add_argument("--seed", type=int)
    p.add_argument("--standardize", default="auto")
    _add_hyperparam_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model on a test file")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--augmented-label", dest="augmented_label", action="store_true",
                   help="tag the report as coming from an augmented model")
    p.add_argument("--mask-label", dest="mask_label", default="all12")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="full pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--augment",
        choices=["true", "false", "both"],
        default=None,
        help="override the config's augment field",
    )
    p.add_argument("--angles")
    p.add_argument("--classifiers", help="comma-separated classifier kinds")
    p.add_argument("--joints")
    p.add_argument("--frame-count", dest="frame_count", type=int)
    p.add_argument("--standardize")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="merge run directories into tables")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TrainingError as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return 4
    except InvalidTrainingSetError as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return 4
    except (
        ParseError,
        SchemaError,
        EmptyInputError,
        MissingJointError,
        MissingPivotError,
        ModelFormatError,
        ManifestMismatchError,
    ) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

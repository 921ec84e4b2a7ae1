"""Command-line pipeline: ingest, train, classify, evaluate, sweep, generate.

Every command takes a JSON run config; flags override config values and the
effective config is snapshotted into the output directory so runs can be
reproduced exactly.

Exit codes: 0 success, 1 data or config error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import datagen
from .calibration import CalibrationError, calibrate
from .core import ElectreModel, ModelError
from .evaluation import EvaluationError, evaluate, lambda_sweep, split
from .fellegi_sunter import FsError, fit_fs
from .ingest import IngestError, LinkageSchema, census_schema, load_table, true_links
from .linkage import build_pairs, classify_pairs, label_pairs, write_classified

USAGE_ERRORS = (
    IngestError,
    CalibrationError,
    ModelError,
    FsError,
    EvaluationError,
    ValueError,
    OSError,
)

DEFAULT_CONFIG = {
    "dataset_a": "",
    "dataset_b": "",
    "schema": "census",
    "label_policy": "two_class",
    "weights": None,
    "calibration": {
        "epsilon": 0.01,
        "q_fraction": 0.05,
        "p_fraction": 0.15,
        "grid_step": 0.05,
        "procedure": "pessimistic",
    },
    "split": {"train_fraction": 0.5, "seed": 0},
    "output_dir": "runs/out",
}


def load_config(args) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            user = json.load(fh)
        for key, value in user.items():
            if isinstance(value, dict) and isinstance(cfg.get(key), dict):
                cfg[key].update(value)
            else:
                cfg[key] = value
    for key in ("dataset_a", "dataset_b", "output_dir", "label_policy"):
        flag = getattr(args, key, None)
        if flag:
            cfg[key] = flag
    if getattr(args, "seed", None) is not None:
        cfg["split"]["seed"] = args.seed
    if getattr(args, "train_fraction", None) is not None:
        cfg["split"]["train_fraction"] = args.train_fraction
    return cfg


def get_schema(cfg) -> LinkageSchema:
    spec = cfg.get("schema", "census")
    if spec == "census":
        return census_schema()
    if isinstance(spec, str):
        with open(spec, encoding="utf-8") as fh:
            spec = json.load(fh)
    return LinkageSchema.from_dict(spec)


def outdir(cfg) -> Path:
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    snapshot = out / "run_config.json"
    snapshot.write_text(json.dumps(cfg, indent=2), encoding="utf-8")
    return out


def _load_both(cfg, schema):
    table_a, report_a = load_table(cfg["dataset_a"], schema, "A")
    table_b, report_b = load_table(cfg["dataset_b"], schema, "B")
    return table_a, table_b, report_a, report_b


def _labeled_pairs(cfg, schema, table_a, table_b):
    links = true_links(table_a, table_b)
    pairs = build_pairs(table_a, table_b, schema)
    policy = cfg["label_policy"]
    if policy == "banded":
        # the band needs a fitted baseline, which itself needs two-class labels
        base = list(label_pairs(build_pairs(table_a, table_b, schema), links, "two_class"))
        fs = fit_fs(base)
        return list(label_pairs(pairs, links, "banded", fs_model=fs)), links
    return list(label_pairs(pairs, links, policy)), links


def cmd_ingest(args) -> int:
    cfg = load_config(args)
    schema = get_schema(cfg)
    out = outdir(cfg)
    _, _, report_a, report_b = _load_both(cfg, schema)
    lines = report_a.lines() + report_b.lines()
    (out / "ingest_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return 0


def cmd_train(args) -> int:
    cfg = load_config(args)
    schema = get_schema(cfg)
    out = outdir(cfg)
    table_a, table_b, *_ = _load_both(cfg, schema)
    labeled, _ = _labeled_pairs(cfg, schema, table_a, table_b)
    cal = cfg["calibration"]
    train, _ = split(labeled, cfg["split"]["train_fraction"], cfg["split"]["seed"])
    model, solution, curve = calibrate(
        train,
        weights=cfg.get("weights"),
        epsilon=cal["epsilon"],
        q_fraction=cal["q_fraction"],
        p_fraction=cal["p_fraction"],
        grid_step=cal["grid_step"],
        procedure=cal["procedure"],
        criterion_names=schema.field_names,
    )
    fs = fit_fs(train_pairs(train))
    (out / "electre_model.json").write_text(model.to_json(), encoding="utf-8")
    (out / "fs_model.json").write_text(fs.to_json(), encoding="utf-8")
    lines = [
        f"training pairs: {len(train.alternatives)}",
        f"LP objective: {solution.objective!r}",
        "profiles (one row per boundary, columns follow the schema fields):",
    ]
    for row in model.profiles.values:
        lines.append("  " + "  ".join(f"{v:.6f}" for v in row))
    lines.append(f"chosen lambda: {model.cutting_level}")
    lines.append("lambda grid accuracy:")
    for lam, acc in curve:
        lines.append(f"  {lam:.2f}  {acc:.6f}")
    (out / "calibration_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines[:6]))
    print(f"models written to {out}")
    return 0


def train_pairs(train):
    """TrainingSet back to labeled ComparisonVectors for the baseline fit."""
    from .linkage import ComparisonVector

    return [
        ComparisonVector(alt.id, alt.performances, cat)
        for alt, cat in train.alternatives
    ]


def cmd_classify(args) -> int:
    cfg = load_config(args)
    schema = get_schema(cfg)
    out = outdir(cfg)
    model = ElectreModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    table_a, table_b, *_ = _load_both(cfg, schema)
    labeled, _ = _labeled_pairs(cfg, schema, table_a, table_b)
    procedure = cfg["calibration"]["procedure"]
    ids, cats, sigma, truth = classify_pairs(labeled, model, procedure)
    from .linkage import pair_matrix

    _, X, _ = pair_matrix(labeled)
    dest = out / "classified.csv"
    write_classified(dest, ids, X, cats, sigma, truth, schema.field_names)
    print(f"{len(ids)} pairs classified -> {dest}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = load_config(args)
    out = outdir(cfg)
    predicted, truth = [], []
    with open(args.classified, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if not row.get("truth"):
                raise EvaluationError("classified file has pairs without truth labels")
            predicted.append(int(row["assigned"].lstrip("C")))
            truth.append(int(row["truth"].lstrip("C")))
    report = evaluate(predicted, truth)
    text = "\n".join(report.lines()) + "\n"
    (out / "eval_report.txt").write_text(text, encoding="utf-8")
    (out / "eval_report.json").write_text(
        json.dumps(report.to_dict(), indent=2), encoding="utf-8"
    )
    print(text, end="")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    schema = get_schema(cfg)
    out = outdir(cfg)
    model = ElectreModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    grid = [float(x) for x in args.grid.split(",")]
    table_a, table_b, *_ = _load_both(cfg, schema)
    labeled, _ = _labeled_pairs(cfg, schema, table_a, table_b)
    _, test = split(labeled, cfg["split"]["train_fraction"], cfg["split"]["seed"])
    procedure = cfg["calibration"]["procedure"]
    reports = lambda_sweep(test, model, grid, procedure)
    lines = ["lambda  accuracy  missed_links  false_links"]
    for rep in reports:
        lines.append(
            f"{rep.cutting_level:.2f}    {rep.accuracy:.6f}  "
            f"{rep.missed_links:<12d}  {rep.false_links}"
        )
    (out / "sweep.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "accuracy"])
        for rep in reports:
            writer.writerow([rep.cutting_level, rep.accuracy])
    print("\n".join(lines))
    return 0


def cmd_generate(args) -> int:
    datagen.generate_pair_files(
        args.out_a,
        args.out_b,
        n_a=args.n_a,
        n_b=args.n_b,
        n_links=args.links,
        seed=args.seed if args.seed is not None else 0,
        typo_rate=args.typo_rate,
    )
    print(f"wrote {args.out_a} and {args.out_b}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="electre-linkage",
        description="Record linkage by Electre Tri ordinal sorting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run config")
        p.add_argument("--dataset-a", dest="dataset_a")
        p.add_argument("--dataset-b", dest="dataset_b")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--label-policy", dest="label_policy",
                       choices=["two_class", "banded"])
        p.add_argument("--seed", type=int)
        p.add_argument("--train-fraction", dest="train_fraction", type=float)

    p = sub.add_parser("ingest", help="load and validate both datasets")
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="calibrate the sorting model and baseline")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify the full cross product")
    common(p)
    p.add_argument("--model", required=True, help="Electre model JSON file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="score a classified-pairs file")
    common(p)
    p.add_argument("--classified", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="accuracy over a lambda grid on the test split")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--grid", default="0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1.0")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("generate", help="write a synthetic dataset pair")
    p.add_argument("--out-a", required=True)
    p.add_argument("--out-b", required=True)
    p.add_argument("--n-a", type=int, default=449)
    p.add_argument("--n-b", type=int, default=392)
    p.add_argument("--links", type=int, default=327)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--typo-rate", type=float, default=0.18)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - invariant violations exit with 2
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

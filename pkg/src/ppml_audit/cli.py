"""Command-line interface.

Subcommands: analyze, modify, train, attack, report, experiment. Usage
errors exit with status 2 (argparse), runtime failures with status 1.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from .data.container import MAGIC, load_dataset, save_dataset, save_params
from .data.idx import TRAIN_IMAGES, load_idx
from .data.imagedir import load_image_dir
from .data.preprocess import preprocess
from .data.synth import SynthSpec, synth_generate
from .dp.training import PrivacyBudget, TrainConfig, train
from .errors import FormatError, PpmlAuditError
from .experiment.config import load_config, worker_count
from .experiment.reports import (REPORT_COLUMNS, read_report_csv,
                                 write_json_report, write_report_csv)
from .experiment.runner import (apply_modifications, compute_characteristics,
                                run_experiment)
from .attack.round_robin import dump_scores_csv, round_robin_attack
from .attack.shadows import train_shadows
from .metrics.utility import evaluate_utility
from .nn.config import ModelConfig
from .rng import DEFAULT_SEED


def load_input_dataset(path: str, seed: int):
    """Dispatch on the input kind: canonical container file, IDX directory,
    directory of class-named image folders, or a JSON synth spec."""
    p = Path(path)
    if p.is_dir():
        if any(p.glob(TRAIN_IMAGES + "*")):
            return load_idx(p)
        return load_image_dir(p)
    if p.suffix == ".json":
        doc = json.loads(p.read_text())
        return synth_generate(SynthSpec.from_dict(doc.get("synthetic", doc)), seed)
    with open(p, "rb") as fh:
        if fh.read(8) == MAGIC:
            return load_dataset(p)
    raise FormatError(f"{path}: not a dataset container, IDX directory, "
                      "image directory, or synth spec")


def _parse_epsilon(value: str) -> float:
    if value.lower() in ("inf", "infinity", "non-private"):
        return math.inf
    return float(value)


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        epochs=args.epochs,
        clip_norm=args.clip_norm,
        noise_multiplier=args.sigma,
    )


def _model_config(args, num_classes: int) -> ModelConfig:
    return ModelConfig(
        conv_channels=tuple(args.conv_channels),
        hidden_units=args.hidden_units,
        groupnorm_groups=args.groups,
        num_classes=num_classes,
    )


def _add_train_flags(parser):
    parser.add_argument("--epsilon", type=_parse_epsilon, default=math.inf,
                        help="privacy budget; 'inf' trains non-privately")
    parser.add_argument("--delta", type=float, default=1e-5)
    parser.add_argument("--epochs", type=int, default=30)
    parser.add_argument("--batch-size", type=int, default=256)
    parser.add_argument("--learning-rate", type=float, default=0.005)
    parser.add_argument("--clip-norm", type=float, default=1.0)
    parser.add_argument("--sigma", type=float, default=None,
                        help="explicit noise multiplier (skips calibration)")
    parser.add_argument("--conv-channels", type=int, nargs=3, default=[32, 64, 128])
    parser.add_argument("--hidden-units", type=int, default=128)
    parser.add_argument("--groups", type=int, default=8)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--allow-downscale", action="store_true")


def cmd_analyze(args) -> int:
    ds = load_input_dataset(args.input, args.seed)
    payload = compute_characteristics(ds)
    if args.output:
        write_json_report(args.output, payload)
    else:
        write_json_report("/dev/stdout", payload)
    return 0


def cmd_modify(args) -> int:
    ds = load_input_dataset(args.input, args.seed)
    mods = []
    if args.class_size is not None:
        mods.append({"op": "class_size", "per_class": args.class_size})
    if args.class_count is not None:
        mods.append({"op": "class_count", "keep_classes": args.class_count})
    if args.imbalance is not None:
        mods.append({"op": "imbalance", "factor": args.imbalance, "mode": args.mode})
    if args.grayscale:
        mods.append({"op": "grayscale"})
    ds = apply_modifications(ds, mods, args.seed)
    save_dataset(args.output, ds)
    return 0


def cmd_train(args) -> int:
    ds = load_input_dataset(args.input, args.seed)
    data = preprocess(ds, allow_downscale=args.allow_downscale)
    budget = PrivacyBudget(args.epsilon, args.delta)
    params, history = train(data, _model_config(args, ds.num_classes),
                            _train_config(args), budget, seed=args.seed)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = budget.label()
    save_params(out / f"model_eps_{label}.bin", params, {"budget": label})
    write_json_report(out / f"history_eps_{label}.json", history.to_dict())
    utility = evaluate_utility(params, data)
    write_json_report(out / f"utility_eps_{label}.json", utility.to_dict())
    return 0


def cmd_attack(args) -> int:
    ds = load_input_dataset(args.input, args.seed)
    data = preprocess(ds, allow_downscale=args.allow_downscale)
    budget = PrivacyBudget(args.epsilon, args.delta)
    ensemble = train_shadows(data, _model_config(args, ds.num_classes),
                             _train_config(args), budget, args.shadows,
                             base_seed=args.seed, workers=worker_count())
    result = round_robin_attack(ensemble, data)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = budget.label()
    write_json_report(out / f"attack_eps_{label}.json", result.averaged.to_dict())
    dump_scores_csv(out / f"scores_eps_{label}.csv", result)
    return 0


def cmd_report(args) -> int:
    rows = []
    for run_dir in args.runs:
        csv_path = Path(run_dir) / "report.csv"
        if not csv_path.exists():
            raise FormatError(f"{run_dir}: no report.csv (unfinished run?)")
        rows.extend(read_report_csv(csv_path))
    write_report_csv(args.output, rows)
    return 0


def cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    run_experiment(cfg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppml-audit",
        description="Quantify dataset privacy characteristics, train DP and "
                    "non-private CNNs, and evaluate membership-inference risk.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dataset characteristic metrics")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None, help="JSON path (default stdout)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("modify", help="apply structural dataset modifications")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--class-size", type=int, default=None)
    p.add_argument("--class-count", type=int, default=None)
    p.add_argument("--imbalance", type=float, default=None)
    p.add_argument("--mode", choices=["linear", "normal"], default="linear")
    p.add_argument("--grayscale", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(fn=cmd_modify)

    p = sub.add_parser("train", help="train one model at a privacy budget")
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True)
    _add_train_flags(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("attack", help="shadow-ensemble membership attack")
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--shadows", type=int, default=32)
    _add_train_flags(p)
    p.set_defaults(fn=cmd_attack)

    p = sub.add_parser("report", help="merge run reports into one CSV")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("experiment", help="full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PpmlAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

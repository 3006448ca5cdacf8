"""The three-step pipeline as a reproducible run: train a non-private model
and private models per budget, measure utility, and attack every variant
with the shadow-ensemble membership test, emitting typed reports."""

import time
from dataclasses import dataclass, field
from pathlib import Path

from ..attack.round_robin import dump_scores_csv, round_robin_attack
from ..attack.shadows import train_shadows
from ..data.container import load_dataset, save_dataset, save_params
from ..data.idx import load_idx
from ..data.imagedir import load_image_dir
from ..data.modify import (imbalance_linear, imbalance_normal,
                           reduce_class_count, reduce_class_size, to_grayscale)
from ..data.preprocess import preprocess
from ..data.synth import synth_generate
from ..dp.training import train
from ..errors import ConfigurationError, ExperimentError
from ..metrics.complexity import dataset_compression_ratios, dataset_entropy
from ..metrics.separability import fdr, in_class_std
from ..metrics.utility import evaluate_utility
from ..nn.config import ModelConfig
from .config import ExperimentConfig, config_hash, worker_count
from .reports import write_json_report, write_report_csv


@dataclass
class RunManifest:
    config_hash: str
    seed: int
    stages: list = field(default_factory=list)
    error: dict | None = None

    def record(self, name: str, seconds: float, artifacts: list):
        self.stages.append({"name": name, "seconds": round(seconds, 3),
                            "artifacts": [str(a) for a in artifacts]})

    def to_dict(self) -> dict:
        return {"config_hash": self.config_hash, "seed": self.seed,
                "stages": self.stages, "error": self.error}


def load_source_dataset(cfg: ExperimentConfig):
    src = cfg.dataset
    if src.source == "synthetic":
        return synth_generate(src.spec, cfg.seed)
    if src.source == "container":
        return load_dataset(src.path)
    if src.source == "idx":
        return load_idx(src.path)
    if src.source == "image_dir":
        return load_image_dir(src.path)
    raise ConfigurationError(f"unknown dataset source {src.source!r}")


def apply_modifications(ds, modifications, seed: int):
    for mod in modifications:
        op = mod["op"]
        if op == "class_size":
            ds = reduce_class_size(ds, int(mod["per_class"]), seed=seed)
        elif op == "class_count":
            ds = reduce_class_count(ds, int(mod["keep_classes"]))
        elif op == "imbalance":
            mode = mod.get("mode", "linear")
            if mode == "linear":
                ds = imbalance_linear(ds, float(mod["factor"]), seed=seed)
            elif mode == "normal":
                ds = imbalance_normal(ds, float(mod["factor"]), seed=seed)
            else:
                raise ConfigurationError(f"unknown imbalance mode {mode!r}")
        elif op == "grayscale":
            ds = to_grayscale(ds)
        else:
            raise ConfigurationError(f"unknown modification op {op!r}")
    return ds


def compute_characteristics(ds) -> dict:
    compression = dataset_compression_ratios(ds)
    return {
        "mean_entropy": dataset_entropy(ds),
        "jpeg_ratio": compression["jpeg"]["ratio"],
        "png_ratio": compression["png"]["ratio"],
        "fdr": fdr(ds),
        "in_class_std": in_class_std(ds),
        "compression_detail": compression,
    }


def _model_for_dataset(cfg: ExperimentConfig, num_classes: int) -> ModelConfig:
    if cfg.model.num_classes == num_classes:
        return cfg.model
    # class-count modifications change the output width; keep the rest
    base = cfg.model.to_dict()
    base["num_classes"] = num_classes
    return ModelConfig.from_dict(base)


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    """Execute every stage, writing artifacts under cfg.output_dir.

    A stage failure is recorded in the manifest (with the stage name) before
    the error is re-raised; artifacts written so far stay on disk.
    """
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config_hash=config_hash(cfg), seed=cfg.seed)
    manifest_path = out / "manifest.json"
    variant = cfg.variant_label()
    workers = worker_count()

    def stage(name: str, fn):
        start = time.perf_counter()
        try:
            artifacts = fn() or []
        except Exception as exc:
            manifest.error = {"stage": name, "message": str(exc)}
            write_json_report(manifest_path, manifest.to_dict())
            raise ExperimentError(f"stage {name!r} failed: {exc}") from exc
        manifest.record(name, time.perf_counter() - start, artifacts)
        return artifacts

    state = {}

    def load_stage():
        state["ds"] = load_source_dataset(cfg)
        return []

    def modify_stage():
        state["ds"] = apply_modifications(state["ds"], cfg.modifications, cfg.seed)
        path = out / "dataset.bin"
        save_dataset(path, state["ds"])
        return [path]

    def characteristics_stage():
        payload = compute_characteristics(state["ds"])
        payload["variant"] = variant
        state["characteristics"] = payload
        path = out / "characteristics.json"
        write_json_report(path, payload)
        return [path]

    def preprocess_stage():
        state["data"] = preprocess(state["ds"], allow_downscale=cfg.allow_downscale)
        state["model_config"] = _model_for_dataset(cfg, state["ds"].num_classes)
        return []

    stage("load", load_stage)
    stage("modify", modify_stage)
    stage("characteristics", characteristics_stage)
    stage("preprocess", preprocess_stage)

    rows = []
    for epsilon in cfg.budgets:
        budget = cfg.budget(epsilon)
        label = budget.label()

        def train_stage(budget=budget, label=label):
            params, history = train(state["data"], state["model_config"],
                                    cfg.training, budget, seed=cfg.seed)
            utility = evaluate_utility(params, state["data"])
            ckpt = out / f"model_eps_{label}.bin"
            save_params(ckpt, params, {"budget": label})
            hist_path = out / f"history_eps_{label}.json"
            write_json_report(hist_path, history.to_dict())
            util_path = out / f"utility_eps_{label}.json"
            write_json_report(util_path, utility.to_dict())
            state[("utility", label)] = utility
            state[("history", label)] = history
            return [ckpt, hist_path, util_path]

        def attack_stage(budget=budget, label=label):
            ensemble = train_shadows(state["data"], state["model_config"],
                                     cfg.training, budget, cfg.num_shadows,
                                     base_seed=cfg.seed, workers=workers)
            result = round_robin_attack(ensemble, state["data"])
            state[("attack", label)] = result
            report_path = out / f"attack_eps_{label}.json"
            write_json_report(report_path, result.averaged.to_dict())
            scores_path = out / f"scores_eps_{label}.csv"
            dump_scores_csv(scores_path, result)
            return [report_path, scores_path]

        stage(f"train[{label}]", train_stage)
        stage(f"attack[{label}]", attack_stage)

        utility = state[("utility", label)]
        history = state[("history", label)]
        attack = state[("attack", label)].averaged
        chars = state["characteristics"]
        rows.append({
            "variant": variant,
            "budget": label,
            "epsilon_spent": history.epsilon_spent,
            "noise_multiplier": history.noise_multiplier,
            "entropy": chars["mean_entropy"],
            "jpeg_ratio": chars["jpeg_ratio"],
            "png_ratio": chars["png_ratio"],
            "fdr": chars["fdr"],
            "in_class_std": chars["in_class_std"],
            "f1_macro": utility.f1_macro,
            "accuracy": utility.accuracy,
            "train_test_gap": utility.train_test_gap,
            "auc": attack.auc,
            "tpr_at_fpr_0_1": attack.tpr_at_fpr_0_1,
            "tpr_at_fpr_0_001": attack.tpr_at_fpr_0_001,
        })

    def report_stage():
        path = out / "report.csv"
        write_report_csv(path, rows)
        return [path]

    stage("report", report_stage)
    write_json_report(manifest_path, manifest.to_dict())
    return manifest

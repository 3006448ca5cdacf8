"""Experiment configuration: a versioned JSON document describing the
dataset source, the modification chain, privacy budgets, model and training
hyperparameters, and the attack setup."""

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..data.synth import SynthSpec
from ..errors import ConfigurationError
from ..nn.config import ModelConfig
from ..dp.training import PrivacyBudget, TrainConfig

SCHEMA_VERSION = 1
WORKERS_ENV = "PPML_AUDIT_WORKERS"

_KNOWN_OPS = {"class_size", "class_count", "imbalance", "grayscale"}


@dataclass(frozen=True)
class DatasetSource:
    source: str  # synthetic | container | idx | image_dir
    path: str | None = None
    spec: SynthSpec | None = None

    def to_dict(self) -> dict:
        if self.source == "synthetic":
            return {"source": self.source, "spec": self.spec.to_dict()}
        return {"source": self.source, "path": self.path}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetSource
    budgets: tuple = (math.inf, 30.0, 1.0)
    modifications: tuple = ()
    model: ModelConfig = field(default_factory=ModelConfig)
    training: TrainConfig = field(default_factory=TrainConfig)
    num_shadows: int = 32
    delta: float = 1e-5
    seed: int = 42
    output_dir: str = "runs/experiment"
    allow_downscale: bool = False

    def __post_init__(self):
        if not self.budgets:
            raise ConfigurationError("at least one privacy budget is required")
        for eps in self.budgets:
            if eps <= 0:
                raise ConfigurationError("privacy budgets must be positive or inf")
        if self.num_shadows < 3:
            raise ConfigurationError("round-robin attacks need >= 3 shadow models")
        for mod in self.modifications:
            if mod.get("op") not in _KNOWN_OPS:
                raise ConfigurationError(f"unknown modification op {mod.get('op')!r}")

    def budget(self, epsilon: float) -> PrivacyBudget:
        return PrivacyBudget(epsilon=epsilon, delta=self.delta)

    def semantic_dict(self) -> dict:
        """Everything that influences numeric outputs; excludes the output
        location and worker count."""
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "dataset": self.dataset.to_dict(),
            "modifications": [dict(m) for m in self.modifications],
            "budgets": ["inf" if math.isinf(b) else b for b in self.budgets],
            "model": self.model.to_dict(),
            "training": {
                "learning_rate": self.training.learning_rate,
                "batch_size": self.training.batch_size,
                "epochs": self.training.epochs,
                "clip_norm": self.training.clip_norm,
                "noise_multiplier": self.training.noise_multiplier,
            },
            "attack": {"num_shadows": self.num_shadows},
            "delta": self.delta,
            "allow_downscale": self.allow_downscale,
        }

    def variant_label(self) -> str:
        """Compact name for the modified dataset, e.g. size500+imb0.9linear."""
        parts = []
        for mod in self.modifications:
            op = mod["op"]
            if op == "class_size":
                parts.append(f"size{mod['per_class']}")
            elif op == "class_count":
                parts.append(f"count{mod['keep_classes']}")
            elif op == "imbalance":
                parts.append(f"imb{mod['factor']:g}{mod.get('mode', 'linear')}")
            elif op == "grayscale":
                parts.append("gray")
        return "+".join(parts) if parts else "base"


def config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(cfg.semantic_dict(), sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _parse_budget(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity", "non-private"):
            return math.inf
        return float(value)
    return float(value)


def config_from_dict(doc: dict) -> ExperimentConfig:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    ds = doc.get("dataset")
    if not isinstance(ds, dict) or "source" not in ds:
        raise ConfigurationError("config needs a dataset.source entry")
    source = ds["source"]
    if source == "synthetic":
        dataset = DatasetSource("synthetic", spec=SynthSpec.from_dict(ds.get("spec", {})))
    elif source in ("container", "idx", "image_dir"):
        if "path" not in ds:
            raise ConfigurationError(f"dataset source {source!r} needs a path")
        dataset = DatasetSource(source, path=ds["path"])
    else:
        raise ConfigurationError(f"unknown dataset source {source!r}")

    model = ModelConfig.from_dict(doc.get("model", {})) if doc.get("model") else ModelConfig()
    training = TrainConfig(**doc.get("training", {}))
    return ExperimentConfig(
        dataset=dataset,
        budgets=tuple(_parse_budget(b) for b in doc.get("budgets", ["inf", 30, 1])),
        modifications=tuple(doc.get("modifications", [])),
        model=model,
        training=training,
        num_shadows=int(doc.get("attack", {}).get("num_shadows", 32)),
        delta=float(doc.get("delta", 1e-5)),
        seed=int(doc.get("seed", 42)),
        output_dir=str(doc.get("output_dir", "runs/experiment")),
        allow_downscale=bool(doc.get("allow_downscale", False)),
    )


def load_config(path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(doc)

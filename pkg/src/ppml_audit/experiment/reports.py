"""Deterministic report emission.

Numeric reports are written with canonical key order and values rounded to 4
decimal places, so identical (config, seed) runs produce byte-identical
files. Run timings live only in the manifest, which is exempt from that
guarantee.
"""

import csv
import json
import math

REPORT_DECIMALS = 4

REPORT_COLUMNS = [
    "variant", "budget", "epsilon_spent", "noise_multiplier",
    "entropy", "jpeg_ratio", "png_ratio", "fdr", "in_class_std",
    "f1_macro", "accuracy", "train_test_gap",
    "auc", "tpr_at_fpr_0_1", "tpr_at_fpr_0_001",
]


def round_floats(obj, decimals: int = REPORT_DECIMALS):
    """Recursively round floats; infinities become the string "inf"."""
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return round(obj, decimals)
    if isinstance(obj, dict):
        return {k: round_floats(v, decimals) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, decimals) for v in obj]
    return obj


def write_json_report(path, payload: dict):
    body = json.dumps(round_floats(payload), sort_keys=True, indent=2)
    with open(path, "w") as fh:
        fh.write(body + "\n")


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.{REPORT_DECIMALS}f}"
    return str(value)


def write_report_csv(path, rows: list):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row.get(col)) for col in REPORT_COLUMNS])


def read_report_csv(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))

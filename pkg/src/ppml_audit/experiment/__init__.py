from .config import (ExperimentConfig, DatasetSource, config_from_dict,
                     config_hash, load_config, worker_count)
from .reports import (REPORT_COLUMNS, read_report_csv, round_floats,
                      write_json_report, write_report_csv)
from .runner import (RunManifest, apply_modifications, compute_characteristics,
                     load_source_dataset, run_experiment)

__all__ = [
    "ExperimentConfig",
    "DatasetSource",
    "load_config",
    "config_from_dict",
    "config_hash",
    "worker_count",
    "run_experiment",
    "RunManifest",
    "apply_modifications",
    "compute_characteristics",
    "load_source_dataset",
    "REPORT_COLUMNS",
    "write_json_report",
    "write_report_csv",
    "read_report_csv",
    "round_floats",
]

"""Canonical binary container for datasets and model checkpoints.

Layout (all little-endian):

    bytes 0..7    magic b"PPMLBIN1"
    bytes 8..11   uint32 header length L
    bytes 12..    UTF-8 JSON header of length L
    then          raw array payloads, concatenated in header order

The JSON header carries free-form metadata plus an ``arrays`` index of
``{name, dtype, shape}`` entries; payload byte counts follow from dtype and
shape. Supported dtypes: uint8, int64, float64.
"""

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .dataset import ImageDataset, dataset_from_arrays

MAGIC = b"PPMLBIN1"
_DTYPES = {"uint8": np.uint8, "int64": np.int64, "float64": np.float64}


def write_container(path, arrays: dict, metadata: dict | None = None):
    """Write named arrays plus a metadata dict."""
    index = []
    payloads = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        dtype = str(arr.dtype)
        if dtype not in _DTYPES:
            raise FormatError(f"unsupported dtype {dtype} for array {name!r}")
        index.append({"name": name, "dtype": dtype, "shape": list(arr.shape)})
        payloads.append(arr.astype(arr.dtype.newbyteorder("<")).tobytes())
    header = dict(metadata or {})
    header["arrays"] = index
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for p in payloads:
            fh.write(p)


def read_container(path):
    """Returns (arrays dict, metadata dict)."""
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:8] != MAGIC:
        raise FormatError(f"{path}: not a container file (bad magic at offset 0)")
    (hlen,) = struct.unpack("<I", data[8:12])
    if len(data) < 12 + hlen:
        raise FormatError(f"{path}: truncated header at offset 12")
    try:
        header = json.loads(data[12:12 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: invalid header JSON: {exc}") from exc
    offset = 12 + hlen
    arrays = {}
    for entry in header.pop("arrays", []):
        dtype = np.dtype(_DTYPES[entry["dtype"]]).newbyteorder("<")
        shape = tuple(entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        nbytes = dtype.itemsize * count
        if offset + nbytes > len(data):
            raise FormatError(f"{path}: truncated payload for {entry['name']!r} "
                              f"at offset {offset}")
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
        arrays[entry["name"]] = arr.reshape(shape).astype(_DTYPES[entry["dtype"]])
        offset += nbytes
    return arrays, header


def save_dataset(path, ds: ImageDataset):
    write_container(path, {
        "train_images": ds.train_images,
        "train_labels": ds.train_labels,
        "test_images": ds.test_images,
        "test_labels": ds.test_labels,
    }, metadata={"kind": "dataset", "class_names": list(ds.class_names)})


def load_dataset(path) -> ImageDataset:
    arrays, meta = read_container(path)
    if meta.get("kind") != "dataset":
        raise FormatError(f"{path}: container does not hold a dataset")
    return dataset_from_arrays(
        arrays["train_images"], arrays["train_labels"],
        arrays["test_images"], arrays["test_labels"],
        meta["class_names"])


def save_params(path, params, extra_metadata: dict | None = None):
    from ..nn.params import ModelParams  # local import avoids a cycle

    assert isinstance(params, ModelParams)
    meta = {"kind": "checkpoint", "model_config": params.config.to_dict()}
    meta.update(extra_metadata or {})
    write_container(path, dict(params.arrays), metadata=meta)


def load_params(path):
    from ..nn.config import ModelConfig
    from ..nn.params import ModelParams

    arrays, meta = read_container(path)
    if meta.get("kind") != "checkpoint":
        raise FormatError(f"{path}: container does not hold a checkpoint")
    config = ModelConfig.from_dict(meta["model_config"])
    return ModelParams(config, arrays), meta

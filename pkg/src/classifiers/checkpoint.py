"""
Checkpoint format: one JSON header line, then each parameter matrix as raw
little-endian float64 in the order the header lists them.
"""
import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np

from src.classifiers.gcn import GcnParams
from src.classifiers.logreg import LogRegParams

logger = logging.getLogger(__name__)

_DTYPE = np.dtype("<f8")

Params = Union[GcnParams, LogRegParams]


def save_checkpoint(path: Path, params: Params, metadata: dict[str, Any] | None = None) -> None:
    """
    Write parameters and metadata (config, seed, epoch, ...).

    Args:
        path: Destination file
        params: GCN or logistic-regression parameters
        metadata: JSON-serialisable extras stored in the header
    """
    if isinstance(params, GcnParams):
        kind, arrays, extra = "gcn", params.as_dict(), {}
    else:
        kind, arrays, extra = "logreg", params.as_dict(), {"l2": params.l2}

    header = {
        "kind": kind,
        "arrays": [{"name": name, "shape": list(value.shape)} for name, value in arrays.items()],
        "metadata": metadata or {},
        **extra,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as handle:
        handle.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        for value in arrays.values():
            handle.write(np.ascontiguousarray(value, dtype=_DTYPE).tobytes())
    logger.info(f"💾 Checkpoint saved: {path}")


def load_checkpoint(path: Path) -> tuple[Params, dict[str, Any]]:
    """
    Read a checkpoint written by save_checkpoint.

    Returns:
        (parameters, metadata)

    Raises:
        FileNotFoundError: Missing file
        ValueError: Corrupt header or truncated buffers
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")

    raw = path.read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise ValueError(f"{path}: missing checkpoint header")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ValueError(f"{path}: invalid checkpoint header ({e})") from e

    arrays: dict[str, np.ndarray] = {}
    offset = newline + 1
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        size = int(np.prod(shape)) * _DTYPE.itemsize
        if offset + size > len(raw):
            raise ValueError(f"{path}: truncated buffer for {entry['name']}")
        values = np.frombuffer(raw, dtype=_DTYPE, count=size // _DTYPE.itemsize, offset=offset)
        arrays[entry["name"]] = values.reshape(shape).astype(np.float64)
        offset += size

    if header["kind"] == "gcn":
        params: Params = GcnParams.from_dict(arrays)
    elif header["kind"] == "logreg":
        params = LogRegParams(weights=arrays["weights"], bias=arrays["bias"], l2=header.get("l2", 0.0))
    else:
        raise ValueError(f"{path}: unknown checkpoint kind {header['kind']!r}")
    return params, header.get("metadata", {})

"""Checkpoint files.

JSON document, stable across versions of this package:

    {"format": "gnnlab.checkpoint", "version": 1,
     "spec": {...}, "meta": {...},
     "params": {name: {"shape": [...], "values": [row-major floats]}}}

Floats are written with Python's shortest round-trip repr, so a reload is bit-exact.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from gnnlab.autodiff.tensor import Tensor, parameter
from gnnlab.errors import InputError

FORMAT = "gnnlab.checkpoint"
VERSION = 1


def save_checkpoint(
    path: str | Path,
    params: Mapping[str, Tensor],
    spec: dict,
    meta: dict | None = None,
) -> Path:
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "spec": spec,
        "meta": meta or {},
        "params": {
            name: {"shape": list(params[name].shape), "values": params[name].data.ravel().tolist()}
            for name in sorted(params)
        },
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return path


def load_checkpoint(path: str | Path) -> tuple[dict[str, Tensor], dict, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read checkpoint {path}: {exc}") from exc
    if doc.get("format") != FORMAT or doc.get("version") != VERSION:
        raise InputError(f"{path} is not a version-{VERSION} gnnlab checkpoint")
    params = {}
    for name, entry in doc["params"].items():
        values = np.asarray(entry["values"], dtype=np.float64)
        params[name] = parameter(values.reshape(entry["shape"]), name=name)
    return params, doc["spec"], doc.get("meta", {})

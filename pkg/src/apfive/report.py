"""Deterministic JSON output helpers: stable key ordering so that identical
inputs produce byte-identical reports."""

from __future__ import annotations

import json
import os
from pathlib import Path

__all__ = ["canonical_json", "write_json_atomic"]


def canonical_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=1) + "\n"


def write_json_atomic(path, obj) -> Path:
    path = Path(path)
    data = canonical_json(obj).encode("utf-8")
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return path

"""
JSON and CSV helpers for run artifacts.

Complex numbers are written as [re, im]; non-finite floats as null. Keys are
sorted so identical inputs produce identical files.
"""

import hashlib
import json
import logging
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """
    Convert nested results to plain JSON types.

    Args:
        value: Dicts, sequences, numpy values, complex numbers, paths, or
            objects with a ``to_dict`` method

    Returns:
        A structure json.dumps accepts without custom encoders
    """
    if hasattr(value, "to_dict") and not isinstance(value, (pd.DataFrame, pd.Series)):
        return to_jsonable(value.to_dict())
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(np.real(value))), to_jsonable(float(np.imag(value)))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return value.as_posix()
    return value


def canonical_json(value: Any, indent: int = 2) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, indent=indent, ensure_ascii=False)


def stable_hash(value: Any) -> str:
    """sha256 of the compact canonical JSON form."""
    compact = json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def write_json(path: Union[str, Path], value: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(canonical_json(value))
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.debug(f"Wrote {path} ({len(frame)} rows)")
    return path

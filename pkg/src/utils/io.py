"""CSV and JSON artifact writers.

Floats are written in shortest round-trip form so repeated runs produce
byte-identical files.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Union
import logging
import math

import numpy as np
import orjson
import pandas as pd

logger = logging.getLogger(__name__)

_JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE | orjson.OPT_SERIALIZE_NUMPY


def _clean(value: Any) -> Any:
    """Replace non-finite floats by None, recursively."""
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def dumps_json(payload: Any, compact: bool = False) -> bytes:
    """Serialize a payload with deterministic key order."""
    options = orjson.OPT_SORT_KEYS if compact else _JSON_OPTIONS
    return orjson.dumps(_clean(payload), option=options)


def write_json(payload: Any, output_path: Union[str, Path]) -> Path:
    """Write a JSON artifact.

    Args:
        payload: JSON-compatible structure (numpy scalars/arrays allowed)
        output_path: Destination file

    Returns:
        The written path
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_bytes(dumps_json(payload))
    logger.info(f"Saved JSON to {output_path}")
    return output_path


def read_json(path: Union[str, Path]) -> Any:
    """Re-parse a JSON artifact."""
    return orjson.loads(Path(path).read_bytes())


def write_csv(
    columns: Dict[str, Sequence[Any]],
    output_path: Union[str, Path],
) -> Path:
    """Write a CSV artifact with a header row, columns in the given order."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({name: list(values) for name, values in columns.items()})
    frame.to_csv(output_path, index=False, lineterminator="\n")
    logger.info(f"Saved CSV ({len(frame)} rows) to {output_path}")
    return output_path

"""
Plain-text export shared by every study: CSV with 12 significant digits and
JSON with floats rounded to the same precision and sorted keys.
"""
import json
import math
from pathlib import Path
from typing import Any, Sequence, Union

import numpy as np

CSV_FORMAT = '%.12g'
SIGNIFICANT_DIGITS = 12


def round_significant(value: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """Round floats (also nested in lists, tuples and dicts) to `digits` significant digits."""
    if isinstance(value, dict):
        return {str(k): round_significant(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_significant(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return [round_significant(v, digits) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f'{value:.{digits}g}')
    return value


def dumps(payload: dict) -> str:
    return json.dumps(round_significant(payload), sort_keys=True, indent=2)


def write_json(path: Union[str, Path], payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload) + '\n')
    return path


def write_csv(path: Union[str, Path], columns: Sequence[str], rows) -> Path:
    """
    Write rows under a comma-separated header line.

    Numbers use CSV_FORMAT; a column whose first cell is a string is written
    as text.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = rows if isinstance(rows, np.ndarray) else list(rows)
    first = rows[0] if len(rows) else ()
    text = [isinstance(cell, str) for cell in first]
    if any(text):
        data = np.array(rows, dtype=object).reshape(-1, len(columns))
        fmt = ['%s' if is_text else CSV_FORMAT for is_text in text]
    else:
        data = np.asarray(rows, dtype=float).reshape(-1, len(columns))
        fmt = CSV_FORMAT
    np.savetxt(path, data, delimiter=',', header=','.join(columns), comments='', fmt=fmt)
    return path

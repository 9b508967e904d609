"""CSV and JSON helpers shared by the command-line tools.

Numbers are written with 17 significant digits so doubles round-trip
exactly.  Input CSV may carry one header row; output always has one.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError

FLOAT_FMT = "{:.17g}"


def fmt(value):
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT.format(float(value))
    return str(value)


def read_columns(path):
    """Numeric CSV as a (rows, columns) array; a leading header row is skipped."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc.strerror}") from exc
    if rows:
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            rows = rows[1:]
    if not rows:
        raise InvalidArgumentError(f"{path} holds no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidArgumentError(f"{path} has rows of unequal width")
    try:
        data = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise InvalidArgumentError(f"{path}: non-numeric value ({exc})") from exc
    if not np.all(np.isfinite(data)):
        raise InvalidArgumentError(f"{path} contains non-finite values")
    return data


def write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    return path


def write_column(path, values, header="x"):
    return write_rows(path, [header], ([v] for v in values))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path

"""
Deterministic text outputs: boundary CSV files and JSON documents.

Files are written once, atomically (temporary file in the target directory,
then rename). CSV floats carry 17 significant digits so they read back
bit-for-bit.
"""
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from app.core.exceptions import CsvFormatError
from app.models.numrange import SupportSample

CSV_COLUMNS = ["alpha", "lambda", "x", "y"]
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_atomic(path: PathLike, content: Union[str, bytes]) -> None:
    """Write content to path through a temporary sibling file and os.replace."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    data = content.encode("utf-8") if isinstance(content, str) else content
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(content: Union[str, bytes], output: Optional[PathLike] = None) -> None:
    """Write to a file when output is given, otherwise to standard output."""
    if output:
        write_atomic(output, content)
        return
    if isinstance(content, bytes):
        sys.stdout.buffer.write(content)
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(content)
        sys.stdout.flush()


def samples_to_frame(samples: Sequence[SupportSample]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "alpha": [s.alpha for s in samples],
            "lambda": [s.lam for s in samples],
            "x": [s.x for s in samples],
            "y": [s.y for s in samples],
        },
        columns=CSV_COLUMNS,
    )


def samples_to_csv(samples: Sequence[SupportSample]) -> str:
    """CSV text with header alpha,lambda,x,y and LF line endings."""
    return samples_to_frame(samples).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_boundary_csv(path: PathLike) -> List[SupportSample]:
    """
    Parse a boundary CSV written by samples_to_csv.

    Raises:
        CsvFormatError: If the file is missing, empty, has other columns or
            holds non-finite values
    """
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError as e:
        raise CsvFormatError(f"Boundary file not found: {path}") from e
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise CsvFormatError(f"Cannot parse {path}: {e}") from e

    if list(frame.columns) != CSV_COLUMNS:
        raise CsvFormatError(f"{path}: expected columns {','.join(CSV_COLUMNS)}, got {','.join(map(str, frame.columns))}")
    if frame.empty:
        raise CsvFormatError(f"{path}: no rows")
    try:
        values = frame.to_numpy(dtype=float)
    except (TypeError, ValueError) as e:
        raise CsvFormatError(f"{path}: non-numeric entries") from e
    if not np.all(np.isfinite(values)):
        raise CsvFormatError(f"{path}: non-finite entries")

    return [SupportSample(alpha=float(al), lam=float(lam), point=complex(x, y)) for al, lam, x, y in values]


def to_json(document: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    if hasattr(document, "model_dump"):
        document = document.model_dump(by_alias=True)
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"

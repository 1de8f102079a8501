import csv
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

FLOAT_FORMAT = "%.17g"


def write_csv(path: Union[str, Path], frame: pd.DataFrame, header: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write ``frame`` with round-trip float precision and ``\\n`` line endings.
    ``header`` entries are written first as ``# key=value`` comment lines so
    every data file carries its config and seed.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for key in sorted(header or {}):
            f.write(f"# {key}={header[key]}\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    return path


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")

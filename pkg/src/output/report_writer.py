"""
Report Writer - writes result models as JSON or CSV
Floats are written as their shortest round-trip repr and nothing time-dependent
is written, so identical jobs give byte-identical files
"""

import json
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import structlog
from pydantic import BaseModel

from config.settings import JSON_INDENT, OUTPUT_DIR
from errors import DomainError

logger = structlog.get_logger(__name__)

FORMATS = ("json", "csv")


def _plain(value: Any) -> Any:
    """json.dumps fallback for pydantic models and numpy values"""
    if isinstance(value, BaseModel):
        return value.model_dump(mode="python")
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_report(payload: Any, indent: int = JSON_INDENT) -> str:
    try:
        return json.dumps(payload, indent=indent, allow_nan=False, default=_plain) + "\n"
    except (TypeError, ValueError) as e:
        raise DomainError(f"report is not JSON serializable: {e}") from e


def rows_to_csv(rows: List[Dict]) -> str:
    frame = pd.DataFrame(rows)
    return frame.to_csv(index=False, lineterminator="\n")


class ReportWriter:
    def __init__(self, output_dir: str = OUTPUT_DIR):
        self.output_dir = output_dir

    def default_path(self, command: str, fmt: str) -> str:
        return os.path.join(self.output_dir, f"{command}.{fmt}")

    def write(self, command: str, payload: Dict, rows: Optional[List[Dict]], fmt: str = "json", path: Optional[str] = None) -> str:
        """Write one report; path "-" means stdout. Returns the path written"""
        if fmt not in FORMATS:
            raise DomainError(f"unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")
        if fmt == "csv":
            if rows is None:
                raise DomainError(f"{command} has no tabular form; use --format json")
            text = rows_to_csv(rows)
        else:
            text = dumps_report(payload)

        path = path or self.default_path(command, fmt)
        if path == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
            return path

        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info("report_written", command=command, format=fmt, path=path, size=len(text))
        return path

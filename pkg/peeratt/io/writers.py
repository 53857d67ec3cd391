from enum import Enum
from math import isnan
from os import makedirs
from os.path import join
from typing import Any
import json
import logging

from numpy import generic, ndarray
from pandas import DataFrame

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def to_serializable(value: Any) -> Any:
    """
    Convert numpy values and containers to plain Python, with nan as None.
    """
    if isinstance(value, dict):
        return {str(key): to_serializable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(item) for item in value]
    if isinstance(value, ndarray):
        return [to_serializable(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, generic):
        value = value.item()
    if isinstance(value, float) and isnan(value):
        return None
    return value


def write_json(data: Any, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as file:
        json.dump(to_serializable(data), file, indent=4, sort_keys=True)
        file.write("\n")
    logger.info(f"Wrote {path}.")
    return path


def write_table(frame: DataFrame, directory: str, name: str,
                format: OutputFormat = OutputFormat.CSV) -> str:
    """
    Write a table as CSV (empty cells for missing values) or as a JSON list of records.

    Returns:
        str: The path of the written file.
    """
    format = OutputFormat(format)
    makedirs(directory, exist_ok=True)
    path = join(directory, f"{name}.{format.value}")
    if format == OutputFormat.CSV:
        frame.to_csv(path, index=False, na_rep="", lineterminator="\n", encoding="utf-8")
        logger.info(f"Wrote {path}.")
        return path
    return write_json(frame.to_dict(orient="records"), path)

from dataclasses import dataclass
from os import makedirs
from os.path import exists, join
from typing import Dict
import logging

from pandas import read_csv
from pandas.errors import EmptyDataError, ParserError

from peeratt.core.dataset import Dataset
from peeratt.core.errors import IoError
from peeratt.core.grades import GradeScale
from peeratt.core.tables import SCHEMA_VERSION, DatasetTables

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetFiles:
    """
    Paths of the six CSV files of a dataset.
    """
    students: str
    classes: str
    registrations: str
    attendance: str
    grades: str
    catalog: str
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_dir(cls, directory: str) -> "DatasetFiles":
        return cls(**{name: join(directory, f"{name}.csv") for name in DatasetTables.names()})

    def paths(self) -> Dict[str, str]:
        return {name: getattr(self, name) for name in DatasetTables.names()}


def read_tables(files: DatasetFiles) -> DatasetTables:
    """
    Read the six tables with every value kept as a string.
    """
    frames = {}
    for name, path in files.paths().items():
        if not exists(path):
            raise IoError(f"Input file {path} does not exist.")
        try:
            frames[name] = read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
        except (EmptyDataError, ParserError, UnicodeDecodeError) as e:
            raise IoError(f"Cannot read {path}: {e}")
        logger.debug(f"Read {len(frames[name])} rows from {path}.")
    return DatasetTables(**frames)


def load_dataset(files: DatasetFiles, grade_scale: GradeScale = None) -> Dataset:
    """
    Read and validate a dataset.

    Args:
        files (DatasetFiles): The input files.
        grade_scale (GradeScale, optional): Letter to points map. Defaults to the standard scale.

    Returns:
        Dataset: The validated dataset.
    """
    return Dataset.from_tables(read_tables(files), grade_scale)


def write_tables(tables: DatasetTables, directory: str) -> DatasetFiles:
    """
    Write the six tables as UTF-8 CSV files into a directory.
    """
    makedirs(directory, exist_ok=True)
    files = DatasetFiles.from_dir(directory)
    for name, frame in tables.items():
        frame.to_csv(getattr(files, name), index=False, lineterminator="\n", encoding="utf-8")
    logger.info(f"Wrote dataset files to {directory}.")
    return files

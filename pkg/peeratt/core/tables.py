from dataclasses import dataclass, fields
from typing import Dict, List

from pandas import DataFrame

from peeratt.core.errors import IntegrityError

# Exact header of each table of the normalized schema
SCHEMA_VERSION = "1"
COLUMNS: Dict[str, List[str]] = {
    "students": ["student_id", "major", "cohort"],
    "classes": ["class_id", "course_id", "category", "semester"],
    "registrations": ["student_id", "class_id"],
    "attendance": ["student_id", "class_id", "attended"],
    "grades": ["student_id", "course_id", "letter"],
    "catalog": ["category", "description"],
}


@dataclass
class DatasetTables:
    """
    The six raw tables of a dataset, all columns held as strings.
    Row order is the file order, so row numbers can be reported.
    """
    students: DataFrame
    classes: DataFrame
    registrations: DataFrame
    attendance: DataFrame
    grades: DataFrame
    catalog: DataFrame

    @staticmethod
    def names() -> List[str]:
        return [f.name for f in fields(DatasetTables)]

    def items(self):
        for name in self.names():
            yield name, getattr(self, name)

    def validate_columns(self) -> None:
        """
        Check that every table has exactly the expected header.
        """
        for name, frame in self.items():
            if list(frame.columns) != COLUMNS[name]:
                raise IntegrityError(
                    f"{name}.csv: expected header {','.join(COLUMNS[name])} "
                    f"but found {','.join(map(str, frame.columns))}.")


def row_number(position: int) -> int:
    """
    CSV line number of the row at a 0-based table position (the header is line 1).
    """
    return int(position) + 2

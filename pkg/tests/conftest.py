"""
Shared fixtures.

The toy dataset has three students, five class units, four courses and three
categories. Its hand-computed values:

    class rates      c1 = 2/3, c2 = 1/2, c3 = 1/2, c4 = 0, c5 = 1/2
    ar               s1 = 1,     s2 = 1/4,  s3 = 0
    rai              s1 = 11/24, s2 = -1/6, s3 = -7/12
    gpa              s1 = 3.65,  s2 = 2.0,  s3 = 1.5
"""
from typing import Dict, Tuple

import pytest
from pandas import DataFrame

from peeratt.core.dataset import Dataset
from peeratt.core.roster import Roster, AttendanceMatrix
from peeratt.core.tables import COLUMNS, DatasetTables

TOY_STUDENTS = [("s1", "M1", "14"), ("s2", "M1", "14"), ("s3", "M2", "15")]
TOY_CLASSES = [("c1", "A", "K1", "all"), ("c2", "A", "K1", "all"), ("c3", "B", "K2", "all"),
               ("c4", "C", "K2", "all"), ("c5", "D", "K3", "all")]
TOY_ATTENDANCE = [("s1", "c1", "1"), ("s1", "c2", "1"), ("s1", "c3", "1"), ("s1", "c5", "1"),
                  ("s2", "c1", "1"), ("s2", "c2", "0"), ("s2", "c4", "0"), ("s2", "c5", "0"),
                  ("s3", "c1", "0"), ("s3", "c3", "0")]
TOY_GRADES = [("s1", "A", "A"), ("s1", "B", "B+"), ("s2", "A", "C"), ("s2", "C", "P"),
              ("s3", "A", "F"), ("s3", "B", "B")]
TOY_CATALOG = [("K1", "Mathematics"), ("K2", "Languages"), ("K3", "Arts")]


def make_tables(students=TOY_STUDENTS, classes=TOY_CLASSES, attendance=TOY_ATTENDANCE,
                grades=TOY_GRADES, catalog=TOY_CATALOG, registrations=None) -> DatasetTables:
    if registrations is None:
        registrations = [(s, c) for s, c, _ in attendance]
    rows = {"students": students, "classes": classes, "registrations": registrations,
            "attendance": attendance, "grades": grades, "catalog": catalog}
    return DatasetTables(**{name: DataFrame(list(data), columns=COLUMNS[name], dtype=str)
                            for name, data in rows.items()})


def make_roster(flags: Dict[Tuple[str, str], int]) -> Tuple[Roster, AttendanceMatrix]:
    roster = Roster(flags.keys())
    return roster, AttendanceMatrix.from_mapping(roster, flags)


def write_csv_dir(tables: DatasetTables, directory) -> None:
    for name, frame in tables.items():
        frame.to_csv(directory / f"{name}.csv", index=False, lineterminator="\n")


@pytest.fixture
def tables_factory():
    return make_tables


@pytest.fixture
def roster_factory():
    return make_roster


@pytest.fixture
def toy_tables() -> DatasetTables:
    return make_tables()


@pytest.fixture
def toy_dataset(toy_tables) -> Dataset:
    return Dataset.from_tables(toy_tables)


@pytest.fixture
def toy_dir(tmp_path, toy_tables):
    directory = tmp_path / "toy"
    directory.mkdir()
    write_csv_dir(toy_tables, directory)
    return directory


@pytest.fixture
def csv_writer():
    return write_csv_dir

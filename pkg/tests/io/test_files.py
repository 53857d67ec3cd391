import pytest

from peeratt.core.errors import IoError
from peeratt.io.files import DatasetFiles, load_dataset, read_tables, write_tables


def test_load_toy_directory(toy_dir):
    dataset = load_dataset(DatasetFiles.from_dir(str(toy_dir)))
    assert dataset.student_ids == ("s1", "s2", "s3")
    assert dataset.roster.n_pairs == 10
    assert dataset.gpa()["s1"] == pytest.approx(3.65)


def test_paths_follow_table_names(tmp_path):
    files = DatasetFiles.from_dir(str(tmp_path))
    assert sorted(files.paths()) == ["attendance", "catalog", "classes", "grades",
                                     "registrations", "students"]
    assert files.grades.endswith("grades.csv")


def test_missing_file(toy_dir):
    (toy_dir / "grades.csv").unlink()
    with pytest.raises(IoError, match="grades.csv"):
        read_tables(DatasetFiles.from_dir(str(toy_dir)))


def test_empty_file(toy_dir):
    (toy_dir / "catalog.csv").write_text("", encoding="utf-8")
    with pytest.raises(IoError):
        read_tables(DatasetFiles.from_dir(str(toy_dir)))


def test_write_and_read_back(tmp_path, toy_tables):
    files = write_tables(toy_tables, str(tmp_path / "copy"))
    tables = read_tables(files)
    for (name, frame), (_, other) in zip(toy_tables.items(), tables.items()):
        assert frame.equals(other), name


def test_values_stay_strings(tmp_path, tables_factory):
    students = [("007", "M1", "14"), ("s2", "NA", "15")]
    attendance = [("007", "c1", "1"), ("s2", "c1", "0")]
    tables = tables_factory(students=students, attendance=attendance, grades=[],
                            classes=[("c1", "A", "K1", "all")])
    dataset = load_dataset(write_tables(tables, str(tmp_path / "ids")))
    assert dataset.student_ids == ("007", "s2")
    assert dataset.students["s2"].major == "NA"

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Tuple
import logging

from numpy import asarray, intp
from pandas import DataFrame, MultiIndex, Series

from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.entities import StudentRecord, ClassUnit, GradeRecord
from peeratt.core.errors import IntegrityError, DegenerateClassError, DegenerateStudentError, NotFoundError
from peeratt.core.grades import GradeScale
from peeratt.core.roster import Roster, AttendanceMatrix, pair_contributions
from peeratt.core.tables import DatasetTables, row_number

logger = logging.getLogger(__name__)


@dataclass
class IngestionSummary:
    """
    Records dropped or excluded during ingestion, by category.
    """
    dropped_students: List[str] = field(default_factory=list)
    dropped_classes: List[str] = field(default_factory=list)
    dropped_grades: int = 0
    excluded_grades: int = 0

    def as_dict(self) -> Dict[str, int]:
        return {"dropped_students": len(self.dropped_students),
                "dropped_classes": len(self.dropped_classes),
                "dropped_grades": self.dropped_grades,
                "excluded_grades": self.excluded_grades}


class Dataset:
    """
    The joined universe of students, class units, registrations, attendance flags,
    grades and course categories.
    """

    def __init__(self, students: Iterable[StudentRecord], classes: Iterable[ClassUnit],
                 catalog: Mapping[str, str], roster: Roster, attendance: AttendanceMatrix,
                 grades: Iterable[GradeRecord] = (), grade_scale: GradeScale = None,
                 summary: IngestionSummary = None) -> None:
        """
        Initialize and validate the dataset.
        Every student must have at least one registration and every class at least one registrant.

        Args:
            students (Iterable[StudentRecord]): The students.
            classes (Iterable[ClassUnit]): The class units.
            catalog (Mapping[str, str]): Category code to description, in catalog order.
            roster (Roster): The registrations.
            attendance (AttendanceMatrix): The attendance flags of the registrations.
            grades (Iterable[GradeRecord], optional): The course grades. Defaults to none.
            grade_scale (GradeScale, optional): Letter to points map. Defaults to the standard scale.
            summary (IngestionSummary, optional): What was dropped while building the records.
        """
        self.grade_scale = grade_scale if grade_scale is not None else GradeScale()
        self.summary = summary if summary is not None else IngestionSummary()
        self.catalog: Dict[str, str] = dict(catalog)

        # Classes
        self.classes: Dict[str, ClassUnit] = {}
        for unit in sorted(classes, key=lambda unit: unit.class_id):
            if unit.class_id in self.classes:
                raise IntegrityError(f"Duplicate class {unit.class_id}.")
            if unit.category not in self.catalog:
                raise IntegrityError(
                    f"Class {unit.class_id} has unknown category {unit.category}.")
            self.classes[unit.class_id] = unit

        # Students
        records: Dict[str, StudentRecord] = {}
        for student in students:
            if student.student_id in records:
                raise IntegrityError(
                    f"Duplicate student {student.student_id}.")
            records[student.student_id] = student

        # Registrations and attendance
        if attendance.roster is not roster:
            raise IntegrityError(
                "The attendance matrix is defined on another roster.")
        if set(roster.students) != set(records):
            raise IntegrityError(
                "The roster and the student records cover different students.")
        if set(roster.classes) != set(self.classes):
            raise IntegrityError(
                "The roster and the class records cover different classes.")
        for i, count in enumerate(roster.reg_student_counts):
            if count == 0:
                raise DegenerateStudentError(
                    f"Student {roster.students[i]} has no registrations.")
        for j, count in enumerate(roster.reg_class_counts):
            if count == 0:
                raise DegenerateClassError(
                    f"Class {roster.classes[j]} has no registrations.")
        self.roster = roster
        self.attendance = attendance

        # Grades
        courses = {unit.course_id for unit in self.classes.values()}
        self.grades: Tuple[GradeRecord, ...] = tuple(grades)
        gpa_max = self.grade_scale.gpa_max
        sums: Dict[str, float] = {}
        counts: Dict[str, int] = {}
        for grade in self.grades:
            if grade.student_id not in records:
                raise IntegrityError(
                    f"Grade references unknown student {grade.student_id}.")
            if grade.course_id not in courses:
                raise IntegrityError(
                    f"Grade references unknown course {grade.course_id}.")
            if grade.excluded:
                continue
            if not 0.0 <= grade.points <= gpa_max:
                raise IntegrityError(
                    f"Grade of {grade.student_id} in {grade.course_id} has points {grade.points} outside [0, {gpa_max}].")
            sums[grade.student_id] = sums.get(
                grade.student_id, 0.0) + grade.points
            counts[grade.student_id] = counts.get(grade.student_id, 0) + 1

        # GPA: the given value, else the mean grade points
        self.students: Dict[str, StudentRecord] = {}
        for student_id in roster.students:
            student = records[student_id]
            if student.gpa is None and student_id in counts:
                student = replace(
                    student, gpa=sums[student_id] / counts[student_id])
            if student.gpa is not None and not 0.0 <= student.gpa <= gpa_max:
                raise IntegrityError(
                    f"Student {student_id} has GPA {student.gpa} outside [0, {gpa_max}].")
            self.students[student_id] = student

        # Per-class lookups aligned with the roster's class order
        self._category_pos = {cat: k for k, cat in enumerate(self.catalog)}
        self.class_category = asarray(
            [self._category_pos[self.classes[c].category] for c in roster.classes], dtype=intp)
        self.courses: Tuple[str, ...] = tuple(sorted(courses))
        self._course_pos = {course: k for k, course in enumerate(self.courses)}
        self.class_course = asarray(
            [self._course_pos[self.classes[c].course_id] for c in roster.classes], dtype=intp)

        self._pair_frame: Optional[DataFrame] = None

    def __repr__(self) -> str:
        return (f"Dataset({self.n_students} students, {len(self.classes)} classes, "
                f"{self.roster.n_pairs} registrations, {len(self.grades)} grades)")

    @property
    def n_students(self) -> int:
        return len(self.students)

    @property
    def student_ids(self) -> Tuple[str, ...]:
        return self.roster.students

    @property
    def categories(self) -> Tuple[str, ...]:
        return tuple(self.catalog)

    @property
    def semesters(self) -> Tuple[str, ...]:
        return tuple(sorted({unit.semester for unit in self.classes.values()}))

    @property
    def majors(self) -> Tuple[str, ...]:
        return tuple(sorted({student.major for student in self.students.values()}))

    def category_index(self, category: str) -> int:
        try:
            return self._category_pos[category]
        except KeyError:
            raise NotFoundError(f"Unknown category {category}.")

    def course_index(self, course_id: str) -> int:
        try:
            return self._course_pos[course_id]
        except KeyError:
            raise NotFoundError(f"Unknown course {course_id}.")

    def gpa(self) -> Series:
        """
        GPA of every student (nan when the student has no letter grade), sorted by student id.
        """
        return Series([self.students[s].gpa for s in self.student_ids],
                      index=list(self.student_ids), dtype=FLOAT_DTYPE, name="gpa")

    def pair_frame(self) -> DataFrame:
        """
        One row per registration pair with the class attributes, the attendance flag,
        the class attendance rate and the attendance contribution.
        """
        if self._pair_frame is None:
            roster = self.roster
            rates, contributions = pair_contributions(
                roster.pair_class, self.attendance.flags, roster.n_classes)
            units = [self.classes[c] for c in roster.classes]
            self._pair_frame = DataFrame({
                "student_id": [roster.students[i] for i in roster.pair_student],
                "class_id": [roster.classes[j] for j in roster.pair_class],
                "course_id": [units[j].course_id for j in roster.pair_class],
                "category": [units[j].category for j in roster.pair_class],
                "semester": [units[j].semester for j in roster.pair_class],
                "attended": self.attendance.flags.astype(FLOAT_DTYPE),
                "class_rate": rates[roster.pair_class],
                "contribution": contributions,
            })
        return self._pair_frame

    def grade_frame(self) -> DataFrame:
        """
        Letter grades with their points and course category; non-letter grades are left out.
        """
        category = {unit.course_id: unit.category for unit in self.classes.values()}
        rows = [(g.student_id, g.course_id, category[g.course_id], g.letter, g.points)
                for g in self.grades if not g.excluded]
        frame = DataFrame(rows, columns=["student_id", "course_id", "category", "letter", "points"])
        frame["points"] = frame["points"].astype(FLOAT_DTYPE)
        return frame.sort_values(["student_id", "course_id"], kind="stable").reset_index(drop=True)

    @classmethod
    def from_tables(cls, tables: DatasetTables, grade_scale: GradeScale = None) -> "Dataset":
        """
        Validate the raw tables and build the dataset.
        Students without registrations and classes without registrants are dropped with a warning,
        and non-letter grades are kept but excluded from analyses.

        Args:
            tables (DatasetTables): The raw tables.
            grade_scale (GradeScale, optional): Letter to points map. Defaults to the standard scale.

        Returns:
            Dataset: The validated dataset.
        """
        grade_scale = grade_scale if grade_scale is not None else GradeScale()
        tables.validate_columns()
        summary = IngestionSummary()

        students, classes = tables.students, tables.classes
        registrations, attendance = tables.registrations, tables.attendance
        grades, catalog = tables.grades, tables.catalog

        # Required values and primary keys
        _check_not_empty(students, "students", ["student_id"])
        _check_not_empty(classes, "classes", [
                         "class_id", "course_id", "category", "semester"])
        _check_not_empty(catalog, "catalog", ["category"])
        _check_unique(students, "students", ["student_id"])
        _check_unique(classes, "classes", ["class_id"])
        _check_unique(catalog, "catalog", ["category"])
        _check_unique(registrations, "registrations",
                      ["student_id", "class_id"])
        _check_unique(attendance, "attendance", ["student_id", "class_id"])
        _check_unique(grades, "grades", ["student_id", "course_id"])

        # Foreign keys
        _check_reference(classes, "classes", "category",
                         catalog["category"], "catalog")
        _check_reference(registrations, "registrations",
                         "student_id", students["student_id"], "students")
        _check_reference(registrations, "registrations",
                         "class_id", classes["class_id"], "classes")
        _check_reference(grades, "grades", "student_id",
                         students["student_id"], "students")
        _check_reference(grades, "grades", "course_id",
                         classes["course_id"], "classes")

        # Attendance flags are defined exactly on the registrations
        reg_keys = MultiIndex.from_frame(
            registrations[["student_id", "class_id"]])
        att_keys = MultiIndex.from_frame(
            attendance[["student_id", "class_id"]])
        unregistered = ~att_keys.isin(reg_keys)
        if unregistered.any():
            pos = int(unregistered.nonzero()[0][0])
            raise IntegrityError(
                f"attendance.csv, row {row_number(pos)}: student {attendance['student_id'].iloc[pos]} "
                f"is not registered in class {attendance['class_id'].iloc[pos]}.")
        unflagged = ~reg_keys.isin(att_keys)
        if unflagged.any():
            pos = int(unflagged.nonzero()[0][0])
            raise IntegrityError(
                f"registrations.csv, row {row_number(pos)}: registration has no attendance flag.")
        invalid = ~attendance["attended"].isin(["0", "1"])
        if invalid.any():
            pos = int(invalid.to_numpy().nonzero()[0][0])
            raise IntegrityError(
                f"attendance.csv, row {row_number(pos)}: attended must be 0 or 1, "
                f"found {attendance['attended'].iloc[pos]!r}.")

        # Drop degenerate students and classes
        registered_students = set(registrations["student_id"])
        registered_classes = set(registrations["class_id"])
        summary.dropped_students = sorted(
            set(students["student_id"]) - registered_students)
        summary.dropped_classes = sorted(
            set(classes["class_id"]) - registered_classes)
        if summary.dropped_students:
            logger.warning(
                f"Dropped {len(summary.dropped_students)} student(s) without registrations: "
                f"{_preview(summary.dropped_students)}")
        if summary.dropped_classes:
            logger.warning(
                f"Dropped {len(summary.dropped_classes)} class(es) without registrants: "
                f"{_preview(summary.dropped_classes)}")
        students = students[students["student_id"].isin(registered_students)]
        classes = classes[classes["class_id"].isin(registered_classes)]

        # Grades: drop those of dropped students or of courses left without classes
        of_students = grades["student_id"].isin(registered_students)
        of_courses = grades["course_id"].isin(set(classes["course_id"]))
        kept = of_students & of_courses
        summary.dropped_grades = int((~kept).sum())
        if (~of_students).any():
            logger.warning(
                f"Dropped {int((~of_students).sum())} grade(s) of dropped students.")
        orphaned = int((of_students & ~of_courses).sum())
        if orphaned:
            logger.warning(
                f"Dropped {orphaned} grade(s) in courses without retained classes.")
        grade_records = []
        for student_id, course_id, letter in zip(grades["student_id"][kept], grades["course_id"][kept],
                                                 grades["letter"][kept]):
            points = grade_scale.points(letter)
            if points is None:
                summary.excluded_grades += 1
            grade_records.append(GradeRecord(
                student_id, course_id, letter, points))
        if summary.excluded_grades:
            logger.warning(
                f"Excluded {summary.excluded_grades} non-letter grade(s) from analyses.")

        # Records
        student_records = [StudentRecord(s, m, c) for s, m, c in zip(
            students["student_id"], students["major"], students["cohort"])]
        class_records = [ClassUnit(c, course, cat, sem) for c, course, cat, sem in zip(
            classes["class_id"], classes["course_id"], classes["category"], classes["semester"])]
        roster = Roster(zip(registrations["student_id"], registrations["class_id"]),
                        students=students["student_id"], classes=classes["class_id"])
        matrix = AttendanceMatrix.from_mapping(roster, dict(zip(
            zip(attendance["student_id"], attendance["class_id"]), attendance["attended"] == "1")))
        catalog_map = dict(zip(catalog["category"], catalog["description"]))

        dataset = cls(student_records, class_records, catalog_map, roster, matrix,
                      grade_records, grade_scale, summary)
        logger.info(f"Loaded {dataset}.")
        return dataset


def _preview(ids: List[str], n: int = 5) -> str:
    shown = ", ".join(ids[:n])
    return shown + (", ..." if len(ids) > n else "")


def _check_not_empty(frame: DataFrame, name: str, columns: List[str]) -> None:
    for column in columns:
        empty = (frame[column].str.strip() == "").to_numpy()
        if empty.any():
            pos = int(empty.nonzero()[0][0])
            raise IntegrityError(
                f"{name}.csv, row {row_number(pos)}: empty {column}.")


def _check_unique(frame: DataFrame, name: str, columns: List[str]) -> None:
    duplicated = frame.duplicated(subset=columns, keep="first").to_numpy()
    if duplicated.any():
        pos = int(duplicated.nonzero()[0][0])
        key = ", ".join(frame[column].iloc[pos] for column in columns)
        raise IntegrityError(
            f"{name}.csv, row {row_number(pos)}: duplicate key ({key}).")


def _check_reference(frame: DataFrame, name: str, column: str, valid: Series, target: str) -> None:
    dangling = (~frame[column].isin(set(valid))).to_numpy()
    if dangling.any():
        pos = int(dangling.nonzero()[0][0])
        raise IntegrityError(
            f"{name}.csv, row {row_number(pos)}: {column} {frame[column].iloc[pos]!r} "
            f"does not exist in {target}.csv.")

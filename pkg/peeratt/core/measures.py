from dataclasses import dataclass
from typing import Optional
import logging

from numpy import abs as np_abs
from pandas import DataFrame, Series

from peeratt.core.constants import FLOAT_DTYPE, Measure
from peeratt.core.dataset import Dataset
from peeratt.core.errors import (DegenerateClassError, DegenerateStudentError, EmptyInputError,
                                 NotRegisteredError, NumericalError)
from peeratt.core.roster import Roster, AttendanceMatrix

logger = logging.getLogger(__name__)

# Tolerance of the identity rai = ar - mean class rate
DECOMPOSITION_TOL = 1e-12


def class_rate(class_id: str, roster: Roster, attendance: AttendanceMatrix) -> float:
    """
    Attendance rate of a class: attended over registered students.
    """
    n_reg = roster.n_reg_class(class_id)
    if n_reg == 0:
        raise DegenerateClassError(f"Class {class_id} has no registrations.")
    return attendance.n_att_class(class_id) / n_reg


def student_rate(student_id: str, roster: Roster, attendance: AttendanceMatrix) -> float:
    """
    Attendance rate of a student: attended over registered classes.
    """
    n_reg = roster.n_reg_student(student_id)
    if n_reg == 0:
        raise DegenerateStudentError(
            f"Student {student_id} has no registrations.")
    return attendance.n_att_student(student_id) / n_reg


def contribution(student_id: str, class_id: str, roster: Roster, attendance: AttendanceMatrix) -> float:
    """
    Attendance contribution of a student to a class: the attendance flag minus the class rate.
    """
    attended = attendance.attended(student_id, class_id)
    return float(attended) - class_rate(class_id, roster, attendance)


def rai(student_id: str, roster: Roster, attendance: AttendanceMatrix) -> float:
    """
    Relative attendance index: the mean contribution over the classes the student registered.
    """
    pairs = roster.student_pairs(student_id)
    if len(pairs) == 0:
        raise DegenerateStudentError(
            f"Student {student_id} has no registrations.")
    return float(attendance.contributions()[pairs].mean())


def rai_by_category(student_id: str, category: str, dataset: Dataset) -> Optional[float]:
    """
    Mean contribution of a student over its registered classes of a category,
    or None when the student registered none.
    """
    k = dataset.category_index(category)
    roster = dataset.roster
    pairs = roster.student_pairs(student_id)
    pairs = pairs[dataset.class_category[roster.pair_class[pairs]] == k]
    if len(pairs) == 0:
        return None
    return float(dataset.attendance.contributions()[pairs].mean())


def course_rai(student_id: str, course_id: str, dataset: Dataset) -> float:
    """
    Mean contribution of a student over its registered class units of a course.
    """
    k = dataset.course_index(course_id)
    roster = dataset.roster
    pairs = roster.student_pairs(student_id)
    pairs = pairs[dataset.class_course[roster.pair_class[pairs]] == k]
    if len(pairs) == 0:
        raise NotRegisteredError(
            f"Student {student_id} is not registered in course {course_id}.")
    return float(dataset.attendance.contributions()[pairs].mean())


@dataclass
class MeasureTable:
    """
    Attendance measures of every student of a dataset, indexed by student id.

    Student-level values aggregate the per-semester values by an
    enrollment-weighted mean.
    Category and semester tables hold nan where the student registered no class.
    """
    ar: Series
    rai: Series
    n_registered: Series
    n_attended: Series
    mean_class_rate: Series
    class_rates: Series
    category_ar: DataFrame
    category_rai: DataFrame
    semester_ar: DataFrame
    semester_rai: DataFrame
    semester_registered: DataFrame

    def measure(self, measure: Measure) -> Series:
        return self.ar if Measure(measure) == Measure.AR else self.rai

    def category(self, measure: Measure) -> DataFrame:
        return self.category_ar if Measure(measure) == Measure.AR else self.category_rai

    def semester(self, measure: Measure) -> DataFrame:
        return self.semester_ar if Measure(measure) == Measure.AR else self.semester_rai

    def frame(self) -> DataFrame:
        """
        The student-level measures as one table.
        """
        frame = DataFrame({"ar": self.ar, "rai": self.rai,
                           "n_registered": self.n_registered,
                           "n_attended": self.n_attended,
                           "mean_class_rate": self.mean_class_rate})
        frame.index.name = "student_id"
        return frame

    def validate(self) -> None:
        """
        Check the bounds of the measures and the identity rai = ar - mean class rate.
        """
        if ((self.ar < 0.0) | (self.ar > 1.0)).any():
            raise NumericalError("Attendance rate outside [0, 1].")
        if ((self.rai <= -1.0) | (self.rai >= 1.0)).any():
            raise NumericalError("Relative attendance index outside (-1, 1).")
        gap = np_abs(self.rai - (self.ar - self.mean_class_rate))
        if (gap > DECOMPOSITION_TOL).any():
            raise NumericalError(
                f"Relative attendance index departs from ar - mean class rate by {gap.max():.3e}.")


def compute_measures(dataset: Dataset) -> MeasureTable:
    """
    Compute every measure of every student in one pass over the registration pairs.

    Args:
        dataset (Dataset): The dataset.

    Returns:
        MeasureTable: The measures.
    """
    pairs = dataset.pair_frame()
    students = list(dataset.student_ids)
    categories = list(dataset.categories)
    semesters = list(dataset.semesters)
    if pairs.empty:
        raise EmptyInputError("The dataset has no registrations.")

    # Per-semester measures
    by_semester = pairs.groupby(["student_id", "semester"], sort=True)
    semester_registered = by_semester.size().unstack().reindex(
        index=students, columns=semesters).fillna(0).astype(int)
    semester_ar = by_semester["attended"].mean().unstack().reindex(
        index=students, columns=semesters).astype(FLOAT_DTYPE)
    semester_rai = by_semester["contribution"].mean().unstack().reindex(
        index=students, columns=semesters).astype(FLOAT_DTYPE)
    semester_rate = by_semester["class_rate"].mean().unstack().reindex(
        index=students, columns=semesters).astype(FLOAT_DTYPE)

    # Enrollment-weighted aggregate over semesters
    weights = semester_registered.astype(FLOAT_DTYPE)
    n_registered = semester_registered.sum(axis=1)

    def aggregate(table: DataFrame) -> Series:
        return (table.fillna(0.0) * weights).sum(axis=1) / n_registered

    ar = aggregate(semester_ar)
    rai = aggregate(semester_rai)
    mean_class_rate = aggregate(semester_rate)

    # Per-category measures
    by_category = pairs.groupby(["student_id", "category"], sort=True)
    category_ar = by_category["attended"].mean().unstack().reindex(
        index=students, columns=categories).astype(FLOAT_DTYPE)
    category_rai = by_category["contribution"].mean().unstack().reindex(
        index=students, columns=categories).astype(FLOAT_DTYPE)

    class_rates = pairs.groupby("class_id", sort=True)["class_rate"].first()
    n_attended = pairs.groupby("student_id", sort=True)["attended"].sum().reindex(
        students).astype(int)

    table = MeasureTable(ar=ar.rename("ar"), rai=rai.rename("rai"),
                         n_registered=n_registered.rename("n_registered"),
                         n_attended=n_attended.rename("n_attended"),
                         mean_class_rate=mean_class_rate.rename(
                             "mean_class_rate"),
                         class_rates=class_rates.rename("class_rate"),
                         category_ar=category_ar, category_rai=category_rai,
                         semester_ar=semester_ar, semester_rai=semester_rai,
                         semester_registered=semester_registered)
    for frame in (table.category_ar, table.category_rai, table.semester_ar,
                  table.semester_rai, table.semester_registered):
        frame.index.name = "student_id"
    logger.debug(f"Computed measures of {len(students)} students.")
    return table


def course_measures(dataset: Dataset) -> DataFrame:
    """
    Attendance rate and mean contribution of every student in every course it registered.

    Returns:
        DataFrame: Columns student_id, course_id, category, n_units, ar, rai,
        sorted by student and course.
    """
    pairs = dataset.pair_frame()
    grouped = pairs.groupby(["student_id", "course_id"], sort=True)
    frame = DataFrame({"category": grouped["category"].first(),
                       "n_units": grouped.size(),
                       "ar": grouped["attended"].mean(),
                       "rai": grouped["contribution"].mean()})
    return frame.reset_index()

from dataclasses import dataclass, field
from typing import Optional

from peeratt.core.constants import ALL_SEMESTERS


@dataclass(frozen=True)
class StudentRecord:
    """
    A student, referenced by an opaque (hashed) identifier.
    """
    student_id: str = field(hash=True)
    major: str = field(default="", hash=False)
    cohort: str = field(default="", hash=False)
    gpa: Optional[float] = field(default=None, hash=False)


@dataclass(frozen=True)
class ClassUnit:
    """
    The unit at which one attendance flag exists per registered student:
    a single meeting of a course section, or a whole course.
    """
    class_id: str = field(hash=True)
    course_id: str = field(default="", hash=False)
    category: str = field(default="", hash=False)
    semester: str = field(default=ALL_SEMESTERS, hash=False)


@dataclass(frozen=True)
class GradeRecord:
    """
    Grade of a student in a course. Non-letter grades (e.g. P/F) carry no points.
    """
    student_id: str
    course_id: str
    letter: str
    points: Optional[float] = None

    @property
    def excluded(self) -> bool:
        return self.points is None

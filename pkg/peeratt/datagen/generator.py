from dataclasses import dataclass
from hashlib import sha256
from typing import List, Tuple
import logging

from numpy import asarray, clip, isin, zeros, sort
from numpy.random import Generator, PCG64, SeedSequence
from pandas import DataFrame

from peeratt.core.constants import ALL_SEMESTERS
from peeratt.core.dataset import Dataset
from peeratt.core.grades import GradeScale
from peeratt.core.tables import COLUMNS, DatasetTables
from peeratt.datagen.config import GenConfig

logger = logging.getLogger(__name__)

# Letter given to the pass/fail record of the edge cases
PASS_LETTER = "P"


@dataclass
class GroundTruth:
    """
    Latent quantities behind a synthetic cohort.

    Attributes:
        students (DataFrame): student_id, major, group, motivation; sorted by student id.
        courses (DataFrame): course_id, category, mandatory; sorted by course id.
    """
    students: DataFrame
    courses: DataFrame

    def planted_groups(self, student_ids) -> List[str]:
        """
        Planted group of each student, in the given order.
        """
        groups = self.students.set_index("student_id")["group"]
        return [groups[s] for s in student_ids]


def entity_key(kind: str, entity: str) -> int:
    """
    Stable 64-bit key of an entity.
    """
    return int.from_bytes(sha256(f"{kind}:{entity}".encode("utf-8")).digest()[:8], "big")


def substream(seed: int, kind: str, entity: str) -> Generator:
    """
    PCG64 generator of one entity, independent of every other entity.
    """
    return Generator(PCG64(SeedSequence([seed, entity_key(kind, entity)])))


def student_id(key) -> str:
    """
    Opaque identifier of a generated student.
    """
    return sha256(f"student:{key}".encode("utf-8")).hexdigest()[:16]


def _blocks(sizes: List[Tuple[str, int]]) -> List[str]:
    return [name for name, size in sizes for _ in range(size)]


def generate_tables(config: GenConfig, grade_scale: GradeScale = None) -> Tuple[DatasetTables, GroundTruth]:
    """
    Generate the raw tables of a synthetic cohort.

    Args:
        config (GenConfig): The cohort parameters.
        grade_scale (GradeScale, optional): Letters used for the grades. Defaults to the standard scale.

    Returns:
        Tuple[DatasetTables, GroundTruth]: The tables and the latent quantities.
    """
    if grade_scale is None:
        grade_scale = GradeScale()
    seed = config.seed

    # Catalog and courses
    categories = [f"CAT{k + 1:02d}" for k in range(config.n_categories)]
    catalog = [(cat, f"Category {k + 1:02d}") for k, cat in enumerate(categories)]
    courses = [(f"{cat}-{j + 1:02d}", k) for k, cat in enumerate(categories)
               for j in range(config.courses_per_category)]
    semesters = [ALL_SEMESTERS] if config.n_semesters == 1 else \
        [f"S{t + 1}" for t in range(config.n_semesters)]

    # Attendance policies, per course or per category
    mandatory = zeros(len(courses), dtype=bool)
    if config.policy_by_category:
        n_mandatory = int(round(config.mandatory_fraction * config.n_categories))
        policy_categories = substream(seed, "policy", "categories").permutation(config.n_categories)[:n_mandatory]
        mandatory[isin([k for _, k in courses], policy_categories)] = True
    else:
        n_mandatory = int(round(config.mandatory_fraction * len(courses)))
        mandatory[substream(seed, "policy", "courses").permutation(len(courses))[:n_mandatory]] = True

    # Students
    majors = _blocks(list(config.majors))
    groups = _blocks([(g.name, g.size) for g in config.planted_groups]) \
        if config.planted_groups else [""] * config.n_students
    affinity = {g.name: asarray(g.affinity) for g in config.planted_groups}
    affinity[""] = zeros(config.n_categories)

    students, registrations, attendance, grades, truth = [], [], [], [], []
    classes = set()
    course_category = asarray([k for _, k in courses])
    for i in range(config.n_students):
        sid = student_id(i)
        motivation = float(substream(seed, "motivation", sid).beta(
            config.motivation_alpha, config.motivation_beta))
        students.append((sid, majors[i], config.cohorts[i % len(config.cohorts)]))
        truth.append((sid, majors[i], groups[i], motivation))

        # Courses, distinct across semesters
        weights = clip(1.0 + affinity[groups[i]][course_category], 0.05, None)
        chosen = substream(seed, "courses", sid).choice(
            len(courses), size=config.registrations * config.n_semesters,
            replace=False, p=weights / weights.sum())
        attend_rng = substream(seed, "attendance", sid)
        grade_rng = substream(seed, "grade", sid)
        for t, semester in enumerate(semesters):
            for c in sort(chosen[t * config.registrations:(t + 1) * config.registrations]):
                course_id, k = courses[c]
                floor = config.policy_floor * mandatory[c]
                probability = clip(floor + motivation * (1.0 - floor) + affinity[groups[i]][k], 0.0, 1.0)
                flags = attend_rng.random(config.meetings) < probability
                for m in range(config.meetings):
                    class_id = f"{course_id}-{semester}-M{m + 1:02d}"
                    classes.add((class_id, course_id, categories[k], semester))
                    registrations.append((sid, class_id))
                    attendance.append((sid, class_id, "1" if flags[m] else "0"))
                target = clip(motivation + config.grade_noise * grade_rng.standard_normal(), 0.0, 1.0)
                grades.append((sid, course_id, grade_scale.nearest_letter(grade_scale.gpa_max * target)))

    if config.edge_cases:
        _add_edge_cases(config, categories[0], semesters[0], students, classes,
                        registrations, attendance, grades, truth)

    tables = DatasetTables(
        students=_frame("students", students),
        classes=_frame("classes", classes),
        registrations=_frame("registrations", registrations),
        attendance=_frame("attendance", attendance),
        grades=_frame("grades", grades),
        catalog=DataFrame(catalog, columns=COLUMNS["catalog"]))
    ground_truth = GroundTruth(
        students=DataFrame(truth, columns=["student_id", "major", "group", "motivation"]).sort_values(
            "student_id", kind="stable").reset_index(drop=True),
        courses=DataFrame({"course_id": [c for c, _ in courses],
                           "category": [categories[k] for _, k in courses],
                           "mandatory": mandatory.astype(int)}))
    logger.info(f"Generated {len(tables.students)} students, {len(tables.classes)} classes "
                f"and {len(tables.registrations)} registrations (seed {seed}).")
    return tables, ground_truth


def _add_edge_cases(config: GenConfig, category: str, semester: str, students: list, classes: set,
                    registrations: list, attendance: list, grades: list, truth: list) -> None:
    """
    Degenerate records: a single-registrant course with a pass/fail grade, a student with
    a single class, a class without registrants and a student without registrations.
    """
    first, major, cohort = students[0]
    rng = substream(config.seed, "edge", "cases")

    # Course with one unit and one registrant
    single = f"EDGE-01-{semester}-M01"
    classes.add((single, "EDGE-01", category, semester))
    registrations.append((first, single))
    attendance.append((first, single, "1"))
    grades.append((first, "EDGE-01", PASS_LETTER))

    # Student registered in exactly one class
    solo = student_id("solo")
    target = min(class_id for class_id, course_id, _, _ in classes if course_id != "EDGE-01")
    students.append((solo, major, cohort))
    truth.append((solo, major, "", float(rng.random())))
    registrations.append((solo, target))
    attendance.append((solo, target, "1"))

    # Class without registrants and student without registrations
    classes.add((f"EDGE-02-{semester}-M01", "EDGE-02", category, semester))
    idle = student_id("idle")
    students.append((idle, major, cohort))
    truth.append((idle, major, "", float(rng.random())))


def _frame(name: str, rows) -> DataFrame:
    return DataFrame(sorted(rows), columns=COLUMNS[name])


def generate(config: GenConfig, grade_scale: GradeScale = None) -> Tuple[Dataset, GroundTruth]:
    """
    Generate a synthetic cohort and load it as a dataset.
    Degenerate records of the edge cases are dropped by the loader, and the ground-truth
    students are restricted to the loaded ones. `generate_tables` keeps every generated student.
    """
    tables, truth = generate_tables(config, grade_scale)
    dataset = Dataset.from_tables(tables, grade_scale)
    loaded = truth.students["student_id"].isin(dataset.student_ids)
    truth.students = truth.students[loaded].reset_index(drop=True)
    return dataset, truth

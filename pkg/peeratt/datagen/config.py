from dataclasses import dataclass, field, fields, asdict
from enum import Enum
from os.path import exists
from typing import Dict, Tuple
import json

from peeratt.core.errors import ConfigError, IoError


@dataclass(frozen=True)
class PlantedGroup:
    """
    A group of students sharing an attendance affinity (added to the attendance
    probability) for every course category.
    """
    name: str
    size: int
    affinity: Tuple[float, ...]


@dataclass(frozen=True)
class GenConfig:
    """
    Parameters of a synthetic cohort.

    Every student registers `registrations` courses per semester, never the same course
    twice, and attends each of the `meetings` class units of a course with probability
    clamp(floor * mandatory + motivation * (1 - floor * mandatory) + affinity).
    Course grades are the letter nearest to gpa_max * clamp(motivation + noise).
    With `policy_by_category`, the mandatory fraction selects whole categories
    instead of single courses.
    """
    n_students: int = 600
    majors: Tuple[Tuple[str, int], ...] = (("M01", 150), ("M02", 150), ("M03", 150), ("M04", 150))
    cohorts: Tuple[str, ...] = ("14", "15", "16", "17", "18", "19")
    n_categories: int = 12
    courses_per_category: int = 5
    registrations: int = 6
    n_semesters: int = 1
    meetings: int = 8
    mandatory_fraction: float = 0.5
    policy_by_category: bool = False
    policy_floor: float = 0.9
    motivation_alpha: float = 2.0
    motivation_beta: float = 2.0
    grade_noise: float = 0.1
    planted_groups: Tuple[PlantedGroup, ...] = field(default_factory=tuple)
    edge_cases: bool = False
    seed: int = 7

    def __post_init__(self) -> None:
        self.validate()

    @property
    def n_courses(self) -> int:
        return self.n_categories * self.courses_per_category

    def validate(self) -> None:
        """
        Check the counts, the probabilities and the feasibility of the registrations.
        """
        for name in ("n_students", "n_categories", "courses_per_category",
                     "registrations", "n_semesters", "meetings"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}.")
        for name in ("mandatory_fraction", "policy_floor"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {getattr(self, name)}.")
        if self.motivation_alpha <= 0.0 or self.motivation_beta <= 0.0:
            raise ConfigError("Motivation distribution parameters must be positive.")
        if self.grade_noise < 0.0:
            raise ConfigError(f"grade_noise must be non-negative, got {self.grade_noise}.")
        if not self.cohorts:
            raise ConfigError("At least one cohort is needed.")
        if self.seed < 0:
            raise ConfigError(f"The seed must be non-negative, got {self.seed}.")
        if self.registrations * self.n_semesters > self.n_courses:
            raise ConfigError(
                f"{self.registrations} registrations over {self.n_semesters} semester(s) "
                f"need more than the {self.n_courses} available courses.")
        if sum(size for _, size in self.majors) != self.n_students or not self.majors:
            raise ConfigError("Major sizes must add up to the number of students.")
        if len({code for code, _ in self.majors}) != len(self.majors):
            raise ConfigError("Major codes must be unique.")
        if self.planted_groups:
            if sum(group.size for group in self.planted_groups) != self.n_students:
                raise ConfigError("Planted groups must partition the students.")
            for group in self.planted_groups:
                if group.size < 1:
                    raise ConfigError(f"Planted group {group.name} is empty.")
                if len(group.affinity) != self.n_categories:
                    raise ConfigError(
                        f"Planted group {group.name} needs {self.n_categories} affinities.")

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["majors"] = {code: size for code, size in self.majors}
        data["cohorts"] = list(self.cohorts)
        data["planted_groups"] = [{"name": g.name, "size": g.size, "affinity": list(g.affinity)}
                                  for g in self.planted_groups]
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "GenConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown generator settings: {', '.join(unknown)}.")
        data = dict(data)
        try:
            if "majors" in data:
                data["majors"] = tuple((str(code), int(size)) for code, size in data["majors"].items())
            if "cohorts" in data:
                data["cohorts"] = tuple(str(cohort) for cohort in data["cohorts"])
            if "planted_groups" in data:
                data["planted_groups"] = tuple(
                    PlantedGroup(str(g["name"]), int(g["size"]), tuple(float(a) for a in g["affinity"]))
                    for g in data["planted_groups"])
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Malformed generator settings: {e}")
        return cls(**data)

    def to_file(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as file:
            json.dump(self.to_dict(), file, indent=4)
            file.write("\n")

    @classmethod
    def from_file(cls, path: str) -> "GenConfig":
        if not exists(path):
            raise IoError(f"Generator config file {path} does not exist.")
        try:
            with open(path, "r", encoding="utf-8") as file:
                data = json.load(file)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a JSON object.")
        return cls.from_dict(data)


class PresetType(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"


def _planted_affinities(n_groups: int, n_categories: int, favoured: float,
                        other: float) -> Tuple[Tuple[float, ...], ...]:
    return tuple(tuple(favoured if k % n_groups == g else other for k in range(n_categories))
                 for g in range(n_groups))


def create_preset(type: PresetType = PresetType.G1, seed: int = None) -> GenConfig:
    """
    Shipped generator configurations.
    G1 contrasts mandatory and voluntary courses for the correlation analyses,
    G2 plants groups with distinct category affinities for the clustering analysis,
    and G3 is a small cohort with degenerate records.
    """
    type = PresetType(type)
    kwargs = {} if seed is None else {"seed": seed}

    if type == PresetType.G1:
        return GenConfig(policy_by_category=True, **kwargs)
    if type == PresetType.G2:
        affinities = _planted_affinities(3, 20, 0.4, -0.2)
        return GenConfig(n_students=300,
                         majors=(("MA", 75), ("MB", 75), ("MC", 75), ("MD", 75)),
                         n_categories=20, courses_per_category=1, registrations=20,
                         meetings=30, mandatory_fraction=0.0,
                         motivation_alpha=40.0, motivation_beta=40.0,
                         planted_groups=tuple(PlantedGroup(f"P{g + 1}", 100, affinity)
                                              for g, affinity in enumerate(affinities)),
                         **kwargs)
    if type == PresetType.G3:
        return GenConfig(n_students=30, majors=(("X1", 15), ("X2", 15)),
                         n_categories=3, courses_per_category=2, registrations=2,
                         n_semesters=2, meetings=4, mandatory_fraction=0.5,
                         edge_cases=True, **kwargs)


def preset_configs() -> Dict[str, GenConfig]:
    return {preset.value: create_preset(preset) for preset in PresetType}

from typing import Dict, List, Optional
from os.path import exists

from pandas import read_csv
from pandas.errors import EmptyDataError, ParserError

from peeratt.core.constants import DEFAULT_GRADE_POINTS
from peeratt.core.errors import ConfigError, IoError


class GradeScale:
    """
    Map from letter grades to grade points.
    Letters are ordered by their points; letters outside the map are non-letter grades.
    """

    def __init__(self, points: Dict[str, float] = None) -> None:
        if points is None:
            points = DEFAULT_GRADE_POINTS
        if not points:
            raise ConfigError("A grade scale needs at least one letter.")
        for letter, value in points.items():
            if value < 0:
                raise ConfigError(
                    f"Grade {letter} has negative points ({value}).")
        self._points = {str(letter): float(value)
                        for letter, value in points.items()}

    def __repr__(self) -> str:
        return f"GradeScale({self._points})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GradeScale) and self._points == other._points

    @property
    def gpa_max(self) -> float:
        return max(self._points.values())

    @property
    def letters(self) -> List[str]:
        """
        Letters sorted from the highest to the lowest points.
        """
        return sorted(self._points, key=lambda letter: (-self._points[letter], letter))

    def as_dict(self) -> Dict[str, float]:
        return dict(self._points)

    def is_letter(self, letter: str) -> bool:
        return letter in self._points

    def points(self, letter: str) -> Optional[float]:
        return self._points.get(letter)

    def threshold(self, letter: str) -> float:
        """
        Points of a letter used as a grade cut.
        """
        if letter not in self._points:
            raise ConfigError(
                f"Grade cut {letter} is not a letter of the scale {self.letters}.")
        return self._points[letter]

    def nearest_letter(self, points: float) -> str:
        """
        Letter whose points are closest to the given value (ties go to the higher letter).
        """
        return min(self.letters, key=lambda letter: abs(self._points[letter] - points))

    @classmethod
    def from_file(cls, path: str) -> "GradeScale":
        """
        Load a scale from a CSV file with the header: letter,points.
        """
        if not exists(path):
            raise IoError(f"Grade scale file {path} does not exist.")
        try:
            frame = read_csv(path, dtype=str, keep_default_na=False,
                             encoding="utf-8")
        except (EmptyDataError, ParserError, UnicodeDecodeError) as e:
            raise IoError(f"Cannot read grade scale file {path}: {e}")
        if list(frame.columns) != ["letter", "points"]:
            raise ConfigError(
                f"{path}: expected header letter,points but found {','.join(frame.columns)}.")
        points = {}
        for row, (letter, value) in enumerate(zip(frame["letter"], frame["points"])):
            try:
                points[letter] = float(value)
            except ValueError:
                raise ConfigError(
                    f"{path}, row {row + 2}: invalid points value {value!r}.")
        return cls(points)

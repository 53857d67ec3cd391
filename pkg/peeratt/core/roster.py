from typing import Dict, Iterable, Mapping, Tuple

from numpy import ndarray, arange, array, asarray, bincount, concatenate, cumsum, zeros, argsort, errstate, intp

from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.errors import IntegrityError, NotFoundError, NotRegisteredError


class Roster:
    """
    Bipartite registration structure between students and class units.

    Registrations are stored as index arrays sorted by (student, class), so that
    the classes K_s of a student occupy a contiguous slice of the pair arrays.
    """

    def __init__(self, registrations: Iterable[Tuple[str, str]],
                 students: Iterable[str] = None, classes: Iterable[str] = None) -> None:
        """
        Initialize the roster.

        Args:
            registrations (Iterable[Tuple[str, str]]): The (student_id, class_id) pairs.
            students (Iterable[str], optional): Full student universe. If None, taken from the pairs.
            classes (Iterable[str], optional): Full class universe. If None, taken from the pairs.
        """
        pairs = sorted(set((str(s), str(c)) for s, c in registrations))
        pair_students = {s for s, _ in pairs}
        pair_classes = {c for _, c in pairs}

        if students is None:
            students = pair_students
        else:
            students = set(map(str, students))
            unknown = sorted(pair_students - students)
            if unknown:
                raise IntegrityError(
                    f"Registration references unknown student {unknown[0]}.")
        if classes is None:
            classes = pair_classes
        else:
            classes = set(map(str, classes))
            unknown = sorted(pair_classes - classes)
            if unknown:
                raise IntegrityError(
                    f"Registration references unknown class {unknown[0]}.")

        self.students: Tuple[str, ...] = tuple(sorted(students))
        self.classes: Tuple[str, ...] = tuple(sorted(classes))
        self.registrations: Tuple[Tuple[str, str], ...] = tuple(pairs)

        self._student_pos: Dict[str, int] = {
            s: i for i, s in enumerate(self.students)}
        self._class_pos: Dict[str, int] = {
            c: i for i, c in enumerate(self.classes)}
        self._pair_pos: Dict[Tuple[str, str], int] = {
            pair: k for k, pair in enumerate(self.registrations)}

        # Pair index arrays
        self.pair_student = asarray(
            [self._student_pos[s] for s, _ in pairs], dtype=intp)
        self.pair_class = asarray(
            [self._class_pos[c] for _, c in pairs], dtype=intp)

        # Registration counts
        self.reg_student_counts = bincount(
            self.pair_student, minlength=self.n_students)
        self.reg_class_counts = bincount(
            self.pair_class, minlength=self.n_classes)

        # Offsets of each student's (contiguous) pairs, and
        # pairs grouped by class
        self._student_offsets = concatenate(
            ([0], cumsum(self.reg_student_counts))).astype(intp)
        self._class_order = argsort(self.pair_class, kind="stable")
        self._class_offsets = concatenate(
            ([0], cumsum(self.reg_class_counts))).astype(intp)

    def __repr__(self) -> str:
        return f"Roster({self.n_students} students, {self.n_classes} classes, {self.n_pairs} registrations)"

    def __len__(self) -> int:
        return self.n_pairs

    @property
    def n_pairs(self) -> int:
        return len(self.registrations)

    @property
    def n_students(self) -> int:
        return len(self.students)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def student_index(self, student_id: str) -> int:
        try:
            return self._student_pos[student_id]
        except KeyError:
            raise NotFoundError(f"Unknown student {student_id}.")

    def class_index(self, class_id: str) -> int:
        try:
            return self._class_pos[class_id]
        except KeyError:
            raise NotFoundError(f"Unknown class {class_id}.")

    def pair_index(self, student_id: str, class_id: str) -> int:
        """
        Position of a registration in the pair arrays.
        """
        self.student_index(student_id)
        self.class_index(class_id)
        try:
            return self._pair_pos[(student_id, class_id)]
        except KeyError:
            raise NotRegisteredError(
                f"Student {student_id} is not registered in class {class_id}.")

    def is_registered(self, student_id: str, class_id: str) -> bool:
        return (student_id, class_id) in self._pair_pos

    def student_pairs(self, student_id: str) -> ndarray:
        """
        Pair positions of the classes K_s registered by a student.
        """
        i = self.student_index(student_id)
        return self._student_pair_slice(i)

    def _student_pair_slice(self, i: int) -> ndarray:
        return arange(self._student_offsets[i], self._student_offsets[i + 1], dtype=intp)

    def class_pairs(self, class_id: str) -> ndarray:
        """
        Pair positions of the students reg(c) registered in a class.
        """
        j = self.class_index(class_id)
        return self._class_order[self._class_offsets[j]: self._class_offsets[j + 1]]

    def classes_of(self, student_id: str) -> Tuple[str, ...]:
        return tuple(self.classes[j] for j in self.pair_class[self.student_pairs(student_id)])

    def students_of(self, class_id: str) -> Tuple[str, ...]:
        return tuple(self.students[i] for i in self.pair_student[self.class_pairs(class_id)])

    def n_reg_class(self, class_id: str) -> int:
        return int(self.reg_class_counts[self.class_index(class_id)])

    def n_reg_student(self, student_id: str) -> int:
        return int(self.reg_student_counts[self.student_index(student_id)])


class AttendanceMatrix:
    """
    Attendance flags a_sc, defined exactly on the registration pairs of a roster.
    """

    def __init__(self, roster: Roster, flags: ndarray) -> None:
        """
        Initialize the attendance matrix.

        Args:
            roster (Roster): The registrations.
            flags (ndarray): Boolean flag of each registration pair, aligned with roster.registrations.
        """
        flags = array(flags, dtype=bool)
        if flags.shape != (roster.n_pairs,):
            raise IntegrityError(
                f"Expected {roster.n_pairs} attendance flags, got {flags.shape}.")
        self.roster = roster
        self.flags = flags
        self.flags.setflags(write=False)

        # Attendance counts
        weights = self.flags.astype(FLOAT_DTYPE)
        self.att_class_counts = bincount(
            roster.pair_class, weights=weights, minlength=roster.n_classes).astype(intp)
        self.att_student_counts = bincount(
            roster.pair_student, weights=weights, minlength=roster.n_students).astype(intp)

    @classmethod
    def from_mapping(cls, roster: Roster, attended: Mapping[Tuple[str, str], bool]) -> "AttendanceMatrix":
        """
        Build the matrix from a {(student_id, class_id): attended} mapping.
        The mapping must cover exactly the roster's registrations.
        """
        flags = zeros(roster.n_pairs, dtype=bool)
        seen = zeros(roster.n_pairs, dtype=bool)
        for (student_id, class_id), value in attended.items():
            k = roster.pair_index(str(student_id), str(class_id))
            flags[k], seen[k] = bool(value), True
        if not seen.all():
            student_id, class_id = roster.registrations[int(
                (~seen).nonzero()[0][0])]
            raise IntegrityError(
                f"Registration ({student_id}, {class_id}) has no attendance flag.")
        return cls(roster, flags)

    def attended(self, student_id: str, class_id: str) -> bool:
        return bool(self.flags[self.roster.pair_index(student_id, class_id)])

    def n_att_class(self, class_id: str) -> int:
        return int(self.att_class_counts[self.roster.class_index(class_id)])

    def n_att_student(self, student_id: str) -> int:
        return int(self.att_student_counts[self.roster.student_index(student_id)])

    def class_rates(self) -> ndarray:
        """
        Attendance rate r_c of every class of the roster (nan for classes without registrations).
        """
        rates, _ = pair_contributions(
            self.roster.pair_class, self.flags, self.roster.n_classes)
        return rates

    def contributions(self) -> ndarray:
        """
        Attendance contribution D_sc = a_sc - r_c of every registration pair.
        """
        _, contributions = pair_contributions(
            self.roster.pair_class, self.flags, self.roster.n_classes)
        return contributions


def pair_contributions(pair_class: ndarray, flags: ndarray, n_classes: int) -> Tuple[ndarray, ndarray]:
    """
    Compute the class attendance rates and the attendance contribution of every pair.

    Args:
        pair_class (ndarray): Class index of each registration pair.
        flags (ndarray): Attendance flag of each registration pair.
        n_classes (int): Number of classes.

    Returns:
        Tuple[ndarray, ndarray]: The rate of each class (nan without registrations) and
        the contribution of each pair.
    """
    weights = asarray(flags, dtype=FLOAT_DTYPE)
    n_reg = bincount(pair_class, minlength=n_classes)
    n_att = bincount(pair_class, weights=weights, minlength=n_classes)
    with errstate(invalid="ignore", divide="ignore"):
        rates = n_att / n_reg
    return rates, weights - rates[pair_class]


def per_student_mean(pair_student: ndarray, values: ndarray, n_students: int) -> ndarray:
    """
    Mean of pair values over the classes of each student (nan without registrations).
    """
    counts = bincount(pair_student, minlength=n_students)
    sums = bincount(pair_student, weights=asarray(values, dtype=FLOAT_DTYPE),
                    minlength=n_students)
    with errstate(invalid="ignore", divide="ignore"):
        return sums / counts

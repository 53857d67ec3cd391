import pytest

from peeratt.core.constants import Measure
from peeratt.core.errors import (DegenerateClassError, DegenerateStudentError, NotFoundError,
                                 NotRegisteredError, NumericalError)
from peeratt.core.measures import (class_rate, student_rate, contribution, rai, rai_by_category,
                                   course_rai, compute_measures, course_measures)
from peeratt.core.roster import Roster, AttendanceMatrix


def test_class_rate_examples(roster_factory):
    roster, att = roster_factory({("a", "x"): 1, ("b", "x"): 1, ("c", "x"): 1,
                                  ("a", "y"): 0, ("b", "y"): 0, ("c", "y"): 0, ("d", "y"): 0,
                                  ("a", "z"): 1, ("b", "z"): 0})
    assert class_rate("x", roster, att) == 1.0
    assert class_rate("y", roster, att) == 0.0
    assert class_rate("z", roster, att) == 0.5
    with pytest.raises(NotFoundError):
        class_rate("w", roster, att)


def test_class_rate_of_empty_class():
    roster = Roster([("a", "x")], classes=["x", "y"])
    att = AttendanceMatrix(roster, [True])
    with pytest.raises(DegenerateClassError):
        class_rate("y", roster, att)


def test_student_rate_examples(roster_factory):
    flags = {("full", f"c{k}"): 1 for k in range(5)}
    flags.update({("quarter", f"c{k}"): int(k == 0) for k in range(4)})
    flags.update({("none", f"c{k}"): 0 for k in range(3)})
    roster, att = roster_factory(flags)
    assert student_rate("full", roster, att) == 1.0
    assert student_rate("quarter", roster, att) == 0.25
    assert student_rate("none", roster, att) == 0.0
    with pytest.raises(NotFoundError):
        student_rate("ghost", roster, att)


def test_student_without_registrations():
    roster = Roster([("a", "x")], students=["a", "b"])
    att = AttendanceMatrix(roster, [True])
    with pytest.raises(DegenerateStudentError):
        student_rate("b", roster, att)
    with pytest.raises(DegenerateStudentError):
        rai("b", roster, att)


def test_contribution_examples(roster_factory):
    roster, att = roster_factory({("s1", "c"): 1, ("s2", "c"): 0,
                                  ("s1", "full"): 1, ("s2", "full"): 1,
                                  ("s1", "empty"): 0, ("s2", "empty"): 0})
    assert contribution("s1", "full", roster, att) == 0.0
    assert contribution("s1", "c", roster, att) == 0.5
    assert contribution("s2", "c", roster, att) == -0.5
    assert contribution("s1", "empty", roster, att) == 0.0


def test_contribution_requires_registration(roster_factory):
    roster, att = roster_factory({("s1", "c1"): 1, ("s2", "c2"): 0})
    with pytest.raises(NotRegisteredError):
        contribution("s1", "c2", roster, att)


def test_rai_examples(roster_factory):
    # Everyone attends everything
    roster, att = roster_factory({("a", "x"): 1, ("b", "x"): 1, ("a", "y"): 1, ("b", "y"): 1})
    assert rai("a", roster, att) == 0.0

    # Attends the class its peer skips and skips the one its peer attends
    roster, att = roster_factory({("a", "x"): 1, ("b", "x"): 0, ("a", "y"): 0, ("b", "y"): 1})
    assert rai("a", roster, att) == 0.0

    # r_c1 = 0.5 and r_c2 = 0.25, attends both
    roster, att = roster_factory({("s", "c1"): 1, ("p", "c1"): 0,
                                  ("s", "c2"): 1, ("p", "c2"): 0, ("q", "c2"): 0, ("r", "c2"): 0})
    assert rai("s", roster, att) == pytest.approx(0.625, abs=1e-15)


def test_rai_by_category(toy_dataset):
    assert rai_by_category("s3", "K3", toy_dataset) is None
    assert rai_by_category("s1", "K2", toy_dataset) == pytest.approx(0.5)
    assert rai_by_category("s1", "K1", toy_dataset) == pytest.approx(5 / 12)
    assert rai_by_category("s2", "K1", toy_dataset) == pytest.approx(-1 / 12)
    with pytest.raises(NotFoundError):
        rai_by_category("s1", "K9", toy_dataset)


def test_course_rai(toy_dataset):
    assert course_rai("s1", "A", toy_dataset) == pytest.approx(5 / 12)
    assert course_rai("s3", "A", toy_dataset) == pytest.approx(-2 / 3)
    # Single-unit course degenerates to the contribution
    assert course_rai("s2", "C", toy_dataset) == 0.0
    with pytest.raises(NotRegisteredError):
        course_rai("s3", "C", toy_dataset)
    with pytest.raises(NotFoundError):
        course_rai("s1", "Z", toy_dataset)


def test_course_rai_on_empty_and_full_courses(tables_factory):
    from peeratt.core.dataset import Dataset
    n = 4
    classes = [(f"u{k}", "X", "K", "all") for k in range(n)] + [(f"v{k}", "Y", "K", "all") for k in range(n)]
    attendance = [("s", f"u{k}", "1") for k in range(n)] + \
                 [(f"p{j}", f"u{k}", "0") for j in range(n - 1) for k in range(n)] + \
                 [("s", f"v{k}", "0") for k in range(n)] + \
                 [(f"p{j}", f"v{k}", "1") for j in range(n - 1) for k in range(n)]
    students = [("s", "M", "1")] + [(f"p{j}", "M", "1") for j in range(n - 1)]
    dataset = Dataset.from_tables(tables_factory(students=students, classes=classes, attendance=attendance,
                                                 grades=[], catalog=[("K", "k")]))
    assert course_rai("s", "X", dataset) == pytest.approx((n - 1) / n)
    assert 0.0 < course_rai("s", "X", dataset) < 1.0
    assert course_rai("s", "Y", dataset) == pytest.approx(-(n - 1) / n)


def test_measure_table_on_toy(toy_dataset):
    table = compute_measures(toy_dataset)
    assert table.ar.to_dict() == pytest.approx({"s1": 1.0, "s2": 0.25, "s3": 0.0})
    assert table.rai.to_dict() == pytest.approx({"s1": 11 / 24, "s2": -1 / 6, "s3": -7 / 12})
    assert table.class_rates.to_dict() == pytest.approx({"c1": 2 / 3, "c2": 0.5, "c3": 0.5,
                                                         "c4": 0.0, "c5": 0.5})
    assert table.n_registered.to_dict() == {"s1": 4, "s2": 4, "s3": 2}
    assert table.n_attended.to_dict() == {"s1": 4, "s2": 1, "s3": 0}
    assert table.category_rai.loc["s2", "K3"] == pytest.approx(-0.5)
    assert table.category_ar.isna().loc["s3", "K3"]
    assert table.measure(Measure.AR) is table.ar
    assert table.category("rai") is table.category_rai
    table.validate()


def test_measure_table_validation_catches_broken_identity(toy_dataset):
    table = compute_measures(toy_dataset)
    table.rai = table.rai + 1e-6
    with pytest.raises(NumericalError):
        table.validate()


def test_scalar_and_vector_paths_agree(toy_dataset):
    table = compute_measures(toy_dataset)
    roster, att = toy_dataset.roster, toy_dataset.attendance
    for student in toy_dataset.student_ids:
        assert table.rai[student] == pytest.approx(rai(student, roster, att), abs=1e-15)
        assert table.ar[student] == pytest.approx(student_rate(student, roster, att), abs=1e-15)


def test_course_measures(toy_dataset):
    frame = course_measures(toy_dataset)
    assert list(frame.columns) == ["student_id", "course_id", "category", "n_units", "ar", "rai"]
    row = frame[(frame["student_id"] == "s1") & (frame["course_id"] == "A")].iloc[0]
    assert row["n_units"] == 2
    assert row["ar"] == 1.0
    assert row["rai"] == pytest.approx(5 / 12)


def test_semester_aggregate_is_enrollment_weighted(tables_factory):
    from peeratt.core.dataset import Dataset
    classes = [("a1", "A", "K", "S1"), ("a2", "A2", "K", "S1"), ("b1", "B", "K", "S2")]
    attendance = [("s", "a1", "1"), ("s", "a2", "0"), ("s", "b1", "1"),
                  ("p", "a1", "0"), ("p", "a2", "1"), ("p", "b1", "0")]
    students = [("s", "M", "1"), ("p", "M", "1")]
    dataset = Dataset.from_tables(tables_factory(students=students, classes=classes, attendance=attendance,
                                                 grades=[], catalog=[("K", "k")]))
    table = compute_measures(dataset)
    assert table.semester_ar.loc["s"].tolist() == [0.5, 1.0]
    assert table.semester_registered.loc["s"].tolist() == [2, 1]
    assert table.ar["s"] == pytest.approx((2 * 0.5 + 1 * 1.0) / 3)
    assert table.rai["s"] == pytest.approx((2 * 0.0 + 1 * 0.5) / 3)
    table.validate()

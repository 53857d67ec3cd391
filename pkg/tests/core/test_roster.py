import pytest
from numpy import array

from peeratt.core.errors import IntegrityError, NotFoundError, NotRegisteredError
from peeratt.core.roster import Roster, AttendanceMatrix


def test_roster_orders_and_counts():
    roster = Roster([("b", "y"), ("a", "y"), ("a", "x"), ("a", "x")])
    assert roster.students == ("a", "b")
    assert roster.classes == ("x", "y")
    assert roster.registrations == (("a", "x"), ("a", "y"), ("b", "y"))
    assert roster.n_reg_student("a") == 2
    assert roster.n_reg_class("y") == 2
    assert roster.classes_of("a") == ("x", "y")
    assert roster.students_of("y") == ("a", "b")


def test_roster_keeps_unregistered_universe():
    roster = Roster([("a", "x")], students=["a", "z"], classes=["x", "w"])
    assert roster.n_reg_student("z") == 0
    assert roster.n_reg_class("w") == 0
    assert len(roster.student_pairs("z")) == 0


def test_roster_rejects_unknown_references():
    with pytest.raises(IntegrityError):
        Roster([("a", "x")], students=["b"])
    with pytest.raises(IntegrityError):
        Roster([("a", "x")], classes=["y"])


def test_roster_lookup_errors():
    roster = Roster([("a", "x"), ("b", "y")])
    with pytest.raises(NotFoundError):
        roster.student_index("nobody")
    with pytest.raises(NotFoundError):
        roster.class_index("nowhere")
    with pytest.raises(NotRegisteredError):
        roster.pair_index("a", "y")


def test_attendance_counts():
    roster = Roster([("a", "x"), ("a", "y"), ("b", "x")])
    matrix = AttendanceMatrix.from_mapping(roster, {("a", "x"): True, ("a", "y"): False, ("b", "x"): True})
    assert matrix.n_att_class("x") == 2
    assert matrix.n_att_student("a") == 1
    assert matrix.attended("a", "x") and not matrix.attended("a", "y")
    assert matrix.class_rates().tolist() == [1.0, 0.0]
    assert matrix.contributions().tolist() == [0.0, 0.0, 0.0]


def test_attendance_flags_are_read_only_copies():
    roster = Roster([("a", "x"), ("b", "x")])
    flags = array([True, False])
    matrix = AttendanceMatrix(roster, flags)
    flags[1] = True
    assert not matrix.flags[1]
    with pytest.raises(ValueError):
        matrix.flags[0] = False


def test_attendance_domain_must_match_registrations():
    roster = Roster([("a", "x"), ("b", "x")])
    with pytest.raises(IntegrityError):
        AttendanceMatrix.from_mapping(roster, {("a", "x"): True})
    with pytest.raises(NotFoundError):
        AttendanceMatrix.from_mapping(roster, {("a", "x"): True, ("b", "x"): True, ("a", "x2"): True})
    with pytest.raises(IntegrityError):
        AttendanceMatrix(roster, array([True]))

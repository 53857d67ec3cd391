import pytest
from numpy import abs as np_abs, bincount, nonzero
from numpy.random import default_rng

from peeratt.core.measures import rai
from peeratt.core.roster import Roster, AttendanceMatrix, pair_contributions, per_student_mean


def random_instance(rng, max_students: int = 8, max_classes: int = 6):
    """
    Random registrations (every student and class registered at least once) and flags.
    """
    n_students = int(rng.integers(1, max_students + 1))
    n_classes = int(rng.integers(1, max_classes + 1))
    registered = rng.random((n_students, n_classes)) < rng.uniform(0.1, 1.0)
    for i in (~registered.any(axis=1)).nonzero()[0]:
        registered[i, rng.integers(n_classes)] = True
    for j in (~registered.any(axis=0)).nonzero()[0]:
        registered[rng.integers(n_students), j] = True
    pair_student, pair_class = nonzero(registered)
    rate = rng.choice([0.0, 1.0, rng.random()], p=[0.1, 0.1, 0.8])
    flags = rng.random(len(pair_student)) < rate
    return n_students, n_classes, pair_student, pair_class, flags


def test_bounds_decomposition_and_zero_sums_on_random_instances():
    rng = default_rng(20240601)
    for _ in range(10_000):
        n_students, n_classes, pair_student, pair_class, flags = random_instance(rng)
        rates, contributions = pair_contributions(pair_class, flags, n_classes)
        index = per_student_mean(pair_student, contributions, n_students)

        assert ((index > -1.0) & (index < 1.0)).all()

        ar = per_student_mean(pair_student, flags, n_students)
        mean_rate = per_student_mean(pair_student, rates[pair_class], n_students)
        assert np_abs(index - (ar - mean_rate)).max() <= 1e-12

        class_sums = bincount(pair_class, weights=contributions, minlength=n_classes)
        assert np_abs(class_sums).max() <= 1e-12
        counts = bincount(pair_student, minlength=n_students)
        assert abs((counts * index).sum()) <= 1e-9


def test_contribution_sign_follows_attendance():
    rng = default_rng(3)
    for _ in range(500):
        _, n_classes, _, pair_class, flags = random_instance(rng)
        rates, contributions = pair_contributions(pair_class, flags, n_classes)
        attended = contributions[flags]
        skipped = contributions[~flags]
        assert ((attended >= 0.0) & (attended < 1.0)).all()
        assert ((skipped <= 0.0) & (skipped >= -1.0)).all()
        assert (rates[pair_class][flags] > 0.0).all()


def test_attending_one_more_shared_class_increases_rai():
    rng = default_rng(11)
    checked = 0
    while checked < 200:
        _, n_classes, pair_student, pair_class, flags = random_instance(rng)
        shared = bincount(pair_class, minlength=n_classes)[pair_class] >= 2
        absent = (~flags & shared).nonzero()[0]
        if len(absent) == 0:
            continue
        pairs = [(f"s{i}", f"c{j}") for i, j in zip(pair_student, pair_class)]
        roster = Roster(pairs)
        before = AttendanceMatrix.from_mapping(roster, dict(zip(pairs, flags)))
        k = int(rng.choice(absent))
        flipped = flags.copy()
        flipped[k] = True
        after = AttendanceMatrix.from_mapping(roster, dict(zip(pairs, flipped)))
        student = pairs[k][0]
        n = roster.n_reg_class(pairs[k][1])
        gain = (1.0 - 1.0 / n) / roster.n_reg_student(student)
        assert rai(student, roster, after) - rai(student, roster, before) == pytest.approx(gain)
        checked += 1


def test_attending_a_sole_registrant_class_leaves_rai_unchanged():
    flags = {("s", "own"): False, ("s", "shared"): True, ("p", "shared"): False}
    roster = Roster(flags)
    before = AttendanceMatrix.from_mapping(roster, flags)
    after = AttendanceMatrix.from_mapping(roster, {**flags, ("s", "own"): True})
    assert rai("s", roster, before) == pytest.approx(0.25)
    assert rai("s", roster, after) == pytest.approx(0.25)


@pytest.mark.parametrize("n_peers", [0, 1, 5])
def test_single_class_student(n_peers):
    flags = {("solo", "c"): True}
    flags.update({(f"p{k}", "c"): False for k in range(n_peers)})
    roster = Roster(flags)
    matrix = AttendanceMatrix.from_mapping(roster, flags)
    assert rai("solo", roster, matrix) == pytest.approx(n_peers / (n_peers + 1))

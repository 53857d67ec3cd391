from math import asin, inf, isnan, pi, sqrt

import pytest
from numpy import nan
from numpy.random import default_rng
from scipy.integrate import quad
from scipy.stats import t as student_t

from peeratt.core.constants import Measure
from peeratt.core.errors import (InsufficientSamplesError, RangeError, ShapeError,
                                 UndefinedCorrelationError)
from peeratt.stats.correlation import (CategoryCorrelationRow, category_correlation_table,
                                       category_samples, correlate, measure_gpa_correlation,
                                       p_value, pearson, round_half_away, summarize_category_table)


def test_pearson_examples():
    assert pearson([1, 2, 3], [2, 4, 6]).r == pytest.approx(1.0)
    assert pearson([1, 2, 3], [6, 4, 2]).r == pytest.approx(-1.0)
    assert pearson([1, 2, 3, 4], [1, 3, 2, 4]).r == pytest.approx(0.8)


def test_pearson_symmetry_and_affine_invariance():
    rng = default_rng(5)
    x, y = rng.normal(size=50), rng.normal(size=50)
    r = pearson(x, y).r
    assert pearson(y, x).r == pytest.approx(r, abs=1e-12)
    assert pearson(3.0 * x + 7.0, 0.5 * y - 2.0).r == pytest.approx(r, abs=1e-12)
    assert pearson(-x, y).r == pytest.approx(-r, abs=1e-12)
    assert -1.0 <= r <= 1.0


def test_pearson_errors():
    with pytest.raises(ShapeError):
        pearson([1, 2, 3], [1, 2])
    with pytest.raises(InsufficientSamplesError):
        pearson([1], [2])
    with pytest.raises(UndefinedCorrelationError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(RangeError):
        pearson([1, nan, 3], [1, 2, 3])


def test_p_value_limits():
    assert p_value(0.0, 10) == pytest.approx(1.0)
    assert p_value(1.0, 10) == 0.0
    assert p_value(-1.0, 5) == 0.0
    with pytest.raises(InsufficientSamplesError):
        p_value(0.5, 2)
    with pytest.raises(RangeError):
        p_value(1.5, 10)


@pytest.mark.parametrize("r, n", [(0.5, 10), (0.1, 100), (-0.3, 30), (0.9, 4)])
def test_p_value_matches_t_distribution(r, n):
    t = abs(r) * sqrt((n - 2) / (1 - r * r))
    assert p_value(r, n) == pytest.approx(2.0 * student_t.sf(t, n - 2), abs=1e-3)


def test_p_value_reference():
    assert p_value(0.5, 10) == pytest.approx(0.141, abs=1e-3)


def test_p_value_decreases_with_strength_and_size():
    values = [p_value(r, 20) for r in (0.0, 0.2, 0.4, 0.6, 0.8)]
    assert values == sorted(values, reverse=True)
    sizes = [p_value(0.3, n) for n in (5, 10, 50, 200)]
    assert sizes == sorted(sizes, reverse=True)


def test_correlate_attaches_p_value_from_three_samples():
    assert correlate([1, 2], [2, 1]).p is None
    result = correlate([1, 2, 3, 4], [1, 3, 2, 4])
    assert result.n == 4
    assert result.p == pytest.approx(p_value(0.8, 4))


def test_measure_gpa_correlation_on_toy(toy_dataset):
    rai = measure_gpa_correlation(toy_dataset, Measure.RAI)
    ar = measure_gpa_correlation(toy_dataset, Measure.AR)
    assert rai.n == ar.n == 3
    assert rai.r == pytest.approx(pearson([11 / 24, -1 / 6, -7 / 12], [3.65, 2.0, 1.5]).r)
    assert ar.r == pytest.approx(pearson([1.0, 0.25, 0.0], [3.65, 2.0, 1.5]).r)


def test_category_samples_on_toy(toy_dataset):
    samples = category_samples(toy_dataset)
    assert list(samples.columns) == ["student_id", "course_id", "category", "letter", "points", "ar", "rai"]
    # The P grade is not a letter grade
    assert len(samples) == 5
    k2 = samples[samples["category"] == "K2"]
    assert k2["student_id"].tolist() == ["s1", "s3"]
    assert k2["ar"].tolist() == [1.0, 0.0]
    assert k2["rai"].tolist() == pytest.approx([0.5, -0.5])


def test_category_table_on_toy(toy_dataset):
    rows = category_correlation_table(toy_dataset)
    assert [row.category for row in rows] == ["K2", "K1", "K3"]
    k2, k1, k3 = rows

    # Two samples: defined coefficients, no p-value
    assert k2.corr_rai == pytest.approx(1.0) and k2.n == 2
    assert isnan(k2.p_rai) and not k2.retained

    rai_r = pearson([4.0, 2.0, 0.0], [5 / 12, -1 / 12, -2 / 3]).r
    assert k1.corr_ar == pytest.approx(1.0)
    assert k1.corr_rai == pytest.approx(rai_r)
    assert k1.p_ar == pytest.approx(0.0, abs=1e-6)
    # One degree of freedom has a closed form
    assert k1.p_rai == pytest.approx(2.0 / pi * asin(sqrt(1.0 - rai_r ** 2)), abs=1e-9)
    assert k1.retained
    assert k1.description == "Mathematics"

    assert k3.n == 0 and isnan(k3.corr_rai) and not k3.retained


def test_round_half_away():
    assert round_half_away(0.125) == 0.13
    assert round_half_away(-0.125) == -0.13
    assert round_half_away(2.675) == 2.68
    assert round_half_away(0.1234, 3) == 0.123
    assert isnan(round_half_away(nan))


def test_summarize_category_table():
    def row(code, ar, rai, retained=True):
        return CategoryCorrelationRow(code, code, ar, rai, 30, 0.01, 0.01, retained)

    rows = [row("K1", 0.30, 0.40), row("K2", 0.333, 0.331), row("K3", 0.50, 0.20),
            row("K4", 0.90, 0.95, retained=False)]
    assert summarize_category_table(rows) == {"categories": 4, "retained": 3, "rai_higher": 1,
                                              "ar_higher": 1, "ties": 1}


@pytest.mark.parametrize("r, n", [(0.5, 10), (0.25, 40)])
def test_p_value_matches_integrated_t_density(r, n):
    t = abs(r) * sqrt((n - 2) / (1 - r * r))
    tail, _ = quad(lambda x: student_t.pdf(x, n - 2), t, inf)
    assert p_value(r, n) == pytest.approx(2.0 * tail, abs=1e-3)

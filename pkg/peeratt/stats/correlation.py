from dataclasses import dataclass, asdict
from decimal import Decimal, ROUND_HALF_UP
from math import isnan, nan
from typing import Dict, List, Optional, Sequence
import logging

from numpy import asarray, corrcoef, clip, isfinite
from pandas import DataFrame
from scipy.special import betainc

from peeratt.core.constants import FLOAT_DTYPE, SIGNIFICANCE_LEVEL, Measure
from peeratt.core.dataset import Dataset
from peeratt.core.errors import (InsufficientSamplesError, RangeError, ShapeError,
                                 UndefinedCorrelationError)
from peeratt.core.measures import MeasureTable, compute_measures, course_measures

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrelationResult:
    """
    Pearson coefficient of n paired samples and its two-tailed p-value (None when n < 3).
    """
    r: float
    n: int
    p: Optional[float] = None

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    Product-moment correlation coefficient of two samples.

    Args:
        x (Sequence[float]): First sample.
        y (Sequence[float]): Second sample, same length.

    Returns:
        CorrelationResult: The coefficient and the sample count (no p-value).
    """
    x = asarray(x, dtype=FLOAT_DTYPE).ravel()
    y = asarray(y, dtype=FLOAT_DTYPE).ravel()
    if x.shape != y.shape:
        raise ShapeError(
            f"Samples have different lengths ({x.size} and {y.size}).")
    if x.size < 2:
        raise InsufficientSamplesError(
            f"A correlation needs at least 2 samples, got {x.size}.")
    if not (isfinite(x).all() and isfinite(y).all()):
        raise RangeError("Samples contain non-finite values.")
    if x.min() == x.max() or y.min() == y.max():
        raise UndefinedCorrelationError(
            "The correlation of a constant sample is undefined.")
    r = float(clip(corrcoef(x, y)[0, 1], -1.0, 1.0))
    return CorrelationResult(r=r, n=int(x.size))


def p_value(r: float, n: int) -> float:
    """
    Two-tailed p-value of a Pearson coefficient under the t statistic
    t = r sqrt((n - 2) / (1 - r^2)) with n - 2 degrees of freedom.
    The tail probability is the regularized incomplete beta I_{1 - r^2}((n - 2) / 2, 1 / 2).
    """
    if n < 3:
        raise InsufficientSamplesError(
            f"A p-value needs at least 3 samples, got {n}.")
    if not abs(r) <= 1.0:
        raise RangeError(f"Correlation coefficient {r} outside [-1, 1].")
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    return float(clip(betainc(0.5 * df, 0.5, 1.0 - r * r), 0.0, 1.0))


def correlate(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    Pearson coefficient with its p-value when at least 3 samples are given.
    """
    result = pearson(x, y)
    p = p_value(result.r, result.n) if result.n >= 3 else None
    return CorrelationResult(r=result.r, n=result.n, p=p)


def measure_gpa_correlation(dataset: Dataset, measure: Measure,
                            measures: MeasureTable = None) -> CorrelationResult:
    """
    Correlation between a student-level attendance measure and GPA.
    Students without a GPA are left out.
    """
    if measures is None:
        measures = compute_measures(dataset)
    frame = DataFrame({"x": measures.measure(measure),
                       "gpa": dataset.gpa()}).dropna()
    if len(frame) < 3:
        raise InsufficientSamplesError(
            f"Only {len(frame)} students have both a {Measure(measure).value} value and a GPA.")
    result = correlate(frame["x"].to_numpy(), frame["gpa"].to_numpy())
    logger.info(
        f"corr({Measure(measure).value}, gpa) = {result.r:.4f} (n = {result.n}, p = {result.p:.3e})")
    return result


@dataclass(frozen=True)
class CategoryCorrelationRow:
    """
    Correlations between course grade points and the attendance measures in one category.
    Undefined correlations are nan.
    """
    category: str
    description: str
    corr_ar: float
    corr_rai: float
    n: int
    p_ar: float
    p_rai: float
    retained: bool

    def as_dict(self) -> Dict:
        return asdict(self)


def category_samples(dataset: Dataset, measures: MeasureTable = None) -> DataFrame:
    """
    (student, course) samples pairing a letter grade with the student's attendance rate
    within the course category and its mean contribution in the course.

    Returns:
        DataFrame: Columns student_id, course_id, category, letter, points, ar, rai.
        Grades of courses the student is not registered in are left out.
    """
    if measures is None:
        measures = compute_measures(dataset)
    grades = dataset.grade_frame()
    courses = course_measures(dataset)[["student_id", "course_id", "rai"]]
    samples = grades.merge(courses, on=["student_id", "course_id"], how="inner")
    category_ar = measures.category_ar.reset_index().melt(
        id_vars="student_id", var_name="category", value_name="ar")
    samples = samples.merge(category_ar, on=["student_id", "category"], how="left")
    samples = samples[["student_id", "course_id", "category",
                       "letter", "points", "ar", "rai"]]
    return samples.sort_values(["category", "student_id", "course_id"], kind="stable").reset_index(drop=True)


def _safe_correlate(x, y) -> CorrelationResult:
    try:
        return correlate(x, y)
    except (InsufficientSamplesError, UndefinedCorrelationError):
        return CorrelationResult(r=nan, n=len(x), p=nan)


def category_correlation_table(dataset: Dataset, measures: MeasureTable = None,
                               alpha: float = SIGNIFICANCE_LEVEL) -> List[CategoryCorrelationRow]:
    """
    Per-category correlations of course grade points with the within-category
    attendance rate and with the course contribution mean.

    A row is retained when both p-values are below alpha.
    Rows are sorted by corr_rai descending (undefined last), ties by category code.

    Args:
        dataset (Dataset): The dataset.
        measures (MeasureTable, optional): Precomputed measures of the dataset.
        alpha (float, optional): Significance level. Defaults to 0.05.

    Returns:
        List[CategoryCorrelationRow]: One row per catalog category.
    """
    samples = category_samples(dataset, measures)
    groups = {cat: frame for cat, frame in samples.groupby("category", sort=True)}
    rows = []
    for category, description in dataset.catalog.items():
        frame = groups.get(category, samples.iloc[0:0])
        points = frame["points"].to_numpy()
        ar = _safe_correlate(points, frame["ar"].to_numpy())
        rai = _safe_correlate(points, frame["rai"].to_numpy())
        if isnan(ar.r) or isnan(rai.r):
            logger.warning(
                f"Category {category}: correlation undefined on {len(frame)} sample(s).")
        p_ar = nan if ar.p is None else ar.p
        p_rai = nan if rai.p is None else rai.p
        retained = bool(p_ar < alpha and p_rai < alpha)
        rows.append(CategoryCorrelationRow(category=category, description=description,
                                           corr_ar=ar.r, corr_rai=rai.r, n=len(frame),
                                           p_ar=p_ar, p_rai=p_rai, retained=retained))
    rows.sort(key=lambda row: (isnan(row.corr_rai),
                               0.0 if isnan(row.corr_rai) else -row.corr_rai,
                               row.category))
    return rows


def round_half_away(value: float, digits: int = 2) -> float:
    """
    Round to a number of decimals, halves away from zero.
    """
    if value is None or isnan(value):
        return nan
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def summarize_category_table(rows: List[CategoryCorrelationRow], digits: int = 2) -> Dict[str, int]:
    """
    Compare the two measures over the retained categories at reporting precision.
    """
    retained = [row for row in rows if row.retained]
    rai_higher = ar_higher = ties = 0
    for row in retained:
        rai, ar = round_half_away(row.corr_rai, digits), round_half_away(row.corr_ar, digits)
        if rai > ar:
            rai_higher += 1
        elif ar > rai:
            ar_higher += 1
        else:
            ties += 1
    return {"categories": len(rows), "retained": len(retained),
            "rai_higher": rai_higher, "ar_higher": ar_higher, "ties": ties}

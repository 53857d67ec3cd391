from dataclasses import dataclass, field
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from numpy import asarray
from pandas import DataFrame, Series, crosstab

from peeratt.core.constants import NOISE
from peeratt.core.dataset import Dataset
from peeratt.core.errors import ShapeError
from peeratt.core.measures import MeasureTable, compute_measures

logger = logging.getLogger(__name__)

# Share of a major flagged as its top (or last) GPA decile
DECILE = 0.1
# Majors with fewer graded students get low-confidence flags
MIN_CONFIDENT_MAJOR = 10
# Majors listed per cluster
TOP_MAJORS = 5


def gpa_decile_flags(dataset: Dataset) -> DataFrame:
    """
    Flag the students in the top and in the last GPA decile of their major.

    With N graded students in a major and k = ceil(0.1 N), a student is top-decile when
    its GPA is at least the k-th largest GPA of the major, and last-decile when it is at
    most the k-th smallest one (nearest rank, ties share the flag).
    Students without GPA carry no flag.

    Returns:
        DataFrame: Indexed by student id, columns major, gpa, top_decile, last_decile, low_confidence.
    """
    frame = DataFrame({"major": [dataset.students[s].major for s in dataset.student_ids],
                       "gpa": dataset.gpa()}, index=list(dataset.student_ids))
    frame.index.name = "student_id"
    frame["top_decile"] = False
    frame["last_decile"] = False
    frame["low_confidence"] = False
    for major, group in frame.groupby("major", sort=True):
        gpa = group["gpa"].dropna()
        n = len(gpa)
        if n < MIN_CONFIDENT_MAJOR:
            frame.loc[group.index, "low_confidence"] = True
            logger.warning(f"Major {major} has {n} graded student(s); decile flags are low-confidence.")
        if n == 0:
            continue
        k = ceil(DECILE * n)
        ordered = gpa.sort_values(kind="stable").to_numpy()
        frame.loc[gpa.index, "top_decile"] = (gpa >= ordered[n - k]).to_numpy()
        frame.loc[gpa.index, "last_decile"] = (gpa <= ordered[k - 1]).to_numpy()
    return frame


@dataclass
class ClusterProfile:
    """
    Composition of one cluster by major.
    Decile ratios are taken over the cluster's students of the major who have a GPA,
    and are None when none of them has one.
    """
    cluster: int
    size: int
    major_counts: Dict[str, int] = field(default_factory=dict)
    major_fractions: Dict[str, float] = field(default_factory=dict)
    major_mean_rai: Dict[str, float] = field(default_factory=dict)
    top_decile_ratio: Dict[str, Optional[float]] = field(default_factory=dict)
    last_decile_ratio: Dict[str, Optional[float]] = field(default_factory=dict)
    top_majors: List[str] = field(default_factory=list)


def profile_clusters(labels: Sequence[int], dataset: Dataset,
                     measures: MeasureTable = None, flags: DataFrame = None) -> List[ClusterProfile]:
    """
    Profile every cluster of a labeling; noise points are left out.

    Args:
        labels (Sequence[int]): Cluster label of every student, in sorted student id order.
        dataset (Dataset): The dataset.
        measures (MeasureTable, optional): Precomputed measures of the dataset.
        flags (DataFrame, optional): Precomputed GPA decile flags of the dataset.

    Returns:
        List[ClusterProfile]: One profile per cluster, by cluster index.
    """
    labels = asarray(labels)
    if len(labels) != dataset.n_students:
        raise ShapeError(
            f"Got {len(labels)} labels for {dataset.n_students} students.")
    if measures is None:
        measures = compute_measures(dataset)
    if flags is None:
        flags = gpa_decile_flags(dataset)
    flags = flags.copy()
    flags["rai"] = measures.rai.reindex(flags.index)
    flags["label"] = labels
    major_totals = flags["major"].value_counts()

    profiles = []
    clustered = flags[flags["label"] != NOISE]
    for cluster, members in clustered.groupby("label", sort=True):
        profile = ClusterProfile(cluster=int(cluster), size=len(members))
        for major, group in members.groupby("major", sort=True):
            graded = group[group["gpa"].notna()]
            profile.major_counts[major] = len(group)
            profile.major_fractions[major] = len(group) / int(major_totals[major])
            profile.major_mean_rai[major] = float(group["rai"].mean())
            profile.top_decile_ratio[major] = float(graded["top_decile"].mean()) if len(graded) else None
            profile.last_decile_ratio[major] = float(graded["last_decile"].mean()) if len(graded) else None
        profile.top_majors = [major for major, _ in sorted(profile.major_counts.items(),
                                                           key=lambda item: (-item[1], item[0]))][:TOP_MAJORS]
        profiles.append(profile)
    return profiles


def profile_tables(profiles: List[ClusterProfile], labels: Sequence[int],
                   flags: DataFrame) -> Tuple[DataFrame, DataFrame]:
    """
    Tabulate cluster profiles.

    Returns:
        Tuple[DataFrame, DataFrame]: Cluster sizes (noise as cluster -1, last) and
        one row per (cluster, major) with every per-major panel.
    """
    labels = asarray(labels)
    rows = [{"cluster": p.cluster, "size": p.size, "top_majors": " ".join(p.top_majors)}
            for p in profiles]
    rows.append({"cluster": NOISE, "size": int((labels == NOISE).sum()), "top_majors": ""})
    sizes = DataFrame(rows, columns=["cluster", "size", "top_majors"])

    low_confidence = flags.groupby("major")["low_confidence"].first()
    rows = []
    for p in profiles:
        for major in sorted(p.major_counts):
            rows.append({"cluster": p.cluster, "major": major,
                         "count": p.major_counts[major],
                         "fraction_of_major": p.major_fractions[major],
                         "mean_rai": p.major_mean_rai[major],
                         "top_decile_ratio": p.top_decile_ratio[major],
                         "last_decile_ratio": p.last_decile_ratio[major],
                         "low_confidence": bool(low_confidence[major])})
    majors = DataFrame(rows, columns=["cluster", "major", "count", "fraction_of_major", "mean_rai",
                                      "top_decile_ratio", "last_decile_ratio", "low_confidence"])
    return sizes, majors


def planted_purity(labels: Sequence[int], planted: Sequence) -> float:
    """
    Majority-label purity of a clustering against known groups, over the non-noise points.
    """
    labels = asarray(labels)
    planted = asarray(planted)
    if labels.shape != planted.shape:
        raise ShapeError(
            f"Got {len(labels)} labels for {len(planted)} planted groups.")
    kept = labels != NOISE
    if not kept.any():
        return 0.0
    table = crosstab(Series(labels[kept], name="cluster"), Series(planted[kept], name="group"))
    return float(table.max(axis=1).sum() / kept.sum())

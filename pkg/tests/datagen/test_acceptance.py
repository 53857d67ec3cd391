"""
End-to-end checks on the shipped synthetic cohorts.
"""
import pytest

from peeratt.clustering.grid_search import grid_search
from peeratt.clustering.profiles import gpa_decile_flags, planted_purity, profile_clusters, profile_tables
from peeratt.core.constants import Measure
from peeratt.core.features import feature_vectors
from peeratt.core.measures import compute_measures
from peeratt.datagen.config import PresetType, create_preset
from peeratt.datagen.generator import generate
from peeratt.stats.correlation import category_correlation_table, measure_gpa_correlation
from peeratt.stats.histogram import grade_split_histograms


def test_rai_tracks_gpa_better_than_ar():
    wins = 0
    for seed in range(10):
        dataset, _ = generate(create_preset(PresetType.G1, seed=seed))
        measures = compute_measures(dataset)
        rai = measure_gpa_correlation(dataset, Measure.RAI, measures)
        ar = measure_gpa_correlation(dataset, Measure.AR, measures)
        wins += rai.r > ar.r
    assert wins >= 9


def test_high_grades_lean_positive():
    dataset, _ = generate(create_preset(PresetType.G1))
    high, low = grade_split_histograms(dataset)
    assert high.mean > low.mean
    assert high.mass_above(0.0) > 0.5
    assert high.proportions.sum() == pytest.approx(1.0)


def test_mandatory_categories_weaken_the_rai_grade_link():
    dataset, truth = generate(create_preset(PresetType.G1))
    policy = truth.courses.groupby("category")["mandatory"].max()
    rows = {row.category: row.corr_rai for row in category_correlation_table(dataset)}
    mandatory = [rows[cat] for cat, flag in policy.items() if flag]
    voluntary = [rows[cat] for cat, flag in policy.items() if not flag]
    assert len(mandatory) == len(voluntary) == 6
    assert max(mandatory) < min(voluntary)
    assert sum(mandatory) / 6 < sum(voluntary) / 6


def test_clustering_recovers_planted_groups():
    dataset, truth = generate(create_preset(PresetType.G2))
    measures = compute_measures(dataset)
    features = feature_vectors(dataset, Measure.RAI, measures)
    result = grid_search(features.to_numpy(), n_jobs=1)
    labels = result.labels.labels

    assert result.choice.cluster_count >= 2
    assert result.labels.noise_fraction <= 0.25
    assert planted_purity(labels, truth.planted_groups(dataset.student_ids)) >= 0.7

    flags = gpa_decile_flags(dataset)
    profiles = profile_clusters(labels, dataset, measures, flags)
    sizes, _ = profile_tables(profiles, labels, flags)
    assert sizes["size"].sum() == dataset.n_students
    for profile in profiles:
        assert sum(profile.major_counts.values()) == profile.size

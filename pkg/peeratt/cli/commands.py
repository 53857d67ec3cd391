from argparse import Namespace
from os.path import exists, join
from typing import List
import logging

from pandas import DataFrame, read_csv
from pandas.errors import EmptyDataError, ParserError

from peeratt.core.constants import Measure
from peeratt.core.dataset import Dataset
from peeratt.core.errors import IoError, IntegrityError
from peeratt.core.features import feature_vectors
from peeratt.core.grades import GradeScale
from peeratt.core.measures import compute_measures, course_measures
from peeratt.stats.correlation import (category_correlation_table, measure_gpa_correlation,
                                       round_half_away, summarize_category_table)
from peeratt.stats.histogram import Histogram, grade_split_histograms
from peeratt.clustering.grid_search import GridRanges, grid_search
from peeratt.clustering.profiles import gpa_decile_flags, planted_purity, profile_clusters, profile_tables
from peeratt.datagen.config import GenConfig, PresetType, create_preset
from peeratt.datagen.generator import generate_tables
from peeratt.io.files import DatasetFiles, load_dataset, write_tables
from peeratt.io.report import RunReport
from peeratt.io.writers import write_json, write_table

logger = logging.getLogger(__name__)


def _load(args: Namespace, report: RunReport) -> Dataset:
    grade_scale = GradeScale.from_file(args.grade_scale) if args.grade_scale else GradeScale()
    dataset = load_dataset(DatasetFiles.from_dir(args.data_dir), grade_scale)
    summary = dataset.summary
    report.add_counts(summary.as_dict())
    if summary.dropped_students:
        report.add_warning(f"dropped {len(summary.dropped_students)} student(s) without registrations")
    if summary.dropped_classes:
        report.add_warning(f"dropped {len(summary.dropped_classes)} class(es) without registrants")
    if summary.dropped_grades:
        report.add_warning(f"dropped {summary.dropped_grades} grade(s) of dropped students or classes")
    if summary.excluded_grades:
        report.add_warning(f"excluded {summary.excluded_grades} non-letter grade(s)")
    return dataset


def _measures(measure: str) -> List[Measure]:
    return [Measure.AR, Measure.RAI] if measure == "both" else [Measure(measure)]


def _wide(tables: dict) -> DataFrame:
    """
    Join student-indexed wide tables, prefixing each column with its measure.
    """
    frames = [table.add_prefix(f"{measure.value}_") for measure, table in tables.items()]
    frame = frames[0].join(frames[1:]) if len(frames) > 1 else frames[0]
    frame.index.name = "student_id"
    return frame.reset_index()


def cmd_compute(args: Namespace, report: RunReport) -> None:
    """
    Export attendance measures per student, per (student, course), per (student, category)
    or per (student, semester).
    """
    dataset = _load(args, report)
    measures = compute_measures(dataset)
    measures.validate()
    selected = _measures(args.measure)
    names = [m.value for m in selected]

    if args.per == "student":
        frame = measures.frame()
        frame.insert(0, "major", [dataset.students[s].major for s in frame.index])
        frame = frame[["major", "n_registered", "n_attended"] + names].reset_index()
    elif args.per == "course":
        frame = course_measures(dataset)[["student_id", "course_id", "category", "n_units"] + names]
    elif args.per == "category":
        frame = _wide({m: measures.category(m) for m in selected})
    else:
        frame = _wide({m: measures.semester(m) for m in selected})
        registered = measures.semester_registered.add_prefix("n_registered_").reset_index(drop=True)
        frame = frame.join(registered)
    report.add_output(write_table(frame, args.out, f"{args.per}_measures", args.format))


def cmd_correlate(args: Namespace, report: RunReport) -> None:
    """
    Correlate the attendance measures with GPA, overall or per course category.
    """
    dataset = _load(args, report)
    measures = compute_measures(dataset)

    if args.by == "overall":
        results = {m: measure_gpa_correlation(dataset, m, measures) for m in (Measure.AR, Measure.RAI)}
        frame = DataFrame([{"measure": m.value, "r": res.r, "r_rounded": round_half_away(res.r),
                            "n": res.n, "p": res.p} for m, res in results.items()],
                          columns=["measure", "r", "r_rounded", "n", "p"])
        report.add_output(write_table(frame, args.out, "correlation", args.format))
        summary = {m.value: res.as_dict() for m, res in results.items()}
        summary["rai_higher"] = results[Measure.RAI].r > results[Measure.AR].r
    else:
        rows = category_correlation_table(dataset, measures, args.alpha)
        frame = DataFrame([row.as_dict() for row in rows],
                          columns=["category", "description", "corr_ar", "corr_rai",
                                   "n", "p_ar", "p_rai", "retained"])
        report.add_output(write_table(frame, args.out, "category_correlation", args.format))
        summary = summarize_category_table(rows)
        summary["alpha"] = args.alpha
        summary["retained_categories"] = [row.category for row in rows if row.retained]
    report.add_output(write_json(summary, join(args.out, "correlation_summary.json")))


def _histogram_frame(hist: Histogram) -> DataFrame:
    return DataFrame({"bin_left": hist.edges[:-1], "bin_right": hist.edges[1:],
                      "count": hist.counts, "proportion": hist.proportions})


def cmd_hist(args: Namespace, report: RunReport) -> None:
    """
    Proportion histograms of course contribution means for high and low course grades.
    """
    dataset = _load(args, report)
    high, low = grade_split_histograms(dataset, args.high_cut, args.low_cut, args.bins)
    report.add_output(write_table(_histogram_frame(high), args.out, "hist_high", args.format))
    report.add_output(write_table(_histogram_frame(low), args.out, "hist_low", args.format))
    summary = {name: {"cut": cut, "n": hist.n, "mean": hist.mean,
                      "mass_above_zero": hist.mass_above(0.0)}
               for name, cut, hist in (("high", args.high_cut, high), ("low", args.low_cut, low))}
    summary["bins"] = args.bins
    report.add_output(write_json(summary, join(args.out, "hist_summary.json")))


def _read_truth(path: str, student_ids) -> List[str]:
    if not exists(path):
        raise IoError(f"Ground truth file {path} does not exist.")
    try:
        truth = read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (EmptyDataError, ParserError, UnicodeDecodeError) as e:
        raise IoError(f"Cannot read {path}: {e}")
    if not {"student_id", "group"} <= set(truth.columns):
        raise IntegrityError(f"{path}: expected student_id and group columns.")
    groups = dict(zip(truth["student_id"], truth["group"]))
    missing = [s for s in student_ids if s not in groups]
    if missing:
        raise IntegrityError(f"{path}: no planted group for student {missing[0]}.")
    return [groups[s] for s in student_ids]


def cmd_cluster(args: Namespace, report: RunReport) -> None:
    """
    Cluster students on their per-category measure vectors and profile the clusters.
    """
    dataset = _load(args, report)
    measures = compute_measures(dataset)
    ranges = GridRanges.parse(args.grid) if args.grid else GridRanges()
    report.config.update({"grid": ranges.as_dict(), "seedless": args.seedless})

    features = feature_vectors(dataset, args.measure, measures)
    result = grid_search(features.to_numpy(), ranges, standardize=not args.no_standardize,
                         noise_cap=args.noise_cap, n_jobs=args.jobs)
    labels = result.labels.labels

    flags = gpa_decile_flags(dataset)
    profiles = profile_clusters(labels, dataset, measures, flags)
    sizes, majors = profile_tables(profiles, labels, flags)

    out, fmt = args.out, args.format
    report.add_output(write_table(DataFrame({"student_id": list(dataset.student_ids), "label": labels}),
                                  out, "labels", fmt))
    report.add_output(write_table(result.cells_frame(), out, "grid_cells", fmt))
    report.add_output(write_table(sizes, out, "cluster_sizes", fmt))
    report.add_output(write_table(majors, out, "cluster_profile", fmt))
    panels = {"cluster_major_counts": "count", "cluster_major_fractions": "fraction_of_major",
              "cluster_major_mean_rai": "mean_rai", "cluster_top_decile": "top_decile_ratio",
              "cluster_last_decile": "last_decile_ratio"}
    for name, column in panels.items():
        panel = majors.pivot(index="cluster", columns="major", values=column)
        panel.columns.name = None
        report.add_output(write_table(panel.reset_index(), out, name, fmt))

    choice = result.choice.as_dict()
    choice.update({"measure": Measure(args.measure).value, "standardize": not args.no_standardize,
                   "noise_cap": args.noise_cap,
                   "explained_variance_ratio": result.model.explained_variance_ratio})
    if args.truth:
        choice["purity"] = planted_purity(labels, _read_truth(args.truth, dataset.student_ids))
        logger.info(f"Planted-group purity: {choice['purity']:.4f}")
    report.add_output(write_json(choice, join(out, "grid_choice.json")))


def cmd_gen(args: Namespace, report: RunReport) -> None:
    """
    Generate a synthetic cohort with its ground truth.
    """
    config = GenConfig.from_file(args.config) if args.config else create_preset(args.preset)
    if args.seed is not None:
        config = GenConfig.from_dict({**config.to_dict(), "seed": args.seed})
    grade_scale = GradeScale.from_file(args.grade_scale) if args.grade_scale else GradeScale()
    report.config.update({"preset": None if args.config else PresetType(args.preset).value,
                          "seed": config.seed})

    tables, truth = generate_tables(config, grade_scale)
    files = write_tables(tables, args.out)
    for path in files.paths().values():
        report.add_output(path)
    truth.students.to_csv(join(args.out, "ground_truth.csv"), index=False, lineterminator="\n")
    truth.courses.to_csv(join(args.out, "policies.csv"), index=False, lineterminator="\n")
    config.to_file(join(args.out, "config.json"))
    for name in ("ground_truth.csv", "policies.csv", "config.json"):
        report.add_output(join(args.out, name))

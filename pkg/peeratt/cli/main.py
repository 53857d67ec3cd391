from argparse import ArgumentParser
from typing import List, Optional
import logging
import sys

from peeratt import __version__
from peeratt.core.errors import AttendanceError
from peeratt.clustering.grid_search import DEFAULT_NOISE_CAP
from peeratt.datagen.config import PresetType
from peeratt.stats.histogram import DEFAULT_BINS, DEFAULT_HIGH_CUT, DEFAULT_LOW_CUT
from peeratt.core.constants import SIGNIFICANCE_LEVEL
from peeratt.io.report import RunReport
from peeratt.io.writers import OutputFormat
from peeratt.utils.logging import create_logger
from peeratt.cli.commands import cmd_compute, cmd_correlate, cmd_hist, cmd_cluster, cmd_gen

logger = logging.getLogger(__name__)

COMMANDS = {"compute": cmd_compute, "correlate": cmd_correlate, "hist": cmd_hist,
            "cluster": cmd_cluster, "gen": cmd_gen}


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--data-dir", default=".",
                        help="Directory holding the six dataset CSV files.")
    common.add_argument("--out", default="out",
                        help="Output directory.")
    common.add_argument("--format", default=OutputFormat.CSV.value,
                        choices=[f.value for f in OutputFormat], help="Format of the result tables.")
    common.add_argument("--grade-scale", default=None,
                        help="CSV file mapping letters to grade points (header: letter,points).")
    common.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--log-file", default=None)
    common.add_argument("--report", default=None,
                        help="Where to write the JSON run report.")

    parser = ArgumentParser(prog="peeratt",
                            description="Attendance rates and the relative attendance index.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    compute = subparsers.add_parser("compute", parents=[common],
                                    help="Export attendance measures.")
    compute.add_argument("--measure", default="both", choices=["ar", "rai", "both"])
    compute.add_argument("--per", default="student",
                         choices=["student", "course", "category", "semester"])

    correlate = subparsers.add_parser("correlate", parents=[common],
                                      help="Correlate the measures with grades.")
    correlate.add_argument("--by", default="overall", choices=["overall", "category"])
    correlate.add_argument("--alpha", type=float, default=SIGNIFICANCE_LEVEL,
                           help="Significance level of the retained categories.")

    hist = subparsers.add_parser("hist", parents=[common],
                                 help="Histograms of course RAI for high and low grades.")
    hist.add_argument("--high-cut", default=DEFAULT_HIGH_CUT)
    hist.add_argument("--low-cut", default=DEFAULT_LOW_CUT)
    hist.add_argument("--bins", type=int, default=DEFAULT_BINS)

    cluster = subparsers.add_parser("cluster", parents=[common],
                                    help="Cluster students on per-category measures.")
    cluster.add_argument("--measure", default="rai", choices=["ar", "rai"])
    cluster.add_argument("--grid", default=None,
                         help='Parameter ranges, e.g. "components=5:15;eps=0.1:1.0:0.1;min_points=5:20".')
    cluster.add_argument("--seedless", action="store_true",
                         help="Accepted for reproducibility records; clustering draws no random numbers.")
    cluster.add_argument("--no-standardize", action="store_true",
                         help="Center the features without scaling them.")
    cluster.add_argument("--noise-cap", type=float, default=DEFAULT_NOISE_CAP)
    cluster.add_argument("--jobs", type=int, default=1,
                         help="Parallel jobs of the grid search.")
    cluster.add_argument("--truth", default=None,
                         help="Ground truth CSV (student_id, group) to score planted-group purity.")

    gen = subparsers.add_parser("gen", parents=[common],
                                help="Generate a synthetic cohort.")
    source = gen.add_mutually_exclusive_group()
    source.add_argument("--preset", default=PresetType.G1.value,
                        choices=[p.value for p in PresetType])
    source.add_argument("--config", default=None, help="JSON generator config.")
    gen.add_argument("--seed", type=int, default=None)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    create_logger("peeratt", getattr(logging, args.log_level), filename=args.log_file)

    report = RunReport(command=args.command,
                       config={key: value for key, value in sorted(vars(args).items())
                               if key not in ("command", "report")})
    try:
        COMMANDS[args.command](args, report)
    except AttendanceError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    report.finish().log()
    if args.report:
        report.to_file(args.report)
    return 0


if __name__ == "__main__":
    sys.exit(main())

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple
import logging

from numpy import ndarray, asarray, histogram, linspace, isfinite
import matplotlib.pyplot as plt

from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.dataset import Dataset
from peeratt.core.errors import EmptyInputError, RangeError, ConfigError
from peeratt.core.measures import course_measures

logger = logging.getLogger(__name__)

# Default histogram resolution and grade cuts
DEFAULT_BINS = 20
DEFAULT_HIGH_CUT = "B+"
DEFAULT_LOW_CUT = "C"


@dataclass(frozen=True)
class Histogram:
    """
    Equal-width histogram over [-1, 1], normalized to proportions.
    """
    edges: ndarray
    counts: ndarray
    proportions: ndarray
    n: int
    mean: float

    @property
    def bins(self) -> int:
        return len(self.counts)

    def mass_above(self, value: float = 0.0) -> float:
        """
        Proportion of the bins lying entirely above a value.
        """
        return float(self.proportions[self.edges[:-1] >= value].sum())

    def as_dict(self) -> Dict:
        return {"edges": self.edges.tolist(), "counts": self.counts.tolist(),
                "proportions": self.proportions.tolist(), "n": self.n, "mean": self.mean}


def rai_histogram(values: Sequence[float], bins: int = DEFAULT_BINS) -> Histogram:
    """
    Proportion histogram of values in [-1, 1].
    Bins are right-open except the last one.

    Args:
        values (Sequence[float]): The samples.
        bins (int, optional): Number of equal-width bins. Defaults to 20.

    Returns:
        Histogram: The histogram.
    """
    if bins < 1:
        raise ConfigError(f"A histogram needs at least 1 bin, got {bins}.")
    values = asarray(values, dtype=FLOAT_DTYPE).ravel()
    if values.size == 0:
        raise EmptyInputError("Cannot build the histogram of an empty sample.")
    if not isfinite(values).all() or values.min() < -1.0 or values.max() > 1.0:
        raise RangeError("Histogram values must lie in [-1, 1].")
    edges = linspace(-1.0, 1.0, bins + 1)
    counts, edges = histogram(values, bins=edges)
    return Histogram(edges=edges, counts=counts, proportions=counts / values.size,
                     n=int(values.size), mean=float(values.mean()))


def grade_split_samples(dataset: Dataset, high_cut: str = DEFAULT_HIGH_CUT,
                        low_cut: str = DEFAULT_LOW_CUT) -> Tuple[ndarray, ndarray]:
    """
    Course contribution means of the (student, course, grade) triplets whose grade is
    no less than the high cut, and of those whose grade is no greater than the low cut.
    """
    high_points = dataset.grade_scale.threshold(high_cut)
    low_points = dataset.grade_scale.threshold(low_cut)
    triplets = dataset.grade_frame().merge(course_measures(dataset)[["student_id", "course_id", "rai"]],
                                           on=["student_id", "course_id"], how="inner")
    high = triplets.loc[triplets["points"] >= high_points, "rai"].to_numpy()
    low = triplets.loc[triplets["points"] <= low_points, "rai"].to_numpy()
    logger.info(f"Grade split: {high.size} triplets >= {high_cut}, {low.size} triplets <= {low_cut}.")
    return high, low


def grade_split_histograms(dataset: Dataset, high_cut: str = DEFAULT_HIGH_CUT,
                           low_cut: str = DEFAULT_LOW_CUT, bins: int = DEFAULT_BINS) -> Tuple[Histogram, Histogram]:
    """
    Histograms of course contribution means for high and low course grades.

    Args:
        dataset (Dataset): The dataset.
        high_cut (str, optional): Lowest letter of the high set. Defaults to B+.
        low_cut (str, optional): Highest letter of the low set. Defaults to C.
        bins (int, optional): Number of bins. Defaults to 20.

    Returns:
        Tuple[Histogram, Histogram]: The high and low histograms.
    """
    high, low = grade_split_samples(dataset, high_cut, low_cut)
    return rai_histogram(high, bins), rai_histogram(low, bins)


def plot_histograms(high: Histogram, low: Histogram, show: bool = True,
                    save: bool = False, filename: str = None) -> None:
    """
    Plot the high and low grade histograms side by side.

    Args:
        high (Histogram): Histogram of the high grade set.
        low (Histogram): Histogram of the low grade set.
        show (bool, optional): Whether to show the plot. Defaults to True.
        save (bool, optional): Whether to save the plot. Defaults to False.
        filename (str, optional): Where to save the plot. Defaults to rai_histograms.png.
    """
    fig, axes = plt.subplots(1, 2, sharey=True)
    for ax, hist, title, color in zip(axes, (high, low), ("High grades", "Low grades"), ("blue", "red")):
        widths = hist.edges[1:] - hist.edges[:-1]
        ax.bar(hist.edges[:-1], hist.proportions, width=widths,
               align="edge", color=color, edgecolor="black")
        ax.set_title(f"{title} (n = {hist.n})")
        ax.set_xlabel("RAI")
        ax.set_xlim(-1.0, 1.0)
        ax.grid()
    axes[0].set_ylabel("Proportion")

    # Save/show
    if save:
        if filename is None:
            filename = "rai_histograms.png"
        plt.savefig(fname=filename)
    if show:
        plt.show()
    plt.close(fig)

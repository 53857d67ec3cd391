from dataclasses import dataclass, field, asdict
from enum import Enum
from math import floor, nan
from typing import Dict, List, Sequence, Tuple
import logging

from numpy import ndarray, asarray, sqrt
from joblib import Parallel, delayed
from pandas import DataFrame

from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.errors import ConfigError, NoValidClusteringError, ShapeError
from peeratt.clustering.dbscan import ClusterLabels, dbscan, labels_from_adjacency, squared_distances
from peeratt.clustering.pca import PcaModel, fit_pca
from peeratt.clustering.silhouette import silhouette_from_distances

logger = logging.getLogger(__name__)

# Largest accepted share of noise points
DEFAULT_NOISE_CAP = 0.25


class CellStatus(str, Enum):
    ACCEPTED = "accepted"
    UNDEFINED_SCORE = "undefined_score"
    NOISE_CAP = "noise_cap"
    TOO_MANY_COMPONENTS = "too_many_components"


@dataclass(frozen=True)
class GridRanges:
    """
    Values tried for each clustering parameter.
    """
    components: Tuple[int, ...] = tuple(range(5, 16))
    eps: Tuple[float, ...] = tuple(round(0.1 * i, 1) for i in range(1, 11))
    min_points: Tuple[int, ...] = tuple(range(5, 21))

    def __post_init__(self) -> None:
        if not (self.components and self.eps and self.min_points):
            raise ConfigError("Every grid range needs at least one value.")
        if min(self.components) < 1:
            raise ConfigError("Numbers of components must be at least 1.")
        if min(self.eps) <= 0.0:
            raise ConfigError("eps values must be positive.")
        if min(self.min_points) < 1:
            raise ConfigError("min_points values must be at least 1.")

    @property
    def size(self) -> int:
        return len(self.components) * len(self.eps) * len(self.min_points)

    def as_dict(self) -> Dict[str, List]:
        return {"components": list(self.components), "eps": list(self.eps),
                "min_points": list(self.min_points)}

    @classmethod
    def parse(cls, text: str) -> "GridRanges":
        """
        Parse ranges such as "components=5:15;eps=0.1:1.0:0.1;min_points=5:20".
        Each value is an inclusive start:stop[:step] range or a comma list;
        parameters left out keep their default values.
        """
        values = {}
        for item in filter(None, (part.strip() for part in text.split(";"))):
            key, sep, spec = item.partition("=")
            key = key.strip()
            if not sep or key not in ("components", "eps", "min_points"):
                raise ConfigError(f"Invalid grid range {item!r}.")
            cast = float if key == "eps" else int
            try:
                values[key] = _parse_values(spec.strip(), cast)
            except ValueError:
                raise ConfigError(f"Invalid grid range {item!r}.")
        return cls(**values)


def _parse_values(spec: str, cast) -> Tuple:
    if ":" not in spec:
        return tuple(cast(value) for value in spec.split(","))
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(spec)
    start, stop = cast(parts[0]), cast(parts[1])
    step = cast(parts[2]) if len(parts) == 3 else cast(1)
    if step <= 0 or stop < start:
        raise ValueError(spec)
    # Inclusive of stop, never past it
    count = floor((stop - start) / step + 1e-9) + 1
    if cast is int:
        return tuple(start + i * step for i in range(count))
    return tuple(round(start + i * step, 10) for i in range(count))


@dataclass(frozen=True)
class GridCell:
    """
    Outcome of one parameter triple.
    """
    n_components: int
    eps: float
    min_points: int
    status: CellStatus
    silhouette: float = nan
    cluster_count: int = 0
    noise_count: int = 0

    def as_dict(self) -> Dict:
        return {**asdict(self), "status": self.status.value}


@dataclass(frozen=True)
class GridChoice:
    """
    The selected parameter triple.
    """
    n_components: int
    eps: float
    min_points: int
    silhouette: float
    cluster_count: int
    noise_count: int

    def as_dict(self) -> Dict:
        return asdict(self)


@dataclass
class GridSearchResult:
    choice: GridChoice
    labels: ClusterLabels
    model: PcaModel
    projected: ndarray
    cells: List[GridCell] = field(default_factory=list)

    def cells_frame(self) -> DataFrame:
        return DataFrame([cell.as_dict() for cell in self.cells],
                         columns=["n_components", "eps", "min_points", "status",
                                  "silhouette", "cluster_count", "noise_count"])


def _evaluate_components(points: ndarray, n_components: int, eps_values: Sequence[float],
                         min_points_values: Sequence[int], noise_cap: float) -> List[GridCell]:
    """
    Evaluate every (eps, min_points) pair on the points projected on n_components axes.
    """
    squared = squared_distances(points)
    distances = sqrt(squared)
    scores: Dict[bytes, float] = {}
    cells = []
    for eps in eps_values:
        adjacency = squared <= eps * eps
        for min_points in min_points_values:
            result = labels_from_adjacency(adjacency, min_points)
            counts = dict(n_components=n_components, eps=eps, min_points=min_points,
                          cluster_count=result.n_clusters, noise_count=result.noise_count)
            if result.n_clusters < 2:
                cell = GridCell(status=CellStatus.UNDEFINED_SCORE, **counts)
            elif result.noise_fraction > noise_cap:
                cell = GridCell(status=CellStatus.NOISE_CAP, **counts)
            else:
                key = result.labels.tobytes()
                if key not in scores:
                    scores[key] = silhouette_from_distances(distances, result.labels)
                cell = GridCell(status=CellStatus.ACCEPTED, silhouette=scores[key], **counts)
            logger.debug(f"Grid cell {cell}")
            cells.append(cell)
    return cells


def _rank(cell: GridCell) -> Tuple:
    return (-cell.silhouette, cell.n_components, cell.eps, cell.min_points)


def grid_search(matrix: ndarray, ranges: GridRanges = None, standardize: bool = True,
                noise_cap: float = DEFAULT_NOISE_CAP, n_jobs: int = 1) -> GridSearchResult:
    """
    Select the principal-component count and the DBSCAN parameters with the highest silhouette.

    The principal axes are fitted once; every component count uses the leading axes.
    Cells with fewer than 2 clusters or more noise than the cap are rejected.
    Ties go to fewer components, then smaller eps, then smaller min_points.

    Args:
        matrix (ndarray): Feature matrix, one row per student.
        ranges (GridRanges, optional): Values to try. Defaults to the standard grid.
        standardize (bool, optional): Whether to z-score the features. Defaults to True.
        noise_cap (float, optional): Largest accepted noise fraction. Defaults to 0.25.
        n_jobs (int, optional): Number of parallel jobs over component counts. Defaults to 1.

    Returns:
        GridSearchResult: The selected cell, its labels and the history of every cell.
    """
    if ranges is None:
        ranges = GridRanges()
    if not 0.0 <= noise_cap <= 1.0:
        raise ConfigError(f"The noise cap must lie in [0, 1], got {noise_cap}.")
    matrix = asarray(matrix, dtype=FLOAT_DTYPE)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ShapeError("Clustering needs a 2-D matrix with at least 2 rows.")
    n_features = matrix.shape[1]

    usable = [k for k in ranges.components if k <= n_features]
    too_many = [k for k in ranges.components if k > n_features]
    if too_many:
        logger.warning(
            f"Skipping component counts {too_many} above the {n_features} available features.")
    if not usable:
        raise NoValidClusteringError(
            f"No component count fits the {n_features} available features.")

    model, projected = fit_pca(matrix, max(usable), standardize)

    # Evaluate, one job per component count
    evaluated = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_components)(projected[:, :k], k, ranges.eps, ranges.min_points, noise_cap)
        for k in usable)
    by_components = dict(zip(usable, evaluated))
    cells = []
    for k in ranges.components:
        if k in by_components:
            cells.extend(by_components[k])
        else:
            cells.extend(GridCell(k, eps, min_points, CellStatus.TOO_MANY_COMPONENTS)
                         for eps in ranges.eps for min_points in ranges.min_points)

    accepted = [cell for cell in cells if cell.status == CellStatus.ACCEPTED]
    if not accepted:
        raise NoValidClusteringError(
            f"Every one of the {len(cells)} grid cells was rejected.")
    best = min(accepted, key=_rank)
    labels = dbscan(projected[:, :best.n_components], best.eps, best.min_points)
    choice = GridChoice(n_components=best.n_components, eps=best.eps, min_points=best.min_points,
                        silhouette=best.silhouette, cluster_count=best.cluster_count,
                        noise_count=best.noise_count)
    logger.info(f"Selected {choice} among {len(accepted)} accepted cells.")
    return GridSearchResult(choice=choice, labels=labels, model=model.truncate(best.n_components),
                            projected=projected[:, :best.n_components], cells=cells)

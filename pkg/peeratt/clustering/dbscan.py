from dataclasses import dataclass
from typing import Dict

from numpy import ndarray, arange, argsort, asarray, empty, full, intp, unique, bincount, searchsorted, zeros
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from peeratt.core.constants import FLOAT_DTYPE, NOISE
from peeratt.core.errors import EmptyInputError, ConfigError


@dataclass(frozen=True)
class ClusterLabels:
    """
    Cluster index of every point (0..k-1 in first-appearance order) or NOISE,
    and the core-point mask.
    """
    labels: ndarray
    core: ndarray

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) and self.labels.max() >= 0 else 0

    @property
    def noise_count(self) -> int:
        return int((self.labels == NOISE).sum())

    @property
    def noise_fraction(self) -> float:
        return self.noise_count / len(self.labels) if len(self.labels) else 0.0

    def sizes(self) -> Dict[int, int]:
        counts = bincount(self.labels[self.labels != NOISE], minlength=self.n_clusters)
        return {k: int(count) for k, count in enumerate(counts)}


def squared_distances(points: ndarray) -> ndarray:
    """
    Square matrix of squared Euclidean distances between the rows.
    """
    points = asarray(points, dtype=FLOAT_DTYPE)
    if len(points) < 2:
        return zeros((len(points), len(points)), dtype=FLOAT_DTYPE)
    return squareform(pdist(points, metric="sqeuclidean"))


def labels_from_adjacency(adjacency: ndarray, min_points: int) -> ClusterLabels:
    """
    Density-based cluster labels from a neighbourhood graph.

    A point is core when it has at least min_points neighbours, itself included.
    Clusters are the connected components of the core points.
    A non-core point with a core neighbour joins the cluster of its lowest-index
    core neighbour; the others are noise.

    Args:
        adjacency (ndarray): Boolean neighbourhood matrix with a true diagonal.
        min_points (int): Minimum neighbourhood size of a core point.

    Returns:
        ClusterLabels: The labels.
    """
    n = adjacency.shape[0]
    degree = adjacency.sum(axis=1)
    core = degree >= min_points
    raw = full(n, NOISE, dtype=intp)

    core_index = core.nonzero()[0]
    if len(core_index):
        graph = csr_matrix(adjacency[core_index][:, core_index])
        _, component = connected_components(graph, directed=False)
        raw[core_index] = component

        # Border points
        border_index = (~core).nonzero()[0]
        reach = adjacency[border_index] & core[None, :]
        reached = reach.any(axis=1)
        first_core = reach.argmax(axis=1)
        raw[border_index[reached]] = raw[first_core[reached]]

    # Contiguous labels in first-appearance order
    labels = full(n, NOISE, dtype=intp)
    clustered = raw != NOISE
    if clustered.any():
        values = raw[clustered]
        distinct, first = unique(values, return_index=True)
        rank = empty(len(distinct), dtype=intp)
        rank[argsort(first, kind="stable")] = arange(len(distinct))
        labels[clustered] = rank[searchsorted(distinct, values)]
    return ClusterLabels(labels=labels, core=core)


def dbscan(points: ndarray, eps: float, min_points: int) -> ClusterLabels:
    """
    Cluster points with DBSCAN under the Euclidean distance.
    Points within eps of each other are neighbours; the comparison is made on
    squared distances against eps squared.

    Args:
        points (ndarray): One row per point.
        eps (float): Neighbourhood radius.
        min_points (int): Minimum neighbourhood size (point included) of a core point.

    Returns:
        ClusterLabels: The labels.
    """
    points = asarray(points, dtype=FLOAT_DTYPE)
    if points.ndim == 1:
        points = points[:, None]
    if len(points) == 0:
        raise EmptyInputError("Cannot cluster an empty set of points.")
    if not eps > 0.0:
        raise ConfigError(f"eps must be positive, got {eps}.")
    if min_points < 1:
        raise ConfigError(f"min_points must be at least 1, got {min_points}.")
    adjacency = squared_distances(points) <= eps * eps
    return labels_from_adjacency(adjacency, min_points)

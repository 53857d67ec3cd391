from numpy import ndarray, asarray, ix_, sqrt, unique
from sklearn.metrics import silhouette_samples

from peeratt.core.constants import NOISE
from peeratt.clustering.dbscan import squared_distances
from peeratt.core.errors import UndefinedScoreError, ShapeError


def silhouette_from_distances(distances: ndarray, labels: ndarray) -> float:
    """
    Mean silhouette of the non-noise points given their pairwise Euclidean distances.
    Points of singleton clusters score 0.

    Args:
        distances (ndarray): Square distance matrix of all points.
        labels (ndarray): Cluster label of every point, NOISE excluded from the score.

    Returns:
        float: The score in [-1, 1].
    """
    labels = asarray(labels)
    if distances.shape != (len(labels), len(labels)):
        raise ShapeError(
            f"Distance matrix {distances.shape} does not match {len(labels)} labels.")
    kept = (labels != NOISE).nonzero()[0]
    clusters = unique(labels[kept])
    if len(clusters) < 2:
        raise UndefinedScoreError(
            f"A silhouette needs at least 2 clusters, got {len(clusters)}.")
    if len(clusters) == len(kept):
        return 0.0
    values = silhouette_samples(distances[ix_(kept, kept)], labels[kept], metric="precomputed")
    return float(values.mean())


def silhouette(points: ndarray, labels: ndarray) -> float:
    """
    Mean silhouette of the non-noise points under the Euclidean distance.
    """
    points = asarray(points)
    if points.ndim == 1:
        points = points[:, None]
    return silhouette_from_distances(sqrt(squared_distances(points)), labels)

from dataclasses import dataclass, replace
from typing import Optional, Tuple
import logging

from numpy import ndarray, asarray, abs as np_abs, arange, argmax, argsort, clip, cov, ones, where, atleast_2d
from numpy.linalg import eigh, LinAlgError

from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.errors import EmptyInputError, NumericalError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PcaModel:
    """
    Principal axes of a data matrix.

    Attributes:
        mean (ndarray): Column means.
        scale (ndarray): Column standard deviations (ones when the data is not standardized,
            and for constant columns).
        components (ndarray): Principal axes as rows, by decreasing explained variance.
        explained_variance (ndarray): Covariance eigenvalue of each axis.
        explained_variance_ratio (ndarray): Fraction of the total variance of each axis.
    """
    mean: ndarray
    scale: ndarray
    components: ndarray
    explained_variance: ndarray
    explained_variance_ratio: ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    def truncate(self, n_components: int) -> "PcaModel":
        """
        Model keeping only the leading axes.
        """
        if not 1 <= n_components <= self.n_components:
            raise ShapeError(
                f"Cannot keep {n_components} of {self.n_components} components.")
        return replace(self, components=self.components[:n_components],
                       explained_variance=self.explained_variance[:n_components],
                       explained_variance_ratio=self.explained_variance_ratio[:n_components])

    def transform(self, matrix: ndarray) -> ndarray:
        matrix = atleast_2d(asarray(matrix, dtype=FLOAT_DTYPE))
        return ((matrix - self.mean) / self.scale) @ self.components.T

    def inverse_transform(self, projected: ndarray) -> ndarray:
        projected = atleast_2d(asarray(projected, dtype=FLOAT_DTYPE))
        return (projected @ self.components) * self.scale + self.mean


def fit_pca(matrix: ndarray, n_components: Optional[int] = None,
            standardize: bool = True) -> Tuple[PcaModel, ndarray]:
    """
    Fit the principal axes of a data matrix and project it.

    The columns are centered and, if standardize is set, divided by their
    standard deviation (constant columns are only centered).
    Each axis is signed so that its largest-magnitude coordinate is positive.

    Args:
        matrix (ndarray): Data, one row per sample.
        n_components (int, optional): Number of axes to keep. Defaults to all.
        standardize (bool, optional): Whether to z-score the columns. Defaults to True.

    Returns:
        Tuple[PcaModel, ndarray]: The model and the projected data.
    """
    matrix = asarray(matrix, dtype=FLOAT_DTYPE)
    if matrix.ndim != 2:
        raise ShapeError(f"Expected a 2-D matrix, got {matrix.ndim} dimension(s).")
    n_rows, n_cols = matrix.shape
    if n_rows == 0 or n_cols == 0:
        raise EmptyInputError("Cannot fit principal axes of an empty matrix.")
    if n_rows < 2:
        raise ShapeError("Principal axes need at least 2 rows.")
    if n_components is None:
        n_components = n_cols
    if not 1 <= n_components <= n_cols:
        raise ShapeError(
            f"Number of components {n_components} outside [1, {n_cols}].")

    # Center and scale
    mean = matrix.mean(axis=0)
    if standardize:
        std = matrix.std(axis=0, ddof=1)
        scale = where(std > 0.0, std, 1.0)
    else:
        scale = ones(n_cols, dtype=FLOAT_DTYPE)
    scaled = (matrix - mean) / scale

    # Symmetric eigenproblem of the covariance matrix
    covariance = atleast_2d(cov(scaled, rowvar=False))
    try:
        eigenvalues, eigenvectors = eigh(covariance)
    except LinAlgError as e:
        raise NumericalError(f"Eigendecomposition failed: {e}")

    order = argsort(-eigenvalues, kind="stable")
    eigenvalues = clip(eigenvalues[order], 0.0, None)
    axes = eigenvectors[:, order].T

    # Deterministic signs
    pivots = argmax(np_abs(axes), axis=1)
    signs = where(axes[arange(n_cols), pivots] < 0.0, -1.0, 1.0)
    axes = axes * signs[:, None]

    total = eigenvalues.sum()
    ratio = eigenvalues / total if total > 0.0 else eigenvalues * 0.0
    model = PcaModel(mean=mean, scale=scale, components=axes,
                     explained_variance=eigenvalues, explained_variance_ratio=ratio)
    model = model.truncate(n_components)
    return model, scaled @ model.components.T

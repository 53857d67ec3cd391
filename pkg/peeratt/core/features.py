from pandas import DataFrame

from peeratt.core.constants import Measure
from peeratt.core.dataset import Dataset
from peeratt.core.errors import EmptyInputError
from peeratt.core.measures import MeasureTable, compute_measures


def impute_features(table: DataFrame, measure: Measure) -> DataFrame:
    """
    Fill the cells of categories a student never registered.
    RAI cells become 0.0. AR cells become the mean of the observed column values,
    or 0.0 when the column has none.
    """
    if Measure(measure) == Measure.RAI:
        return table.fillna(0.0)
    return table.fillna(table.mean(axis=0, skipna=True)).fillna(0.0)


def feature_vectors(dataset: Dataset, measure: Measure, measures: MeasureTable = None) -> DataFrame:
    """
    Student by category feature matrix of a measure, rows sorted by student id
    and columns in catalog order.

    Args:
        dataset (Dataset): The dataset.
        measure (Measure): AR (per-category attendance rates) or RAI (per-category mean contributions).
        measures (MeasureTable, optional): Precomputed measures of the dataset.

    Returns:
        DataFrame: The imputed feature matrix.
    """
    if dataset.n_students == 0 or dataset.roster.n_pairs == 0:
        raise EmptyInputError("Cannot build feature vectors of an empty dataset.")
    if measures is None:
        measures = compute_measures(dataset)
    return impute_features(measures.category(measure), measure)

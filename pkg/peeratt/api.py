# Core
from peeratt.core.constants import FLOAT_DTYPE
from peeratt.core.constants import NOISE
from peeratt.core.constants import Measure
from peeratt.core.entities import StudentRecord
from peeratt.core.entities import ClassUnit
from peeratt.core.entities import GradeRecord
from peeratt.core.grades import GradeScale
from peeratt.core.tables import DatasetTables
from peeratt.core.roster import Roster
from peeratt.core.roster import AttendanceMatrix
from peeratt.core.dataset import Dataset
from peeratt.core.measures import MeasureTable
from peeratt.core.measures import class_rate
from peeratt.core.measures import student_rate
from peeratt.core.measures import contribution
from peeratt.core.measures import rai
from peeratt.core.measures import rai_by_category
from peeratt.core.measures import course_rai
from peeratt.core.measures import compute_measures
from peeratt.core.measures import course_measures
from peeratt.core.features import feature_vectors

# Statistics
from peeratt.stats.correlation import CorrelationResult
from peeratt.stats.correlation import CategoryCorrelationRow
from peeratt.stats.correlation import pearson
from peeratt.stats.correlation import p_value
from peeratt.stats.correlation import measure_gpa_correlation
from peeratt.stats.correlation import category_correlation_table
from peeratt.stats.histogram import Histogram
from peeratt.stats.histogram import rai_histogram
from peeratt.stats.histogram import grade_split_histograms
from peeratt.stats.histogram import plot_histograms

# Clustering
from peeratt.clustering.pca import PcaModel
from peeratt.clustering.pca import fit_pca
from peeratt.clustering.dbscan import ClusterLabels
from peeratt.clustering.dbscan import dbscan
from peeratt.clustering.silhouette import silhouette
from peeratt.clustering.grid_search import GridRanges
from peeratt.clustering.grid_search import GridChoice
from peeratt.clustering.grid_search import grid_search
from peeratt.clustering.profiles import ClusterProfile
from peeratt.clustering.profiles import gpa_decile_flags
from peeratt.clustering.profiles import profile_clusters
from peeratt.clustering.profiles import planted_purity

# Synthetic cohorts
from peeratt.datagen.config import GenConfig
from peeratt.datagen.config import PresetType
from peeratt.datagen.config import create_preset
from peeratt.datagen.config import preset_configs
from peeratt.datagen.generator import GroundTruth
from peeratt.datagen.generator import generate

# Files
from peeratt.io.files import DatasetFiles
from peeratt.io.files import load_dataset
from peeratt.io.files import write_tables

# Logger
from peeratt.utils.logging import create_logger

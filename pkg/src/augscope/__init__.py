"""augscope: feature-space similarity measurement for augmented image datasets.

Measures how close synthetic or transform-augmented images are to an
original dataset (cosine similarity over 4096-dim embeddings, with
mean/SD/skewness summaries) and plans seeded, proportion-controlled
augmentation experiments whose manifests drive an external training
harness.
"""

from .errors import (
    AugscopeError,
    BadMagic,
    BadRange,
    CorruptImage,
    DimensionMismatch,
    EmptyClass,
    InsufficientRecords,
    IoError,
    LeakageDetected,
    MissingFile,
    ModelLoadFailure,
    NonPositiveFactor,
    PoolExhausted,
    TooFewSamples,
    TruncatedFile,
    UnknownComparison,
    UnknownId,
    UnsupportedFormat,
    VersionMismatch,
    ZeroDimensionImage,
    ZeroVector,
)
from .features import (
    DEFAULT_CHANNEL_MEANS,
    FEATURE_DIM,
    FeatureVector,
    NeuralBackend,
    ReferenceBackend,
    bilinear_resize,
    extract,
    make_backend,
    preprocess,
    reference_descriptor,
    reference_extract,
)
from .images import (
    AugmentationTechnique,
    ImageBuffer,
    augment_manifest,
    contrast_enhance,
    horizontal_flip,
    load_image,
    rotate90cw,
    save_png,
)
from .manifest import ImageRecord, Manifest, read_manifest, write_manifest
from .planner import (
    ExperimentPlan,
    build_mixed_test,
    build_plan,
    emit_plan,
    inject_augmented,
    largest_remainder,
    split_dataset,
)
from .report import (
    ReferenceRow,
    RowReport,
    StatsRow,
    Tolerances,
    compare_to_reference,
    emit_histogram_json,
    emit_stats_csv,
    load_reference_table,
    lookup_reference,
)
from .similarity import (
    DistributionStats,
    PairSet,
    cosine_similarity,
    distribution_stats,
    enumerate_pairs,
    histogram,
    score_pairs,
    scores_by_class,
)
from .store import FeatureStore, read_feature_store, write_feature_store

__version__ = "0.1.0"

"""Differential area analysis of file headers for encryption detection.

The detector compares the Shannon entropy growth curve of a file's first
bytes against the curve of truly random data and integrates the gap. A
small gap means the header is statistically indistinguishable from
random, which for ordinary file formats is strong evidence of
encryption. See README.md for the full picture.
"""

from .classifier import (
    DEFAULT_HEADER_LEN,
    DEFAULT_THRESHOLD,
    DaaResult,
    DerivedCurve,
    Verdict,
    classify_file,
    derive,
    header_area,
    trapezoid_area,
)
from .corpus import (
    CorpusManifest,
    CorpusSpec,
    FileRecord,
    ProfileResult,
    TypeProfile,
    exclusion_filter,
    generate_synthetic_corpus,
    load_manifest,
    profile_corpus,
    save_manifest,
    write_profiles_csv,
)
from .entropy import (
    DEFAULT_MAX_LEN,
    DEFAULT_STEP,
    DEFAULT_ZERO_RUN_MIN,
    EntropyCurve,
    entropy_curve,
    shannon_entropy,
    strip_zero_runs,
)
from .errors import (
    DaaError,
    GridError,
    ManifestError,
    ProfileError,
    ReferenceFormatError,
    ReferenceVersionError,
    ShortFileError,
)
from .evaluation import (
    ConfusionMatrix,
    MetricSet,
    Outcome,
    SweepCell,
    SweepGrid,
    metrics,
    score,
    sweep,
    write_breakdown_csv,
    write_sweep_csv,
)
from .reference import (
    DEFAULT_SAMPLE_COUNT,
    ReferenceCurve,
    build_reference,
    load_reference,
    save_reference,
)

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "CorpusManifest",
    "CorpusSpec",
    "DaaError",
    "DaaResult",
    "DerivedCurve",
    "EntropyCurve",
    "FileRecord",
    "GridError",
    "ManifestError",
    "MetricSet",
    "Outcome",
    "ProfileError",
    "ProfileResult",
    "ReferenceCurve",
    "ReferenceFormatError",
    "ReferenceVersionError",
    "ShortFileError",
    "SweepCell",
    "SweepGrid",
    "TypeProfile",
    "Verdict",
    "DEFAULT_HEADER_LEN",
    "DEFAULT_MAX_LEN",
    "DEFAULT_SAMPLE_COUNT",
    "DEFAULT_STEP",
    "DEFAULT_THRESHOLD",
    "DEFAULT_ZERO_RUN_MIN",
    "build_reference",
    "classify_file",
    "derive",
    "entropy_curve",
    "exclusion_filter",
    "generate_synthetic_corpus",
    "header_area",
    "load_manifest",
    "load_reference",
    "metrics",
    "profile_corpus",
    "save_manifest",
    "save_reference",
    "score",
    "shannon_entropy",
    "strip_zero_runs",
    "sweep",
    "trapezoid_area",
    "write_breakdown_csv",
    "write_profiles_csv",
    "write_sweep_csv",
]

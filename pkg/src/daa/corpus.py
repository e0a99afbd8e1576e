"""Corpus manifests, synthetic corpus generation, and per-type profiling.

A corpus is a flat directory of files plus a manifest: UTF-8 text, one
JSON object per line with keys ``path``, ``label`` ("encrypted" or
"plain") and ``type`` (a free-form tag such as "pdf" or "random").
Leading ``#`` comment lines carry generator provenance. Relative paths
are resolved against the manifest's directory.

No real malware is involved anywhere: encrypted files are proxied by
seeded pseudo-random bytes, which is the property the detector keys on.
The plain classes cover readable text, low-entropy structured records,
and compressed archives of the text class (the interesting adversarial
case: high overall entropy but a structured header).
"""

from __future__ import annotations

import io
import json
import logging
import os
import zipfile
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .entropy import (
    DEFAULT_MAX_LEN,
    DEFAULT_STEP,
    EntropyCurve,
    entropy_curve,
    strip_zero_runs,
)
from .errors import ManifestError, ProfileError, ShortFileError
from .reference import GENERATOR_ID

logger = logging.getLogger(__name__)

LABEL_ENCRYPTED = "encrypted"
LABEL_PLAIN = "plain"
LABELS = (LABEL_ENCRYPTED, LABEL_PLAIN)

MANIFEST_NAME = "manifest.jsonl"

# Word pool for the plaintext class; enough variety for realistic text
# statistics without shipping a dictionary.
_WORDS = (
    "the of and to in is that for it as was with be by on not he this are "
    "or his from at which but have an had they you were their one all we "
    "can her has there been if more when will would who so no said about "
    "them into than its time only could new other some these two may then "
    "do first any my now such like our over man me even most made after "
    "also did many before must through years where much your way well down "
    "should because each just those people how too little state good very "
    "make world still own see men work long get here between both life "
    "being under never day same another know while last might great old "
    "year off come since against go came right used take three"
).split()


@dataclass(frozen=True)
class FileRecord:
    """One labelled corpus file."""

    path: Path
    label: str
    file_type: str

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ManifestError(f"unknown label {self.label!r}, expected one of {LABELS}")
        if not self.file_type:
            raise ManifestError("file_type must be non-empty")


@dataclass(frozen=True)
class CorpusSpec:
    """How many files of each class to generate, and how.

    ``compressor`` selects the container for the compressed class; a name
    this build does not provide skips the class with a recorded warning.
    """

    random: int = 0
    text: int = 0
    structured: int = 0
    compressed: int = 0
    compressor: str = "zip"
    min_size: int = 512
    max_size: int = 2048


@dataclass
class CorpusManifest:
    records: list[FileRecord]
    metadata: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)


def load_manifest(path: str | os.PathLike[str]) -> list[FileRecord]:
    """Parse a manifest file into records, preserving input order.

    Raises ManifestError with the offending line number on malformed
    lines or unknown labels. Duplicate paths are kept with a warning.
    """
    manifest_path = Path(path)
    base = manifest_path.parent
    records: list[FileRecord] = []
    seen: set[Path] = set()
    for lineno, raw in enumerate(
        manifest_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: line {lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ManifestError(f"{path}: line {lineno}: expected a JSON object")
        missing = {"path", "label", "type"} - obj.keys()
        if missing:
            raise ManifestError(
                f"{path}: line {lineno}: missing keys {sorted(missing)}"
            )
        file_path = Path(obj["path"])
        if not file_path.is_absolute():
            file_path = base / file_path
        try:
            record = FileRecord(
                path=file_path, label=obj["label"], file_type=obj["type"]
            )
        except ManifestError as exc:
            raise ManifestError(f"{path}: line {lineno}: {exc}") from exc
        if record.path in seen:
            logger.warning("%s: line %d: duplicate path %s", path, lineno, record.path)
        seen.add(record.path)
        records.append(record)
    return records


def save_manifest(
    manifest: CorpusManifest, path: str | os.PathLike[str]
) -> None:
    """Write records as JSON lines, metadata as leading comments."""
    out = Path(path)
    base = out.parent
    lines = [f"# {key}={value}" for key, value in manifest.metadata.items()]
    for record in manifest.records:
        rel = record.path
        try:
            rel = record.path.relative_to(base)
        except ValueError:
            pass
        lines.append(
            json.dumps(
                {"path": str(rel), "label": record.label, "type": record.file_type}
            )
        )
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _make_text(rng: np.random.Generator, size: int) -> bytes:
    words = []
    line_len = 0
    total = 0
    while total < size:
        word = _WORDS[int(rng.integers(0, len(_WORDS)))]
        sep = "\n" if line_len > 60 else " "
        line_len = 0 if sep == "\n" else line_len + len(word) + 1
        words.append(word + sep)
        total += len(word) + 1
    return "".join(words).encode("ascii")[:size]


def _make_structured(rng: np.random.Generator, size: int, index: int) -> bytes:
    # Fixed-width records behind a small magic header; padding runs are
    # kept below the default zero-strip threshold on purpose.
    header = b"RECTBL01" + index.to_bytes(4, "little") + b"\x00\x00\x00\x00"
    rows = []
    total = len(header)
    row_id = 0
    while total < size:
        serial = int(rng.integers(0, 10000))
        row = b"ROW%06d:%04d" % (row_id, serial) + b"\x00" * 8 + b"AAAA;"
        rows.append(row)
        total += len(row)
        row_id += 1
    return (header + b"".join(rows))[:size]


def _compress(data: bytes, name: str, compressor: str) -> bytes:
    if compressor == "zip":
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as archive:
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            archive.writestr(info, data)
        return buf.getvalue()
    if compressor == "gzip":
        import gzip

        return gzip.compress(data, mtime=0)
    if compressor == "zlib":
        return zlib.compress(data)
    raise KeyError(compressor)


def generate_synthetic_corpus(
    seed: int,
    out_dir: str | os.PathLike[str],
    spec: CorpusSpec | Mapping[str, int],
) -> CorpusManifest:
    """Write a labelled synthetic corpus and its manifest to ``out_dir``.

    Classes: ``random`` (pseudo-random bytes, labelled encrypted),
    ``text`` (word sequences), ``structured`` (low-entropy records) and
    ``compressed`` (archives of generated text), the last three labelled
    plain. Classes random/text/structured are byte-for-byte deterministic
    for a fixed seed; compressed output additionally depends on the zlib
    version, which is recorded in the manifest metadata.
    """
    if isinstance(spec, Mapping):
        spec = CorpusSpec(**spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    records: list[FileRecord] = []
    metadata = {
        "generated-by": "daa-synthetic-corpus",
        "seed": str(seed),
        "generator": GENERATOR_ID,
    }

    def size() -> int:
        return int(rng.integers(spec.min_size, spec.max_size + 1))

    for i in range(spec.random):
        payload = rng.integers(0, 256, size=size(), dtype=np.uint8).tobytes()
        records.append(_emit(out, f"random_{i:04d}.bin", payload, LABEL_ENCRYPTED, "random"))
    for i in range(spec.text):
        payload = _make_text(rng, size())
        records.append(_emit(out, f"text_{i:04d}.txt", payload, LABEL_PLAIN, "text"))
    for i in range(spec.structured):
        payload = _make_structured(rng, size(), i)
        records.append(_emit(out, f"structured_{i:04d}.dat", payload, LABEL_PLAIN, "structured"))

    if spec.compressed > 0:
        try:
            _compress(b"probe", "probe.txt", spec.compressor)
        except KeyError:
            warning = f"compressed class skipped: no compressor {spec.compressor!r}"
            metadata["warning"] = warning
            logger.warning(warning)
        else:
            metadata["compressor"] = f"{spec.compressor}(zlib/{zlib.ZLIB_RUNTIME_VERSION})"
            for i in range(spec.compressed):
                name = f"doc_{i:04d}.txt"
                payload = _compress(_make_text(rng, size()), name, spec.compressor)
                records.append(
                    _emit(out, f"compressed_{i:04d}.{spec.compressor}", payload, LABEL_PLAIN, "compressed")
                )

    manifest = CorpusManifest(records=records, metadata=metadata)
    save_manifest(manifest, out / MANIFEST_NAME)
    return manifest


def _emit(out: Path, name: str, payload: bytes, label: str, file_type: str) -> FileRecord:
    path = out / name
    path.write_bytes(payload)
    return FileRecord(path=path, label=label, file_type=file_type)


@dataclass(frozen=True)
class TypeProfile:
    """Mean and per-point spread of header entropy for one file type."""

    file_type: str
    sample_size: int
    mean_curve: EntropyCurve
    stddev_curve: tuple[float, ...]

    def mean_at(self, prefix_len: int) -> float:
        try:
            return self.mean_curve.value_at(prefix_len)
        except Exception as exc:
            raise ProfileError(
                f"profile for {self.file_type!r} has no point at {prefix_len}"
            ) from exc


@dataclass(frozen=True)
class SkippedFile:
    path: Path
    reason: str


@dataclass(frozen=True)
class ProfileResult:
    profiles: tuple[TypeProfile, ...]
    skipped: tuple[SkippedFile, ...]


def profile_corpus(
    records: Iterable[FileRecord],
    step: int = DEFAULT_STEP,
    max_len: int = DEFAULT_MAX_LEN,
    zero_run_min: int | None = None,
) -> ProfileResult:
    """Pointwise mean and population standard deviation per file type.

    Unreadable or too-short files are skipped and reported rather than
    failing the run. Files shorter than ``max_len`` truncate their type's
    profile grid to the common overlap. Output order is lexicographic by
    file type regardless of input order.
    """
    by_type: dict[str, list[EntropyCurve]] = {}
    skipped: list[SkippedFile] = []
    read_bound = 4 * max_len if zero_run_min else max_len
    for record in records:
        try:
            with open(record.path, "rb") as handle:
                data = handle.read(read_bound)
            if zero_run_min:
                stripped = strip_zero_runs(data, zero_run_min)[:max_len]
                data = stripped if len(stripped) >= step else data[:max_len]
            curve = entropy_curve(data[:max_len], max_len=max_len, step=step)
        except (OSError, ShortFileError) as exc:
            skipped.append(SkippedFile(path=record.path, reason=str(exc)))
            continue
        by_type.setdefault(record.file_type, []).append(curve)

    profiles = []
    for file_type in sorted(by_type):
        curves = by_type[file_type]
        common_len = min(c.max_len for c in curves)
        grid = range(step, common_len + 1, step)
        matrix = np.array(
            [[c.value_at(p) for p in grid] for c in curves], dtype=float
        )
        means = matrix.mean(axis=0)
        stddevs = matrix.std(axis=0)  # population, ddof=0
        mean_curve = EntropyCurve(
            step=step,
            points=tuple((p, float(m)) for p, m in zip(grid, means)),
            max_len=common_len,
        )
        profiles.append(
            TypeProfile(
                file_type=file_type,
                sample_size=len(curves),
                mean_curve=mean_curve,
                stddev_curve=tuple(float(s) for s in stddevs),
            )
        )
    return ProfileResult(profiles=tuple(profiles), skipped=tuple(skipped))


def exclusion_filter(
    profiles: Iterable[TypeProfile],
    at_len: int = 40,
    floor: float = 4.0,
) -> tuple[list[TypeProfile], list[TypeProfile]]:
    """Partition profiles into (kept, excluded) by mean entropy at ``at_len``.

    A type is excluded when its mean is strictly below ``floor``; types
    sitting exactly on the floor are kept. Low-entropy types are trivial
    to classify and would inflate accuracy numbers.
    """
    kept: list[TypeProfile] = []
    excluded: list[TypeProfile] = []
    for profile in profiles:
        if profile.mean_at(at_len) < floor:
            excluded.append(profile)
        else:
            kept.append(profile)
    return kept, excluded


def render_profiles_csv(profiles: Iterable[TypeProfile]) -> str:
    """CSV rows: file_type,sample_size,prefix_len,mean_entropy,stddev."""
    lines = ["# stddev=population", "file_type,sample_size,prefix_len,mean_entropy,stddev"]
    for profile in profiles:
        for (prefix_len, mean), stddev in zip(
            profile.mean_curve.points, profile.stddev_curve
        ):
            lines.append(
                f"{profile.file_type},{profile.sample_size},{prefix_len},"
                f"{mean:.6f},{stddev:.6f}"
            )
    return "\n".join(lines) + "\n"


def write_profiles_csv(
    profiles: Iterable[TypeProfile], path: str | os.PathLike[str]
) -> None:
    Path(path).write_text(render_profiles_csv(profiles), encoding="utf-8")

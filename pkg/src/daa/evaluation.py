"""Detection quality measurement: confusion matrices and parameter sweeps.

Convention throughout: "positive" means classified as encrypted. A false
positive is a plain file flagged as encrypted; a false negative is an
encrypted file that slipped through.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .classifier import Verdict, header_area
from .corpus import LABEL_ENCRYPTED, FileRecord, SkippedFile
from .errors import ShortFileError
from .reference import ReferenceCurve

DEFAULT_HEADER_LENS = (32, 64, 96, 128, 160, 192, 224, 256)
DEFAULT_THRESHOLDS = (8.0, 24.0, 40.0, 56.0, 72.0)


class Outcome(enum.Enum):
    TRUE_POSITIVE = "tp"
    TRUE_NEGATIVE = "tn"
    FALSE_POSITIVE = "fp"
    FALSE_NEGATIVE = "fn"


def score(verdict: Verdict, label: str) -> Outcome:
    """Compare a classifier verdict against the ground-truth label."""
    truly_encrypted = label == LABEL_ENCRYPTED
    flagged = verdict is Verdict.ENCRYPTED
    if flagged and truly_encrypted:
        return Outcome.TRUE_POSITIVE
    if flagged:
        return Outcome.FALSE_POSITIVE
    if truly_encrypted:
        return Outcome.FALSE_NEGATIVE
    return Outcome.TRUE_NEGATIVE


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def add(self, outcome: Outcome) -> "ConfusionMatrix":
        bumps = {outcome.value: getattr(self, outcome.value) + 1}
        return ConfusionMatrix(
            tp=bumps.get("tp", self.tp),
            tn=bumps.get("tn", self.tn),
            fp=bumps.get("fp", self.fp),
            fn=bumps.get("fn", self.fn),
        )


@dataclass(frozen=True)
class MetricSet:
    """Summary rates; a field is None when its denominator is zero."""

    accuracy: float
    precision: float | None
    recall: float | None
    f1: float | None


def metrics(cm: ConfusionMatrix) -> MetricSet:
    """Accuracy, precision, recall and F1 from a confusion matrix.

    Raises ValueError on an empty matrix. Undefined ratios (zero
    denominator) come back as None rather than 0, so that "never
    predicted positive" is distinguishable from "always wrong".
    """
    if cm.total == 0:
        raise ValueError("cannot compute metrics for an empty confusion matrix")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) > 0 else None
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) > 0 else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return MetricSet(accuracy=accuracy, precision=precision, recall=recall, f1=f1)


@dataclass(frozen=True)
class SweepCell:
    header_len: int
    threshold: float
    cm: ConfusionMatrix
    metric_set: MetricSet
    errors_by_type: Mapping[str, tuple[int, int]]  # type -> (fp, fn)


@dataclass(frozen=True)
class SweepGrid:
    cells: Mapping[tuple[int, float], SweepCell]
    skipped: tuple[SkippedFile, ...]

    def cell(self, header_len: int, threshold: float) -> SweepCell:
        return self.cells[(header_len, float(threshold))]


def sweep(
    records: Sequence[FileRecord],
    reference: ReferenceCurve,
    header_lens: Sequence[int] = DEFAULT_HEADER_LENS,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    zero_run_min: int | None = None,
) -> SweepGrid:
    """Evaluate every (header_len, threshold) combination over a corpus.

    Each file is read once; the differential area is computed once per
    (file, header_len) and reused across thresholds, so a cell's counts
    match what per-file classification would produce at those settings.
    Unreadable or too-short files are skipped from every cell alike and
    reported in the result.
    """
    records = list(records)
    if not records:
        raise ValueError("sweep needs at least one corpus record")
    header_lens = sorted(set(int(h) for h in header_lens))
    thresholds = sorted(set(float(t) for t in thresholds))
    for h in header_lens:
        if h > reference.max_len:
            raise ValueError(
                f"header_len {h} exceeds reference max_len {reference.max_len}"
            )

    max_header = header_lens[-1]
    read_bound = 4 * max_header if zero_run_min else max_header

    counts: dict[tuple[int, float], ConfusionMatrix] = {
        (h, t): ConfusionMatrix() for h in header_lens for t in thresholds
    }
    errors: dict[tuple[int, float], dict[str, list[int]]] = {
        key: {} for key in counts
    }
    skipped: list[SkippedFile] = []

    for record in records:
        try:
            with open(record.path, "rb") as handle:
                data = handle.read(read_bound)
        except OSError as exc:
            skipped.append(SkippedFile(path=record.path, reason=str(exc)))
            continue
        areas: dict[int, float] = {}
        try:
            for h in header_lens:
                areas[h] = header_area(
                    data, reference, header_len=h, zero_run_min=zero_run_min
                )
        except ShortFileError as exc:
            skipped.append(SkippedFile(path=record.path, reason=str(exc)))
            continue
        for h in header_lens:
            for t in thresholds:
                verdict = (
                    Verdict.ENCRYPTED if areas[h] <= t else Verdict.NOT_ENCRYPTED
                )
                outcome = score(verdict, record.label)
                counts[(h, t)] = counts[(h, t)].add(outcome)
                if outcome in (Outcome.FALSE_POSITIVE, Outcome.FALSE_NEGATIVE):
                    slot = errors[(h, t)].setdefault(record.file_type, [0, 0])
                    slot[0 if outcome is Outcome.FALSE_POSITIVE else 1] += 1

    cells = {}
    for (h, t), cm in counts.items():
        cells[(h, t)] = SweepCell(
            header_len=h,
            threshold=t,
            cm=cm,
            metric_set=metrics(cm) if cm.total else MetricSet(0.0, None, None, None),
            errors_by_type={
                k: (v[0], v[1]) for k, v in sorted(errors[(h, t)].items())
            },
        )
    return SweepGrid(cells=cells, skipped=tuple(skipped))


def _percent(value: float | None) -> str:
    return "NA" if value is None else f"{100.0 * value:.3f}"


def write_sweep_csv(grid: SweepGrid, path: str | os.PathLike[str]) -> None:
    """One row per grid cell, rates as percentages with 3 decimals."""
    lines = ["header_len,threshold,tp,tn,fp,fn,accuracy,precision,recall,f1"]
    for key in sorted(grid.cells):
        cell = grid.cells[key]
        cm, ms = cell.cm, cell.metric_set
        lines.append(
            f"{cell.header_len},{cell.threshold:g},{cm.tp},{cm.tn},{cm.fp},{cm.fn},"
            f"{_percent(ms.accuracy)},{_percent(ms.precision)},"
            f"{_percent(ms.recall)},{_percent(ms.f1)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_breakdown_csv(grid: SweepGrid, path: str | os.PathLike[str]) -> None:
    """Per-type error rows: header_len,threshold,file_type,fp,fn."""
    lines = ["header_len,threshold,file_type,fp,fn"]
    for key in sorted(grid.cells):
        cell = grid.cells[key]
        for file_type, (fp, fn) in cell.errors_by_type.items():
            lines.append(
                f"{cell.header_len},{cell.threshold:g},{file_type},{fp},{fn}"
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

"""Differential area classification of file headers.

A sample header's entropy curve is subtracted pointwise from a random-data
reference curve, and the signed area between that difference curve and the
x axis is integrated with the composite trapezoidal rule. The area unit is
Bit-Bytes (bits on the y axis times bytes on the x axis). A small area
means the header tracks the random reference closely, which is the
signature of encrypted content; the verdict is "encrypted" when the area
is at or below the configured threshold. Ties classify as encrypted.

Only the first ``header_len`` bytes of a file are ever inspected (up to
``READ_AHEAD_FACTOR`` times that when zero-run stripping is enabled, so
stripping can still yield a full window), so classification cost is
independent of file size.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Union

from .entropy import EntropyCurve, entropy_curve, strip_zero_runs
from .errors import GridError, ShortFileError
from .reference import ReferenceCurve

DEFAULT_HEADER_LEN = 160
DEFAULT_THRESHOLD = 40.0

# When stripping zero runs, read this many times header_len so that the
# stripped data can still fill the analysis window.
READ_AHEAD_FACTOR = 4

FileSource = Union[bytes, bytearray, memoryview, str, os.PathLike, BinaryIO]


class Verdict(str, enum.Enum):
    ENCRYPTED = "encrypted"
    NOT_ENCRYPTED = "not-encrypted"


@dataclass(frozen=True)
class DerivedCurve:
    """Pointwise reference-minus-sample entropy differences.

    Deltas may be negative where the sample's entropy exceeds the
    reference at a grid point; they are integrated signed, not clamped.
    """

    step: int
    points: tuple[tuple[int, float], ...]

    @property
    def prefix_lens(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.points)

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(d for _, d in self.points)


@dataclass(frozen=True)
class DaaResult:
    """Verdict for one file plus the parameters that produced it."""

    area: float
    header_len: int
    threshold: float
    verdict: Verdict
    zero_stripped: bool

    def __post_init__(self) -> None:
        expected = Verdict.ENCRYPTED if self.area <= self.threshold else Verdict.NOT_ENCRYPTED
        if self.verdict is not expected:
            raise ValueError(
                f"verdict {self.verdict} inconsistent with area {self.area} "
                f"and threshold {self.threshold}"
            )


def derive(sample: EntropyCurve, reference: ReferenceCurve) -> DerivedCurve:
    """Subtract the sample curve from the reference curve, point by point.

    The curves must share the same step. A truncated sample restricts the
    computation to the overlapping prefix range.
    """
    ref_curve = reference.curve
    if sample.step != ref_curve.step:
        raise GridError(
            f"sample step {sample.step} != reference step {ref_curve.step}"
        )
    overlap = min(sample.max_len, ref_curve.max_len)
    if overlap < sample.step:
        raise GridError("curves share no grid points")
    ref_values = dict(ref_curve.points)
    points = tuple(
        (p, ref_values[p] - e) for p, e in sample.points if p <= overlap
    )
    return DerivedCurve(step=sample.step, points=points)


def trapezoid_area(
    curve: DerivedCurve,
    from_len: int | None = None,
    to_len: int | None = None,
) -> float:
    """Signed area under the difference curve via the composite trapezoidal rule.

    With grid spacing h this is (h/2) * [f(a) + 2*sum(interior) + f(b)]
    over the grid points in [from_len, to_len]. Bounds default to the
    first and last points of the curve and must lie on its grid.
    """
    values = dict(curve.points)
    lens = curve.prefix_lens
    a = lens[0] if from_len is None else from_len
    b = lens[-1] if to_len is None else to_len
    if a not in values or b not in values:
        raise GridError(f"integration bounds ({a}, {b}) must be grid points")
    if a >= b:
        raise GridError(f"need from_len < to_len, got ({a}, {b})")
    h = curve.step
    interior = [values[p] for p in lens if a < p < b]
    return (h / 2.0) * (values[a] + 2.0 * sum(interior) + values[b])


def header_area(
    data: bytes,
    reference: ReferenceCurve,
    header_len: int = DEFAULT_HEADER_LEN,
    zero_run_min: int | None = None,
) -> float:
    """Differential area of a header window against the reference.

    ``data`` is the raw start of a file; only the bytes a bounded read
    would have produced are used (header_len, or READ_AHEAD_FACTOR times
    that when stripping). If stripping leaves fewer bytes than one grid
    step, the raw header is used instead: an all-zero header has nothing
    to mitigate and still deserves a verdict.
    """
    _check_header_len(header_len, reference)
    step = reference.step
    if zero_run_min:
        window = strip_zero_runs(
            data[: READ_AHEAD_FACTOR * header_len], zero_run_min
        )[:header_len]
        if len(window) < step:
            window = bytes(data[:header_len])
    else:
        window = bytes(data[:header_len])
    if len(window) < 2 * step:
        raise ShortFileError(
            f"need at least {2 * step} bytes to integrate, got {len(window)}"
        )
    sample = entropy_curve(window, max_len=header_len, step=step)
    return trapezoid_area(derive(sample, reference))


def classify_file(
    src: FileSource,
    reference: ReferenceCurve,
    header_len: int = DEFAULT_HEADER_LEN,
    threshold: float = DEFAULT_THRESHOLD,
    zero_run_min: int | None = None,
) -> DaaResult:
    """Classify a file (or raw bytes, or an open binary stream) as encrypted or not.

    Reads at most header_len bytes from ``src`` (READ_AHEAD_FACTOR *
    header_len when ``zero_run_min`` enables stripping), regardless of the
    file's size. OSError propagates for unreadable paths; files shorter
    than two grid steps raise ShortFileError.
    """
    _check_header_len(header_len, reference)
    bound = READ_AHEAD_FACTOR * header_len if zero_run_min else header_len
    data = _read_bounded(src, bound)
    area = header_area(data, reference, header_len, zero_run_min)
    verdict = Verdict.ENCRYPTED if area <= threshold else Verdict.NOT_ENCRYPTED
    return DaaResult(
        area=area,
        header_len=header_len,
        threshold=threshold,
        verdict=verdict,
        zero_stripped=bool(zero_run_min),
    )


def _check_header_len(header_len: int, reference: ReferenceCurve) -> None:
    step = reference.step
    if header_len % step != 0 or not (2 * step <= header_len <= reference.max_len):
        raise GridError(
            f"header_len {header_len} must be a multiple of {step} in "
            f"[{2 * step}, {reference.max_len}]"
        )


def _read_bounded(src: FileSource, bound: int) -> bytes:
    if isinstance(src, (bytes, bytearray, memoryview)):
        return bytes(src[:bound])
    if isinstance(src, (str, os.PathLike)):
        with open(Path(src), "rb") as handle:
            return handle.read(bound)
    if hasattr(src, "read"):
        data = src.read(bound)
        return bytes(data) if data else b""
    raise TypeError(f"cannot read file data from {type(src).__name__}")

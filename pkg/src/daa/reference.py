"""Random-data reference curves: build, persist, load.

The classifier needs an "ideal" entropy curve for random data to subtract
sample curves from. A single random draw is noisy, so the builder averages
the curves of many seeded pseudo-random byte sequences. Provenance (seed,
sample count, generator) travels with the curve so any reference file can
be rebuilt bit-for-bit.

Reference file format (UTF-8 CSV)::

    # format=daa-reference-v1
    # seed=7
    # samples=1000
    # generator=pcg64
    # step=8
    prefix_len,entropy
    8,2.97445594912
    ...

Entropy values are written with 12 significant digits and the builder
quantises its means to the same precision, so save -> load round-trips
are exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .entropy import DEFAULT_MAX_LEN, DEFAULT_STEP, EntropyCurve, entropy_curve
from .errors import ReferenceFormatError, ReferenceVersionError

FORMAT_TAG = "daa-reference-v1"
GENERATOR_ID = "pcg64"
DEFAULT_SAMPLE_COUNT = 1000


@dataclass(frozen=True)
class ReferenceCurve:
    """An averaged random-data entropy curve plus its provenance."""

    curve: EntropyCurve
    seed: int
    sample_count: int
    generator_id: str

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count}")
        for prefix_len, value in self.curve.points:
            if value <= 0.0:
                raise ValueError(
                    f"reference entropy must be strictly positive, "
                    f"got {value} at prefix {prefix_len}"
                )

    @property
    def step(self) -> int:
        return self.curve.step

    @property
    def max_len(self) -> int:
        return self.curve.max_len


def _quantize(value: float) -> float:
    # 12 significant digits, matching the on-disk precision.
    return float(f"{value:.12g}")


def build_reference(
    seed: int,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    max_len: int = DEFAULT_MAX_LEN,
    step: int = DEFAULT_STEP,
) -> ReferenceCurve:
    """Average the entropy curves of ``sample_count`` seeded random sequences.

    Deterministic: the same (seed, sample_count, max_len, step) always
    produces an identical curve.
    """
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    rng = np.random.default_rng(seed)
    samples = rng.integers(0, 256, size=(sample_count, max_len), dtype=np.uint8)
    grid = range(step, max_len + 1, step)
    totals = np.zeros(len(grid))
    for row in samples:
        curve = entropy_curve(row.tobytes(), max_len=max_len, step=step)
        totals += curve.entropies
    means = totals / sample_count
    points = tuple((p, _quantize(m)) for p, m in zip(grid, means))
    curve = EntropyCurve(step=step, points=points, max_len=max_len)
    return ReferenceCurve(
        curve=curve, seed=seed, sample_count=sample_count, generator_id=GENERATOR_ID
    )


def save_reference(ref: ReferenceCurve, path: str | os.PathLike[str]) -> None:
    """Write a reference curve as CSV with provenance comments."""
    lines = [
        f"# format={FORMAT_TAG}",
        f"# seed={ref.seed}",
        f"# samples={ref.sample_count}",
        f"# generator={ref.generator_id}",
        f"# step={ref.curve.step}",
        "prefix_len,entropy",
    ]
    lines.extend(f"{p},{e:.12g}" for p, e in ref.curve.points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_reference(path: str | os.PathLike[str]) -> ReferenceCurve:
    """Parse a reference curve file; raises ReferenceFormatError on bad input."""
    meta: dict[str, str] = {}
    points: list[tuple[int, float]] = []
    saw_header = False
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not saw_header:
            if line != "prefix_len,entropy":
                raise ReferenceFormatError(
                    f"{path}: line {lineno}: expected header 'prefix_len,entropy', "
                    f"got {line!r}"
                )
            saw_header = True
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ReferenceFormatError(
                f"{path}: line {lineno}: expected 2 fields, got {len(cells)}"
            )
        try:
            prefix_len = int(cells[0])
            value = float(cells[1])
        except ValueError as exc:
            raise ReferenceFormatError(f"{path}: line {lineno}: {exc}") from exc
        if points and prefix_len <= points[-1][0]:
            raise ReferenceFormatError(
                f"{path}: line {lineno}: prefix_len column is not strictly increasing"
            )
        points.append((prefix_len, value))

    # Hand-written files may omit the format tag; written ones always carry it.
    fmt = meta.get("format", FORMAT_TAG)
    if fmt != FORMAT_TAG:
        raise ReferenceVersionError(
            f"{path}: unsupported reference format {fmt!r} (expected {FORMAT_TAG!r})"
        )
    for key in ("seed", "samples", "generator", "step"):
        if key not in meta:
            raise ReferenceFormatError(f"{path}: missing '# {key}=' comment")
    if not points:
        raise ReferenceFormatError(f"{path}: no curve rows")

    try:
        seed = int(meta["seed"])
        sample_count = int(meta["samples"])
        step = int(meta["step"])
    except ValueError as exc:
        raise ReferenceFormatError(f"{path}: bad provenance value: {exc}") from exc

    try:
        curve = EntropyCurve(step=step, points=tuple(points), max_len=points[-1][0])
    except ValueError as exc:
        raise ReferenceFormatError(f"{path}: {exc}") from exc
    return ReferenceCurve(
        curve=curve,
        seed=seed,
        sample_count=sample_count,
        generator_id=meta["generator"],
    )

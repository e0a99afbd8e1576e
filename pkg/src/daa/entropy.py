"""Shannon entropy of file header fragments.

Entropy is measured in bits per byte on the usual 0..8 scale: 0 for a
single repeated value, 8 for a uniform spread over all 256 byte values.
Header analysis samples the first bytes of a file on a fixed grid (every
``step`` bytes up to ``max_len``) and records the entropy of each growing
prefix. The resulting curve climbs steadily for random-looking data and
stays low for structured content, which is what the downstream area
classifier exploits.

Some ransomware strains pad file headers with long blocks of 0x00 before
the ciphertext starts; :func:`strip_zero_runs` removes such runs so the
curve measures the payload rather than the padding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridError, ShortFileError

DEFAULT_STEP = 8
DEFAULT_MAX_LEN = 256

# Smallest run of 0x00 bytes treated as padding. Larger than any common
# magic-number field, small enough to catch real padding blocks.
DEFAULT_ZERO_RUN_MIN = 16

MAX_ENTROPY_BITS = 8.0

# Slack for float round-off when validating entropy bounds.
_BOUND_TOL = 1e-9


@dataclass(frozen=True)
class EntropyCurve:
    """Entropy of growing header prefixes on a uniform byte grid.

    ``points`` holds ``(prefix_len, entropy)`` pairs at prefix lengths
    ``step, 2*step, ..., max_len``. Instances are immutable and safe to
    share between threads.
    """

    step: int
    points: tuple[tuple[int, float], ...]
    max_len: int

    def __post_init__(self) -> None:
        if self.step < 1:
            raise GridError(f"step must be >= 1, got {self.step}")
        expected = tuple(range(self.step, self.max_len + 1, self.step))
        lens = tuple(p for p, _ in self.points)
        if lens != expected:
            raise GridError(
                f"curve grid {lens} does not match uniform grid "
                f"step={self.step}, max_len={self.max_len}"
            )
        for prefix_len, value in self.points:
            bound = min(MAX_ENTROPY_BITS, math.log2(prefix_len))
            if not (-_BOUND_TOL <= value <= bound + _BOUND_TOL):
                raise ValueError(
                    f"entropy {value} at prefix {prefix_len} outside [0, {bound}]"
                )

    @property
    def prefix_lens(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.points)

    @property
    def entropies(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.points)

    def value_at(self, prefix_len: int) -> float:
        """Entropy at an exact grid point; GridError if absent."""
        for p, e in self.points:
            if p == prefix_len:
                return e
        raise GridError(f"prefix length {prefix_len} not on curve grid")

    def truncated(self, max_len: int) -> EntropyCurve:
        """The curve restricted to prefix lengths <= max_len."""
        if max_len >= self.max_len:
            return self
        kept = tuple((p, e) for p, e in self.points if p <= max_len)
        if not kept:
            raise GridError(f"no grid points at or below {max_len}")
        return EntropyCurve(step=self.step, points=kept, max_len=kept[-1][0])


def shannon_entropy(data: bytes) -> float:
    """Shannon entropy of a byte fragment, in bits per byte.

    Byte frequencies are counted exactly and divided once at the end, and
    bins are always summed in value order, so the result is deterministic
    and invariant under any reordering of the input.

    Raises ValueError for an empty fragment (no distribution to measure).
    """
    if len(data) == 0:
        raise ValueError("cannot compute entropy of an empty fragment")
    counts = np.bincount(np.frombuffer(bytes(data), dtype=np.uint8), minlength=256)
    probs = counts[counts > 0] / len(data)
    h = -(probs * np.log2(probs)).sum()
    return float(h) + 0.0  # fold -0.0 from the single-symbol case


def entropy_curve(
    data: bytes,
    max_len: int = DEFAULT_MAX_LEN,
    step: int = DEFAULT_STEP,
) -> EntropyCurve:
    """Entropy of every prefix of ``data`` on the grid step, 2*step, ..., max_len.

    Inputs shorter than ``max_len`` yield a curve truncated at the largest
    grid point that fits; inputs shorter than one step cannot be placed on
    the grid at all and raise ShortFileError.
    """
    if step < 1:
        raise GridError(f"step must be >= 1, got {step}")
    if max_len < step or max_len % step != 0:
        raise GridError(f"max_len {max_len} is not a positive multiple of step {step}")
    if len(data) < step:
        raise ShortFileError(
            f"need at least {step} bytes for one grid point, got {len(data)}"
        )
    effective = min(max_len, (len(data) // step) * step)
    points = tuple(
        (prefix, shannon_entropy(data[:prefix]))
        for prefix in range(step, effective + 1, step)
    )
    return EntropyCurve(step=step, points=points, max_len=effective)


@lru_cache(maxsize=None)
def _zero_run_pattern(min_run: int) -> re.Pattern[bytes]:
    return re.compile(b"\x00{%d,}" % min_run)


def strip_zero_runs(data: bytes, min_run: int = DEFAULT_ZERO_RUN_MIN) -> bytes:
    """Remove every maximal run of at least ``min_run`` 0x00 bytes.

    The relative order of the remaining bytes is preserved and the
    operation is idempotent. May return an empty result (e.g. for an
    all-zero input); callers must check before computing entropy.
    """
    if min_run < 2:
        raise ValueError(f"min_run must be >= 2, got {min_run}")
    return _zero_run_pattern(min_run).sub(b"", bytes(data))

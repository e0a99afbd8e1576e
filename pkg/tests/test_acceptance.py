"""Acceptance gate: one test per stated criterion, each printing a
PASS/FAIL line. Runs under pytest, or standalone:

    python3 tests/test_acceptance.py
"""

import io
import math
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from daa import (
    ConfusionMatrix,
    CorpusSpec,
    DerivedCurve,
    EntropyCurve,
    FileRecord,
    ReferenceCurve,
    Verdict,
    build_reference,
    classify_file,
    derive,
    generate_synthetic_corpus,
    load_reference,
    metrics,
    profile_corpus,
    score,
    shannon_entropy,
    sweep,
    trapezoid_area,
)

DATA_DIR = Path(__file__).parent / "data"

RANDOM_ROW = ((8, 2.976), (16, 3.941), (24, 4.496), (32, 4.878), (40, 5.171))
SAMPLE_ROW = ((8, 3.000), (16, 3.807), (24, 3.336), (32, 3.430), (40, 3.903))
EXPECTED_DELTAS = (-0.024, 0.134, 1.160, 1.448, 1.268)
EXPECTED_SUBAREAS = (0.44, 5.176, 10.432, 10.864)
EXPECTED_TOTAL = 26.912

# Frozen from tests/data/make_fixtures.py (independent Counter+log2 oracle).
FIXTURE40_GOLDEN = (
    (8, 3.0),
    (16, 2.774397470347699),
    (24, 2.3962406251802895),
    (32, 2.7456573285181993),
    (40, 3.349581770147834),
)


@contextmanager
def report(num, description):
    try:
        yield
    except BaseException:
        print(f"criterion {num}: FAIL  {description}")
        raise
    print(f"criterion {num}: PASS  {description}")


def check_worked_example():
    t0 = time.perf_counter()
    reference = ReferenceCurve(
        curve=EntropyCurve(step=8, points=RANDOM_ROW, max_len=40),
        seed=0,
        sample_count=1,
        generator_id="canonical",
    )
    sample = EntropyCurve(step=8, points=SAMPLE_ROW, max_len=40)
    derived = derive(sample, reference)
    for got, want in zip(derived.deltas, EXPECTED_DELTAS):
        assert round(got, 3) == want, (got, want)
    bounds = (8, 16, 24, 32, 40)
    for lo, hi, want in zip(bounds, bounds[1:], EXPECTED_SUBAREAS):
        assert abs(trapezoid_area(derived, lo, hi) - want) <= 1e-3
    total = trapezoid_area(derived)
    assert abs(total - EXPECTED_TOTAL) <= 1e-3
    # same computation through the public file path, committed fixture
    engineered = load_reference(DATA_DIR / "worked_reference.csv")
    result = classify_file(
        (DATA_DIR / "fixture40.bin").read_bytes(),
        engineered,
        header_len=40,
        threshold=20.0,
    )
    assert abs(result.area - EXPECTED_TOTAL) <= 1e-3
    assert result.verdict is Verdict.NOT_ENCRYPTED
    assert time.perf_counter() - t0 < 1.0


def check_entropy_kernel():
    assert shannon_entropy(b"\x41" * 16) == 0.0
    assert shannon_entropy(b"\x00\x01" * 8) == 1.0
    assert shannon_entropy(bytes(range(256))) == 8.0
    data = (DATA_DIR / "fixture40.bin").read_bytes()
    for prefix_len, golden in FIXTURE40_GOLDEN:
        fragment = data[:prefix_len]
        assert abs(shannon_entropy(fragment) - golden) <= 1e-12
        assert abs(shannon_entropy(fragment) - oracles.entropy(fragment)) <= 1e-12


def check_reference_agreement():
    t0 = time.perf_counter()
    ref = build_reference(seed=7, sample_count=1000)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"build took {elapsed:.3f}s"
    for prefix_len, expected in RANDOM_ROW:
        got = ref.curve.value_at(prefix_len)
        assert abs(got - expected) <= 0.05, (prefix_len, got, expected)
    assert build_reference(seed=7, sample_count=1000) == ref


def check_separation(tmp_dir):
    manifest = generate_synthetic_corpus(
        41, Path(tmp_dir) / "sep", CorpusSpec(random=30, compressed=30)
    )
    result = profile_corpus(manifest.records, max_len=40)
    means = {p.file_type: p.mean_at(40) for p in result.profiles}
    assert not result.skipped
    gap = means["random"] - means["compressed"]
    assert gap >= 0.5, f"separation only {gap:.3f} bits"


def check_sweep_desk_scale(tmp_dir, ref):
    manifest = generate_synthetic_corpus(
        53,
        Path(tmp_dir) / "desk",
        CorpusSpec(random=100, text=50, structured=50),
    )
    assert len(manifest) == 200
    grid = sweep(manifest.records, ref)
    assert len(grid.cells) == 8 * 5
    cell = grid.cell(160, 40.0)
    tally = ConfusionMatrix()
    for record in manifest.records:
        result = classify_file(record.path, ref, header_len=160, threshold=40.0)
        tally = tally.add(score(result.verdict, record.label))
    assert cell.cm == tally, (cell.cm, tally)
    assert cell.metric_set.accuracy == 1.0, cell.cm


def check_metric_formulas():
    ms = metrics(ConfusionMatrix(tp=3, tn=5, fp=1, fn=1))
    assert ms.accuracy == 0.8
    never_positive = metrics(ConfusionMatrix(tn=5, fn=2))
    assert never_positive.precision is None
    assert never_positive.f1 is None
    no_true_positives_possible = metrics(ConfusionMatrix(tn=5, fp=2))
    assert no_true_positives_possible.recall is None
    both_zero = metrics(ConfusionMatrix(tn=1, fp=3, fn=3))
    assert both_zero.f1 is None


class CountingReader(io.RawIOBase):
    def __init__(self, path):
        self._inner = open(path, "rb")
        self.bytes_read = 0

    def readable(self):
        return True

    def read(self, size=-1):
        chunk = self._inner.read(size)
        self.bytes_read += len(chunk)
        return chunk

    def close(self):
        self._inner.close()
        super().close()


def check_bounded_io(tmp_dir, ref):
    header = np.random.default_rng(77).integers(0, 256, 640, np.uint8).tobytes()
    big = Path(tmp_dir) / "big.bin"
    big.write_bytes(header + b"\x42" * (16 * 1024 * 1024 - len(header)))
    assert big.stat().st_size == 16 * 1024 * 1024

    reader = CountingReader(big)
    with_strip = classify_file(
        reader, ref, header_len=160, threshold=40.0, zero_run_min=16
    )
    assert reader.bytes_read <= 4 * 160, reader.bytes_read
    reader.close()

    reader = CountingReader(big)
    no_strip = classify_file(reader, ref, header_len=160, threshold=40.0)
    assert reader.bytes_read <= 160, reader.bytes_read
    reader.close()

    head_only = Path(tmp_dir) / "head.bin"
    head_only.write_bytes(header)
    assert classify_file(
        head_only, ref, header_len=160, threshold=40.0, zero_run_min=16
    ) == with_strip
    assert classify_file(head_only, ref, header_len=160, threshold=40.0) == no_strip


def check_zero_strip_behaviour(ref):
    path = DATA_DIR / "zero_prefix.bin"
    data = path.read_bytes()
    assert data[:64] == b"\x00" * 64

    plain = classify_file(path, ref, header_len=160, threshold=40.0)
    stripped = classify_file(
        path, ref, header_len=160, threshold=40.0, zero_run_min=16
    )
    assert plain.verdict is Verdict.NOT_ENCRYPTED
    assert stripped.verdict is Verdict.ENCRYPTED

    # manual recomputation of both areas from the committed bytes
    for zero_run, result in ((None, plain), (16, stripped)):
        window = data[:160] if zero_run is None else oracles.strip_zeros(
            data[: 4 * 160], zero_run
        )[:160]
        deltas = [
            (p, ref.curve.value_at(p) - h)
            for p, h in oracles.curve(window, max_len=160, step=8)
        ]
        want = oracles.trapezoid(deltas)
        assert abs(result.area - want) <= 1e-9
        assert (want <= 40.0) == (result.verdict is Verdict.ENCRYPTED)


_PROP_SETTINGS = settings(
    max_examples=1000,
    deadline=None,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)

_PROP_REF = None  # built lazily; used by the two classifier-level properties


def _prop_ref():
    global _PROP_REF
    if _PROP_REF is None:
        _PROP_REF = build_reference(seed=3, sample_count=10, max_len=64)
    return _PROP_REF


@_PROP_SETTINGS
@given(st.binary(min_size=1, max_size=256))
def _prop_entropy_bounds(data):
    h = shannon_entropy(data)
    assert 0.0 <= h <= min(8.0, math.log2(len(data))) + 1e-9


@_PROP_SETTINGS
@given(st.binary(min_size=2, max_size=160), st.randoms(use_true_random=False))
def _prop_permutation_invariance(data, rnd):
    shuffled = bytearray(data)
    rnd.shuffle(shuffled)
    assert shannon_entropy(bytes(shuffled)) == shannon_entropy(data)


@_PROP_SETTINGS
@given(
    st.lists(st.floats(min_value=-8, max_value=8), min_size=3, max_size=32),
    st.data(),
)
def _prop_trapezoid_linearity(deltas, data):
    points = tuple((8 * (i + 1), d) for i, d in enumerate(deltas))
    curve = DerivedCurve(step=8, points=points)
    mid = data.draw(st.sampled_from([p for p, _ in points[1:-1]]))
    whole = trapezoid_area(curve)
    split = trapezoid_area(curve, points[0][0], mid) + trapezoid_area(
        curve, mid, points[-1][0]
    )
    assert abs(whole - split) <= 1e-9


@_PROP_SETTINGS
@given(
    st.binary(min_size=64, max_size=64),
    st.floats(min_value=0, max_value=400),
    st.floats(min_value=0, max_value=400),
)
def _prop_threshold_monotonicity(data, t1, t2):
    lo, hi = sorted((t1, t2))
    ref = _prop_ref()
    low = classify_file(data, ref, header_len=64, threshold=lo)
    high = classify_file(data, ref, header_len=64, threshold=hi)
    if low.verdict is Verdict.ENCRYPTED:
        assert high.verdict is Verdict.ENCRYPTED
    assert low.area == high.area


_GRID_FILE = None


def _grid_file():
    global _GRID_FILE
    if _GRID_FILE is None:
        import tempfile

        handle = tempfile.NamedTemporaryFile(suffix=".bin", delete=False)
        handle.write(bytes(np.random.default_rng(5).integers(0, 256, 64, np.uint8)))
        handle.close()
        _GRID_FILE = handle.name
    return _GRID_FILE


@_PROP_SETTINGS
@given(
    st.lists(
        st.sampled_from([16, 24, 32, 40, 48, 56, 64]),
        min_size=1,
        max_size=7,
        unique=True,
    ),
    st.lists(
        st.floats(min_value=0, max_value=100),
        min_size=1,
        max_size=5,
        unique=True,
    ),
)
def _prop_sweep_grid_completeness(header_lens, thresholds):
    records = [FileRecord(Path(_grid_file()), "encrypted", "random")]
    grid = sweep(
        records, _prop_ref(), header_lens=header_lens, thresholds=thresholds
    )
    assert len(grid.cells) == len(header_lens) * len(thresholds)
    assert set(grid.cells) == {
        (h, t) for h in header_lens for t in thresholds
    }


def check_invariant_suites():
    t0 = time.perf_counter()
    _prop_entropy_bounds()
    _prop_permutation_invariance()
    _prop_trapezoid_linearity()
    _prop_threshold_monotonicity()
    _prop_sweep_grid_completeness()
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"property suites took {elapsed:.1f}s"
    return elapsed


def test_criterion_1_worked_example():
    with report(1, "worked example: deltas, sub-areas, total, verdict"):
        check_worked_example()


def test_criterion_2_entropy_kernel():
    with report(2, "entropy kernel: closed forms and golden 40-byte vector"):
        check_entropy_kernel()


def test_criterion_3_reference_agreement():
    with report(3, "reference build: canonical row within 0.05, <1s, deterministic"):
        check_reference_agreement()


def test_criterion_4_separation(tmp_path):
    with report(4, "random headers at least 0.5 bits above compressed"):
        check_separation(tmp_path)


def test_criterion_5_sweep_desk_scale(tmp_path, ref1000):
    with report(5, "200-file sweep cell (160,40) fully accurate vs oracle tally"):
        check_sweep_desk_scale(tmp_path, ref1000)


def test_criterion_6_metric_formulas():
    with report(6, "metric formulas and NA markers"):
        check_metric_formulas()


def test_criterion_7_bounded_io(tmp_path, ref1000):
    with report(7, "16MB file read-capped at 4x header and equal to header-only"):
        check_bounded_io(tmp_path, ref1000)


def test_criterion_8_zero_strip(ref1000):
    with report(8, "zero-run stripping flips the padded fixture's verdict"):
        check_zero_strip_behaviour(ref1000)


def test_criterion_9_invariant_suites():
    with report(9, "five property suites, 1000 cases each, under 30s"):
        check_invariant_suites()


def main() -> int:
    import tempfile

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        ref = build_reference(seed=7, sample_count=1000)
        steps = [
            (1, "worked example: deltas, sub-areas, total, verdict",
             check_worked_example, ()),
            (2, "entropy kernel: closed forms and golden 40-byte vector",
             check_entropy_kernel, ()),
            (3, "reference build: canonical row within 0.05, <1s, deterministic",
             check_reference_agreement, ()),
            (4, "random headers at least 0.5 bits above compressed",
             check_separation, (tmp,)),
            (5, "200-file sweep cell (160,40) fully accurate vs oracle tally",
             check_sweep_desk_scale, (tmp, ref)),
            (6, "metric formulas and NA markers", check_metric_formulas, ()),
            (7, "16MB file read-capped at 4x header and equal to header-only",
             check_bounded_io, (tmp, ref)),
            (8, "zero-run stripping flips the padded fixture's verdict",
             check_zero_strip_behaviour, (ref,)),
            (9, "five property suites, 1000 cases each, under 30s",
             check_invariant_suites, ()),
        ]
        for num, description, fn, args in steps:
            try:
                with report(num, description):
                    fn(*args)
            except BaseException as exc:  # keep going, report all criteria
                failures += 1
                print(f"  error: {exc}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

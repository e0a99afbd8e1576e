"""Command line front end.

Subcommands:
    reference   build and save a random-data reference curve
    classify    label files as encrypted / not-encrypted by header area
    generate    write a labelled synthetic corpus
    profile     per-type header entropy statistics for a corpus
    sweep       grid evaluation over header lengths and thresholds

Exit codes: 0 success, 1 bad invocation or config, 2 finished but some
files could not be processed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Iterable, Sequence

from .classifier import (
    DEFAULT_HEADER_LEN,
    DEFAULT_THRESHOLD,
    classify_file,
)
from .corpus import (
    CorpusSpec,
    exclusion_filter,
    generate_synthetic_corpus,
    load_manifest,
    profile_corpus,
    render_profiles_csv,
    write_profiles_csv,
)
from .entropy import DEFAULT_MAX_LEN, DEFAULT_STEP, DEFAULT_ZERO_RUN_MIN
from .errors import DaaError, ShortFileError
from .evaluation import (
    DEFAULT_HEADER_LENS,
    DEFAULT_THRESHOLDS,
    sweep,
    write_breakdown_csv,
    write_sweep_csv,
)
from .reference import (
    DEFAULT_SAMPLE_COUNT,
    build_reference,
    load_reference,
    save_reference,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; reserve 2 for partial failures.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _zero_run(value: str) -> int:
    parsed = int(value)
    if parsed < 0:
        raise argparse.ArgumentTypeError("zero-run-min must be >= 0")
    return parsed


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="daa",
        description="Detect encrypted files from header entropy divergence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ref = sub.add_parser("reference", help="build a random-data reference curve")
    ref.add_argument("--seed", type=int, default=7, help="RNG seed (default 7)")
    ref.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLE_COUNT,
        help=f"number of random samples to average (default {DEFAULT_SAMPLE_COUNT})",
    )
    ref.add_argument("--step", type=int, default=DEFAULT_STEP)
    ref.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    ref.add_argument("--out", required=True, help="output CSV path")

    cls = sub.add_parser("classify", help="classify files or directories")
    cls.add_argument("inputs", nargs="+", help="files or directories to classify")
    cls.add_argument("--reference", required=True, help="reference curve CSV")
    cls.add_argument("--header-len", type=int, default=DEFAULT_HEADER_LEN)
    cls.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    cls.add_argument(
        "--zero-run-min",
        type=_zero_run,
        default=DEFAULT_ZERO_RUN_MIN,
        help="strip zero runs of at least this length; 0 disables (default 16)",
    )
    cls.add_argument("--format", choices=("csv", "json"), default="csv")
    cls.add_argument("--out", help="write results here instead of stdout")

    gen = sub.add_parser("generate", help="write a synthetic labelled corpus")
    gen.add_argument("--seed", type=int, default=7)
    gen.add_argument("--out", required=True, help="corpus directory")
    gen.add_argument("--random", type=int, default=50)
    gen.add_argument("--text", type=int, default=50)
    gen.add_argument("--structured", type=int, default=50)
    gen.add_argument("--compressed", type=int, default=50)
    gen.add_argument("--compressor", default="zip")
    gen.add_argument("--min-size", type=int, default=512)
    gen.add_argument("--max-size", type=int, default=2048)

    prof = sub.add_parser("profile", help="per-type entropy statistics")
    prof.add_argument("manifest", help="corpus manifest (JSON lines)")
    prof.add_argument("--step", type=int, default=DEFAULT_STEP)
    prof.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    prof.add_argument("--zero-run-min", type=_zero_run, default=0)
    prof.add_argument(
        "--exclude-below",
        type=float,
        default=None,
        metavar="BITS",
        help="drop types whose mean entropy at --exclude-at is below this",
    )
    prof.add_argument("--exclude-at", type=int, default=40, metavar="LEN")
    prof.add_argument("--out", help="output CSV path (default stdout)")

    swp = sub.add_parser("sweep", help="header-length / threshold grid evaluation")
    swp.add_argument("manifest", help="corpus manifest (JSON lines)")
    swp.add_argument("--reference", required=True, help="reference curve CSV")
    swp.add_argument(
        "--header-lens",
        default=",".join(str(h) for h in DEFAULT_HEADER_LENS),
        help="comma-separated header lengths",
    )
    swp.add_argument(
        "--thresholds",
        default=",".join(f"{t:g}" for t in DEFAULT_THRESHOLDS),
        help="comma-separated area thresholds",
    )
    swp.add_argument("--zero-run-min", type=_zero_run, default=0)
    swp.add_argument("--out", required=True, help="output CSV path")
    swp.add_argument("--breakdown", help="optional per-type error CSV path")

    return parser


def _expand_inputs(inputs: Iterable[str]) -> list[Path]:
    """Files stay in argument order; directories expand recursively, sorted."""
    paths: list[Path] = []
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(q for q in p.rglob("*") if q.is_file()))
        else:
            paths.append(p)
    return paths


def cmd_reference(args: argparse.Namespace) -> int:
    if args.samples < 1:
        print("daa: error: --samples must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        reference = build_reference(
            seed=args.seed,
            sample_count=args.samples,
            max_len=args.max_len,
            step=args.step,
        )
    except (DaaError, ValueError) as exc:
        print(f"daa: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    save_reference(reference, args.out)
    print(f"wrote reference curve to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    try:
        reference = load_reference(args.reference)
    except (DaaError, OSError) as exc:
        print(f"daa: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    zero_run_min = args.zero_run_min or None
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    failures = 0
    if args.format == "csv":
        writer.writerow(["path", "area", "verdict", "header_len", "threshold", "error"])

    def record_failure(path: Path, message: str) -> None:
        if args.format == "csv":
            writer.writerow([str(path), "", "", "", "", message])
        else:
            buffer.write(json.dumps({"path": str(path), "error": message}) + "\n")

    for path in _expand_inputs(args.inputs):
        try:
            result = classify_file(
                path,
                reference,
                header_len=args.header_len,
                threshold=args.threshold,
                zero_run_min=zero_run_min,
            )
        except ShortFileError as exc:
            failures += 1
            record_failure(path, str(exc))
            continue
        except DaaError as exc:
            # Config errors (bad grid) abort; per-file issues are recorded.
            print(f"daa: error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (OSError, ValueError) as exc:
            failures += 1
            record_failure(path, str(exc))
            continue
        if args.format == "csv":
            writer.writerow([
                str(path),
                f"{result.area:.3f}",
                result.verdict.value,
                str(result.header_len),
                f"{result.threshold:g}",
                "",
            ])
        else:
            buffer.write(
                json.dumps(
                    {
                        "path": str(path),
                        "area": float(f"{result.area:.3f}"),
                        "verdict": result.verdict.value,
                        "header_len": result.header_len,
                        "threshold": result.threshold,
                    }
                )
                + "\n"
            )

    text = buffer.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    for name in ("random", "text", "structured", "compressed"):
        if getattr(args, name) < 0:
            print(f"daa: error: --{name} must be >= 0", file=sys.stderr)
            return EXIT_CONFIG
    if args.min_size < 1 or args.max_size < args.min_size:
        print("daa: error: need 1 <= min-size <= max-size", file=sys.stderr)
        return EXIT_CONFIG
    spec = CorpusSpec(
        random=args.random,
        text=args.text,
        structured=args.structured,
        compressed=args.compressed,
        compressor=args.compressor,
        min_size=args.min_size,
        max_size=args.max_size,
    )
    manifest = generate_synthetic_corpus(args.seed, args.out, spec)
    print(
        f"wrote {len(manifest)} files and manifest to {args.out}", file=sys.stderr
    )
    if "warning" in manifest.metadata:
        print(f"daa: warning: {manifest.metadata['warning']}", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace) -> int:
    try:
        records = load_manifest(args.manifest)
        result = profile_corpus(
            records,
            step=args.step,
            max_len=args.max_len,
            zero_run_min=args.zero_run_min or None,
        )
    except (DaaError, OSError, ValueError) as exc:
        print(f"daa: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    profiles = list(result.profiles)
    if args.exclude_below is not None:
        try:
            profiles, excluded = exclusion_filter(
                profiles, at_len=args.exclude_at, floor=args.exclude_below
            )
        except DaaError as exc:
            print(f"daa: error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for profile in excluded:
            print(
                f"excluded type {profile.file_type!r}: mean entropy at "
                f"{args.exclude_at} below {args.exclude_below:g}",
                file=sys.stderr,
            )
    if args.out:
        write_profiles_csv(profiles, args.out)
    else:
        sys.stdout.write(render_profiles_csv(profiles))
    for item in result.skipped:
        print(f"daa: skipped {item.path}: {item.reason}", file=sys.stderr)
    return EXIT_PARTIAL if result.skipped else EXIT_OK


def _parse_int_list(raw: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise DaaError(f"{flag} expects comma-separated integers, got {raw!r}")


def _parse_float_list(raw: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise DaaError(f"{flag} expects comma-separated numbers, got {raw!r}")


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        reference = load_reference(args.reference)
        records = load_manifest(args.manifest)
        header_lens = _parse_int_list(args.header_lens, "--header-lens")
        thresholds = _parse_float_list(args.thresholds, "--thresholds")
        grid = sweep(
            records,
            reference,
            header_lens=header_lens,
            thresholds=thresholds,
            zero_run_min=args.zero_run_min or None,
        )
    except (DaaError, OSError, ValueError) as exc:
        print(f"daa: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_sweep_csv(grid, args.out)
    if args.breakdown:
        write_breakdown_csv(grid, args.breakdown)
    print(f"wrote sweep grid to {args.out}", file=sys.stderr)
    for item in grid.skipped:
        print(f"daa: skipped {item.path}: {item.reason}", file=sys.stderr)
    return EXIT_PARTIAL if grid.skipped else EXIT_OK


_COMMANDS = {
    "reference": cmd_reference,
    "classify": cmd_classify,
    "generate": cmd_generate,
    "profile": cmd_profile,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

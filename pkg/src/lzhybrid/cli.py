"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or bounds error,
3 I/O or index-format error. ``LZHYBRID_LOG_LEVEL`` sets log verbosity.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .corpus import DNA, generate, perturb, sample_patterns
from .estimator import HybridIndex
from .fileformat import IndexFormatError
from .lz77 import parse
from .scan import find_approx
from .validation import QueryBoundsError, SeparatorCollisionError

log = logging.getLogger("lzhybrid")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
VERIFY_LENGTHS = (1, 10, 20, 40, 80)
BENCH_FIELDS = ["corpus", "n", "m", "k", "patterns", "total_matches",
                "mean_us", "median_us", "index_bytes"]


class UsageError(Exception):
    pass


def _int_list(value: str) -> List[int]:
    try:
        out = [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("lengths must be positive")
    return out


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _print_stats(stats: dict, out) -> None:
    out.write(json.dumps(stats, indent=2) + "\n")


def cmd_build(args, out) -> int:
    text = _read(args.input)
    hx = HybridIndex(max_length=args.m, max_edits=args.k, gap_period=args.g,
                     sample_period=args.b, sep_count=args.sep_count).fit(text)
    hx.save(args.output)
    log.info("wrote %s", args.output)
    _print_stats(hx.stats(), out)
    return EXIT_OK


def _load_patterns(args) -> List[bytes]:
    if (args.pattern is None) == (args.patterns is None):
        raise UsageError("give exactly one of PATTERN or --patterns")
    if args.pattern is not None:
        return [os.fsencode(args.pattern)]
    return [line for line in _read(args.patterns).split(b"\n") if line]


def cmd_query(args, out) -> int:
    hx = HybridIndex.load(args.index)
    patterns = _load_patterns(args)
    results = [hx.query(p, args.k) for p in patterns]
    for pid, res in enumerate(results, 1):
        for l, r, tag in res.occurrences:
            out.write(f"{pid}\t{l}\t{r}\t{tag}\n")
    return EXIT_OK


def _sample_queries(text: bytes, hx: HybridIndex, lengths, count, rng):
    M, K = hx.filtered_.params.max_length, hx.filtered_.params.max_edits
    for m in lengths:
        if m > len(text):
            log.warning("skipping length %d: longer than the corpus", m)
            continue
        for p in sample_patterns(text, m, count, rng):
            k = int(rng.integers(0, K + 1))
            if k:
                alphabet = bytes(sorted(set(text))) if len(set(text)) > 1 else DNA
                p = perturb(p, k, rng, alphabet)[:M]
            yield p, k


def cmd_verify(args, out) -> int:
    hx = HybridIndex.load(args.index)
    text = _read(args.corpus)
    if len(text) != hx.n_:
        out.write(f"FAIL: corpus has {len(text)} bytes, index was built on {hx.n_}\n")
        return EXIT_VERIFY
    if args.count == 0:
        log.warning("no samples requested; verification is vacuous")
        out.write("PASS: 0 queries checked\n")
        return EXIT_OK
    M = hx.filtered_.params.max_length
    lengths = [m for m in VERIFY_LENGTHS if m <= M]
    rng = np.random.default_rng(args.seed)
    checked = failures = 0
    for p, k in _sample_queries(text, hx, lengths, args.count, rng):
        got = set(hx.query(p, k).intervals())
        s, e = find_approx(text, p, k)
        want = set(zip(s.tolist(), e.tolist()))
        checked += 1
        if got != want:
            failures += 1
            out.write(f"MISMATCH pattern={p!r} k={k} missing={sorted(want - got)[:10]} "
                      f"extra={sorted(got - want)[:10]}\n")
    status = "PASS" if failures == 0 else "FAIL"
    out.write(f"{status}: {checked - failures}/{checked} queries matched the scan\n")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def cmd_bench(args, out) -> int:
    hx = HybridIndex.load(args.index)
    text = _read(args.corpus)
    size = Path(args.index).stat().st_size
    rng = np.random.default_rng(args.seed)
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    for m in args.lengths:
        if m > hx.filtered_.params.max_length or m > len(text):
            log.warning("skipping length %d: outside index or corpus bounds", m)
            continue
        patterns = sample_patterns(text, m, args.count, rng)
        times, total = [], 0
        for p in patterns:
            t0 = time.perf_counter()
            total += len(hx.query(p, args.k))
            times.append((time.perf_counter() - t0) * 1e6)
        writer.writerow({
            "corpus": Path(args.corpus).name, "n": len(text), "m": m, "k": args.k,
            "patterns": len(patterns), "total_matches": total,
            "mean_us": f"{np.mean(times):.3f}" if times else "",
            "median_us": f"{np.median(times):.3f}" if times else "",
            "index_bytes": size,
        })
    return EXIT_OK


def cmd_stats(args, out) -> int:
    _print_stats(HybridIndex.load(args.index).stats(), out)
    return EXIT_OK


def cmd_parse(args, out) -> int:
    dump = parse(_read(args.input)).dumps()
    if args.output:
        Path(args.output).write_text(dump)
    else:
        out.write(dump)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    data = generate(args.size, args.copies, args.rate, args.seed, args.alphabet.encode())
    Path(args.output).write_bytes(data)
    log.info("wrote %d bytes to %s", len(data), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzhybrid", description="LZ77-based hybrid pattern-matching index")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--m", type=int, default=100, help="maximum pattern length")
    p.add_argument("--k", type=int, default=0, help="maximum edit distance")
    p.add_argument("--g", type=int, default=32, help="raw-value period")
    p.add_argument("--b", type=int, default=512, help="search-sample period")
    p.add_argument("--sep-count", type=int, default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="report occurrences as TSV")
    p.add_argument("index")
    p.add_argument("pattern", nargs="?")
    p.add_argument("--patterns", help="file with one pattern per line")
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="compare index answers with a direct scan")
    p.add_argument("index")
    p.add_argument("corpus")
    p.add_argument("--count", type=int, default=100, help="samples per pattern length")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time queries, CSV output")
    p.add_argument("index")
    p.add_argument("corpus")
    p.add_argument("--lengths", type=_int_list, default=[10, 20, 40, 80])
    p.add_argument("--count", type=int, default=3000)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="print section sizes")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("parse", help="dump the LZ77 parse")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("gen", help="generate a repetitive corpus")
    p.add_argument("output")
    p.add_argument("--size", type=int, default=1 << 20, help="base length in bytes")
    p.add_argument("--copies", type=int, default=8)
    p.add_argument("--rate", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", default="ACGT")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    level = os.environ.get("LZHYBRID_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except (IndexFormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (QueryBoundsError, SeparatorCollisionError, UsageError, ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

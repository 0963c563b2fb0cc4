#!/usr/bin/env python3
"""Real-time-factor sweep over keyword-list sizes.

Decodes a fixed synthetic workload while growing the active keyword
list, then prints seconds and RTF per size.  The keyword lists nest
(each size is a prefix of the next), so the list size is the only
variable.  Absolute numbers are machine-dependent; the trend is the
point.
"""

import argparse
import json
import sys

from kwfuse import run_bench


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="0,50,200,1000", help="comma-separated, strictly increasing")
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--beam", type=int, default=4)
    parser.add_argument("--max-len", type=int, default=16, dest="max_len")
    parser.add_argument("--utterances", type=int, default=2)
    parser.add_argument("--audio-seconds", type=float, default=10.0, dest="audio_seconds")
    parser.add_argument("--out", help="optional JSON output path")
    args = parser.parse_args()

    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    rows = run_bench(
        sizes,
        reps=args.reps,
        seed=args.seed,
        beam_width=args.beam,
        max_len=args.max_len,
        utterances=args.utterances,
        audio_seconds=args.audio_seconds,
    )

    print(f"{'size':>6}  {'sec(min)':>10}  {'sec(med)':>10}  {'rtf(min)':>10}  {'rtf(med)':>10}")
    for row in rows:
        print(
            f"{row.list_size:>6}  {row.seconds_min:>10.4f}  {row.seconds_median:>10.4f}"
            f"  {row.rtf_min:>10.5f}  {row.rtf_median:>10.5f}"
        )
    slowdown = rows[-1].rtf_min / rows[0].rtf_min if rows and rows[0].rtf_min > 0 else float("nan")
    print(f"slowdown {rows[0].list_size} -> {rows[-1].list_size} keywords: {slowdown:.2f}x")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([row.__dict__ for row in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

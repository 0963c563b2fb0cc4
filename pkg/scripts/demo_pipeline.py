#!/usr/bin/env python3
"""End-to-end walkthrough on synthetic scorers.

Builds a three-utterance corpus in a working directory, then runs the
full command-line pipeline against it: decode with a keyword list,
label the references for supervision, and score the decode output.
Every artifact lands in --workdir for inspection afterwards.
"""

import argparse
import json
import sys
from pathlib import Path

from kwfuse.cli import entry

UTTERANCES = [
    {"id": "demo-1", "reference": "send a message to elisa toffoli"},
    {"id": "demo-2", "reference": "kim attends yale"},
    {"id": "demo-3", "reference": "message sent"},
]

KEYWORDS = ["message", "elisa toffoli", "yale"]


def run(argv: list[str]) -> None:
    print(f"$ kwfuse {' '.join(argv)}")
    code = entry(argv)
    if code != 0:
        sys.exit(f"command failed with exit status {code}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="demo_run", help="directory for all artifacts")
    parser.add_argument("--beam", type=int, default=4)
    parser.add_argument("--max-len", type=int, default=16, dest="max_len")
    parser.add_argument("--seed", type=int, default=0, help="base seed for the synthetic scorers")
    args = parser.parse_args()

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    manifest = workdir / "corpus.jsonl"
    rows = []
    for i, utt in enumerate(UTTERANCES):
        rows.append(
            {
                "id": utt["id"],
                "audio_replay": f"synthetic:{args.seed + 2 * i}",
                "lm_replay": f"synthetic:{args.seed + 2 * i + 1}",
                "reference": utt["reference"],
            }
        )
    manifest.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    keywords = workdir / "keywords.txt"
    keywords.write_text("".join(k + "\n" for k in KEYWORDS), encoding="utf-8")
    print(f"wrote {manifest} and {keywords}")

    decoded = workdir / "decoded.jsonl"
    run(
        [
            "decode",
            "--manifest", str(manifest),
            "--keywords", str(keywords),
            "--beam", str(args.beam),
            "--max-len", str(args.max_len),
            "--n-best", "2",
            "--out", str(decoded),
        ]
    )
    for line in decoded.read_text(encoding="utf-8").splitlines():
        record = json.loads(line)
        top = record["nbest"][0]
        events = "".join("C" if e["kind"] == "copy" else "t" for e in top["events"])
        print(f"  {record['id']}: {top['text']!r} log_score={top['log_score']:.3f} events={events}")

    labels = workdir / "labels.jsonl"
    run(["label", "--manifest", str(manifest), "--keywords", str(keywords), "--out", str(labels)])
    for line in labels.read_text(encoding="utf-8").splitlines():
        record = json.loads(line)
        starts = [t for t, v in enumerate(record["labels"]) if v]
        print(f"  {record['id']}: keyword spans start at {starts}")

    report = workdir / "report.json"
    run(
        [
            "eval",
            "--manifest", str(manifest),
            "--hyp", str(decoded),
            "--keywords", str(keywords),
            "--out", str(report),
            "--per-utt", str(workdir / "per_utt.tsv"),
        ]
    )
    payload = json.loads(report.read_text(encoding="utf-8"))
    print(
        f"  overall={payload['overall']:.3f} biased={payload['biased']}"
        f" unbiased={payload['unbiased']} recall={payload['recall']}"
    )
    print(f"all artifacts under {workdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Create a tiny randomly initialized checkpoint for desk-scale exports.

Run as ``python3 -m export_bridge.make_checkpoint --out DIR --kind acoustic``.
The weights come from the seed alone; pair two checkpoints that share the
same ``--chars`` string to keep their tokenizers compatible.
"""

from __future__ import annotations

import argparse
import sys

from .charset import DEFAULT_CHARS
from .checkpoints import KINDS, CheckpointSpec, create_checkpoint
from .cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, _Parser, _UsageError
from .errors import ExportError


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="export-bridge-make-checkpoint",
        description="Write a seeded tiny checkpoint directory (config.json + weights.pt).",
    )
    parser.add_argument("--out", required=True, help="checkpoint directory to create")
    parser.add_argument("--kind", required=True, choices=KINDS, help="backend kind")
    parser.add_argument("--seed", type=int, default=0, help="weight initialization seed")
    parser.add_argument("--chars", default=DEFAULT_CHARS, help="character vocabulary")
    parser.add_argument("--n-embd", type=int, default=32, help="embedding width")
    parser.add_argument("--n-layer", type=int, default=2, help="decoder layers")
    parser.add_argument("--n-head", type=int, default=2, help="attention heads")
    parser.add_argument("--n-positions", type=int, default=256, help="maximum sequence length")
    parser.add_argument("--audio-windows", type=int, default=4, help="acoustic prefix windows")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        arguments = build_parser().parse_args(argv)
        spec = CheckpointSpec(
            kind=arguments.kind,
            chars=arguments.chars,
            n_embd=arguments.n_embd,
            n_layer=arguments.n_layer,
            n_head=arguments.n_head,
            n_positions=arguments.n_positions,
            audio_windows=arguments.audio_windows,
            seed=arguments.seed,
        )
        create_checkpoint(arguments.out, spec)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (ExportError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"wrote {arguments.kind} checkpoint to {arguments.out} (seed {arguments.seed})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

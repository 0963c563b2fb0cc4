"""Command-line exporter.

One subcommand-free invocation runs one export job; flags mirror the
``ExportJob`` fields.  Exit codes: 0 success, 1 usage error, 2 data
error (unreadable checkpoints, audio, or untokenizable text), 3
internal invariant violation.  Output is byte-identical across runs of
the same job because the backends run on CPU in eval mode with no
sampling anywhere.
"""

from __future__ import annotations

import argparse
import sys
import traceback

import numpy as np

from .errors import ExportError
from .export import ExportJob, export_replay

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; that slot means "data error"
    # here, so usage problems are rerouted through _UsageError instead.
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kwexport",
        description=(
            "Run an acoustic and a language checkpoint along a forced transcript "
            "path and export per-step logits and hidden states as replay files."
        ),
    )
    parser.add_argument("--acoustic-checkpoint", required=True, help="acoustic checkpoint directory")
    parser.add_argument("--language-checkpoint", required=True, help="language checkpoint directory")
    parser.add_argument("--audio", required=True, help="16-bit PCM WAV file")
    parser.add_argument("--transcript", required=True, help="reference transcript text")
    parser.add_argument("--prompt", default="", help="rendered instruction prompt (default: empty)")
    parser.add_argument("--acoustic-out", required=True, help="output path for the acoustic replay file")
    parser.add_argument("--language-out", required=True, help="output path for the language replay file")
    parser.add_argument("--vocab-out", required=True, help="output path for the vocabulary dump")
    return parser


def run(arguments: argparse.Namespace) -> int:
    job = ExportJob(
        acoustic_checkpoint=arguments.acoustic_checkpoint,
        language_checkpoint=arguments.language_checkpoint,
        audio_path=arguments.audio,
        transcript=arguments.transcript,
        prompt=arguments.prompt,
        acoustic_out=arguments.acoustic_out,
        language_out=arguments.language_out,
        vocab_out=arguments.vocab_out,
    )
    result = export_replay(job)
    print(f"forced path: {len(result.forced_path)} tokens over vocabulary of {result.vocab_size}")
    print(f"vocab digest: {result.vocab_digest}")
    print(
        f"wrote {job.acoustic_out} (T={len(result.forced_path)}, V={result.vocab_size}, "
        f"d={result.acoustic_hidden_dim})"
    )
    print(
        f"wrote {job.language_out} (T={len(result.forced_path)}, V={result.vocab_size}, "
        f"d={result.language_hidden_dim})"
    )
    print(f"wrote {job.vocab_out}")
    print(f"acoustic loss total: {float(np.sum(result.acoustic_losses)):.6f}")
    print(f"language loss total: {float(np.sum(result.language_losses)):.6f}")
    return EXIT_OK


def entry(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        arguments = parser.parse_args(argv)
        return run(arguments)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (ExportError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(entry())

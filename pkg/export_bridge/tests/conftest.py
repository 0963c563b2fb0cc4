"""Session fixtures: one checkpoint pair, one tone clip, one finished export.

Everything heavy is session-scoped; the checkpoints are tiny (two GPT-2
layers, width 16 and 32) so the whole suite stays in the seconds range.
The two backends get different widths on purpose: replay consumers read
the hidden size per file, and equal widths would mask a swapped-dims bug.
"""

from __future__ import annotations

import pytest

from export_bridge import CheckpointSpec, DEFAULT_CHARS, create_checkpoint, export_replay

from bridge_helpers import (
    ACOUSTIC_SEED,
    ACOUSTIC_WIDTH,
    LANGUAGE_SEED,
    LANGUAGE_WIDTH,
    CheckpointPair,
    Exported,
    make_job,
    write_tone,
)


@pytest.fixture(scope="session")
def checkpoint_pair(tmp_path_factory) -> CheckpointPair:
    root = tmp_path_factory.mktemp("checkpoints")
    acoustic_dir = str(root / "acoustic")
    language_dir = str(root / "language")
    create_checkpoint(
        acoustic_dir,
        CheckpointSpec(kind="acoustic", chars=DEFAULT_CHARS, n_embd=ACOUSTIC_WIDTH, seed=ACOUSTIC_SEED),
    )
    create_checkpoint(
        language_dir,
        CheckpointSpec(kind="language", chars=DEFAULT_CHARS, n_embd=LANGUAGE_WIDTH, seed=LANGUAGE_SEED),
    )
    return CheckpointPair(acoustic_dir=acoustic_dir, language_dir=language_dir, chars=DEFAULT_CHARS)


@pytest.fixture(scope="session")
def tone_wav(tmp_path_factory) -> str:
    path = str(tmp_path_factory.mktemp("audio") / "tone.wav")
    write_tone(path)
    return path


@pytest.fixture(scope="session")
def exported(checkpoint_pair, tone_wav, tmp_path_factory) -> Exported:
    out_dir = str(tmp_path_factory.mktemp("export"))
    job = make_job(checkpoint_pair, tone_wav, out_dir)
    result = export_replay(job)
    return Exported(job=job, result=result, pair=checkpoint_pair, wav_path=tone_wav)

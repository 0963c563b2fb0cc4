"""Export jobs end to end, including interop with the decoding engine.

The engine side of the contract is exercised through its public surface
only: ``read_replay`` / ``open_replay`` with the dumped vocabulary, the
forced-path decoder, and ``loss_token``.  The acceptance bar for the
exporter: its files pass the engine's replay validation, and the
engine's loss on the forced path matches the backend's own per-token
cross entropy within 1e-4.
"""

import os
import warnings

import numpy as np
import pytest

import kwfuse
import export_bridge
from export_bridge import (
    AudioLoadError,
    Charset,
    CheckpointError,
    CheckpointSpec,
    ExportError,
    TokenizerMismatch,
    create_checkpoint,
    export_replay,
)

from bridge_helpers import (
    ACOUSTIC_WIDTH,
    LANGUAGE_WIDTH,
    TRANSCRIPT,
    make_job,
    write_tone,
)

LOSS_ATOL = 1e-4


def _softmax_rows(logits):
    x = np.asarray(logits, dtype=np.float64)
    x = x - x.max(axis=1, keepdims=True)
    p = np.exp(x)
    return p / p.sum(axis=1, keepdims=True)


def _load_vocab(exported):
    with open(exported.job.vocab_out, encoding="utf-8") as fh:
        return kwfuse.Vocabulary.from_json(fh.read())


def test_engine_validates_replay_files_with_zero_warnings(exported):
    vocab = _load_vocab(exported)
    for path in (exported.job.acoustic_out, exported.job.language_out):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            replay = kwfuse.read_replay(path, vocabulary=vocab)
            session = kwfuse.open_replay(path, vocabulary=vocab)
        assert caught == []
        assert replay.vocab_digest == exported.result.vocab_digest
        assert session is not None


def test_replay_dimensions_match_the_checkpoints(exported):
    acoustic = kwfuse.read_replay(exported.job.acoustic_out)
    language = kwfuse.read_replay(exported.job.language_out)
    assert acoustic.kind == "acoustic"
    assert language.kind == "language"
    assert acoustic.hidden_dim == ACOUSTIC_WIDTH
    assert language.hidden_dim == LANGUAGE_WIDTH
    assert acoustic.vocab_size == language.vocab_size == exported.result.vocab_size
    assert acoustic.meta["generator"] == "export-bridge"
    assert "hidden_source" in acoustic.meta


def test_forced_paths_identical_and_match_the_transcript(exported):
    acoustic = kwfuse.read_replay(exported.job.acoustic_out)
    language = kwfuse.read_replay(exported.job.language_out)
    assert acoustic.forced_path == language.forced_path
    charset = Charset(exported.pair.chars)
    assert acoustic.forced_path == charset.tokenize(TRANSCRIPT)
    assert acoustic.steps == len(TRANSCRIPT)


def test_engine_loss_matches_backend_loss_within_1e_4(exported):
    cases = [
        (exported.job.acoustic_out, exported.result.acoustic_losses),
        (exported.job.language_out, exported.result.language_losses),
    ]
    for path, backend_losses in cases:
        replay = kwfuse.read_replay(path)
        probs = _softmax_rows(replay.logits)
        engine_total = kwfuse.loss_token(probs, replay.forced_path)
        backend_total = float(np.sum(backend_losses, dtype=np.float64))
        assert abs(engine_total - backend_total) < LOSS_ATOL, path
        for t, token in enumerate(replay.forced_path):
            engine_step = kwfuse.loss_token(probs[t : t + 1], (token,))
            assert abs(engine_step - float(backend_losses[t])) < LOSS_ATOL, (path, t)


def test_engine_forced_path_decode_reproduces_the_transcript(exported):
    vocab = _load_vocab(exported)
    weights = kwfuse.init_encoder_weights(
        0,
        vocab_size=vocab.size,
        d_language=LANGUAGE_WIDTH,
        d_acoustic=ACOUSTIC_WIDTH,
    )
    tokenizer = kwfuse.Tokenizer(vocab)
    path = kwfuse.read_replay(exported.job.acoustic_out).forced_path
    for surfaces in ([], ["yale"]):
        keywords = kwfuse.build_keyword_list(surfaces, tokenizer)
        hyp = kwfuse.forced_path_decode(
            lambda: kwfuse.open_replay(exported.job.acoustic_out, vocab),
            lambda: kwfuse.open_replay(exported.job.language_out, vocab),
            weights,
            keywords,
            vocab,
            path,
        )
        assert hyp.tokens == path
        assert kwfuse.render_text(hyp.tokens, vocab) == TRANSCRIPT


def test_reexport_is_byte_identical(exported, tmp_path):
    rerun = make_job(exported.pair, exported.wav_path, str(tmp_path))
    export_replay(rerun)
    for first, second in (
        (exported.job.acoustic_out, rerun.acoustic_out),
        (exported.job.language_out, rerun.language_out),
        (exported.job.vocab_out, rerun.vocab_out),
    ):
        with open(first, "rb") as fh_a, open(second, "rb") as fh_b:
            assert fh_a.read() == fh_b.read(), (first, second)


def test_prompt_feeds_only_the_language_backend(exported, tmp_path):
    rerun = make_job(exported.pair, exported.wav_path, str(tmp_path), prompt="different prompt")
    export_replay(rerun)
    with open(exported.job.acoustic_out, "rb") as fh_a, open(rerun.acoustic_out, "rb") as fh_b:
        assert fh_a.read() == fh_b.read()
    baseline = kwfuse.read_replay(exported.job.language_out)
    variant = kwfuse.read_replay(rerun.language_out)
    assert baseline.forced_path == variant.forced_path
    assert not np.array_equal(baseline.logits, variant.logits)


def test_tokenizer_mismatch_between_checkpoints(exported, tmp_path):
    other_dir = str(tmp_path / "other_language")
    create_checkpoint(
        other_dir,
        CheckpointSpec(kind="language", chars="abc ", n_embd=8, n_head=2, seed=1),
    )
    job = make_job(exported.pair, exported.wav_path, str(tmp_path))
    job = type(job)(**{**job.__dict__, "language_checkpoint": other_dir})
    with pytest.raises(TokenizerMismatch, match="vocabularies differ"):
        export_replay(job)


def test_swapped_checkpoint_kinds_rejected(exported, tmp_path):
    job = make_job(exported.pair, exported.wav_path, str(tmp_path))
    swapped = type(job)(
        **{
            **job.__dict__,
            "acoustic_checkpoint": exported.pair.language_dir,
            "language_checkpoint": exported.pair.acoustic_dir,
        }
    )
    with pytest.raises(CheckpointError, match="expected acoustic"):
        export_replay(swapped)


def test_audio_errors_surface_as_audio_load_error(exported, tmp_path):
    job = make_job(exported.pair, exported.wav_path, str(tmp_path))
    missing = type(job)(**{**job.__dict__, "audio_path": str(tmp_path / "absent.wav")})
    with pytest.raises(AudioLoadError):
        export_replay(missing)
    corrupt_path = tmp_path / "corrupt.wav"
    corrupt_path.write_bytes(b"definitely not audio")
    corrupt = type(job)(**{**job.__dict__, "audio_path": str(corrupt_path)})
    with pytest.raises(AudioLoadError):
        export_replay(corrupt)


def test_untokenizable_transcript_rejected(exported, tmp_path):
    job = make_job(exported.pair, exported.wav_path, str(tmp_path))
    bad = type(job)(**{**job.__dict__, "transcript": "café au lait"})
    with pytest.raises(ExportError, match="not in the checkpoint vocabulary"):
        export_replay(bad)


def test_empty_transcript_rejected(exported, tmp_path):
    job = make_job(exported.pair, exported.wav_path, str(tmp_path))
    empty = type(job)(**{**job.__dict__, "transcript": ""})
    with pytest.raises(ExportError, match="empty"):
        export_replay(empty)


def test_transcript_longer_than_the_position_budget_rejected(tmp_path):
    for kind, seed in (("acoustic", 1), ("language", 2)):
        create_checkpoint(
            str(tmp_path / kind),
            CheckpointSpec(kind=kind, chars="ab ", n_embd=8, n_head=2, n_positions=8, seed=seed),
        )
    wav = str(tmp_path / "tone.wav")
    write_tone(wav, seconds=0.05)
    job = export_bridge.ExportJob(
        acoustic_checkpoint=str(tmp_path / "acoustic"),
        language_checkpoint=str(tmp_path / "language"),
        audio_path=wav,
        transcript="ab ab ab ab ab",
        prompt="",
        acoustic_out=str(tmp_path / "a.mgfr"),
        language_out=str(tmp_path / "l.mgfr"),
        vocab_out=str(tmp_path / "v.json"),
    )
    with pytest.raises(ExportError, match="positions"):
        export_replay(job)


def test_engine_package_never_imports_the_exporter():
    # The engine must stay fully functional with no exporter installed, so
    # its source tree cannot reference this package.
    engine_dir = os.path.dirname(kwfuse.__file__)
    for name in sorted(os.listdir(engine_dir)):
        if not name.endswith(".py"):
            continue
        with open(os.path.join(engine_dir, name), encoding="utf-8") as fh:
            assert "export_bridge" not in fh.read(), name

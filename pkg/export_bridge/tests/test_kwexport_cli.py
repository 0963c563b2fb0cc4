"""kwexport command line: flags, exit codes, deterministic output."""

import os

import pytest

from export_bridge import cli
from export_bridge.cli import entry

from bridge_helpers import TRANSCRIPT


def _argv(pair, wav_path, out_dir, **overrides):
    flags = {
        "--acoustic-checkpoint": pair.acoustic_dir,
        "--language-checkpoint": pair.language_dir,
        "--audio": wav_path,
        "--transcript": TRANSCRIPT,
        "--prompt": "The keywords are yale.",
        "--acoustic-out": os.path.join(out_dir, "a.mgfr"),
        "--language-out": os.path.join(out_dir, "l.mgfr"),
        "--vocab-out": os.path.join(out_dir, "v.json"),
    }
    flags.update(overrides)
    argv = []
    for key, value in flags.items():
        if value is not None:
            argv.extend([key, value])
    return argv


def test_successful_export_writes_all_three_artifacts(checkpoint_pair, tone_wav, tmp_path, capsys):
    out_dir = str(tmp_path)
    assert entry(_argv(checkpoint_pair, tone_wav, out_dir)) == 0
    for name in ("a.mgfr", "l.mgfr", "v.json"):
        assert os.path.exists(os.path.join(out_dir, name))
    out = capsys.readouterr().out
    assert f"forced path: {len(TRANSCRIPT)} tokens" in out
    assert "vocab digest: " in out
    assert out.count("wrote ") == 3
    assert "acoustic loss total: " in out
    assert "language loss total: " in out


def test_two_runs_are_byte_identical_including_stdout(checkpoint_pair, tone_wav, tmp_path, capsys):
    first_dir, second_dir = str(tmp_path / "one"), str(tmp_path / "two")
    os.makedirs(first_dir)
    os.makedirs(second_dir)
    assert entry(_argv(checkpoint_pair, tone_wav, first_dir)) == 0
    first_out = capsys.readouterr().out
    assert entry(_argv(checkpoint_pair, tone_wav, second_dir)) == 0
    second_out = capsys.readouterr().out
    assert first_out.replace(first_dir, "") == second_out.replace(second_dir, "")
    for name in ("a.mgfr", "l.mgfr", "v.json"):
        with open(os.path.join(first_dir, name), "rb") as fh_a:
            with open(os.path.join(second_dir, name), "rb") as fh_b:
                assert fh_a.read() == fh_b.read(), name


def test_prompt_flag_is_optional(checkpoint_pair, tone_wav, tmp_path):
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path), **{"--prompt": None})
    assert entry(argv) == 0


def test_missing_required_flag_is_a_usage_error(checkpoint_pair, tone_wav, tmp_path, capsys):
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path), **{"--audio": None})
    assert entry(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_unknown_flag_is_a_usage_error(checkpoint_pair, tone_wav, tmp_path, capsys):
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path)) + ["--turbo"]
    assert entry(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert entry(["--help"]) == 0
    assert "kwexport" in capsys.readouterr().out


def test_missing_checkpoint_is_a_data_error(checkpoint_pair, tone_wav, tmp_path, capsys):
    argv = _argv(
        checkpoint_pair, tone_wav, str(tmp_path), **{"--acoustic-checkpoint": str(tmp_path / "absent")}
    )
    assert entry(argv) == 2
    assert "CheckpointError" in capsys.readouterr().err


def test_bad_audio_is_a_data_error(checkpoint_pair, tone_wav, tmp_path, capsys):
    bad = tmp_path / "noise.wav"
    bad.write_bytes(b"not audio")
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path), **{"--audio": str(bad)})
    assert entry(argv) == 2
    assert "AudioLoadError" in capsys.readouterr().err


def test_untokenizable_transcript_is_a_data_error(checkpoint_pair, tone_wav, tmp_path, capsys):
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path), **{"--transcript": "café"})
    assert entry(argv) == 2
    assert "ExportError" in capsys.readouterr().err


def test_internal_failure_exits_three(checkpoint_pair, tone_wav, tmp_path, monkeypatch, capsys):
    def boom(job):
        raise RuntimeError("invariant broken")

    monkeypatch.setattr(cli, "export_replay", boom)
    argv = _argv(checkpoint_pair, tone_wav, str(tmp_path))
    assert entry(argv) == 3
    assert "invariant broken" in capsys.readouterr().err

import pytest

from kwfuse import KwfuseError, Utterance, load_manifest, parse_binding


def test_parse_binding_kinds():
    assert parse_binding("synthetic:42") == ("synthetic", 42)
    assert parse_binding("synthetic:-3") == ("synthetic", -3)
    assert parse_binding("runs/utt1.mgfr") == ("replay", "runs/utt1.mgfr")
    with pytest.raises(KwfuseError):
        parse_binding("synthetic:not-a-seed")


def test_load_manifest_round_trip(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        '{"id": "u1", "audio_replay": "synthetic:1", "lm_replay": "synthetic:2", "reference": "a b"}\n'
        "\n"
        '{"id": "u2", "audio_replay": "a.mgfr", "lm_replay": "l.mgfr", "keywords": "kw.txt"}\n',
        encoding="utf-8",
    )
    utterances = load_manifest(str(path))
    assert utterances == [
        Utterance(id="u1", audio_binding="synthetic:1", lm_binding="synthetic:2", reference="a b"),
        Utterance(id="u2", audio_binding="a.mgfr", lm_binding="l.mgfr", keywords_path="kw.txt"),
    ]


def test_load_manifest_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        '{"id": "u1", "audio_replay": "synthetic:1", "lm_replay": "synthetic:2"}\n'
        '{"id": "u1", "audio_replay": "synthetic:3", "lm_replay": "synthetic:4"}\n',
        encoding="utf-8",
    )
    with pytest.raises(KwfuseError, match="duplicate"):
        load_manifest(str(path))


def test_load_manifest_rejects_bad_json_and_missing_fields(tmp_path):
    bad_json = tmp_path / "bad.jsonl"
    bad_json.write_text("{not json}\n", encoding="utf-8")
    with pytest.raises(KwfuseError, match="bad.jsonl:1"):
        load_manifest(str(bad_json))

    missing = tmp_path / "missing.jsonl"
    missing.write_text('{"id": "u1", "audio_replay": "synthetic:1"}\n', encoding="utf-8")
    with pytest.raises(KwfuseError, match="lm_replay"):
        load_manifest(str(missing))

import numpy as np
import pytest

from kwfuse import BadDims, BadMagic, ReplayFile, TruncatedBody, read_replay, write_replay


def _random_replay(rng):
    vocab_size = int(rng.integers(2, 20))
    hidden_dim = int(rng.integers(1, 8))
    steps = int(rng.integers(1, 12))
    return ReplayFile(
        vocab_digest="d" * 64,
        kind="language" if rng.integers(2) else "acoustic",
        forced_path=tuple(int(t) for t in rng.integers(0, vocab_size, size=steps)),
        logits=(rng.normal(size=(steps, vocab_size)) * 5).astype(np.float32),
        hidden=rng.normal(size=(steps, hidden_dim)).astype(np.float32),
        meta={"layer": "final", "note": int(rng.integers(100))},
    )


def test_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(4)
    for case in range(20):
        original = _random_replay(rng)
        path = tmp_path / f"case{case}.mgfr"
        write_replay(str(path), original)
        loaded = read_replay(str(path))
        assert loaded.vocab_digest == original.vocab_digest
        assert loaded.kind == original.kind
        assert loaded.forced_path == original.forced_path
        assert loaded.meta == original.meta
        assert loaded.logits.tobytes() == original.logits.tobytes()
        assert loaded.hidden.tobytes() == original.hidden.tobytes()


def test_write_is_deterministic(tmp_path):
    rng = np.random.default_rng(9)
    replay = _random_replay(rng)
    a = tmp_path / "a.mgfr"
    b = tmp_path / "b.mgfr"
    write_replay(str(a), replay)
    write_replay(str(b), replay)
    assert a.read_bytes() == b.read_bytes()


def test_bad_magic(tmp_path):
    path = tmp_path / "junk.mgfr"
    path.write_bytes(b"NOPE" + b"\x00" * 20)
    with pytest.raises(BadMagic):
        read_replay(str(path))


def test_bad_version(tmp_path):
    rng = np.random.default_rng(1)
    path = tmp_path / "v.mgfr"
    write_replay(str(path), _random_replay(rng))
    data = bytearray(path.read_bytes())
    data[4] = 99  # version byte
    path.write_bytes(bytes(data))
    with pytest.raises(BadMagic):
        read_replay(str(path))


def test_truncated_body(tmp_path):
    rng = np.random.default_rng(2)
    path = tmp_path / "t.mgfr"
    write_replay(str(path), _random_replay(rng))
    data = path.read_bytes()
    path.write_bytes(data[:-3])
    with pytest.raises(TruncatedBody):
        read_replay(str(path))


def test_validation_rejects_bad_shapes():
    logits = np.zeros((2, 4), dtype=np.float32)
    hidden = np.zeros((2, 3), dtype=np.float32)
    with pytest.raises(BadDims):
        ReplayFile("d", "acoustic", (0,), logits, hidden)  # path length != T
    with pytest.raises(BadDims):
        ReplayFile("d", "acoustic", (0, 9), logits, hidden)  # token out of range
    with pytest.raises(BadDims):
        ReplayFile("d", "sideways", (0, 1), logits, hidden)  # unknown kind
    with pytest.raises(BadDims):
        ReplayFile("d", "acoustic", (0,), np.zeros((1, 1), np.float32), hidden[:1])  # V < 2

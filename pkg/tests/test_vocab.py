import hashlib
import json

import pytest
from hypothesis import given, strategies as st

from kwfuse import Tokenizer, TokenOutOfRange, UnknownCharacter, Vocabulary, build_char_vocabulary


def test_char_vocabulary_sorted_unique_eos_last():
    vocab = build_char_vocabulary("banana cab")
    assert vocab.id_to_string == (" ", "a", "b", "c", "n", "<eos>")
    assert vocab.eos_id == 5
    assert vocab.size == 6


def test_string_to_id_is_inverse():
    vocab = build_char_vocabulary("xyz")
    for i, s in enumerate(vocab.id_to_string):
        assert vocab.string_to_id[s] == i


def test_duplicate_tokens_rejected():
    with pytest.raises(ValueError):
        Vocabulary(("a", "a", "<eos>"), eos_id=2)


def test_eos_out_of_range_rejected():
    with pytest.raises(ValueError):
        Vocabulary(("a", "b"), eos_id=2)


def test_check_token_bounds():
    vocab = build_char_vocabulary("ab")
    vocab.check_token(0)
    vocab.check_token(2)
    with pytest.raises(TokenOutOfRange):
        vocab.check_token(3)
    with pytest.raises(TokenOutOfRange):
        vocab.check_token(-1)


def test_digest_frozen_value():
    # sha256 of '{"eos_id":2,"tokens":["a","b","<eos>"]}' computed independently
    vocab = Vocabulary(("a", "b", "<eos>"), eos_id=2)
    assert vocab.digest() == "c6141e71652b1a07bef00c5dbd884932c2b4e0f474750483ad4b6be4a97d30a7"


def test_digest_matches_canonical_json_recipe():
    vocab = build_char_vocabulary("hello world")
    blob = json.dumps(
        {"eos_id": vocab.eos_id, "tokens": list(vocab.id_to_string)},
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    assert vocab.digest() == hashlib.sha256(blob.encode("utf-8")).hexdigest()


def test_digest_sensitive_to_order_and_eos():
    a = Vocabulary(("a", "b", "<eos>"), eos_id=2)
    b = Vocabulary(("b", "a", "<eos>"), eos_id=2)
    c = Vocabulary(("a", "b", "<eos>"), eos_id=0)
    assert len({a.digest(), b.digest(), c.digest()}) == 3


def test_json_round_trip():
    vocab = build_char_vocabulary("héllo 世界")
    again = Vocabulary.from_json(vocab.to_json())
    assert again == vocab
    assert again.digest() == vocab.digest()


def test_tokenize_chars():
    vocab = build_char_vocabulary("abc")
    tok = Tokenizer(vocab)
    assert tok.tokenize("cab") == [2, 0, 1]
    assert tok.detokenize([2, 0, 1]) == "cab"


def test_tokenize_greedy_longest_match():
    vocab = Vocabulary(("a", "b", "ab", "aab", "<eos>"), eos_id=4)
    tok = Tokenizer(vocab)
    assert tok.tokenize("ab") == [2]
    assert tok.tokenize("aab") == [3]
    assert tok.tokenize("aaab") == [0, 3]
    assert tok.tokenize("ba") == [1, 0]


def test_tokenize_never_emits_eos_even_if_surface_matches():
    vocab = Vocabulary(("a", "b", "ab"), eos_id=2)
    tok = Tokenizer(vocab)
    assert tok.tokenize("ab") == [0, 1]


def test_unknown_character():
    tok = Tokenizer(build_char_vocabulary("abc"))
    with pytest.raises(UnknownCharacter):
        tok.tokenize("abz")


def test_detokenize_checks_range():
    tok = Tokenizer(build_char_vocabulary("ab"))
    with pytest.raises(TokenOutOfRange):
        tok.detokenize([0, 9])


@given(st.text(alphabet="abcd ", max_size=40))
def test_round_trip_property(text):
    tok = Tokenizer(build_char_vocabulary("abcd "))
    assert tok.detokenize(tok.tokenize(text)) == text

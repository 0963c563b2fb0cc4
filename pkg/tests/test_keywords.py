import pytest

from kwfuse import (
    DuplicateKeyword,
    EmptyKeyword,
    Keyword,
    KeywordList,
    Tokenizer,
    UntokenizableKeyword,
    build_char_vocabulary,
    build_keyword_list,
    load_keyword_file,
    render_prompt,
)


@pytest.fixture
def tok():
    return Tokenizer(build_char_vocabulary("send a message to elisa toffoli nrg"))


def test_build_keyword_list(tok):
    kl = build_keyword_list(["elisa toffoli", "nrg"], tok)
    assert kl.n == 2
    assert kl.slots == 3
    assert kl.keyword(1).surface == "elisa toffoli"
    assert kl.keyword(2).surface == "nrg"
    assert kl.keyword(1).token_ids == tuple(tok.tokenize("elisa toffoli"))


def test_slot_zero_is_reserved(tok):
    kl = build_keyword_list(["nrg"], tok)
    with pytest.raises(IndexError):
        kl.keyword(0)
    with pytest.raises(IndexError):
        kl.keyword(2)


def test_blank_keyword_rejected(tok):
    with pytest.raises(EmptyKeyword):
        build_keyword_list(["   "], tok)


def test_keyword_outside_vocabulary_rejected(tok):
    with pytest.raises(UntokenizableKeyword):
        build_keyword_list(["zürich"], tok)


def test_duplicate_token_sequence_rejected(tok):
    with pytest.raises(DuplicateKeyword):
        build_keyword_list(["nrg", "nrg"], tok)


def test_empty_token_ids_rejected():
    with pytest.raises(EmptyKeyword):
        Keyword("x", ())


def test_surfaces_preserve_order(tok):
    kl = build_keyword_list(["nrg", "elisa toffoli"], tok)
    assert kl.surfaces() == ["nrg", "elisa toffoli"]


def test_prompt_rendering_exact(tok):
    kl = build_keyword_list(["elisa toffoli", "nrg"], tok)
    prompt = render_prompt(kl)
    assert prompt.rendered == (
        "Transcribe the speech into text. "
        "The following keywords are likely to appear. "
        "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
        "The keywords are elisa toffoli, nrg. "
        "The text corresponding to the speech is:"
    )


def test_prompt_empty_list_drops_enumeration_sentence():
    prompt = render_prompt(KeywordList(()))
    assert prompt.rendered == (
        "Transcribe the speech into text. "
        "The following keywords are likely to appear. "
        "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
        "The text corresponding to the speech is:"
    )
    assert "The keywords are" not in prompt.rendered


def test_load_keyword_file(tmp_path):
    path = tmp_path / "kw.txt"
    path.write_text("# header comment\n\nelisa toffoli\n  nrg  \n#trailing\n", encoding="utf-8")
    assert load_keyword_file(str(path)) == ["elisa toffoli", "nrg"]

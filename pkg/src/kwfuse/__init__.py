"""Keyword-aware fusion decoding: joint token/phrase contextual biasing.

The engine fuses an acoustic scorer and a language scorer per token
(entropy-gated), scores user keywords as whole phrases via attention
over an encoded keyword table, normalizes jointly over the unified
token-plus-keyword space, and beam-decodes with atomic keyword copying.
Scorers are pluggable: deterministic synthetic sessions for desk-scale
runs, replay files recorded from real models for interop.
"""

from .bench import BenchRow, run_bench
from .corpus import Utterance, load_manifest, parse_binding
from .decoder import (
    COPY,
    TOKEN,
    DecodeConfig,
    Event,
    Hypothesis,
    JointDistribution,
    beam_search,
    decode_record,
    expand,
    forced_path_decode,
    hypothesis_record,
    joint_step,
    render_text,
)
from .errors import (
    AlreadyFinished,
    BadDims,
    BadMagic,
    DimMismatch,
    DuplicateKeyword,
    EmptyEvaluation,
    EmptyKeyword,
    EmptyReference,
    KwfuseError,
    LengthMismatch,
    NonFiniteInput,
    NotADistribution,
    ReplayExhausted,
    ReplayPathDiverged,
    TokenOutOfRange,
    TruncatedBody,
    UnknownCharacter,
    UntokenizableKeyword,
    VocabularyMismatch,
    ZeroProbabilityChoice,
    ZeroTargetProbability,
)
from .keywords import (
    ContextPrompt,
    Keyword,
    KeywordList,
    PROMPT_TEMPLATE,
    build_keyword_list,
    load_keyword_file,
    render_prompt,
)
from .matching import longest_match_spans
from .metrics import (
    AlignedPair,
    BiasedReport,
    NORMALIZER_VERSION,
    Op,
    aggregate,
    align,
    biased_report,
    normalize,
    split_units,
)
from .phrase_fusion import (
    EncoderWeights,
    LayerWeights,
    PhraseStep,
    PhraseTable,
    build_phrase_table,
    encode_keyword,
    init_encoder_weights,
    load_weights,
    phrase_probs,
    save_weights,
)
from .replay import ReplayFile, read_replay, write_replay
from .scorers import (
    ReplaySession,
    ScorerSession,
    StepScores,
    SyntheticSession,
    open_replay,
    open_synthetic,
)
from .supervision import (
    LossReport,
    PhraseLabels,
    finite_diff_check,
    grad_fused_logits,
    loss_phrase,
    loss_report,
    loss_token,
    max_match_labels,
)
from .token_fusion import (
    FusedTokenStep,
    entropy,
    fuse_logits,
    sigmoid,
    softmax,
    token_prob_of,
    uncertainty_gate,
)
from .vocab import Tokenizer, Vocabulary, build_char_vocabulary

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

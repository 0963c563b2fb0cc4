"""Phrase-level keyword scoring.

Each keyword is folded into a single representation vector by a 3-layer
recurrent encoder (standard long short-term memory cells: input, forget
and output gates with sigmoid, tanh candidate, no peepholes); the
representation is the last layer's hidden state at the last token.
Slot 0 of the phrase table holds a stored parameter vector representing
the "emit ordinary tokens" outcome, which has no tokens to encode.

At each decoding step the two scorers' hidden states are concatenated
(language first, acoustic second — the order is part of the weight-file
contract) and projected to a query; dot products against the table rows
are softmaxed into the phrase distribution of length N+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import binio
from .errors import BadDims, DimMismatch, TokenOutOfRange
from .keywords import Keyword, KeywordList
from .token_fusion import softmax

MAGIC = b"MGFW"

# Gate block order inside each layer's stacked matrices.
GATE_ORDER = ("input", "forget", "output", "candidate")


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class LayerWeights:
    """One recurrence layer: stacked 4-gate input/recurrent weights and bias.

    ``wx`` is (4r, in_dim), ``wh`` is (4r, r), ``bias`` is (4r,), with the
    four r-row blocks ordered as in :data:`GATE_ORDER`.
    """

    wx: np.ndarray
    wh: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "wx", _readonly(self.wx))
        object.__setattr__(self, "wh", _readonly(self.wh))
        object.__setattr__(self, "bias", _readonly(self.bias))
        rows = self.wx.shape[0]
        width = rows // 4
        if rows != 4 * width or self.wh.shape != (rows, width) or self.bias.shape != (rows,):
            raise DimMismatch(
                f"inconsistent layer shapes wx={self.wx.shape} wh={self.wh.shape} bias={self.bias.shape}"
            )

    @property
    def width(self) -> int:
        return self.wx.shape[0] // 4

    @property
    def in_dim(self) -> int:
        return self.wx.shape[1]


@dataclass(frozen=True)
class EncoderWeights:
    """Keyword-encoder parameters plus the query projection.

    ``embedding`` is (V, e); the three layers have widths all equal to the
    representation size r (layer 1 consumes e, layers 2-3 consume r);
    ``fake_repr`` is the stored slot-0 vector; ``proj_w`` is
    (r, d_l + d_a) applied to [h_language ; h_acoustic], ``proj_b`` (r,).
    """

    embedding: np.ndarray
    layers: tuple[LayerWeights, LayerWeights, LayerWeights]
    fake_repr: np.ndarray
    proj_w: np.ndarray
    proj_b: np.ndarray
    d_language: int
    d_acoustic: int
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "embedding", _readonly(self.embedding))
        object.__setattr__(self, "fake_repr", _readonly(self.fake_repr))
        object.__setattr__(self, "proj_w", _readonly(self.proj_w))
        object.__setattr__(self, "proj_b", _readonly(self.proj_b))
        if self.embedding.ndim != 2:
            raise DimMismatch("embedding must be (V, e)")
        width = self.layers[0].width
        expect_in = self.embedding.shape[1]
        for i, layer in enumerate(self.layers):
            if layer.width != width or layer.in_dim != expect_in:
                raise DimMismatch(f"layer {i + 1} shapes break the e -> r -> r -> r chain")
            expect_in = width
        if self.fake_repr.shape != (width,):
            raise DimMismatch(f"slot-0 vector must have length {width}")
        if self.proj_w.shape != (width, self.d_language + self.d_acoustic):
            raise DimMismatch(
                f"projection must be ({width}, {self.d_language + self.d_acoustic}), got {self.proj_w.shape}"
            )
        if self.proj_b.shape != (width,):
            raise DimMismatch("projection bias length must equal r")

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0]

    @property
    def embed_dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def repr_dim(self) -> int:
        return self.layers[0].width


@dataclass(frozen=True)
class PhraseTable:
    """(N+1, r) matrix of representations; row 0 is the slot-0 vector."""

    reprs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "reprs", _readonly(self.reprs))
        if self.reprs.ndim != 2 or self.reprs.shape[0] < 1:
            raise DimMismatch("phrase table must be (N+1, r) with N >= 0")
        if not np.isfinite(self.reprs).all():
            raise DimMismatch("phrase table entries must be finite")

    @property
    def slots(self) -> int:
        return self.reprs.shape[0]


@dataclass(frozen=True)
class PhraseStep:
    """Attention query and the normalized phrase distribution (length N+1)."""

    query: np.ndarray
    phrase_probs: np.ndarray = field(repr=False)


def _vsigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def encode_keyword(weights: EncoderWeights, keyword: Keyword) -> np.ndarray:
    """Run the 3-layer recurrence over the keyword's token embeddings."""
    for t in keyword.token_ids:
        if not 0 <= t < weights.vocab_size:
            raise TokenOutOfRange(f"keyword token {t} outside embedding table")
    seq = [weights.embedding[t] for t in keyword.token_ids]
    width = weights.repr_dim
    for layer in weights.layers:
        h = np.zeros(width)
        c = np.zeros(width)
        outputs = []
        for x in seq:
            gates = layer.wx @ x + layer.wh @ h + layer.bias
            i = _vsigmoid(gates[:width])
            f = _vsigmoid(gates[width : 2 * width])
            o = _vsigmoid(gates[2 * width : 3 * width])
            cand = np.tanh(gates[3 * width :])
            c = f * c + i * cand
            h = o * np.tanh(c)
            outputs.append(h)
        seq = outputs
    return seq[-1]


def build_phrase_table(weights: EncoderWeights, keyword_list: KeywordList) -> PhraseTable:
    """Slot 0 from the stored parameter, slots 1..N encoded in list order."""
    rows = np.empty((keyword_list.slots, weights.repr_dim))
    rows[0] = weights.fake_repr
    for i, keyword in enumerate(keyword_list, start=1):
        rows[i] = encode_keyword(weights, keyword)
    return PhraseTable(rows)


def phrase_probs(
    weights: EncoderWeights,
    h_language: np.ndarray,
    h_acoustic: np.ndarray,
    table: PhraseTable,
) -> PhraseStep:
    """Dot-product attention over the table, softmaxed across all N+1 slots."""
    h_l = np.asarray(h_language, dtype=np.float64)
    h_a = np.asarray(h_acoustic, dtype=np.float64)
    if h_l.shape != (weights.d_language,):
        raise DimMismatch(f"language hidden has shape {h_l.shape}, weights expect ({weights.d_language},)")
    if h_a.shape != (weights.d_acoustic,):
        raise DimMismatch(f"acoustic hidden has shape {h_a.shape}, weights expect ({weights.d_acoustic},)")
    if table.reprs.shape[1] != weights.repr_dim:
        raise DimMismatch("phrase table width disagrees with weights")
    query = weights.proj_w @ np.concatenate([h_l, h_a]) + weights.proj_b
    return PhraseStep(query=query, phrase_probs=softmax(table.reprs @ query))


def init_encoder_weights(
    seed: int,
    *,
    vocab_size: int,
    embed_dim: int = 8,
    repr_dim: int = 16,
    d_language: int,
    d_acoustic: int,
) -> EncoderWeights:
    """Deterministic non-degenerate weights, uniform in [-0.1, 0.1].

    Values are quantized to f32 at creation so saving and reloading the
    weight file reproduces them exactly.
    """
    if min(vocab_size, embed_dim, repr_dim, d_language, d_acoustic) < 1:
        raise BadDims("all weight dimensions must be >= 1")
    rng = np.random.default_rng(seed)

    def uniform(*shape):
        return rng.uniform(-0.1, 0.1, shape).astype(np.float32).astype(np.float64)

    layers = []
    in_dim = embed_dim
    for _ in range(3):
        layers.append(
            LayerWeights(
                wx=uniform(4 * repr_dim, in_dim),
                wh=uniform(4 * repr_dim, repr_dim),
                bias=uniform(4 * repr_dim),
            )
        )
        in_dim = repr_dim
    return EncoderWeights(
        embedding=uniform(vocab_size, embed_dim),
        layers=tuple(layers),
        fake_repr=uniform(repr_dim),
        proj_w=uniform(repr_dim, d_language + d_acoustic),
        proj_b=uniform(repr_dim),
        d_language=d_language,
        d_acoustic=d_acoustic,
        seed=seed,
    )


def save_weights(path: str, weights: EncoderWeights, note: str = "") -> None:
    """Write the MGFW file: header dims, then flat f32 arrays.

    Payload order: embedding, then per layer (wx, wh, bias) for layers
    1..3, then the slot-0 vector, then projection matrix and bias.
    """
    header = {
        "V": weights.vocab_size,
        "e": weights.embed_dim,
        "r": weights.repr_dim,
        "d_l": weights.d_language,
        "d_a": weights.d_acoustic,
        "seed": weights.seed,
        "note": note,
    }
    chunks = [binio.pack_header(MAGIC, header), binio.f32_bytes(weights.embedding)]
    for layer in weights.layers:
        chunks.extend([binio.f32_bytes(layer.wx), binio.f32_bytes(layer.wh), binio.f32_bytes(layer.bias)])
    chunks.extend(
        [binio.f32_bytes(weights.fake_repr), binio.f32_bytes(weights.proj_w), binio.f32_bytes(weights.proj_b)]
    )
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def load_weights(path: str) -> EncoderWeights:
    with open(path, "rb") as fh:
        data = fh.read()
    header, payload = binio.split_envelope(data, MAGIC)
    try:
        v, e, r = int(header["V"]), int(header["e"]), int(header["r"])
        d_l, d_a = int(header["d_l"]), int(header["d_a"])
        seed = header.get("seed")
    except (KeyError, TypeError, ValueError) as exc:
        raise BadDims(f"{path}: malformed weight header: {exc}") from exc

    offset = 0

    def grab(*shape):
        nonlocal offset
        count = int(np.prod(shape))
        flat, offset = binio.take_f32(payload, offset, count, "weights")
        return flat.astype(np.float64).reshape(shape)

    embedding = grab(v, e)
    layers = []
    in_dim = e
    for _ in range(3):
        layers.append(LayerWeights(wx=grab(4 * r, in_dim), wh=grab(4 * r, r), bias=grab(4 * r)))
        in_dim = r
    fake_repr = grab(r)
    proj_w = grab(r, d_l + d_a)
    proj_b = grab(r)
    return EncoderWeights(
        embedding=embedding,
        layers=tuple(layers),
        fake_repr=fake_repr,
        proj_w=proj_w,
        proj_b=proj_b,
        d_language=d_l,
        d_acoustic=d_a,
        seed=None if seed is None else int(seed),
    )

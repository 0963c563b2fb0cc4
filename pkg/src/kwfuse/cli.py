"""Command-line surface: decode, eval, label, synth, bench.

Exit codes: 0 success, 1 usage error, 2 data error (bad or missing
input files, engine validation failures), 3 internal invariant
violation.  Every command except bench writes byte-identical output for
identical inputs and flags; bench reports wall-clock timings, which are
inherently machine dependent.

Flags may be collected in a JSON config file (``--config run.json``,
keys named like the flag destinations); explicit flags override file
values, file values override defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bench import run_bench
from .corpus import Utterance, load_manifest, parse_binding
from .decoder import DecodeConfig, beam_search, decode_record, forced_path_decode
from .errors import KwfuseError, EmptyEvaluation
from .keywords import build_keyword_list, load_keyword_file
from .metrics import NORMALIZER_VERSION, UNITS, aggregate, biased_report, normalize
from .phrase_fusion import init_encoder_weights, load_weights
from .replay import ReplayFile, read_replay, write_replay, KINDS
from .scorers import ReplaySession, open_synthetic
from .supervision import max_match_labels
from .vocab import Tokenizer, Vocabulary, build_char_vocabulary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_REQUIRED = object()


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; that slot means "data error"
    # here, so usage problems are rerouted through _UsageError instead.
    def error(self, message):
        raise _UsageError(message)


def _read_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"config file {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise _UsageError(f"config file {path} must hold a JSON object")
    return obj


def _merged(args: argparse.Namespace, spec: dict) -> dict:
    """Resolve flag > config > default for every option in ``spec``."""
    config = _read_config(getattr(args, "config", None))
    unknown = set(config) - set(spec)
    if unknown:
        raise _UsageError(f"config keys not understood: {sorted(unknown)}")
    out = {}
    for key, default in spec.items():
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, default)
        if value is _REQUIRED:
            raise _UsageError(f"missing required option --{key.replace('_', '-')}")
        out[key] = value
    return out


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_vocabulary(path: str) -> Vocabulary:
    with open(path, encoding="utf-8") as fh:
        try:
            return Vocabulary.from_json(fh.read())
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise KwfuseError(f"vocabulary dump {path}: {exc}") from exc


def _infer_vocabulary(utterances: list[Utterance], surfaces: list[str]) -> Vocabulary:
    """Character vocabulary over every reference and keyword surface."""
    corpus = "".join(u.reference for u in utterances if u.reference)
    corpus += "".join(surfaces)
    for utt in utterances:
        if utt.keywords_path:
            corpus += "".join(load_keyword_file(utt.keywords_path))
    if not corpus:
        raise KwfuseError("no --vocab given and no references/keywords to infer one from")
    return build_char_vocabulary(corpus)


def _effective_vocabulary(merged: dict, utterances: list[Utterance], surfaces: list[str]) -> Vocabulary:
    if merged["vocab"]:
        return _load_vocabulary(merged["vocab"])
    return _infer_vocabulary(utterances, surfaces)


def _session_factories(utt: Utterance, vocabulary: Vocabulary, hidden_dim: int):
    """(acoustic_factory, language_factory, d_acoustic, d_language, forced_path).

    ``forced_path`` is None when both scorers are synthetic; replay-backed
    utterances can only be decoded along their recorded path.
    """
    factories = []
    dims = []
    paths = []
    for binding, kind in ((utt.audio_binding, "acoustic"), (utt.lm_binding, "language")):
        source, value = parse_binding(binding)
        if source == "synthetic":
            seed = value
            factories.append(lambda s=seed, k=kind: open_synthetic(s, (vocabulary.size, hidden_dim), k))
            dims.append(hidden_dim)
        else:
            try:
                replay = read_replay(value, vocabulary)
            except OSError as exc:
                raise KwfuseError(f"utterance {utt.id!r}: replay file {value!r}: {exc}") from exc
            if replay.kind != kind:
                raise KwfuseError(
                    f"utterance {utt.id!r}: {binding!r} holds a {replay.kind} trace, expected {kind}"
                )
            factories.append(lambda r=replay: ReplaySession(r))
            dims.append(replay.hidden_dim)
            paths.append(replay.forced_path)
    if len(paths) == 2 and paths[0] != paths[1]:
        raise KwfuseError(f"utterance {utt.id!r}: the two replay files disagree on the forced path")
    return factories[0], factories[1], dims[0], dims[1], paths[0] if paths else None


def cmd_decode(args: argparse.Namespace) -> int:
    merged = _merged(
        args,
        {
            "manifest": _REQUIRED,
            "keywords": None,
            "vocab": None,
            "weights": None,
            "weights_seed": 0,
            "hidden_dim": 8,
            "beam": 4,
            "max_len": 32,
            "n_best": 1,
            "out": "-",
            "jobs": None,
        },
    )
    utterances = load_manifest(merged["manifest"])
    global_surfaces = load_keyword_file(merged["keywords"]) if merged["keywords"] else []
    vocabulary = _effective_vocabulary(merged, utterances, global_surfaces)
    tokenizer = Tokenizer(vocabulary)
    cfg = DecodeConfig(
        beam_width=int(merged["beam"]), max_len=int(merged["max_len"]), n_best=int(merged["n_best"])
    )
    jobs = merged["jobs"]
    if jobs is None:
        jobs = int(os.environ.get("KWFUSE_JOBS", "1"))
    jobs = max(1, int(jobs))

    prepared = []
    shared_dims: tuple[int, int] | None = None
    weights = load_weights(merged["weights"]) if merged["weights"] else None
    for utt in utterances:
        acoustic, language, d_a, d_l, forced = _session_factories(utt, vocabulary, int(merged["hidden_dim"]))
        if shared_dims is None:
            shared_dims = (d_a, d_l)
            if weights is None:
                weights = init_encoder_weights(
                    int(merged["weights_seed"]),
                    vocab_size=vocabulary.size,
                    d_language=d_l,
                    d_acoustic=d_a,
                )
        elif shared_dims != (d_a, d_l):
            raise KwfuseError(
                f"utterance {utt.id!r}: hidden dims {(d_a, d_l)} differ from first utterance {shared_dims}"
            )
        surfaces = load_keyword_file(utt.keywords_path) if utt.keywords_path else global_surfaces
        keyword_list = build_keyword_list(surfaces, tokenizer)
        prepared.append((utt, acoustic, language, keyword_list, forced))

    def work(item):
        utt, acoustic, language, keyword_list, forced = item
        try:
            if forced is None:
                hyps = beam_search(acoustic, language, weights, keyword_list, cfg, vocabulary)
            else:
                # replay traces hold one recorded path; decode greedily along it
                hyps = [forced_path_decode(acoustic, language, weights, keyword_list, vocabulary, forced)]
        except KwfuseError as exc:
            raise KwfuseError(f"utterance {utt.id!r}: {exc}") from exc
        return decode_record(utt.id, hyps, vocabulary)

    if jobs == 1:
        records = [work(item) for item in prepared]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(work, prepared))

    lines = [json.dumps(record, ensure_ascii=False, sort_keys=True) for record in records]
    _write_text(merged["out"], "".join(line + "\n" for line in lines))
    return EXIT_OK


def _load_hypotheses(path: str) -> dict[str, str]:
    """Top-1 text per utterance id from a decode output file."""
    hyps: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                nbest = obj["nbest"]
                hyps[str(obj["id"])] = str(nbest[0]["text"]) if nbest else ""
            except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
                raise KwfuseError(f"{path}:{lineno}: bad decode record: {exc}") from exc
    return hyps


def cmd_eval(args: argparse.Namespace) -> int:
    merged = _merged(
        args,
        {
            "manifest": _REQUIRED,
            "hyp": _REQUIRED,
            "keywords": None,
            "unit": "word",
            "language": "en",
            "out": "-",
            "per_utt": None,
        },
    )
    unit = merged["unit"]
    if unit not in UNITS:
        raise _UsageError(f"--unit must be one of {UNITS}")
    language = merged["language"]
    if language not in ("en", "zh"):
        raise _UsageError("--language must be en or zh")

    utterances = load_manifest(merged["manifest"])
    hyps = _load_hypotheses(merged["hyp"])
    raw_surfaces = load_keyword_file(merged["keywords"]) if merged["keywords"] else []
    surfaces: list[str] = []
    for raw in raw_surfaces:
        norm = normalize(raw, language)
        if norm and norm not in surfaces:
            surfaces.append(norm)

    reports = []
    rows = []
    skipped = 0
    for utt in utterances:
        if utt.id not in hyps:
            continue
        if utt.reference is None:
            print(f"warning: utterance {utt.id!r} has no reference, skipped", file=sys.stderr)
            skipped += 1
            continue
        try:
            report = biased_report(
                normalize(utt.reference, language), normalize(hyps[utt.id], language), surfaces, unit
            )
        except KwfuseError as exc:
            raise KwfuseError(f"utterance {utt.id!r}: {exc}") from exc
        reports.append(report)
        rows.append((utt.id, report))
    if not reports:
        raise EmptyEvaluation("no utterance ids shared between manifest and hypotheses")

    overall = aggregate(reports)
    payload = {
        "overall": overall.overall,
        "biased": overall.biased,
        "unbiased": overall.unbiased,
        "recall": overall.recall,
        "counts": {**overall.counts, "utterances": len(reports), "skipped_missing_reference": skipped},
        "normalizer_version": NORMALIZER_VERSION,
        "unit": unit,
        "language": language,
    }
    _write_text(merged["out"], json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n")

    if merged["per_utt"]:
        def cell(value):
            return "" if value is None else f"{value:.6f}"

        header = "id\toverall\tbiased\tunbiased\trecall\tref_units\terrors_b\terrors_u\n"
        body = "".join(
            f"{utt_id}\t{cell(r.overall)}\t{cell(r.biased)}\t{cell(r.unbiased)}\t{cell(r.recall)}"
            f"\t{r.counts['ref_units']}\t{r.counts['errors_b']}\t{r.counts['errors_u']}\n"
            for utt_id, r in rows
        )
        _write_text(merged["per_utt"], header + body)
    return EXIT_OK


def cmd_label(args: argparse.Namespace) -> int:
    merged = _merged(
        args,
        {"manifest": _REQUIRED, "keywords": _REQUIRED, "vocab": None, "out": "-"},
    )
    utterances = load_manifest(merged["manifest"])
    surfaces = load_keyword_file(merged["keywords"])
    vocabulary = _effective_vocabulary(merged, utterances, surfaces)
    tokenizer = Tokenizer(vocabulary)
    keyword_list = build_keyword_list(surfaces, tokenizer)

    lines = []
    for utt in utterances:
        if utt.reference is None:
            print(f"warning: utterance {utt.id!r} has no reference, skipped", file=sys.stderr)
            continue
        try:
            tokens = tokenizer.tokenize(utt.reference)
        except KwfuseError as exc:
            raise KwfuseError(f"utterance {utt.id!r}: {exc}") from exc
        labels = max_match_labels(tokens, keyword_list)
        record = {"id": utt.id, "labels": list(labels.labels), "mask": list(labels.mask)}
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    _write_text(merged["out"], "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    merged = _merged(
        args,
        {
            "out": _REQUIRED,
            "path": _REQUIRED,
            "seed": 0,
            "kind": "acoustic",
            "hidden_dim": 8,
            "vocab": None,
            "alphabet": "abcdefghijklmnopqrstuvwxyz ",
            "write_vocab": None,
        },
    )
    if merged["kind"] not in KINDS:
        raise _UsageError(f"--kind must be one of {KINDS}")
    try:
        path = tuple(int(x) for x in str(merged["path"]).split(",") if x.strip() != "")
    except ValueError as exc:
        raise _UsageError(f"--path must be comma-separated token ids: {exc}") from exc
    if not path:
        raise _UsageError("--path must name at least one token")
    if merged["vocab"]:
        vocabulary = _load_vocabulary(merged["vocab"])
    else:
        vocabulary = build_char_vocabulary(str(merged["alphabet"]))

    hidden_dim = int(merged["hidden_dim"])
    session = open_synthetic(int(merged["seed"]), (vocabulary.size, hidden_dim), merged["kind"])
    steps = len(path)
    logits = np.empty((steps, vocabulary.size), dtype=np.float32)
    hidden = np.empty((steps, hidden_dim), dtype=np.float32)
    for t, token in enumerate(path):
        scores = session.step()
        logits[t] = scores.logits
        hidden[t] = scores.hidden
        session.advance(token)
    replay = ReplayFile(
        vocab_digest=vocabulary.digest(),
        kind=merged["kind"],
        forced_path=path,
        logits=logits,
        hidden=hidden,
        meta={"generator": "synthetic", "seed": int(merged["seed"])},
    )
    write_replay(merged["out"], replay)
    if merged["write_vocab"]:
        _write_text(merged["write_vocab"], vocabulary.to_json() + "\n")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    merged = _merged(
        args,
        {
            "sizes": "0,50,200,1000",
            "reps": 3,
            "seed": 0,
            "beam": 4,
            "max_len": 16,
            "utterances": 2,
            "hidden_dim": 8,
            "audio_seconds": 10.0,
            "out": None,
        },
    )
    try:
        sizes = [int(x) for x in str(merged["sizes"]).split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"--sizes must be comma-separated integers: {exc}") from exc
    if sizes != sorted(set(sizes)):
        raise _UsageError("--sizes must be strictly increasing")
    rows = run_bench(
        sizes,
        reps=int(merged["reps"]),
        seed=int(merged["seed"]),
        beam_width=int(merged["beam"]),
        max_len=int(merged["max_len"]),
        utterances=int(merged["utterances"]),
        hidden_dim=int(merged["hidden_dim"]),
        audio_seconds=float(merged["audio_seconds"]),
    )
    print(f"{'size':>6}  {'sec(min)':>10}  {'sec(med)':>10}  {'rtf(min)':>10}  {'rtf(med)':>10}")
    for row in rows:
        print(
            f"{row.list_size:>6}  {row.seconds_min:>10.4f}  {row.seconds_median:>10.4f}"
            f"  {row.rtf_min:>10.5f}  {row.rtf_median:>10.5f}"
        )
    if merged["out"]:
        payload = [row.__dict__ for row in rows]
        _write_text(merged["out"], json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kwfuse", description="Keyword-aware fusion decoding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    decode = sub.add_parser("decode", help="beam-decode a manifest")
    decode.add_argument("--manifest", help="utterance manifest (JSON Lines)")
    decode.add_argument("--keywords", help="keyword file, one per line")
    decode.add_argument("--vocab", help="vocabulary dump (JSON); default: infer characters")
    decode.add_argument("--weights", help="encoder weight file; default: seeded init")
    decode.add_argument("--weights-seed", type=int, dest="weights_seed")
    decode.add_argument("--hidden-dim", type=int, dest="hidden_dim", help="synthetic scorer hidden size")
    decode.add_argument("--beam", type=int)
    decode.add_argument("--max-len", type=int, dest="max_len")
    decode.add_argument("--n-best", type=int, dest="n_best")
    decode.add_argument("--out", help="output JSONL path, - for stdout")
    decode.add_argument("--jobs", type=int, help="utterance parallelism (env KWFUSE_JOBS)")
    decode.add_argument("--config", help="JSON config file; flags override it")
    decode.set_defaults(func=cmd_decode)

    evaluate = sub.add_parser("eval", help="score decode output against references")
    evaluate.add_argument("--manifest")
    evaluate.add_argument("--hyp", help="decode output JSONL")
    evaluate.add_argument("--keywords")
    evaluate.add_argument("--unit", choices=UNITS)
    evaluate.add_argument("--language", choices=("en", "zh"))
    evaluate.add_argument("--out")
    evaluate.add_argument("--per-utt", dest="per_utt", help="optional per-utterance TSV path")
    evaluate.add_argument("--config")
    evaluate.set_defaults(func=cmd_eval)

    label = sub.add_parser("label", help="emit phrase labels for references")
    label.add_argument("--manifest")
    label.add_argument("--keywords")
    label.add_argument("--vocab")
    label.add_argument("--out")
    label.add_argument("--config")
    label.set_defaults(func=cmd_label)

    synth = sub.add_parser("synth", help="write a synthetic replay fixture")
    synth.add_argument("--out")
    synth.add_argument("--path", help="forced path, comma-separated token ids")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--kind", choices=KINDS)
    synth.add_argument("--hidden-dim", type=int, dest="hidden_dim")
    synth.add_argument("--vocab")
    synth.add_argument("--alphabet", help="characters of the fallback vocabulary")
    synth.add_argument("--write-vocab", dest="write_vocab", help="also dump the vocabulary JSON here")
    synth.add_argument("--config")
    synth.set_defaults(func=cmd_synth)

    bench = sub.add_parser("bench", help="measure decode RTF across list sizes")
    bench.add_argument("--sizes", help="comma-separated, strictly increasing")
    bench.add_argument("--reps", type=int)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--beam", type=int)
    bench.add_argument("--max-len", type=int, dest="max_len")
    bench.add_argument("--utterances", type=int)
    bench.add_argument("--hidden-dim", type=int, dest="hidden_dim")
    bench.add_argument("--audio-seconds", type=float, dest="audio_seconds")
    bench.add_argument("--out", help="optional JSON output path")
    bench.add_argument("--config")
    bench.set_defaults(func=cmd_bench)
    return parser


def entry(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        arguments = parser.parse_args(argv)
        return arguments.func(arguments)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (KwfuseError, OSError) as exc:
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

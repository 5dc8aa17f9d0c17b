"""Command-line front end; every subcommand is a thin wrapper over one module.

Flags mirror the training config fields one to one. An optional config file
with one key=value pair per line supplies defaults; explicit flags win.
Exit codes: 0 success, 1 data or processing error, 2 usage error.
"""

import argparse
import sys

from .corpus import (
    ParseError,
    TaggedSentence,
    build_vocabulary,
    iter_utf8_lines,
    load_corpus,
    load_tagged_corpus,
    save_tagged_corpus,
)
from .embedding import (
    TrainConfig,
    corpus_to_characters,
    load_space,
    save_space,
    train_embeddings,
)
from .evaluate import (
    eval_similarity,
    format_prf,
    load_judgements,
    per_type_prf,
    span_prf,
    spans_of_corpus,
)
from .morphsim import (
    build_pairs,
    load_similarity_model,
    load_thesaurus,
    save_similarity_model,
    train_perceptron,
)
from .revise import CombinedSpaceConfig, build_combined_space
from .sememe import build_sememe_space, hownet_vector, make_hownet_fn, parse_lexicon
from .tagger import (
    FeatureSpec,
    LabelScheme,
    assemble_features,
    load_tagger,
    save_tagger,
    tag_sentence,
    train_logreg,
)

_TRAIN_FIELDS = (
    ("dim", int),
    ("window", int),
    ("negative", int),
    ("epochs", int),
    ("learning_rate", float),
    ("min_count", int),
    ("subsample", float),
    ("seed", int),
    ("architecture", str),
)


def _note(command, message):
    print(f"[{command}] {message}", file=sys.stderr)


def _read_config_file(path):
    values = {}
    for lineno, line in iter_utf8_lines(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ParseError(f"{path}: line {lineno}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _train_config(args):
    file_values = _read_config_file(args.config) if args.config else {}
    known = {name for name, _ in _TRAIN_FIELDS}
    for key in file_values:
        if key not in known:
            raise ParseError(f"{args.config}: unknown config key {key!r}")
    kwargs = {}
    for name, cast in _TRAIN_FIELDS:
        flag = getattr(args, name)
        if flag is not None:
            kwargs[name] = flag
        elif name in file_values:
            try:
                kwargs[name] = cast(file_values[name])
            except ValueError:
                raise ParseError(
                    f"{args.config}: bad value for {name}: {file_values[name]!r}"
                ) from None
    config = TrainConfig(**kwargs)
    config.validate()
    return config


def _add_train_flags(sub):
    sub.add_argument("--config", help="key=value per line; flags override")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--window", type=int)
    sub.add_argument("--negative", type=int)
    sub.add_argument("--epochs", type=int)
    sub.add_argument("--learning-rate", type=float, dest="learning_rate")
    sub.add_argument("--min-count", type=int, dest="min_count")
    sub.add_argument("--subsample", type=float)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--architecture", choices=["skipgram", "cbow"])


def _cmd_train_embeddings(args):
    config = _train_config(args)
    corpus = load_corpus(args.corpus)
    _note(args.command, f"{len(corpus)} sentences, {corpus.total_tokens()} tokens")
    space = train_embeddings(corpus, config)
    _note(args.command, f"trained {len(space)} vectors of dimension {space.dim}")
    save_space(space, args.out)
    _note(args.command, f"wrote {args.out}")
    return 0


def _cmd_train_char_embeddings(args):
    config = _train_config(args)
    corpus = corpus_to_characters(load_corpus(args.corpus))
    _note(args.command, f"{corpus.total_tokens()} characters")
    space = train_embeddings(corpus, config, name="character")
    _note(args.command, f"trained {len(space)} vectors of dimension {space.dim}")
    save_space(space, args.out)
    _note(args.command, f"wrote {args.out}")
    return 0


def _cmd_build_sememe_space(args):
    config = _train_config(args)
    corpus = load_corpus(args.corpus)
    lexicon = parse_lexicon(args.lexicon)
    _note(args.command, f"{len(lexicon)} lexicon words, max rank {args.max_rank}")
    space = build_sememe_space(corpus, lexicon, config, max_rank=args.max_rank)
    _note(args.command, f"trained {len(space)} vectors of dimension {space.dim}")
    save_space(space, args.out)
    _note(args.command, f"wrote {args.out}")
    return 0


def _cmd_hownet_vector(args):
    lexicon = parse_lexicon(args.lexicon)
    space = load_space(args.sememe_space, name="sememe")
    vec = hownet_vector(args.word, lexicon, space)
    if vec is None:
        raise ValueError(f"no sememe vector obtainable for {args.word!r}")
    print(" ".join(f"{x:.9g}" for x in vec))
    return 0


def _cmd_train_simmodel(args):
    thesaurus = load_thesaurus(args.thesaurus)
    pairs = build_pairs(thesaurus, args.positive, args.negative, seed=args.seed)
    _note(args.command, f"{len(pairs)} training pairs")
    model = train_perceptron(pairs, args.epochs, lr=args.learning_rate)
    save_similarity_model(model, args.out)
    _note(args.command, f"wrote {args.out}")
    return 0


def _cmd_revise(args):
    space = load_space(args.space, name="original")
    model = load_similarity_model(args.model)
    corpus = load_corpus(args.corpus)
    vocab = build_vocabulary(corpus)
    targets = set(space.tokens) | set(vocab)
    if args.targets:
        for _, line in iter_utf8_lines(args.targets):
            word = line.strip()
            if word:
                targets.add(word)
    config = CombinedSpaceConfig(rare_tf_threshold=args.threshold, k=args.k)
    _note(args.command, f"revising over {len(targets)} target words")
    combined = build_combined_space(targets, space, model, vocab, config)
    save_space(combined, args.out)
    _note(args.command, f"wrote {args.out} ({len(combined)} vectors)")
    return 0


def _load_tagger_sources(args):
    word_space = load_space(args.word_space, name="word")
    char_space = load_space(args.char_space, name="character") if args.char_space else None
    if (args.lexicon is None) != (args.sememe_space is None):
        raise ValueError("--lexicon and --sememe-space must be given together")
    hownet_fn = None
    if args.lexicon:
        hownet_fn = make_hownet_fn(
            parse_lexicon(args.lexicon), load_space(args.sememe_space, name="sememe")
        )
    return word_space, hownet_fn, char_space


def _cmd_train_tagger(args):
    word_space, hownet_fn, char_space = _load_tagger_sources(args)
    tagged = load_tagged_corpus(args.tagged)
    scheme = LabelScheme.from_labels(s.labels for s in tagged)
    spec = FeatureSpec(
        dim=word_space.dim,
        window_radius=args.window_radius,
        use_context=True,
        use_hownet=hownet_fn is not None,
        use_char=char_space is not None,
    )
    features = []
    labels = []
    for sent in tagged:
        for i in range(len(sent.tokens)):
            features.append(
                assemble_features(sent.tokens, i, word_space, hownet_fn, char_space, spec)
            )
            labels.append(scheme.index(sent.labels[i]))
    _note(args.command, f"{len(features)} examples, {len(scheme)} labels")
    model = train_logreg(
        features, labels, lam=args.lam, tol=args.tol, max_iter=args.max_iter,
        scheme=scheme, spec=spec,
    )
    _note(args.command, f"{len(model.history)} loss evaluations, final {model.history[-1]:.6g}")
    save_tagger(model, args.out)
    _note(args.command, f"wrote {args.out}")
    return 0


def _cmd_tag(args):
    model = load_tagger(args.model)
    word_space, hownet_fn, char_space = _load_tagger_sources(args)
    corpus = load_corpus(args.corpus)
    tagged = []
    for sent in corpus:
        labels = tag_sentence(model, sent, word_space, hownet_fn, char_space)
        tagged.append(TaggedSentence(sent, labels))
    if args.out:
        save_tagged_corpus(tagged, args.out)
        _note(args.command, f"wrote {args.out}")
    else:
        for sent in tagged:
            print(" ".join(f"{t}/{l}" for t, l in zip(sent.tokens, sent.labels)))
    return 0


def _cmd_eval_sim(args):
    if (args.lexicon is None) != (args.sememe_space is None):
        raise ValueError("--lexicon and --sememe-space must be given together")
    if args.lexicon and args.space:
        raise ValueError("give either --space or --lexicon/--sememe-space, not both")
    if args.lexicon:
        source = make_hownet_fn(
            parse_lexicon(args.lexicon), load_space(args.sememe_space, name="sememe")
        )
    elif args.space:
        source = load_space(args.space)
    else:
        raise ValueError("need --space or --lexicon/--sememe-space")
    judgements = load_judgements(args.judgements)
    rho, coverage = eval_similarity(source, judgements)
    print(f"spearman {100.0 * rho:.1f}")
    print(f"coverage {100.0 * coverage:.1f}")
    return 0


def _cmd_eval_ner(args):
    gold = load_tagged_corpus(args.gold)
    pred = load_tagged_corpus(args.pred)
    if len(gold) != len(pred):
        raise ValueError(
            f"gold has {len(gold)} sentences but prediction has {len(pred)}"
        )
    for k, (g, p) in enumerate(zip(gold, pred)):
        if len(g.tokens) != len(p.tokens):
            raise ValueError(f"sentence {k + 1}: token counts differ")
    gold_spans = spans_of_corpus([s.labels for s in gold])
    pred_spans = spans_of_corpus([s.labels for s in pred])
    print("overall " + format_prf(*span_prf(gold_spans, pred_spans)))
    for t, (p, r, f) in per_type_prf(gold_spans, pred_spans).items():
        print(f"{t} " + format_prf(p, r, f))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sememevec",
        description="Sememe-enhanced word vectors, rare-word revision and BI tagging.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("train-embeddings", help="train word vectors on a corpus")
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--out", required=True)
    _add_train_flags(sub)
    sub.set_defaults(func=_cmd_train_embeddings)

    sub = subs.add_parser(
        "train-char-embeddings", help="train character vectors on a corpus"
    )
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--out", required=True)
    _add_train_flags(sub)
    sub.set_defaults(func=_cmd_train_char_embeddings)

    sub = subs.add_parser(
        "build-sememe-space", help="train sememe vectors via replacement corpora"
    )
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--lexicon", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--max-rank", type=int, default=3, dest="max_rank")
    _add_train_flags(sub)
    sub.set_defaults(func=_cmd_build_sememe_space)

    sub = subs.add_parser(
        "hownet-vector", help="print the sememe-sum vector of one word"
    )
    sub.add_argument("--word", required=True)
    sub.add_argument("--lexicon", required=True)
    sub.add_argument("--sememe-space", required=True, dest="sememe_space")
    sub.set_defaults(func=_cmd_hownet_vector)

    sub = subs.add_parser(
        "train-simmodel", help="train the morphological similarity perceptron"
    )
    sub.add_argument("--thesaurus", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--positive", type=int, default=500)
    sub.add_argument("--negative", type=int, default=500)
    sub.add_argument("--epochs", type=int, default=20)
    sub.add_argument("--learning-rate", type=float, default=1.0, dest="learning_rate")
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=_cmd_train_simmodel)

    sub = subs.add_parser(
        "revise", help="build the combined space with rare words revised"
    )
    sub.add_argument("--space", required=True)
    sub.add_argument("--model", required=True)
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--targets", help="extra target words, one per line")
    sub.add_argument("--threshold", type=int, default=2)
    sub.add_argument("--k", type=int, default=5)
    sub.set_defaults(func=_cmd_revise)

    sub = subs.add_parser("train-tagger", help="train the BI sequence tagger")
    sub.add_argument("--tagged", required=True)
    sub.add_argument("--word-space", required=True, dest="word_space")
    sub.add_argument("--out", required=True)
    sub.add_argument("--char-space", dest="char_space")
    sub.add_argument("--lexicon")
    sub.add_argument("--sememe-space", dest="sememe_space")
    sub.add_argument("--window-radius", type=int, default=2, dest="window_radius")
    sub.add_argument("--lam", type=float, default=1.0)
    sub.add_argument("--tol", type=float, default=1e-6)
    sub.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    sub.set_defaults(func=_cmd_train_tagger)

    sub = subs.add_parser("tag", help="tag a corpus with a trained model")
    sub.add_argument("--model", required=True)
    sub.add_argument("--word-space", required=True, dest="word_space")
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--char-space", dest="char_space")
    sub.add_argument("--lexicon")
    sub.add_argument("--sememe-space", dest="sememe_space")
    sub.add_argument("--out")
    sub.set_defaults(func=_cmd_tag)

    sub = subs.add_parser(
        "eval-sim", help="Spearman against human similarity judgements"
    )
    sub.add_argument("--judgements", required=True)
    sub.add_argument("--space")
    sub.add_argument("--lexicon")
    sub.add_argument("--sememe-space", dest="sememe_space")
    sub.set_defaults(func=_cmd_eval_sim)

    sub = subs.add_parser("eval-ner", help="span precision/recall/F1")
    sub.add_argument("--gold", required=True)
    sub.add_argument("--pred", required=True)
    sub.set_defaults(func=_cmd_eval_ner)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except (ValueError, OSError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

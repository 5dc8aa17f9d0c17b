"""Top-level acceptance checks, one test per criterion.

c11/c12 drive the whole pipeline on a synthetic corpus where every token
ending in the date character is a single-token Date entity and a fifth of
the entity occurrences in the held-out part use token types absent from
embedding training but morphologically similar to seen ones.
"""

import filecmp
import os

import numpy as np
import pytest

from conftest import (
    all_strings,
    char_cos_oracle,
    edit_distance_oracle,
    lcs_len_oracle,
    spearman_oracle,
)
from sememevec.corpus import Corpus, TaggedSentence, build_vocabulary
from sememevec.embedding import (
    TrainConfig,
    corpus_to_characters,
    cosine,
    negative_sampling_grads,
    negative_sampling_loss,
    save_space,
    train_embeddings,
)
from sememevec.evaluate import span_prf, spans_of_corpus, spearman
from sememevec.morphsim import (
    TrainingPair,
    build_pairs,
    char_cos_sim,
    edit_sim,
    lcs_sim,
    load_thesaurus,
    morph_features,
    save_similarity_model,
    train_perceptron,
)
from sememevec.revise import build_combined_space, combine, tf_bucket
from sememevec.sememe import (
    SememeEntry,
    SememeLexicon,
    build_sememe_space,
    hownet_vector,
    make_hownet_fn,
)
from sememevec.tagger import (
    FeatureSpec,
    LabelScheme,
    assemble_features,
    save_tagger,
    softmax_loss,
    softmax_loss_and_grads,
    tag_sentence,
    train_logreg,
)


def test_c01_tf_bucket_table_and_oracle():
    table = {150: 4, 100: 3, 21: 3, 20: 2, 6: 2, 5: 1, 3: 1, 2: 0, 0: 0}
    for tf, want in table.items():
        assert tf_bucket(tf) == want

    def oracle(tf):
        if tf > 100:
            return 4
        if 20 < tf <= 100:
            return 3
        if 5 < tf <= 20:
            return 2
        if 2 < tf <= 5:
            return 1
        return 0

    for tf in range(0, 1001):
        assert tf_bucket(tf) == oracle(tf)


@pytest.fixture(scope="module")
def toy_sememe_setup():
    """Tiny corpus and lexicon trained just enough for vector checks."""
    lex = SememeLexicon()
    lex.add(SememeEntry("房租", "N", ["费用", "借入", "房屋"]))
    lex.add(SememeEntry("薪水", "N", ["费用", "报酬"]))
    lex.add(SememeEntry("工资", "N", ["费用", "报酬"]))
    lex.add(SememeEntry("次序", "N", ["顺序", "属性"]))
    lex.add(SememeEntry("秩序", "N", ["顺序", "属性"]))
    lex.add(SememeEntry("费用", "N", ["金钱"]))
    base = [
        ["他", "付", "房租", "了"],
        ["公司", "发", "薪水", "了"],
        ["工资", "是", "收入"],
        ["次序", "要", "清楚"],
        ["秩序", "要", "维持"],
        ["费用", "不", "低"],
    ]
    corpus = Corpus(base * 8)
    cfg = TrainConfig(dim=12, window=2, negative=3, epochs=3, seed=13)
    space = build_sememe_space(corpus, lex, cfg)
    return lex, space


def test_c02_identical_sememe_lists_cosine_one(toy_sememe_setup):
    lex, space = toy_sememe_setup
    for a, b in (("薪水", "工资"), ("次序", "秩序")):
        va = hownet_vector(a, lex, space)
        vb = hownet_vector(b, lex, space)
        assert va is not None and vb is not None
        assert abs(cosine(va, vb) - 1.0) <= 1e-12


def test_c03_sememe_sum_construction(toy_sememe_setup):
    lex, space = toy_sememe_setup
    got = hownet_vector("房租", lex, space)
    want = space.get("费用") + space.get("借入") + space.get("房屋")
    assert np.allclose(got, want, atol=1e-12)


def test_c04_gradient_checks():
    rng = np.random.default_rng(61)
    h = 1e-6

    # negative-sampling loss wrt center and output rows
    for _ in range(10):
        k = int(rng.integers(2, 7))
        d = int(rng.integers(3, 9))
        center = rng.normal(0, 1, d)
        outputs = rng.normal(0, 1, (k, d))
        labels = np.zeros(k)
        labels[0] = 1.0
        g_center, g_out = negative_sampling_grads(center, outputs, labels)
        for j in range(d):
            cp = center.copy(); cp[j] += h
            cm = center.copy(); cm[j] -= h
            num = (negative_sampling_loss(cp, outputs, labels)
                   - negative_sampling_loss(cm, outputs, labels)) / (2 * h)
            assert abs(num - g_center[j]) <= 1e-4 * max(1.0, abs(num))
        r = int(rng.integers(k))
        for j in range(d):
            op = outputs.copy(); op[r, j] += h
            om = outputs.copy(); om[r, j] -= h
            num = (negative_sampling_loss(center, op, labels)
                   - negative_sampling_loss(center, om, labels)) / (2 * h)
            assert abs(num - g_out[r, j]) <= 1e-4 * max(1.0, abs(num))

    # multiclass L2 logistic loss wrt weights and biases
    X = rng.normal(0, 1, (20, 5))
    y = rng.integers(0, 3, 20)
    y[:3] = [0, 1, 2]
    for _ in range(10):
        W = rng.normal(0, 0.6, (3, 5))
        b = rng.normal(0, 0.6, 3)
        _, gw, gb = softmax_loss_and_grads(W, b, X, y, 0.2)
        for i in range(3):
            for j in range(5):
                Wp = W.copy(); Wp[i, j] += h
                Wm = W.copy(); Wm[i, j] -= h
                num = (softmax_loss(Wp, b, X, y, 0.2)
                       - softmax_loss(Wm, b, X, y, 0.2)) / (2 * h)
                assert abs(num - gw[i, j]) <= 1e-5 * max(1.0, abs(num))
            bp = b.copy(); bp[i] += h
            bm = b.copy(); bm[i] -= h
            num = (softmax_loss(W, bp, X, y, 0.2)
                   - softmax_loss(W, bm, X, y, 0.2)) / (2 * h)
            assert abs(num - gb[i]) <= 1e-5 * max(1.0, abs(num))


def test_c05_two_cluster_embedding_sanity():
    a_words = [f"侧{i}" for i in range(15)]
    b_words = [f"另{i}" for i in range(15)]
    for seed in (1, 2, 3):
        rng = np.random.default_rng(1000 + seed)
        sents = []
        for _ in range(2000):
            pool = a_words if rng.random() < 0.5 else b_words
            sents.append([pool[int(rng.integers(15))] for _ in range(8)])
        cfg = TrainConfig(dim=25, window=3, negative=5, epochs=5, seed=seed)
        space = train_embeddings(Corpus(sents), cfg)
        within, cross = [], []
        for i, u in enumerate(a_words):
            for v in a_words[i + 1:]:
                within.append(cosine(space.get(u), space.get(v)))
        for i, u in enumerate(b_words):
            for v in b_words[i + 1:]:
                within.append(cosine(space.get(u), space.get(v)))
        for u in a_words:
            for v in b_words:
                cross.append(cosine(space.get(u), space.get(v)))
        assert np.mean(within) > np.mean(cross)


def test_c06_string_measure_oracles_exhaustive():
    strings = all_strings("xyz", 4)
    assert len(strings) == 120
    for a in strings:
        for b in strings:
            m = max(len(a), len(b))
            assert lcs_sim(a, b) == lcs_len_oracle(a, b) / m
            assert edit_sim(a, b) == 1.0 - edit_distance_oracle(a, b) / m
            assert char_cos_sim(a, b) == char_cos_oracle(a, b)


def test_c07_perceptron_separable_fixture():
    shared = "日月山水"
    pos, neg = [], []
    for i in range(20):
        ch = shared[i % 4]
        pos.append(TrainingPair(chr(0x4E00 + i) + ch, chr(0x4F00 + i) + ch, 1))
    for i in range(20):
        neg.append(TrainingPair(chr(0x5000 + i) + chr(0x5100 + i),
                                chr(0x5200 + i) + chr(0x5300 + i), 0))
    pairs = pos + neg
    assert len(pairs) == 40
    model = train_perceptron(pairs, 50)
    w = model.weights()
    correct = 0
    for p in pairs:
        margin = float(w @ morph_features(p.word_a, p.word_b)) + model.bias
        correct += int(margin > 0) == p.label
    assert correct == 40


def test_c08_combine_endpoints_and_midpoint():
    rng = np.random.default_rng(67)
    o = rng.normal(0, 1, 3)
    s = rng.normal(0, 1, 3)
    assert np.array_equal(combine(o, s, 150), o)
    assert np.array_equal(combine(o, s, 0), s)
    assert np.allclose(combine(o, s, 10), 0.5 * o + 0.5 * s, atol=1e-12)


def test_c09_spearman_against_rank_oracle():
    rng = np.random.default_rng(71)
    checked = 0
    while checked < 100:
        n = int(rng.integers(2, 21))
        xs = list(rng.integers(0, 8, n).astype(float))
        ys = list(rng.integers(0, 8, n).astype(float))
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        assert abs(spearman(xs, ys) - spearman_oracle(xs, ys)) <= 1e-9
        checked += 1


def test_c10_span_scorer_hand_cases():
    from sememevec.evaluate import Span, format_prf

    gold = {Span(0, i, i, "Date") for i in range(4)}
    pred = {Span(0, 0, 0, "Date"), Span(0, 1, 1, "Date"), Span(0, 2, 2, "Date"),
            Span(1, 0, 0, "Date"), Span(1, 2, 2, "Date")}
    p, r, f = span_prf(gold, pred)
    assert format_prf(p, r, f) == "60.0 75.0 66.7"
    assert format_prf(*span_prf(gold, gold)) == "100.0 100.0 100.0"


# ---------------------------------------------------------------------------
# synthetic end-to-end pipeline for c11/c12

DATE_CHAR = "日"
MARKER = "于"
SUFFIXES = "山水木火土金"
PIPELINE_SEED = 101
SEEN_ENTITIES = [chr(0x4E00 + i) + DATE_CHAR for i in range(16)]
UNSEEN_ENTITIES = [chr(0x4E00 + 16 + i) + DATE_CHAR for i in range(4)]
OTHER_WORDS = [chr(0x7500 + j) + SUFFIXES[j % 6] for j in range(24)]
FILLER_WORDS = [chr(0x8000 + m) + chr(0x8100 + m) for m in range(12)]


def _draw_sentence(rng, entity_counter, use_unseen):
    """Every 5th entity occurrence in the held-out part is an unseen type.

    Half the entities are preceded by a marker word so the plain
    distributional baseline has a real but incomplete signal to learn.
    """
    toks, labs = [], []
    for _ in range(int(rng.integers(5, 9))):
        u = rng.random()
        if u < 0.25:
            if rng.random() < 0.5:
                toks.append(MARKER)
                labs.append("O")
            if use_unseen and entity_counter[0] % 5 == 0:
                toks.append(UNSEEN_ENTITIES[int(rng.integers(4))])
            else:
                toks.append(SEEN_ENTITIES[int(rng.integers(16))])
            entity_counter[0] += 1
            labs.append("B-Date")
        elif u < 0.625:
            toks.append(OTHER_WORDS[int(rng.integers(24))])
            labs.append("O")
        else:
            toks.append(FILLER_WORDS[int(rng.integers(12))])
            labs.append("O")
    return TaggedSentence(toks, labs)


def _synthetic_split(seed):
    rng = np.random.default_rng(seed)
    counter = [0]
    train = [_draw_sentence(rng, counter, False) for _ in range(400)]
    counter[0] = 0
    test = [_draw_sentence(rng, counter, True) for _ in range(100)]
    return train, test


def _pipeline_lexicon():
    lex = SememeLexicon()
    for tok in SEEN_ENTITIES + UNSEEN_ENTITIES:
        lex.add(SememeEntry(tok, "N", ["时间", "日子"]))
    for w in OTHER_WORDS:
        lex.add(SememeEntry(w, "N", [w[-1] + "类"]))
    return lex


def _train_and_score(train_tagged, test_tagged, word_space, hownet_fn, char_space,
                     spec, scheme):
    X, y = [], []
    for sent in train_tagged:
        for i in range(len(sent.tokens)):
            X.append(assemble_features(sent.tokens, i, word_space, hownet_fn,
                                       char_space, spec))
            y.append(scheme.index(sent.labels[i]))
    model = train_logreg(X, y, lam=1e-4, tol=1e-6, max_iter=1200,
                         scheme=scheme, spec=spec)
    predicted = [tag_sentence(model, s.tokens, word_space, hownet_fn, char_space)
                 for s in test_tagged]
    gold = spans_of_corpus([s.labels for s in test_tagged])
    pred = spans_of_corpus(predicted)
    _, _, f = span_prf(gold, pred)
    return f, model


def run_pipeline(workdir, seed=PIPELINE_SEED):
    train_tagged, test_tagged = _synthetic_split(seed)
    train_corpus = Corpus([s.tokens for s in train_tagged])
    lex = _pipeline_lexicon()

    cfg = TrainConfig(dim=25, window=2, negative=5, epochs=5, seed=seed)
    word_space = train_embeddings(train_corpus, cfg)
    char_space = train_embeddings(corpus_to_characters(train_corpus), cfg,
                                  name="character")
    sememe_space = build_sememe_space(train_corpus, lex, cfg, max_rank=2)

    thesaurus = {"T00": SEEN_ENTITIES}
    for idx, s in enumerate(SUFFIXES):
        thesaurus[f"S{idx:02d}"] = [w for w in OTHER_WORDS if w[-1] == s]
    from sememevec.morphsim import SynonymThesaurus
    pairs = build_pairs(SynonymThesaurus(thesaurus), 40, 40, seed=seed + 1)
    sim_model = train_perceptron(pairs, 50)

    vocab = build_vocabulary(train_corpus)
    targets = {t for s in train_tagged + test_tagged for t in s.tokens}
    combined = build_combined_space(targets, word_space, sim_model, vocab)

    hownet_fn = make_hownet_fn(lex, sememe_space)
    scheme = LabelScheme.from_labels([s.labels for s in train_tagged])

    spec_w2v = FeatureSpec(dim=25, window_radius=2, use_context=True,
                           use_hownet=False, use_char=False)
    spec_char = FeatureSpec(dim=25, window_radius=2, use_context=True,
                            use_hownet=False, use_char=True)
    spec_final = FeatureSpec(dim=25, window_radius=2, use_context=True,
                             use_hownet=True, use_char=True)

    f_w2v, m_w2v = _train_and_score(train_tagged, test_tagged, word_space,
                                    None, None, spec_w2v, scheme)
    f_char, m_char = _train_and_score(train_tagged, test_tagged, word_space,
                                      None, char_space, spec_char, scheme)
    f_final, m_final = _train_and_score(train_tagged, test_tagged, combined,
                                        hownet_fn, char_space, spec_final, scheme)

    save_space(word_space, os.path.join(workdir, "words.vec"))
    save_space(char_space, os.path.join(workdir, "chars.vec"))
    save_space(sememe_space, os.path.join(workdir, "sememe.vec"))
    save_space(combined, os.path.join(workdir, "combined.vec"))
    save_similarity_model(sim_model, os.path.join(workdir, "sim.model"))
    save_tagger(m_w2v, os.path.join(workdir, "tagger_w2v.model"))
    save_tagger(m_char, os.path.join(workdir, "tagger_char.model"))
    save_tagger(m_final, os.path.join(workdir, "tagger_final.model"))
    metrics = {"f_w2v": f_w2v, "f_char": f_char, "f_final": f_final}
    with open(os.path.join(workdir, "metrics.txt"), "w", encoding="utf-8") as fh:
        for k in sorted(metrics):
            fh.write(f"{k} {metrics[k]:.17g}\n")
    return metrics


@pytest.fixture(scope="session")
def pipeline_first_run(tmp_path_factory):
    d = tmp_path_factory.mktemp("pipeline-a")
    return str(d), run_pipeline(str(d))


def test_c11_end_to_end_tagging_and_ablation_order(pipeline_first_run):
    _, metrics = pipeline_first_run
    assert 100.0 * metrics["f_final"] >= 95.0
    assert metrics["f_final"] >= metrics["f_char"] >= metrics["f_w2v"]


def test_c12_pipeline_rerun_byte_identical(pipeline_first_run, tmp_path_factory):
    dir_a, metrics_a = pipeline_first_run
    dir_b = str(tmp_path_factory.mktemp("pipeline-b"))
    metrics_b = run_pipeline(dir_b)
    assert metrics_a == metrics_b
    for name in ("words.vec", "chars.vec", "sememe.vec", "combined.vec",
                 "sim.model", "tagger_w2v.model", "tagger_char.model",
                 "tagger_final.model", "metrics.txt"):
        assert filecmp.cmp(os.path.join(dir_a, name), os.path.join(dir_b, name),
                           shallow=False), f"{name} differs between runs"

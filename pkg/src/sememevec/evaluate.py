"""Rank-correlation scoring for word similarity and span P/R/F for tagging."""

import random
from dataclasses import dataclass

import numpy as np

from .corpus import ParseError, iter_utf8_lines
from .embedding import EmbeddingSpace, cosine


class EvaluationError(ValueError):
    pass


def average_ranks(values):
    """1-based ranks; equal values share the mean of their rank range."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman(xs, ys):
    """Pearson correlation of average ranks, clamped to [-1, 1]."""
    if len(xs) != len(ys):
        raise EvaluationError("sequences differ in length")
    if len(xs) < 2:
        raise EvaluationError("need at least two pairs")
    rx = np.array(average_ranks(xs))
    ry = np.array(average_ranks(ys))
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    if vx == 0.0 or vy == 0.0:
        raise EvaluationError("one side is constant after ranking")
    rho = float(dx @ dy) / (vx * vy) ** 0.5
    return max(-1.0, min(1.0, rho))


def load_judgements(path):
    """Tab-separated rows of word, word, numeric human score."""
    pairs = []
    for lineno, line in iter_utf8_lines(path):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(
                f"{path}: line {lineno}: expected 3 tab-separated fields, "
                f"got {len(parts)}"
            )
        a, b, raw = (p.strip() for p in parts)
        if not a or not b:
            raise ParseError(f"{path}: line {lineno}: empty word")
        try:
            score = float(raw)
        except ValueError:
            raise ParseError(
                f"{path}: line {lineno}: score {raw!r} is not a number"
            ) from None
        pairs.append((a, b, score))
    return pairs


def eval_similarity(source, judgements):
    """Spearman against human scores plus the fraction of pairs scored.

    source is either an embedding space or a callable mapping a word to a
    vector or None; each pair is scored by the cosine of the two vectors.
    Pairs where either word has no vector are dropped from the correlation
    but still count in coverage's denominator.
    """
    if not judgements:
        raise EvaluationError("no judgement pairs")
    vector_of = source.get if isinstance(source, EmbeddingSpace) else source
    model_scores = []
    human_scores = []
    for a, b, human in judgements:
        u = vector_of(a)
        v = vector_of(b)
        if u is None or v is None:
            continue
        model_scores.append(cosine(u, v))
        human_scores.append(human)
    if len(model_scores) < 2:
        raise EvaluationError(
            f"only {len(model_scores)} of {len(judgements)} pairs could be scored"
        )
    rho = spearman(model_scores, human_scores)
    return rho, len(model_scores) / len(judgements)


@dataclass(frozen=True)
class Span:
    """Inclusive token range start..end of one entity in one sentence."""

    sentence: int
    start: int
    end: int
    entity_type: str

    def __post_init__(self):
        if self.start > self.end or self.start < 0:
            raise ValueError(f"bad span bounds {self.start}..{self.end}")


def decode_spans(labels, scheme=None, sentence=0):
    """Entity spans of one label sequence; a bare I-label opens a span."""
    spans = []
    open_start = None
    open_type = None

    def close(at):
        # at is the first position past the span
        nonlocal open_start, open_type
        if open_type is not None:
            spans.append(Span(sentence, open_start, at - 1, open_type))
            open_start = None
            open_type = None

    for i, lab in enumerate(labels):
        if scheme is not None and lab not in scheme:
            raise EvaluationError(f"label {lab!r} not in scheme")
        if lab == "O":
            close(i)
        elif lab.startswith("B-") and len(lab) > 2:
            close(i)
            open_start, open_type = i, lab[2:]
        elif lab.startswith("I-") and len(lab) > 2:
            if lab[2:] != open_type:
                close(i)
                open_start, open_type = i, lab[2:]
        else:
            raise EvaluationError(f"unrecognised label {lab!r}")
    close(len(labels))
    return spans


def spans_of_corpus(label_sequences, scheme=None):
    spans = set()
    for k, labels in enumerate(label_sequences):
        spans.update(decode_spans(labels, scheme=scheme, sentence=k))
    return spans


def span_prf(gold, pred):
    """Exact-match precision, recall and F1 as fractions in [0, 1]."""
    gold = set(gold)
    pred = set(pred)
    tp = len(gold & pred)
    p = tp / len(pred) if pred else 0.0
    r = tp / len(gold) if gold else 0.0
    f = 2.0 * p * r / (p + r) if p + r > 0.0 else 0.0
    return p, r, f


def format_prf(p, r, f):
    """Percentages with one decimal, space separated."""
    return f"{100.0 * p:.1f} {100.0 * r:.1f} {100.0 * f:.1f}"


def per_type_prf(gold, pred):
    """span_prf restricted to each entity type present in gold or pred."""
    types = sorted({s.entity_type for s in gold} | {s.entity_type for s in pred})
    out = {}
    for t in types:
        g = {s for s in gold if s.entity_type == t}
        p = {s for s in pred if s.entity_type == t}
        out[t] = span_prf(g, p)
    return out


def five_fold_split(items, seed=0):
    """Shuffled contiguous 5-fold partition; fold sizes differ by at most one."""
    items = list(items)
    if len(items) < 5:
        raise EvaluationError("need at least five items for five folds")
    rnd = random.Random(seed)
    rnd.shuffle(items)
    n = len(items)
    base, extra = divmod(n, 5)
    folds = []
    at = 0
    for k in range(5):
        size = base + (1 if k < extra else 0)
        folds.append(items[at:at + size])
        at += size
    splits = []
    for k in range(5):
        test = folds[k]
        train = [it for j, fold in enumerate(folds) if j != k for it in fold]
        splits.append((train, test))
    return splits

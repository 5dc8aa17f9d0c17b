"""Morphological similarity between words and its perceptron-tuned combination.

Three character-level measures (longest common substring, edit distance,
character-count cosine) score word pairs in [0, 1]. A classic perceptron,
trained on synonym/non-synonym pairs drawn from a thesaurus, learns how to
weigh them; the squashed weighted sum then serves as the similarity used to
retrieve in-vocabulary neighbours for rare and unseen words.
"""

import math
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import iter_utf8_lines, ParseError


class SamplingError(ValueError):
    """Requested training pairs cannot be drawn from the thesaurus."""


def _check_nonempty(a, b):
    if not a or not b:
        raise ValueError("similarity measures require non-empty strings")


def lcs_sim(a, b):
    """Length of the longest common contiguous substring over max(|a|, |b|)."""
    _check_nonempty(a, b)
    best = 0
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0] * (len(b) + 1)
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best:
                    best = cur[j]
        prev = cur
    return best / max(len(a), len(b))


def edit_sim(a, b):
    """1 - Levenshtein(a, b) / max(|a|, |b|) with unit edit costs."""
    _check_nonempty(a, b)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (ca != cb),
            )
        prev = cur
    return 1.0 - prev[len(b)] / max(len(a), len(b))


def char_cos_sim(a, b):
    """Cosine between character-count vectors over the union alphabet."""
    _check_nonempty(a, b)
    ca, cb = Counter(a), Counter(b)
    if ca == cb:
        return 1.0
    dot = sum(n * cb[ch] for ch, n in ca.items())
    if dot == 0:
        return 0.0
    # single square root keeps integer-exact cases exact
    na2 = sum(n * n for n in ca.values())
    nb2 = sum(n * n for n in cb.values())
    return min(1.0, dot / math.sqrt(na2 * nb2))


def morph_features(a, b):
    """The three measure values as a feature vector."""
    return np.array([lcs_sim(a, b), edit_sim(a, b), char_cos_sim(a, b)])


class SynonymThesaurus:
    """Category-id to word-set association; words may sit in many categories."""

    def __init__(self, categories):
        self._categories = {}
        self._word_cats = {}
        for cat, words in categories.items():
            words = set(words)
            if not words:
                raise ValueError(f"category {cat!r} is empty")
            self._categories[cat] = words
            for w in words:
                self._word_cats.setdefault(w, set()).add(cat)
        self._sorted_ids = sorted(self._categories)
        self._sorted_members = {
            cat: sorted(words) for cat, words in self._categories.items()
        }

    @property
    def category_ids(self):
        return self._sorted_ids

    def members(self, cat):
        return self._sorted_members[cat]

    def are_synonyms(self, a, b):
        """True when the two words share at least one category."""
        return bool(self._word_cats.get(a, set()) & self._word_cats.get(b, set()))

    def __len__(self):
        return len(self._categories)


def load_thesaurus(path):
    """One category per line: category_id TAB word1 word2 ..."""
    categories = {}
    for lineno, line in iter_utf8_lines(path):
        if not line.strip():
            continue
        parts = line.split("\t", 1)
        if len(parts) < 2 or not parts[0].strip():
            raise ParseError(
                f"{path}: line {lineno}: expected category_id TAB words"
            )
        words = parts[1].split()
        if not words:
            raise ParseError(f"{path}: line {lineno}: category has no words")
        categories.setdefault(parts[0].strip(), set()).update(words)
    return SynonymThesaurus(categories)


@dataclass
class TrainingPair:
    """A labelled word pair: 1 for same category, 0 for different categories."""

    word_a: str
    word_b: str
    label: int

    def __post_init__(self):
        if self.word_a == self.word_b:
            raise ValueError("pair words must differ")
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


def build_pairs(thesaurus, n_pos, n_neg, seed=0):
    """Sample labelled pairs: positives within a category, negatives across.

    Negative draws reject words that co-occur in any category. Deterministic
    for a fixed seed. Raises SamplingError naming the side that cannot be
    satisfied.
    """
    rnd = random.Random(seed)
    cats = thesaurus.category_ids
    eligible = [c for c in cats if len(thesaurus.members(c)) >= 2]
    pairs = []
    if n_pos > 0 and not eligible:
        raise SamplingError("positive pairs: no category holds two distinct words")
    for _ in range(n_pos):
        cat = rnd.choice(eligible)
        a, b = rnd.sample(thesaurus.members(cat), 2)
        pairs.append(TrainingPair(a, b, 1))
    if n_neg > 0:
        if len(cats) < 2:
            raise SamplingError("negative pairs: need at least two categories")
        produced = 0
        misses = 0
        while produced < n_neg:
            ca, cb = rnd.sample(cats, 2)
            a = rnd.choice(thesaurus.members(ca))
            b = rnd.choice(thesaurus.members(cb))
            if a != b and not thesaurus.are_synonyms(a, b):
                pairs.append(TrainingPair(a, b, 0))
                produced += 1
                misses = 0
            else:
                misses += 1
                if misses > 10000:
                    raise SamplingError(
                        "negative pairs: could not find non-synonymous words "
                        "in different categories"
                    )
    return pairs


@dataclass
class SimilarityModel:
    """Learned weights over the three measures plus a bias."""

    w_lcs: float = 0.0
    w_edit: float = 0.0
    w_cos: float = 0.0
    bias: float = 0.0

    def weights(self):
        return np.array([self.w_lcs, self.w_edit, self.w_cos])


def train_perceptron(pairs, epochs, lr=1.0):
    """Classic perceptron over (lcs, edit, cos) features, zero-initialized.

    Prediction is 1 when w.x + b > 0; updates w += lr*(y - yhat)*x and
    b += lr*(y - yhat), in the given pair order for a fixed epoch count.
    """
    if not pairs:
        raise ValueError("no training pairs")
    if epochs < 0:
        raise ValueError("epochs cannot be negative")
    if lr <= 0:
        raise ValueError("learning rate must be positive")
    feats = [morph_features(p.word_a, p.word_b) for p in pairs]
    w = np.zeros(3)
    b = 0.0
    for _ in range(epochs):
        for x, pair in zip(feats, pairs):
            predicted = 1 if w @ x + b > 0 else 0
            err = pair.label - predicted
            if err:
                w = w + lr * err * x
                b = b + lr * err
    return SimilarityModel(float(w[0]), float(w[1]), float(w[2]), float(b))


def similarity_from_features(model, features):
    """Logistic squashing of the weighted feature sum, guaranteeing [0, 1]."""
    z = float(model.weights() @ np.asarray(features, dtype=np.float64) + model.bias)
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def word_similarity(model, a, b):
    """Model-weighted morphological similarity of two words, in [0, 1]."""
    return similarity_from_features(model, morph_features(a, b))


def top_k_similar(model, word, candidates, k=5):
    """The k highest-scoring candidate words, never the query word itself.

    Descending score, ties broken by lexicographic word order; fewer than k
    results only when candidates run out.
    """
    if not word:
        raise ValueError("query word must be non-empty")
    if k < 1:
        raise ValueError("k must be at least 1")
    scored = [
        (tok, word_similarity(model, word, tok))
        for tok in candidates
        if tok != word
    ]
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    return scored[:k]


def save_similarity_model(model, path):
    """Four labelled decimal values, one per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for label, value in (
            ("w_lcs", model.w_lcs),
            ("w_edit", model.w_edit),
            ("w_cos", model.w_cos),
            ("bias", model.bias),
        ):
            fh.write(f"{label} {value:.17g}\n")


def load_similarity_model(path):
    values = {}
    for lineno, line in iter_utf8_lines(path):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("w_lcs", "w_edit", "w_cos", "bias"):
            raise ParseError(f"{path}: line {lineno}: expected 'name value'")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            raise ParseError(f"{path}: line {lineno}: non-numeric value")
    missing = {"w_lcs", "w_edit", "w_cos", "bias"} - values.keys()
    if missing:
        raise ParseError(f"{path}: missing fields {sorted(missing)}")
    return SimilarityModel(
        values["w_lcs"], values["w_edit"], values["w_cos"], values["bias"]
    )

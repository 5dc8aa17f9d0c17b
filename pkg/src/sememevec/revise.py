"""Revision of rare and unseen word vectors from morphological neighbours.

Term frequency enters twice, both times through the five-bucket step
function: once to weight neighbour vectors in the imputed average, and once
to blend that average with the word's own distributional vector. A frequent
word keeps its vector untouched; an unseen word relies entirely on its
neighbours.
"""

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingSpace
from .morphsim import top_k_similar


@dataclass
class CombinedSpaceConfig:
    """Revision parameters: which words count as rare, how many neighbours."""

    rare_tf_threshold: int = 2
    k: int = 5

    def validate(self):
        if self.rare_tf_threshold < 0:
            raise ValueError("rare_tf_threshold cannot be negative")
        if self.k < 1:
            raise ValueError("k must be at least 1")


def tf_bucket(tf):
    """The five-bucket step weight over term frequency.

    4 for tf > 100, 3 for 20 < tf <= 100, 2 for 5 < tf <= 20,
    1 for 2 < tf <= 5, 0 for tf <= 2.
    """
    if tf < 0:
        raise ValueError("term frequency cannot be negative")
    if tf > 100:
        return 4
    if tf > 20:
        return 3
    if tf > 5:
        return 2
    if tf > 2:
        return 1
    return 0


def similar_word_vector(neighbors, space, vocab):
    """tf-bucket weighted average of neighbour vectors.

    Neighbours absent from the space are skipped; if every bucket weight is
    zero the plain mean is used. Returns None when no neighbour has a vector.
    Accumulation runs in sorted word order, so the result does not depend on
    neighbour list order.
    """
    present = [
        (word, vec)
        for word, vec in ((w, space.get(w)) for w, _ in neighbors)
        if vec is not None
    ]
    if not present:
        return None
    if len(present) == 1:
        return np.array(present[0][1])
    present.sort(key=lambda wv: wv[0])
    weights = [tf_bucket(vocab.tf(word)) for word, _ in present]
    total = sum(weights)
    if total == 0:
        weights = [1] * len(present)
        total = len(present)
    acc = np.zeros(space.dim)
    for (_, vec), weight in zip(present, weights):
        if weight:
            acc += weight * vec
    return acc / total


def combine(original, similar, tf):
    """Blend the stored and the neighbour-derived vector by term frequency.

    The stored vector's weight is tf_bucket(tf)/4, the neighbour vector gets
    the rest. A missing side yields the other side unchanged; both missing is
    a contract violation.
    """
    if original is None and similar is None:
        raise ValueError("both vectors absent")
    if similar is None:
        return np.array(original, dtype=np.float64)
    if original is None:
        return np.array(similar, dtype=np.float64)
    c1 = tf_bucket(tf) / 4.0
    if c1 == 1.0:
        return np.array(original, dtype=np.float64)
    if c1 == 0.0:
        return np.array(similar, dtype=np.float64)
    original = np.asarray(original, dtype=np.float64)
    similar = np.asarray(similar, dtype=np.float64)
    return c1 * original + (1.0 - c1) * similar


def build_combined_space(target_words, original, model, vocab, config=None):
    """Revise rare target words and pass frequent ones through.

    Words with tf above the rare threshold keep the original vector exactly;
    rare and unseen words get the neighbour-derived vector blended in. Words
    for which no vector can be produced are omitted.
    """
    if not target_words:
        raise ValueError("no target words")
    cfg = config if config is not None else CombinedSpaceConfig()
    cfg.validate()
    space = EmbeddingSpace(original.dim, name="combined")
    for word in sorted(set(target_words)):
        tf = vocab.tf(word)
        if tf > cfg.rare_tf_threshold:
            vec = original.get(word)
            if vec is not None:
                space.add(word, vec)
            continue
        neighbors = top_k_similar(model, word, vocab, cfg.k)
        similar = similar_word_vector(neighbors, original, vocab)
        stored = original.get(word)
        if stored is None and similar is None:
            continue
        space.add(word, combine(stored, similar, tf))
    return space

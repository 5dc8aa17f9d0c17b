"""Sememe lexicon parsing, replacement corpora and sememe-sum word vectors.

A lexicon line describes one word sense as an ordered list of sememes, the
first being the basic one. To give sememes distributional vectors, whole
corpus copies are generated in which words are replaced by their rank-r
sememe; training over the concatenation puts sememes and surviving words in
one shared space. A word's dictionary-derived vector is then the sum of its
sememe vectors.
"""

import re
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, ParseError, iter_utf8_lines
from .embedding import train_embeddings

# leading relation markers stripped from descriptors
_MARKERS = frozenset("*#$%@?!~")
# a latin gloss before the sememe identifier, e.g. "house 房屋"
_GLOSS = re.compile(r"[A-Za-z]+(?:[ \t]+[A-Za-z]+)*[ \t]+")


@dataclass
class SememeEntry:
    """One sense of a word: an ordered, non-empty sememe list."""

    word: str
    pos: str
    sememes: list

    def __post_init__(self):
        if not self.sememes:
            raise ValueError(f"entry for {self.word!r} has no sememes")
        if any(not s for s in self.sememes):
            raise ValueError(f"entry for {self.word!r} has an empty sememe")


class SememeLexicon:
    """Word to entry-list mapping; multi-sense words keep file order."""

    def __init__(self):
        self._entries = {}

    def add(self, entry):
        self._entries.setdefault(entry.word, []).append(entry)

    def entries_for(self, word):
        return self._entries.get(word, [])

    def first(self, word):
        """The first (file-order) entry of a word, or None."""
        entries = self._entries.get(word)
        return entries[0] if entries else None

    def words(self):
        return self._entries.keys()

    def __contains__(self, word):
        return word in self._entries

    def __len__(self):
        return len(self._entries)


def _clean_descriptor(raw):
    """Strip relation markers and a latin gloss, keeping the sememe identifier."""
    s = raw.strip()
    i = 0
    while i < len(s) and (s[i] in _MARKERS or s[i].isspace()):
        i += 1
    s = s[i:]
    m = _GLOSS.match(s)
    if m and m.end() < len(s):
        s = s[m.end():]
    return s


def parse_lexicon(path):
    """Parse a TSV lexicon: word TAB pos TAB comma-separated sememe descriptors."""
    lexicon = SememeLexicon()
    for lineno, line in iter_utf8_lines(path):
        if not line.strip():
            continue
        parts = line.split("\t", 2)
        if len(parts) < 3:
            raise ParseError(
                f"{path}: line {lineno}: expected word, POS and sememe list "
                f"separated by tabs"
            )
        word, pos = parts[0].strip(), parts[1].strip()
        if not word:
            raise ParseError(f"{path}: line {lineno}: empty word field")
        sememes = []
        for raw in parts[2].split(","):
            if not raw.strip():
                continue
            ident = _clean_descriptor(raw)
            if not ident:
                raise ParseError(
                    f"{path}: line {lineno}: descriptor {raw!r} has no "
                    f"sememe identifier"
                )
            sememes.append(ident)
        if not sememes:
            raise ParseError(f"{path}: line {lineno}: empty sememe list for {word!r}")
        lexicon.add(SememeEntry(word, pos, sememes))
    return lexicon


def generate_replacement_corpora(corpus, lexicon, max_rank=3):
    """The original corpus plus one full copy per sememe rank.

    In the rank-r copy every token whose first lexicon entry has at least r
    sememes is replaced by that entry's rank-r sememe; other tokens pass
    through. Output sentence count is (max_rank + 1) times the input's.
    """
    if max_rank < 1:
        raise ValueError("max_rank must be at least 1")
    sentences = [list(sent) for sent in corpus]
    for rank in range(1, max_rank + 1):
        for sent in corpus:
            replaced = []
            for tok in sent:
                entry = lexicon.first(tok)
                if entry is not None and len(entry.sememes) >= rank:
                    replaced.append(entry.sememes[rank - 1])
                else:
                    replaced.append(tok)
            sentences.append(replaced)
    return Corpus(sentences)


def build_sememe_space(corpus, lexicon, config, max_rank=3):
    """Train one space over the replacement corpora.

    Sememe tokens and surviving word tokens share the space, so cosines
    between them are meaningful.
    """
    expanded = generate_replacement_corpora(corpus, lexicon, max_rank)
    return train_embeddings(expanded, config, name="sememe")


def hownet_vector(word, lexicon, sememe_space):
    """Componentwise sum of the word's sememe vectors (first entry).

    Sememes without a vector are skipped. Returns None when the word is not
    in the lexicon or no sememe has a vector. Summation runs in sorted sememe
    order, so equal sememe multisets produce bitwise-equal vectors.
    """
    entry = lexicon.first(word)
    if entry is None:
        return None
    present = [
        (s, v) for s, v in ((s, sememe_space.get(s)) for s in entry.sememes)
        if v is not None
    ]
    if not present:
        return None
    present.sort(key=lambda sv: sv[0])
    total = np.zeros(sememe_space.dim)
    for _, vec in present:
        total += vec
    return total


def make_hownet_fn(lexicon, sememe_space):
    """A word -> vector-or-None callable closing over lexicon and space."""
    return lambda word: hownet_vector(word, lexicon, sememe_space)

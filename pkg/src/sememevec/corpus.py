"""Corpus ingestion: pre-segmented text, tagged text, vocabularies and term frequencies."""

import re
from collections import Counter
from dataclasses import dataclass


class ParseError(ValueError):
    """An input file does not follow its expected line format."""


_SEP = re.compile(r"[ \t]+")
_ITEM = re.compile(r"[^ \t]+")


def iter_utf8_lines(path):
    """Yield (line_number, text) pairs from a strictly UTF-8 file.

    Lines are read as bytes first so that a decoding failure can name the
    offending line. Trailing newline characters are stripped.
    """
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            try:
                yield lineno, raw.decode("utf-8").rstrip("\r\n")
            except UnicodeDecodeError as exc:
                raise ParseError(
                    f"{path}: line {lineno}: invalid UTF-8 ({exc.reason})"
                ) from exc


@dataclass
class Corpus:
    """Pre-segmented sentences; tokens are opaque non-empty unicode strings."""

    sentences: list

    def __post_init__(self):
        for sent in self.sentences:
            for tok in sent:
                if not tok:
                    raise ValueError("corpus contains an empty token")

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def total_tokens(self):
        return sum(len(s) for s in self.sentences)


def load_corpus(path):
    """Read one sentence per line, tokens separated by runs of spaces or tabs.

    Blank lines are skipped. Raises ParseError on invalid UTF-8.
    """
    sentences = []
    for _, line in iter_utf8_lines(path):
        tokens = [t for t in _SEP.split(line) if t]
        if tokens:
            sentences.append(tokens)
    return Corpus(sentences)


def save_corpus(corpus, path):
    """Write one sentence per line with single-space separators."""
    with open(path, "w", encoding="utf-8") as fh:
        for sent in corpus:
            fh.write(" ".join(sent) + "\n")


@dataclass
class TaggedSentence:
    """A token sequence with a parallel label sequence."""

    tokens: list
    labels: list

    def __post_init__(self):
        if len(self.tokens) != len(self.labels):
            raise ValueError(
                f"{len(self.tokens)} tokens but {len(self.labels)} labels"
            )


def load_tagged_corpus(path):
    """Parse "token/LABEL" items, one sentence per line.

    The label separator is the last "/" of an item, so tokens containing "/"
    survive. Items without a separator, with an empty token or with an empty
    label raise ParseError naming line and column.
    """
    sentences = []
    for lineno, line in iter_utf8_lines(path):
        tokens, labels = [], []
        for m in _ITEM.finditer(line):
            item = m.group()
            cut = item.rfind("/")
            if cut <= 0 or cut == len(item) - 1:
                raise ParseError(
                    f"{path}: line {lineno}, column {m.start() + 1}: "
                    f"expected token/LABEL, got {item!r}"
                )
            tokens.append(item[:cut])
            labels.append(item[cut + 1:])
        if tokens:
            sentences.append(TaggedSentence(tokens, labels))
    return sentences


def save_tagged_corpus(sentences, path):
    """Write tagged sentences in the "token/LABEL" format."""
    with open(path, "w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(" ".join(f"{t}/{l}" for t, l in zip(sent.tokens, sent.labels)))
            fh.write("\n")


class Vocabulary:
    """Dense 0-based token ids ordered by descending term frequency.

    Ties are broken by lexicographic token order, so two builds from the same
    corpus are identical.
    """

    def __init__(self, counts):
        items = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        for tok, count in items:
            if not tok:
                raise ValueError("empty token in vocabulary")
            if count < 1:
                raise ValueError(f"token {tok!r} has non-positive count {count}")
        self._tokens = [tok for tok, _ in items]
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}
        self._tf = dict(items)

    @property
    def tokens(self):
        """Tokens in id order."""
        return self._tokens

    def id_of(self, token):
        return self._ids[token]

    def token_of(self, idx):
        return self._tokens[idx]

    def tf(self, token):
        """Stored term frequency, or 0 for out-of-vocabulary tokens."""
        return self._tf.get(token, 0)

    def __contains__(self, token):
        return token in self._ids

    def __len__(self):
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)


def build_vocabulary(corpus, min_count=1):
    """Count tokens and keep those occurring at least min_count times."""
    if min_count < 1:
        raise ValueError("min_count must be at least 1")
    counts = Counter()
    for sent in corpus:
        counts.update(sent)
    return Vocabulary({t: c for t, c in counts.items() if c >= min_count})

"""Sparse n-gram features for policy segments.

Pipeline order is fixed: normalize -> filter -> stop words -> stemming ->
n-grams.  Vocabularies record document frequencies so TF-IDF weights can be
computed as count * ln(N / n_i).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ParseError
from .stemmer import stem

BC = "bc"
TF = "tf"
TFIDF = "tfidf"
SCHEMES = (BC, TF, TFIDF)

_LETTER_RUNS = re.compile(r"[a-z]+")
_ALNUM_RUNS = re.compile(r"[a-z0-9]+")
_DIGIT = re.compile(r"[0-9]")

_STOPWORD_CACHE: dict[str, frozenset[str]] = {}


def stopword_list(list_id: str = "english-default") -> frozenset[str]:
    """Return the named stop-word set; ``none`` is the empty set."""
    if list_id == "none":
        return frozenset()
    if list_id not in _STOPWORD_CACHE:
        if list_id != "english-default":
            raise ParseError(f"unknown stop-word list: {list_id!r}")
        text = resources.files("transferaudit.data").joinpath("stopwords.txt").read_text("utf-8")
        words = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.startswith("#")]
        _STOPWORD_CACHE[list_id] = frozenset(words)
    return _STOPWORD_CACHE[list_id]


@dataclass(frozen=True)
class TokenPipelineConfig:
    """Switches for the segment-to-token pipeline."""

    lowercase: bool = True
    drop_numeric: bool = True
    drop_punct: bool = True
    drop_non_ascii: bool = True
    stopword_list_id: str = "english-default"
    stem: bool = True
    ngram_min: int = 1
    ngram_max: int = 1

    def __post_init__(self):
        if not self.lowercase:
            raise ValueError("lowercasing is not optional")
        if not (1 <= self.ngram_min <= self.ngram_max <= 4):
            raise ValueError(f"bad n-gram range {self.ngram_min}-{self.ngram_max}")


def tokenize(text: str, cfg: TokenPipelineConfig) -> list[str]:
    """Normalize text to a token list; may be empty."""
    text = text.lower()
    if cfg.drop_non_ascii:
        text = text.encode("ascii", "ignore").decode("ascii")
    if cfg.drop_punct:
        # punctuation separates; digits separate too when numeric tokens drop
        runs = _LETTER_RUNS if cfg.drop_numeric else _ALNUM_RUNS
        tokens = runs.findall(text)
    else:
        tokens = text.split()
        if cfg.drop_numeric:
            tokens = [t for t in tokens if not _DIGIT.search(t)]
    stops = stopword_list(cfg.stopword_list_id)
    tokens = [t for t in tokens if t not in stops]
    if cfg.stem:
        tokens = [stem(t) for t in tokens]
    return tokens


def extract_ngrams(tokens: list[str], ngram_min: int, ngram_max: int) -> list[str]:
    """All contiguous n-grams for n in [ngram_min, ngram_max], space-joined."""
    if not (1 <= ngram_min <= ngram_max):
        raise ValueError(f"bad n-gram range {ngram_min}-{ngram_max}")
    grams: list[str] = []
    for n in range(ngram_min, ngram_max + 1):
        if n == 1:
            grams.extend(tokens)
            continue
        for i in range(len(tokens) - n + 1):
            grams.append(" ".join(tokens[i:i + n]))
    return grams


@dataclass
class Vocabulary:
    """Feature index plus the document frequencies behind IDF weights."""

    feature_to_index: dict[str, int]
    document_frequency: list[int]
    document_count: int
    ngram_min: int = 1
    ngram_max: int = 1

    def __len__(self):
        return len(self.feature_to_index)


@dataclass(frozen=True)
class FeatureVector:
    """Sparse weights for one segment under a weighting scheme."""

    entries: dict[int, float] = field(default_factory=dict)
    scheme: str = TF


def build_vocabulary(token_lists: list[list[str]], cfg: TokenPipelineConfig) -> Vocabulary:
    """Index every distinct n-gram and count the segments containing it."""
    if not token_lists:
        raise ValueError("need at least one segment to build a vocabulary")
    df: dict[str, int] = {}
    for tokens in token_lists:
        for gram in set(extract_ngrams(tokens, cfg.ngram_min, cfg.ngram_max)):
            df[gram] = df.get(gram, 0) + 1
    features = sorted(df)
    return Vocabulary(
        feature_to_index={f: i for i, f in enumerate(features)},
        document_frequency=[df[f] for f in features],
        document_count=len(token_lists),
        ngram_min=cfg.ngram_min,
        ngram_max=cfg.ngram_max,
    )


def vectorize(tokens: list[str], vocab: Vocabulary, scheme: str) -> FeatureVector:
    """Weight the in-vocabulary n-grams of one segment; OOV grams are ignored."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    counts: dict[int, int] = {}
    for gram in extract_ngrams(tokens, vocab.ngram_min, vocab.ngram_max):
        idx = vocab.feature_to_index.get(gram)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    entries: dict[int, float] = {}
    for idx, count in counts.items():
        if scheme == BC:
            entries[idx] = 1.0
        elif scheme == TF:
            entries[idx] = float(count)
        else:
            weight = count * math.log(vocab.document_count / vocab.document_frequency[idx])
            if weight != 0.0:
                entries[idx] = weight
    return FeatureVector(entries=entries, scheme=scheme)


def save_vocabulary(vocab: Vocabulary, path) -> None:
    """Write `#N=` header plus one `feature TAB index TAB df` line per feature."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(vocabulary_bytes(vocab).decode("utf-8"))


def vocabulary_bytes(vocab: Vocabulary) -> bytes:
    lines = [f"#N={vocab.document_count}"]
    for feature in sorted(vocab.feature_to_index):
        idx = vocab.feature_to_index[feature]
        lines.append(f"{feature}\t{idx}\t{vocab.document_frequency[idx]}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_vocabulary(path) -> Vocabulary:
    """Read a vocabulary file; the n-gram range is inferred from the features."""
    feature_to_index: dict[str, int] = {}
    df_by_index: dict[int, int] = {}
    document_count = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#N="):
                document_count = int(line[3:])
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected `feature TAB index TAB df`", lineno)
            feature, idx_s, df_s = parts
            try:
                idx, df = int(idx_s), int(df_s)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
            feature_to_index[feature] = idx
            df_by_index[idx] = df
    if document_count is None:
        raise ParseError("missing #N= header")
    if sorted(df_by_index) != list(range(len(feature_to_index))):
        raise ParseError("vocabulary indices are not dense 0..n-1")
    sizes = [f.count(" ") + 1 for f in feature_to_index] or [1]
    return Vocabulary(
        feature_to_index=feature_to_index,
        document_frequency=[df_by_index[i] for i in range(len(df_by_index))],
        document_count=document_count,
        ngram_min=min(sizes),
        ngram_max=max(sizes),
    )

"""Policy documents, segmentation, labeled corpora and stratified folds."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .errors import EmptyDocument, FoldError, LabelError, ParseError

FULLSTOP = "fullstop"
BLANKLINE = "blankline"

ELEMENT_LABELS = frozenset(
    ["adequacy", "scc", "bcr", "explicit_consent", "copy_means", "representative"]
)
_COUNTRY_LABEL = re.compile(r"^country:[A-Z]{2}$")
_BLANKLINE_SPLIT = re.compile(r"\n\s*\n")


def _check_labels(intention_label: int, element_labels: frozenset[str]) -> None:
    if intention_label not in (0, 1):
        raise ValueError(f"intention label must be 0 or 1, got {intention_label!r}")
    for label in element_labels:
        if label not in ELEMENT_LABELS and not _COUNTRY_LABEL.match(label):
            raise ValueError(f"unknown element label {label!r}")
    # representative is disclosable outside transfer-intention segments
    if element_labels - {"representative"} and intention_label != 1:
        raise ValueError("non-representative elements require intention label 1")


@dataclass(frozen=True)
class PolicyDocument:
    app_id: str
    raw_text: str
    source_uri: str | None = None


@dataclass(frozen=True)
class PolicySegment:
    doc_id: str
    index: int
    text: str


@dataclass(frozen=True)
class LabeledSegment:
    segment: PolicySegment
    intention_label: int
    element_labels: frozenset[str] = frozenset()

    def __post_init__(self):
        _check_labels(self.intention_label, self.element_labels)


@dataclass
class Corpus:
    samples: list[LabeledSegment] = field(default_factory=list)

    @property
    def positive_count(self) -> int:
        return sum(s.intention_label for s in self.samples)

    @property
    def negative_count(self) -> int:
        return len(self.samples) - self.positive_count

    def __len__(self):
        return len(self.samples)


def segment_policy(doc: PolicyDocument, separator_mode: str = FULLSTOP) -> list[PolicySegment]:
    """Split a policy into ordered, trimmed, non-empty segments.

    ``fullstop`` splits at a period followed by whitespace or end of text,
    except after single-letter tokens (keeps "U.S." together) and drops the
    terminal period.  ``blankline`` splits at blank lines.
    """
    text = doc.raw_text.strip()
    if not text:
        raise EmptyDocument(f"document {doc.app_id!r} is empty")
    if separator_mode == BLANKLINE:
        chunks = [c.strip() for c in _BLANKLINE_SPLIT.split(text)]
    elif separator_mode == FULLSTOP:
        chunks = []
        start = 0
        for i, ch in enumerate(text):
            if ch != "." or (i + 1 < len(text) and not text[i + 1].isspace()):
                continue
            run = 0
            j = i - 1
            while j >= 0 and text[j].isalpha():
                run += 1
                j -= 1
            if run == 1:
                continue  # abbreviation such as "U.S."
            chunks.append(text[start:i].strip())
            start = i + 1
        chunks.append(text[start:].strip())
    else:
        raise ValueError(f"unknown separator mode {separator_mode!r}")
    segments = [c for c in chunks if c]
    return [PolicySegment(doc.app_id, i, c) for i, c in enumerate(segments)]


_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def _unescape(text: str, lineno: int) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise ParseError("dangling escape at end of text field", lineno)
        nxt = text[i + 1]
        mapping = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}
        if nxt not in mapping:
            raise ParseError(f"unknown escape \\{nxt}", lineno)
        out.append(mapping[nxt])
        i += 2
    return "".join(out)


def save_corpus(corpus: Corpus, path) -> None:
    """One tab-separated sample per line: doc_id, intention, elements, text."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in corpus.samples:
            labels = ";".join(sorted(sample.element_labels)) or "-"
            fh.write(
                f"{sample.segment.doc_id}\t{sample.intention_label}\t"
                f"{labels}\t{_escape(sample.segment.text)}\n"
            )


def load_corpus(path) -> Corpus:
    """Parse the corpus line format; segment indices run per document."""
    samples: list[LabeledSegment] = []
    next_index: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(f"expected 4 tab-separated fields, got {len(parts)}", lineno)
            doc_id, intention_s, labels_s, text_s = parts
            if intention_s not in ("0", "1"):
                raise ParseError(f"intention must be 0 or 1, got {intention_s!r}", lineno)
            labels = frozenset() if labels_s == "-" else frozenset(labels_s.split(";"))
            text = _unescape(text_s, lineno)
            index = next_index.get(doc_id, 0)
            next_index[doc_id] = index + 1
            try:
                sample = LabeledSegment(
                    PolicySegment(doc_id, index, text), int(intention_s), labels
                )
            except ValueError as exc:
                raise LabelError(str(exc), lineno) from exc
            samples.append(sample)
    return Corpus(samples=samples)


def stratified_kfold(corpus: Corpus, k: int, seed: int) -> list[tuple[list[int], list[int]]]:
    """Seeded stratified folds: shuffle each class, deal round-robin.

    Returns k (train_indices, test_indices) pairs; test folds partition the
    corpus and per-fold positive counts differ from the ideal by at most one.
    """
    n = len(corpus.samples)
    if k < 2:
        raise FoldError(f"k must be >= 2, got {k}")
    if k > n:
        raise FoldError(f"k={k} exceeds sample count {n}")
    positives = [i for i, s in enumerate(corpus.samples) if s.intention_label == 1]
    negatives = [i for i, s in enumerate(corpus.samples) if s.intention_label == 0]
    if not positives or not negatives:
        raise FoldError("both classes need at least one sample")
    rng = random.Random(seed)
    rng.shuffle(positives)
    rng.shuffle(negatives)
    test_folds: list[list[int]] = [[] for _ in range(k)]
    for pool in (positives, negatives):
        for j, idx in enumerate(pool):
            test_folds[j % k].append(idx)
    folds = []
    for f in range(k):
        test = sorted(test_folds[f])
        test_set = set(test)
        train = [i for i in range(n) if i not in test_set]
        folds.append((train, test))
    return folds

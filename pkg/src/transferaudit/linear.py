"""Binary linear classifier trained by SGD with modified-Huber loss.

The objective is mean modified-Huber loss plus (alpha/2)*||w||^2; the bias is
unregularized.  Labels {0,1} map to {-1,+1}.  The learning rate decays as
eta0 / (1 + alpha*eta0*t) with t counting individual updates, and sample
order is reshuffled each epoch under the configured seed, so training is
fully deterministic.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .corpus import Corpus, LabeledSegment, stratified_kfold
from .errors import DegenerateTraining, ParseError, ShapeError
from .features import (
    FeatureVector,
    TokenPipelineConfig,
    Vocabulary,
    build_vocabulary,
    tokenize,
    vectorize,
    vocabulary_bytes,
)

MODIFIED_HUBER = "modified_huber"


def modified_huber_loss(z: float) -> float:
    """Loss on the margin z = y * (w.x + b)."""
    if z >= 1.0:
        return 0.0
    if z >= -1.0:
        return (1.0 - z) ** 2
    return -4.0 * z


def modified_huber_dloss(z: float) -> float:
    """Derivative of the loss with respect to the margin."""
    if z >= 1.0:
        return 0.0
    if z >= -1.0:
        return -2.0 * (1.0 - z)
    return -4.0


@dataclass(frozen=True)
class TrainConfig:
    alpha: float = 1e-3
    epochs: int = 50
    eta0: float = 0.01
    seed: int = 0
    loss: str = MODIFIED_HUBER

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.eta0 <= 0:
            raise ValueError("eta0 must be positive")
        if self.loss != MODIFIED_HUBER:
            raise ValueError(f"unsupported loss {self.loss!r}")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    config: TrainConfig

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)) or not math.isfinite(self.bias):
            raise ValueError("model parameters must be finite")


def train(samples: Sequence[tuple[FeatureVector, int]], cfg: TrainConfig,
          dim: int | None = None) -> LinearModel:
    """Fit the hyperplane by SGD; raises DegenerateTraining on one-class input."""
    labels = {y for _, y in samples}
    if labels != {0, 1}:
        raise DegenerateTraining(f"need both classes in training data, got labels {sorted(labels)}")
    if dim is None:
        dim = 1 + max((max(x.entries) for x, _ in samples if x.entries), default=-1)
    indices = [np.fromiter(x.entries.keys(), dtype=np.int64, count=len(x.entries))
               for x, _ in samples]
    values = [np.fromiter(x.entries.values(), dtype=np.float64, count=len(x.entries))
              for x, _ in samples]
    for idx in indices:
        if idx.size and idx.max() >= dim:
            raise ShapeError(f"feature index {idx.max()} outside dimension {dim}")
    ys = np.array([1.0 if y == 1 else -1.0 for _, y in samples])

    rng = np.random.default_rng(cfg.seed)
    v = np.zeros(dim)
    scale = 1.0
    bias = 0.0
    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(len(samples)):
            eta = cfg.eta0 / (1.0 + cfg.alpha * cfg.eta0 * t)
            z = ys[i] * (scale * float(v[indices[i]] @ values[i]) + bias)
            scale *= 1.0 - eta * cfg.alpha
            if scale < 1e-9:
                v *= scale
                scale = 1.0
            g = modified_huber_dloss(z)
            if g != 0.0:
                v[indices[i]] -= eta * g * ys[i] * values[i] / scale
                bias -= eta * g * ys[i]
            t += 1
    return LinearModel(weights=v * scale, bias=float(bias), config=cfg)


def decision_value(model: LinearModel, x: FeatureVector) -> float:
    """w.x + b for a sparse vector indexed against the model's vocabulary."""
    total = model.bias
    for idx, val in x.entries.items():
        if idx >= model.weights.shape[0] or idx < 0:
            raise ShapeError(f"feature index {idx} outside model dimension {model.weights.shape[0]}")
        total += model.weights[idx] * val
    return float(total)


def predict(model: LinearModel, x: FeatureVector) -> int:
    """1 iff the decision value is strictly positive; an exact 0 is negative."""
    return 1 if decision_value(model, x) > 0.0 else 0


class Confusion(NamedTuple):
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class EvalMetrics:
    precision: float
    recall: float
    f_measure: float
    npv: float
    specificity: float
    f_measure_negative: float
    accuracy: float
    confusion: Confusion


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _harmonic(a: float, b: float) -> float:
    return _ratio(2.0 * a * b, a + b)


def compute_metrics(predictions: Sequence[int], labels: Sequence[int]) -> EvalMetrics:
    """Confusion counts and the positive/negative metric suite; 0/0 -> 0."""
    if len(predictions) != len(labels) or not labels:
        raise ShapeError(f"{len(predictions)} predictions vs {len(labels)} labels")
    tp = fp = fn = tn = 0
    for p, y in zip(predictions, labels):
        if p == 1 and y == 1:
            tp += 1
        elif p == 1:
            fp += 1
        elif y == 1:
            fn += 1
        else:
            tn += 1
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    npv = _ratio(tn, tn + fn)
    specificity = _ratio(tn, tn + fp)
    return EvalMetrics(
        precision=precision,
        recall=recall,
        f_measure=_harmonic(precision, recall),
        npv=npv,
        specificity=specificity,
        f_measure_negative=_harmonic(npv, specificity),
        accuracy=_ratio(tp + tn, tp + fp + fn + tn),
        confusion=Confusion(tp, fp, fn, tn),
    )


_METRIC_NAMES = ("precision", "recall", "f_measure", "npv", "specificity",
                 "f_measure_negative", "accuracy")


@dataclass
class CrossValidationResult:
    folds: list[EvalMetrics]
    means: dict[str, float] = field(init=False)

    def __post_init__(self):
        self.means = {
            name: sum(getattr(m, name) for m in self.folds) / len(self.folds)
            for name in _METRIC_NAMES
        }


def intention_label(sample: LabeledSegment) -> int:
    return sample.intention_label


def adequacy_label(sample: LabeledSegment) -> int:
    return 1 if "adequacy" in sample.element_labels else 0


def cross_validate(corpus: Corpus, pipeline: TokenPipelineConfig, scheme: str,
                   train_cfg: TrainConfig, k: int, seed: int,
                   fit_on_all: bool = False,
                   label_fn: Callable[[LabeledSegment], int] = intention_label,
                   ) -> CrossValidationResult:
    """Stratified k-fold evaluation.

    Vocabularies are fitted on the train split of each fold; `fit_on_all`
    fits one vocabulary on the whole corpus instead (leaks document
    frequencies between folds; kept for compatibility experiments).
    """
    tokens = [tokenize(s.segment.text, pipeline) for s in corpus.samples]
    labels = [label_fn(s) for s in corpus.samples]
    relabeled = Corpus(samples=[
        LabeledSegment(s.segment, y, s.element_labels if y else frozenset())
        for s, y in zip(corpus.samples, labels)
    ])
    folds = stratified_kfold(relabeled, k, seed)
    shared_vocab = build_vocabulary(tokens, pipeline) if fit_on_all else None
    results = []
    for train_idx, test_idx in folds:
        vocab = (shared_vocab if shared_vocab is not None
                 else build_vocabulary([tokens[i] for i in train_idx], pipeline))
        train_samples = [(vectorize(tokens[i], vocab, scheme), labels[i]) for i in train_idx]
        model = train(train_samples, train_cfg, dim=len(vocab))
        predictions = [predict(model, vectorize(tokens[i], vocab, scheme)) for i in test_idx]
        results.append(compute_metrics(predictions, [labels[i] for i in test_idx]))
    return CrossValidationResult(folds=results)


def vocabulary_hash(vocab: Vocabulary) -> str:
    return hashlib.sha256(vocabulary_bytes(vocab)).hexdigest()[:16]


def model_bytes(model: LinearModel, *, scheme: str, ngram_min: int, ngram_max: int,
                vocab_hash: str) -> bytes:
    """Exact-decimal serialization; repr() round-trips every float."""
    cfg = model.config
    lines = [
        f"#scheme={scheme}",
        f"#ngram={ngram_min}-{ngram_max}",
        f"#alpha={cfg.alpha!r}",
        f"#eta0={cfg.eta0!r}",
        f"#epochs={cfg.epochs}",
        f"#seed={cfg.seed}",
        f"#loss={cfg.loss}",
        f"#vocab_sha256={vocab_hash}",
    ]
    for idx, weight in enumerate(model.weights):
        lines.append(f"{idx}\t{float(weight)!r}")
    lines.append(f"#bias={float(model.bias)!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def save_model(model: LinearModel, path, *, scheme: str, ngram_min: int,
               ngram_max: int, vocab_hash: str) -> None:
    with open(path, "wb") as fh:
        fh.write(model_bytes(model, scheme=scheme, ngram_min=ngram_min,
                             ngram_max=ngram_max, vocab_hash=vocab_hash))


def load_model(path) -> tuple[LinearModel, dict[str, str]]:
    """Read a model file; returns the model and its header fields."""
    header: dict[str, str] = {}
    weights: dict[int, float] = {}
    bias = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                if not value and key != "":
                    raise ParseError(f"malformed header {line!r}", lineno)
                if key == "bias":
                    bias = float(value)
                else:
                    header[key] = value
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected `index TAB weight`", lineno)
            weights[int(parts[0])] = float(parts[1])
    if bias is None:
        raise ParseError("missing #bias line")
    required = {"scheme", "ngram", "alpha", "eta0", "epochs", "seed"}
    missing = required - header.keys()
    if missing:
        raise ParseError(f"missing header fields: {sorted(missing)}")
    if sorted(weights) != list(range(len(weights))):
        raise ParseError("weight indices are not dense 0..n-1")
    cfg = TrainConfig(
        alpha=float(header["alpha"]),
        epochs=int(header["epochs"]),
        eta0=float(header["eta0"]),
        seed=int(header["seed"]),
        loss=header.get("loss", MODIFIED_HUBER),
    )
    w = np.array([weights[i] for i in range(len(weights))])
    return LinearModel(weights=w, bias=bias, config=cfg), header

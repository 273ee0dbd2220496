"""Row classification: stopword-filtered tokens into one of four classes.

Two interchangeable bindings produce labels: a built-in multinomial
naive-Bayes baseline and an external HTTP classifier speaking a small JSON
wire protocol. Human corrections always win over model votes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import httpx

from .model import ClassLabel, FinalOutput, RequirementRow, ReviewState, RowKind

TokenSeq = list[str]

MODEL_SCHEMA_VERSION = 1
DEFAULT_TITLE_BOOST = 5.0
DEFAULT_TIMEOUT_MS = 10_000

# Wire-protocol batches: bounded request size, and a failure mid-run still
# yields the rows classified so far.
BATCH_SIZE = 200

CLASS_ORDER = (
    ClassLabel.HEADER,
    ClassLabel.INFO,
    ClassLabel.FUNC_REQ,
    ClassLabel.NON_FUNC_REQ,
)

# Negations and modal verbs carry requirement semantics and survive filtering.
RETAIN = frozenset(
    {
        "not", "no", "never",
        "shall", "should", "must", "may", "might",
        "will", "would", "can", "cannot", "could",
        "shouldn't", "mustn't", "won't", "can't", "don't", "doesn't",
    }
)


def _load_stopwords() -> frozenset[str]:
    text = resources.files("rexcl.resources").joinpath("stopwords.txt").read_text()
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


STOPWORDS = _load_stopwords()


class ClassificationError(RuntimeError):
    """External classification failed; ``partial`` holds rows labeled so far."""

    def __init__(self, message: str, partial: list[RequirementRow] | None = None):
        super().__init__(message)
        self.partial = partial or []


def _clean_token(token: str) -> str:
    kept = "".join(ch for ch in token if ch.isalnum() or ch in "_'")
    return kept.strip("'")


def preprocess(text: str) -> TokenSeq:
    """Lowercase, strip punctuation (keeping "_" and internal apostrophes),
    and drop stopwords unless they are retained negations/modals."""
    tokens = []
    for raw in text.lower().split():
        token = _clean_token(raw)
        if not token:
            continue
        if token in STOPWORDS and token not in RETAIN:
            continue
        tokens.append(token)
    return tokens


@dataclass(frozen=True)
class BaselineModel:
    """Multinomial naive Bayes with a structural prior for TITLE rows."""

    vocabulary: dict[str, int]
    log_likelihoods: tuple[tuple[float, ...], ...]  # [class][token index]
    priors: tuple[float, ...]  # aligned with CLASS_ORDER
    title_boost: float = DEFAULT_TITLE_BOOST

    def __post_init__(self) -> None:
        if len(self.priors) != len(CLASS_ORDER):
            raise ValueError("one prior per class required")
        if abs(sum(self.priors) - 1.0) > 1e-9:
            raise ValueError(f"priors must sum to 1, got {sum(self.priors)}")
        for weights in self.log_likelihoods:
            if len(weights) != len(self.vocabulary):
                raise ValueError("every class needs weights over the full vocabulary")
        if self.title_boost <= 0:
            raise ValueError("title_boost must be positive")


@dataclass(frozen=True)
class BuiltinBinding:
    model: BaselineModel


@dataclass(frozen=True)
class ExternalBinding:
    endpoint: str
    timeout_ms: int = DEFAULT_TIMEOUT_MS

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


ClassifierBinding = BuiltinBinding | ExternalBinding


def train_baseline(
    rows: list[tuple[TokenSeq, RowKind, ClassLabel]],
    title_boost: float = DEFAULT_TITLE_BOOST,
) -> BaselineModel:
    """Fit naive-Bayes token weights with add-one smoothing.

    Every class must appear in the training rows.
    """
    present = {label for _, _, label in rows}
    for label in CLASS_ORDER:
        if label not in present:
            raise ValueError(f"training rows contain no {label.value} examples")
    vocabulary: dict[str, int] = {}
    for tokens, _, _ in rows:
        for token in tokens:
            vocabulary.setdefault(token, len(vocabulary))
    class_index = {label: i for i, label in enumerate(CLASS_ORDER)}
    counts = [[0] * len(vocabulary) for _ in CLASS_ORDER]
    row_counts = [0] * len(CLASS_ORDER)
    for tokens, _, label in rows:
        ci = class_index[label]
        row_counts[ci] += 1
        for token in tokens:
            counts[ci][vocabulary[token]] += 1
    vocab_size = len(vocabulary)
    log_likelihoods = []
    for ci in range(len(CLASS_ORDER)):
        total = sum(counts[ci])
        log_likelihoods.append(
            tuple(
                math.log((counts[ci][ti] + 1) / (total + vocab_size))
                for ti in range(vocab_size)
            )
        )
    priors = tuple(rc / len(rows) for rc in row_counts)
    return BaselineModel(
        vocabulary=vocabulary,
        log_likelihoods=tuple(log_likelihoods),
        priors=priors,
        title_boost=title_boost,
    )


def _posterior(
    model: BaselineModel, known: list[int], kind: RowKind
) -> tuple[ClassLabel, float]:
    """Normalized class posterior over known-vocabulary token indices."""
    scores = []
    for ci, label in enumerate(CLASS_ORDER):
        score = math.log(model.priors[ci]) if model.priors[ci] > 0 else -math.inf
        for ti in known:
            score += model.log_likelihoods[ci][ti]
        if kind is RowKind.TITLE and label is ClassLabel.HEADER:
            score += math.log(model.title_boost)
        scores.append(score)
    peak = max(scores)
    weights = [math.exp(s - peak) for s in scores]
    total = math.fsum(weights)
    best = max(range(len(CLASS_ORDER)), key=lambda ci: (weights[ci], -ci))
    return CLASS_ORDER[best], weights[best] / total


def classify_text(model: BaselineModel, text: str, kind: RowKind) -> tuple[ClassLabel, float]:
    """Label one text.

    Content-free TEXT rows fall back to INFO at prior confidence; TITLE rows
    with tokens keep the structural prior even when no token is in the
    vocabulary.
    """
    tokens = preprocess(text)
    known = [model.vocabulary[t] for t in tokens if t in model.vocabulary]
    if not known and not (kind is RowKind.TITLE and tokens):
        info = CLASS_ORDER.index(ClassLabel.INFO)
        return ClassLabel.INFO, model.priors[info]
    return _posterior(model, known, kind)


def _row_text(row: RequirementRow) -> str:
    return row.object_heading if row.kind is RowKind.TITLE else row.object_text


def _with_label(row: RequirementRow, label: ClassLabel, confidence: float) -> RequirementRow:
    """Classified copy of the row; human corrections override the model."""
    if row.review_state is ReviewState.CORRECTED:
        assert row.corrected_type is not None
        label, confidence = row.corrected_type, 1.0
    return RequirementRow(
        object_identifier=row.object_identifier,
        object_number=row.object_number,
        object_heading=row.object_heading,
        object_text=row.object_text,
        object_level=row.object_level,
        kind=row.kind,
        object_type=label,
        confidence=confidence,
        review_state=row.review_state,
        corrected_type=row.corrected_type,
    )


def _doc_id_of(rows: list[RequirementRow]) -> str:
    return rows[0].object_identifier.rsplit("-R", 1)[0]


def _classify_builtin(model: BaselineModel, rows: list[RequirementRow]) -> FinalOutput:
    labeled = []
    for row in rows:
        label, confidence = classify_text(model, _row_text(row), row.kind)
        labeled.append(_with_label(row, label, confidence))
    return FinalOutput(doc_id=_doc_id_of(rows), rows=tuple(labeled))


def _parse_protocol_labels(
    payload: object, expected_ids: list[str]
) -> dict[str, tuple[ClassLabel, float]]:
    if not isinstance(payload, dict) or not isinstance(payload.get("labels"), list):
        raise ValueError('response must be an object with a "labels" array')
    by_id: dict[str, tuple[ClassLabel, float]] = {}
    for entry in payload["labels"]:
        if not isinstance(entry, dict):
            raise ValueError("label entries must be objects")
        try:
            label = ClassLabel(entry["label"])
            confidence = float(entry["confidence"])
            row_id = entry["id"]
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"malformed label entry: {entry!r}") from exc
        if not 0.0 <= confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {confidence}")
        by_id[row_id] = (label, confidence)
    missing = [rid for rid in expected_ids if rid not in by_id]
    if missing:
        raise ValueError(f"response missing ids: {missing[:5]}")
    return by_id


def _classify_external(
    binding: ExternalBinding,
    rows: list[RequirementRow],
    client: httpx.Client | None = None,
) -> FinalOutput:
    labeled: list[RequirementRow] = []
    timeout = binding.timeout_ms / 1000
    owned = client is None
    if client is None:
        client = httpx.Client(timeout=timeout)
    try:
        for start in range(0, len(rows), BATCH_SIZE):
            batch = rows[start : start + BATCH_SIZE]
            request = {
                "rows": [
                    {
                        "id": row.object_identifier,
                        "text": _row_text(row),
                        "kind": row.kind.value,
                    }
                    for row in batch
                ]
            }
            try:
                response = client.post(binding.endpoint, json=request, timeout=timeout)
            except httpx.HTTPError as exc:
                raise ClassificationError(
                    f"classifier request failed: {exc}", partial=labeled
                ) from exc
            if response.status_code != 200:
                raise ClassificationError(
                    f"classifier returned HTTP {response.status_code}", partial=labeled
                )
            try:
                by_id = _parse_protocol_labels(
                    response.json(), [row.object_identifier for row in batch]
                )
            except ValueError as exc:
                raise ClassificationError(
                    f"protocol error: {exc}", partial=labeled
                ) from exc
            for row in batch:
                label, confidence = by_id[row.object_identifier]
                labeled.append(_with_label(row, label, confidence))
    finally:
        if owned:
            client.close()
    return FinalOutput(doc_id=_doc_id_of(rows), rows=tuple(labeled))


def classify_rows(
    binding: ClassifierBinding,
    rows: list[RequirementRow],
    client: httpx.Client | None = None,
) -> FinalOutput:
    """Assign object_type and confidence to every row, preserving order.

    CORRECTED rows keep their corrected_type no matter what the model says.
    External failures raise ClassificationError; no row is silently dropped.
    """
    if not rows:
        raise ValueError("classify_rows needs at least one row")
    if isinstance(binding, BuiltinBinding):
        return _classify_builtin(binding.model, rows)
    return _classify_external(binding, rows, client=client)


def model_to_dict(model: BaselineModel) -> dict:
    return {
        "version": MODEL_SCHEMA_VERSION,
        "classes": [label.value for label in CLASS_ORDER],
        "vocabulary": model.vocabulary,
        "log_likelihoods": [list(w) for w in model.log_likelihoods],
        "priors": list(model.priors),
        "title_boost": model.title_boost,
    }


def model_from_dict(data: dict) -> BaselineModel:
    if data.get("version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model version: {data.get('version')!r}")
    if data.get("classes") != [label.value for label in CLASS_ORDER]:
        raise ValueError("class order mismatch")
    return BaselineModel(
        vocabulary={str(k): int(v) for k, v in data["vocabulary"].items()},
        log_likelihoods=tuple(tuple(map(float, w)) for w in data["log_likelihoods"]),
        priors=tuple(map(float, data["priors"])),
        title_boost=float(data["title_boost"]),
    )


def save_model(model: BaselineModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)) + "\n")


def load_model(path: str | Path) -> BaselineModel:
    return model_from_dict(json.loads(Path(path).read_text()))

"""Evaluation helpers: ranking metrics, agreement arithmetic, and a seeded
synthetic corpus generator that yields documents together with ground truth.

The generator builds its expected units, tuples, and labels from its own
layout plan, never by running the extraction pipeline, so pipeline tests
compare against an independent oracle.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence, TypeVar

from .hf_filter import HfFeatures, HfLabel, compute_features
from .ingest import PagedDocument, SourceMode
from .model import (
    ClassLabel,
    ExtractionResult,
    RequirementRow,
    RowKind,
    SectionTitle,
    SectionTuple,
    TextUnit,
    render_number,
)
from .section_extract import PREAMBLE_HEADING, to_rows

T = TypeVar("T")


class ZeroVarianceError(ValueError):
    """Correlation is undefined when either argument has zero variance."""


def prf1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall, and F1 from raw counts; 0/0 is defined as 0."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def macro_f1(per_class: Sequence[tuple[int, int, int]]) -> float:
    """Unweighted mean of per-class F1 scores."""
    if not per_class:
        raise ValueError("macro_f1 needs at least one class")
    return math.fsum(prf1(*counts)[2] for counts in per_class) / len(per_class)


def confusion_counts(truth: Sequence[T], pred: Sequence[T]) -> dict[T, tuple[int, int, int]]:
    """Per-label (tp, fp, fn) counts over aligned truth/prediction sequences."""
    if len(truth) != len(pred):
        raise ValueError("truth and prediction lengths differ")
    labels = set(truth) | set(pred)
    counts = {}
    for label in labels:
        tp = sum(1 for t, p in zip(truth, pred) if t == label and p == label)
        fp = sum(1 for t, p in zip(truth, pred) if t != label and p == label)
        fn = sum(1 for t, p in zip(truth, pred) if t == label and p != label)
        counts[label] = (tp, fp, fn)
    return counts


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation; raises ZeroVarianceError when degenerate."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    if len(xs) < 2:
        raise ValueError("pearson needs at least two points")
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    var_x = math.fsum((x - mean_x) ** 2 for x in xs)
    var_y = math.fsum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        raise ZeroVarianceError("correlation undefined for zero-variance input")
    cov = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    r = cov / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


def likert_average(scores: Sequence[float]) -> float:
    """Mean of Likert scores on the 0..5 scale."""
    if not scores:
        raise ValueError("likert_average needs at least one score")
    for score in scores:
        if not 0.0 <= score <= 5.0:
            raise ValueError(f"score out of [0, 5]: {score}")
    return math.fsum(scores) / len(scores)


# --- synthetic corpus -------------------------------------------------------

HEADING_WORDS = (
    "introduction", "scope", "overview", "architecture", "interfaces",
    "requirements", "design", "constraints", "glossary", "references",
    "deployment", "maintenance", "verification", "integration", "operations",
)

FUNC_WORDS = (
    "process", "validate", "transmit", "compute", "parse", "encrypt",
    "dispatch", "acknowledge", "retry", "reject", "archive", "synchronize",
    "notify", "persist", "ingest", "route",
)

NFR_WORDS = (
    "availability", "latency", "throughput", "scalability", "reliability",
    "uptime", "capacity", "redundancy", "failover", "durability",
    "concurrency", "percentile", "degradation", "resilience",
)

INFO_WORDS = (
    "background", "context", "stakeholders", "summary", "purpose",
    "assumptions", "conventions", "audience", "revision", "history",
    "distribution", "appendix", "terminology", "rationale",
)

NEUTRAL_WORDS = (
    "system", "data", "service", "module", "component", "interface",
    "platform", "network", "record", "message",
)

MODALS = ("shall", "must", "will", "should")

COMPANIES = ("Orion Systems", "Vantage Dynamics", "Helix Avionics", "Northgate Labs")

# Boilerplate that legitimately recurs across pages inside section bodies.
REPEATED_PHRASES = (
    "See appendix for details.",
    "Refer to the interface control document.",
    "To be defined in a later revision.",
    "Subject to change after design review.",
    "Details are provided in the referenced standard.",
    "Refer to the verification plan for test coverage.",
)

ALLOWLISTED_TEXTS = ("No Requirement", "Not Applicable", "N.A.")

_CONTENT_CLASSES = (ClassLabel.INFO, ClassLabel.FUNC_REQ, ClassLabel.NON_FUNC_REQ)


@dataclass(frozen=True)
class GeneratorConfig:
    docs: int = 3
    pages_per_doc: int = 10
    sections_per_doc: int = 8
    texts_per_section: int = 4
    hf_lines_per_page: int = 2
    class_vocab_separation: float = 1.0
    front_matter_texts: int = 2
    # Ambiguity knobs for the header/footer benchmark.
    hf_dropout: float = 0.0
    dynamic_hf_fraction: float = 0.0
    repeated_phrase_rate: float = 0.0
    # Noise knobs for the extraction benchmark.
    title_noise_rate: float = 0.0
    no_requirement_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.docs < 1 or self.pages_per_doc < 1:
            raise ValueError("docs and pages_per_doc must be >= 1")
        if self.sections_per_doc < 1 or self.texts_per_section < 1:
            raise ValueError("sections_per_doc and texts_per_section must be >= 1")
        if not 0 <= self.hf_lines_per_page <= 4:
            raise ValueError("hf_lines_per_page must be in 0..4")
        if self.front_matter_texts < 0:
            raise ValueError("front_matter_texts must be >= 0")
        for name in (
            "class_vocab_separation",
            "hf_dropout",
            "dynamic_hf_fraction",
            "repeated_phrase_rate",
            "title_noise_rate",
            "no_requirement_rate",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class GeneratedDocument:
    """One synthetic document with its full ground truth."""

    document: PagedDocument
    units: tuple[TextUnit, ...]
    hf_labels: tuple[HfLabel, ...]
    extraction: ExtractionResult
    rows: tuple[RequirementRow, ...]
    row_labels: tuple[ClassLabel, ...]


@dataclass
class _Line:
    """One rendered non-blank line with its provenance."""

    text: str
    md_depth: int = 0
    hf: bool = False
    label: ClassLabel | None = None


_CLASS_POOLS = {
    ClassLabel.FUNC_REQ: FUNC_WORDS,
    ClassLabel.NON_FUNC_REQ: NFR_WORDS,
    ClassLabel.INFO: INFO_WORDS,
}


def _pick(rng: random.Random, label: ClassLabel, separation: float) -> str:
    """A planted class word, or a word from another class's pool."""
    own = _CLASS_POOLS[label]
    if rng.random() < separation:
        return rng.choice(own)
    others = [w for lab, pool in _CLASS_POOLS.items() if lab != label for w in pool]
    return rng.choice(others)


def _heading_text(rng: random.Random) -> str:
    count = rng.choice((2, 3))
    return " ".join(rng.choice(HEADING_WORDS) for _ in range(count)).title()


def _sentence(rng: random.Random, label: ClassLabel, separation: float) -> str:
    """One body sentence; only the planted words carry the class signal.

    The scaffold is shared by all content classes so the classifier cannot
    key on template words, which keeps class_vocab_separation the single
    difficulty knob.
    """
    words = [
        _pick(rng, label, separation) for _ in range(rng.choice((2, 3)))
    ]
    noun, noun2 = rng.choice(NEUTRAL_WORDS), rng.choice(NEUTRAL_WORDS)
    modal = rng.choice(MODALS)
    return f"The {noun} {modal} provide {' and '.join(words)} for the {noun2}."


def _section_paths(rng: random.Random, count: int) -> list[tuple[int, ...]]:
    """A well-formed numbering walk: child, sibling, or parent sibling."""
    paths = [(1,)]
    while len(paths) < count:
        current = paths[-1]
        roll = rng.random()
        if roll < 0.3 and len(current) < 3:
            paths.append(current + (1,))
        elif roll < 0.85 or len(current) == 1:
            paths.append(current[:-1] + (current[-1] + 1,))
        else:
            parent = current[:-1]
            paths.append(parent[:-1] + (parent[-1] + 1,))
    return paths


def _hf_lines(
    rng: random.Random,
    config: GeneratorConfig,
    company: str,
    doc_id: str,
    page: int,
    total_pages: int,
) -> tuple[list[_Line], list[_Line]]:
    templates_top = [
        f"{company} Requirements Specification",
        f"Page {page} of {total_pages}",
    ]
    templates_bottom = [
        f"Doc {doc_id} Rev 2.1 - Page {page}",
        "Confidential - Internal Use Only",
    ]
    n_top = math.ceil(config.hf_lines_per_page / 2)
    n_bottom = config.hf_lines_per_page - n_top
    top = []
    for i in range(n_top):
        if rng.random() < config.hf_dropout:
            continue
        top.append(_Line(text=templates_top[i], hf=True))
    if config.dynamic_hf_fraction and rng.random() < config.dynamic_hf_fraction:
        # A page-specific running head: low frequency at a near-top index,
        # the same signature as a body line, so a frequency+position model
        # cannot fully separate it.
        words = " ".join(rng.sample(HEADING_WORDS, 2)).title()
        top.append(_Line(text=f"Running Head {words}", hf=True))
    bottom = []
    for i in range(n_bottom):
        if rng.random() < config.hf_dropout:
            continue
        bottom.append(_Line(text=templates_bottom[i], hf=True))
    return top, bottom


def _plan_content(
    rng: random.Random, config: GeneratorConfig
) -> tuple[list[_Line], list[SectionTuple], list[ClassLabel]]:
    """Content lines plus the expected tuples and per-row labels."""
    lines: list[_Line] = []
    tuples: list[SectionTuple] = []
    row_labels: list[ClassLabel] = []

    def finish(title: SectionTitle, texts: list[_Line]) -> None:
        tuples.append(SectionTuple(title=title, texts=tuple(t.text for t in texts)))
        row_labels.append(ClassLabel.HEADER)
        row_labels.extend(t.label for t in texts)  # type: ignore[misc]

    if config.front_matter_texts:
        front = []
        for _ in range(config.front_matter_texts):
            line = _Line(
                text=_sentence(rng, ClassLabel.INFO, config.class_vocab_separation),
                label=ClassLabel.INFO,
            )
            front.append(line)
            lines.append(line)
        finish(
            SectionTitle(
                raw_label="",
                canonical_path=(0,),
                heading=PREAMBLE_HEADING,
                synthesized=True,
            ),
            front,
        )

    for path in _section_paths(rng, config.sections_per_doc):
        number = render_number(path)
        heading = _heading_text(rng)
        depth = min(len(path), 6)
        lines.append(_Line(text=f"{'#' * depth} {number} {heading}", md_depth=depth))
        texts = []
        for _ in range(config.texts_per_section):
            roll = rng.random()
            if roll < config.no_requirement_rate:
                text = rng.choice(ALLOWLISTED_TEXTS)
                label = ClassLabel.INFO
            elif roll < config.no_requirement_rate + config.title_noise_rate:
                fake = f"{rng.randint(1, 9)}.{rng.randint(1, 9)}"
                text = f"{fake} {_heading_text(rng)}"
                label = ClassLabel.INFO
            elif rng.random() < config.repeated_phrase_rate:
                text = rng.choice(REPEATED_PHRASES)
                label = ClassLabel.INFO
            else:
                label = rng.choice(_CONTENT_CLASSES)
                text = _sentence(rng, label, config.class_vocab_separation)
            line = _Line(text=text, label=label)
            texts.append(line)
            lines.append(line)
        finish(
            SectionTitle(
                raw_label=number,
                canonical_path=path,
                heading=heading,
                synthesized=False,
            ),
            texts,
        )
    return lines, tuples, row_labels


def _chunk_sizes(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + 1] * r + [q] * (parts - r)


def _generate_document(seed: int, index: int, config: GeneratorConfig) -> GeneratedDocument:
    rng = random.Random(seed * 1_000_003 + index)
    doc_id = f"gen-{index + 1:03d}"
    company = rng.choice(COMPANIES)
    content, tuples, row_labels = _plan_content(rng, config)

    pages: list[tuple[str, ...]] = []
    units: list[TextUnit] = []
    hf_labels: list[HfLabel] = []
    cursor = 0
    for page_no, size in enumerate(_chunk_sizes(len(content), config.pages_per_doc), start=1):
        top, bottom = _hf_lines(rng, config, company, doc_id, page_no, config.pages_per_doc)
        page_lines = top + content[cursor : cursor + size] + bottom
        cursor += size
        pages.append(tuple(line.text for line in page_lines))
        for line_index, line in enumerate(page_lines):
            units.append(
                TextUnit(
                    text=line.text,
                    page=page_no,
                    line_index=line_index,
                    page_line_count=len(page_lines),
                    md_heading_depth=line.md_depth,
                )
            )
            hf_labels.append(HfLabel.HEADER_FOOTER if line.hf else HfLabel.REQ_TEXT)

    extraction = ExtractionResult(doc_id=doc_id, tuples=tuple(tuples))
    rows = tuple(to_rows(extraction))
    return GeneratedDocument(
        document=PagedDocument(
            doc_id=doc_id, pages=tuple(pages), source_mode=SourceMode.MARKDOWN
        ),
        units=tuple(units),
        hf_labels=tuple(hf_labels),
        extraction=extraction,
        rows=rows,
        row_labels=tuple(row_labels),
    )


def generate_corpus(seed: int, config: GeneratorConfig) -> tuple[GeneratedDocument, ...]:
    """Deterministic synthetic corpus: same seed, same bytes."""
    return tuple(_generate_document(seed, i, config) for i in range(config.docs))


def generate_labeled_rows(
    seed: int, n_rows: int, separation: float = 1.0
) -> list[tuple[str, RowKind, ClassLabel]]:
    """Standalone 4-class labeled texts with planted, tunable vocabulary.

    Classes are balanced to within one row, in shuffled order.
    """
    if n_rows < 4:
        raise ValueError("need at least one row per class")
    rng = random.Random(seed)
    labels = [
        (ClassLabel.HEADER, ClassLabel.INFO, ClassLabel.FUNC_REQ, ClassLabel.NON_FUNC_REQ)[
            i % 4
        ]
        for i in range(n_rows)
    ]
    rng.shuffle(labels)
    rows = []
    for label in labels:
        if label is ClassLabel.HEADER:
            rows.append((_heading_text(rng), RowKind.TITLE, label))
        else:
            rows.append((_sentence(rng, label, separation), RowKind.TEXT, label))
    return rows


# --- sampling helpers -------------------------------------------------------


def hf_feature_pool(
    corpus: Sequence[GeneratedDocument],
) -> list[tuple[HfFeatures, HfLabel]]:
    """Per-document features (page context intact) pooled across the corpus."""
    pool = []
    for doc in corpus:
        features = compute_features(list(doc.units))
        pool.extend(zip(features, doc.hf_labels))
    return pool


def subsample_exact(
    pool: Sequence[tuple[T, HfLabel]], quota: dict[HfLabel, int], seed: int
) -> list[tuple[T, HfLabel]]:
    """Exactly quota[label] items per label, drawn without replacement."""
    rng = random.Random(seed)
    by_label: dict[HfLabel, list[tuple[T, HfLabel]]] = {}
    for item in pool:
        by_label.setdefault(item[1], []).append(item)
    picked = []
    for label, count in quota.items():
        available = by_label.get(label, [])
        if len(available) < count:
            raise ValueError(
                f"pool has {len(available)} {label.value} items, need {count}"
            )
        picked.extend(rng.sample(available, count))
    rng.shuffle(picked)
    return picked


def stratified_split(
    pairs: Sequence[tuple[T, HfLabel]], test_fraction: float, seed: int
) -> tuple[list[tuple[T, HfLabel]], list[tuple[T, HfLabel]]]:
    """(train, test) keeping each label's proportion in both halves."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    rng = random.Random(seed)
    by_label: dict[HfLabel, list[tuple[T, HfLabel]]] = {}
    for item in pairs:
        by_label.setdefault(item[1], []).append(item)
    train: list[tuple[T, HfLabel]] = []
    test: list[tuple[T, HfLabel]] = []
    for label in sorted(by_label, key=lambda l: l.value):
        items = by_label[label][:]
        rng.shuffle(items)
        cut = round(len(items) * test_fraction)
        test.extend(items[:cut])
        train.extend(items[cut:])
    rng.shuffle(train)
    rng.shuffle(test)
    return train, test

"""Synthetic domain corpus for the adaptation experiments.

The unlabeled corpus wraps each class's content words in class-flavored
prose, so masked-LM training can tie a content word to its class even
when that word never appears in the labeled rows. The labeled rows use
one shared scaffold for every class: there the content words are the
only label signal. Scaffold vocabulary and the four content pools are
pairwise disjoint, which the test suite asserts.
"""

from __future__ import annotations

import random

FUNC_POOL = (
    "archive", "validate", "transmit", "encode", "decode", "ingest",
    "replicate", "broadcast", "quarantine", "reconcile", "checkpoint",
    "throttle", "enqueue", "dequeue", "normalize", "tokenize", "redact",
    "mirror", "compact", "prefetch", "revoke", "reindex", "snapshot",
    "purge",
)

NFR_POOL = (
    "latency", "uptime", "throughput", "jitter", "footprint", "headroom",
    "saturation", "variance", "drift", "backlog", "staleness", "fanout",
    "contention", "churn", "skew", "lag", "overhead", "congestion",
    "burstiness", "volatility", "slack", "starvation", "thrash",
    "attrition",
)

INFO_POOL = (
    "background", "purpose", "audience", "conventions", "assumptions",
    "definitions", "acronyms", "references", "revision", "approvals",
    "distribution", "confidentiality", "copyright", "trademarks",
    "acknowledgements", "preface", "foreword", "synopsis", "glossary",
    "rationale", "changelog", "roadmap", "errata", "citations",
)

HEADER_POOL = (
    "overview", "introduction", "scope", "architecture", "interfaces",
    "compliance", "safety", "security", "telemetry", "diagnostics",
    "calibration", "packaging", "labeling", "training", "staffing",
    "logistics", "procurement", "disposal", "installation",
    "commissioning", "decommissioning", "warranty", "servicing",
    "inspection",
)

POOLS = {
    "HEADER": HEADER_POOL,
    "INFO": INFO_POOL,
    "FUNC_REQ": FUNC_POOL,
    "NON_FUNC_REQ": NFR_POOL,
}

CORPUS_TEMPLATES = {
    "FUNC_REQ": (
        "The controller shall {a} and then {b} on operator command.",
        "When armed, the unit shall {a} each incoming frame and {b} it.",
        "The device shall {a} its queue before it can {b} again.",
    ),
    "NON_FUNC_REQ": (
        "Sustained {a} above the agreed ceiling counts as {b} debt.",
        "Excess {a} erodes the {b} budget during peak load.",
        "The {a} envelope shrinks whenever {b} climbs.",
    ),
    "INFO": (
        "This chapter summarizes the {a} gathered during review of {b}.",
        "Readers consult the {a} annex alongside the {b} notes.",
        "Archival {a} material precedes the {b} part.",
    ),
    "HEADER": (
        "{a} {b}",
        "{a} and {b}",
    ),
}

NEUTRAL_WORDS = ("system", "module", "service", "platform", "pipeline", "gateway")

# shall and may stay exclusive to the corpus prose; rows use these two.
ROW_MODALS = ("will", "should")

ROW_SCAFFOLD = "The {n} {m} provide {a} and {b} for the {n2}."


def corpus_text(rng: random.Random, label: str) -> str:
    template = rng.choice(CORPUS_TEMPLATES[label])
    a, b = rng.sample(POOLS[label], 2)
    text = template.format(a=a, b=b)
    return text.title() if label == "HEADER" else text


def make_corpus(seed: int, size: int) -> list[str]:
    """Balanced class-flavored sentences over the full content pools."""
    rng = random.Random(seed)
    labels = [sorted(POOLS)[i % len(POOLS)] for i in range(size)]
    rng.shuffle(labels)
    return [corpus_text(rng, label) for label in labels]


def make_rows(
    seed: int, per_class: int, word_range: tuple[int, int]
) -> list[tuple[str, str, str]]:
    """Shared-scaffold labeled rows drawing content words from a pool slice.

    Disjoint word ranges for the train and test rows put every test-row
    content word outside the labeled vocabulary, which is the regime the
    unlabeled corpus is meant to cover.
    """
    lo, hi = word_range
    if hi - lo < 2:
        raise ValueError("word_range must span at least two words")
    rng = random.Random(seed)
    rows = []
    for label in sorted(POOLS):
        words = POOLS[label][lo:hi]
        for _ in range(per_class):
            a, b = rng.sample(words, 2)
            if label == "HEADER":
                rows.append((f"{a} {b}".title(), "TITLE", label))
            else:
                text = ROW_SCAFFOLD.format(
                    n=rng.choice(NEUTRAL_WORDS),
                    m=rng.choice(ROW_MODALS),
                    a=a,
                    b=b,
                    n2=rng.choice(NEUTRAL_WORDS),
                )
                rows.append((text, "TEXT", label))
    rng.shuffle(rows)
    return rows

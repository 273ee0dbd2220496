import pytest

from model_server import (
    EncoderConfig,
    FinetuneParams,
    finetune,
    new_checkpoint,
)

# Deliberately tiny so every test trains in well under a second.
TINY = EncoderConfig(
    vocab_size=0, hidden=32, layers=1, heads=2, intermediate=64, max_len=24
)

LABEL_TEXTS = {
    "HEADER": "Interface overview for subsystem {i}",
    "INFO": "This chapter gives background notes on module {i}.",
    "FUNC_REQ": "The system shall persist record {i} to the data store.",
    "NON_FUNC_REQ": "Response time must stay below {i} milliseconds.",
}


def labeled_rows(per_class: int) -> list[tuple[str, str, str]]:
    rows = []
    for i in range(per_class):
        for label, pattern in LABEL_TEXTS.items():
            kind = "TITLE" if label == "HEADER" else "TEXT"
            rows.append((pattern.format(i=i), kind, label))
    return rows


def corpus_texts(n: int) -> list[str]:
    rows = labeled_rows((n + len(LABEL_TEXTS) - 1) // len(LABEL_TEXTS))
    return [text for text, _, _ in rows][:n]


@pytest.fixture(scope="session")
def served_checkpoint():
    rows = labeled_rows(10)
    base = new_checkpoint([text for text, _, _ in rows], seed=3, template=TINY)
    return finetune(rows, base, params=FinetuneParams(epochs=40), seed=3)

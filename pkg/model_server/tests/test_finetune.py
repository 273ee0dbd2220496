import pytest
import torch

from model_server import (
    FinetuneParams,
    classify,
    finetune,
    macro_f1,
    new_checkpoint,
)

from conftest import TINY, labeled_rows


@pytest.fixture(scope="module")
def base():
    rows = labeled_rows(10)
    return new_checkpoint([text for text, _, _ in rows], seed=0, template=TINY)


def test_missing_class_is_named(base):
    rows = [r for r in labeled_rows(4) if r[2] != "NON_FUNC_REQ"]
    with pytest.raises(ValueError, match="NON_FUNC_REQ"):
        finetune(rows, base)


def test_unknown_label_is_rejected(base):
    rows = labeled_rows(2) + [("Stray text.", "TEXT", "WIDGET")]
    with pytest.raises(ValueError, match="WIDGET"):
        finetune(rows, base)


def test_forty_rows_are_memorized(base):
    rows = labeled_rows(10)
    assert len(rows) == 40
    model = finetune(rows, base, params=FinetuneParams(epochs=40), seed=0)
    predicted = classify(model, [(text, kind) for text, kind, _ in rows])
    hits = sum(
        1 for (label, _), (_, _, truth) in zip(predicted, rows) if label == truth
    )
    assert hits == len(rows)
    assert macro_f1(model, rows) == 1.0


def test_same_seed_gives_identical_models(base):
    rows = labeled_rows(6)
    params = FinetuneParams(epochs=8)
    first = finetune(rows, base, params=params, seed=7)
    second = finetune(rows, base, params=params, seed=7)
    for module in ("encoder", "head"):
        left = getattr(first, module).state_dict()
        right = getattr(second, module).state_dict()
        for name, weight in left.items():
            assert torch.equal(right[name], weight)
    probe = [(text, kind) for text, kind, _ in rows]
    assert classify(first, probe) == classify(second, probe)


def test_confidences_are_probabilities(base):
    rows = labeled_rows(6)
    model = finetune(rows, base, params=FinetuneParams(epochs=5), seed=1)
    for label, confidence in classify(model, [(t, k) for t, k, _ in rows]):
        assert 0.0 <= confidence <= 1.0
        assert label in ("HEADER", "INFO", "FUNC_REQ", "NON_FUNC_REQ")


def test_classify_requires_a_head(base):
    with pytest.raises(ValueError, match="head"):
        classify(base, [("The system shall halt.", "TEXT")])

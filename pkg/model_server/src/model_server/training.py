"""Masked-LM domain adaptation and supervised finetuning.

adapt() keeps the best-scoring weights (the starting point included), so
the returned checkpoint never scores worse than its base on the held-out
masked-LM split. finetune() trains the classification head together with
the encoder. All entry points are deterministic for a fixed seed.
"""

from __future__ import annotations

import copy
import dataclasses
import random
from dataclasses import dataclass

import torch
from torch import nn

from .encoder import (
    CLASS_LABELS,
    Checkpoint,
    ClassifierHead,
    Encoder,
    EncoderConfig,
    HeadConfig,
)
from .preprocess import preprocess
from .vocab import PAD, MASK, NUM_SPECIALS, build_vocab

IGNORE = -100


@dataclass(frozen=True)
class AdaptParams:
    epochs: int = 3
    mask_prob: float = 0.15
    lr: float = 1e-3
    weight_decay: float = 0.1
    batch_size: int = 32
    holdout_fraction: float = 0.1


@dataclass(frozen=True)
class FinetuneParams:
    epochs: int = 20
    lr: float = 1e-3
    batch_size: int = 16


def _encode_texts(checkpoint: Checkpoint, rows: list[tuple[str, str]]) -> torch.Tensor:
    max_len = checkpoint.config.max_len
    encoded = [
        checkpoint.vocab.encode(preprocess(text), kind, max_len)
        for text, kind in rows
    ]
    return torch.tensor(encoded, dtype=torch.long)


def _mask_batch(
    ids: torch.Tensor, mask_prob: float, vocab_size: int, generator: torch.Generator
) -> tuple[torch.Tensor, torch.Tensor]:
    """BERT-style corruption: of the chosen positions, 80% become [MASK],
    10% a random token, 10% stay; labels ignore everything else."""
    maskable = ids != PAD
    maskable[:, :2] = False  # never mask the summary and kind markers
    roll = torch.rand(ids.shape, generator=generator)
    chosen = maskable & (roll < mask_prob)
    if not bool(chosen.any()) and bool(maskable.any()):
        # A small batch can roll past every position; the loss needs at
        # least one target to stay finite.
        candidates = torch.where(maskable.view(-1))[0]
        pick = candidates[torch.argmin(roll.view(-1)[candidates])]
        chosen.view(-1)[pick] = True
    labels = torch.where(chosen, ids, torch.full_like(ids, IGNORE))
    corrupted = ids.clone()
    action = torch.rand(ids.shape, generator=generator)
    corrupted[chosen & (action < 0.8)] = MASK
    random_ids = torch.randint(
        NUM_SPECIALS, vocab_size, ids.shape, generator=generator
    )
    swap = chosen & (action >= 0.8) & (action < 0.9)
    corrupted[swap] = random_ids[swap]
    return corrupted, labels


def mlm_heldout_loss(
    encoder: Encoder, ids: torch.Tensor, mask_prob: float, seed: int
) -> float:
    """Loss under a fixed masking pattern, comparable across checkpoints."""
    generator = torch.Generator().manual_seed(seed)
    corrupted, labels = _mask_batch(
        ids, mask_prob, encoder.config.vocab_size, generator
    )
    if bool((labels == IGNORE).all()):
        return 0.0
    encoder.eval()
    with torch.no_grad():
        logits = encoder.mlm_logits(corrupted)
        loss = nn.functional.cross_entropy(
            logits.view(-1, encoder.config.vocab_size),
            labels.view(-1),
            ignore_index=IGNORE,
        )
    return float(loss)


def new_checkpoint(
    texts: list[str], seed: int = 0, template: EncoderConfig | None = None
) -> Checkpoint:
    """Random-init encoder over a vocabulary built from the given texts.

    A template config supplies every dimension except vocab_size, which is
    always taken from the built vocabulary.
    """
    token_sequences = [preprocess(t) for t in texts]
    if not any(token_sequences):
        raise ValueError("corpus has no usable tokens")
    vocab = build_vocab(token_sequences)
    if template is None:
        config = EncoderConfig(vocab_size=len(vocab))
    else:
        config = dataclasses.replace(template, vocab_size=len(vocab))
    torch.manual_seed(seed)
    return Checkpoint(config, vocab, Encoder(config))


def adapt(
    texts: list[str],
    base: Checkpoint,
    params: AdaptParams = AdaptParams(),
    seed: int = 0,
) -> tuple[Checkpoint, dict]:
    """Masked-LM epochs over the corpus; returns the best held-out scorer."""
    if not texts:
        raise ValueError("adaptation corpus is empty")
    rows = [(text, "TEXT") for text in texts]
    ids = _encode_texts(base, rows)

    order = list(range(len(texts)))
    random.Random(seed).shuffle(order)
    holdout_size = max(1, int(len(order) * params.holdout_fraction))
    heldout_ids = ids[order[:holdout_size]]
    train_ids = ids[order[holdout_size:]]
    if train_ids.shape[0] == 0:
        raise ValueError("adaptation corpus too small to hold out a split")

    encoder = copy.deepcopy(base.encoder)
    mask_prob = params.mask_prob
    best_loss = mlm_heldout_loss(encoder, heldout_ids, mask_prob, seed)
    base_loss = best_loss
    best_state = copy.deepcopy(encoder.state_dict())

    torch.manual_seed(seed)
    generator = torch.Generator().manual_seed(seed + 1)
    optimizer = torch.optim.AdamW(
        encoder.parameters(), lr=params.lr, weight_decay=params.weight_decay
    )
    vocab_size = encoder.config.vocab_size
    for _ in range(params.epochs):
        encoder.train()
        permutation = torch.randperm(train_ids.shape[0], generator=generator)
        for start in range(0, train_ids.shape[0], params.batch_size):
            batch = train_ids[permutation[start : start + params.batch_size]]
            corrupted, labels = _mask_batch(batch, mask_prob, vocab_size, generator)
            if bool((labels == IGNORE).all()):
                continue
            logits = encoder.mlm_logits(corrupted)
            loss = nn.functional.cross_entropy(
                logits.view(-1, vocab_size), labels.view(-1), ignore_index=IGNORE
            )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        epoch_loss = mlm_heldout_loss(encoder, heldout_ids, mask_prob, seed)
        if epoch_loss < best_loss:
            best_loss = epoch_loss
            best_state = copy.deepcopy(encoder.state_dict())

    encoder.load_state_dict(best_state)
    adapted = Checkpoint(base.config, base.vocab, encoder)
    metrics = {"base_loss": base_loss, "adapted_loss": best_loss}
    return adapted, metrics


def finetune(
    rows: list[tuple[str, str, str]],
    checkpoint: Checkpoint,
    head_config: HeadConfig = HeadConfig(),
    params: FinetuneParams = FinetuneParams(),
    seed: int = 0,
) -> Checkpoint:
    """Supervised training of encoder plus head on (text, kind, label) rows."""
    present = {label for _, _, label in rows}
    for label in CLASS_LABELS:
        if label not in present:
            raise ValueError(f"missing class {label} in the labeled rows")
    unknown = present.difference(CLASS_LABELS)
    if unknown:
        raise ValueError(f"unknown label {sorted(unknown)[0]!r}")

    ids = _encode_texts(checkpoint, [(text, kind) for text, kind, _ in rows])
    targets = torch.tensor(
        [CLASS_LABELS.index(label) for _, _, label in rows], dtype=torch.long
    )

    torch.manual_seed(seed)
    encoder = copy.deepcopy(checkpoint.encoder)
    head = ClassifierHead(checkpoint.config.hidden, head_config)
    optimizer = torch.optim.Adam(
        list(encoder.parameters()) + list(head.parameters()), lr=params.lr
    )
    generator = torch.Generator().manual_seed(seed + 1)
    for _ in range(params.epochs):
        encoder.train()
        head.train()
        permutation = torch.randperm(ids.shape[0], generator=generator)
        for start in range(0, ids.shape[0], params.batch_size):
            index = permutation[start : start + params.batch_size]
            batch = ids[index]
            logits = head(encoder.hidden_states(batch), batch)
            loss = nn.functional.cross_entropy(logits, targets[index])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
    return Checkpoint(
        checkpoint.config, checkpoint.vocab, encoder, head, head_config
    )


def classify(
    checkpoint: Checkpoint, rows: list[tuple[str, str]], batch_size: int = 64
) -> list[tuple[str, float]]:
    """(label, confidence) per row, in order; confidence is the softmax peak."""
    if checkpoint.head is None:
        raise ValueError("checkpoint has no classification head")
    ids = _encode_texts(checkpoint, rows)
    checkpoint.encoder.eval()
    checkpoint.head.eval()
    results: list[tuple[str, float]] = []
    with torch.no_grad():
        for start in range(0, ids.shape[0], batch_size):
            batch = ids[start : start + batch_size]
            logits = checkpoint.head(checkpoint.encoder.hidden_states(batch), batch)
            probabilities = torch.softmax(logits, dim=-1)
            confidence, best = probabilities.max(dim=-1)
            results.extend(
                (CLASS_LABELS[int(b)], float(c))
                for b, c in zip(best, confidence)
            )
    return results


def macro_f1(
    checkpoint: Checkpoint, rows: list[tuple[str, str, str]]
) -> float:
    """Unweighted mean F1 over the four classes."""
    predicted = classify(checkpoint, [(text, kind) for text, kind, _ in rows])
    scores = []
    for label in CLASS_LABELS:
        tp = sum(
            1
            for (pred, _), (_, _, truth) in zip(predicted, rows)
            if pred == label and truth == label
        )
        fp = sum(
            1
            for (pred, _), (_, _, truth) in zip(predicted, rows)
            if pred == label and truth != label
        )
        fn = sum(
            1
            for (pred, _), (_, _, truth) in zip(predicted, rows)
            if pred != label and truth == label
        )
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        scores.append(
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
    return sum(scores) / len(scores)
